#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pointopt/configurations.hpp"
#include "pointopt/spectral.hpp"

namespace pointopt {

struct OptimizationReport {
  Configuration best_config;
  double best_value = 0.0;
  int starts = 0;
  int converged_starts = 0;
  std::vector<double> per_start_values;
  bool matched_canonical = false;
  double tolerance_used = 0.0;
};

/// Pair interaction energy sum_{j != j'} exp(-kappa ell) / (4 pi ell) over
/// ordered pairs of a sphere configuration.
double surface_energy(const Configuration& config, double kappa);

/// Multistart Nelder-Mead over gauge-fixed coordinates, each inner
/// evaluation a full secular solve.  Reports whether the best maximizer is
/// congruent with the canonical / sharp configuration.
OptimizationReport maximize_lambda1(Setting setting, double alpha, int n, int starts,
                                    std::uint64_t seed, double congruence_tol = 1e-5);

/// Minimizes the fixed-kappa sphere surface energy by projected gradient
/// descent with analytic kernel derivatives, plus simplex polishing.
OptimizationReport minimize_surface_energy(double kappa, int n, int starts,
                                           std::uint64_t seed,
                                           double congruence_tol = 1e-5);

struct TrialSample {
  int index = 0;
  double lambda1 = 0.0;
  double margin = 0.0;  // lambda1(canonical) - lambda1(Y)
  bool congruent = false;
  bool bound_state = true;
};

struct VerifyReport {
  Setting setting = Setting::Loop;
  double alpha = 0.0;
  int n = 0;
  int trials = 0;
  int violations = 0;
  int no_bound_state = 0;
  double min_gap = 0.0;  // minimal margin over non-congruent samples
  double lambda_canonical = 0.0;
  std::vector<TrialSample> samples;
};

/// Random-configuration campaign against lambda1(Y) <= lambda1(canonical).
VerifyReport verify_theorem(Setting setting, double alpha, int n, int trials,
                            std::uint64_t seed);

struct ConjectureRow {
  double alpha = 0.0;
  int violations = 0;
  double min_gap = 0.0;
};

struct ConjectureReport {
  int n = 0;
  int trials = 0;
  std::vector<ConjectureRow> rows;
};

/// Repulsive-loop sweep of verify_theorem over an alpha grid.
ConjectureReport conjecture_scan(int n, const std::vector<double>& alphas, int trials,
                                 std::uint64_t seed);

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead minimization; stops when the simplex diameter falls below
/// diameter_tol or after max_eval evaluations.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, double scale,
                          double diameter_tol, int max_eval);

/// Worker count: POINTOPT_WORKERS, else available hardware parallelism.
int worker_count();

/// Runs fn(i) for i in [0, n) across workers; results land at fixed indices,
/// so reports are identical for any worker count.
void parallel_for_indexed(int n, const std::function<void(int)>& fn);

}  // namespace pointopt
