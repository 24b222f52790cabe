#pragma once

#include <stdexcept>
#include <string>

#include "pointopt/configurations.hpp"
#include "pointopt/kernels.hpp"
#include "pointopt/linalg.hpp"

namespace pointopt {

/// Krein secular matrix Gamma at a fixed spectral parameter.
/// 1-D (loop): entries -delta_{jj'}/alpha - G(d_{jj'}); the sign convention
/// is anchored by requiring the N=1 root alpha = -2 kappa tanh(pi kappa).
/// nu=2,3: (alpha - xi) delta_{jj'} - (1 - delta_{jj'}) G(ell_{jj'}).
struct KreinMatrix {
  Matrix entries;
  Setting setting = Setting::Loop;
  double alpha = 0.0;
  SpectralParam param{ParamKind::NegativeEnergy, 1.0};
};

struct SpectralResult {
  double lambda1 = 0.0;
  SpectralParam param_at_root{ParamKind::NegativeEnergy, 0.0};
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int evaluations = 0;
  std::string method;
};

struct Monodromy {
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
  double energy = 0.0;
  double discriminant = 2.0;  // trace
  double det() const { return m00 * m11 - m01 * m10; }
};

struct NoBoundStateError : std::runtime_error {
  NoBoundStateError(double lo, double hi)
      : std::runtime_error("no bound state found in the scanned kappa range"),
        kappa_min(lo),
        kappa_max(hi) {}
  double kappa_min, kappa_max;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

KreinMatrix krein_matrix(Setting setting, double alpha, const Configuration& config,
                         SpectralParam param);

/// Smallest eigenvalue of Gamma at the given parameter (helper over
/// krein_matrix + min_eigenvalue_sym).
double krein_min_eigenvalue(Setting setting, double alpha, const Configuration& config,
                            SpectralParam param);

/// Ground state on the negative half-axis: locates the largest kappa at
/// which the smallest eigenvalue branch of Gamma(i kappa) vanishes.
/// Throws NoBoundStateError when no sign change exists (nu=3 near the
/// critical coupling).
SpectralResult ground_state_negative(Setting setting, double alpha,
                                     const Configuration& config);

/// Repulsive loop ground state: smallest k > 0 with monodromy discriminant
/// equal to 2; the Krein determinant validates the bracket when no
/// sin(pi k) pole intervenes.
SpectralResult ground_state_positive_loop(double alpha, const Configuration& config);

/// Determinant-only route to the repulsive loop ground state (independent
/// cross-check of ground_state_positive_loop).
SpectralResult ground_state_positive_krein(double alpha, const Configuration& config);

/// Transfer-matrix route to the attractive loop ground state (independent
/// cross-check of ground_state_negative on the loop).
SpectralResult ground_state_negative_monodromy(double alpha, const Configuration& config);

/// Ordered product of interval propagators and delta-jump factors around the
/// loop; an energy is an eigenvalue iff the discriminant equals 2.
Monodromy monodromy_discriminant(double alpha, const Configuration& config, double energy);

/// Largest eigenvalue of the kappa -> 0 off-diagonal matrix C_{jj'} =
/// 1/(4 pi ell_{jj'}); a nu=3 bound state exists iff alpha < alpha_crit.
double alpha_crit(const Configuration& config, Setting setting);

/// Dirichlet ground state on the loop: (pi / largest cyclic gap)^2.
double dirichlet_ground(const Configuration& config);

/// Dispatch: attractive vs repulsive solver as dictated by setting and alpha.
SpectralResult solve_ground(Setting setting, double alpha, const Configuration& config);

std::string spectral_result_to_json(Setting setting, double alpha,
                                    const Configuration& config,
                                    const SpectralResult& r, int indent = -1);

}  // namespace pointopt
