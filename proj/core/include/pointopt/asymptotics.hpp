#pragma once

#include <vector>

#include "pointopt/configurations.hpp"

namespace pointopt {

/// Bernoulli polynomial B2 on [0, 1).
double bernoulli_b2(double x);

struct WeakExpansion {
  double c1 = 0.0;        // N / (2 pi), configuration independent
  double c2_series = 0.0;
  double c2_closed = 0.0;
  int terms_used = 0;
};

/// Second-order coefficient by direct eigenfunction summation:
/// -(1/2 pi^2) sum_{m=1}^{m_max} |sum_j exp(i m y_j)|^2 / m^2.
double c2_series(const Configuration& config, int m_max);

/// Tail bound N^2 / (2 pi^2 m_max) of the truncated series.
double c2_series_tail_bound(const Configuration& config, int m_max);

/// Closed form via the Bernoulli polynomial:
/// -(1/2) sum_{j,j'} B2(((y_j - y_j') mod 2 pi) / 2 pi).
double c2_closed(const Configuration& config);

WeakExpansion weak_expansion(const Configuration& config, int m_max = 200000);

struct ExpansionRow {
  double alpha = 0.0;
  double lambda1 = 0.0;
  double model = 0.0;
  double residual = 0.0;
};

struct WeakCheckReport {
  double c1 = 0.0;
  double c2 = 0.0;
  double c1_estimate = 0.0;
  double exponent = 0.0;  // fitted log-log slope of |lambda1 - c1 a - c2 a^2|
  double prefactor = 0.0;
  std::vector<ExpansionRow> rows;
};

/// Solves the repulsive loop on the alpha grid (all in (0, 0.2]) and fits the
/// cubic remainder of the weak-coupling expansion.
WeakCheckReport weak_expansion_check(const Configuration& config,
                                     const std::vector<double>& alphas);

struct StrongCheckReport {
  bool monotone = false;
  bool below_dirichlet = false;
  double dirichlet = 0.0;
  double c_estimate = 0.0;  // coefficient of the alpha^{-1} correction
  std::vector<ExpansionRow> rows;
};

/// Verifies the Dirichlet limit along a grid of large alphas (>= 10) and
/// extrapolates the 1/alpha correction coefficient.
StrongCheckReport strong_limit_check(const Configuration& config,
                                     const std::vector<double>& alphas);

}  // namespace pointopt
