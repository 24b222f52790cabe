#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace pointopt {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Guard band around integer k where the positive-energy loop kernel has
/// simple poles (sin pi k = 0); the secular solvers keep brackets away
/// from these points.
inline constexpr double kPoleGuard = 1e-8;

enum class ParamKind { NegativeEnergy, PositiveEnergy };

/// Spectral parameter in unit-radius / perimeter-2pi scaling:
/// NegativeEnergy stores kappa > 0 with E = -kappa^2,
/// PositiveEnergy stores k > 0 with E = +k^2.
struct SpectralParam {
  ParamKind kind;
  double value;

  double energy() const {
    return kind == ParamKind::NegativeEnergy ? -value * value : value * value;
  }
  static SpectralParam kappa(double v) { return {ParamKind::NegativeEnergy, v}; }
  static SpectralParam k(double v) { return {ParamKind::PositiveEnergy, v}; }
};

struct KernelValue {
  double value = 0.0;
  double derivative = 0.0;  // d(value)/d(distance)
};

struct PoleError : std::runtime_error {
  explicit PoleError(double k)
      : std::runtime_error("spectral parameter within pole guard of an integer"),
        k_value(k) {}
  double k_value;
};

/// Loop resolvent kernel at energy -kappa^2, geodesic distance d in [0, 2pi].
/// d = 0 gives the finite diagonal value cosh(pi kappa) / (2 kappa sinh(pi kappa)).
KernelValue green_loop_negative(double kappa, double d);

/// Loop resolvent kernel at energy +k^2; throws PoleError within kPoleGuard
/// of a positive integer k.
KernelValue green_loop_positive(double k, double d);

/// Free resolvent kernel at chordal distance ell > 0:
/// nu=2: K0(kappa ell) / (2 pi), nu=3: exp(-kappa ell) / (4 pi ell).
KernelValue green_free(int nu, double kappa, double ell);

/// Regularized diagonal value of the free resolvent at the interaction site.
double xi_regularized(int nu, double kappa);

/// Modified Bessel function of the second kind, order zero. Relative error
/// <= 1e-10 on [1e-6, 700]; sets *underflow when the result flushes to zero.
double bessel_k0(double x, bool* underflow = nullptr);

/// Order one; needed for the analytic distance derivative of the nu=2 kernel.
double bessel_k1(double x, bool* underflow = nullptr);

struct MonotonicityReport {
  bool pass = false;
  double worst_violation = 0.0;
  std::vector<double> per_order;  // worst violation at each divided-difference order
};

/// Finite-order complete-monotonicity certificate: checks the alternating
/// sign (-1)^n of n-th divided differences on sliding windows of the sample
/// points, n = 0..order, scale-normalized by the window span.
MonotonicityReport complete_monotonicity_check(
    const std::function<double(double)>& f, int order,
    const std::vector<double>& sample_points, double tol = 1e-12);

}  // namespace pointopt
