#include "pointopt/kernels.hpp"

#include <array>
#include <cmath>
#include <mutex>

namespace pointopt {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

// ---------------------------------------------------------------------------
// Modified Bessel K0 / K1.
//
// Range split: ascending series with the log term for x <= 2, a Chebyshev
// expansion of exp(x) sqrt(x) K_n(x) on [2, 14] (coefficients generated once
// from the integral representation K_n(x) = int_0^inf exp(-x cosh t)
// cosh(n t) dt), and the exponentially scaled asymptotic series for x > 14
// where its smallest term is below 1e-12.
// ---------------------------------------------------------------------------

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
  std::array<double, 24> x{};
  std::array<double, 24> w{};
};

GaussRule make_gauss_rule() {
  GaussRule r;
  const int n = 24;
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      const double dp = n * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
    }
    const double dp = n * (t * p0 - p1) / (t * t - 1.0);
    r.x[i] = t;
    r.w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return r;
}

// exp(x) * int_0^T exp(-x cosh t) cosh(order t) dt, panels of 24-pt Gauss.
// The shift by exp(x) keeps the scaled value O(1) for large x.
double scaled_k_integral(double x, int order, const GaussRule& g) {
  const double t_max = 7.5;  // x >= 2 => x (cosh 7.5 - 1) > 1700, fully decayed
  const int panels = 15;
  const double h = t_max / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = p * h, b = a + h;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < 24; ++i) {
      const double t = mid + half * g.x[i];
      const double f = std::exp(-x * (std::cosh(t) - 1.0)) *
                       (order == 0 ? 1.0 : std::cosh(order * t));
      sum += half * g.w[i] * f;
    }
  }
  return sum;
}

constexpr int kChebN = 96;
constexpr double kChebLo = 2.0, kChebHi = 14.0;

struct ChebTables {
  std::array<double, kChebN> k0{};
  std::array<double, kChebN> k1{};
};

// Chebyshev coefficients of f_n(x) = exp(x) sqrt(x) K_n(x) on [kChebLo, kChebHi].
const ChebTables& cheb_tables() {
  static ChebTables tables;
  static std::once_flag once;
  std::call_once(once, [] {
    const GaussRule g = make_gauss_rule();
    std::array<double, kChebN> f0{}, f1{};
    for (int j = 0; j < kChebN; ++j) {
      const double z = std::cos(kPi * (j + 0.5) / kChebN);
      const double x = 0.5 * (kChebHi + kChebLo) + 0.5 * (kChebHi - kChebLo) * z;
      const double s = std::sqrt(x);
      f0[j] = s * scaled_k_integral(x, 0, g);
      f1[j] = s * scaled_k_integral(x, 1, g);
    }
    for (int k = 0; k < kChebN; ++k) {
      double c0 = 0.0, c1 = 0.0;
      for (int j = 0; j < kChebN; ++j) {
        const double c = std::cos(kPi * k * (j + 0.5) / kChebN);
        c0 += f0[j] * c;
        c1 += f1[j] * c;
      }
      tables.k0[k] = 2.0 * c0 / kChebN;
      tables.k1[k] = 2.0 * c1 / kChebN;
    }
  });
  return tables;
}

double cheb_eval(const std::array<double, kChebN>& c, double x) {
  const double z = (2.0 * x - (kChebHi + kChebLo)) / (kChebHi - kChebLo);
  double b0 = 0.0, b1 = 0.0;
  for (int k = kChebN - 1; k >= 1; --k) {
    const double b2 = b1;
    b1 = b0;
    b0 = 2.0 * z * b1 - b2 + c[k];
  }
  return z * b0 - b1 + 0.5 * c[0];
}

// Ascending series, x <= 2.  K0 = -(ln(x/2)+gamma) I0 + sum_{k>=1} H_k u^k/(k!)^2,
// K1 = 1/x + ln(x/2) I1 - (x/4) sum_k (H_k + H_{k+1} - 2 gamma ... ) standard form.
double k0_series(double x) {
  const double u = 0.25 * x * x;
  const double lg = std::log(0.5 * x) + kEulerGamma;
  double term = 1.0;  // u^k / (k!)^2
  double i0 = 1.0, s = 0.0, hk = 0.0;
  for (int k = 1; k <= 40; ++k) {
    term *= u / (static_cast<double>(k) * k);
    hk += 1.0 / k;
    i0 += term;
    s += term * hk;
    if (term < 1e-18 * i0) break;
  }
  return -lg * i0 + s;
}

double k1_series(double x) {
  const double u = 0.25 * x * x;
  // I1(x) = (x/2) sum u^k / (k! (k+1)!)
  double term = 1.0;
  double i1s = 1.0;
  for (int k = 1; k <= 40; ++k) {
    term *= u / (static_cast<double>(k) * (k + 1));
    i1s += term;
    if (term < 1e-18 * i1s) break;
  }
  const double i1 = 0.5 * x * i1s;
  // sum_k [psi(k+1) + psi(k+2)] u^k / (k! (k+1)!), psi(n+1) = -gamma + H_n
  double psum = 0.0;
  term = 1.0;
  double hk = 0.0, hk1 = 1.0;
  for (int k = 0; k <= 40; ++k) {
    if (k > 0) {
      term *= u / (static_cast<double>(k) * (k + 1));
      hk += 1.0 / k;
      hk1 += 1.0 / (k + 1);
    }
    const double add = term * (-2.0 * kEulerGamma + hk + hk1);
    psum += add;
    if (k > 3 && std::fabs(add) < 1e-18 * std::fabs(psum)) break;
  }
  return 1.0 / x + std::log(0.5 * x) * i1 - 0.25 * x * psum;
}

// Asymptotic series for x > 14; returns exp(x) sqrt(x) K_n(x).
double k_asymptotic_scaled(double x, int order) {
  const double mu = 4.0 * order * order;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 60; ++k) {
    const double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
    const double next = term * num / (8.0 * k * x);
    if (std::fabs(next) >= std::fabs(term)) break;  // past the smallest term
    term = next;
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return std::sqrt(kPi / 2.0) * sum;
}

double bessel_k(int order, double x, bool* underflow) {
  if (underflow) *underflow = false;
  if (!finite_positive(x)) throw std::domain_error("bessel_k: x must be positive");
  double v;
  if (x <= kChebLo) {
    v = order == 0 ? k0_series(x) : k1_series(x);
  } else if (x <= kChebHi) {
    const ChebTables& t = cheb_tables();
    v = cheb_eval(order == 0 ? t.k0 : t.k1, x) * std::exp(-x) / std::sqrt(x);
  } else {
    v = k_asymptotic_scaled(x, order) * std::exp(-x) / std::sqrt(x);
  }
  if (v == 0.0 && underflow) *underflow = true;
  return v;
}

}  // namespace

double bessel_k0(double x, bool* underflow) { return bessel_k(0, x, underflow); }
double bessel_k1(double x, bool* underflow) { return bessel_k(1, x, underflow); }

KernelValue green_loop_negative(double kappa, double d) {
  if (!finite_positive(kappa))
    throw std::domain_error("green_loop_negative: kappa must be positive");
  if (!(d >= 0.0 && d <= 2.0 * kPi))
    throw std::domain_error("green_loop_negative: distance outside [0, 2pi]");
  const double dp = std::min(d, 2.0 * kPi - d);
  // cosh(kappa (pi - d')) / (2 kappa sinh(pi kappa)), written in decaying
  // exponentials so large kappa does not overflow.
  const double denom = 2.0 * kappa * (-std::expm1(-2.0 * kPi * kappa));
  const double ea = std::exp(-kappa * dp);
  const double eb = std::exp(-kappa * (2.0 * kPi - dp));
  KernelValue out;
  out.value = (ea + eb) / denom;
  double ddp = -kappa * (ea - eb) / denom;  // d/d(dp)
  out.derivative = (d > kPi) ? -ddp : ddp;
  return out;
}

KernelValue green_loop_positive(double k, double d) {
  if (!finite_positive(k))
    throw std::domain_error("green_loop_positive: k must be positive");
  if (!(d >= 0.0 && d <= 2.0 * kPi))
    throw std::domain_error("green_loop_positive: distance outside [0, 2pi]");
  const double nearest = std::round(k);
  if (nearest >= 1.0 && std::fabs(k - nearest) <= kPoleGuard) throw PoleError(k);
  const double dp = std::min(d, 2.0 * kPi - d);
  const double s = 2.0 * k * std::sin(kPi * k);
  KernelValue out;
  out.value = -std::cos(k * (kPi - dp)) / s;
  double ddp = -k * std::sin(k * (kPi - dp)) / s;
  out.derivative = (d > kPi) ? -ddp : ddp;
  return out;
}

KernelValue green_free(int nu, double kappa, double ell) {
  if (nu != 2 && nu != 3) throw std::domain_error("green_free: nu must be 2 or 3");
  if (!finite_positive(kappa))
    throw std::domain_error("green_free: kappa must be positive");
  if (!(std::isfinite(ell) && ell > 0.0))
    throw std::domain_error("green_free: distance must be positive");
  KernelValue out;
  if (nu == 2) {
    out.value = bessel_k0(kappa * ell) / (2.0 * kPi);
    out.derivative = -kappa * bessel_k1(kappa * ell) / (2.0 * kPi);
  } else {
    const double e = std::exp(-kappa * ell);
    out.value = e / (4.0 * kPi * ell);
    out.derivative = -e * (kappa * ell + 1.0) / (4.0 * kPi * ell * ell);
  }
  return out;
}

double xi_regularized(int nu, double kappa) {
  if (nu != 2 && nu != 3)
    throw std::domain_error("xi_regularized: nu must be 2 or 3");
  if (!finite_positive(kappa))
    throw std::domain_error("xi_regularized: kappa must be positive");
  if (nu == 2) return -(std::log(0.5 * kappa) + kEulerGamma) / (2.0 * kPi);
  return -kappa / (4.0 * kPi);
}

MonotonicityReport complete_monotonicity_check(
    const std::function<double(double)>& f, int order,
    const std::vector<double>& pts, double tol) {
  if (order < 1 || order > 8)
    throw std::invalid_argument("complete_monotonicity_check: order must be in [1,8]");
  const int n = static_cast<int>(pts.size());
  if (n < order + 1)
    throw std::invalid_argument("complete_monotonicity_check: need at least order+1 points");
  for (int i = 0; i < n; ++i) {
    if (!(pts[i] > 0.0) || (i > 0 && !(pts[i] > pts[i - 1])))
      throw std::invalid_argument(
          "complete_monotonicity_check: points must be strictly increasing and positive");
  }

  // dd[i] holds the divided difference f[x_i, ..., x_{i+level}].
  std::vector<double> dd(n);
  for (int i = 0; i < n; ++i) dd[i] = f(pts[i]);

  MonotonicityReport rep;
  rep.per_order.assign(order + 1, 0.0);
  for (int level = 0; level <= order; ++level) {
    if (level > 0) {
      for (int i = 0; i + level < n; ++i)
        dd[i] = (dd[i + 1] - dd[i]) / (pts[i + level] - pts[i]);
    }
    const double sign = (level % 2 == 0) ? 1.0 : -1.0;
    double worst = 0.0;
    for (int i = 0; i + level < n; ++i) {
      const double span = level > 0 ? pts[i + level] - pts[i] : 1.0;
      const double normalized = dd[i] * std::pow(span, level);
      worst = std::max(worst, -sign * normalized);
    }
    rep.per_order[level] = worst;
    rep.worst_violation = std::max(rep.worst_violation, worst);
  }
  rep.pass = rep.worst_violation <= tol;
  return rep;
}

}  // namespace pointopt
