#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "pointopt/kernels.hpp"

using namespace pointopt;

namespace {

// Independent Bessel K_n oracle: composite Simpson on the integral
// representation K_n(x) = int_0^inf exp(-x cosh t) cosh(n t) dt, cut where
// the integrand has decayed below 1e-320.  The library uses a power series /
// Chebyshev / asymptotic split, so nothing here is shared with it.
double k_oracle(int n, double x) {
  const double tmax = std::acosh(745.0 / x);
  const int steps = 400000;  // even
  const double h = tmax / steps;
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = i * h;
    const double f = std::exp(-x * std::cosh(t)) * std::cosh(n * t);
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * f;
  }
  return sum * h / 3.0;
}

// Eigenfunction-series oracle for the negative-energy loop kernel, with the
// 1/m^2 part of the tail resummed through sum cos(m d)/m^2 = pi^2/6 - pi d/2
// + d^2/4 so the truncated remainder decays like 1/M^3.
double loop_series_oracle(double kappa, double d) {
  const double k2 = kappa * kappa;
  const double closed = kPi * kPi / 6.0 - kPi * d / 2.0 + d * d / 4.0;
  double rest = 0.0;
  const int m_max = 20000;
  for (int m = m_max; m >= 1; --m)
    rest += std::cos(m * d) / (static_cast<double>(m) * m * (m * m + k2));
  return 1.0 / (2.0 * kPi * k2) + (closed - k2 * rest) / kPi;
}

}  // namespace

TEST_CASE("bessel k0/k1 match the integral oracle across the working range") {
  for (int i = 0; i < 30; ++i) {
    const double x = 1e-6 * std::pow(700.0 / 1e-6, i / 29.0);
    CHECK(bessel_k0(x) == doctest::Approx(k_oracle(0, x)).epsilon(1e-10));
    CHECK(bessel_k1(x) == doctest::Approx(k_oracle(1, x)).epsilon(1e-10));
  }
}

TEST_CASE("bessel k0 frozen values and limits") {
  CHECK(bessel_k0(1.0) == doctest::Approx(0.42102443824070834).epsilon(1e-10));
  CHECK(bessel_k0(10.0) == doctest::Approx(1.778006231616765e-5).epsilon(1e-9));
  // small-argument divergence -ln(x/2) - gamma
  for (double x : {1e-6, 1e-8}) {
    const double lead = -std::log(x / 2.0) - kEulerGamma;
    CHECK(bessel_k0(x) / lead == doctest::Approx(1.0).epsilon(1e-10));
  }
  // asymptotic cross-check, leading terms e^{-x} sqrt(pi/2x) (1 - 1/8x + 9/128x^2)
  for (double x : {30.0, 100.0, 400.0}) {
    const double as = std::exp(-x) * std::sqrt(kPi / (2.0 * x)) *
                      (1.0 - 1.0 / (8.0 * x) + 9.0 / (128.0 * x * x));
    CHECK(bessel_k0(x) == doctest::Approx(as).epsilon(1e-4));
  }
  // monotone decreasing
  double prev = bessel_k0(1e-6);
  for (int i = 1; i < 50; ++i) {
    const double cur = bessel_k0(1e-6 * std::pow(7e8, i / 49.0));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("bessel underflow flag and domain errors") {
  bool uf = false;
  CHECK(bessel_k0(800.0, &uf) == 0.0);
  CHECK(uf);
  uf = true;
  CHECK(bessel_k0(1.0, &uf) > 0.0);
  CHECK(!uf);
  CHECK_THROWS_AS(bessel_k0(0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k0(-1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k1(0.0), std::domain_error);
}

TEST_CASE("bessel k1 equals -dK0/dx") {
  for (double x : {0.5, 2.0, 5.0, 20.0}) {
    const double h = 1e-5 * x;
    const double fd = (bessel_k0(x - h) - bessel_k0(x + h)) / (2.0 * h);
    CHECK(bessel_k1(x) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("green_loop_negative closed-form anchors") {
  CHECK(green_loop_negative(1.0, kPi).value ==
        doctest::Approx(1.0 / (2.0 * std::sinh(kPi))).epsilon(1e-13));
  CHECK(green_loop_negative(1.0, 0.0).value ==
        doctest::Approx(std::cosh(kPi) / (2.0 * std::sinh(kPi))).epsilon(1e-13));
}

TEST_CASE("green_loop_negative matches the eigenfunction series") {
  for (double kappa : {0.3, 0.5, 1.0, 2.5}) {
    for (double d : {0.1, 1.0, kPi / 2.0, kPi, 4.0, 2.0 * kPi - 0.2}) {
      const double ref = loop_series_oracle(kappa, d);
      CHECK(green_loop_negative(kappa, d).value ==
            doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("green_loop_negative symmetry, positivity, stability") {
  for (double kappa : {0.4, 1.7, 30.0}) {
    for (double d : {0.3, 1.1, 2.9}) {
      const double a = green_loop_negative(kappa, d).value;
      const double b = green_loop_negative(kappa, 2.0 * kPi - d).value;
      CHECK(a == doctest::Approx(b).epsilon(1e-13));
      CHECK(a > 0.0);
    }
  }
  // deep-binding regime: no overflow, correct logarithmic decay
  const double g = green_loop_negative(300.0, 1.0).value;
  CHECK(g > 0.0);
  CHECK(std::isfinite(g));
  CHECK(std::log(g) == doctest::Approx(-300.0 - std::log(600.0)).epsilon(1e-6));
}

TEST_CASE("green_loop_negative is strictly convex on (0, pi)") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.01, kPi - 0.01);
  for (double kappa : {0.3, 0.8, 1.5, 4.0}) {
    for (int trial = 0; trial < 50; ++trial) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-3) continue;
      const double t = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      const double mid = green_loop_negative(kappa, t * a + (1 - t) * b).value;
      const double chord = t * green_loop_negative(kappa, a).value +
                           (1 - t) * green_loop_negative(kappa, b).value;
      CHECK(mid < chord);
    }
  }
}

TEST_CASE("green_loop_negative analytic derivative") {
  for (double kappa : {0.5, 2.0}) {
    for (double d : {0.4, 1.5, 3.0, 4.5, 5.9}) {
      const double h = 1e-6;
      const double fd = (green_loop_negative(kappa, d + h).value -
                         green_loop_negative(kappa, d - h).value) /
                        (2.0 * h);
      CHECK(green_loop_negative(kappa, d).derivative ==
            doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("green_loop_negative domain errors") {
  CHECK_THROWS_AS(green_loop_negative(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(green_loop_negative(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(green_loop_negative(1.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(green_loop_negative(1.0, 2.0 * kPi + 0.1), std::domain_error);
}

TEST_CASE("green_loop_positive direct substitutions") {
  // -cos(k (pi - d')) / (2 k sin(pi k))
  CHECK(green_loop_positive(0.5, kPi / 2.0).value ==
        doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-13));
  // midpoint: cos term is 1, so the value is -1/(2 k sin(pi/4)) = -2 sqrt(2)
  CHECK(green_loop_positive(0.25, kPi).value ==
        doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-13));
  CHECK(green_loop_positive(0.5, 0.0).value == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("green_loop_positive pole guard") {
  CHECK_THROWS_AS(green_loop_positive(1.0, 0.5), PoleError);
  CHECK_THROWS_AS(green_loop_positive(2.0 + 5e-9, 0.5), PoleError);
  CHECK_THROWS_AS(green_loop_positive(3.0 - 5e-9, 0.5), PoleError);
  CHECK_NOTHROW(green_loop_positive(1.0 + 1e-7, 0.5));
}

TEST_CASE("green_loop_positive times sin(pi k) is continuous across poles") {
  for (double d : {0.7, 2.0}) {
    for (double k0 : {1.0, 2.0}) {
      const double lo =
          green_loop_positive(k0 - 1e-5, d).value * std::sin(kPi * (k0 - 1e-5));
      const double hi =
          green_loop_positive(k0 + 1e-5, d).value * std::sin(kPi * (k0 + 1e-5));
      CHECK(lo == doctest::Approx(hi).epsilon(1e-4));
    }
  }
}

TEST_CASE("green_free values, monotonicity, convexity") {
  CHECK(green_free(3, 1.0, 1.0).value ==
        doctest::Approx(std::exp(-1.0) / (4.0 * kPi)).epsilon(1e-13));
  CHECK(green_free(3, 2.0, 0.5).value ==
        doctest::Approx(std::exp(-1.0) / (2.0 * kPi)).epsilon(1e-13));
  CHECK(green_free(2, 1.0, 1.0).value ==
        doctest::Approx(bessel_k0(1.0) / (2.0 * kPi)).epsilon(1e-12));

  for (int nu : {2, 3}) {
    for (double kappa : {0.5, 1.5}) {
      double prev = green_free(nu, kappa, 0.05).value;
      double prev_diff = 0.0;
      bool first = true;
      for (int i = 1; i <= 40; ++i) {
        const double ell = 0.05 + i * (2.0 - 0.05) / 40.0;
        const double cur = green_free(nu, kappa, ell).value;
        CHECK(cur < prev);
        const double diff = cur - prev;
        if (!first) CHECK(diff > prev_diff);  // increasing differences = convex
        prev_diff = diff;
        prev = cur;
        first = false;
      }
    }
  }
}

TEST_CASE("green_free analytic derivative and domain errors") {
  for (int nu : {2, 3}) {
    for (double ell : {0.3, 1.0, 1.8}) {
      const double h = 1e-6;
      const double fd =
          (green_free(nu, 1.2, ell + h).value - green_free(nu, 1.2, ell - h).value) /
          (2.0 * h);
      CHECK(green_free(nu, 1.2, ell).derivative == doctest::Approx(fd).epsilon(1e-7));
    }
  }
  CHECK_THROWS_AS(green_free(3, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(green_free(2, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(green_free(4, 1.0, 1.0), std::domain_error);
}

TEST_CASE("xi_regularized values and identities") {
  CHECK(xi_regularized(3, 4.0 * kPi) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(xi_regularized(2, 2.0 * std::exp(-kEulerGamma)) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(xi_regularized(2, 2.0) ==
        doctest::Approx(-kEulerGamma / (2.0 * kPi)).epsilon(1e-13));
  // nu=3 linear in kappa
  CHECK(xi_regularized(3, 5.0) ==
        doctest::Approx(5.0 * xi_regularized(3, 1.0)).epsilon(1e-14));
  // nu=2 log difference identity
  const double lhs = xi_regularized(2, 3.0) - xi_regularized(2, 0.7);
  CHECK(lhs == doctest::Approx(-std::log(3.0 / 0.7) / (2.0 * kPi)).epsilon(1e-13));
  CHECK_THROWS_AS(xi_regularized(2, 0.0), std::domain_error);
}

TEST_CASE("complete monotonicity certificate") {
  std::vector<double> pts;
  for (int i = 0; i < 64; ++i) pts.push_back(4.0 * std::pow(1e-3, 1.0 - i / 63.0));

  // nu=3 kernel composed with sqrt: completely monotonic
  auto yukawa = [](double s) {
    const double r = std::sqrt(s);
    return std::exp(-r) / (4.0 * kPi * r);
  };
  auto rep = complete_monotonicity_check(yukawa, 6, pts);
  CHECK(rep.pass);
  CHECK(rep.worst_violation < 1e-12);

  // linear f = s: positive (order 0 clean) but increasing, so the order-1
  // sign flips; its second divided differences vanish identically.
  auto lin = complete_monotonicity_check([](double s) { return s; }, 2, pts);
  CHECK(!lin.pass);
  REQUIRE(lin.per_order.size() == 3);
  CHECK(lin.per_order[0] < 1e-12);
  CHECK(lin.per_order[1] > 1e-12);
  CHECK(lin.per_order[2] < 1e-12);  // second divided differences vanish

  auto osc = complete_monotonicity_check([](double s) { return std::sin(10.0 * s); },
                                         3, pts);
  CHECK(!osc.pass);
  CHECK(osc.worst_violation > 0.1);

  CHECK_THROWS_AS(
      complete_monotonicity_check(yukawa, 70, pts), std::invalid_argument);
  std::vector<double> few{1.0, 2.0};
  CHECK_THROWS_AS(complete_monotonicity_check(yukawa, 4, few), std::invalid_argument);
}
