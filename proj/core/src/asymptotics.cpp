#include "pointopt/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "pointopt/kernels.hpp"
#include "pointopt/spectral.hpp"

namespace pointopt {

double bernoulli_b2(double x) { return x * x - x + 1.0 / 6.0; }

namespace {

void require_loop(const Configuration& c, const char* who) {
  if (c.setting() != Setting::Loop)
    throw std::invalid_argument(std::string(who) + ": loop setting required");
}

double reduce_mod_2pi(double x) {
  double r = std::fmod(x, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  return r;
}

}  // namespace

double c2_series(const Configuration& config, int m_max) {
  require_loop(config, "c2_series");
  if (m_max < 100) throw std::invalid_argument("c2_series: m_max must be >= 100");
  const std::vector<double>& y = config.angles();
  const std::size_t n = y.size();
  // Incremental rotations z_j *= exp(i y_j); renormalize occasionally to
  // keep the magnitudes from drifting over ~1e8 terms.
  std::vector<std::complex<double>> step(n), z(n);
  for (std::size_t j = 0; j < n; ++j) {
    step[j] = std::polar(1.0, y[j]);
    z[j] = step[j];
  }
  double sum = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) s += z[j];
    sum += std::norm(s) / (static_cast<double>(m) * m);
    for (std::size_t j = 0; j < n; ++j) z[j] *= step[j];
    if ((m & 0xfff) == 0)
      for (std::size_t j = 0; j < n; ++j) z[j] /= std::abs(z[j]);
  }
  return -sum / (2.0 * kPi * kPi);
}

double c2_series_tail_bound(const Configuration& config, int m_max) {
  const double n = static_cast<double>(config.size());
  return n * n / (2.0 * kPi * kPi * m_max);
}

double c2_closed(const Configuration& config) {
  require_loop(config, "c2_closed");
  const std::vector<double>& y = config.angles();
  double sum = 0.0;
  for (double yj : y)
    for (double yk : y) sum += bernoulli_b2(reduce_mod_2pi(yj - yk) / (2.0 * kPi));
  return -0.5 * sum;
}

WeakExpansion weak_expansion(const Configuration& config, int m_max) {
  WeakExpansion w;
  w.c1 = static_cast<double>(config.size()) / (2.0 * kPi);
  w.c2_series = c2_series(config, m_max);
  w.c2_closed = c2_closed(config);
  w.terms_used = m_max;
  return w;
}

WeakCheckReport weak_expansion_check(const Configuration& config,
                                     const std::vector<double>& alphas) {
  require_loop(config, "weak_expansion_check");
  if (alphas.size() < 4)
    throw std::invalid_argument("weak_expansion_check: need at least 4 grid points");
  for (double a : alphas)
    if (!(a > 0.0 && a <= 0.2))
      throw std::invalid_argument("weak_expansion_check: alphas must lie in (0, 0.2]");

  WeakCheckReport rep;
  rep.c1 = static_cast<double>(config.size()) / (2.0 * kPi);
  rep.c2 = c2_closed(config);
  for (double a : alphas) {
    const SpectralResult r = ground_state_positive_loop(a, config);
    ExpansionRow row;
    row.alpha = a;
    row.lambda1 = r.lambda1;
    row.model = rep.c1 * a + rep.c2 * a * a;
    row.residual = r.lambda1 - row.model;
    rep.rows.push_back(row);
  }

  // c1 from lambda/alpha at the two smallest alphas, Richardson-extrapolated
  // to kill the linear-in-alpha c2 term.
  std::vector<double> sorted = alphas;
  std::sort(sorted.begin(), sorted.end());
  const double a0 = sorted[0], a1 = sorted[1];
  auto lam = [&](double a) {
    for (const ExpansionRow& r : rep.rows)
      if (r.alpha == a) return r.lambda1;
    return 0.0;
  };
  const double r0 = lam(a0) / a0, r1 = lam(a1) / a1;
  rep.c1_estimate = r0 + (r0 - r1) * a0 / (a1 - a0);

  // Log-log least squares on |residual| = C alpha^p.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const ExpansionRow& r : rep.rows) {
    if (std::fabs(r.residual) < 1e-15) continue;
    const double lx = std::log(r.alpha), ly = std::log(std::fabs(r.residual));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("weak_expansion_check: degenerate fit");
  rep.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.prefactor = std::exp((sy - rep.exponent * sx) / n);
  return rep;
}

StrongCheckReport strong_limit_check(const Configuration& config,
                                     const std::vector<double>& alphas) {
  require_loop(config, "strong_limit_check");
  for (double a : alphas)
    if (!(a >= 10.0))
      throw std::invalid_argument("strong_limit_check: alphas must be >= 10");

  StrongCheckReport rep;
  rep.dirichlet = dirichlet_ground(config);
  std::vector<double> sorted = alphas;
  std::sort(sorted.begin(), sorted.end());

  rep.monotone = true;
  rep.below_dirichlet = true;
  double prev = -1.0;
  for (double a : sorted) {
    const SpectralResult r = ground_state_positive_loop(a, config);
    ExpansionRow row;
    row.alpha = a;
    row.lambda1 = r.lambda1;
    row.model = rep.dirichlet;
    row.residual = rep.dirichlet - r.lambda1;
    rep.rows.push_back(row);
    if (prev >= 0.0 && r.lambda1 < prev) rep.monotone = false;
    if (!(r.lambda1 < rep.dirichlet)) rep.below_dirichlet = false;
    prev = r.lambda1;
  }

  // alpha (lambda_D - lambda(alpha)) = c + O(1/alpha): extrapolate linearly
  // in h = 1/alpha from the two largest alphas.
  if (rep.rows.size() >= 2) {
    const ExpansionRow& p = rep.rows[rep.rows.size() - 2];
    const ExpansionRow& q = rep.rows.back();
    const double hp = 1.0 / p.alpha, hq = 1.0 / q.alpha;
    const double fp = p.alpha * p.residual, fq = q.alpha * q.residual;
    rep.c_estimate = fq + (fq - fp) * hq / (hp - hq);
  } else if (!rep.rows.empty()) {
    rep.c_estimate = rep.rows[0].alpha * rep.rows[0].residual;
  }
  return rep;
}

}  // namespace pointopt
