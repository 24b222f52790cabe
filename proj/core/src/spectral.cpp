#include "pointopt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

namespace pointopt {

namespace {

KernelValue loop_kernel(SpectralParam p, double d) {
  return p.kind == ParamKind::NegativeEnergy ? green_loop_negative(p.value, d)
                                             : green_loop_positive(p.value, d);
}

struct Bisection {
  double root = 0.0;
  double residual = 0.0;
  double lo = 0.0, hi = 0.0;
};

// Bisects f on [lo, hi] assuming f(lo) < 0 < f(hi) (or the reverse).
template <typename F>
Bisection bisect(F&& f, double lo, double hi, double flo, double fhi,
                 double f_tol, int max_iter = 200) {
  Bisection out;
  const bool rising = flo < 0.0;
  double fmid = 0.0, mid = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    mid = 0.5 * (lo + hi);
    fmid = f(mid);
    if ((fmid < 0.0) == rising)
      lo = mid;
    else
      hi = mid;
    if (std::fabs(fmid) <= f_tol && hi - lo <= 1e-14 * std::max(1.0, hi)) break;
  }
  out.root = 0.5 * (lo + hi);
  out.residual = std::fabs(fmid);
  out.lo = lo;
  out.hi = hi;
  (void)fhi;
  return out;
}

}  // namespace

KreinMatrix krein_matrix(Setting setting, double alpha, const Configuration& config,
                         SpectralParam param) {
  const std::size_t n = config.size();
  KreinMatrix km;
  km.setting = setting;
  km.alpha = alpha;
  km.param = param;
  km.entries = Matrix(n);
  const DistanceData dist = distances(config);

  if (setting == Setting::Loop) {
    if (alpha == 0.0)
      throw std::invalid_argument("krein_matrix: alpha = 0 has no secular matrix (free loop)");
    const double diag_g = param.kind == ParamKind::NegativeEnergy
                              ? green_loop_negative(param.value, 0.0).value
                              : green_loop_positive(param.value, 0.0).value;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j)
          km.entries(i, j) = -1.0 / alpha - diag_g;
        else
          km.entries(i, j) = -loop_kernel(param, dist.geodesic(i, j)).value;
      }
    }
    return km;
  }

  if (param.kind != ParamKind::NegativeEnergy)
    throw std::invalid_argument("krein_matrix: positive-energy parameter is loop-only");
  const int nu = ambient_nu(setting);
  const double xi = xi_regularized(nu, param.value);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j)
        km.entries(i, j) = alpha - xi;
      else
        km.entries(i, j) = -green_free(nu, param.value, dist.chordal(i, j)).value;
    }
  }
  return km;
}

double krein_min_eigenvalue(Setting setting, double alpha, const Configuration& config,
                            SpectralParam param) {
  return min_eigenvalue_sym(krein_matrix(setting, alpha, config, param).entries).first;
}

SpectralResult ground_state_negative(Setting setting, double alpha,
                                     const Configuration& config) {
  if (setting == Setting::Loop && !(alpha < 0.0))
    throw std::invalid_argument("ground_state_negative: loop requires alpha < 0");

  int evals = 0;
  auto mu1 = [&](double kappa) {
    ++evals;
    return krein_min_eigenvalue(setting, alpha, config, SpectralParam::kappa(kappa));
  };

  // The smallest eigenvalue branch of Gamma(i kappa) is increasing in kappa
  // (Krein: eigenvalues decrease in the energy), so an expanding bracket plus
  // bisection locates the unique sign change, which is the largest root.
  double lo = 1e-6;
  double flo = mu1(lo);
  while (flo >= 0.0 && lo > 1e-14) {
    lo *= 1e-2;
    flo = mu1(lo);
  }
  if (flo >= 0.0) throw NoBoundStateError(lo, lo);

  double hi = std::max(10.0, static_cast<double>(config.size()) * std::fabs(alpha));
  double fhi = mu1(hi);
  while (fhi <= 0.0) {
    if (hi > 1e9) throw NoBoundStateError(lo, hi);
    hi *= 4.0;
    fhi = mu1(hi);
  }

  const Bisection b = bisect(mu1, lo, hi, flo, fhi, 1e-12);
  if (b.residual > 1e-10)
    throw SolverError("ground_state_negative: secular residual did not converge");
  SpectralResult r;
  r.param_at_root = SpectralParam::kappa(b.root);
  r.lambda1 = -b.root * b.root;
  r.residual = b.residual;
  r.bracket_lo = b.lo;
  r.bracket_hi = b.hi;
  r.evaluations = evals;
  r.method = "krein-bisect";
  return r;
}

Monodromy monodromy_discriminant(double alpha, const Configuration& config, double energy) {
  if (config.setting() != Setting::Loop)
    throw std::invalid_argument("monodromy_discriminant: loop setting required");
  const std::vector<double>& y = config.angles();
  const std::size_t n = config.size();

  // The interval factors carry cosh(kappa g) ~ e^{kappa g}, so the trace of
  // the full product loses ~kappa * (loop length) / ln 2 bits to cancellation;
  // extended precision keeps the defect usable near closely spaced roots.
  long double m00 = 1.0L, m01 = 0.0L, m10 = 0.0L, m11 = 1.0L;
  auto apply = [&](long double a00, long double a01, long double a10, long double a11) {
    const long double r00 = a00 * m00 + a01 * m10;
    const long double r01 = a00 * m01 + a01 * m11;
    const long double r10 = a10 * m00 + a11 * m10;
    const long double r11 = a10 * m01 + a11 * m11;
    m00 = r00;
    m01 = r01;
    m10 = r10;
    m11 = r11;
  };
  auto propagate = [&](long double g) {
    if (energy > 0.0) {
      const long double k = std::sqrt(static_cast<long double>(energy));
      apply(std::cos(k * g), std::sin(k * g) / k, -k * std::sin(k * g), std::cos(k * g));
    } else if (energy < 0.0) {
      const long double kp = std::sqrt(static_cast<long double>(-energy));
      apply(std::cosh(kp * g), std::sinh(kp * g) / kp, kp * std::sinh(kp * g),
            std::cosh(kp * g));
    } else {
      apply(1.0L, g, 0.0L, 1.0L);
    }
  };

  // Around the loop starting just after y_1: gap to y_2, jump at y_2, ...,
  // wrap-around gap back to y_1, jump at y_1.
  for (std::size_t j = 0; j + 1 < n; ++j) {
    propagate(y[j + 1] - y[j]);
    apply(1.0L, 0.0L, alpha, 1.0L);
  }
  propagate(2.0 * kPi - y[n - 1] + y[0]);
  apply(1.0L, 0.0L, alpha, 1.0L);

  Monodromy m;
  m.m00 = static_cast<double>(m00);
  m.m01 = static_cast<double>(m01);
  m.m10 = static_cast<double>(m10);
  m.m11 = static_cast<double>(m11);
  m.energy = energy;
  m.discriminant = static_cast<double>(m00 + m11);
  return m;
}

namespace {

double discriminant_defect(double alpha, const Configuration& config, double energy) {
  return monodromy_discriminant(alpha, config, energy).discriminant - 2.0;
}

// True when det Gamma(k) changes sign over [klo, khi] and no pole lies inside.
bool det_validates_bracket(double alpha, const Configuration& config, double klo,
                           double khi) {
  const double pole = std::floor(khi);
  if (pole >= 1.0 && pole >= klo) return false;  // integer (pole) inside the bracket
  try {
    const double da =
        determinant(krein_matrix(Setting::Loop, alpha, config, SpectralParam::k(klo)).entries);
    const double db =
        determinant(krein_matrix(Setting::Loop, alpha, config, SpectralParam::k(khi)).entries);
    return da * db < 0.0;
  } catch (const PoleError&) {
    return false;
  }
}

}  // namespace

SpectralResult ground_state_positive_loop(double alpha, const Configuration& config) {
  if (config.setting() != Setting::Loop)
    throw std::invalid_argument("ground_state_positive_loop: loop setting required");
  if (!(alpha > 0.0))
    throw std::invalid_argument("ground_state_positive_loop: alpha must be positive");

  int evals = 0;
  auto defect = [&](double k) {
    ++evals;
    return discriminant_defect(alpha, config, k * k);
  };

  // lambda_1 < lambda_1(D, Y) bounds the search range.
  const double k_max = std::sqrt(dirichlet_ground(config)) + 0.01;
  const int steps = 4000;
  double k_prev = 1e-6;
  double f_prev = defect(k_prev);
  if (f_prev <= 0.0) throw SolverError("ground_state_positive_loop: defect not positive at k -> 0");
  double k_root = -1.0, f_at = 0.0, k_at = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double k = k_prev + (k_max - 1e-6) / steps;
    const double f = defect(k);
    if (f_prev > 0.0 && f <= 0.0) {
      k_at = k;
      f_at = f;
      k_root = k_prev;
      break;
    }
    k_prev = k;
    f_prev = f;
  }
  if (k_root < 0.0)
    throw SolverError("ground_state_positive_loop: discriminant never reached 2 in range");

  const Bisection b = bisect(defect, k_root, k_at, f_prev, f_at, 1e-12);
  SpectralResult r;
  r.param_at_root = SpectralParam::k(b.root);
  r.lambda1 = b.root * b.root;
  r.residual = b.residual;
  r.bracket_lo = b.lo;
  r.bracket_hi = b.hi;
  r.evaluations = evals;
  r.method = det_validates_bracket(alpha, config, k_root, k_at)
                 ? "monodromy-scan+det"
                 : "monodromy-scan";
  return r;
}

SpectralResult ground_state_positive_krein(double alpha, const Configuration& config) {
  if (config.setting() != Setting::Loop)
    throw std::invalid_argument("ground_state_positive_krein: loop setting required");
  if (!(alpha > 0.0))
    throw std::invalid_argument("ground_state_positive_krein: alpha must be positive");

  int evals = 0;
  auto det_at = [&](double k) {
    ++evals;
    return determinant(krein_matrix(Setting::Loop, alpha, config, SpectralParam::k(k)).entries);
  };

  // det Gamma has sin(pi k) poles at the integers, so each unit band is
  // scanned separately inside a guard margin; the first sign change in k is
  // the ground state.
  const double guard = 100.0 * kPoleGuard;
  const double k_max = std::sqrt(dirichlet_ground(config)) + 0.01;
  const int band_steps = 2000;
  for (int band = 0; band * 1.0 < k_max; ++band) {
    const double lo_k = std::max(1e-6, band + guard);
    const double hi_k = std::min(band + 1.0 - guard, k_max);
    if (hi_k <= lo_k) continue;
    double kp = lo_k, fp = det_at(kp);
    for (int i = 1; i <= band_steps; ++i) {
      const double k = lo_k + (hi_k - lo_k) * i / band_steps;
      const double f = det_at(k);
      if (fp != 0.0 && f != 0.0 && (fp < 0.0) != (f < 0.0)) {
        const Bisection b = bisect(det_at, kp, k, fp, f, 0.0);
        SpectralResult r;
        r.param_at_root = SpectralParam::k(b.root);
        r.lambda1 = b.root * b.root;
        r.residual = std::fabs(
            discriminant_defect(alpha, config, b.root * b.root));
        r.bracket_lo = b.lo;
        r.bracket_hi = b.hi;
        r.evaluations = evals;
        r.method = "krein-det-scan";
        return r;
      }
      kp = k;
      fp = f;
    }
  }
  throw SolverError("ground_state_positive_krein: no determinant root in range");
}

SpectralResult ground_state_negative_monodromy(double alpha, const Configuration& config) {
  if (config.setting() != Setting::Loop)
    throw std::invalid_argument("ground_state_negative_monodromy: loop setting required");
  if (!(alpha < 0.0))
    throw std::invalid_argument("ground_state_negative_monodromy: alpha must be negative");

  int evals = 0;
  auto defect = [&](double kappa) {
    ++evals;
    return discriminant_defect(alpha, config, -kappa * kappa);
  };

  const std::size_t n = config.size();
  const std::vector<double>& y = config.angles();
  double hi = std::max(10.0, static_cast<double>(n) * std::fabs(alpha));
  while (defect(hi) <= 0.0) {
    if (hi > 1e9)
      throw SolverError("ground_state_negative_monodromy: no positive defect at large kappa");
    hi *= 2.0;
  }

  // Sturm oscillation count for the loop cut at y_1 with Dirichlet ends: the
  // number of sign changes of the pinned solution u (u(y_1)=0, u'=1) around
  // the loop equals the number of cut-Dirichlet levels below -kappa^2.  On
  // each interval u is a combination of two real exponentials, so it has at
  // most one zero and endpoint signs detect it.
  auto cut_zero_count = [&](double kappa) -> int {
    double u = 0.0, v = 1.0;
    double prev_sign = 0.0;
    int count = 0;
    auto interval = [&](double g) {
      if (g <= 0.0) return;
      const double c = std::cosh(kappa * g), sh = std::sinh(kappa * g);
      double nu = c * u + sh / kappa * v;
      double nv = kappa * sh * u + c * v;
      const double mag = std::max(std::fabs(nu), std::fabs(nv));
      if (mag > 1e100) {
        nu /= mag;
        nv /= mag;
      }
      if (prev_sign != 0.0 && nu * prev_sign < 0.0) ++count;
      if (nu != 0.0) prev_sign = nu > 0.0 ? 1.0 : -1.0;
      u = nu;
      v = nv;
    };
    for (std::size_t j = 0; j + 1 < n; ++j) {
      interval(y[j + 1] - y[j]);
      v += alpha * u;
    }
    interval(2.0 * kPi - y[n - 1] + y[0]);
    return count;
  };

  // By interlacing of the periodic and cut-Dirichlet spectra the ground state
  // is the unique discriminant root strictly below the first Dirichlet level,
  // so [kappa just above the Dirichlet transition, hi] brackets it simply.
  const double kappa_min = 1e-8;
  double kappa_u = kappa_min;
  if (cut_zero_count(kappa_min) > 0) {
    double klo = kappa_min, kup = hi;
    while (cut_zero_count(kup) > 0) {
      if (kup > 1e9)
        throw SolverError("ground_state_negative_monodromy: runaway Dirichlet level");
      kup *= 2.0;
    }
    for (int it = 0; it < 200 && kup - klo > 1e-15 * kup; ++it) {
      const double mid = 0.5 * (klo + kup);
      (cut_zero_count(mid) > 0 ? klo : kup) = mid;
    }
    kappa_u = kup;
  }
  const double f_u = defect(kappa_u);
  if (!(f_u < 0.0))
    throw SolverError(
        "ground_state_negative_monodromy: degenerate bracket at the Dirichlet level");

  const Bisection b = bisect(defect, kappa_u, hi, f_u, defect(hi), 1e-12);
  SpectralResult r;
  r.param_at_root = SpectralParam::kappa(b.root);
  r.lambda1 = -b.root * b.root;
  r.residual = b.residual;
  r.bracket_lo = b.lo;
  r.bracket_hi = b.hi;
  r.evaluations = evals;
  r.method = "monodromy-sturm";
  return r;
}

double alpha_crit(const Configuration& config, Setting setting) {
  if (ambient_nu(setting) != 3)
    throw std::invalid_argument("alpha_crit: defined for nu = 3 settings only");
  const std::size_t n = config.size();
  if (n == 1) return 0.0;
  const DistanceData d = distances(config);
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) c(i, j) = 1.0 / (4.0 * kPi * d.chordal(i, j));
  return max_eigenvalue_sym(c);
}

double dirichlet_ground(const Configuration& config) {
  if (config.setting() != Setting::Loop)
    throw std::invalid_argument("dirichlet_ground: loop setting required");
  const std::vector<double>& y = config.angles();
  double max_gap = 2.0 * kPi - y.back() + y.front();
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    max_gap = std::max(max_gap, y[i + 1] - y[i]);
  return (kPi / max_gap) * (kPi / max_gap);
}

SpectralResult solve_ground(Setting setting, double alpha, const Configuration& config) {
  if (setting == Setting::Loop && alpha > 0.0)
    return ground_state_positive_loop(alpha, config);
  return ground_state_negative(setting, alpha, config);
}

std::string spectral_result_to_json(Setting setting, double alpha,
                                    const Configuration& config,
                                    const SpectralResult& r, int indent) {
  nlohmann::json j;
  j["setting"] = setting_name(setting);
  j["alpha"] = alpha;
  j["N"] = config.size();
  j["lambda1"] = r.lambda1;
  j["param"] = {
      {"kind", r.param_at_root.kind == ParamKind::NegativeEnergy ? "kappa" : "k"},
      {"value", r.param_at_root.value}};
  j["residual"] = r.residual;
  j["method"] = r.method;
  j["evaluations"] = r.evaluations;
  return j.dump(indent);
}

}  // namespace pointopt
