#include "pointopt/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace pointopt {

int worker_count() {
  if (const char* env = std::getenv("POINTOPT_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for_indexed(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, double scale,
                          double diameter_tol, int max_eval) {
  const int dim = static_cast<int>(x0.size());
  SimplexResult out;
  if (dim == 0) {
    out.x = x0;
    out.value = f(x0);
    out.evaluations = 1;
    out.converged = true;
    return out;
  }

  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };

  std::vector<std::vector<double>> pts(dim + 1, x0);
  std::vector<double> val(dim + 1);
  for (int i = 1; i <= dim; ++i) pts[i][i - 1] += scale;
  for (int i = 0; i <= dim; ++i) val[i] = eval(pts[i]);

  auto order = [&] {
    std::vector<int> idx(dim + 1);
    for (int i = 0; i <= dim; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val[a] < val[b]; });
    std::vector<std::vector<double>> np(dim + 1);
    std::vector<double> nv(dim + 1);
    for (int i = 0; i <= dim; ++i) {
      np[i] = pts[idx[i]];
      nv[i] = val[idx[i]];
    }
    pts = std::move(np);
    val = std::move(nv);
  };

  bool converged = false;
  while (evals < max_eval) {
    order();
    double diameter = 0.0;
    for (int i = 1; i <= dim; ++i)
      for (int d = 0; d < dim; ++d)
        diameter = std::max(diameter, std::fabs(pts[i][d] - pts[0][d]));
    if (diameter < diameter_tol) {
      converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (int i = 0; i < dim; ++i)
      for (int d = 0; d < dim; ++d) centroid[d] += pts[i][d] / dim;

    auto along = [&](double t) {
      std::vector<double> x(dim);
      for (int d = 0; d < dim; ++d) x[d] = centroid[d] + t * (pts[dim][d] - centroid[d]);
      return x;
    };

    const std::vector<double> xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < val[0]) {
      const std::vector<double> xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[dim] = xe;
        val[dim] = fe;
      } else {
        pts[dim] = xr;
        val[dim] = fr;
      }
    } else if (fr < val[dim - 1]) {
      pts[dim] = xr;
      val[dim] = fr;
    } else {
      const double t = fr < val[dim] ? -0.5 : 0.5;
      const std::vector<double> xc = along(t);
      const double fc = eval(xc);
      if (fc < std::min(fr, val[dim])) {
        pts[dim] = xc;
        val[dim] = fc;
      } else {
        for (int i = 1; i <= dim; ++i) {
          for (int d = 0; d < dim; ++d) pts[i][d] = 0.5 * (pts[i][d] + pts[0][d]);
          val[i] = eval(pts[i]);
        }
      }
    }
  }
  order();
  out.x = pts[0];
  out.value = val[0];
  out.evaluations = evals;
  out.converged = converged;
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gap gauge for the loop/circle: n-1 free reals, softmax onto the n cyclic
// gaps, first site pinned at 0.
Configuration angles_from_params(Setting s, const std::vector<double>& z) {
  const int n = static_cast<int>(z.size()) + 1;
  std::vector<double> w(n, 0.0);
  double zmax = 0.0;
  for (double v : z) zmax = std::max(zmax, v);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    w[i] = std::exp((i < n - 1 ? z[i] : 0.0) - zmax);
    total += w[i];
  }
  std::vector<double> angles(n);
  angles[0] = 0.0;
  for (int i = 1; i < n; ++i)
    angles[i] = angles[i - 1] + 2.0 * kPi * w[i - 1] / total;
  return Configuration::from_angles(s, std::move(angles));
}

// Spherical-coordinate gauge: site 0 at the north pole, site 1 at azimuth 0.
Configuration sphere_from_params(const std::vector<double>& p) {
  const int n = static_cast<int>(p.size() + 3) / 2;
  std::vector<Vec3> pts;
  pts.push_back({0.0, 0.0, 1.0});
  pts.push_back({std::sin(p[0]), 0.0, std::cos(p[0])});
  for (int j = 2; j < n; ++j) {
    const double th = p[2 * j - 3], ph = p[2 * j - 2];
    pts.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
  }
  return Configuration::from_sphere_points(std::move(pts));
}

std::vector<double> params_from_sphere(const std::vector<Vec3>& pts_in) {
  // Rotate into the gauge frame first: pts[0] -> north pole, pts[1] azimuth 0.
  std::vector<Vec3> pts = pts_in;
  const Vec3 a = pts[0];
  const double st = std::sqrt(a.x * a.x + a.y * a.y);
  if (st > 1e-15) {
    // Axis-angle rotation taking a to e_z.
    const double ct = a.z;
    const double ux = a.y / st, uy = -a.x / st;  // axis = a x e_z normalized
    for (Vec3& p : pts) {
      const double d = ux * p.x + uy * p.y;
      const Vec3 cr{uy * p.z, -ux * p.z, ux * p.y - uy * p.x};
      p = {p.x * ct + cr.x * st + ux * d * (1.0 - ct),
           p.y * ct + cr.y * st + uy * d * (1.0 - ct),
           p.z * ct + cr.z * st};
    }
  } else if (a.z < 0.0) {
    for (Vec3& p : pts) p = {p.x, -p.y, -p.z};
  }
  const double phi1 = std::atan2(pts[1].y, pts[1].x);
  const double c = std::cos(-phi1), s = std::sin(-phi1);
  for (Vec3& p : pts) p = {c * p.x - s * p.y, s * p.x + c * p.y, p.z};

  std::vector<double> out;
  out.push_back(std::atan2(std::sqrt(pts[1].x * pts[1].x + pts[1].y * pts[1].y), pts[1].z));
  for (std::size_t j = 2; j < pts.size(); ++j) {
    out.push_back(std::atan2(std::sqrt(pts[j].x * pts[j].x + pts[j].y * pts[j].y), pts[j].z));
    out.push_back(std::atan2(pts[j].y, pts[j].x));
  }
  return out;
}

Configuration canonical_for(Setting s, int n) {
  if (s == Setting::Loop) return canonical_loop(n);
  if (uses_angles(s)) return canonical_circle(n, s);
  return sharp_sphere(n).first;
}

bool has_sharp(int n) { return n == 2 || n == 3 || n == 4 || n == 6 || n == 12; }

std::vector<double> sorted_distance_multiset(const Configuration& c) {
  const DistanceData d = distances(c);
  const Matrix& m = c.setting() == Setting::Loop ? d.geodesic : d.chordal;
  std::vector<double> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) out.push_back(m(i, j));
  std::sort(out.begin(), out.end());
  return out;
}

// Deterministic tie-break among equal-value optima.
bool prefer(const Configuration& cand, double cand_value, const Configuration& best,
            double best_value, bool maximize) {
  const double better = maximize ? cand_value - best_value : best_value - cand_value;
  if (better > 1e-12) return true;
  if (better < -1e-12) return false;
  return sorted_distance_multiset(cand) < sorted_distance_multiset(best);
}

struct SurfaceGradient {
  double energy = 0.0;
  std::vector<Vec3> grad;      // ambient gradient
  double tangent_norm = 0.0;   // max tangent component magnitude
};

SurfaceGradient surface_energy_gradient(const std::vector<Vec3>& pts, double kappa) {
  const std::size_t n = pts.size();
  SurfaceGradient g;
  g.grad.assign(n, Vec3{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec3 d = pts[i] - pts[j];
      const double ell = d.norm();
      const KernelValue kv = green_free(3, kappa, ell);
      g.energy += 2.0 * kv.value;  // ordered pairs
      const double coef = 2.0 * kv.derivative / ell;
      g.grad[i].x += coef * d.x;
      g.grad[i].y += coef * d.y;
      g.grad[i].z += coef * d.z;
      g.grad[j].x -= coef * d.x;
      g.grad[j].y -= coef * d.y;
      g.grad[j].z -= coef * d.z;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.grad[i].dot(pts[i]);
    const Vec3 t{g.grad[i].x - r * pts[i].x, g.grad[i].y - r * pts[i].y,
                 g.grad[i].z - r * pts[i].z};
    g.tangent_norm = std::max(g.tangent_norm, t.norm());
  }
  return g;
}

std::vector<Vec3> descend_surface_energy(std::vector<Vec3> pts, double kappa,
                                         int max_iter) {
  double step = 0.1;
  SurfaceGradient g = surface_energy_gradient(pts, kappa);
  for (int it = 0; it < max_iter && g.tangent_norm > 1e-13; ++it) {
    std::vector<Vec3> trial(pts.size());
    bool ok = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Vec3 p{pts[i].x - step * g.grad[i].x, pts[i].y - step * g.grad[i].y,
             pts[i].z - step * g.grad[i].z};
      const double nn = p.norm();
      if (nn < 1e-12) {
        ok = false;
        break;
      }
      trial[i] = {p.x / nn, p.y / nn, p.z / nn};
    }
    if (ok) {
      const SurfaceGradient gt = surface_energy_gradient(trial, kappa);
      if (gt.energy < g.energy) {
        pts = std::move(trial);
        g = gt;
        step *= 1.2;
        continue;
      }
    }
    step *= 0.5;
    if (step < 1e-16) break;
  }
  return pts;
}

}  // namespace

double surface_energy(const Configuration& config, double kappa) {
  if (config.setting() != Setting::Sphere)
    throw std::invalid_argument("surface_energy: sphere setting required");
  if (!(kappa > 0.0)) throw std::invalid_argument("surface_energy: kappa must be positive");
  return surface_energy_gradient(config.points(), kappa).energy;
}

OptimizationReport maximize_lambda1(Setting setting, double alpha, int n, int starts,
                                    std::uint64_t seed, double congruence_tol) {
  if (n < 2) throw std::invalid_argument("maximize_lambda1: N must be >= 2");
  if (starts < 1) throw std::invalid_argument("maximize_lambda1: starts must be >= 1");
  const bool on_sphere = setting == Setting::Sphere;
  const int dim = on_sphere ? 2 * n - 3 : n - 1;

  auto objective = [&](const std::vector<double>& p) -> double {
    try {
      const Configuration cfg =
          on_sphere ? sphere_from_params(p) : angles_from_params(setting, p);
      return -solve_ground(setting, alpha, cfg).lambda1;  // minimize -lambda1
    } catch (const std::exception&) {
      return kInf;  // infeasible probe or no bound state
    }
  };

  struct StartOutcome {
    Configuration config;
    double value = -kInf;
    bool converged = false;
    bool valid = false;
  };
  std::vector<StartOutcome> outcomes(starts);

  parallel_for_indexed(starts, [&](int s) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(s));
    std::vector<double> x0(dim);
    if (on_sphere) {
      // Random configuration, preconditioned by a short surface-energy
      // descent; the secular objective then polishes it.
      const Configuration start = random_config(Setting::Sphere, n, rng());
      const std::vector<Vec3> pre = descend_surface_energy(start.points(), 1.0, 400);
      x0 = params_from_sphere(pre);
    } else {
      std::normal_distribution<double> g(0.0, 1.0);
      for (double& v : x0) v = g(rng);
    }
    const SimplexResult r = nelder_mead(objective, x0, 0.3, 1e-8, 400 * std::max(dim, 1));
    StartOutcome& o = outcomes[s];
    o.converged = r.converged;
    if (std::isfinite(r.value)) {
      try {
        o.config = on_sphere ? sphere_from_params(r.x) : angles_from_params(setting, r.x);
        o.value = -r.value;
        o.valid = true;
      } catch (const std::exception&) {
      }
    }
  });

  OptimizationReport rep;
  rep.starts = starts;
  rep.tolerance_used = congruence_tol;
  bool have_best = false;
  for (const StartOutcome& o : outcomes) {
    rep.per_start_values.push_back(o.value);
    if (o.converged) ++rep.converged_starts;
    if (!o.valid) continue;
    if (!have_best || prefer(o.config, o.value, rep.best_config, rep.best_value, true)) {
      rep.best_config = o.config;
      rep.best_value = o.value;
      have_best = true;
    }
  }
  if (!have_best) throw SolverError("maximize_lambda1: every start failed");
  if (!on_sphere || has_sharp(n))
    rep.matched_canonical =
        is_congruent(rep.best_config, canonical_for(setting, n), congruence_tol);
  return rep;
}

OptimizationReport minimize_surface_energy(double kappa, int n, int starts,
                                           std::uint64_t seed, double congruence_tol) {
  if (n < 2) throw std::invalid_argument("minimize_surface_energy: N must be >= 2");
  if (!(kappa > 0.0))
    throw std::invalid_argument("minimize_surface_energy: kappa must be positive");
  if (starts < 1) throw std::invalid_argument("minimize_surface_energy: starts must be >= 1");

  auto objective = [&](const std::vector<double>& p) -> double {
    try {
      return surface_energy(sphere_from_params(p), kappa);
    } catch (const std::exception&) {
      return kInf;
    }
  };

  struct StartOutcome {
    Configuration config;
    double value = kInf;
    bool converged = false;
    bool valid = false;
  };
  std::vector<StartOutcome> outcomes(starts);

  parallel_for_indexed(starts, [&](int s) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(s));
    const Configuration start = random_config(Setting::Sphere, n, rng());
    std::vector<Vec3> pts = descend_surface_energy(start.points(), kappa, 20000);
    // Simplex polish in the gauge frame.
    const int dim = 2 * n - 3;
    const SimplexResult r =
        nelder_mead(objective, params_from_sphere(pts), 1e-4, 1e-10, 200 * dim);
    StartOutcome& o = outcomes[s];
    o.converged = r.converged;
    try {
      const Configuration direct = Configuration::from_sphere_points(pts);
      const double e_direct = surface_energy(direct, kappa);
      if (std::isfinite(r.value) && r.value < e_direct) {
        o.config = sphere_from_params(r.x);
        o.value = r.value;
      } else {
        o.config = direct;
        o.value = e_direct;
      }
      o.valid = true;
    } catch (const std::exception&) {
    }
  });

  OptimizationReport rep;
  rep.starts = starts;
  rep.tolerance_used = congruence_tol;
  bool have_best = false;
  for (const StartOutcome& o : outcomes) {
    rep.per_start_values.push_back(o.value);
    if (o.converged) ++rep.converged_starts;
    if (!o.valid) continue;
    if (!have_best || prefer(o.config, o.value, rep.best_config, rep.best_value, false)) {
      rep.best_config = o.config;
      rep.best_value = o.value;
      have_best = true;
    }
  }
  if (!have_best) throw SolverError("minimize_surface_energy: every start failed");
  if (has_sharp(n))
    rep.matched_canonical =
        is_congruent(rep.best_config, sharp_sphere(n).first, congruence_tol);
  return rep;
}

VerifyReport verify_theorem(Setting setting, double alpha, int n, int trials,
                            std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("verify_theorem: trials must be >= 1");
  if (setting == Setting::Sphere && !has_sharp(n))
    throw std::invalid_argument("verify_theorem: sphere canonical known for N in {2,3,4,6,12} only");

  VerifyReport rep;
  rep.setting = setting;
  rep.alpha = alpha;
  rep.n = n;
  rep.trials = trials;

  const Configuration canonical = canonical_for(setting, n);
  rep.lambda_canonical = solve_ground(setting, alpha, canonical).lambda1;

  rep.samples.resize(trials);
  parallel_for_indexed(trials, [&](int t) {
    TrialSample& s = rep.samples[t];
    s.index = t;
    const Configuration y = random_config(setting, n, seed + static_cast<std::uint64_t>(t));
    s.congruent = is_congruent(y, canonical, 1e-6);
    try {
      s.lambda1 = solve_ground(setting, alpha, y).lambda1;
      s.margin = rep.lambda_canonical - s.lambda1;
    } catch (const NoBoundStateError&) {
      // The canonical set binds while Y does not: the inequality holds
      // trivially; flagged rather than counted toward min_gap.
      s.bound_state = false;
      s.lambda1 = std::numeric_limits<double>::quiet_NaN();
      s.margin = kInf;
    }
  });

  double min_gap = kInf;
  for (const TrialSample& s : rep.samples) {
    if (!s.bound_state) {
      ++rep.no_bound_state;
      continue;
    }
    if (s.margin < -1e-9) ++rep.violations;
    if (!s.congruent) min_gap = std::min(min_gap, s.margin);
  }
  rep.min_gap = std::isfinite(min_gap) ? min_gap : 0.0;
  return rep;
}

ConjectureReport conjecture_scan(int n, const std::vector<double>& alphas, int trials,
                                 std::uint64_t seed) {
  for (double a : alphas)
    if (!(a > 0.0)) throw std::invalid_argument("conjecture_scan: alphas must be positive");
  ConjectureReport rep;
  rep.n = n;
  rep.trials = trials;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const VerifyReport v =
        verify_theorem(Setting::Loop, alphas[i], n, trials, seed + 7919 * i);
    rep.rows.push_back({alphas[i], v.violations, v.min_gap});
  }
  return rep;
}

}  // namespace pointopt
