#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "pointopt/configurations.hpp"
#include "pointopt/kernels.hpp"
#include "pointopt/optimizer.hpp"
#include "pointopt/spectral.hpp"

using namespace pointopt;

TEST_CASE("nelder-mead on smooth test functions") {
  // quadratic bowl
  auto quad = [](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += (x[i] - 1.0 * (i + 1)) * (x[i] - 1.0 * (i + 1));
    return s;
  };
  const SimplexResult r = nelder_mead(quad, {0.0, 0.0, 0.0}, 0.5, 1e-10, 5000);
  CHECK(r.converged);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(r.x[i] == doctest::Approx(i + 1.0).epsilon(1e-6));
  CHECK(r.value < 1e-12);

  // rosenbrock, harder valley
  auto rosen = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const SimplexResult r2 = nelder_mead(rosen, {-1.2, 1.0}, 0.5, 1e-12, 20000);
  CHECK(r2.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r2.x[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("surface energy: value and rigid-motion invariance") {
  const auto [pair, meta] = sharp_sphere(2);
  // antipodal pair: one unordered pair at distance 2, counted twice
  CHECK(surface_energy(pair, 1.0) ==
        doctest::Approx(2.0 * std::exp(-2.0) / (8.0 * kPi)).epsilon(1e-13));

  const Configuration a = random_config(Setting::Sphere, 6, 17);
  std::vector<Vec3> rot;
  for (const Vec3& p : a.points())
    rot.push_back({p.x * std::cos(0.4) - p.y * std::sin(0.4),
                   p.x * std::sin(0.4) + p.y * std::cos(0.4), p.z});
  const Configuration b = Configuration::from_sphere_points(rot);
  CHECK(surface_energy(a, 1.5) == doctest::Approx(surface_energy(b, 1.5)).epsilon(1e-12));
}

TEST_CASE("parallel_for_indexed is deterministic across worker counts") {
  std::vector<double> out1(64), out2(64);
  auto job = [](int i) { return std::sin(i * 0.1) * i; };
  setenv("POINTOPT_WORKERS", "1", 1);
  parallel_for_indexed(64, [&](int i) { out1[i] = job(i); });
  setenv("POINTOPT_WORKERS", "7", 1);
  parallel_for_indexed(64, [&](int i) { out2[i] = job(i); });
  unsetenv("POINTOPT_WORKERS");
  CHECK(out1 == out2);
}

TEST_CASE("loop maximization recovers the equidistant set") {
  const OptimizationReport rep = maximize_lambda1(Setting::Loop, -1.0, 3, 6, 11);
  CHECK(rep.matched_canonical);
  CHECK(rep.converged_starts > 0);
  const double lam = solve_ground(Setting::Loop, -1.0, canonical_loop(3)).lambda1;
  CHECK(rep.best_value == doctest::Approx(lam).epsilon(1e-7));
  // determinism: same seed, same report
  const OptimizationReport rep2 = maximize_lambda1(Setting::Loop, -1.0, 3, 6, 11);
  CHECK(rep.best_value == rep2.best_value);
  CHECK(rep.per_start_values == rep2.per_start_values);
}

TEST_CASE("repulsive loop maximization also lands on the equidistant set") {
  const OptimizationReport rep = maximize_lambda1(Setting::Loop, 2.0, 3, 6, 5);
  CHECK(rep.matched_canonical);
  const double lam = solve_ground(Setting::Loop, 2.0, canonical_loop(3)).lambda1;
  CHECK(rep.best_value == doctest::Approx(lam).epsilon(1e-7));
}

TEST_CASE("surface-energy minimization finds the tetrahedron") {
  const OptimizationReport rep = minimize_surface_energy(1.0, 4, 6, 23);
  CHECK(rep.matched_canonical);
  const auto [tet, meta] = sharp_sphere(4);
  CHECK(rep.best_value == doctest::Approx(surface_energy(tet, 1.0)).epsilon(1e-8));
}

TEST_CASE("sphere lambda1 maximization finds the antipodal pair") {
  const OptimizationReport rep = maximize_lambda1(Setting::Sphere, -1.0, 2, 4, 3);
  CHECK(rep.matched_canonical);
  const auto [pair, meta] = sharp_sphere(2);
  const double lam = solve_ground(Setting::Sphere, -1.0, pair).lambda1;
  CHECK(rep.best_value == doctest::Approx(lam).epsilon(1e-6));
}

TEST_CASE("verification campaign: attractive loop") {
  const VerifyReport rep = verify_theorem(Setting::Loop, -1.0, 4, 40, 77);
  CHECK(rep.trials == 40);
  CHECK(static_cast<int>(rep.samples.size()) == 40);
  CHECK(rep.violations == 0);
  CHECK(rep.min_gap > 1e-7);
  const double lam = solve_ground(Setting::Loop, -1.0, canonical_loop(4)).lambda1;
  CHECK(rep.lambda_canonical == doctest::Approx(lam).epsilon(1e-12));
  for (const TrialSample& s : rep.samples) {
    CHECK(s.bound_state);
    CHECK(s.lambda1 <= rep.lambda_canonical + 1e-9);
    CHECK(s.margin == doctest::Approx(rep.lambda_canonical - s.lambda1).epsilon(1e-12));
  }
  // determinism across worker counts
  setenv("POINTOPT_WORKERS", "1", 1);
  const VerifyReport seq = verify_theorem(Setting::Loop, -1.0, 4, 40, 77);
  unsetenv("POINTOPT_WORKERS");
  for (int i = 0; i < 40; ++i)
    CHECK(seq.samples[i].lambda1 == rep.samples[i].lambda1);
}

TEST_CASE("verification campaign: sphere with sharp comparison set") {
  const VerifyReport rep = verify_theorem(Setting::Sphere, -1.0, 6, 25, 13);
  CHECK(rep.violations == 0);
  CHECK(rep.min_gap > 0.0);
}

TEST_CASE("conjecture scan produces a full report") {
  const ConjectureReport rep = conjecture_scan(3, {0.5, 5.0}, 10, 99);
  CHECK(rep.n == 3);
  REQUIRE(rep.rows.size() == 2);
  for (const ConjectureRow& row : rep.rows) {
    CHECK(row.violations == 0);
    CHECK(row.min_gap > 0.0);
  }
}
