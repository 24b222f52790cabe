#include "pointopt/configurations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pointopt/kernels.hpp"

namespace pointopt {

int ambient_nu(Setting s) {
  switch (s) {
    case Setting::Loop: return 1;
    case Setting::Circle2: return 2;
    case Setting::Circle3:
    case Setting::Sphere: return 3;
  }
  return 1;
}

bool uses_angles(Setting s) { return s != Setting::Sphere; }

std::string setting_name(Setting s) {
  switch (s) {
    case Setting::Loop: return "loop";
    case Setting::Circle2: return "circle2";
    case Setting::Circle3: return "circle3";
    case Setting::Sphere: return "sphere";
  }
  return "loop";
}

Setting setting_from_name(const std::string& name) {
  if (name == "loop") return Setting::Loop;
  if (name == "circle2") return Setting::Circle2;
  if (name == "circle3") return Setting::Circle3;
  if (name == "sphere") return Setting::Sphere;
  throw std::invalid_argument("unknown setting: " + name);
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

namespace {

double cyclic_gap(double a, double b) {
  double d = std::fabs(a - b);
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace

Configuration Configuration::from_angles(Setting s, std::vector<double> angles) {
  if (!uses_angles(s))
    throw std::invalid_argument("from_angles: sphere setting takes 3-vectors");
  if (angles.empty()) throw std::invalid_argument("configuration needs at least one site");
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!(angles[i] >= 0.0 && angles[i] < 2.0 * kPi))
      throw std::invalid_argument("angles must lie in [0, 2pi)");
    if (i > 0 && !(angles[i] > angles[i - 1]))
      throw std::invalid_argument("angles must be strictly increasing");
  }
  for (std::size_t i = 0; i < angles.size(); ++i)
    for (std::size_t j = i + 1; j < angles.size(); ++j)
      if (cyclic_gap(angles[i], angles[j]) <= kMinSiteGap)
        throw std::invalid_argument("sites closer than the minimum gap");
  Configuration c;
  c.setting_ = s;
  c.angles_ = std::move(angles);
  return c;
}

Configuration Configuration::from_sphere_points(std::vector<Vec3> points) {
  if (points.empty()) throw std::invalid_argument("configuration needs at least one site");
  for (const Vec3& p : points)
    if (std::fabs(p.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("sphere sites must be unit vectors");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if ((points[i] - points[j]).norm() <= kMinSiteGap)
        throw std::invalid_argument("sites closer than the minimum gap");
  Configuration c;
  c.setting_ = Setting::Sphere;
  c.points_ = std::move(points);
  return c;
}

Configuration canonical_loop(int n) {
  if (n < 2) throw std::invalid_argument("canonical_loop: N must be >= 2");
  std::vector<double> angles(n);
  for (int j = 1; j <= n; ++j) angles[j - 1] = kPi * (2.0 * j - 1.0) / n;
  return Configuration::from_angles(Setting::Loop, std::move(angles));
}

Configuration canonical_circle(int n, Setting s) {
  if (n < 2) throw std::invalid_argument("canonical_circle: N must be >= 2");
  if (s != Setting::Circle2 && s != Setting::Circle3)
    throw std::invalid_argument("canonical_circle: setting must be a circle");
  std::vector<double> angles(n);
  for (int j = 1; j <= n; ++j) angles[j - 1] = kPi * (2.0 * j - 1.0) / n;
  return Configuration::from_angles(s, std::move(angles));
}

std::pair<Configuration, SharpConfig> sharp_sphere(int n) {
  std::vector<Vec3> pts;
  SharpConfig info;
  info.n = n;
  switch (n) {
    case 2:
      info.name = "antipodal-pair";
      info.inner_products = {-1.0};
      pts = {{0, 0, 1}, {0, 0, -1}};
      break;
    case 3: {
      info.name = "triangle";
      info.inner_products = {-0.5};
      const double s3 = std::sqrt(3.0) / 2.0;
      pts = {{1, 0, 0}, {-0.5, s3, 0}, {-0.5, -s3, 0}};
      break;
    }
    case 4: {
      info.name = "tetrahedron";
      info.inner_products = {-1.0 / 3.0};
      const double r = 1.0 / std::sqrt(3.0);
      pts = {{r, r, r}, {r, -r, -r}, {-r, r, -r}, {-r, -r, r}};
      break;
    }
    case 6:
      info.name = "octahedron";
      info.inner_products = {-1.0, 0.0};
      pts = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      break;
    case 12: {
      info.name = "icosahedron";
      const double s5 = 1.0 / std::sqrt(5.0);
      info.inner_products = {-1.0, -s5, s5};
      const double phi = 0.5 * (1.0 + std::sqrt(5.0));
      const double r = 1.0 / std::sqrt(1.0 + phi * phi);
      for (double a : {1.0, -1.0})
        for (double b : {phi, -phi}) {
          pts.push_back({0, a * r, b * r});
          pts.push_back({a * r, b * r, 0});
          pts.push_back({b * r, 0, a * r});
        }
      break;
    }
    default:
      throw std::invalid_argument(
          "sharp_sphere: N must be one of {2,3,4,6,12}; cube (N=8) and "
          "dodecahedron (N=20) are not universally optimal");
  }
  info.m = static_cast<int>(info.inner_products.size());
  info.design_strength = 2 * info.m - 1;
  return {Configuration::from_sphere_points(std::move(pts)), info};
}

Configuration random_config(Setting s, int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_config: N must be >= 2");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    try {
      if (uses_angles(s)) {
        std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
        std::vector<double> angles(n);
        for (double& a : angles) a = u(rng);
        std::sort(angles.begin(), angles.end());
        return Configuration::from_angles(s, std::move(angles));
      }
      std::normal_distribution<double> g(0.0, 1.0);
      std::vector<Vec3> pts(n);
      for (Vec3& p : pts) {
        double nn = 0.0;
        do {
          p = {g(rng), g(rng), g(rng)};
          nn = p.norm();
        } while (nn < 1e-12);
        p = {p.x / nn, p.y / nn, p.z / nn};
      }
      return Configuration::from_sphere_points(std::move(pts));
    } catch (const std::invalid_argument&) {
      continue;  // min-gap rejection, redraw
    }
  }
  throw std::runtime_error("random_config: rejection sampling failed 1000 times");
}

DistanceData distances(const Configuration& config) {
  const std::size_t n = config.size();
  DistanceData d;
  if (config.setting() == Setting::Loop) {
    d.geodesic = Matrix(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j)
          d.geodesic(i, j) = cyclic_gap(config.angles()[i], config.angles()[j]);
  } else if (uses_angles(config.setting())) {
    d.angular = Matrix(n);
    d.chordal = Matrix(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) {
          const double phi = cyclic_gap(config.angles()[i], config.angles()[j]);
          d.angular(i, j) = phi;
          d.chordal(i, j) = 2.0 * std::sin(0.5 * phi);
        }
  } else {
    d.chordal = Matrix(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j)
          d.chordal(i, j) = (config.points()[i] - config.points()[j]).norm();
  }
  return d;
}

namespace {

std::vector<double> sorted_pair_distances(const Configuration& c) {
  const DistanceData d = distances(c);
  const Matrix& m = c.setting() == Setting::Loop ? d.geodesic : d.chordal;
  std::vector<double> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) out.push_back(m(i, j));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> gram_spectrum(const Configuration& c) {
  const std::size_t n = c.size();
  Matrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = c.points()[i].dot(c.points()[j]);
  return jacobi_eigen(g).values;
}

}  // namespace

bool is_congruent(const Configuration& a, const Configuration& b, double tol) {
  if (a.setting() != b.setting() || a.size() != b.size())
    throw std::invalid_argument("is_congruent: settings and sizes must match");
  const std::vector<double> da = sorted_pair_distances(a);
  const std::vector<double> db = sorted_pair_distances(b);
  for (std::size_t i = 0; i < da.size(); ++i)
    if (std::fabs(da[i] - db[i]) > tol) return false;
  if (a.setting() == Setting::Sphere) {
    const std::vector<double> ga = gram_spectrum(a);
    const std::vector<double> gb = gram_spectrum(b);
    for (std::size_t i = 0; i < ga.size(); ++i)
      if (std::fabs(ga[i] - gb[i]) > tol) return false;
  }
  return true;
}

double sphere_monomial_integral(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0)
    throw std::invalid_argument("sphere_monomial_integral: negative exponent");
  if (a % 2 || b % 2 || c % 2) return 0.0;
  auto dfact = [](int k) {
    double p = 1.0;
    for (int i = k; i > 1; i -= 2) p *= i;
    return p;
  };
  return dfact(a - 1) * dfact(b - 1) * dfact(c - 1) / dfact(a + b + c + 1);
}

int spherical_design_strength(const Configuration& config, int m_max) {
  if (config.setting() != Setting::Sphere)
    throw std::invalid_argument("spherical_design_strength: sphere setting required");
  if (m_max < 1 || m_max > 8)
    throw std::invalid_argument("spherical_design_strength: m_max must be in [1,8]");
  const double tol = 1e-10;
  int strength = 0;
  for (int deg = 1; deg <= m_max; ++deg) {
    bool ok = true;
    for (int a = 0; a <= deg && ok; ++a)
      for (int b = 0; a + b <= deg && ok; ++b) {
        const int c = deg - a - b;
        double avg = 0.0;
        for (const Vec3& p : config.points())
          avg += std::pow(p.x, a) * std::pow(p.y, b) * std::pow(p.z, c);
        avg /= static_cast<double>(config.size());
        if (std::fabs(avg - sphere_monomial_integral(a, b, c)) > tol) ok = false;
      }
    if (!ok) break;
    strength = deg;
  }
  return strength;
}

std::string to_json_string(const Configuration& config, int indent) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["setting"] = setting_name(config.setting());
  j["N"] = config.size();
  if (uses_angles(config.setting())) {
    j["sites"] = config.angles();
  } else {
    nlohmann::json sites = nlohmann::json::array();
    for (const Vec3& p : config.points()) sites.push_back({p.x, p.y, p.z});
    j["sites"] = sites;
  }
  return j.dump(indent);
}

Configuration config_from_json_string(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const Setting s = setting_from_name(j.at("setting").get<std::string>());
  if (uses_angles(s))
    return Configuration::from_angles(s, j.at("sites").get<std::vector<double>>());
  std::vector<Vec3> pts;
  for (const auto& site : j.at("sites"))
    pts.push_back({site.at(0).get<double>(), site.at(1).get<double>(), site.at(2).get<double>()});
  return Configuration::from_sphere_points(std::move(pts));
}

Configuration resolve_config(const std::string& name_or_path, Setting s, int n) {
  if (name_or_path == "canonical") {
    if (s == Setting::Loop) return canonical_loop(n);
    if (uses_angles(s)) return canonical_circle(n, s);
    return sharp_sphere(n).first;
  }
  for (int sharp_n : {2, 3, 4, 6, 12}) {
    auto [cfg, info] = sharp_sphere(sharp_n);
    if (name_or_path == info.name) {
      if (s != Setting::Sphere)
        throw std::invalid_argument("builtin '" + name_or_path + "' requires the sphere setting");
      return cfg;
    }
  }
  std::ifstream in(name_or_path);
  if (!in) throw std::invalid_argument("cannot open configuration: " + name_or_path);
  std::stringstream ss;
  ss << in.rdbuf();
  Configuration cfg = config_from_json_string(ss.str());
  if (cfg.setting() != s)
    throw std::invalid_argument("configuration file setting does not match --setting");
  return cfg;
}

}  // namespace pointopt
