#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pointopt/linalg.hpp"

namespace pointopt {

/// Which geometry / kernel is in force.
enum class Setting { Loop, Circle2, Circle3, Sphere };

/// Ambient dimension of the free resolvent kernel (loop is the 1-D case).
int ambient_nu(Setting s);
bool uses_angles(Setting s);  // loop and both circle settings

std::string setting_name(Setting s);
Setting setting_from_name(const std::string& name);

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm() const;
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
};
Vec3 operator-(const Vec3& a, const Vec3& b);

inline constexpr double kMinSiteGap = 1e-9;

/// Interaction support Y.  Loop/circle sites are strictly increasing angles
/// in [0, 2pi); sphere sites are unit 3-vectors with pairwise chordal
/// separation above kMinSiteGap.  Immutable after construction.
class Configuration {
public:
  Configuration() = default;

  static Configuration from_angles(Setting s, std::vector<double> angles);
  static Configuration from_sphere_points(std::vector<Vec3> points);

  Setting setting() const { return setting_; }
  std::size_t size() const { return uses_angles(setting_) ? angles_.size() : points_.size(); }
  const std::vector<double>& angles() const { return angles_; }
  const std::vector<Vec3>& points() const { return points_; }

private:
  Setting setting_ = Setting::Loop;
  std::vector<double> angles_;
  std::vector<Vec3> points_;
};

struct DistanceData {
  Matrix geodesic;  // loop only, entries in (0, pi], zero diagonal
  Matrix chordal;   // circle and sphere
  Matrix angular;   // circle only
};

struct SharpConfig {
  std::string name;
  int n = 0;
  std::vector<double> inner_products;  // distinct values among distinct points
  int m = 0;                           // count of distinct inner products
  int design_strength = 0;             // 2m - 1
};

/// Equidistant loop set  { pi (2j-1) / N }.
Configuration canonical_loop(int n);

/// Regular N-polygon on the unit circle in R^nu (setting Circle2 or Circle3).
Configuration canonical_circle(int n, Setting s);

/// Universally optimal sphere configurations, fixed reference orientation.
/// Supported N: 2 (antipodal pair), 3 (triangle), 4 (tetrahedron),
/// 6 (octahedron), 12 (icosahedron).
std::pair<Configuration, SharpConfig> sharp_sphere(int n);

/// Seeded uniform sampling (angles, or normalized Gaussian triples on S^2).
Configuration random_config(Setting s, int n, std::uint64_t seed);

DistanceData distances(const Configuration& config);

/// Operational congruence: sorted pairwise-distance multisets agree within
/// tol, plus (sphere) sorted Gram-spectrum agreement.
bool is_congruent(const Configuration& a, const Configuration& b, double tol);

/// Largest M <= m_max such that Y averages every monomial of total degree
/// <= M to its exact normalized sphere integral within 1e-10.
int spherical_design_strength(const Configuration& config, int m_max);

/// Exact normalized surface integral of x^a y^b z^c over the unit sphere.
double sphere_monomial_integral(int a, int b, int c);

// JSON serialization ({schema_version, setting, N, sites, seed?}).
std::string to_json_string(const Configuration& config, int indent = -1);
Configuration config_from_json_string(const std::string& text);

/// Resolves a named builtin ("canonical", "octahedron", ...) or a JSON file.
Configuration resolve_config(const std::string& name_or_path, Setting s, int n);

}  // namespace pointopt
