#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <vector>

namespace hmcone {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class SpaceKind { Euclidean, Hyperbolic, Sphere, Product };

/// Closed catalog of ambient model spaces.
///
/// Points are stored in model coordinates:
///  - Euclidean(n): R^n.
///  - Hyperbolic(n): upper halfspace, last coordinate > 0, metric |dx|^2 / x_n^2.
///  - Sphere(n): unit vectors of R^{n+1}.
///  - Product: concatenation of factor coordinates.
class ModelSpace {
 public:
  static ModelSpace euclidean(int n);
  static ModelSpace hyperbolic(int n);
  static ModelSpace sphere(int n);
  static ModelSpace product(std::vector<ModelSpace> factors);

  SpaceKind kind() const { return kind_; }
  int dim() const { return dim_; }
  /// Number of model coordinates of a point (Sphere(n) uses n + 1).
  int coord_dim() const { return coord_dim_; }
  const std::vector<ModelSpace>& factors() const { return factors_; }
  /// Coordinate offset of factor i inside a product point.
  int factor_offset(std::size_t i) const;

  std::string name() const;
  bool operator==(const ModelSpace& other) const;

 private:
  ModelSpace(SpaceKind kind, int dim, int coord_dim, std::vector<ModelSpace> factors = {})
      : kind_(kind), dim_(dim), coord_dim_(coord_dim), factors_(std::move(factors)) {}

  SpaceKind kind_;
  int dim_;
  int coord_dim_;
  std::vector<ModelSpace> factors_;
};

struct GeodesicRay {
  Vec base_point;
  Vec direction;  // unit with respect to the ambient metric at base_point
};

enum class Containment { Inside, Outside, Indeterminate };

std::string to_string(Containment c);

// Throws InvalidPoint.
void validate_point(const ModelSpace& space, const Vec& p);
bool is_valid_point(const ModelSpace& space, const Vec& p);

Mat metric_at(const ModelSpace& space, const Vec& p);
double tangent_norm(const ModelSpace& space, const Vec& p, const Vec& v);
double inner(const ModelSpace& space, const Vec& p, const Vec& v, const Vec& w);

/// h-orthonormal basis of T_p (columns, in model coordinates).
Mat tangent_basis(const ModelSpace& space, const Vec& p);

/// Unit-speed geodesic through (p, v) evaluated at arclength t. Requires |v|_h = 1.
Vec geodesic(const ModelSpace& space, const Vec& p, const Vec& v, double t);
/// exp_p(v) for an arbitrary tangent vector.
Vec exp_map(const ModelSpace& space, const Vec& p, const Vec& v);
/// log_p(q): initial velocity of the minimizing geodesic from p reaching q at time 1.
Vec log_map(const ModelSpace& space, const Vec& p, const Vec& q);

double distance(const ModelSpace& space, const Vec& p, const Vec& q);
double convexity_radius(const ModelSpace& space, const Vec& p);

Vec ray_point(const ModelSpace& space, const GeodesicRay& ray, double t);
void validate_ray(const ModelSpace& space, const GeodesicRay& ray);

/// Membership in the union of closed balls B_t(ray(t)) over t > 0.
/// Euclidean and hyperbolic spaces are decided analytically; other spaces by a
/// monotone search over a geometric grid of t up to t_max.
Containment halfspace_contains(const ModelSpace& space, const GeodesicRay& ray, const Vec& p,
                               double t_max = 1e6);
/// Search-only route, kept separately so the analytic shortcuts can be checked against it.
Containment halfspace_contains_search(const ModelSpace& space, const GeodesicRay& ray,
                                      const Vec& p, double t_max = 1e6);

/// Chart used for grid sampling: Euclidean identity, hyperbolic (x, log y),
/// sphere stereographic projection from the north pole, products blockwise.
int chart_dim(const ModelSpace& space);
Vec to_chart(const ModelSpace& space, const Vec& p);
Vec from_chart(const ModelSpace& space, const Vec& c);

}  // namespace hmcone
