#pragma once

#include "hmcone/ambient.hpp"
#include "hmcone/grid.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hmcone {

/// Affine hyperplane {x : <normal, x> = offset}, normal of unit length.
struct Hyperplane {
  Vec normal;
  double offset = 0.0;
  double eval(const Vec& x) const { return normal.dot(x) - offset; }
};

enum class ConeKind { Classical, LogCone, XSinX, TwoRay, Halfspace, Compact };

/// Registry cone in R^n. The designated region is {level > 0}; the boundary is {level = 0}.
struct PerturbedCone {
  ConeKind kind = ConeKind::Classical;
  std::string name;
  int dim = 2;
  std::function<double(const Vec&)> level;
  /// Hyperplane normal tried first by enclosing_hyperplane (offset chosen above p).
  std::optional<Vec> enclosing_normal;
  /// Directions seeding the line probes (axes and asymptotic directions of the boundary).
  std::vector<Vec> probe_directions;
  /// Box from which probe base points are drawn.
  Vec probe_lo, probe_hi;
  /// Interior point used when a check needs one.
  Vec anchor;

  bool in_region(const Vec& x) const { return level(x) > 0.0; }
};

/// Cone region {<x - p, v> > cos(theta) |x - p| |v|}, theta in (0, pi/2).
PerturbedCone classical_cone(const Vec& p, const Vec& v, double theta);
/// Region above the negative x-axis glued to the graph of log(x + 1).
PerturbedCone log_cone();
/// Region above (upper = true) or below the graph of x sin x.
PerturbedCone xsinx_cone(bool upper);
/// Region between the negative x-axis and the ray e^{i theta} R_{>=0}, theta in [0, pi).
PerturbedCone two_ray_cone(double theta);
/// Upper halfspace {x_n > 0}; not a cone region.
PerturbedCone halfspace_region(int dim);
/// Interior of the closed ball K = B(center, radius).
PerturbedCone compact_cone(const Vec& center, double radius);

struct FloodOptions {
  double half_width = 16.0;  // box half-width around the seed point
  int cells = 400;           // per axis in dimension 2; 64 in higher dimension
};

struct Enclosure {
  Hyperplane plane;
  double radius = 0.0;      // B is contained in ball(p, radius)
  std::size_t cells = 0;    // grid cells of B
  int candidates_tried = 0;
};

/// Searches an affine hyperplane H such that the component of R \ H containing p
/// is bounded. Throws NotInConeRegion, EnclosureNotFound.
Enclosure enclosing_hyperplane(const PerturbedCone& cone, const Vec& p,
                               const FloodOptions& opts = {}, bool parallel = true);

struct LineProbeReport {
  bool line_found = false;
  std::size_t probes = 0;
  Vec base;       // counterexample, if any
  Vec direction;
};

/// Probes lines p + s v for |s| <= horizon; a probe survives when every sample lies in R.
LineProbeReport affine_line_check(const PerturbedCone& cone, std::size_t probes, double horizon,
                                  std::uint64_t seed, bool parallel = true);

/// Local cone: closed set {level = 0} together with a hyperplane H.
struct LocalCone {
  std::string name;
  int dim = 2;
  std::function<double(const Vec&)> level;
  Hyperplane plane;
};

/// V-notch polyline (-2,1) (-1,1) (0,0.25) (1,1) (2,1) with H: y = c.
LocalCone notch_local_cone(double c);
/// Sphere of given radius with a hyperplane through the ball.
LocalCone compact_local_cone(const Vec& center, double radius, const Hyperplane& plane);

struct LocalConeRegion {
  double radius = 0.0;
  std::size_t cells = 0;
  GridSpec grid;
  std::vector<char> member;  // cells of B
};

/// Flood fill of the component of R^n \ (C u H) containing q. Throws UnboundedComponent.
LocalConeRegion local_cone_region(const LocalCone& cone, const Vec& q, const FloodOptions& opts = {},
                                  bool parallel = true);

struct RadiusFunction {
  std::string name;
  std::function<double(double)> r;
};

RadiusFunction cos_theta_radius(double theta);  // cos(theta) t
RadiusFunction arctan_radius(double scale);     // arctan(scale t)
RadiusFunction linear_radius(double slope, double shift = 0.0);
RadiusFunction quadratic_radius(double coeff);  // coeff t^2

struct RiemannianCone {
  std::string name;
  ModelSpace ambient = ModelSpace::euclidean(2);
  GeodesicRay ray;
  RadiusFunction radius;
  double t_max = 4.0;  // truncation used by the sampled checks
};

/// Application cones (a)-(e): 'a' R^2, 'b' H^2, 'c' H^2 x R, 'd' S^1 x R, 'e' S^2 x R.
RiemannianCone application_cone(char which, double theta = 0.78539816339744831);

/// Is x in the union of closed balls B_{r(t)}(ray(t)) over t in [t_lo, t_hi]?
bool in_riemannian_cone(const RiemannianCone& cone, const Vec& x, double t_lo, double t_hi);

struct SeparationSample {
  double t = 0.0;
  int components = 0;      // components with at least min_component_cells cells
  int raw_components = 0;
};

struct RiemannianConeReport {
  double worst_margin = kInfinity;  // min over samples of min(t, r_c) - r(t)
  double worst_t = 0.0;
  std::size_t radius_samples = 0;
  std::vector<SeparationSample> separation;
  std::size_t cone_cells = 0;
};

struct ConeValidateOptions {
  std::size_t radius_samples = 1000;
  int separation_samples = 5;
  double t_lo_frac = 0.1;   // truncation of the cone near its vertex
  double sep_lo_frac = 0.4;  // sampled t' range, as fractions of t_max
  double sep_hi_frac = 0.8;
  int cells_2d = 200;
  int cells_3d = 64;
  std::size_t min_component_cells = 16;  // smaller grid components are staircase artefacts
  std::uint64_t seed = 1;
};

/// Radius inequality at samples, then grid separation of the truncated cone by
/// closed balls at sampled t'. Throws RadiusViolation, SeparationFailure.
RiemannianConeReport riemannian_cone_validate(const RiemannianCone& cone,
                                              const ConeValidateOptions& opts = {},
                                              bool parallel = true);

/// Is B_{r(t1)}(ray(t1)) inside B_{r(t2)}(ray(t2))? Samples the boundary, including
/// both points on the ray, and interior shells.
bool ball_containment(const RiemannianCone& cone, double t1, double t2,
                      std::size_t boundary_samples = 512);

struct TorusTransform {
  RiemannianCone cone;               // on (S^1)^n x R with R(t) = arctan(cos(theta) t)
  std::function<double(double)> doubled_radius;  // 2 arctan(cos(theta) t)
  double theta = 0.0;
  int n = 1;
};

/// Pushes the Euclidean cone (0, t), cos(theta) t through x -> 2 arctan(x). Throws InvalidAngle.
TorusTransform torus_cone_transform(double theta, int n = 1);
/// Largest flat-torus distance from psi(gamma(t)) to the image of the Euclidean ball boundary.
double torus_image_circumradius(const TorusTransform& tt, double t, std::size_t samples = 1000);

}  // namespace hmcone
