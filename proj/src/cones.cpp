#include "hmcone/cones.hpp"

#include "hmcone/error.hpp"
#include "hmcone/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace hmcone {

namespace {

constexpr double kPi = std::numbers::pi;

Vec vec2(double x, double y) { return (Vec(2) << x, y).finished(); }

Vec unit_axis(int dim, int i) {
  Vec e = Vec::Zero(dim);
  e(i) = 1.0;
  return e;
}

Vec random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Vec v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

// Deterministic unit directions: evenly spaced on the circle in dimension 2,
// a Fibonacci lattice in dimension 3, seeded Gaussian samples otherwise.
std::vector<Vec> unit_directions(int dim, std::size_t count) {
  std::vector<Vec> out;
  out.reserve(count);
  if (dim == 1) {
    for (std::size_t i = 0; i < count; ++i) out.push_back(Vec::Constant(1, i % 2 ? -1.0 : 1.0));
  } else if (dim == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double a = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(count);
      out.push_back(vec2(std::cos(a), std::sin(a)));
    }
  } else if (dim == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * static_cast<double>(i);
      out.push_back((Vec(3) << s * std::cos(a), s * std::sin(a), z).finished());
    }
  } else {
    std::mt19937_64 rng(0xd1ec7u);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_unit(rng, dim));
  }
  return out;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

struct FloodResult {
  bool found = false;    // seed cell is active
  bool bounded = false;
  double radius = 0.0;
  std::size_t cells = 0;
  GridSpec grid;
  std::vector<char> member;
};

// Component of {x : keep(x)} containing seed, on a box grid around the seed.
// A cell is active when its centre and all of its corners pass.
FloodResult flood_from(const Vec& seed, const std::function<bool(const Vec&)>& keep,
                       const FloodOptions& opts, bool parallel) {
  const int dim = static_cast<int>(seed.size());
  const int per_axis = dim == 2 ? opts.cells : 64;
  FloodResult res;
  res.grid = GridSpec::uniform(seed.array() - opts.half_width, seed.array() + opts.half_width,
                               per_axis);
  const GridSpec& grid = res.grid;
  const unsigned corners = 1u << dim;
  const auto active = kernels::mask(parallel, grid.size(), [&](std::size_t i) {
    if (!keep(grid.cell_center(i))) return false;
    for (unsigned c = 0; c < corners; ++c) {
      if (!keep(grid.cell_corner(i, c))) return false;
    }
    return true;
  });
  const std::size_t seed_cell = grid.locate(seed);
  if (seed_cell >= grid.size() || !active[seed_cell]) return res;
  const GridComponents comps = label_components(grid, active);
  const int label = comps.label[seed_cell];
  res.found = true;
  res.bounded = !comps.touches_border[label];
  res.member.assign(grid.size(), 0);
  const double half_diag = 0.5 * grid.cell_width().norm();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (comps.label[i] != label) continue;
    res.member[i] = 1;
    ++res.cells;
    res.radius = std::max(res.radius, (grid.cell_center(i) - seed).norm() + half_diag);
  }
  return res;
}

}  // namespace

PerturbedCone classical_cone(const Vec& p, const Vec& v, double theta) {
  if (p.size() != v.size() || p.size() < 2) throw Error(ErrorCode::ConfigError, "p and v must share dimension >= 2");
  if (!(v.norm() > 0.0)) throw Error(ErrorCode::InvalidDirection, "v must be nonzero");
  if (!(theta > 0.0 && theta < kPi / 2.0)) throw Error(ErrorCode::InvalidAngle, "theta must lie in (0, pi/2)");
  const int dim = static_cast<int>(p.size());
  const Vec vh = v / v.norm();
  const double ct = std::cos(theta);
  PerturbedCone cone;
  cone.kind = ConeKind::Classical;
  cone.name = "classical";
  cone.dim = dim;
  cone.level = [p, vh, ct](const Vec& x) {
    const Vec w = x - p;
    return w.dot(vh) - ct * w.norm();
  };
  cone.enclosing_normal = vh;
  cone.probe_directions = {vh};
  for (int i = 0; i < dim; ++i) cone.probe_directions.push_back(unit_axis(dim, i));
  if (dim == 2) {
    const Vec perp = vec2(-vh(1), vh(0));
    cone.probe_directions.push_back(ct * vh + std::sin(theta) * perp);
    cone.probe_directions.push_back(ct * vh - std::sin(theta) * perp);
  }
  cone.probe_lo = p.array() - 5.0;
  cone.probe_hi = p.array() + 5.0;
  cone.anchor = p + vh;
  return cone;
}

namespace {
double log_glued(double x) { return x < 0.0 ? 0.0 : std::log1p(x); }
}  // namespace

PerturbedCone log_cone() {
  PerturbedCone cone;
  cone.kind = ConeKind::LogCone;
  cone.name = "log_cone";
  cone.level = [](const Vec& x) { return x(1) - log_glued(x(0)); };
  // A line of small positive slope meets the graph of log(1 + x) twice.
  cone.enclosing_normal = Vec(vec2(-0.1, 1.0).normalized());
  cone.probe_directions = {vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(1.0, 1.0) / std::sqrt(2.0)};
  cone.probe_lo = vec2(-3.0, 0.0);
  cone.probe_hi = vec2(3.0, 3.0);
  cone.anchor = vec2(0.0, 1.0);
  return cone;
}

PerturbedCone xsinx_cone(bool upper) {
  PerturbedCone cone;
  cone.kind = ConeKind::XSinX;
  cone.name = upper ? "xsinx_upper" : "xsinx_lower";
  const double s = upper ? 1.0 : -1.0;
  cone.level = [s](const Vec& x) { return s * (x(1) - x(0) * std::sin(x(0))); };
  cone.enclosing_normal = vec2(0.0, s);
  cone.probe_directions = {vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(1.0, 1.0) / std::sqrt(2.0),
                           vec2(1.0, -1.0) / std::sqrt(2.0)};
  cone.probe_lo = vec2(-5.0, -5.0);
  cone.probe_hi = vec2(5.0, 5.0);
  cone.anchor = vec2(0.0, s);
  return cone;
}

PerturbedCone two_ray_cone(double theta) {
  if (!(theta >= 0.0 && theta < kPi)) throw Error(ErrorCode::InvalidAngle, "theta must lie in [0, pi)");
  PerturbedCone cone;
  cone.kind = ConeKind::TwoRay;
  cone.name = "two_ray";
  const double c = std::cos(theta), s = std::sin(theta);
  const bool convex = theta <= kPi / 2.0;
  cone.level = [c, s, convex](const Vec& x) {
    const double a = x(1);
    const double b = c * x(1) - s * x(0);  // > 0 left of the ray e^{i theta}
    return convex ? std::min(a, b) : std::max(a, b);
  };
  const double mid = 0.5 * (theta + kPi);
  cone.enclosing_normal = vec2(std::cos(mid), std::sin(mid));
  cone.probe_directions = {vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(c, s)};
  cone.probe_lo = vec2(-5.0, 0.0);
  cone.probe_hi = vec2(5.0, 10.0);
  cone.anchor = vec2(std::cos(mid), std::sin(mid));
  return cone;
}

PerturbedCone halfspace_region(int dim) {
  if (dim < 1) throw Error(ErrorCode::ConfigError, "dimension must be positive");
  PerturbedCone cone;
  cone.kind = ConeKind::Halfspace;
  cone.name = "halfspace";
  cone.dim = dim;
  cone.level = [dim](const Vec& x) { return x(dim - 1); };
  cone.enclosing_normal = unit_axis(dim, dim - 1);
  for (int i = 0; i < dim; ++i) cone.probe_directions.push_back(unit_axis(dim, i));
  cone.probe_lo = Vec::Constant(dim, -5.0);
  cone.probe_hi = Vec::Constant(dim, 5.0);
  cone.probe_lo(dim - 1) = 0.0;
  cone.probe_hi(dim - 1) = 10.0;
  cone.anchor = unit_axis(dim, dim - 1);
  return cone;
}

PerturbedCone compact_cone(const Vec& center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::NonpositiveParameter, "radius must be positive");
  const int dim = static_cast<int>(center.size());
  PerturbedCone cone;
  cone.kind = ConeKind::Compact;
  cone.name = "compact";
  cone.dim = dim;
  cone.level = [center, radius](const Vec& x) { return radius - (x - center).norm(); };
  cone.enclosing_normal = unit_axis(dim, 0);
  for (int i = 0; i < dim; ++i) cone.probe_directions.push_back(unit_axis(dim, i));
  cone.probe_lo = center.array() - radius;
  cone.probe_hi = center.array() + radius;
  cone.anchor = center;
  return cone;
}

Enclosure enclosing_hyperplane(const PerturbedCone& cone, const Vec& p, const FloodOptions& opts,
                               bool parallel) {
  if (p.size() != cone.dim || !cone.in_region(p)) {
    throw Error(ErrorCode::NotInConeRegion, "point is not in the designated cone region");
  }
  std::vector<Vec> normals;
  if (cone.enclosing_normal) normals.push_back(*cone.enclosing_normal);
  if (cone.dim == 2) {
    for (int k = 0; k < 16; ++k) {
      const double a = 2.0 * kPi * k / 16.0;
      normals.push_back(vec2(std::cos(a), std::sin(a)));
    }
  } else {
    for (int i = 0; i < cone.dim; ++i) {
      normals.push_back(unit_axis(cone.dim, i));
      normals.push_back(-unit_axis(cone.dim, i));
    }
  }
  Enclosure enc;
  for (const Vec& n : normals) {
    for (double delta : {1.0, 0.5, 0.25, 2.0, 4.0}) {
      ++enc.candidates_tried;
      const Hyperplane plane{n, n.dot(p) + delta};
      const FloodResult fr = flood_from(
          p, [&](const Vec& x) { return cone.level(x) > 0.0 && plane.eval(x) < 0.0; }, opts,
          parallel);
      if (fr.found && fr.bounded) {
        enc.plane = plane;
        enc.radius = fr.radius;
        enc.cells = fr.cells;
        return enc;
      }
    }
  }
  std::ostringstream os;
  os << "no bounded component after " << enc.candidates_tried << " hyperplane candidates";
  throw Error(ErrorCode::EnclosureNotFound, os.str());
}

LineProbeReport affine_line_check(const PerturbedCone& cone, std::size_t probes, double horizon,
                                  std::uint64_t seed, bool parallel) {
  constexpr int kHalfSteps = 2000;
  const double step = horizon / kHalfSteps;
  const std::size_t seeded = std::min(probes / 4, cone.probe_directions.size() * 64);
  std::vector<Vec> bases(probes), dirs(probes);
  for (std::size_t i = 0; i < probes; ++i) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + i);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vec b(cone.dim);
    for (int tries = 0; tries < 1000; ++tries) {
      for (int a = 0; a < cone.dim; ++a) {
        b(a) = cone.probe_lo(a) + unif(rng) * (cone.probe_hi(a) - cone.probe_lo(a));
      }
      if (cone.in_region(b)) break;
      b = cone.anchor;
    }
    bases[i] = b;
    if (i < seeded) {
      const Vec& d = cone.probe_directions[i % cone.probe_directions.size()];
      dirs[i] = d / d.norm();
    } else {
      dirs[i] = random_unit(rng, cone.dim);
    }
  }
  const auto survived = kernels::mask(parallel, probes, [&](std::size_t i) {
    if (!cone.in_region(bases[i])) return false;
    for (int k = 1; k <= kHalfSteps; ++k) {
      const double s = k * step;
      if (!cone.in_region(bases[i] + s * dirs[i])) return false;
      if (!cone.in_region(bases[i] - s * dirs[i])) return false;
    }
    return true;
  });
  LineProbeReport report;
  report.probes = probes;
  const auto it = std::find(survived.begin(), survived.end(), 1);
  if (it != survived.end()) {
    const std::size_t i = static_cast<std::size_t>(it - survived.begin());
    report.line_found = true;
    report.base = bases[i];
    report.direction = dirs[i];
  }
  return report;
}

LocalCone notch_local_cone(double c) {
  LocalCone lc;
  lc.name = "notch";
  lc.level = [](const Vec& x) {
    const double ax = std::abs(x(0));
    const double h = ax >= 1.0 ? 1.0 : 0.25 + 0.75 * ax;
    return x(1) - h;
  };
  lc.plane = Hyperplane{vec2(0.0, 1.0), c};
  return lc;
}

LocalCone compact_local_cone(const Vec& center, double radius, const Hyperplane& plane) {
  if (!(radius > 0.0)) throw Error(ErrorCode::NonpositiveParameter, "radius must be positive");
  LocalCone lc;
  lc.name = "compact";
  lc.dim = static_cast<int>(center.size());
  lc.level = [center, radius](const Vec& x) { return radius - (x - center).norm(); };
  lc.plane = plane;
  return lc;
}

LocalConeRegion local_cone_region(const LocalCone& cone, const Vec& q, const FloodOptions& opts,
                                  bool parallel) {
  const int s_level = sign_of(cone.level(q));
  const int s_plane = sign_of(cone.plane.eval(q));
  if (s_level == 0 || s_plane == 0) {
    throw Error(ErrorCode::NotInConeRegion, "q lies on the local cone or on H");
  }
  const FloodResult fr = flood_from(
      q,
      [&](const Vec& x) {
        return sign_of(cone.level(x)) == s_level && sign_of(cone.plane.eval(x)) == s_plane;
      },
      opts, parallel);
  if (!fr.found || !fr.bounded) {
    throw Error(ErrorCode::UnboundedComponent, "component of q reaches the sampling box");
  }
  LocalConeRegion region;
  region.radius = fr.radius;
  region.cells = fr.cells;
  region.grid = fr.grid;
  region.member = fr.member;
  return region;
}

RadiusFunction cos_theta_radius(double theta) {
  const double c = std::cos(theta);
  return {"cos_theta_t", [c](double t) { return c * t; }};
}

RadiusFunction arctan_radius(double scale) {
  return {"arctan", [scale](double t) { return std::atan(scale * t); }};
}

RadiusFunction linear_radius(double slope, double shift) {
  return {"linear", [slope, shift](double t) { return slope * t + shift; }};
}

RadiusFunction quadratic_radius(double coeff) {
  return {"quadratic", [coeff](double t) { return coeff * t * t; }};
}

RiemannianCone application_cone(char which, double theta) {
  if (!(theta > 0.0 && theta < kPi / 2.0)) throw Error(ErrorCode::InvalidAngle, "theta must lie in (0, pi/2)");
  RiemannianCone cone;
  const double s = 1.0 / std::sqrt(2.0);
  switch (which) {
    case 'a':
      cone.name = "euclidean_plane";
      cone.ambient = ModelSpace::euclidean(2);
      cone.ray = {vec2(0.0, 0.0), vec2(0.0, 1.0)};
      cone.radius = cos_theta_radius(theta);
      cone.t_max = 4.0;
      break;
    case 'b':
      cone.name = "hyperbolic_plane";
      cone.ambient = ModelSpace::hyperbolic(2);
      cone.ray = {vec2(0.0, 1.0), vec2(0.0, 1.0)};
      cone.radius = cos_theta_radius(theta);
      cone.t_max = 3.0;
      break;
    case 'c':
      cone.name = "hyperbolic_times_line";
      cone.ambient = ModelSpace::product({ModelSpace::hyperbolic(2), ModelSpace::euclidean(1)});
      cone.ray = {(Vec(3) << 0.0, 1.0, 0.0).finished(), (Vec(3) << 0.0, s, s).finished()};
      cone.radius = cos_theta_radius(theta);
      cone.t_max = 3.0;
      break;
    case 'd':
      return torus_cone_transform(theta, 1).cone;
    case 'e':
      cone.name = "sphere_times_line";
      cone.ambient = ModelSpace::product({ModelSpace::sphere(2), ModelSpace::euclidean(1)});
      cone.ray = {(Vec(4) << 0.0, 0.0, -1.0, 0.0).finished(),
                  (Vec(4) << 0.0, 0.0, 0.0, 1.0).finished()};
      cone.radius = arctan_radius(1.0);
      cone.t_max = 4.0;
      break;
    default:
      throw Error(ErrorCode::ConfigError, std::string("unknown application cone '") + which + "'");
  }
  validate_ray(cone.ambient, cone.ray);
  return cone;
}

namespace {

// Cone membership with precomputed centres on a coarse t-grid, refined by
// golden-section search around the best coarse value.
class ConeSampler {
 public:
  ConeSampler(const RiemannianCone& cone, double t_lo, double t_hi, int coarse = 96)
      : cone_(cone), t_lo_(t_lo), t_hi_(t_hi) {
    for (int k = 0; k < coarse; ++k) {
      const double t = t_lo + (t_hi - t_lo) * k / (coarse - 1);
      ts_.push_back(t);
      centres_.push_back(ray_point(cone.ambient, cone.ray, t));
      radii_.push_back(cone.radius.r(t));
    }
  }

  bool contains(const Vec& x) const {
    double best = kInfinity;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < ts_.size(); ++k) {
      const double g = distance(cone_.ambient, x, centres_[k]) - radii_[k];
      if (g <= 0.0) return true;
      if (g < best) {
        best = g;
        arg = k;
      }
    }
    double a = ts_[arg == 0 ? 0 : arg - 1];
    double b = ts_[std::min(arg + 1, ts_.size() - 1)];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double gc = gap(x, c), gd = gap(x, d);
    for (int it = 0; it < 40; ++it) {
      if (std::min(gc, gd) <= 0.0) return true;
      if (gc < gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - phi * (b - a);
        gc = gap(x, c);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + phi * (b - a);
        gd = gap(x, d);
      }
    }
    return std::min(gc, gd) <= 0.0;
  }

 private:
  double gap(const Vec& x, double t) const {
    return distance(cone_.ambient, x, ray_point(cone_.ambient, cone_.ray, t)) - cone_.radius.r(t);
  }

  const RiemannianCone& cone_;
  double t_lo_, t_hi_;
  std::vector<double> ts_;
  std::vector<Vec> centres_;
  std::vector<double> radii_;
};

// Normal coordinates at the ray's base point.
struct NormalChart {
  ModelSpace space;
  Vec base;
  Mat basis;  // metric-orthonormal columns
  Mat metric;

  NormalChart(const ModelSpace& s, const Vec& p)
      : space(s), base(p), basis(tangent_basis(s, p)), metric(metric_at(s, p)) {}

  Vec to_point(const Vec& c) const { return exp_map(space, base, basis * c); }
  Vec to_chart(const Vec& x) const { return basis.transpose() * metric * log_map(space, base, x); }
};

std::vector<Vec> ball_boundary(const ModelSpace& space, const Vec& centre, double r,
                               const std::vector<Vec>& dirs) {
  const Mat basis = tangent_basis(space, centre);
  std::vector<Vec> out;
  out.reserve(dirs.size());
  for (const Vec& u : dirs) out.push_back(exp_map(space, centre, r * (basis * u)));
  return out;
}

}  // namespace

bool in_riemannian_cone(const RiemannianCone& cone, const Vec& x, double t_lo, double t_hi) {
  return ConeSampler(cone, t_lo, t_hi).contains(x);
}

RiemannianConeReport riemannian_cone_validate(const RiemannianCone& cone,
                                              const ConeValidateOptions& opts, bool parallel) {
  validate_ray(cone.ambient, cone.ray);
  RiemannianConeReport report;
  for (std::size_t k = 1; k <= opts.radius_samples; ++k) {
    const double t = cone.t_max * static_cast<double>(k) / static_cast<double>(opts.radius_samples);
    const double r = cone.radius.r(t);
    const double bound = std::min(t, convexity_radius(cone.ambient, ray_point(cone.ambient, cone.ray, t)));
    const double margin = bound - r;
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_t = t;
    }
    if (!(r > 0.0) || !(margin > 0.0)) {
      std::ostringstream os;
      os << "r(t) = " << r << " violates 0 < r(t) < min(t, r_c) = " << bound << " at t = " << t;
      throw Error(ErrorCode::RadiusViolation, os.str());
    }
  }
  report.radius_samples = opts.radius_samples;

  const double t_lo = opts.t_lo_frac * cone.t_max;
  const ConeSampler sampler(cone, t_lo, cone.t_max);
  const NormalChart chart(cone.ambient, cone.ray.base_point);
  const int dim = cone.ambient.dim();
  const auto dirs = unit_directions(dim, dim == 2 ? 64 : 256);
  Vec lo = Vec::Constant(dim, kInfinity), hi = Vec::Constant(dim, -kInfinity);
  for (int k = 0; k < 64; ++k) {
    const double t = t_lo + (cone.t_max - t_lo) * k / 63.0;
    for (const Vec& x : ball_boundary(cone.ambient, ray_point(cone.ambient, cone.ray, t),
                                      cone.radius.r(t), dirs)) {
      const Vec c = chart.to_chart(x);
      lo = lo.cwiseMin(c);
      hi = hi.cwiseMax(c);
    }
  }
  const Vec pad = 0.05 * (hi - lo);
  const GridSpec grid = GridSpec::uniform(lo - pad, hi + pad, dim == 2 ? opts.cells_2d : opts.cells_3d);
  std::vector<Vec> points(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) points[i] = chart.to_point(grid.cell_center(i));
  const auto in_cone = kernels::mask(parallel, grid.size(),
                                     [&](std::size_t i) { return sampler.contains(points[i]); });
  report.cone_cells = static_cast<std::size_t>(std::count(in_cone.begin(), in_cone.end(), 1));
  // One cell layer is peeled off so that slivers along the tangency of the ball
  // and the cone boundary do not register as components.
  const auto core = erode(grid, in_cone);
  const std::size_t min_cells = opts.min_component_cells;

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(opts.sep_lo_frac, opts.sep_hi_frac);
  for (int s = 0; s < opts.separation_samples; ++s) {
    const double t = unif(rng) * cone.t_max;
    const Vec centre = ray_point(cone.ambient, cone.ray, t);
    const double r = cone.radius.r(t);
    const auto active = kernels::mask(parallel, grid.size(), [&](std::size_t i) {
      return core[i] && distance(cone.ambient, points[i], centre) > r;
    });
    const GridComponents comp = label_components(grid, active);
    int components = 0;
    for (std::size_t size : comp.sizes) components += size >= min_cells ? 1 : 0;
    report.separation.push_back({t, components, comp.count});
    if (components != 2) {
      std::ostringstream os;
      os << "cone minus closed ball at t' = " << t << " has " << components << " components of sizes";
      for (std::size_t size : comp.sizes) os << " " << size;
      throw Error(ErrorCode::SeparationFailure, os.str());
    }
  }
  return report;
}

bool ball_containment(const RiemannianCone& cone, double t1, double t2,
                      std::size_t boundary_samples) {
  const ModelSpace& space = cone.ambient;
  const Vec c1 = ray_point(space, cone.ray, t1);
  const Vec c2 = ray_point(space, cone.ray, t2);
  const double r1 = cone.radius.r(t1);
  const double r2 = cone.radius.r(t2);
  const double tol = 1e-9 * r2;
  std::vector<Vec> tangents;
  if (t1 > 0.0) {
    Vec back = log_map(space, c1, cone.ray.base_point);
    back /= tangent_norm(space, c1, back);
    tangents.push_back(back);
    tangents.push_back(-back);
  }
  const Mat basis = tangent_basis(space, c1);
  for (const Vec& u : unit_directions(space.dim(), boundary_samples)) tangents.push_back(basis * u);
  for (const Vec& v : tangents) {
    for (double shell : {1.0, 0.75, 0.5, 0.25}) {
      if (distance(space, exp_map(space, c1, shell * r1 * v), c2) > r2 + tol) return false;
    }
  }
  return distance(space, c1, c2) <= r2 + tol;
}

TorusTransform torus_cone_transform(double theta, int n) {
  if (!(theta > 0.0 && theta < kPi / 2.0)) throw Error(ErrorCode::InvalidAngle, "theta must lie in (0, pi/2)");
  if (n < 1) throw Error(ErrorCode::ConfigError, "torus dimension must be positive");
  std::vector<ModelSpace> factors(n, ModelSpace::sphere(1));
  factors.push_back(ModelSpace::euclidean(1));
  TorusTransform tt;
  tt.theta = theta;
  tt.n = n;
  tt.cone.name = "torus_times_line";
  tt.cone.ambient = ModelSpace::product(factors);
  Vec base = Vec::Zero(2 * n + 1), dir = Vec::Zero(2 * n + 1);
  for (int i = 0; i < n; ++i) base(2 * i + 1) = -1.0;
  dir(2 * n) = 1.0;
  tt.cone.ray = {base, dir};
  const double c = std::cos(theta);
  tt.cone.radius = {"arctan_cos_theta_t", [c](double t) { return std::atan(c * t); }};
  tt.cone.t_max = 4.0;
  tt.doubled_radius = [c](double t) { return 2.0 * std::atan(c * t); };
  return tt;
}

double torus_image_circumradius(const TorusTransform& tt, double t, std::size_t samples) {
  const double r = std::cos(tt.theta) * t;
  double worst = 0.0;
  for (const Vec& u : unit_directions(tt.n + 1, samples)) {
    double s = 0.0;
    for (int i = 0; i < tt.n; ++i) {
      const double a = 2.0 * std::atan(r * u(i));
      s += a * a;
    }
    const double ds = r * u(tt.n);
    worst = std::max(worst, std::sqrt(s + ds * ds));
  }
  return worst;
}

}  // namespace hmcone
