#include "hmcone/ambient.hpp"

#include "hmcone/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hmcone {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::NonUnitDirection: return "NonUnitDirection";
    case ErrorCode::NonpositiveHeight: return "NonpositiveHeight";
    case ErrorCode::NonpositiveParameter: return "NonpositiveParameter";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::EmptySampleSet: return "EmptySampleSet";
    case ErrorCode::DegenerateRadii: return "DegenerateRadii";
    case ErrorCode::InvalidDirection: return "InvalidDirection";
    case ErrorCode::InvalidHeights: return "InvalidHeights";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::InvalidAngle: return "InvalidAngle";
    case ErrorCode::OutsideFoliation: return "OutsideFoliation";
    case ErrorCode::CyclicInput: return "CyclicInput";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NotInConeRegion: return "NotInConeRegion";
    case ErrorCode::EnclosureNotFound: return "EnclosureNotFound";
    case ErrorCode::UnboundedComponent: return "UnboundedComponent";
    case ErrorCode::RadiusViolation: return "RadiusViolation";
    case ErrorCode::SeparationFailure: return "SeparationFailure";
    case ErrorCode::InvalidMap: return "InvalidMap";
    case ErrorCode::InvalidMesh: return "InvalidMesh";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::ConstantMap: return "ConstantMap";
    case ErrorCode::MaximumPrincipleViolation: return "MaximumPrincipleViolation";
    case ErrorCode::StalledInterior: return "StalledInterior";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::string to_string(Containment c) {
  switch (c) {
    case Containment::Inside: return "inside";
    case Containment::Outside: return "outside";
    case Containment::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

namespace {

constexpr double kSphereNormTol = 1e-12;
constexpr double kUnitTol = 1e-12;

// Applies fn(factor, offset) for each factor of a product.
template <typename Fn>
void for_each_factor(const ModelSpace& space, Fn&& fn) {
  for (std::size_t i = 0; i < space.factors().size(); ++i) {
    fn(space.factors()[i], space.factor_offset(i));
  }
}

double hyperbolic_distance(const Vec& p, const Vec& q) {
  const double y1 = p(p.size() - 1);
  const double y2 = q(q.size() - 1);
  return 2.0 * std::asinh((p - q).norm() / (2.0 * std::sqrt(y1 * y2)));
}

double sphere_distance(const Vec& p, const Vec& q) {
  const double chord = (p - q).norm();
  if (chord < std::numbers::sqrt2) return 2.0 * std::asin(std::min(1.0, chord / 2.0));
  return std::numbers::pi - 2.0 * std::asin(std::min(1.0, (p + q).norm() / 2.0));
}

Vec hyperbolic_exp(const Vec& p, const Vec& v) {
  const Eigen::Index n = p.size();
  const double y0 = p(n - 1);
  const double vn = v.norm();
  const double s = vn / y0;  // hyperbolic length of v
  if (s == 0.0) return p;
  // Unit-speed geodesic with Euclidean initial direction (a, b):
  // x = x0 + y0 a sinh(s) / D, y = y0 / D, D = cosh(s) - b sinh(s).
  const double b = v(n - 1) / vn;
  const double a2 = v.head(n - 1).squaredNorm() / (vn * vn);
  const double one_minus_b = b > 0.0 ? a2 / (1.0 + b) : 1.0 - b;
  const double one_plus_b = b < 0.0 ? a2 / (1.0 - b) : 1.0 + b;
  const double denom = 0.5 * (std::exp(-s) * one_plus_b + std::exp(s) * one_minus_b);
  Vec out = p;
  out.head(n - 1) += (y0 * std::sinh(s) / denom / vn) * v.head(n - 1);
  out(n - 1) = y0 / denom;
  return out;
}

Vec hyperbolic_log(const Vec& p, const Vec& q) {
  const Eigen::Index n = p.size();
  const double d = hyperbolic_distance(p, q);
  Vec v = Vec::Zero(n);
  if (d == 0.0) return v;
  const double y1 = p(n - 1);
  const double y2 = q(n - 1);
  const Vec dh = q.head(n - 1) - p.head(n - 1);
  const double L = dh.norm();
  if (L <= 1e-14 * (y1 + y2)) {
    v(n - 1) = (y2 > y1 ? 1.0 : -1.0) * y1 * d;
    return v;
  }
  const Vec u = dh / L;
  const double c = (L * L + y2 * y2 - y1 * y1) / (2.0 * L);
  const double norm = std::hypot(y1, c);
  v.head(n - 1) = (d * y1 * y1 / norm) * u;
  v(n - 1) = d * y1 * c / norm;
  return v;
}

Vec sphere_exp(const Vec& p, const Vec& v) {
  const double theta = v.norm();
  if (theta == 0.0) return p;
  Vec out = std::cos(theta) * p + (std::sin(theta) / theta) * v;
  return out / out.norm();
}

Vec sphere_log(const Vec& p, const Vec& q) {
  const double dot = p.dot(q);
  const Vec w = q - dot * p;
  const double wn = w.norm();
  if (wn < 1e-15) {
    if (dot > 0.0) return Vec::Zero(p.size());
    throw Error(ErrorCode::InvalidPoint, "logarithm undefined for antipodal points");
  }
  return sphere_distance(p, q) * (w / wn);
}

}  // namespace

ModelSpace ModelSpace::euclidean(int n) {
  if (n < 1) throw Error(ErrorCode::ConfigError, "dimension must be positive");
  return ModelSpace(SpaceKind::Euclidean, n, n);
}

ModelSpace ModelSpace::hyperbolic(int n) {
  if (n < 1) throw Error(ErrorCode::ConfigError, "dimension must be positive");
  return ModelSpace(SpaceKind::Hyperbolic, n, n);
}

ModelSpace ModelSpace::sphere(int n) {
  if (n < 1) throw Error(ErrorCode::ConfigError, "dimension must be positive");
  return ModelSpace(SpaceKind::Sphere, n, n + 1);
}

ModelSpace ModelSpace::product(std::vector<ModelSpace> factors) {
  if (factors.empty()) throw Error(ErrorCode::ConfigError, "product needs at least one factor");
  int dim = 0;
  int coord = 0;
  for (const auto& f : factors) {
    dim += f.dim();
    coord += f.coord_dim();
  }
  return ModelSpace(SpaceKind::Product, dim, coord, std::move(factors));
}

int ModelSpace::factor_offset(std::size_t i) const {
  int off = 0;
  for (std::size_t k = 0; k < i; ++k) off += factors_[k].coord_dim();
  return off;
}

std::string ModelSpace::name() const {
  std::ostringstream os;
  switch (kind_) {
    case SpaceKind::Euclidean: os << "Euclidean(" << dim_ << ")"; break;
    case SpaceKind::Hyperbolic: os << "Hyperbolic(" << dim_ << ")"; break;
    case SpaceKind::Sphere: os << "Sphere(" << dim_ << ")"; break;
    case SpaceKind::Product:
      os << "Product(";
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << ", ";
        os << factors_[i].name();
      }
      os << ")";
      break;
  }
  return os.str();
}

bool ModelSpace::operator==(const ModelSpace& other) const {
  return kind_ == other.kind_ && dim_ == other.dim_ && factors_ == other.factors_;
}

bool is_valid_point(const ModelSpace& space, const Vec& p) {
  if (p.size() != space.coord_dim() || !p.allFinite()) return false;
  switch (space.kind()) {
    case SpaceKind::Euclidean: return true;
    case SpaceKind::Hyperbolic: return p(p.size() - 1) > 0.0;
    case SpaceKind::Sphere: return std::abs(p.norm() - 1.0) <= kSphereNormTol;
    case SpaceKind::Product: {
      bool ok = true;
      for_each_factor(space, [&](const ModelSpace& f, int off) {
        ok = ok && is_valid_point(f, p.segment(off, f.coord_dim()));
      });
      return ok;
    }
  }
  return false;
}

void validate_point(const ModelSpace& space, const Vec& p) {
  if (!is_valid_point(space, p)) {
    std::ostringstream os;
    os << "point (" << p.transpose() << ") is not a valid point of " << space.name();
    throw Error(ErrorCode::InvalidPoint, os.str());
  }
}

Mat metric_at(const ModelSpace& space, const Vec& p) {
  validate_point(space, p);
  const int m = space.coord_dim();
  switch (space.kind()) {
    case SpaceKind::Euclidean:
    case SpaceKind::Sphere: return Mat::Identity(m, m);
    case SpaceKind::Hyperbolic: {
      const double y = p(m - 1);
      return Mat::Identity(m, m) / (y * y);
    }
    case SpaceKind::Product: {
      Mat g = Mat::Zero(m, m);
      for_each_factor(space, [&](const ModelSpace& f, int off) {
        g.block(off, off, f.coord_dim(), f.coord_dim()) =
            metric_at(f, p.segment(off, f.coord_dim()));
      });
      return g;
    }
  }
  return {};
}

double inner(const ModelSpace& space, const Vec& p, const Vec& v, const Vec& w) {
  switch (space.kind()) {
    case SpaceKind::Euclidean:
    case SpaceKind::Sphere: return v.dot(w);
    case SpaceKind::Hyperbolic: {
      const double y = p(p.size() - 1);
      return v.dot(w) / (y * y);
    }
    case SpaceKind::Product: {
      double s = 0.0;
      for_each_factor(space, [&](const ModelSpace& f, int off) {
        const int k = f.coord_dim();
        s += inner(f, p.segment(off, k), v.segment(off, k), w.segment(off, k));
      });
      return s;
    }
  }
  return 0.0;
}

double tangent_norm(const ModelSpace& space, const Vec& p, const Vec& v) {
  return std::sqrt(inner(space, p, v, v));
}

Mat tangent_basis(const ModelSpace& space, const Vec& p) {
  validate_point(space, p);
  const int m = space.coord_dim();
  switch (space.kind()) {
    case SpaceKind::Euclidean: return Mat::Identity(m, m);
    case SpaceKind::Hyperbolic: return p(m - 1) * Mat::Identity(m, m);
    case SpaceKind::Sphere: {
      Eigen::HouseholderQR<Mat> qr(p);
      Mat q = qr.householderQ() * Mat::Identity(m, m);
      return q.rightCols(m - 1);
    }
    case SpaceKind::Product: {
      Mat basis = Mat::Zero(m, space.dim());
      int col = 0;
      for_each_factor(space, [&](const ModelSpace& f, int off) {
        Mat b = tangent_basis(f, p.segment(off, f.coord_dim()));
        basis.block(off, col, b.rows(), b.cols()) = b;
        col += static_cast<int>(b.cols());
      });
      return basis;
    }
  }
  return {};
}

Vec exp_map(const ModelSpace& space, const Vec& p, const Vec& v) {
  switch (space.kind()) {
    case SpaceKind::Euclidean: return p + v;
    case SpaceKind::Hyperbolic: return hyperbolic_exp(p, v);
    case SpaceKind::Sphere: return sphere_exp(p, v);
    case SpaceKind::Product: {
      Vec out(p.size());
      for_each_factor(space, [&](const ModelSpace& f, int off) {
        const int k = f.coord_dim();
        out.segment(off, k) = exp_map(f, p.segment(off, k), v.segment(off, k));
      });
      return out;
    }
  }
  return p;
}

Vec log_map(const ModelSpace& space, const Vec& p, const Vec& q) {
  switch (space.kind()) {
    case SpaceKind::Euclidean: return q - p;
    case SpaceKind::Hyperbolic: return hyperbolic_log(p, q);
    case SpaceKind::Sphere: return sphere_log(p, q);
    case SpaceKind::Product: {
      Vec out(p.size());
      for_each_factor(space, [&](const ModelSpace& f, int off) {
        const int k = f.coord_dim();
        out.segment(off, k) = log_map(f, p.segment(off, k), q.segment(off, k));
      });
      return out;
    }
  }
  return Vec::Zero(p.size());
}

Vec geodesic(const ModelSpace& space, const Vec& p, const Vec& v, double t) {
  validate_point(space, p);
  const double norm = tangent_norm(space, p, v);
  if (std::abs(norm - 1.0) > kUnitTol) {
    std::ostringstream os;
    os << "direction has metric norm " << norm;
    throw Error(ErrorCode::NonUnitDirection, os.str());
  }
  if (space.kind() == SpaceKind::Sphere && std::abs(p.dot(v)) > kUnitTol) {
    throw Error(ErrorCode::NonUnitDirection, "direction is not tangent to the sphere");
  }
  return exp_map(space, p, t * v);
}

double distance(const ModelSpace& space, const Vec& p, const Vec& q) {
  validate_point(space, p);
  validate_point(space, q);
  switch (space.kind()) {
    case SpaceKind::Euclidean: return (p - q).norm();
    case SpaceKind::Hyperbolic: return hyperbolic_distance(p, q);
    case SpaceKind::Sphere: return sphere_distance(p, q);
    case SpaceKind::Product: {
      double s = 0.0;
      for_each_factor(space, [&](const ModelSpace& f, int off) {
        const int k = f.coord_dim();
        const double d = distance(f, p.segment(off, k), q.segment(off, k));
        s += d * d;
      });
      return std::sqrt(s);
    }
  }
  return 0.0;
}

double convexity_radius(const ModelSpace& space, const Vec& p) {
  validate_point(space, p);
  switch (space.kind()) {
    case SpaceKind::Euclidean:
    case SpaceKind::Hyperbolic: return kInfinity;
    case SpaceKind::Sphere: return std::numbers::pi / 2.0;
    case SpaceKind::Product: {
      double r = kInfinity;
      for_each_factor(space, [&](const ModelSpace& f, int off) {
        r = std::min(r, convexity_radius(f, p.segment(off, f.coord_dim())));
      });
      return r;
    }
  }
  return kInfinity;
}

void validate_ray(const ModelSpace& space, const GeodesicRay& ray) {
  validate_point(space, ray.base_point);
  const double norm = tangent_norm(space, ray.base_point, ray.direction);
  if (std::abs(norm - 1.0) > kUnitTol) {
    throw Error(ErrorCode::NonUnitDirection, "ray direction is not unit length");
  }
}

Vec ray_point(const ModelSpace& space, const GeodesicRay& ray, double t) {
  if (t == 0.0) return ray.base_point;
  return exp_map(space, ray.base_point, t * ray.direction);
}

Containment halfspace_contains_search(const ModelSpace& space, const GeodesicRay& ray,
                                      const Vec& p, double t_max) {
  validate_ray(space, ray);
  validate_point(space, p);
  if (p == ray.base_point) return Containment::Inside;
  // d(p, ray(t)) - t is non-increasing in t, so a geometric grid suffices.
  const auto reached = [&](double t, bool& representable) {
    const Vec x = ray_point(space, ray, t);
    representable = x.allFinite() && is_valid_point(space, x);
    return representable && distance(space, p, x) <= t;
  };
  bool ok = true;
  for (double t = 1e-9; t <= t_max; t *= 2.0) {
    if (reached(t, ok)) return Containment::Inside;
    if (!ok) return Containment::Indeterminate;  // beyond floating-point range
  }
  if (reached(t_max, ok)) return Containment::Inside;
  return Containment::Indeterminate;
}

Containment halfspace_contains(const ModelSpace& space, const GeodesicRay& ray, const Vec& p,
                               double t_max) {
  validate_ray(space, ray);
  validate_point(space, p);
  const Vec& p0 = ray.base_point;
  if (p == p0) return Containment::Inside;
  switch (space.kind()) {
    case SpaceKind::Euclidean:
      return (p - p0).dot(ray.direction) > 0.0 ? Containment::Inside : Containment::Outside;
    case SpaceKind::Hyperbolic: {
      // The union is the open horoball at the ray's ideal endpoint through p0.
      const Eigen::Index n = p.size();
      const double y0 = p0(n - 1);
      const Vec w = ray.direction.head(n - 1);
      const double b = ray.direction(n - 1);
      if (w.norm() <= 1e-13 * y0) {
        if (b > 0.0) return p(n - 1) > y0 ? Containment::Inside : Containment::Outside;
        const double rho = y0 / 2.0;
        const double lhs = (p.head(n - 1) - p0.head(n - 1)).squaredNorm() +
                           (p(n - 1) - rho) * (p(n - 1) - rho);
        return lhs < rho * rho ? Containment::Inside : Containment::Outside;
      }
      const Vec u = w / w.norm();
      const double c = y0 * b / w.norm();
      const double radius = std::hypot(c, y0);
      const Vec xi = p0.head(n - 1) + (c + radius) * u;
      const double rho = ((c + radius) * (c + radius) + y0 * y0) / (2.0 * y0);
      const double lhs = (p.head(n - 1) - xi).squaredNorm() + (p(n - 1) - rho) * (p(n - 1) - rho);
      return lhs < rho * rho ? Containment::Inside : Containment::Outside;
    }
    case SpaceKind::Sphere:
    case SpaceKind::Product: return halfspace_contains_search(space, ray, p, t_max);
  }
  return Containment::Indeterminate;
}

int chart_dim(const ModelSpace& space) { return space.dim(); }

Vec to_chart(const ModelSpace& space, const Vec& p) {
  switch (space.kind()) {
    case SpaceKind::Euclidean: return p;
    case SpaceKind::Hyperbolic: {
      Vec c = p;
      c(c.size() - 1) = std::log(p(p.size() - 1));
      return c;
    }
    case SpaceKind::Sphere: {
      const Eigen::Index n = space.dim();
      return p.head(n) / (1.0 - p(n));
    }
    case SpaceKind::Product: {
      Vec c(space.dim());
      int col = 0;
      for_each_factor(space, [&](const ModelSpace& f, int off) {
        c.segment(col, f.dim()) = to_chart(f, p.segment(off, f.coord_dim()));
        col += f.dim();
      });
      return c;
    }
  }
  return p;
}

Vec from_chart(const ModelSpace& space, const Vec& c) {
  switch (space.kind()) {
    case SpaceKind::Euclidean: return c;
    case SpaceKind::Hyperbolic: {
      Vec p = c;
      p(p.size() - 1) = std::exp(c(c.size() - 1));
      return p;
    }
    case SpaceKind::Sphere: {
      const Eigen::Index n = space.dim();
      const double s = c.squaredNorm();
      Vec p(n + 1);
      p.head(n) = 2.0 * c / (s + 1.0);
      p(n) = (s - 1.0) / (s + 1.0);
      return p / p.norm();
    }
    case SpaceKind::Product: {
      Vec p(space.coord_dim());
      int col = 0;
      for_each_factor(space, [&](const ModelSpace& f, int off) {
        p.segment(off, f.coord_dim()) = from_chart(f, c.segment(col, f.dim()));
        col += f.dim();
      });
      return p;
    }
  }
  return c;
}

}  // namespace hmcone
