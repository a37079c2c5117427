#include "hmcone/foliation.hpp"

#include "hmcone/error.hpp"
#include "hmcone/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace hmcone {

namespace {

constexpr double kPi = std::numbers::pi;

Vec random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Vec v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

// Lower hemisphere x -> -sqrt(R^2 - |x|^2): convex, upward normal points into the ball.
GraphFunction lower_hemisphere(double R, int dim) {
  GraphFunction g;
  g.dim = dim;
  g.name = "lower_hemisphere";
  g.eval = [R](const Vec& x) { return -std::sqrt(R * R - x.squaredNorm()); };
  g.grad = [R](const Vec& x) { return Vec(x / std::sqrt(R * R - x.squaredNorm())); };
  g.hess = [R, dim](const Vec& x) {
    const double s = std::sqrt(R * R - x.squaredNorm());
    return Mat(Mat::Identity(dim, dim) / s + x * x.transpose() / (s * s * s));
  };
  g.domain = [R](const Vec& x) { return x.squaredNorm() < R * R; };
  return g;
}

std::vector<Vec> disk_samples(int dim, double radius, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (dim == 0) {
      out.emplace_back(0);
      continue;
    }
    const Vec dir = random_unit(rng, dim);
    out.push_back(dir * radius * std::pow(unif(rng), 1.0 / dim));
  }
  return out;
}

Vec sphere_cap_point(double rho, double s, double phi) {
  const Vec c = (Vec(3) << std::cos(s), 0.0, std::sin(s)).finished();
  const Vec dc = (Vec(3) << -std::sin(s), 0.0, std::cos(s)).finished();
  const Vec ey = (Vec(3) << 0.0, 1.0, 0.0).finished();
  Vec x = std::cos(rho) * c + std::sin(rho) * (std::cos(phi) * dc + std::sin(phi) * ey);
  return x / x.norm();
}

}  // namespace

Foliation annulus_foliation(double r, double R, const ModelSpace& ambient) {
  if (ambient.kind() != SpaceKind::Euclidean || ambient.dim() < 2) {
    throw Error(ErrorCode::ConfigError, "annulus foliation needs Euclidean(n), n >= 2");
  }
  if (!(r > 0.0) || !(r < R)) throw Error(ErrorCode::DegenerateRadii, "need 0 < r < R");
  Foliation f(FoliationKind::Annulus, ambient, "annulus");
  f.t_min_ = r;
  f.t_max_ = R;
  f.orientation_ = 1;
  f.centers_ = {Vec::Zero(ambient.dim())};
  return f;
}

Foliation annulus_copies(double r, double R, const std::vector<Vec>& centers) {
  if (centers.empty()) throw Error(ErrorCode::ConfigError, "need at least one centre");
  Foliation f = annulus_foliation(r, R, ModelSpace::euclidean(static_cast<int>(centers[0].size())));
  f.name_ = "annulus_copies";
  f.centers_ = centers;
  return f;
}

Foliation halfsphere_cone_foliation(const Vec& q, const Vec& nu, double r, double eps,
                                    const ModelSpace& ambient) {
  if (ambient.kind() != SpaceKind::Euclidean || ambient.dim() < 2 || q.size() != ambient.dim() ||
      nu.size() != ambient.dim()) {
    throw Error(ErrorCode::ConfigError, "half-sphere foliation needs Euclidean(n), n >= 2");
  }
  if (std::abs(nu.norm() - 1.0) > 1e-9) throw Error(ErrorCode::InvalidDirection, "nu must be a unit vector");
  if (!(r > 0.0) || !(eps > 0.0)) throw Error(ErrorCode::NonpositiveParameter, "need r > 0, eps > 0");
  Foliation f(FoliationKind::HalfsphereCone, ambient, "halfsphere_cone");
  f.t_min_ = -r - eps;
  f.t_max_ = r + eps;
  f.orientation_ = 1;
  f.centers_ = {q};
  f.axis_ = nu;
  f.radius_ = r;
  return f;
}

Foliation horosphere_foliation(double q, double eps, const ModelSpace& ambient) {
  if (ambient.kind() != SpaceKind::Hyperbolic || ambient.dim() < 2) {
    throw Error(ErrorCode::ConfigError, "horosphere family needs Hyperbolic(n + 1), n >= 1");
  }
  if (!(eps > 0.0) || !(eps < q)) throw Error(ErrorCode::InvalidHeights, "need 0 < eps < q");
  Foliation f(FoliationKind::Horosphere, ambient, "horosphere_family");
  f.t_min_ = eps;
  f.t_max_ = q;
  f.orientation_ = -1;
  return f;
}

Foliation sphere_cap_foliation(double eps, const ModelSpace& ambient) {
  if (ambient.kind() != SpaceKind::Sphere || ambient.dim() != 2) {
    throw Error(ErrorCode::ConfigError, "sphere cap foliation needs Sphere(2)");
  }
  if (!(eps > 0.0) || !(eps < kPi / 2.0)) throw Error(ErrorCode::InvalidEpsilon, "need 0 < eps < pi/2");
  Foliation f(FoliationKind::SphereCap, ambient, "sphere_cap");
  f.radius_ = (kPi - eps) / 2.0;
  f.t_min_ = -kPi - f.radius_;
  f.t_max_ = kPi;
  f.orientation_ = 1;
  return f;
}

Foliation Foliation::with_branches(BranchData data) const {
  Foliation copy = *this;
  copy.branches_ = std::move(data);
  return copy;
}

Vec Foliation::cap_center(double s) const {
  return (Vec(3) << std::cos(s), 0.0, std::sin(s)).finished();
}

std::optional<double> Foliation::leaf_param(const Vec& p) const {
  if (!is_valid_point(space_, p)) return std::nullopt;
  switch (kind_) {
    case FoliationKind::Annulus: {
      double best = kInfinity;
      for (const Vec& c : centers_) {
        const double d = (p - c).norm();
        if (d > t_min_ && d < t_max_) return d;
        best = std::min(best, d);
      }
      return best;
    }
    case FoliationKind::HalfsphereCone: {
      const Vec w = p - centers_[0];
      const double a = w.dot(axis_);
      const double b2 = std::max(0.0, w.squaredNorm() - a * a);
      if (b2 > radius_ * radius_) return std::nullopt;
      return a - std::sqrt(radius_ * radius_ - b2);
    }
    case FoliationKind::Horosphere: {
      const Eigen::Index n = p.size() - 1;
      const double y = p(n);
      return (y + std::sqrt(4.0 * y * y + 3.0 * p.head(n).squaredNorm())) / 3.0;
    }
    case FoliationKind::SphereCap: {
      const double m = std::hypot(p(0), p(2));
      const double cr = std::cos(radius_);
      if (m < cr) return std::nullopt;
      const double alpha = std::atan2(p(2), p(0));
      return alpha - std::acos(std::min(1.0, cr / m));
    }
  }
  return std::nullopt;
}

bool Foliation::contains(const Vec& p) const {
  const auto t = leaf_param(p);
  if (!t) return false;
  switch (kind_) {
    case FoliationKind::Annulus: return *t > t_min_ && *t < t_max_;
    case FoliationKind::HalfsphereCone: {
      const Vec w = p - centers_[0];
      const double a = w.dot(axis_);
      const double b2 = w.squaredNorm() - a * a;
      return b2 < radius_ * radius_ && *t > t_min_ && *t < t_max_;
    }
    case FoliationKind::Horosphere: return *t > t_min_ && *t <= t_max_;
    case FoliationKind::SphereCap: {
      const double m = std::hypot(p(0), p(2));
      const bool on_cut = p(2) == 0.0 && p(0) < 0.0;
      return m > std::cos(radius_) && !on_cut && *t > t_min_ && *t < t_max_;
    }
  }
  return false;
}

std::optional<double> Foliation::leaf_of(const Vec& p) const {
  if (!contains(p)) return std::nullopt;
  return leaf_param(p);
}

double Foliation::signed_coord(double t, const Vec& p) const {
  switch (kind_) {
    case FoliationKind::Annulus: return *leaf_param(p) - t;
    case FoliationKind::HalfsphereCone: {
      // Beyond the cylinder wall the leaf is continued by the wall itself.
      const Vec w = p - centers_[0];
      const double a = w.dot(axis_);
      const double b2 = std::max(0.0, w.squaredNorm() - a * a);
      return a - std::sqrt(std::max(0.0, radius_ * radius_ - b2)) - t;
    }
    case FoliationKind::Horosphere: {
      validate_point(space_, p);
      const Eigen::Index n = p.size() - 1;
      const double x2 = p.head(n).squaredNorm();
      if (x2 < 3.0 * t * t) return std::sqrt(4.0 * t * t - x2) - t - p(n);
      return t - *leaf_param(p);
    }
    case FoliationKind::SphereCap:
      return distance(space_, p, cap_center(t)) - radius_;
  }
  return 0.0;
}

Leaf Foliation::leaf(double t) const {
  Leaf l;
  l.param = t;
  l.signed_coord = [self = *this, t](const Vec& p) { return self.signed_coord(t, p); };
  return l;
}

std::vector<Vec> Foliation::leaf_sample(double t, std::size_t count, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(count);
  const int n = space_.dim();
  for (std::size_t i = 0; i < count; ++i) {
    switch (kind_) {
      case FoliationKind::Annulus:
        out.push_back(centers_[0] + t * random_unit(rng, n));
        break;
      case FoliationKind::HalfsphereCone: {
        Vec w = random_unit(rng, n);
        if (w.dot(axis_) < 0.0) w -= 2.0 * w.dot(axis_) * axis_;
        out.push_back(centers_[0] + t * axis_ + radius_ * w);
        break;
      }
      case FoliationKind::Horosphere: {
        Vec x = Vec::Zero(n - 1);
        if (n > 1) {
          x = random_unit(rng, n - 1) * 0.95 * std::sqrt(3.0) * t *
              std::pow(unif(rng), 1.0 / (n - 1));
        }
        Vec p(n);
        p.head(n - 1) = x;
        p(n - 1) = std::sqrt(4.0 * t * t - x.squaredNorm()) - t;
        out.push_back(p);
        break;
      }
      case FoliationKind::SphereCap: {
        const double phi = (unif(rng) - 0.5) * 0.95 * kPi;
        out.push_back(sphere_cap_point(radius_, t, phi));
        break;
      }
    }
  }
  return out;
}

SamplingChart Foliation::sampling_chart() const {
  SamplingChart chart;
  const int n = space_.dim();
  switch (kind_) {
    case FoliationKind::Annulus: {
      Vec lo = Vec::Constant(n, kInfinity), hi = Vec::Constant(n, -kInfinity);
      for (const Vec& c : centers_) {
        lo = lo.cwiseMin(Vec(c.array() - 1.05 * t_max_));
        hi = hi.cwiseMax(Vec(c.array() + 1.05 * t_max_));
      }
      chart.lo = lo;
      chart.hi = hi;
      chart.to_point = [](const Vec& c) { return c; };
      break;
    }
    case FoliationKind::HalfsphereCone: {
      Vec lo = Vec::Constant(n, kInfinity), hi = Vec::Constant(n, -kInfinity);
      for (double s : {t_min_, t_max_ + radius_}) {
        const Vec c = centers_[0] + s * axis_;
        lo = lo.cwiseMin(Vec(c.array() - radius_));
        hi = hi.cwiseMax(Vec(c.array() + radius_));
      }
      const Vec pad = 0.05 * (hi - lo);
      chart.lo = lo - pad;
      chart.hi = hi + pad;
      chart.to_point = [](const Vec& c) { return c; };
      break;
    }
    case FoliationKind::Horosphere: {
      chart.lo = Vec::Constant(n, -1.05 * std::sqrt(3.0) * t_max_);
      chart.hi = Vec::Constant(n, 1.05 * std::sqrt(3.0) * t_max_);
      chart.lo(n - 1) = 0.0;
      chart.hi(n - 1) = 1.05 * t_max_;
      chart.to_point = [](const Vec& c) { return c; };
      break;
    }
    case FoliationKind::SphereCap: {
      chart.lo = (Vec(2) << -kPi, -kPi / 2.0).finished();
      chart.hi = (Vec(2) << kPi, kPi / 2.0).finished();
      chart.to_point = [](const Vec& c) {
        return (Vec(3) << std::cos(c(1)) * std::cos(c(0)), std::sin(c(1)),
                std::cos(c(1)) * std::sin(c(0)))
            .finished();
      };
      break;
    }
  }
  return chart;
}

bool order_lt(const Foliation& f, const Vec& p, const Vec& q) {
  if (!f.contains(p) || !f.contains(q)) {
    throw Error(ErrorCode::OutsideFoliation, "order is only defined inside the foliation");
  }
  return f.signed_coord(*f.leaf_of(q), p) < 0.0;
}

ConcaveRegion concave_region(const Foliation& f, const Vec& q) {
  const auto tq = f.leaf_param(q);
  constexpr double slack = 1e-12;
  if (!tq || *tq < f.t_min() - slack || *tq > f.t_max() + slack) {
    throw Error(ErrorCode::OutsideFoliation, "q is not on a leaf of the family");
  }
  ConcaveRegion region;
  region.leaf = *tq;
  region.far_leaf = f.concave_end();
  region.lateral = f.has_lateral_boundary();
  region.empty = f.key(*tq) >= f.key(region.far_leaf) - slack;
  const double key_q = f.key(*tq);
  region.contains = [f, key_q](const Vec& p) {
    if (!f.contains(p)) return false;
    return f.key(*f.leaf_param(p)) > key_q;
  };
  return region;
}

std::vector<BoundarySample> sample_concave_boundary(const Foliation& f, const Vec& q,
                                                    std::size_t count, std::uint64_t seed) {
  const ConcaveRegion region = concave_region(f, q);
  std::vector<BoundarySample> out;
  if (region.empty) return out;
  const std::size_t n_far = region.lateral ? (count + 1) / 2 : count;
  for (Vec& p : f.leaf_sample(region.far_leaf, n_far, seed)) out.push_back({std::move(p), false});
  if (region.lateral) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = f.space().dim();
    for (std::size_t i = n_far; i < count; ++i) {
      Vec w = random_unit(rng, n);
      w -= w.dot(f.axis()) * f.axis();
      if (w.norm() < 1e-9) continue;
      w /= w.norm();
      const double a = region.leaf + unif(rng) * (region.far_leaf - region.leaf);
      out.push_back({f.centers()[0] + a * f.axis() + f.radius() * w, true});
    }
  }
  return out;
}

bool LeafSpaceGraph::acyclic() const {
  const std::size_t n = vertices.size();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> out(n);
  for (const auto& [a, b] : edges) {
    out[a].push_back(b);
    ++indeg[b];
  }
  std::vector<int> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (indeg[i] == 0) stack.push_back(static_cast<int>(i));
  }
  std::size_t seen = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    ++seen;
    for (int w : out[v]) {
      if (--indeg[w] == 0) stack.push_back(w);
    }
  }
  return seen == n;
}

std::string LeafSpaceGraph::to_text() const {
  std::ostringstream os;
  for (const auto& [a, b] : edges) os << vertices[a].name << " -> " << vertices[b].name << "\n";
  return os.str();
}

LeafSpaceGraph leaf_space(const BranchData& data) {
  LeafSpaceGraph g;
  if (data.leaves.empty()) {
    g.vertices = {{"convex_boundary", LeafVertexKind::BoundaryComponent},
                  {"concave_boundary", LeafVertexKind::BoundaryComponent}};
    g.edges = {{0, 1}};
    return g;
  }
  std::map<int, int> vertex_of;
  std::map<int, std::optional<double>> param_of;
  for (const auto& leaf : data.leaves) {
    if (vertex_of.count(leaf.id)) {
      throw Error(ErrorCode::ConfigError, "duplicate separating leaf id " + std::to_string(leaf.id));
    }
    vertex_of[leaf.id] = static_cast<int>(g.vertices.size());
    param_of[leaf.id] = leaf.param;
    g.vertices.push_back({"L" + std::to_string(leaf.id), LeafVertexKind::SeparatingLeaf});
  }
  std::set<std::pair<int, int>> seen;
  auto add_edge = [&](int a, int b) {
    if (seen.insert({a, b}).second) g.edges.emplace_back(a, b);
  };
  int boundary_count = 0;
  for (const auto& leaf : data.leaves) {
    const int v = vertex_of.at(leaf.id);
    for (const auto& piece : leaf.pieces) {
      int other;
      if (piece.next_leaf) {
        const auto it = vertex_of.find(*piece.next_leaf);
        if (it == vertex_of.end()) {
          throw Error(ErrorCode::ConfigError,
                      "unknown separating leaf id " + std::to_string(*piece.next_leaf));
        }
        other = it->second;
        const auto& pa = param_of[leaf.id];
        const auto& pb = param_of[*piece.next_leaf];
        if (pa && pb && (piece.concave ? !(*pa < *pb) : !(*pb < *pa))) {
          throw Error(ErrorCode::CyclicInput, "branch data contradicts the leaf order");
        }
      } else {
        other = static_cast<int>(g.vertices.size());
        g.vertices.push_back({"B" + std::to_string(boundary_count++),
                              LeafVertexKind::BoundaryComponent});
      }
      if (piece.concave) add_edge(v, other);
      else add_edge(other, v);
    }
  }
  if (!g.acyclic()) throw Error(ErrorCode::CyclicInput, "leaf space contains a cycle");
  return g;
}

LeafSpaceGraph leaf_space(const Foliation& f) {
  return leaf_space(f.branches().value_or(BranchData{}));
}

SeparationReport separating_check(const Foliation& f, double t, int per_axis, bool parallel) {
  if (!(t > f.t_min() && t < f.t_max())) {
    throw Error(ErrorCode::OutsideFoliation, "separation is checked on interior leaves only");
  }
  const SamplingChart chart = f.sampling_chart();
  const GridSpec grid = GridSpec::uniform(chart.lo, chart.hi, per_axis);
  const unsigned corners = 1u << grid.dim();

  const auto in_region = kernels::mask(parallel, grid.size(), [&](std::size_t i) {
    return f.contains(chart.to_point(grid.cell_center(i)));
  });
  const auto active = kernels::mask(parallel, grid.size(), [&](std::size_t i) {
    if (!in_region[i]) return false;
    const double side = *f.leaf_param(chart.to_point(grid.cell_center(i))) - t;
    if (side == 0.0) return false;
    for (unsigned c = 0; c < corners; ++c) {
      const Vec p = chart.to_point(grid.cell_corner(i, c));
      const auto lp = f.leaf_param(p);
      if (lp && (*lp - t) * side <= 0.0) return false;
    }
    return true;
  });

  SeparationReport report;
  report.active_cells = static_cast<std::size_t>(std::count(in_region.begin(), in_region.end(), 1));
  if (report.active_cells < 16) {
    throw Error(ErrorCode::InsufficientSamples, "fewer than 16 grid cells inside the foliation");
  }
  report.region_components = label_components(grid, in_region).count;
  report.components = label_components(grid, active).count;
  report.separates = report.components >= 2;
  return report;
}

ConvexityCertificate certify_leaf(const Foliation& f, double t, std::size_t samples, double tol,
                                  bool parallel) {
  const int n = f.space().dim();
  const std::uint64_t seed = 0x5eed0000ULL + samples;
  switch (f.kind()) {
    case FoliationKind::Annulus:
    case FoliationKind::HalfsphereCone: {
      const double R = f.kind() == FoliationKind::Annulus ? t : f.radius();
      return certify_strict_convexity(lower_hemisphere(R, n - 1), ModelSpace::euclidean(n),
                                      disk_samples(n - 1, 0.95 * R, samples, seed), tol, parallel);
    }
    case FoliationKind::Horosphere:
      return certify_strict_convexity(sphere_beyond_infinity(t, n - 1), f.space(),
                                      disk_samples(n - 1, 0.95 * std::sqrt(3.0) * t, samples, seed),
                                      tol, parallel);
    case FoliationKind::SphereCap: {
      // Geodesic curvature of the leaf curve from central differences of the
      // embedded parametrisation, measured against the conormal toward the centre.
      const double rho = f.radius();
      const Vec centre = f.cap_center(t);
      std::vector<double> phis(samples);
      for (std::size_t i = 0; i < samples; ++i) {
        phis[i] = -0.475 * kPi + 0.95 * kPi * (static_cast<double>(i) + 0.5) / samples;
      }
      const double h = 1e-4;
      const auto best = kernels::min_reduce(parallel, samples, [&](std::size_t i) {
        const Vec x0 = sphere_cap_point(rho, t, phis[i]);
        const Vec xp = sphere_cap_point(rho, t, phis[i] + h);
        const Vec xm = sphere_cap_point(rho, t, phis[i] - h);
        const Vec vel = (xp - xm) / (2.0 * h);
        const Vec acc = (xp - 2.0 * x0 + xm) / (h * h);
        Vec conormal = centre - centre.dot(x0) * x0;
        conormal /= conormal.norm();
        return acc.dot(conormal) / vel.squaredNorm();
      });
      ConvexityCertificate cert;
      cert.min_eigenvalue = best.value;
      cert.argmin_point = sphere_cap_point(rho, t, phis[best.index]);
      cert.n_samples = samples;
      cert.tol = tol;
      cert.pass = best.value > tol;
      return cert;
    }
  }
  return {};
}

}  // namespace hmcone
