#pragma once

#include "hmcone/ambient.hpp"
#include "hmcone/grid.hpp"
#include "hmcone/hypersurface.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hmcone {

enum class FoliationKind { Annulus, HalfsphereCone, Horosphere, SphereCap };

/// Combinatorial description of separating leaves, supplied as input because
/// branch detection from predicates alone is not decidable.
struct BranchPiece {
  bool concave = true;            // which side of the leaf the piece lies on
  std::optional<int> next_leaf;   // nearest separating leaf inside the piece, if any
};

struct SeparatingLeaf {
  int id = 0;
  std::optional<double> param;
  std::vector<BranchPiece> pieces;
};

struct BranchData {
  std::vector<SeparatingLeaf> leaves;
};

struct Leaf {
  double param = 0.0;
  /// u_t: zero on the leaf, negative on the convex side.
  std::function<double(const Vec&)> signed_coord;
  double tol = 1e-9;
  bool contains(const Vec& p) const { return std::abs(signed_coord(p)) < tol; }
};

/// Grid chart used for flood fills: a box in parameter space mapped into the ambient model.
struct SamplingChart {
  Vec lo;
  Vec hi;
  std::function<Vec(const Vec&)> to_point;
};

/// One-parameter family of strictly convex leaves. Immutable after construction.
class Foliation {
 public:
  FoliationKind kind() const { return kind_; }
  const ModelSpace& space() const { return space_; }
  const std::string& name() const { return name_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  /// +1 when increasing parameter runs from convex to concave side, -1 otherwise.
  int orientation() const { return orientation_; }
  double key(double t) const { return orientation_ * t; }
  /// Parameter of the concave end of the family.
  double concave_end() const { return orientation_ > 0 ? t_max_ : t_min_; }
  double convex_end() const { return orientation_ > 0 ? t_min_ : t_max_; }
  bool has_lateral_boundary() const { return kind_ == FoliationKind::HalfsphereCone; }

  /// Analytic leaf coordinate, defined on a chart that may extend beyond the region.
  std::optional<double> leaf_param(const Vec& p) const;
  bool contains(const Vec& p) const;
  /// Leaf through p, or nullopt when p is outside the foliated region.
  std::optional<double> leaf_of(const Vec& p) const;
  /// u_t(p), extended continuously beyond the foliated region.
  double signed_coord(double t, const Vec& p) const;
  Leaf leaf(double t) const;

  /// Deterministic sample of points lying on leaf t.
  std::vector<Vec> leaf_sample(double t, std::size_t count, std::uint64_t seed) const;
  SamplingChart sampling_chart() const;

  const std::optional<BranchData>& branches() const { return branches_; }
  Foliation with_branches(BranchData data) const;

  friend Foliation annulus_foliation(double r, double R, const ModelSpace& ambient);
  friend Foliation annulus_copies(double r, double R, const std::vector<Vec>& centers);
  friend Foliation halfsphere_cone_foliation(const Vec& q, const Vec& nu, double r, double eps,
                                             const ModelSpace& ambient);
  friend Foliation horosphere_foliation(double q, double eps, const ModelSpace& ambient);
  friend Foliation sphere_cap_foliation(double eps, const ModelSpace& ambient);

  // Annulus / half-sphere data.
  const std::vector<Vec>& centers() const { return centers_; }
  const Vec& axis() const { return axis_; }
  double radius() const { return radius_; }
  double inner_radius() const { return t_min_; }
  /// Horosphere family: f_t(x) = sqrt(4t^2 - |x|^2) - t. Sphere caps: ball radius.
  double cap_radius() const { return radius_; }
  Vec cap_center(double s) const;  // sphere-cap centre on the great circle

 private:
  Foliation(FoliationKind kind, ModelSpace space, std::string name)
      : kind_(kind), space_(std::move(space)), name_(std::move(name)) {}

  FoliationKind kind_;
  ModelSpace space_;
  std::string name_;
  double t_min_ = 0.0;
  double t_max_ = 0.0;
  int orientation_ = 1;
  std::vector<Vec> centers_;
  Vec axis_;
  double radius_ = 0.0;
  std::optional<BranchData> branches_;
};

Foliation annulus_foliation(double r, double R, const ModelSpace& ambient);
/// Several disjoint annuli labelled as one family (negative control for separation).
Foliation annulus_copies(double r, double R, const std::vector<Vec>& centers);
/// Translated half-spheres gamma(t) + S, gamma(t) = q + t nu, t in (-r - eps, r + eps).
Foliation halfsphere_cone_foliation(const Vec& q, const Vec& nu, double r, double eps,
                                    const ModelSpace& ambient);
/// Graphs of f_t over t in (eps, q] in the hyperbolic upper halfspace.
Foliation horosphere_foliation(double q, double eps, const ModelSpace& ambient);
/// Forward halves of geodesic circles of radius (pi - eps)/2 on S^2 centred on a great circle.
Foliation sphere_cap_foliation(double eps, const ModelSpace& ambient);

/// p < q: p lies on the convex side of the leaf through q.
bool order_lt(const Foliation& f, const Vec& p, const Vec& q);

struct ConcaveRegion {
  double leaf = 0.0;         // parameter of the leaf through q
  double far_leaf = 0.0;     // concave end of the family
  bool lateral = false;      // leaves have boundary contributing lateral pieces
  bool empty = false;
  std::function<bool(const Vec&)> contains;
};

ConcaveRegion concave_region(const Foliation& f, const Vec& q);

struct BoundarySample {
  Vec point;
  bool lateral = false;  // false: on the far leaf
};

/// Sampled points of the concave boundary of F_{>q}.
std::vector<BoundarySample> sample_concave_boundary(const Foliation& f, const Vec& q,
                                                    std::size_t count, std::uint64_t seed);

enum class LeafVertexKind { SeparatingLeaf, BoundaryComponent };

struct LeafSpaceGraph {
  struct Vertex {
    std::string name;
    LeafVertexKind kind;
  };
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;  // convex -> concave

  bool acyclic() const;
  std::string to_text() const;
};

LeafSpaceGraph leaf_space(const BranchData& data);
LeafSpaceGraph leaf_space(const Foliation& f);

struct SeparationReport {
  bool separates = false;
  int components = 0;         // components of F minus the leaf
  int region_components = 0;  // components of F itself
  std::size_t active_cells = 0;
};

/// Grid flood fill of F minus leaf t. Cells straddling the leaf are removed.
SeparationReport separating_check(const Foliation& f, double t, int per_axis = 64,
                                  bool parallel = true);

/// Samples a leaf and certifies strict convexity of its second fundamental form.
ConvexityCertificate certify_leaf(const Foliation& f, double t, std::size_t samples,
                                  double tol = 1e-8, bool parallel = true);

}  // namespace hmcone
