#pragma once

#include "hmcone/ambient.hpp"
#include "hmcone/error.hpp"
#include "hmcone/foliation.hpp"
#include "hmcone/mesh.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hmcone {

/// Vertex images in a target model space; boundary vertices keep their initial images.
struct MeshMap {
  ModelSpace target = ModelSpace::euclidean(2);
  std::vector<Vec> images;
};

/// Throws InvalidMap on size mismatch or invalid target points.
void validate_map(const MeshDomain& mesh, const MeshMap& f);

/// 1/2 sum over edges of w_ij d(f_i, f_j)^2.
double dirichlet_energy(const MeshDomain& mesh, const MeshMap& f);

/// sum_j w_ij log_{f_i}(f_j) / mass_i at interior vertices, zero on the boundary.
std::vector<Vec> tension_field(const MeshDomain& mesh, const MeshMap& f, bool parallel = true);
/// Largest metric norm of the tension over interior vertices.
double max_tension(const MeshDomain& mesh, const MeshMap& f, bool parallel = true);

enum class RelaxMode { Direct, GaussSeidel, Jacobi };

struct RelaxOptions {
  double tol = 0.0;  // 0 picks 1e-8 for Euclidean targets, 1e-6 otherwise
  std::size_t max_iter = 100000;
  RelaxMode mode = RelaxMode::Direct;  // Euclidean targets only; curved targets use Jacobi steps
  bool parallel = true;
};

struct RelaxResult {
  MeshMap map;
  double residual = 0.0;
  std::size_t iterations = 0;
  std::vector<double> energy_history;  // every 10 iterations, plus initial and final
};

/// Carries the best iterate when the iteration budget runs out.
class RelaxNotConverged : public Error {
 public:
  RelaxNotConverged(const std::string& what, RelaxResult best)
      : Error(ErrorCode::MaxIterExceeded, what), best_(std::move(best)) {}
  const RelaxResult& best() const { return best_; }

 private:
  RelaxResult best_;
};

RelaxResult relax_to_harmonic(const MeshDomain& mesh, const MeshMap& f0, const RelaxOptions& opts = {});

struct SubharmonicReport {
  double min_value = kInfinity;
  int argmin = -1;
  std::size_t interior = 0;
};

/// Minimum over interior vertices of sum_j w_ij (s_j - s_i) / mass_i with s = u o f.
SubharmonicReport subharmonicity_check(const MeshDomain& mesh, const MeshMap& f,
                                       const std::function<double(const Vec&)>& u);

/// Vertex whose image lies strictly on the concave side of the leaf through f(p).
/// Neighbours first, then the whole mesh. Throws ConstantMap, MaximumPrincipleViolation,
/// OutsideFoliation.
int sampson_step(const MeshDomain& mesh, const MeshMap& f, const Foliation& F, int p);

enum class SweepOutcome { ExitAtConcaveBoundary, Diverging, StalledInterior };
std::string to_string(SweepOutcome o);

struct SweepCrossing {
  int vertex = 0;
  Vec image;
  double leaf = 0.0;
  double cumulative = 0.0;  // chain length q_0 -> ... -> q_k
};

struct SweepTrace {
  std::vector<SweepCrossing> crossings;
  SweepOutcome outcome = SweepOutcome::StalledInterior;
  std::optional<Vec> exit_point;      // q*
  std::string exit_kind;              // far_leaf | lateral
  double distance = 0.0;              // ambient d(q_0, q*) or d(q_0, q_last)
  double chain_distance = 0.0;
  bool geodesic_leaves_region = false;  // minimizing geodesic q_0 -> q* leaves F
  std::string message;

  std::string to_csv() const;
};

SweepTrace foliated_sweep(const MeshDomain& mesh, const MeshMap& f, const Foliation& F, int p0,
                          double distance_budget);

/// Vertex whose reference position is closest to x.
int nearest_vertex(const MeshDomain& mesh, const Vec& x);

}  // namespace hmcone
