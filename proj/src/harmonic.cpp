#include "hmcone/harmonic.hpp"

#include "hmcone/kernels.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hmcone {

void validate_map(const MeshDomain& mesh, const MeshMap& f) {
  if (f.images.size() != mesh.size()) {
    throw Error(ErrorCode::InvalidMap, "map has " + std::to_string(f.images.size()) +
                                           " images for " + std::to_string(mesh.size()) + " vertices");
  }
  for (const Vec& q : f.images) {
    if (q.size() != f.target.coord_dim() || !is_valid_point(f.target, q)) {
      throw Error(ErrorCode::InvalidMap, "image is not a valid point of " + f.target.name());
    }
  }
}

double dirichlet_energy(const MeshDomain& mesh, const MeshMap& f) {
  validate_map(mesh, f);
  double e = 0.0;
  for (const auto& edge : mesh.edges) {
    const double d = distance(f.target, f.images[edge.i], f.images[edge.j]);
    e += edge.weight * d * d;
  }
  return 0.5 * e;
}

namespace {

Vec vertex_tension(const MeshDomain& mesh, const MeshMap& f, std::size_t i) {
  Vec t = Vec::Zero(f.images[i].size());
  if (mesh.boundary[i]) return t;
  for (const auto& [j, w] : mesh.adjacency[i]) t += w * log_map(f.target, f.images[i], f.images[j]);
  return t / mesh.mass[i];
}

std::vector<Vec> tension_unchecked(const MeshDomain& mesh, const MeshMap& f, bool parallel) {
  std::vector<Vec> out(mesh.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(mesh.size()); ++i) {
    out[i] = vertex_tension(mesh, f, static_cast<std::size_t>(i));
  }
  return out;
}

double residual_of(const MeshDomain& mesh, const MeshMap& f, const std::vector<Vec>& t) {
  double r = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (!mesh.boundary[i]) r = std::max(r, tangent_norm(f.target, f.images[i], t[i]));
  }
  return r;
}

RelaxResult relax_direct(const MeshDomain& mesh, const MeshMap& f0, double tol) {
  RelaxResult res;
  res.map = f0;
  res.energy_history.push_back(dirichlet_energy(mesh, f0));
  std::vector<int> index(mesh.size(), -1);
  int n = 0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (!mesh.boundary[i]) index[i] = n++;
  }
  if (n > 0) {
    const int dim = f0.target.coord_dim();
    std::vector<Eigen::Triplet<double>> trip;
    Mat rhs = Mat::Zero(n, dim);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      if (index[i] < 0) continue;
      double diag = 0.0;
      for (const auto& [j, w] : mesh.adjacency[i]) {
        diag += w;
        if (index[j] >= 0) trip.emplace_back(index[i], index[j], -w);
        else rhs.row(index[i]) += w * f0.images[j].transpose();
      }
      trip.emplace_back(index[i], index[i], diag);
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidMesh, "singular mesh Laplacian");
    const Mat x = solver.solve(rhs);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      if (index[i] >= 0) res.map.images[i] = x.row(index[i]).transpose();
    }
  }
  res.iterations = 1;
  res.energy_history.push_back(dirichlet_energy(mesh, res.map));
  res.residual = residual_of(mesh, res.map, tension_unchecked(mesh, res.map, false));
  if (!(res.residual < tol)) {
    throw RelaxNotConverged("direct solve residual " + std::to_string(res.residual), res);
  }
  return res;
}

RelaxResult relax_averaging(const MeshDomain& mesh, const MeshMap& f0, double tol,
                            std::size_t max_iter, bool gauss_seidel, bool parallel) {
  RelaxResult res;
  res.map = f0;
  res.energy_history.push_back(dirichlet_energy(mesh, f0));
  std::vector<Vec> next = f0.images;
  for (std::size_t it = 0; it < max_iter; ++it) {
    res.residual = residual_of(mesh, res.map, tension_unchecked(mesh, res.map, parallel));
    if (res.residual < tol) break;
    if (gauss_seidel) {
      for (std::size_t i = 0; i < mesh.size(); ++i) {
        if (mesh.boundary[i]) continue;
        Vec acc = Vec::Zero(res.map.images[i].size());
        double sw = 0.0;
        for (const auto& [j, w] : mesh.adjacency[i]) {
          acc += w * res.map.images[j];
          sw += w;
        }
        res.map.images[i] = acc / sw;
      }
    } else {
#pragma omp parallel for schedule(static) if (parallel)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(mesh.size()); ++i) {
        if (mesh.boundary[i]) continue;
        Vec acc = Vec::Zero(res.map.images[i].size());
        double sw = 0.0;
        for (const auto& [j, w] : mesh.adjacency[i]) {
          acc += w * res.map.images[j];
          sw += w;
        }
        next[i] = 0.5 * res.map.images[i] + 0.5 * acc / sw;
      }
      res.map.images.swap(next);
      next = res.map.images;
    }
    res.iterations = it + 1;
    if (res.iterations % 10 == 0) res.energy_history.push_back(dirichlet_energy(mesh, res.map));
  }
  res.energy_history.push_back(dirichlet_energy(mesh, res.map));
  if (!(res.residual < tol)) {
    throw RelaxNotConverged("residual " + std::to_string(res.residual) + " after " +
                                std::to_string(res.iterations) + " iterations",
                            res);
  }
  return res;
}

RelaxResult relax_geodesic(const MeshDomain& mesh, const MeshMap& f0, double tol,
                           std::size_t max_iter, bool parallel) {
  RelaxResult res;
  res.map = f0;
  double rate = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (mesh.boundary[i]) continue;
    double sw = 0.0;
    for (const auto& [j, w] : mesh.adjacency[i]) sw += w;
    rate = std::max(rate, sw / mesh.mass[i]);
  }
  const double tau0 = rate > 0.0 ? 0.5 / rate : 0.0;
  double tau = tau0;
  double energy = dirichlet_energy(mesh, f0);
  res.energy_history.push_back(energy);
  MeshMap trial = f0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    const auto t = tension_unchecked(mesh, res.map, parallel);
    res.residual = residual_of(mesh, res.map, t);
    if (res.residual < tol || tau < 1e-14) break;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(mesh.size()); ++i) {
      trial.images[i] = mesh.boundary[i] ? res.map.images[i]
                                         : exp_map(res.map.target, res.map.images[i], tau * t[i]);
    }
    const double e = dirichlet_energy(mesh, trial);
    res.iterations = it + 1;
    // Increases at roundoff level are accepted.
    if (e > energy * (1.0 + 1e-12)) {
      tau *= 0.5;
      continue;
    }
    energy = std::min(energy, e);
    tau = std::min(tau0, 1.25 * tau);
    res.map.images.swap(trial.images);
    trial.images = res.map.images;
    if (res.iterations % 10 == 0) res.energy_history.push_back(energy);
  }
  res.energy_history.push_back(energy);
  if (!(res.residual < tol)) {
    throw RelaxNotConverged("residual " + std::to_string(res.residual) + " after " +
                                std::to_string(res.iterations) + " iterations",
                            res);
  }
  return res;
}

}  // namespace

std::vector<Vec> tension_field(const MeshDomain& mesh, const MeshMap& f, bool parallel) {
  validate_map(mesh, f);
  return tension_unchecked(mesh, f, parallel);
}

double max_tension(const MeshDomain& mesh, const MeshMap& f, bool parallel) {
  return residual_of(mesh, f, tension_field(mesh, f, parallel));
}

RelaxResult relax_to_harmonic(const MeshDomain& mesh, const MeshMap& f0, const RelaxOptions& opts) {
  validate_map(mesh, f0);
  const bool flat = f0.target.kind() == SpaceKind::Euclidean;
  const double tol = opts.tol > 0.0 ? opts.tol : (flat ? 1e-8 : 1e-6);
  if (!flat) return relax_geodesic(mesh, f0, tol, opts.max_iter, opts.parallel);
  switch (opts.mode) {
    case RelaxMode::Direct: return relax_direct(mesh, f0, tol);
    case RelaxMode::GaussSeidel: return relax_averaging(mesh, f0, tol, opts.max_iter, true, false);
    case RelaxMode::Jacobi: return relax_averaging(mesh, f0, tol, opts.max_iter, false, opts.parallel);
  }
  return relax_direct(mesh, f0, tol);
}

SubharmonicReport subharmonicity_check(const MeshDomain& mesh, const MeshMap& f,
                                       const std::function<double(const Vec&)>& u) {
  validate_map(mesh, f);
  std::vector<double> s(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) s[i] = u(f.images[i]);
  SubharmonicReport report;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (mesh.boundary[i]) continue;
    double lap = 0.0;
    for (const auto& [j, w] : mesh.adjacency[i]) lap += w * (s[j] - s[i]);
    lap /= mesh.mass[i];
    ++report.interior;
    if (lap < report.min_value) {
      report.min_value = lap;
      report.argmin = static_cast<int>(i);
    }
  }
  return report;
}

int sampson_step(const MeshDomain& mesh, const MeshMap& f, const Foliation& F, int p) {
  validate_map(mesh, f);
  if (p < 0 || static_cast<std::size_t>(p) >= mesh.size()) {
    throw Error(ErrorCode::ConfigError, "vertex index out of range");
  }
  const Vec& q = f.images[p];
  const auto t = F.leaf_of(q);
  if (!t) throw Error(ErrorCode::OutsideFoliation, "f(p) is not in the foliated region");
  bool constant = true;
  for (const Vec& x : f.images) constant = constant && (x - f.images[0]).norm() <= 1e-14;
  if (constant) throw Error(ErrorCode::ConstantMap, "the map is constant");
  // Among neighbours, the steepest climb: leaf coordinate gained per unit distance.
  int best = -1;
  double best_rate = 0.0;
  for (const auto& [j, w] : mesh.adjacency[p]) {
    const double v = F.signed_coord(*t, f.images[j]);
    if (!(v > 0.0)) continue;
    const double rate = v / distance(f.target, q, f.images[j]);
    if (rate > best_rate || (rate == best_rate && j < best)) {
      best_rate = rate;
      best = j;
    }
  }
  if (best >= 0) return best;
  double best_val = 0.0;
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const double v = F.signed_coord(*t, f.images[j]);
    if (v > best_val) {
      best_val = v;
      best = static_cast<int>(j);
    }
  }
  if (best < 0) {
    throw Error(ErrorCode::MaximumPrincipleViolation,
                "every image lies on the convex side of the leaf through f(p)");
  }
  return best;
}

std::string to_string(SweepOutcome o) {
  switch (o) {
    case SweepOutcome::ExitAtConcaveBoundary: return "ExitAtConcaveBoundary";
    case SweepOutcome::Diverging: return "Diverging";
    case SweepOutcome::StalledInterior: return "StalledInterior";
  }
  return "StalledInterior";
}

std::string SweepTrace::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  const Eigen::Index dim = crossings.empty() ? 0 : crossings.front().image.size();
  os << "step,vertex";
  for (Eigen::Index a = 0; a < dim; ++a) os << ",x" << a;
  os << ",leaf,cumulative_distance\n";
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    const auto& c = crossings[k];
    os << k << "," << c.vertex;
    for (Eigen::Index a = 0; a < dim; ++a) os << "," << c.image(a);
    os << "," << c.leaf << "," << c.cumulative << "\n";
  }
  return os.str();
}

int nearest_vertex(const MeshDomain& mesh, const Vec& x) {
  int best = 0;
  double d = kInfinity;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double di = (mesh.vertices[i] - x).squaredNorm();
    if (di < d) {
      d = di;
      best = static_cast<int>(i);
    }
  }
  return best;
}

SweepTrace foliated_sweep(const MeshDomain& mesh, const MeshMap& f, const Foliation& F, int p0,
                          double distance_budget) {
  validate_map(mesh, f);
  const ModelSpace& N = f.target;
  const Vec q0 = f.images.at(p0);
  if (!F.contains(q0)) throw Error(ErrorCode::OutsideFoliation, "f(p0) is not in the foliated region");
  SweepTrace trace;
  trace.crossings.push_back({p0, q0, *F.leaf_of(q0), 0.0});
  int p = p0;
  for (std::size_t step = 0; step <= mesh.size(); ++step) {
    const SweepCrossing& last = trace.crossings.back();
    int next;
    try {
      next = sampson_step(mesh, f, F, p);
    } catch (const Error& e) {
      trace.outcome = SweepOutcome::StalledInterior;
      trace.distance = distance(N, q0, last.image);
      trace.message = e.what();
      return trace;
    }
    const Vec& qn = f.images[next];
    if (!F.contains(qn)) {
      // Bisection on the geodesic q_k -> q_next for the last point inside F.
      const Vec v = log_map(N, last.image, qn);
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (F.contains(exp_map(N, last.image, mid * v)) ? lo : hi) = mid;
      }
      const Vec qs = exp_map(N, last.image, lo * v);
      const double ts = *F.leaf_param(qs);
      if (F.key(ts) <= F.key(last.leaf)) {
        trace.outcome = SweepOutcome::StalledInterior;
        trace.distance = distance(N, q0, last.image);
        trace.message = "left the foliation through its convex side";
        return trace;
      }
      const double scale = std::max(1.0, std::abs(F.concave_end()));
      trace.exit_kind = std::abs(ts - F.concave_end()) <= 1e-6 * scale ? "far_leaf" : "lateral";
      trace.outcome = SweepOutcome::ExitAtConcaveBoundary;
      trace.exit_point = qs;
      trace.distance = distance(N, q0, qs);
      trace.chain_distance = last.cumulative + distance(N, last.image, qs);
      const Vec w = log_map(N, q0, qs);
      for (int k = 1; k < 64; ++k) {
        if (!F.contains(exp_map(N, q0, (k / 64.0) * w))) trace.geodesic_leaves_region = true;
      }
      return trace;
    }
    const double tn = *F.leaf_of(qn);
    if (!(F.key(tn) > F.key(last.leaf))) {
      trace.outcome = SweepOutcome::StalledInterior;
      trace.distance = distance(N, q0, last.image);
      trace.message = "leaf parameter did not increase";
      return trace;
    }
    trace.crossings.push_back({next, qn, tn, last.cumulative + distance(N, last.image, qn)});
    p = next;
    const double d = distance(N, q0, qn);
    if (d > distance_budget) {
      trace.outcome = SweepOutcome::Diverging;
      trace.distance = d;
      trace.chain_distance = trace.crossings.back().cumulative;
      return trace;
    }
  }
  trace.outcome = SweepOutcome::StalledInterior;
  trace.message = "step limit reached";
  return trace;
}

}  // namespace hmcone
