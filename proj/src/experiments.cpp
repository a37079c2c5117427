#include "experiments.hpp"

#include "hmcone/cones.hpp"
#include "hmcone/error.hpp"
#include "hmcone/harmonic.hpp"
#include "hmcone/kernels.hpp"
#include "hmcone/log.hpp"
#include "hmcone/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace hmcone::detail {

namespace {

constexpr double kPi = std::numbers::pi;

double num_or(const Json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw Error(ErrorCode::ConfigError, std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

long long int_or(const Json& j, const char* key, long long fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw Error(ErrorCode::ConfigError, std::string("field '") + key + "' must be an integer");
  return j.at(key).get<long long>();
}

bool bool_or(const Json& j, const char* key, bool fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw Error(ErrorCode::ConfigError, std::string("field '") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::string str_or(const Json& j, const char* key, const std::string& fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw Error(ErrorCode::ConfigError, std::string("field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ConfigError, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t positive_count(const Json& j, const char* key, long long fallback) {
  const long long v = int_or(j, key, fallback);
  if (v <= 0) throw Error(ErrorCode::ConfigError, std::string("field '") + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

// Runs a check body; domain errors become a failed check carrying the error code.
void guarded(Context& ctx, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    Json d;
    d["error"] = std::string(to_string(e.code()));
    d["message"] = e.what();
    ctx.check(name, false, d);
  }
}

Vec random_in_ball(std::mt19937_64& rng, int dim, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm() * radius * std::pow(unif(rng), 1.0 / dim);
}

Vec unit_axis(int dim, int i) {
  Vec v = Vec::Zero(dim);
  v(i) = 1.0;
  return v;
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------- meshes and maps

MeshDomain mesh_from_json(const Json& j, const std::filesystem::path& base, int level_override = 0) {
  const std::string kind = str_or(j, "name", "disk");
  const int n = level_override > 0 ? level_override : static_cast<int>(int_or(j, "n", 32));
  if (kind == "disk") return disk_mesh(n, num_or(j, "radius", 1.0));
  if (kind == "square") {
    const Vec origin = j.contains("origin") ? vec_from_json(j.at("origin")) : Vec::Zero(2);
    if (origin.size() != 2) throw Error(ErrorCode::ConfigError, "square origin needs two coordinates");
    return square_grid_mesh(n, num_or(j, "side", 1.0), origin(0), origin(1));
  }
  if (kind == "path") return path_mesh(n, num_or(j, "length", 1.0));
  if (kind == "off") return read_off((base / need(j, "file").get<std::string>()).string());
  throw Error(ErrorCode::ConfigError, "unknown mesh kind '" + kind + "'");
}

Vec pad_to(const Vec& v, int dim) {
  Vec out = Vec::Zero(dim);
  const Eigen::Index k = std::min<Eigen::Index>(dim, v.size());
  out.head(k) = v.head(k);
  return out;
}

MeshMap map_from_json(const MeshDomain& mesh, const Json& j, const ModelSpace& target,
                      std::uint64_t seed, const std::filesystem::path& base) {
  const std::string kind = str_or(j, "name", "inclusion");
  const int dim = target.coord_dim();
  MeshMap f;
  f.target = target;
  f.images.assign(mesh.size(), Vec::Zero(dim));
  if (kind == "constant") {
    const Vec c = vec_from_json(need(j, "value"));
    for (auto& x : f.images) x = c;
  } else if (kind == "inclusion") {
    const Vec offset = j.contains("offset") ? pad_to(vec_from_json(j.at("offset")), dim) : Vec::Zero(dim);
    const double scale = num_or(j, "scale", 1.0);
    for (std::size_t i = 0; i < mesh.size(); ++i) f.images[i] = offset + scale * pad_to(mesh.vertices[i], dim);
  } else if (kind == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double scale = num_or(j, "scale", 1.0);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      if (!mesh.boundary[i]) continue;
      for (int a = 0; a < dim; ++a) f.images[i](a) = scale * unif(rng);
    }
  } else if (kind == "wave") {
    const double amp = num_or(j, "amplitude", 0.5);
    const double k = num_or(j, "frequency", 3.0);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const Vec& v = mesh.vertices[i];
      Vec x = pad_to(v, dim);
      if (dim >= 3 && mesh.boundary[i]) x(2) = amp * std::sin(k * std::atan2(v(1), v(0)));
      f.images[i] = x;
    }
  } else if (kind == "segment") {
    const Vec a = vec_from_json(need(j, "from")), b = vec_from_json(need(j, "to"));
    if (a.size() != dim || b.size() != dim) throw Error(ErrorCode::ConfigError, "segment endpoints do not match the target");
    const double len = mesh.vertices.back()(0) - mesh.vertices.front()(0);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const double s = (mesh.vertices[i](0) - mesh.vertices.front()(0)) / len;
      f.images[i] = (1.0 - s) * a + s * b;
    }
  } else if (kind == "file") {
    std::ifstream in(base / need(j, "file").get<std::string>());
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open boundary data file");
    const Json data = Json::parse(in);
    Vec mean = Vec::Zero(dim);
    std::size_t count = 0;
    for (const auto& [key, value] : data.items()) {
      const std::size_t idx = std::stoul(key);
      if (idx >= mesh.size()) throw Error(ErrorCode::ConfigError, "boundary vertex index out of range");
      f.images[idx] = vec_from_json(value);
      mean += f.images[idx];
      ++count;
    }
    if (count) mean /= static_cast<double>(count);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      if (!mesh.boundary[i]) f.images[i] = mean;
    }
  } else {
    throw Error(ErrorCode::ConfigError, "unknown map kind '" + kind + "'");
  }
  if (kind == "random" || kind == "wave") {
    // Interior starts at the boundary mean.
    Vec mean = Vec::Zero(dim);
    std::size_t count = 0;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      if (mesh.boundary[i]) {
        mean += f.images[i];
        ++count;
      }
    }
    mean /= static_cast<double>(std::max<std::size_t>(count, 1));
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      if (!mesh.boundary[i]) f.images[i] = mean;
    }
  }
  validate_map(mesh, f);
  return f;
}

RelaxOptions relax_from_json(const Json& j, bool parallel) {
  RelaxOptions o;
  o.parallel = parallel;
  o.tol = num_or(j, "tol", 0.0);
  o.max_iter = positive_count(j, "max_iter", 100000);
  const std::string mode = str_or(j, "mode", "direct");
  if (mode == "direct") o.mode = RelaxMode::Direct;
  else if (mode == "gauss_seidel") o.mode = RelaxMode::GaussSeidel;
  else if (mode == "jacobi") o.mode = RelaxMode::Jacobi;
  else throw Error(ErrorCode::ConfigError, "unknown relax mode '" + mode + "'");
  return o;
}

Json trace_to_json(const SweepTrace& t, const Foliation& F) {
  Json j;
  j["outcome"] = to_string(t.outcome);
  j["steps"] = t.crossings.size();
  j["first_leaf"] = t.crossings.front().leaf;
  j["last_leaf"] = t.crossings.back().leaf;
  if (t.exit_point) {
    j["exit_point"] = vec_to_json(*t.exit_point);
    j["exit_leaf"] = *F.leaf_param(*t.exit_point);
    j["exit_kind"] = t.exit_kind;
    j["geodesic_leaves_region"] = t.geodesic_leaves_region;
  }
  j["distance"] = t.distance;
  j["chain_distance"] = t.chain_distance;
  if (!t.message.empty()) j["message"] = t.message;
  return j;
}

bool keys_increase(const SweepTrace& t, const Foliation& F) {
  for (std::size_t k = 1; k < t.crossings.size(); ++k) {
    if (!(F.key(t.crossings[k].leaf) > F.key(t.crossings[k - 1].leaf))) return false;
  }
  return true;
}

// ---------------------------------------------------------------- convexity

void run_convexity(Context& ctx) {
  const Json& c = ctx.cfg();
  const GraphFunction g = graph_from_json(need(c, "graph"));
  const ModelSpace space = c.contains("space") ? space_from_json(c.at("space"))
                                               : ModelSpace::hyperbolic(g.dim + 1);
  const std::size_t n = positive_count(c, "samples", 1000);
  const double tol = num_or(c, "tol", 1e-8);
  const double closed_tol = num_or(c, "closed_form_tol", 1e-9);
  const bool sbi = g.name == "sphere_beyond_infinity";
  const double q = sbi ? num_or(need(c, "graph"), "q", 1.0) : 0.0;
  if (ctx.dry_run) return;

  std::mt19937_64 rng(ctx.seed);
  std::vector<Vec> samples;
  if (sbi) {
    for (std::size_t i = 0; i < n; ++i) samples.push_back(random_in_ball(rng, g.dim, 0.99 * std::sqrt(3.0) * q));
  } else {
    const double lo = num_or(c, "lo", -1.0), hi = num_or(c, "hi", 1.0);
    std::uniform_real_distribution<double> unif(lo, hi);
    while (samples.size() < n) {
      Vec x(g.dim);
      for (int a = 0; a < g.dim; ++a) x(a) = unif(rng);
      if (g.domain(x)) samples.push_back(x);
    }
  }

  guarded(ctx, "strict_convexity", [&] {
    ConvexityCertificate cert;
    ctx.timed("certificate", [&] { cert = certify_strict_convexity(g, space, samples, tol, ctx.parallel); });
    Json d;
    d["min_eigenvalue"] = cert.min_eigenvalue;
    d["argmin"] = vec_to_json(cert.argmin_point);
    d["samples"] = cert.n_samples;
    d["tol"] = tol;
    ctx.check("strict_convexity", cert.pass, d);
  });

  if (sbi && space.kind() == SpaceKind::Hyperbolic) {
    guarded(ctx, "closed_form", [&] {
      // Errors against the reference closed form and against the same form divided by f.
      double worst[2] = {0.0, 0.0}, worst_spec[2] = {0.0, 0.0};
      ctx.timed("closed_form", [&] {
        for (const Vec& x : samples) {
          const SecondFundamentalForm a = sff_hyperbolic_graph(g, x);
          const Vec spectrum = eigen_spectrum(a.matrix);
          const Mat closed = sphere_beyond_infinity_sff(q, x);
          const double f = g.eval(x);
          Vec expected = Vec::Constant(g.dim, 1.0 / (2.0 * f));
          expected(g.dim - 1) = (1.0 + x.squaredNorm() / ((f + q) * (f + q))) / (2.0 * f);
          std::sort(expected.data(), expected.data() + expected.size());
          for (int k = 0; k < 2; ++k) {
            const double scale = k == 0 ? 1.0 : 1.0 / f;
            worst[k] = std::max(worst[k], max_abs(a.matrix - scale * closed));
            worst_spec[k] = std::max(worst_spec[k], (spectrum - scale * expected).cwiseAbs().maxCoeff());
          }
        }
      });
      ctx.check("closed_form", worst[0] <= closed_tol, Json::object({{"max_abs_error", worst[0]}, {"tol", closed_tol}}));
      ctx.check("spectrum", worst_spec[0] <= closed_tol,
                Json::object({{"max_abs_error", worst_spec[0]}, {"tol", closed_tol}}));
      ctx.results["closed_form_over_f"] = Json::object({{"matrix_max_abs_error", worst[1]},
                                                        {"spectrum_max_abs_error", worst_spec[1]}});
    });
  }
  ctx.results["graph"] = g.name;
  ctx.results["space"] = space.name();
  ctx.results["samples"] = samples.size();
}

// ---------------------------------------------------------------- foliation audit

Json graph_to_json(const LeafSpaceGraph& g) {
  Json j;
  Json vs = Json::array();
  for (const auto& v : g.vertices) vs.push_back(v.name);
  Json es = Json::array();
  for (const auto& [a, b] : g.edges) es.push_back(Json::array({g.vertices[a].name, g.vertices[b].name}));
  j["vertices"] = vs;
  j["edges"] = es;
  j["text"] = g.to_text();
  return j;
}

void run_foliation_audit(Context& ctx) {
  const Json& c = ctx.cfg();
  std::optional<Foliation> F;
  if (c.contains("foliation")) F = foliation_from_json(c.at("foliation"));
  std::optional<BranchData> branches;
  if (c.contains("branches")) branches = branches_from_json(c.at("branches"));
  if (!F && !branches) throw Error(ErrorCode::ConfigError, "foliation-audit needs 'foliation' or 'branches'");
  const std::size_t leaves = positive_count(c, "leaves", 10);
  const std::size_t per_leaf = positive_count(c, "samples_per_leaf", 1000);
  const std::size_t sep_leaves = static_cast<std::size_t>(int_or(c, "separation_leaves", 3));
  const int per_axis = static_cast<int>(int_or(c, "per_axis", 64));
  const double tol = num_or(c, "tol", 1e-8);
  const bool negative = bool_or(c, "negative_control", false);
  if (ctx.dry_run) return;

  if (F) {
    ctx.results["foliation"] = F->name();
    ctx.results["space"] = F->space().name();
    guarded(ctx, "leaf_convexity", [&] {
      double worst = kInfinity, worst_t = 0.0;
      ctx.timed("leaf_convexity", [&] {
        for (std::size_t k = 0; k < leaves; ++k) {
          const double t = F->t_min() + (F->t_max() - F->t_min()) * (k + 0.5) / leaves;
          const ConvexityCertificate cert = certify_leaf(*F, t, per_leaf, tol, ctx.parallel);
          if (cert.min_eigenvalue < worst) {
            worst = cert.min_eigenvalue;
            worst_t = t;
          }
        }
      });
      Json d;
      d["leaves"] = leaves;
      d["samples_per_leaf"] = per_leaf;
      d["min_eigenvalue"] = worst;
      d["at_leaf"] = worst_t;
      ctx.check("leaf_convexity", worst > tol, d);
    });

    guarded(ctx, "order_coherence", [&] {
      std::size_t bad = 0, total = 0;
      for (std::size_t k = 0; k + 1 < leaves; ++k) {
        double t1 = F->t_min() + (F->t_max() - F->t_min()) * (k + 0.5) / leaves;
        double t2 = F->t_min() + (F->t_max() - F->t_min()) * (k + 1.5) / leaves;
        if (F->key(t1) > F->key(t2)) std::swap(t1, t2);
        const auto ps = F->leaf_sample(t1, 20, ctx.seed + k);
        const auto qs = F->leaf_sample(t2, 20, ctx.seed + 1000 + k);
        for (std::size_t i = 0; i < ps.size(); ++i) {
          if (!F->contains(ps[i]) || !F->contains(qs[i])) continue;
          ++total;
          if (!order_lt(*F, ps[i], qs[i])) ++bad;
        }
      }
      Json d;
      d["pairs"] = total;
      d["violations"] = bad;
      ctx.check("order_coherence", bad == 0 && total > 0, d);
    });

    if (sep_leaves > 0) {
      guarded(ctx, "separation", [&] {
        Json per = Json::array();
        bool all_two = true, flagged = false;
        ctx.timed("separation", [&] {
          for (std::size_t k = 0; k < sep_leaves; ++k) {
            const double t = F->t_min() + (F->t_max() - F->t_min()) * (k + 1.0) / (sep_leaves + 1.0);
            const SeparationReport rep = separating_check(*F, t, per_axis, ctx.parallel);
            Json e;
            e["t"] = t;
            e["components"] = rep.components;
            e["region_components"] = rep.region_components;
            per.push_back(e);
            all_two = all_two && rep.components == 2;
            flagged = flagged || rep.components >= 3;
          }
        });
        Json d;
        d["leaves"] = per;
        d["negative_control"] = negative;
        ctx.check(negative ? "separation_flagged" : "separation", negative ? flagged : all_two, d);
      });
    }
  }

  guarded(ctx, "leaf_space", [&] {
    const LeafSpaceGraph g = branches ? leaf_space(*branches) : leaf_space(*F);
    Json d = graph_to_json(g);
    bool ok = g.acyclic();
    if (c.contains("expect_graph")) {
      const Json& e = c.at("expect_graph");
      ok = ok && g.vertices.size() == static_cast<std::size_t>(int_or(e, "vertices", -1)) &&
           g.edges.size() == static_cast<std::size_t>(int_or(e, "edges", -1));
      d["expected"] = e;
    }
    ctx.results["leaf_space"] = d;
    Json s;
    s["vertices"] = g.vertices.size();
    s["edges"] = g.edges.size();
    s["acyclic"] = g.acyclic();
    ctx.check("leaf_space", ok, s);
    ctx.artifacts.emplace_back("leafspace.txt", g.to_text());
  });
}

// ---------------------------------------------------------------- cone audit

Hyperplane plane_from_json(const Json& j) {
  Hyperplane h;
  h.normal = vec_from_json(need(j, "normal"));
  if (!(h.normal.norm() > 0.0)) throw Error(ErrorCode::ConfigError, "plane normal must be nonzero");
  h.offset = num_or(j, "offset", 0.0) / h.normal.norm();
  h.normal.normalize();
  return h;
}

FloodOptions flood_from_json(const Json& c, int dim) {
  FloodOptions o;
  if (dim > 2) o.cells = 64;
  if (c.contains("flood")) {
    o.half_width = num_or(c.at("flood"), "half_width", o.half_width);
    o.cells = static_cast<int>(positive_count(c.at("flood"), "cells", o.cells));
  }
  return o;
}

void run_cone_audit(Context& ctx) {
  const Json& c = ctx.cfg();
  struct Entry {
    PerturbedCone cone;
    Vec point;
    bool expect_enclosure;
    bool expect_line;
  };
  std::vector<Entry> entries;
  for (const Json& e : c.value("cones", Json::array())) {
    Entry en{cone_from_json(need(e, "cone")), Vec(), bool_or(e, "expect_enclosure", true),
             bool_or(e, "expect_line", false)};
    en.point = e.contains("point") ? vec_from_json(e.at("point")) : en.cone.anchor;
    if (en.point.size() != en.cone.dim) throw Error(ErrorCode::ConfigError, "cone point has wrong dimension");
    entries.push_back(std::move(en));
  }
  struct LocalEntry {
    LocalCone cone;
    Vec q;
    bool expect_bounded;
  };
  std::vector<LocalEntry> locals;
  for (const Json& e : c.value("local", Json::array())) {
    const std::string kind = str_or(e, "name", "notch");
    LocalEntry le;
    if (kind == "notch") {
      le.cone = notch_local_cone(num_or(e, "c", 2.0));
    } else if (kind == "compact") {
      le.cone = compact_local_cone(vec_from_json(need(e, "center")), num_or(e, "radius", 1.0),
                                   plane_from_json(need(e, "plane")));
    } else {
      throw Error(ErrorCode::ConfigError, "unknown local cone kind '" + kind + "'");
    }
    le.q = vec_from_json(need(e, "q"));
    le.expect_bounded = bool_or(e, "expect_bounded", true);
    locals.push_back(std::move(le));
  }
  if (entries.empty() && locals.empty()) throw Error(ErrorCode::ConfigError, "cone-audit needs 'cones' or 'local'");
  const std::size_t probes = positive_count(c, "probes", 10000);
  const double horizon = num_or(c, "horizon", 1000.0);
  if (ctx.dry_run) return;

  Json enclosures = Json::array();
  for (const Entry& en : entries) {
    const std::string tag = en.cone.name;
    const FloodOptions flood = flood_from_json(c, en.cone.dim);
    Json rec;
    rec["cone"] = tag;
    ctx.timed("enclosure:" + tag, [&] {
      try {
        const Enclosure enc = enclosing_hyperplane(en.cone, en.point, flood, ctx.parallel);
        rec["found"] = true;
        rec["normal"] = vec_to_json(enc.plane.normal);
        rec["offset"] = enc.plane.offset;
        rec["radius"] = enc.radius;
        rec["cells"] = enc.cells;
        rec["candidates_tried"] = enc.candidates_tried;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EnclosureNotFound) throw;
        rec["found"] = false;
        rec["error"] = std::string(to_string(e.code()));
      }
    });
    const bool found = rec["found"].get<bool>();
    Json d = rec;
    d["expected"] = en.expect_enclosure;
    ctx.check("enclosure:" + tag, found == en.expect_enclosure, d);
    enclosures.push_back(rec);

    guarded(ctx, "affine_line:" + tag, [&] {
      LineProbeReport rep;
      ctx.timed("lines:" + tag, [&] { rep = affine_line_check(en.cone, probes, horizon, ctx.seed, ctx.parallel); });
      Json l;
      l["line_found"] = rep.line_found;
      l["probes"] = rep.probes;
      l["horizon"] = horizon;
      l["expected"] = en.expect_line;
      if (rep.line_found) {
        l["witness_base"] = vec_to_json(rep.base);
        l["witness_direction"] = vec_to_json(rep.direction);
      }
      ctx.check("affine_line:" + tag, rep.line_found == en.expect_line, l);
    });
  }
  ctx.results["enclosures"] = enclosures;

  for (std::size_t k = 0; k < locals.size(); ++k) {
    const LocalEntry& le = locals[k];
    const std::string name = "local:" + le.cone.name + ":" + std::to_string(k);
    bool bounded = false;
    Json d;
    try {
      const LocalConeRegion reg = local_cone_region(le.cone, le.q, flood_from_json(c, le.cone.dim), ctx.parallel);
      bounded = true;
      d["radius"] = reg.radius;
      d["cells"] = reg.cells;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnboundedComponent) throw;
      d["error"] = std::string(to_string(e.code()));
    }
    d["bounded"] = bounded;
    d["expected"] = le.expect_bounded;
    ctx.check(name, bounded == le.expect_bounded, d);
  }
}

// ---------------------------------------------------------------- Liouville

double image_diameter(const std::vector<Vec>& pts, const ModelSpace& space, bool parallel) {
  if (pts.size() < 2) return 0.0;
  // Maximum of the pairwise distances, computed as a min-reduction of the negatives.
  const auto best = kernels::min_reduce(parallel, pts.size(), [&](std::size_t i) {
    double d = 0.0;
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      d = std::max(d, space.kind() == SpaceKind::Euclidean ? (pts[i] - pts[k]).norm()
                                                           : distance(space, pts[i], pts[k]));
    }
    return -d;
  });
  return -best.value;
}

void run_liouville(Context& ctx) {
  const Json& c = ctx.cfg();
  const Json mesh_cfg = c.value("mesh", Json::object());
  const ModelSpace target = c.contains("target") ? space_from_json(c.at("target")) : ModelSpace::euclidean(2);
  const Json boundary = c.value("boundary", Json::object({{"name", "inclusion"}}));
  const RelaxOptions relax = relax_from_json(c.value("relax", Json::object()), ctx.parallel);
  std::vector<int> levels;
  for (const Json& l : c.value("levels", Json::array())) {
    if (!l.is_number_integer() || l.get<int>() < 2) throw Error(ErrorCode::ConfigError, "levels must be integers >= 2");
    levels.push_back(l.get<int>());
  }
  if (levels.empty()) levels.push_back(static_cast<int>(int_or(mesh_cfg, "n", 32)));
  const bool sub = c.contains("subharmonic");
  const Json sub_cfg = c.value("subharmonic", Json::object());
  const double C = num_or(sub_cfg, "C", 1.0);
  const double C_prime = num_or(sub_cfg, "C_prime", 1e-2);
  const Vec center = sub_cfg.contains("center") ? vec_from_json(sub_cfg.at("center")) : Vec::Zero(target.coord_dim());
  const std::string boundary_kind = str_or(boundary, "name", "inclusion");
  // Build the first level up front so that configuration errors surface in validation.
  mesh_from_json(mesh_cfg, ctx.scenario.base_dir, levels.front());
  if (ctx.dry_run) return;

  Json per_level = Json::array();
  for (int n : levels) {
    const std::string tag = "n" + std::to_string(n);
    const MeshDomain mesh = mesh_from_json(mesh_cfg, ctx.scenario.base_dir, n);
    const MeshMap f0 = map_from_json(mesh, boundary, target, ctx.seed, ctx.scenario.base_dir);
    Json lvl;
    lvl["n"] = n;
    lvl["vertices"] = mesh.size();
    lvl["h"] = mesh.h;
    RelaxResult res;
    bool converged = true;
    ctx.timed("relax:" + tag, [&] {
      try {
        res = relax_to_harmonic(mesh, f0, relax);
      } catch (const RelaxNotConverged& e) {
        res = e.best();
        converged = false;
      }
    });
    const double tol = relax.tol > 0.0 ? relax.tol : (target.kind() == SpaceKind::Euclidean ? 1e-8 : 1e-6);
    lvl["residual"] = res.residual;
    lvl["iterations"] = res.iterations;
    ctx.check("residual:" + tag, converged && res.residual <= tol,
              Json::object({{"residual", res.residual}, {"tol", tol}}));

    std::vector<Vec> bvals;
    for (int i : mesh.boundary_vertices()) bvals.push_back(res.map.images[i]);
    const double delta = image_diameter(bvals, target, ctx.parallel);
    const double diam = image_diameter(res.map.images, target, ctx.parallel);
    lvl["boundary_diameter"] = delta;
    lvl["image_diameter"] = diam;
    ctx.check("diameter:" + tag, diam <= delta + 1e-9,
              Json::object({{"image_diameter", diam}, {"boundary_diameter", delta}, {"slack", 1e-9}}));

    if (target.kind() == SpaceKind::Euclidean) {
      const int dim = target.coord_dim();
      Vec lo = Vec::Constant(dim, kInfinity), hi = Vec::Constant(dim, -kInfinity);
      for (const Vec& b : bvals) {
        lo = lo.cwiseMin(b);
        hi = hi.cwiseMax(b);
      }
      double excess = 0.0;
      for (const Vec& x : res.map.images) {
        excess = std::max(excess, (x - hi).maxCoeff());
        excess = std::max(excess, (lo - x).maxCoeff());
      }
      ctx.check("max_principle:" + tag, excess <= 1e-9, Json::object({{"excess", excess}}));
    }

    const auto& hist = res.energy_history;
    bool monotone = true;
    for (std::size_t k = 1; k < hist.size(); ++k) {
      if (hist[k] > hist[k - 1] * (1.0 + 1e-12) + 1e-15) monotone = false;
    }
    lvl["energy"] = hist.empty() ? dirichlet_energy(mesh, res.map) : hist.back();
    ctx.check("energy_monotone:" + tag, monotone, Json::object({{"records", hist.size()}}));

    if (boundary_kind == "constant") {
      const double e = dirichlet_energy(mesh, res.map);
      ctx.check("constant_energy:" + tag, e < 1e-18, Json::object({{"energy", e}, {"bound", 1e-18}}));
    }

    if (sub) {
      const auto u = [&](const Vec& x) {
        return target.kind() == SpaceKind::Euclidean ? (x - center).norm() : distance(target, center, x);
      };
      const SubharmonicReport rep = subharmonicity_check(mesh, res.map, u);
      const double bound = -(C * res.residual + C_prime * mesh.h * mesh.h);
      Json d;
      d["min_laplacian"] = rep.min_value;
      d["bound"] = bound;
      d["C"] = C;
      d["C_prime"] = C_prime;
      d["h"] = mesh.h;
      lvl["min_laplacian"] = rep.min_value;
      ctx.check("subharmonic:" + tag, rep.min_value >= bound, d);
    }
    per_level.push_back(lvl);
  }
  ctx.results["levels"] = per_level;

  if (c.contains("flat_quadratic")) {
    const Json& q = c.at("flat_quadratic");
    const MeshDomain mesh = disk_mesh(static_cast<int>(int_or(q, "n", 64)), num_or(q, "radius", 1.0));
    MeshMap id;
    id.target = ModelSpace::euclidean(2);
    id.images = mesh.vertices;
    double lo = kInfinity, hi = -kInfinity;
    for (int i : mesh.interior_vertices()) {
      double s = 0.0;
      for (const auto& [j, w] : mesh.adjacency[i]) s += w * (mesh.vertices[j].squaredNorm() - mesh.vertices[i].squaredNorm());
      s /= mesh.mass[i];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    const double err = std::max(std::abs(lo - 4.0), std::abs(hi - 4.0));
    ctx.results["flat_quadratic"] = Json::object({{"min", lo}, {"max", hi}});
    ctx.check("flat_quadratic", err <= 1e-6, Json::object({{"min", lo}, {"max", hi}, {"max_error", err}}));
  }
}

// ---------------------------------------------------------------- sweep

struct SweepSetup {
  Foliation foliation;
  MeshDomain mesh;
  MeshMap map;
  int start = 0;
  double budget = 0.0;
  std::optional<Enclosure> enclosure;
  Vec point;
};

SweepSetup perturbed_cone_setup(const Json& c) {
  const PerturbedCone cone = cone_from_json(need(c, "cone"));
  const Vec p = c.contains("point") ? vec_from_json(c.at("point")) : cone.anchor;
  const Json seg = c.value("segment", Json::object());
  Vec dir = seg.contains("direction") ? vec_from_json(seg.at("direction")) : unit_axis(cone.dim, 0);
  if (dir.size() != cone.dim || !(dir.norm() > 0.0)) throw Error(ErrorCode::ConfigError, "segment direction is invalid");
  dir.normalize();
  const double half = num_or(seg, "half_length", 8.0);
  const int n = static_cast<int>(positive_count(seg, "n", 64));
  const double eps = num_or(c, "eps", 0.1);

  const Enclosure enc = enclosing_hyperplane(cone, p, flood_from_json(c, cone.dim));
  const double r = 2.0 * enc.radius;
  const ModelSpace space = ModelSpace::euclidean(cone.dim);
  SweepSetup s{halfsphere_cone_foliation(p, -enc.plane.normal, r, eps, space), path_mesh(n, 2.0 * half), MeshMap{}, 0,
               num_or(c, "budget", 10.0 * r), enc, p};
  s.map.target = space;
  for (const Vec& v : s.mesh.vertices) s.map.images.push_back(p + (v(0) - half) * dir);
  s.start = nearest_vertex(s.mesh, Vec::Constant(1, half));
  return s;
}

void record_trace(Context& ctx, const SweepTrace& trace, const Foliation& F) {
  ctx.results["sweep"] = trace_to_json(trace, F);
  ctx.artifacts.emplace_back("trace.csv", trace.to_csv());
}

void run_sweep(Context& ctx) {
  const Json& c = ctx.cfg();
  const std::string construction = str_or(c, "construction", "");
  std::optional<SweepSetup> setup;
  std::optional<RelaxOptions> relax;
  if (construction == "perturbed_cone") {
    if (ctx.dry_run) {
      cone_from_json(need(c, "cone"));
      return;
    }
    guarded(ctx, "construction", [&] { setup = perturbed_cone_setup(c); });
    if (!setup) return;
  } else if (construction.empty()) {
    Foliation F = foliation_from_json(need(c, "foliation"));
    MeshDomain mesh = mesh_from_json(need(c, "mesh"), ctx.scenario.base_dir);
    MeshMap f = map_from_json(mesh, c.value("map", Json::object()), F.space(), ctx.seed, ctx.scenario.base_dir);
    const Vec start = c.contains("start") ? vec_from_json(c.at("start")) : mesh.vertices.front();
    const int p0 = nearest_vertex(mesh, start);
    setup = SweepSetup{std::move(F), std::move(mesh), std::move(f), p0, num_or(c, "budget", kInfinity), std::nullopt, Vec()};
    if (c.contains("relax")) relax = relax_from_json(c.at("relax"), ctx.parallel);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown sweep construction '" + construction + "'");
  }
  const std::string expect = str_or(c, "expect", "ExitAtConcaveBoundary");
  const std::string expect_kind = str_or(c, "expect_exit_kind", "");
  if (ctx.dry_run) return;

  SweepSetup& s = *setup;
  if (s.enclosure) {
    ctx.results["enclosure"] = Json::object({{"normal", vec_to_json(s.enclosure->plane.normal)},
                                             {"offset", s.enclosure->plane.offset},
                                             {"radius", s.enclosure->radius}});
    ctx.results["foliation_radius"] = s.foliation.radius();
  }
  if (relax) {
    bool converged = true;
    ctx.timed("relax", [&] {
      try {
        s.map = relax_to_harmonic(s.mesh, s.map, *relax).map;
      } catch (const RelaxNotConverged& e) {
        s.map = e.best().map;
        converged = false;
      }
    });
    const double res = max_tension(s.mesh, s.map, ctx.parallel);
    ctx.check("harmonic", converged, Json::object({{"residual", res}}));
  } else {
    const double res = max_tension(s.mesh, s.map, ctx.parallel);
    ctx.check("harmonic", res <= 1e-8, Json::object({{"residual", res}, {"tol", 1e-8}}));
  }

  guarded(ctx, "sweep", [&] {
    SweepTrace trace;
    ctx.timed("sweep", [&] { trace = foliated_sweep(s.mesh, s.map, s.foliation, s.start, s.budget); });
    record_trace(ctx, trace, s.foliation);
    Json d;
    d["outcome"] = to_string(trace.outcome);
    d["expected"] = expect;
    bool ok = to_string(trace.outcome) == expect;
    if (!expect_kind.empty()) {
      d["exit_kind"] = trace.exit_kind;
      d["expected_exit_kind"] = expect_kind;
      ok = ok && trace.exit_kind == expect_kind;
    }
    ctx.check("sweep_outcome", ok, d);
    ctx.check("monotone_leaves", keys_increase(trace, s.foliation),
              Json::object({{"crossings", trace.crossings.size()}}));
    if (c.contains("max_distance")) {
      const double m = num_or(c, "max_distance", 0.0);
      ctx.check("exit_distance", trace.distance <= m, Json::object({{"distance", trace.distance}, {"bound", m}}));
    }
    if (s.enclosure) {
      bool outside = false;
      double dist = 0.0;
      if (trace.exit_point) {
        dist = (*trace.exit_point - s.point).norm();
        outside = dist > s.enclosure->radius;
      }
      ctx.check("leaves_enclosure", outside,
                Json::object({{"exit_distance", dist}, {"enclosure_radius", s.enclosure->radius}}));
    }
  });
}

// ---------------------------------------------------------------- horosphere

void run_horosphere(Context& ctx) {
  const Json& c = ctx.cfg();
  const double q = num_or(c, "q", 2.0);
  const double eps = num_or(c, "eps", 0.1);
  const int dim = static_cast<int>(int_or(c, "dim", 2));
  const Foliation F = horosphere_foliation(q, eps, ModelSpace::hyperbolic(dim));
  const std::size_t leaves = positive_count(c, "leaves", 50);
  const std::size_t per_leaf = positive_count(c, "samples_per_leaf", 1000);
  const double tol = num_or(c, "tol", 1e-8);
  const Json map_cfg = c.value("map", Json::object());
  const int n = static_cast<int>(positive_count(map_cfg, "n", 64));
  Vec from = Vec::Zero(dim), to = Vec::Zero(dim);
  from(dim - 1) = q;
  to(dim - 1) = eps / 5.0;
  to(0) = eps / 2.0;
  if (map_cfg.contains("from")) from = vec_from_json(map_cfg.at("from"));
  if (map_cfg.contains("to")) to = vec_from_json(map_cfg.at("to"));
  const MeshDomain mesh = path_mesh(n, 1.0);
  const MeshMap f0 = map_from_json(mesh, Json::object({{"name", "segment"}, {"from", vec_to_json(from)}, {"to", vec_to_json(to)}}),
                                   F.space(), ctx.seed, ctx.scenario.base_dir);
  const RelaxOptions relax = relax_from_json(c.value("relax", Json::object()), ctx.parallel);
  const double budget = num_or(c, "budget", kInfinity);
  if (ctx.dry_run) return;

  guarded(ctx, "leaf_convexity", [&] {
    double worst = kInfinity, worst_t = 0.0;
    ctx.timed("leaf_convexity", [&] {
      for (std::size_t k = 0; k < leaves; ++k) {
        const double t = eps + (q - eps) * static_cast<double>(k + 1) / static_cast<double>(leaves);
        const ConvexityCertificate cert = certify_leaf(F, t, per_leaf, tol, ctx.parallel);
        if (cert.min_eigenvalue < worst) {
          worst = cert.min_eigenvalue;
          worst_t = t;
        }
      }
    });
    ctx.check("leaf_convexity", worst > tol,
              Json::object({{"leaves", leaves}, {"samples_per_leaf", per_leaf}, {"min_eigenvalue", worst},
                            {"at_leaf", worst_t}, {"tol", tol}}));
  });

  RelaxResult res;
  bool converged = true;
  ctx.timed("relax", [&] {
    try {
      res = relax_to_harmonic(mesh, f0, relax);
    } catch (const RelaxNotConverged& e) {
      res = e.best();
      converged = false;
    }
  });
  ctx.check("harmonic", converged, Json::object({{"residual", res.residual}, {"iterations", res.iterations}}));

  guarded(ctx, "sweep", [&] {
    SweepTrace trace;
    ctx.timed("sweep", [&] { trace = foliated_sweep(mesh, res.map, F, nearest_vertex(mesh, Vec::Zero(1)), budget); });
    record_trace(ctx, trace, F);
    const bool far = trace.exit_point && std::abs(*F.leaf_param(*trace.exit_point) - eps) <= 1e-6;
    ctx.check("sweep_outcome",
              trace.outcome == SweepOutcome::ExitAtConcaveBoundary && trace.exit_kind == "far_leaf" && far,
              Json::object({{"outcome", to_string(trace.outcome)}, {"exit_kind", trace.exit_kind}}));
    ctx.check("monotone_leaves", keys_increase(trace, F), Json::object({{"crossings", trace.crossings.size()}}));
  });
}

// ---------------------------------------------------------------- Riemannian cones

ConeValidateOptions validate_options(const Json& j, std::uint64_t seed) {
  ConeValidateOptions o;
  o.seed = seed;
  o.radius_samples = positive_count(j, "radius_samples", static_cast<long long>(o.radius_samples));
  o.separation_samples = static_cast<int>(positive_count(j, "separation_samples", o.separation_samples));
  o.t_lo_frac = num_or(j, "t_lo_frac", o.t_lo_frac);
  o.sep_lo_frac = num_or(j, "sep_lo_frac", o.sep_lo_frac);
  o.sep_hi_frac = num_or(j, "sep_hi_frac", o.sep_hi_frac);
  o.cells_2d = static_cast<int>(positive_count(j, "cells_2d", o.cells_2d));
  o.cells_3d = static_cast<int>(positive_count(j, "cells_3d", o.cells_3d));
  o.min_component_cells = positive_count(j, "min_component_cells", static_cast<long long>(o.min_component_cells));
  return o;
}

void run_riemannian_cone(Context& ctx) {
  const Json& c = ctx.cfg();
  const ConeValidateOptions opts = validate_options(c.value("validate", Json::object()), ctx.seed);
  std::vector<std::pair<RiemannianCone, std::string>> cones;
  for (const Json& e : c.value("cones", Json::array())) {
    cones.emplace_back(riemannian_cone_from_json(need(e, "cone")), str_or(e, "expect", "valid"));
  }
  struct Containment {
    RiemannianCone cone;
    double lo, hi;
  };
  std::vector<Containment> containment;
  const Json cont = c.value("containment", Json::object());
  for (const Json& e : cont.value("functions", Json::array())) {
    RiemannianCone rc;
    rc.ambient = ModelSpace::euclidean(2);
    rc.ray = {Vec::Zero(2), unit_axis(2, 0)};
    rc.radius = radius_from_json(need(e, "radius"));
    rc.name = rc.radius.name;
    const Json iv = e.value("interval", Json::array({0.5, 4.0}));
    if (!iv.is_array() || iv.size() != 2) throw Error(ErrorCode::ConfigError, "interval needs two numbers");
    containment.push_back({rc, iv[0].get<double>(), iv[1].get<double>()});
  }
  const std::size_t pairs = positive_count(cont, "pairs", 100);
  if (ctx.dry_run) return;

  Json audits = Json::array();
  for (const auto& [cone, expect] : cones) {
    Json rec;
    rec["cone"] = cone.name;
    std::string verdict = "valid";
    ctx.timed("validate:" + cone.name, [&] {
      try {
        const RiemannianConeReport rep = riemannian_cone_validate(cone, opts, ctx.parallel);
        rec["worst_margin"] = rep.worst_margin;
        rec["worst_t"] = rep.worst_t;
        Json sep = Json::array();
        for (const auto& s : rep.separation) sep.push_back(Json::object({{"t", s.t}, {"components", s.components}, {"raw_components", s.raw_components}}));
        rec["separation"] = sep;
        rec["cone_cells"] = rep.cone_cells;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RadiusViolation && e.code() != ErrorCode::SeparationFailure) throw;
        verdict = to_string(e.code());
        rec["message"] = e.what();
      }
    });
    rec["verdict"] = verdict;
    rec["expected"] = expect;
    audits.push_back(rec);
    ctx.check("cone:" + cone.name, verdict == expect, rec);
  }
  ctx.results["cones"] = audits;

  std::mt19937_64 rng(ctx.seed);
  Json per_fn = Json::array();
  for (const Containment& ct : containment) {
    std::uniform_real_distribution<double> unif(ct.lo, ct.hi);
    std::size_t disagreements = 0, contained = 0;
    for (std::size_t k = 0; k < pairs; ++k) {
      double t1 = unif(rng), t2 = unif(rng);
      if (t1 > t2) std::swap(t1, t2);
      const double r1 = ct.cone.radius.r(t1), r2 = ct.cone.radius.r(t2);
      const bool criterion = r2 - r1 >= (t2 - t1) - 1e-9 * r2;
      const bool verdict = ball_containment(ct.cone, t1, t2);
      contained += verdict;
      disagreements += verdict != criterion;
    }
    per_fn.push_back(Json::object({{"radius", ct.cone.name}, {"pairs", pairs}, {"contained", contained},
                                   {"disagreements", disagreements}}));
    ctx.check("containment:" + ct.cone.name, disagreements == 0,
              Json::object({{"pairs", pairs}, {"disagreements", disagreements}}));
  }
  if (!per_fn.empty()) ctx.results["containment"] = per_fn;

  if (c.contains("torus")) {
    const Json& t = c.at("torus");
    const TorusTransform tt = torus_cone_transform(num_or(t, "theta", kPi / 4.0));
    Json rows = Json::array();
    for (const Json& tv : t.value("t", Json::array({1.0, 2.0, 4.0}))) {
      const double s = tv.get<double>();
      rows.push_back(Json::object({{"t", s},
                                   {"radius", tt.cone.radius.r(s)},
                                   {"doubled_radius", tt.doubled_radius(s)},
                                   {"image_circumradius", torus_image_circumradius(tt, s)}}));
    }
    ctx.results["torus"] = rows;
  }
}

}  // namespace

const std::map<std::string, Experiment>& experiments() {
  static const std::map<std::string, Experiment> table = {
      {"convexity", run_convexity},
      {"foliation-audit", run_foliation_audit},
      {"cone-audit", run_cone_audit},
      {"liouville", run_liouville},
      {"sweep", run_sweep},
      {"horosphere", run_horosphere},
      {"riemannian-cone", run_riemannian_cone},
  };
  return table;
}

}  // namespace hmcone::detail
