#include "hmcone/registry.hpp"

#include "hmcone/error.hpp"

#include <sstream>

namespace hmcone {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ConfigError, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double num(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorCode::ConfigError, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double num_or(const Json& j, const char* key, double fallback) {
  return j.is_object() && j.contains(key) ? num(j, key) : fallback;
}

int int_or(const Json& j, const char* key, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw Error(ErrorCode::ConfigError, std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string str(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw Error(ErrorCode::ConfigError, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Json param(const char* type, const char* range = nullptr, const char* note = nullptr) {
  Json p;
  p["type"] = type;
  if (range) p["range"] = range;
  if (note) p["note"] = note;
  return p;
}

Json entry(const char* name, Json params) {
  Json e;
  e["name"] = name;
  e["params"] = std::move(params);
  return e;
}

}  // namespace

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ConfigError, "expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::ConfigError, "expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json vec_to_json(const Vec& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

ModelSpace space_from_json(const Json& j) {
  const std::string name = str(j, "name");
  if (name == "product") {
    const Json& fs = field(j, "factors");
    if (!fs.is_array() || fs.empty()) throw Error(ErrorCode::ConfigError, "product needs a factor list");
    std::vector<ModelSpace> factors;
    for (const Json& f : fs) factors.push_back(space_from_json(f));
    return ModelSpace::product(std::move(factors));
  }
  const int dim = int_or(j, "dim", 2);
  if (dim < 1) throw Error(ErrorCode::ConfigError, "dimension must be positive");
  if (name == "euclidean") return ModelSpace::euclidean(dim);
  if (name == "hyperbolic") {
    if (dim < 2) throw Error(ErrorCode::ConfigError, "hyperbolic space needs dim >= 2");
    return ModelSpace::hyperbolic(dim);
  }
  if (name == "sphere") return ModelSpace::sphere(dim);
  throw Error(ErrorCode::ConfigError, "unknown space '" + name + "'");
}

Json space_to_json(const ModelSpace& s) {
  Json j;
  switch (s.kind()) {
    case SpaceKind::Euclidean: j["name"] = "euclidean"; break;
    case SpaceKind::Hyperbolic: j["name"] = "hyperbolic"; break;
    case SpaceKind::Sphere: j["name"] = "sphere"; break;
    case SpaceKind::Product: {
      j["name"] = "product";
      Json fs = Json::array();
      for (const auto& f : s.factors()) fs.push_back(space_to_json(f));
      j["factors"] = fs;
      return j;
    }
  }
  j["dim"] = s.dim();
  return j;
}

GraphFunction graph_from_json(const Json& j) {
  const std::string name = str(j, "name");
  const int dim = int_or(j, "dim", 1);
  if (dim < 1) throw Error(ErrorCode::ConfigError, "graph dimension must be positive");
  if (name == "sphere_beyond_infinity") return sphere_beyond_infinity(num(j, "q"), dim);
  if (name == "horosphere") return horosphere_graph(num(j, "c"), dim);
  if (name == "paraboloid") return paraboloid_graph(num(j, "a"), dim, num_or(j, "c", 0.0));
  if (name == "log_cone") return log_cone_graph();
  if (name == "xsinx") return xsinx_graph();
  throw Error(ErrorCode::ConfigError, "unknown graph function '" + name + "'");
}

BranchData branches_from_json(const Json& j) {
  BranchData data;
  for (const Json& l : field(j, "leaves")) {
    SeparatingLeaf leaf;
    leaf.id = int_or(l, "id", 0);
    if (l.contains("param")) leaf.param = num(l, "param");
    for (const Json& piece : field(l, "pieces")) {
      BranchPiece bp;
      const std::string side = str(piece, "side");
      if (side != "convex" && side != "concave") {
        throw Error(ErrorCode::ConfigError, "piece side must be 'convex' or 'concave'");
      }
      bp.concave = side == "concave";
      if (piece.contains("next")) bp.next_leaf = int_or(piece, "next", 0);
      leaf.pieces.push_back(bp);
    }
    data.leaves.push_back(std::move(leaf));
  }
  return data;
}

Foliation foliation_from_json(const Json& j) {
  const std::string name = str(j, "name");
  auto finish = [&j](Foliation f) {
    return j.contains("branches") ? f.with_branches(branches_from_json(j.at("branches"))) : f;
  };
  if (name == "annulus") {
    const double r = num(j, "r"), R = num(j, "R");
    if (j.contains("centers")) {
      std::vector<Vec> centers;
      for (const Json& c : j.at("centers")) centers.push_back(vec_from_json(c));
      return finish(annulus_copies(r, R, centers));
    }
    return finish(annulus_foliation(r, R, ModelSpace::euclidean(int_or(j, "dim", 2))));
  }
  if (name == "halfsphere_cone") {
    const Vec q = vec_from_json(field(j, "q"));
    return finish(halfsphere_cone_foliation(q, vec_from_json(field(j, "nu")), num(j, "r"),
                                            num(j, "eps"),
                                            ModelSpace::euclidean(static_cast<int>(q.size()))));
  }
  if (name == "horosphere_family") {
    return finish(horosphere_foliation(num(j, "q"), num(j, "eps"),
                                       ModelSpace::hyperbolic(int_or(j, "dim", 2))));
  }
  if (name == "sphere_cap") return finish(sphere_cap_foliation(num(j, "eps"), ModelSpace::sphere(2)));
  throw Error(ErrorCode::ConfigError, "unknown foliation '" + name + "'");
}

PerturbedCone cone_from_json(const Json& j) {
  const std::string name = str(j, "name");
  if (name == "classical") {
    return classical_cone(vec_from_json(field(j, "p")), vec_from_json(field(j, "v")), num(j, "theta"));
  }
  if (name == "log_cone") return log_cone();
  if (name == "xsinx") {
    const std::string region = j.contains("region") ? str(j, "region") : "upper";
    if (region != "upper" && region != "lower") {
      throw Error(ErrorCode::ConfigError, "xsinx region must be 'upper' or 'lower'");
    }
    return xsinx_cone(region == "upper");
  }
  if (name == "two_ray") return two_ray_cone(num(j, "theta"));
  if (name == "halfspace") return halfspace_region(int_or(j, "dim", 2));
  if (name == "compact") return compact_cone(vec_from_json(field(j, "center")), num(j, "radius"));
  throw Error(ErrorCode::ConfigError, "unknown cone '" + name + "'");
}

RadiusFunction radius_from_json(const Json& j) {
  const std::string name = str(j, "name");
  if (name == "cos_theta_t") return cos_theta_radius(num(j, "theta"));
  if (name == "arctan") return arctan_radius(num_or(j, "scale", 1.0));
  if (name == "linear") return linear_radius(num(j, "slope"), num_or(j, "shift", 0.0));
  if (name == "quadratic") return quadratic_radius(num(j, "coeff"));
  throw Error(ErrorCode::ConfigError, "unknown radius function '" + name + "'");
}

RiemannianCone riemannian_cone_from_json(const Json& j) {
  if (j.contains("application")) {
    const std::string a = str(j, "application");
    if (a.size() != 1 || a[0] < 'a' || a[0] > 'e') {
      throw Error(ErrorCode::ConfigError, "application must be one of a, b, c, d, e");
    }
    RiemannianCone cone = application_cone(a[0], num_or(j, "theta", 0.78539816339744831));
    cone.t_max = num_or(j, "t_max", cone.t_max);
    return cone;
  }
  RiemannianCone cone;
  cone.name = j.contains("label") ? str(j, "label") : "custom";
  cone.ambient = space_from_json(field(j, "space"));
  const Json& ray = field(j, "ray");
  cone.ray = {vec_from_json(field(ray, "base")), vec_from_json(field(ray, "direction"))};
  cone.radius = radius_from_json(field(j, "radius"));
  cone.t_max = num_or(j, "t_max", 4.0);
  if (cone.ray.base_point.size() != cone.ambient.coord_dim() ||
      cone.ray.direction.size() != cone.ambient.coord_dim()) {
    throw Error(ErrorCode::ConfigError, "ray does not match the space's coordinates");
  }
  validate_ray(cone.ambient, cone.ray);
  return cone;
}

Json registry_catalog() {
  Json cat;
  cat["spaces"] = Json::array({
      entry("euclidean", {{"dim", param("integer", ">= 1")}}),
      entry("hyperbolic", {{"dim", param("integer", ">= 2", "upper halfspace model")}}),
      entry("sphere", {{"dim", param("integer", ">= 1", "unit sphere in R^{dim+1}")}}),
      entry("product", {{"factors", param("array", nullptr, "list of space configs")}}),
  });
  cat["foliations"] = Json::array({
      entry("annulus", {{"r", param("number", "(0, R)")},
                        {"R", param("number", "(r, inf)")},
                        {"dim", param("integer", ">= 2")},
                        {"centers", param("array", nullptr, "optional; several copies form a broken family")}}),
      entry("halfsphere_cone", {{"q", param("array")},
                                {"nu", param("array", "unit length")},
                                {"r", param("number", "(0, inf)")},
                                {"eps", param("number", "(0, inf)")}}),
      entry("horosphere_family", {{"q", param("number", "(eps, inf)")},
                                  {"eps", param("number", "(0, q)")},
                                  {"dim", param("integer", ">= 2", "ambient hyperbolic dimension")}}),
      entry("sphere_cap", {{"eps", param("number", "(0, pi/2)")}}),
  });
  cat["cones"] = Json::array({
      entry("classical", {{"p", param("array")},
                          {"v", param("array", "nonzero")},
                          {"theta", param("number", "(0, pi/2)")}}),
      entry("log_cone", Json::object()),
      entry("xsinx", {{"region", param("string", "upper | lower")}}),
      entry("two_ray", {{"theta", param("number", "[0, pi)", "theta = 0 is the degenerate halfplane")}}),
      entry("halfspace", {{"dim", param("integer", ">= 1")}}),
      entry("compact", {{"center", param("array")}, {"radius", param("number", "(0, inf)")}}),
  });
  Json rc = Json::array();
  const char* apps[][2] = {{"a", "R^2, ray (0, t), r = cos(theta) t"},
                           {"b", "H^2, vertical ray from (0, 1), r = cos(theta) t"},
                           {"c", "H^2 x R, diagonal ray, r = cos(theta) t"},
                           {"d", "S^1 x R, vertical ray, r = arctan(cos(theta) t)"},
                           {"e", "S^2 x R, ray over the south pole, r = arctan(t)"}};
  for (const auto& a : apps) {
    Json e;
    e["name"] = std::string("riemannian_") + a[0];
    e["description"] = a[1];
    e["params"] = {{"theta", param("number", "(0, pi/2)")}, {"t_max", param("number", "(0, inf)")}};
    rc.push_back(e);
  }
  cat["riemannian_cones"] = rc;
  cat["radius_functions"] = Json::array({
      entry("cos_theta_t", {{"theta", param("number", "(0, pi/2)")}}),
      entry("arctan", {{"scale", param("number", "(0, inf)")}}),
      entry("linear", {{"slope", param("number")}, {"shift", param("number")}}),
      entry("quadratic", {{"coeff", param("number")}}),
  });
  cat["graphs"] = Json::array({
      entry("sphere_beyond_infinity", {{"q", param("number", "(0, inf)")}, {"dim", param("integer", ">= 1")}}),
      entry("horosphere", {{"c", param("number", "(0, inf)")}, {"dim", param("integer", ">= 1")}}),
      entry("paraboloid", {{"a", param("number")}, {"c", param("number")}, {"dim", param("integer", ">= 1")}}),
      entry("log_cone", Json::object()),
      entry("xsinx", Json::object()),
  });
  cat["experiments"] = Json::array({"convexity", "foliation-audit", "cone-audit", "liouville", "sweep",
                                    "horosphere", "riemannian-cone"});
  return cat;
}

std::string registry_text() {
  const Json cat = registry_catalog();
  std::ostringstream os;
  for (const auto& [section, items] : cat.items()) {
    os << section << ":\n";
    for (const Json& item : items) {
      if (item.is_string()) {
        os << "  " << item.get<std::string>() << "\n";
        continue;
      }
      os << "  " << item.at("name").get<std::string>();
      bool first = true;
      for (const auto& [p, schema] : item.at("params").items()) {
        os << (first ? "  " : ", ") << p;
        if (schema.contains("range")) os << " " << schema.at("range").get<std::string>();
        first = false;
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace hmcone
