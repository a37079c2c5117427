#pragma once

#include "hmcone/ambient.hpp"
#include "hmcone/cones.hpp"
#include "hmcone/foliation.hpp"
#include "hmcone/hypersurface.hpp"

#include "json.hpp"

#include <string>

namespace hmcone {

using Json = nlohmann::ordered_json;

/// Builders from scenario JSON. Malformed or out-of-range input throws ConfigError
/// (or the domain error of the underlying constructor).
Vec vec_from_json(const Json& j);
Json vec_to_json(const Vec& v);

ModelSpace space_from_json(const Json& j);
Json space_to_json(const ModelSpace& s);
GraphFunction graph_from_json(const Json& j);
Foliation foliation_from_json(const Json& j);
BranchData branches_from_json(const Json& j);
PerturbedCone cone_from_json(const Json& j);
RadiusFunction radius_from_json(const Json& j);
RiemannianCone riemannian_cone_from_json(const Json& j);

/// Machine-readable catalog of registry names with parameter schemas.
Json registry_catalog();
std::string registry_text();

}  // namespace hmcone
