#pragma once

#include "hjdirac/geometry.hpp"
#include "hjdirac/hamilton_jacobi.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>

namespace hjdirac {

// Throws InvalidArgument naming the first key of obj not in allowed.
void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where);

// {"kind": "minkowski"} | {"kind": "diagonal", "diag": [4]} | {"kind": "polar"}
// | {"kind": "custom-polynomial", "components": {"00": [terms], "01": ..., "33": ...}}
// with terms [{"coef": c, "powers": [i, j, k, l]}, ...]; missing components are 0.
MetricField load_metric(const nlohmann::json& spec);

// {"kind": "identity"} | {"kind": "polar"} | {"kind": "rescaled-time", "factor": f}
CoordinateChart load_chart(const nlohmann::json& spec);

Polynomial4 load_polynomial(const nlohmann::json& terms);

// {"kind": "geodesic", "m0", "base": [4], "k"} | {"kind": "projectile", "m0",
// "ux", "uy", "g", "s", "origin": [4], "w0"} | {"kind": "plane-wave", "p": [3], "m0"}
// | {"kind": "custom-polynomial", "m0", "terms": [...]}
HamiltonJacobiField load_field(const nlohmann::json& spec);

}  // namespace hjdirac
