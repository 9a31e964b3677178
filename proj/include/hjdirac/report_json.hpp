#pragma once

#include "hjdirac/dirac_ops.hpp"
#include "hjdirac/hamilton_jacobi.hpp"
#include "hjdirac/stat_mech.hpp"

#include <json.hpp>

namespace hjdirac {

nlohmann::json to_json(const FourVector& v);
nlohmann::json to_json(const Covector& v);
nlohmann::json to_json(const HJReport& r);
nlohmann::json to_json(const ScaleReport& r);
// {lie_residual, commutator_norm, eigen_residual, verdict} plus the pass flags.
nlohmann::json to_json(const LieTransportReport& r);
nlohmann::json to_json(const MomentReport& r);
nlohmann::json to_json(const EigenSolutionReport& r);
nlohmann::json to_json(const PartitionTable& t);

}  // namespace hjdirac
