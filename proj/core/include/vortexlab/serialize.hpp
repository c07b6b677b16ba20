#pragma once

#include <nlohmann/json.hpp>

#include "vortexlab/holonomy.hpp"
#include "vortexlab/isoperimetric.hpp"
#include "vortexlab/lie_geom.hpp"
#include "vortexlab/loops.hpp"
#include "vortexlab/vortex.hpp"

// JSON round trips for the public data types. Complex scalars are [re, im]
// pairs, loops are arrays of per-coordinate pairs, grids are flattened
// row-major.

namespace vortexlab::geom {
void to_json(nlohmann::json& j, const TorusAction& a);
void from_json(const nlohmann::json& j, TorusAction& a);
}  // namespace vortexlab::geom

namespace vortexlab::loops {
void to_json(nlohmann::json& j, const DiscreteLoop& x);
void from_json(const nlohmann::json& j, DiscreteLoop& x);
void to_json(nlohmann::json& j, const PairLoop& p);
void from_json(const nlohmann::json& j, PairLoop& p);
void to_json(nlohmann::json& j, const GaugeLoop& g);
void from_json(const nlohmann::json& j, GaugeLoop& g);
}  // namespace vortexlab::loops

namespace vortexlab::holonomy {
void to_json(nlohmann::json& j, const ConnectionChart& c);
void from_json(const nlohmann::json& j, ConnectionChart& c);
}  // namespace vortexlab::holonomy

namespace vortexlab::vortex {
void to_json(nlohmann::json& j, const CylinderGrid& g);
void from_json(const nlohmann::json& j, CylinderGrid& g);
void to_json(nlohmann::json& j, const VortexFields& w);
void from_json(const nlohmann::json& j, VortexFields& w);
void to_json(nlohmann::json& j, const RadialProfile& p);
void from_json(const nlohmann::json& j, RadialProfile& p);
}  // namespace vortexlab::vortex

namespace vortexlab::isoperi {
void to_json(nlohmann::json& j, const VerifierConfig& c);
void from_json(const nlohmann::json& j, VerifierConfig& c);
}  // namespace vortexlab::isoperi
