#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "medgeo/estimation.hpp"
#include "medgeo/geometry.hpp"
#include "medgeo/reduction.hpp"
#include "medgeo/simulation.hpp"
#include "medgeo/typology.hpp"

namespace medgeo {

nlohmann::json to_json(const MediationFit& fit);
nlohmann::json to_json(const TypologyVerdict& verdict);
nlohmann::json to_json(const ContributionReport& report);
nlohmann::json to_json(const CanonicalCoords& cc);
nlohmann::json to_json(const GeometryPoint& pt);
nlohmann::json to_json(const CriticalValues& cv);
nlohmann::json to_json(const SuperfluityReport& report);
nlohmann::json to_json(const std::vector<BoundaryPolyline>& polylines);
nlohmann::json to_json(const SimulationConfig& config);
nlohmann::json to_json(const SimulationReport& report);

/// Reads a MediationFit from precomputed statistics (the fixture path for
/// published tables): requires a, b, d, c and the four p-values; p_ab,
/// standard errors and n are optional.
MediationFit fit_from_json(const nlohmann::json& j);

/// Parses a simulation config from JSON or "key = value" lines (sniffed by
/// the first non-space byte).
SimulationConfig parse_simulation_config(const std::string& text);

SimulationConfig config_from_json(const nlohmann::json& j);

std::string curves_to_csv(const std::vector<ConditionCurve>& curves);
std::string records_to_csv(const std::vector<ReplicateRecord>& records);

}  // namespace medgeo
