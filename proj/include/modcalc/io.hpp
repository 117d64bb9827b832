#pragma once

#include "modcalc/curve.hpp"
#include "modcalc/density.hpp"
#include "modcalc/families.hpp"
#include "modcalc/plans.hpp"
#include "modcalc/space.hpp"

#include <json.hpp>

#include <span>
#include <string>

namespace modcalc::io {

using Json = nlohmann::json;

/// Reads and parses a JSON file; failures raise ValidationError naming `field`.
Json load_json(const std::string& path, const std::string& field);

SpaceSpec parse_space(const Json& j);
MetricMeasureSpace load_space(const std::string& path);

/// Missing "times" means constant speed on [0,1].
DiscreteCurve parse_curve(const MetricMeasureSpace& space, const Json& j, const std::string& field);
CurveFamily parse_family(const MetricMeasureSpace& space, const Json& j);
Plan parse_plan(const MetricMeasureSpace& space, const Json& j);

/// {"values": {id: float}} with every vertex present.
VertexFunction parse_function(const MetricMeasureSpace& space, const Json& j, const std::string& field);
VertexSet parse_vertex_set(const MetricMeasureSpace& space, const Json& j, const std::string& field);

/// Finite doubles as numbers, infinities as "inf" / "-inf".
Json number(double x);
Json by_id(const MetricMeasureSpace& space, std::span<const double> values);
Json curve_json(const MetricMeasureSpace& space, const DiscreteCurve& curve);

}  // namespace modcalc::io
