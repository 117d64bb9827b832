#include "modcalc/io.hpp"

#include "modcalc/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace modcalc::io {

namespace {

const Json& member(const Json& j, const char* key, const std::string& field) {
    if (!j.is_object()) throw ValidationError(field, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(field + "." + key, "missing");
    return *it;
}

double as_double(const Json& j, const std::string& field) {
    if (!j.is_number()) throw ValidationError(field, "expected a number");
    double x = j.get<double>();
    if (!std::isfinite(x)) throw ValidationError(field, "expected a finite number");
    return x;
}

std::string as_string(const Json& j, const std::string& field) {
    if (!j.is_string()) throw ValidationError(field, "expected a string");
    return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& field) {
    if (!j.is_array()) throw ValidationError(field, "expected an array");
    return j;
}

Vertex vertex_of(const MetricMeasureSpace& space, const Json& j, const std::string& field) {
    std::string id = as_string(j, field);
    if (!space.has_vertex(id)) throw ValidationError(field, "unknown vertex id '" + id + "'");
    return space.index_of(id);
}

std::size_t as_count(const Json& j, const std::string& field) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw ValidationError(field, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

}  // namespace

Json load_json(const std::string& path, const std::string& field) {
    std::ifstream in(path);
    if (!in) throw ValidationError(field, "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const Json::parse_error& e) {
        throw ValidationError(field, std::string("malformed JSON: ") + e.what());
    }
}

SpaceSpec parse_space(const Json& j) {
    SpaceSpec spec;
    const Json& vertices = as_array(member(j, "vertices", "space"), "vertices");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const std::string field = "vertices[" + std::to_string(i) + "]";
        spec.vertices.push_back({as_string(member(vertices[i], "id", field), field + ".id"),
                                 as_double(member(vertices[i], "m", field), field + ".m")});
    }
    if (j.contains("edges")) {
        const Json& edges = as_array(j["edges"], "edges");
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const std::string field = "edges[" + std::to_string(i) + "]";
            spec.edges.push_back({as_string(member(edges[i], "u", field), field + ".u"),
                                  as_string(member(edges[i], "v", field), field + ".v"),
                                  as_double(member(edges[i], "len", field), field + ".len")});
        }
    }
    return spec;
}

MetricMeasureSpace load_space(const std::string& path) { return MetricMeasureSpace::build(parse_space(load_json(path, "space"))); }

DiscreteCurve parse_curve(const MetricMeasureSpace& space, const Json& j, const std::string& field) {
    const Json& ids = as_array(member(j, "vertices", field), field + ".vertices");
    std::vector<Vertex> vertices;
    for (std::size_t i = 0; i < ids.size(); ++i)
        vertices.push_back(vertex_of(space, ids[i], field + ".vertices[" + std::to_string(i) + "]"));
    if (vertices.empty()) throw ValidationError(field + ".vertices", "a curve needs at least one vertex");
    try {
        DiscreteCurve curve = [&] {
            if (!j.contains("times")) return DiscreteCurve::through(space, vertices);
            const Json& ts = as_array(j["times"], field + ".times");
            std::vector<double> times;
            for (std::size_t i = 0; i < ts.size(); ++i)
                times.push_back(as_double(ts[i], field + ".times[" + std::to_string(i) + "]"));
            return DiscreteCurve(std::move(times), std::move(vertices));
        }();
        curve.validate(space);
        return curve;
    } catch (const ValidationError& e) {
        throw ValidationError(field + "." + e.field(), e.what());
    }
}

CurveFamily parse_family(const MetricMeasureSpace& space, const Json& j) {
    const std::string type = as_string(member(j, "type", "family"), "family.type");
    if (type == "explicit") {
        const Json& curves = as_array(member(j, "curves", "family"), "family.curves");
        CurveFamily family({}, "explicit");
        for (std::size_t i = 0; i < curves.size(); ++i)
            family.push_back(parse_curve(space, curves[i], "family.curves[" + std::to_string(i) + "]"));
        return family;
    }
    const std::size_t max_hops = j.contains("max_hops") ? as_count(j["max_hops"], "family.max_hops") : 3;
    bool simple = true;
    if (j.contains("simple")) {
        if (!j["simple"].is_boolean()) throw ValidationError("family.simple", "expected a boolean");
        simple = j["simple"].get<bool>();
    }
    VertexSet e = parse_vertex_set(space, member(j, "E", "family"), "family.E");
    if (type == "connecting") {
        VertexSet f = parse_vertex_set(space, member(j, "F", "family"), "family.F");
        return connecting_family(space, e, f, max_hops, simple);
    }
    if (type == "through") return family_through(space, e, max_hops);
    if (type == "endpoints") return endpoints_in(space, e, max_hops);
    throw ValidationError("family.type", "unknown family type '" + type + "'");
}

Plan parse_plan(const MetricMeasureSpace& space, const Json& j) {
    const Json& support = as_array(member(j, "support", "plan"), "plan.support");
    std::vector<PlanAtom> atoms;
    for (std::size_t i = 0; i < support.size(); ++i) {
        const std::string field = "plan.support[" + std::to_string(i) + "]";
        atoms.push_back({parse_curve(space, member(support[i], "curve", field), field + ".curve"),
                         as_double(member(support[i], "w", field), field + ".w")});
    }
    try {
        return Plan(std::move(atoms));
    } catch (const ValidationError& e) {
        throw ValidationError("plan." + e.field(), e.what());
    }
}

VertexFunction parse_function(const MetricMeasureSpace& space, const Json& j, const std::string& field) {
    const Json& values = member(j, "values", field);
    if (!values.is_object()) throw ValidationError(field + ".values", "expected an object keyed by vertex id");
    VertexFunction f(space.size(), 0.0);
    std::vector<bool> seen(space.size(), false);
    for (const auto& [id, value] : values.items()) {
        if (!space.has_vertex(id)) throw ValidationError(field + ".values." + id, "unknown vertex id");
        Vertex v = space.index_of(id);
        f[v] = as_double(value, field + ".values." + id);
        seen[v] = true;
    }
    for (Vertex v = 0; v < space.size(); ++v)
        if (!seen[v]) throw ValidationError(field + ".values." + space.id(v), "missing value");
    return f;
}

VertexSet parse_vertex_set(const MetricMeasureSpace& space, const Json& j, const std::string& field) {
    const Json& ids = as_array(j, field);
    std::vector<Vertex> vertices;
    for (std::size_t i = 0; i < ids.size(); ++i)
        vertices.push_back(vertex_of(space, ids[i], field + "[" + std::to_string(i) + "]"));
    return VertexSet(std::move(vertices));
}

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

Json by_id(const MetricMeasureSpace& space, std::span<const double> values) {
    Json out = Json::object();
    for (Vertex v = 0; v < space.size(); ++v) out[space.id(v)] = number(values[v]);
    return out;
}

Json curve_json(const MetricMeasureSpace& space, const DiscreteCurve& curve) {
    Json ids = Json::array();
    for (Vertex v : curve.vertices()) ids.push_back(space.id(v));
    return {{"times", curve.times()}, {"vertices", ids}};
}

}  // namespace modcalc::io
