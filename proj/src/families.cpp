#include "modcalc/families.hpp"

#include "modcalc/errors.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace modcalc {

bool CurveFamily::contains_constant_curve() const {
    return std::any_of(curves_.begin(), curves_.end(), [](const DiscreteCurve& c) { return c.is_constant(); });
}

CurveFamily CurveFamily::normalized() const {
    std::vector<const DiscreteCurve*> order;
    order.reserve(curves_.size());
    for (const auto& c : curves_) order.push_back(&c);
    std::stable_sort(order.begin(), order.end(),
                     [](const DiscreteCurve* a, const DiscreteCurve* b) { return a->vertices() < b->vertices(); });
    std::vector<DiscreteCurve> out;
    for (const DiscreteCurve* c : order)
        if (out.empty() || out.back().vertices() != c->vertices()) out.push_back(*c);
    return CurveFamily(std::move(out), label_);
}

CurveFamily CurveFamily::united(const CurveFamily& other) const {
    std::vector<DiscreteCurve> all = curves_;
    all.insert(all.end(), other.curves_.begin(), other.curves_.end());
    return CurveFamily(std::move(all), label_ + "+" + other.label_).normalized();
}

bool CurveFamily::is_subfamily_of(const CurveFamily& other) const {
    std::set<std::vector<Vertex>> theirs;
    for (const auto& c : other) theirs.insert(c.vertices());
    return std::all_of(curves_.begin(), curves_.end(),
                       [&](const DiscreteCurve& c) { return theirs.contains(c.vertices()); });
}

namespace {

/// Depth-first enumeration of walks starting in `starts`; `accept` decides
/// whether the current walk is emitted. Emission order is lexicographic.
void enumerate(const MetricMeasureSpace& space, const VertexSet& starts, std::size_t max_hops, bool simple_only,
               const std::function<bool(const std::vector<Vertex>&)>& accept, std::vector<DiscreteCurve>& out) {
    std::vector<Vertex> walk;
    std::vector<char> on_walk(space.size(), 0);
    std::function<void()> extend = [&]() {
        if (accept(walk)) {
            if (out.size() >= kMaxFamilySize)
                throw ValidationError("max_hops", "curve family exceeds the enumeration limit");
            out.push_back(DiscreteCurve::through(space, walk));
        }
        if (walk.size() - 1 == max_hops) return;
        for (const auto& nb : space.neighbors(walk.back())) {
            if (simple_only && on_walk[nb.vertex]) continue;
            walk.push_back(nb.vertex);
            ++on_walk[nb.vertex];
            extend();
            --on_walk[nb.vertex];
            walk.pop_back();
        }
    };
    for (Vertex s : starts) {
        walk.assign(1, s);
        on_walk[s] = 1;
        extend();
        on_walk[s] = 0;
    }
}

void check_set(const MetricMeasureSpace& space, const VertexSet& set, const char* field) {
    for (Vertex v : set)
        if (v >= space.size()) throw ValidationError(field, "unknown vertex index " + std::to_string(v));
}

}  // namespace

CurveFamily connecting_family(const MetricMeasureSpace& space, const VertexSet& from, const VertexSet& to,
                              std::size_t max_hops, bool simple_only) {
    check_set(space, from, "E");
    check_set(space, to, "F");
    if (max_hops < 1) throw ValidationError("max_hops", "max_hops must be at least 1");
    std::vector<DiscreteCurve> out;
    enumerate(space, from, max_hops, simple_only,
              [&](const std::vector<Vertex>& w) { return w.size() > 1 && to.contains(w.back()); }, out);
    return CurveFamily(std::move(out), "connecting").normalized();
}

CurveFamily family_through(const MetricMeasureSpace& space, const VertexSet& set, std::size_t max_hops) {
    check_set(space, set, "E");
    if (max_hops < 1) throw ValidationError("max_hops", "max_hops must be at least 1");
    std::vector<DiscreteCurve> out;
    if (set.empty()) return CurveFamily(std::move(out), "through");
    enumerate(space, space.all(), max_hops, true,
              [&](const std::vector<Vertex>& w) {
                  return w.size() > 1 &&
                         std::any_of(w.begin(), w.end(), [&](Vertex v) { return set.contains(v); });
              },
              out);
    return CurveFamily(std::move(out), "through").normalized();
}

CurveFamily endpoints_in(const MetricMeasureSpace& space, const VertexSet& set, std::size_t max_hops) {
    check_set(space, set, "E");
    std::vector<DiscreteCurve> out;
    enumerate(space, set, max_hops, false, [&](const std::vector<Vertex>& w) { return set.contains(w.back()); },
              out);
    return CurveFamily(std::move(out), "endpoints").normalized();
}

CurveFamily all_walks(const MetricMeasureSpace& space, std::size_t max_hops, bool simple_only) {
    if (max_hops < 1) throw ValidationError("max_hops", "max_hops must be at least 1");
    std::vector<DiscreteCurve> out;
    enumerate(space, space.all(), max_hops, simple_only, [](const std::vector<Vertex>& w) { return w.size() > 1; },
              out);
    return CurveFamily(std::move(out), simple_only ? "simple" : "walks").normalized();
}

}  // namespace modcalc
