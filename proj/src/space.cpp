#include "modcalc/space.hpp"

#include "modcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <utility>

namespace modcalc {

VertexSet::VertexSet(std::initializer_list<Vertex> vertices) : VertexSet(std::vector<Vertex>(vertices)) {}

VertexSet::VertexSet(std::vector<Vertex> vertices) : items_(std::move(vertices)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool VertexSet::contains(Vertex v) const {
    return std::binary_search(items_.begin(), items_.end(), v);
}

VertexSet VertexSet::united(const VertexSet& other) const {
    std::vector<Vertex> out;
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(out));
    return VertexSet(std::move(out));
}

VertexSet VertexSet::intersected(const VertexSet& other) const {
    std::vector<Vertex> out;
    std::set_intersection(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                          std::back_inserter(out));
    return VertexSet(std::move(out));
}

bool VertexSet::is_subset_of(const VertexSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

namespace {

std::vector<double> single_source(const std::vector<std::vector<Neighbor>>& adjacency, Vertex source) {
    std::vector<double> dist(adjacency.size(), kInfinity);
    using Entry = std::pair<double, Vertex>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, len] : adjacency[u]) {
            double candidate = d + len;
            if (candidate < dist[v]) {
                dist[v] = candidate;
                queue.emplace(candidate, v);
            }
        }
    }
    return dist;
}

}  // namespace

MetricMeasureSpace MetricMeasureSpace::build(const SpaceSpec& spec) {
    MetricMeasureSpace space;
    space.spec_ = spec;
    const std::size_t n = spec.vertices.size();
    space.ids_.reserve(n);
    space.masses_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& vs = spec.vertices[i];
        const std::string field = "vertices[" + std::to_string(i) + "]";
        if (!space.index_.emplace(vs.id, i).second)
            throw ValidationError(field + ".id", "duplicate vertex id '" + vs.id + "'");
        if (!std::isfinite(vs.mass) || vs.mass <= 0.0)
            throw ValidationError(field + ".m", "vertex measure must be positive and finite");
        space.ids_.push_back(vs.id);
        space.masses_.push_back(vs.mass);
    }

    space.adjacency_.assign(n, {});
    std::set<std::pair<Vertex, Vertex>> seen;
    for (std::size_t i = 0; i < spec.edges.size(); ++i) {
        const auto& es = spec.edges[i];
        const std::string field = "edges[" + std::to_string(i) + "]";
        auto u = space.index_.find(es.u);
        if (u == space.index_.end()) throw ValidationError(field + ".u", "unknown vertex id '" + es.u + "'");
        auto v = space.index_.find(es.v);
        if (v == space.index_.end()) throw ValidationError(field + ".v", "unknown vertex id '" + es.v + "'");
        if (u->second == v->second) throw ValidationError(field, "self-loops are not allowed");
        if (!std::isfinite(es.length) || es.length <= 0.0)
            throw ValidationError(field + ".len", "edge length must be positive and finite");
        auto key = std::minmax(u->second, v->second);
        if (!seen.insert(key).second) throw ValidationError(field, "duplicate edge " + es.u + "-" + es.v);
        space.adjacency_[u->second].push_back({v->second, es.length});
        space.adjacency_[v->second].push_back({u->second, es.length});
    }
    for (auto& row : space.adjacency_)
        std::sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    space.edge_count_ = seen.size();

    space.distances_.resize(n * n);
    for (Vertex s = 0; s < n; ++s) {
        auto row = single_source(space.adjacency_, s);
        std::copy(row.begin(), row.end(), space.distances_.begin() + static_cast<std::ptrdiff_t>(s * n));
    }
    // Dijkstra sums in different orders; force exact symmetry.
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) {
            double d = std::min(space.distances_[u * n + v], space.distances_[v * n + u]);
            space.distances_[u * n + v] = d;
            space.distances_[v * n + u] = d;
        }
    return space;
}

void MetricMeasureSpace::check_vertex(Vertex v) const {
    if (v >= size()) throw ValidationError("vertex", "unknown vertex index " + std::to_string(v));
}

Vertex MetricMeasureSpace::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw ValidationError("vertex", "unknown vertex id '" + std::string(id) + "'");
    return it->second;
}

bool MetricMeasureSpace::has_vertex(std::string_view id) const {
    return index_.contains(std::string(id));
}

double MetricMeasureSpace::measure(const VertexSet& set) const {
    double total = 0.0;
    for (Vertex v : set) total += mass(v);
    return total;
}

double MetricMeasureSpace::distance(Vertex u, Vertex v) const {
    check_vertex(u);
    check_vertex(v);
    return distances_[u * size() + v];
}

bool MetricMeasureSpace::adjacent(Vertex u, Vertex v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& row = adjacency_[u];
    return std::binary_search(row.begin(), row.end(), Neighbor{v, 0.0},
                              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
}

VertexSet MetricMeasureSpace::ball(Vertex center, double radius, BallKind kind) const {
    check_vertex(center);
    if (!(radius >= 0.0)) throw ValidationError("r", "ball radius must be nonnegative");
    std::vector<Vertex> out;
    for (Vertex v = 0; v < size(); ++v) {
        double d = distances_[center * size() + v];
        if (kind == BallKind::Open ? d < radius : d <= radius) out.push_back(v);
    }
    return VertexSet(std::move(out));
}

VertexSet MetricMeasureSpace::all() const {
    std::vector<Vertex> out(size());
    for (Vertex v = 0; v < size(); ++v) out[v] = v;
    return VertexSet(std::move(out));
}

double MetricMeasureSpace::diameter() const {
    double best = 0.0;
    for (double d : distances_)
        if (std::isfinite(d)) best = std::max(best, d);
    return best;
}

double MetricMeasureSpace::neighbor_mesh() const {
    const std::size_t n = size();
    double nearest_non_adjacent = kInfinity;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (!adjacent(u, v)) nearest_non_adjacent = std::min(nearest_non_adjacent, distances_[u * n + v]);
    double mesh = 0.0;
    for (Vertex u = 0; u < n; ++u)
        for (const auto& nb : adjacency_[u]) {
            double d = distances_[u * n + nb.vertex];
            if (d < nearest_non_adjacent) mesh = std::max(mesh, d);
        }
    return mesh;
}

SpaceSpec path_spec(std::size_t n, double length, double mass) {
    SpaceSpec spec;
    for (std::size_t i = 0; i < n; ++i) spec.vertices.push_back({std::to_string(i), mass});
    for (std::size_t i = 0; i + 1 < n; ++i) spec.edges.push_back({std::to_string(i), std::to_string(i + 1), length});
    return spec;
}

SpaceSpec cycle_spec(std::size_t n, double length, double mass) {
    SpaceSpec spec = path_spec(n, length, mass);
    if (n >= 3) spec.edges.push_back({std::to_string(n - 1), "0", length});
    return spec;
}

SpaceSpec grid_spec(std::size_t rows, std::size_t cols, double length, double mass) {
    SpaceSpec spec;
    auto id = [cols](std::size_t r, std::size_t c) { return std::to_string(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) spec.vertices.push_back({id(r, c), mass});
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) spec.edges.push_back({id(r, c), id(r, c + 1), length});
            if (r + 1 < rows) spec.edges.push_back({id(r, c), id(r + 1, c), length});
        }
    return spec;
}

}  // namespace modcalc
