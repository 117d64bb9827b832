#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace modcalc {

using Vertex = std::size_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Sorted, duplicate-free set of vertex indices.
class VertexSet {
public:
    VertexSet() = default;
    VertexSet(std::initializer_list<Vertex> vertices);
    explicit VertexSet(std::vector<Vertex> vertices);

    bool contains(Vertex v) const;
    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }
    const std::vector<Vertex>& items() const noexcept { return items_; }

    VertexSet united(const VertexSet& other) const;
    VertexSet intersected(const VertexSet& other) const;
    bool is_subset_of(const VertexSet& other) const;

    friend bool operator==(const VertexSet&, const VertexSet&) = default;

private:
    std::vector<Vertex> items_;
};

struct VertexSpec {
    std::string id;
    double mass = 1.0;
};

struct EdgeSpec {
    std::string u;
    std::string v;
    double length = 1.0;
};

struct SpaceSpec {
    std::vector<VertexSpec> vertices;
    std::vector<EdgeSpec> edges;
};

struct Neighbor {
    Vertex vertex;
    double length;
};

enum class BallKind { Open, Closed };

/// Finite graph with positive edge lengths and positive vertex masses,
/// metrized by shortest paths. Distances between different connected
/// components are +inf. Immutable once built.
class MetricMeasureSpace {
public:
    static MetricMeasureSpace build(const SpaceSpec& spec);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::string& id(Vertex v) const { return ids_.at(v); }
    Vertex index_of(std::string_view id) const;
    bool has_vertex(std::string_view id) const;

    double mass(Vertex v) const { return masses_.at(v); }
    std::span<const double> masses() const noexcept { return masses_; }
    double measure(const VertexSet& set) const;

    double distance(Vertex u, Vertex v) const;
    std::span<const Neighbor> neighbors(Vertex v) const { return adjacency_.at(v); }
    bool adjacent(Vertex u, Vertex v) const;
    std::size_t edge_count() const noexcept { return edge_count_; }

    VertexSet ball(Vertex center, double radius, BallKind kind = BallKind::Open) const;
    VertexSet all() const;

    /// Largest finite pairwise distance.
    double diameter() const;

    /// Largest delta for which every pair at distance <= delta is a graph edge.
    /// Discrete paths with mesh at most this value are exactly graph walks.
    double neighbor_mesh() const;

    const SpaceSpec& spec() const noexcept { return spec_; }

private:
    MetricMeasureSpace() = default;

    void check_vertex(Vertex v) const;

    SpaceSpec spec_;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, Vertex> index_;
    std::vector<double> masses_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<double> distances_;  // row-major n x n
    std::size_t edge_count_ = 0;
};

/// Convenience builders used by tests, the CLI self-test, and benchmarks.
/// Vertex ids are decimal indices ("0", "1", ...); grids are row-major.
SpaceSpec path_spec(std::size_t n, double length = 1.0, double mass = 1.0);
SpaceSpec cycle_spec(std::size_t n, double length = 1.0, double mass = 1.0);
SpaceSpec grid_spec(std::size_t rows, std::size_t cols, double length = 1.0, double mass = 1.0);

}  // namespace modcalc
