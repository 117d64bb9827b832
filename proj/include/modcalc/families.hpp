#pragma once

#include "modcalc/curve.hpp"
#include "modcalc/space.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace modcalc {

/// Finite, explicitly enumerated list of curves used as a constraint set.
class CurveFamily {
public:
    CurveFamily() = default;
    explicit CurveFamily(std::vector<DiscreteCurve> curves, std::string label = "explicit")
        : curves_(std::move(curves)), label_(std::move(label)) {}

    std::size_t size() const noexcept { return curves_.size(); }
    bool empty() const noexcept { return curves_.empty(); }
    const DiscreteCurve& operator[](std::size_t i) const { return curves_.at(i); }
    auto begin() const noexcept { return curves_.begin(); }
    auto end() const noexcept { return curves_.end(); }
    const std::vector<DiscreteCurve>& curves() const noexcept { return curves_; }
    const std::string& label() const noexcept { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    void push_back(DiscreteCurve curve) { curves_.push_back(std::move(curve)); }
    bool contains_constant_curve() const;

    /// Removes repeated vertex sequences and sorts lexicographically by vertex sequence.
    CurveFamily normalized() const;

    /// Union as sets of vertex sequences.
    CurveFamily united(const CurveFamily& other) const;

    /// True when every vertex sequence of this family appears in `other`.
    bool is_subfamily_of(const CurveFamily& other) const;

private:
    std::vector<DiscreteCurve> curves_;
    std::string label_ = "explicit";
};

/// Enumeration refuses to build families larger than this.
inline constexpr std::size_t kMaxFamilySize = 2'000'000;

/// Walks (or simple paths) with 1..max_hops hops from E to F.
CurveFamily connecting_family(const MetricMeasureSpace& space, const VertexSet& from, const VertexSet& to,
                              std::size_t max_hops, bool simple_only);

/// Non-constant simple paths with at most max_hops hops meeting E.
CurveFamily family_through(const MetricMeasureSpace& space, const VertexSet& set, std::size_t max_hops);

/// Walks with both endpoints in E and at most max_hops hops, including the
/// constant curves at the vertices of E.
CurveFamily endpoints_in(const MetricMeasureSpace& space, const VertexSet& set, std::size_t max_hops);

/// Every non-constant walk (or simple path) with at most max_hops hops.
CurveFamily all_walks(const MetricMeasureSpace& space, std::size_t max_hops, bool simple_only);

}  // namespace modcalc
