#pragma once

// Kinematic line measure.
//
// A line is {x : x . (cos phi, sin phi) = p} with phi in [0, 2*pi) and p real.
// Every geometric line appears twice, as (phi, p) and (phi + pi, -p); the
// measure dphi dp over this double cover makes (1/4) * integral of n dmu equal
// to length, and gives the lines meeting a convex domain total measure
// 2 * perimeter.

#include <cstdint>

#include "crofton/geometry.hpp"

namespace crofton {

struct LineCoords {
    double phi = 0.0;
    double p = 0.0;

    /// Normalizes phi to [0, 2*pi).
    static LineCoords make(double phi, double p) { return {normalize_angle(phi), p}; }
    /// The other coordinate representation of the same line.
    LineCoords flipped() const { return make(phi + std::numbers::pi, -p); }
    Vec2 normal() const { return unit_direction(phi); }
    /// Signed distance of a point from the line along the normal.
    double offset(Vec2 x) const { return dot(x, normal()) - p; }
};

/// Counter of measure-zero events (tangencies, lines containing a segment).
struct Degeneracies {
    std::uint64_t count = 0;
};

bool line_hits_domain(const LineCoords& line, const ConvexDomain& domain);

/// The probability space of lines meeting a convex domain, with the kinematic
/// measure restricted and normalized.
class HittingLineSpace {
public:
    HittingLineSpace(ConvexDomain domain, std::uint64_t seed);

    const ConvexDomain& domain() const noexcept { return domain_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double perimeter() const noexcept { return perimeter_; }
    /// Kinematic measure of the hitting lines: 2 * perimeter.
    double total_measure() const noexcept { return 2.0 * perimeter_; }
    /// Half-width R of the rejection box [0, 2*pi) x [-R, R].
    double box_radius() const noexcept { return box_radius_; }
    double box_measure() const noexcept { return kTwoPi * 2.0 * box_radius_; }

private:
    ConvexDomain domain_;
    std::uint64_t seed_;
    double perimeter_;
    double box_radius_;
};

struct SampledLine {
    LineCoords line;
    std::uint32_t attempts = 0;  ///< rejection rounds used, >= 1
};

/// Line uniformly distributed over the hitting region in (phi, p); a pure
/// function of (space seed, index). Throws InternalError after 10^6 rejections.
SampledLine sample_hitting_line_traced(const HittingLineSpace& space, std::uint64_t index);

inline LineCoords sample_hitting_line(const HittingLineSpace& space, std::uint64_t index) {
    return sample_hitting_line_traced(space, index).line;
}

/// Transversal intersections of a line with one copy of a piece: 0 or 1 for a
/// segment, 0..2 for an arc. Points within 1e-12 of an endpoint follow a
/// half-open convention (start counted, end not). A line containing a segment
/// or tangent to an arc counts 0 and bumps `degenerate` when given.
int line_curve_intersections(const LineCoords& line, const CurvePiece& piece, Degeneracies* degenerate = nullptr);

/// Sum over pieces of multiplicity times intersections.
int count_intersections(const LineCoords& line, const RectSet& set, Degeneracies* degenerate = nullptr);

/// Chord of the domain cut by the line, or nothing when the line misses it.
std::optional<Segment> clip_line(const LineCoords& line, const ConvexDomain& domain);

}  // namespace crofton
