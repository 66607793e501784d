#include "crofton/kinematic.hpp"

#include <algorithm>
#include <limits>

#include "crofton/errors.hpp"
#include "crofton/rng.hpp"

namespace crofton {

namespace {

constexpr double kEndpointEps = 1e-12;
constexpr std::uint32_t kMaxRejections = 1'000'000;

// Whether a point at `angle` on the arc lies in its half-open angular range.
bool on_arc(const Arc& arc, double angle) {
    const double span = std::abs(arc.sweep);
    const double u = arc.sweep >= 0.0 ? normalize_angle(angle - arc.start) : normalize_angle(arc.start - angle);
    const double tol = kEndpointEps / arc.radius;
    if (span >= kTwoPi) return true;
    if (u <= tol || u >= kTwoPi - tol) return true;  // at the start
    if (std::abs(u - span) <= tol) return false;     // at the end
    return u < span;
}

}  // namespace

bool line_hits_domain(const LineCoords& line, const ConvexDomain& domain) {
    const double hi = support_function(domain, line.phi);
    const double lo = -support_function(domain, line.phi + std::numbers::pi);
    return lo <= line.p && line.p <= hi;
}

HittingLineSpace::HittingLineSpace(ConvexDomain domain, std::uint64_t seed)
    : domain_(std::move(domain)),
      seed_(seed),
      perimeter_(domain_perimeter(domain_)),
      box_radius_(max_radius(domain_)) {}

SampledLine sample_hitting_line_traced(const HittingLineSpace& space, std::uint64_t index) {
    SampleStream rng(space.seed(), index);
    const double r = space.box_radius();
    for (std::uint32_t attempt = 1; attempt <= kMaxRejections; ++attempt) {
        const double phi = rng.uniform() * kTwoPi;
        const double p = rng.uniform(-r, r);
        const LineCoords line = LineCoords::make(phi, p);
        if (line_hits_domain(line, space.domain())) return {line, attempt};
    }
    throw InternalError("rejection sampling of hitting lines exceeded the iteration cap");
}

int line_curve_intersections(const LineCoords& line, const CurvePiece& piece, Degeneracies* degenerate) {
    if (piece.is_segment()) {
        const auto& seg = piece.as_segment();
        const double da = line.offset(seg.a);
        const double db = line.offset(seg.b);
        const bool a_on = std::abs(da) <= kEndpointEps;
        const bool b_on = std::abs(db) <= kEndpointEps;
        if (a_on && b_on) {
            if (degenerate) ++degenerate->count;
            return 0;
        }
        if (a_on) return 1;
        if (b_on) return 0;
        return (da > 0.0) != (db > 0.0) ? 1 : 0;
    }
    const auto& arc = piece.as_arc();
    const Vec2 n = line.normal();
    const double dc = line.offset(arc.center);
    const double gap = std::abs(dc) - arc.radius;
    if (gap > kEndpointEps) return 0;
    if (std::abs(gap) <= kEndpointEps) {
        if (degenerate) ++degenerate->count;
        return 0;
    }
    const double half = std::sqrt(arc.radius * arc.radius - dc * dc);
    const Vec2 foot = arc.center - n * dc;
    const Vec2 t = perp(n);
    int hits = 0;
    for (const double sign : {-1.0, 1.0}) {
        const Vec2 q = foot + t * (sign * half) - arc.center;
        if (on_arc(arc, std::atan2(q.y, q.x))) ++hits;
    }
    return hits;
}

int count_intersections(const LineCoords& line, const RectSet& set, Degeneracies* degenerate) {
    int total = 0;
    for (const auto& piece : set.pieces()) total += piece.multiplicity() * line_curve_intersections(line, piece, degenerate);
    return total;
}

std::optional<Segment> clip_line(const LineCoords& line, const ConvexDomain& domain) {
    const Vec2 n = line.normal();
    const Vec2 t = perp(n);
    const Vec2 base = n * line.p;
    return std::visit(
        [&](const auto& d) -> std::optional<Segment> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Disk>) {
                const double dc = line.offset(d.center);
                if (std::abs(dc) > d.radius) return std::nullopt;
                const double half = std::sqrt(d.radius * d.radius - dc * dc);
                const Vec2 foot = d.center - n * dc;
                return Segment{foot - t * half, foot + t * half};
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                double lo = -std::numeric_limits<double>::infinity();
                double hi = std::numeric_limits<double>::infinity();
                const auto& v = d.vertices;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const Vec2 a = v[i];
                    const Vec2 e = v[(i + 1) % v.size()] - a;
                    // Inside when cross(e, x - a) >= 0 with x = base + s t.
                    const double c0 = cross(e, base - a);
                    const double c1 = cross(e, t);
                    if (c1 == 0.0) {
                        if (c0 < 0.0) return std::nullopt;
                    } else if (c1 > 0.0) {
                        lo = std::max(lo, -c0 / c1);
                    } else {
                        hi = std::min(hi, -c0 / c1);
                    }
                }
                if (lo > hi) return std::nullopt;
                return Segment{base + t * lo, base + t * hi};
            } else {
                // Map to the unit circle: local = R^T (x - c), scaled by the axes.
                const double cr = std::cos(d.rotation), sr = std::sin(d.rotation);
                auto to_unit = [&](Vec2 x) {
                    const Vec2 r = x - d.center;
                    return Vec2{(cr * r.x + sr * r.y) / d.semi_major, (-sr * r.x + cr * r.y) / d.semi_minor};
                };
                const Vec2 q0 = to_unit(base);
                const Vec2 q1 = to_unit(base + t) - q0;
                const double a = dot(q1, q1);
                const double b = 2.0 * dot(q0, q1);
                const double c = dot(q0, q0) - 1.0;
                const double disc = b * b - 4.0 * a * c;
                if (disc < 0.0) return std::nullopt;
                const double sq = std::sqrt(disc);
                return Segment{base + t * ((-b - sq) / (2.0 * a)), base + t * ((-b + sq) / (2.0 * a))};
            }
        },
        domain.shape());
}

}  // namespace crofton
