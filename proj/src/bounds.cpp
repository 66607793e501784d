#include "crofton/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <string>
#include <vector>

#include "crofton/errors.hpp"
#include "crofton/estimators.hpp"
#include "crofton/kinematic.hpp"
#include "crofton/parallel.hpp"
#include "crofton/rng.hpp"

namespace crofton {

namespace {

// Snaps L / P to an integer when within rounding, so that L = n P exactly
// (computed in floating point) lands in the regime with segment 0.
int copies_below(double length, double perimeter) {
    return static_cast<int>(std::floor(length / perimeter + 1e-12));
}

}  // namespace

double fractional_part(double x) { return x - std::floor(x); }

double lemma1_bound(double mean) {
    if (!(mean >= 0.0)) throw ParameterDomainError("mean must be nonnegative");
    const double f = fractional_part(mean);
    return mean * mean + f - f * f;
}

Lemma1Result lemma1_check(const std::map<int, double>& distribution) {
    if (distribution.empty()) throw ValidationError("distribution is empty");
    double mass = 0.0, mean = 0.0, second = 0.0;
    int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
    for (const auto& [value, prob] : distribution) {
        if (value < 0) throw ValidationError("support must be nonnegative integers");
        if (!(prob >= 0.0)) throw ValidationError("probabilities must be nonnegative");
        if (prob == 0.0) continue;
        mass += prob;
        mean += prob * value;
        second += prob * value * static_cast<double>(value);
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    if (std::abs(mass - 1.0) > 1e-12) throw ValidationError("probabilities must sum to 1");
    Lemma1Result r;
    r.mean = mean;
    r.lhs = second;
    r.rhs = lemma1_bound(mean);
    r.tight = hi - lo <= 1;
    if (r.lhs < r.rhs - 1e-12 * std::max(1.0, r.rhs)) throw InternalError("integer variance bound violated");
    return r;
}

BoundsReport theorem3_bounds(const ConvexDomain& domain, double length) {
    if (!(length >= 0.0)) throw ParameterDomainError("length must be nonnegative");
    BoundsReport r;
    r.length = length;
    r.perimeter = domain_perimeter(domain);
    r.diameter = domain_diameter(domain);
    const double p = r.perimeter;
    r.fractional = fractional_part(2.0 * length / p);
    r.trivial_lower_linear = length;
    r.trivial_lower_quadratic = 2.0 * length * length / p;
    r.thm3_lower = r.trivial_lower_quadratic + 0.5 * p * r.fractional * (1.0 - r.fractional);
    r.thm3_upper = r.trivial_lower_quadratic + 0.25 * p;
    const int n = copies_below(length, p);
    const double seg = std::max(0.0, length - n * p);
    if (seg <= r.diameter * (1.0 + 1e-12)) {
        r.in_theorem_regime = true;
        r.boundary_copies = n;
        r.segment_length = std::min(seg, r.diameter);
        r.extremal_value = closed_form_copies_plus_segment(domain, n, r.segment_length).value;
    }
    return r;
}

RectSet extremal_set(const ConvexDomain& domain, double length) {
    const auto b = theorem3_bounds(domain, length);
    if (!b.in_theorem_regime) {
        const int n = copies_below(length, b.perimeter);
        const double below = n * b.perimeter + b.diameter;
        const double above = (n + 1) * b.perimeter;
        throw RegimeError("length " + std::to_string(length) + " is outside the extremal regime; nearest admissible "
                          "lengths are " + std::to_string(below) + " and " + std::to_string(above),
                          below, above);
    }
    std::vector<CurvePiece> pieces;
    if (b.boundary_copies > 0) {
        const auto boundary = boundary_pieces(domain, b.boundary_copies);
        pieces.assign(boundary.pieces().begin(), boundary.pieces().end());
    }
    if (b.segment_length > 0.0) {
        const auto chord = longest_chord(domain).as_segment();
        const Vec2 mid = (chord.a + chord.b) * 0.5;
        const Vec2 dir = (chord.b - chord.a) / distance(chord.a, chord.b);
        const double half = 0.5 * b.segment_length;
        // Endpoints of the full chord are taken verbatim to stay on the boundary.
        const bool full = b.segment_length >= b.diameter;
        pieces.push_back(full ? CurvePiece::segment(chord.a, chord.b)
                              : CurvePiece::segment(mid - dir * half, mid + dir * half));
    }
    return RectSet(std::move(pieces));
}

ThinnedBoundary alpha_thinned_boundary(const ConvexDomain& domain, double length, int parts, std::uint64_t seed) {
    if (!(length >= 0.0)) throw ParameterDomainError("length must be nonnegative");
    if (parts < 8) throw ParameterDomainError("at least 8 boundary parts are required");
    const double p = domain_perimeter(domain);
    ThinnedBoundary out;
    out.full_copies = copies_below(length, p);
    out.alpha = std::max(0.0, length / p - out.full_copies);
    std::vector<CurvePiece> pieces;
    if (out.full_copies > 0) {
        const auto boundary = boundary_pieces(domain, out.full_copies);
        pieces.assign(boundary.pieces().begin(), boundary.pieces().end());
    }
    if (out.alpha > 0.0) {
        const auto groups = boundary_subdivision(domain, parts);
        for (std::size_t i = 0; i < groups.size(); ++i) {
            SampleStream rng(seed, i);
            if (rng.uniform() < out.alpha) {
                ++out.included_parts;
                pieces.insert(pieces.end(), groups[i].begin(), groups[i].end());
            }
        }
    }
    out.set = RectSet(std::move(pieces));
    out.realized_length = out.set.total_length();
    return out;
}

OpacityReport opacity_check(const RectSet& set, const ConvexDomain& domain, std::uint64_t samples,
                            std::uint64_t seed) {
    if (samples < 1) throw ParameterDomainError("sample count must be at least 1");
    const HittingLineSpace space(domain, seed);
    const std::uint64_t chunks = (samples + kMomentChunk - 1) / kMomentChunk;
    std::vector<std::uint64_t> missed(chunks, 0), degenerate(chunks, 0);
    parallel_for(chunks, [&](std::size_t c) {
        Degeneracies d;
        const std::uint64_t begin = c * kMomentChunk;
        const std::uint64_t end = std::min(samples, begin + kMomentChunk);
        for (std::uint64_t i = begin; i < end; ++i) {
            if (count_intersections(sample_hitting_line(space, i), set, &d) == 0) ++missed[c];
        }
        degenerate[c] = d.count;
    });
    OpacityReport r;
    r.samples = samples;
    for (std::size_t c = 0; c < chunks; ++c) {
        r.missed += missed[c];
        r.degenerate_events += degenerate[c];
    }
    r.coverage = 1.0 - static_cast<double>(r.missed) / static_cast<double>(samples);
    r.length_ratio = set.total_length() / (0.5 * space.perimeter());
    return r;
}

}  // namespace crofton
