#pragma once

// Closed-form bounds on the quadratic Crofton functional, the extremal
// "boundary copies plus chord" construction, randomized thinning of the
// boundary, and an empirical opacity check.

#include <cstdint>
#include <map>
#include <optional>

#include "crofton/geometry.hpp"

namespace crofton {

/// x - floor(x).
double fractional_part(double x);

/// Lower bound on E[X^2] for an integer-valued X >= 0 with E[X] = mean:
/// mean^2 + {mean} - {mean}^2.
double lemma1_bound(double mean);

struct Lemma1Result {
    double lhs = 0.0;    ///< E[X^2]
    double rhs = 0.0;    ///< lemma1_bound(E[X])
    double mean = 0.0;
    bool tight = false;  ///< support within two adjacent integers
};

/// Evaluates both sides on a finite distribution. Throws ValidationError for
/// negative support, negative probabilities or a total mass off 1 by > 1e-12;
/// InternalError if the inequality fails beyond 1e-12.
Lemma1Result lemma1_check(const std::map<int, double>& distribution);

struct BoundsReport {
    double length = 0.0;
    double perimeter = 0.0;
    double diameter = 0.0;
    double fractional = 0.0;               ///< {2L / P}
    double trivial_lower_linear = 0.0;     ///< L
    double trivial_lower_quadratic = 0.0;  ///< 2 L^2 / P
    double thm3_lower = 0.0;               ///< 2L^2/P + (P/2) {2L/P} (1 - {2L/P})
    double thm3_upper = 0.0;               ///< 2L^2/P + P/4
    bool in_theorem_regime = false;        ///< n P <= L <= n P + diameter for some n >= 0
    int boundary_copies = 0;               ///< n when in the regime
    double segment_length = 0.0;           ///< L - n P when in the regime
    std::optional<double> extremal_value;

    /// Lower bound on the nu-variance of the count: {2L/P} - {2L/P}^2.
    double nu_variance_lower() const { return fractional * (1.0 - fractional); }
    /// Upper bound on the nu-variance implied by thm3_upper: 1/2.
    double nu_variance_upper() const { return 0.5; }
};

/// Throws ParameterDomainError for negative L.
BoundsReport theorem3_bounds(const ConvexDomain& domain, double length);

/// n copies of the boundary plus a centered sub-segment of the longest chord
/// with total length L. Throws RegimeError (carrying the nearest admissible
/// lengths) when no n >= 0 has n P <= L <= n P + diameter.
RectSet extremal_set(const ConvexDomain& domain, double length);

struct ThinnedBoundary {
    RectSet set;
    int full_copies = 0;
    double alpha = 0.0;
    int included_parts = 0;
    double realized_length = 0.0;
};

/// floor(L/P) full boundary copies plus each of `parts` equal-length boundary
/// parts included independently with probability {L/P}. The expected length
/// is L; the realized one is reported. Throws ParameterDomainError for L < 0
/// or parts < 8.
ThinnedBoundary alpha_thinned_boundary(const ConvexDomain& domain, double length, int parts, std::uint64_t seed);

struct OpacityReport {
    double coverage = 0.0;      ///< fraction of sampled hitting lines meeting the set
    double length_ratio = 0.0;  ///< L / (P / 2)
    std::uint64_t samples = 0;
    std::uint64_t missed = 0;
    std::uint64_t degenerate_events = 0;
    bool opaque() const { return missed == 0; }
};

OpacityReport opacity_check(const RectSet& set, const ConvexDomain& domain, std::uint64_t samples,
                            std::uint64_t seed);

}  // namespace crofton
