#pragma once

// Monte Carlo moments of the intersection count n_l under the normalized
// hitting-line measure nu, and the closed forms they are checked against.

#include <cstdint>

#include "crofton/geometry.hpp"

namespace crofton {

struct MomentReport {
    std::uint64_t sample_count = 0;
    double mean_count = 0.0;     ///< E_nu[n], tends to 2L / perimeter
    double second_moment = 0.0;  ///< E_nu[n^2]
    double variance = 0.0;       ///< second_moment - mean_count^2
    double crofton_length = 0.0;            ///< (perimeter / 2) * mean_count
    double quarter_second_moment_mu = 0.0;  ///< (perimeter / 2) * second_moment = (1/4) int n^2 dmu
    double std_err_mean = 0.0;
    double std_err_second = 0.0;
    double std_err_variance = 0.0;
    std::uint64_t degenerate_events = 0;
    std::uint64_t rejection_attempts = 0;  ///< total rejection rounds over all samples
    double perimeter = 0.0;
    double total_length = 0.0;

    /// Standard error of quarter_second_moment_mu.
    double std_err_quarter_second() const { return 0.5 * perimeter * std_err_second; }
    double std_err_crofton_length() const { return 0.5 * perimeter * std_err_mean; }
};

/// Samples per parallel work item; part of the reproducibility contract.
inline constexpr std::uint64_t kMomentChunk = 1u << 16;

/// Streams N hitting lines drawn with `seed` and accumulates the count moments.
/// The result depends only on (set, domain, N, seed). Throws ContainmentError
/// listing the pieces that leave the closed domain, ParameterDomainError for N < 1.
MomentReport estimate_moments(const RectSet& set, const ConvexDomain& domain, std::uint64_t samples,
                              std::uint64_t seed);

struct Residual {
    double value = 0.0;
    double std_err = 0.0;
    double scale = 0.0;  ///< magnitude of the compared terms, for the rounding floor
    /// |value| <= sigmas * std_err + 1e-12 * (1 + scale).
    bool within(double sigmas = 3.0) const;
};

/// Difference between the centered form int 1_hit (n - 2L/P)^2 dmu and the
/// simplified form int n^2 dmu - 8 L^2 / P, both estimated from the report.
/// The two agree up to the sampling error of the mean count.
Residual variance_identity_check(const MomentReport& report, double length, double perimeter);

struct CopiesPlusSegment {
    double value = 0.0;      ///< 2 k^2 P + (4k + 1) |K|
    double alternate = 0.0;  ///< 2 L^2 / P + |K| (1 - 2|K| / P)
};

/// (1/4) int n^2 dmu for k copies of the boundary plus a chord of length
/// `segment_length`. Throws ParameterDomainError unless 0 <= segment_length <= diameter.
CopiesPlusSegment closed_form_copies_plus_segment(const ConvexDomain& domain, int copies, double segment_length);

}  // namespace crofton
