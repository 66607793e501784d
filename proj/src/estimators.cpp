#include "crofton/estimators.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "crofton/errors.hpp"
#include "crofton/kinematic.hpp"
#include "crofton/parallel.hpp"

namespace crofton {

namespace {

// Integer power sums are exact, so merging chunks in any order gives the same
// report.
struct CountSums {
    unsigned __int128 s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    std::uint64_t degenerate = 0;
    std::uint64_t attempts = 0;

    void add(std::uint64_t n) {
        const unsigned __int128 v = n;
        s1 += v;
        s2 += v * v;
        s3 += v * v * v;
        s4 += v * v * v * v;
    }
    void merge(const CountSums& o) {
        s1 += o.s1;
        s2 += o.s2;
        s3 += o.s3;
        s4 += o.s4;
        degenerate += o.degenerate;
        attempts += o.attempts;
    }
};

std::string describe_offenders(const std::vector<std::size_t>& bad) {
    std::string msg = "set is not contained in the closed domain; offending pieces:";
    for (auto i : bad) msg += " " + std::to_string(i);
    return msg;
}

}  // namespace

bool Residual::within(double sigmas) const {
    return std::abs(value) <= sigmas * std_err + 1e-12 * (1.0 + std::abs(scale));
}

MomentReport estimate_moments(const RectSet& set, const ConvexDomain& domain, std::uint64_t samples,
                              std::uint64_t seed) {
    if (samples < 1) throw ParameterDomainError("sample count must be at least 1");
    if (auto bad = pieces_outside(set, domain); !bad.empty()) {
        throw ContainmentError(describe_offenders(bad), std::move(bad));
    }
    const HittingLineSpace space(domain, seed);
    const std::uint64_t chunks = (samples + kMomentChunk - 1) / kMomentChunk;
    std::vector<CountSums> partial(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        CountSums sums;
        Degeneracies degenerate;
        const std::uint64_t begin = c * kMomentChunk;
        const std::uint64_t end = std::min(samples, begin + kMomentChunk);
        for (std::uint64_t i = begin; i < end; ++i) {
            const auto sampled = sample_hitting_line_traced(space, i);
            sums.attempts += sampled.attempts;
            sums.add(static_cast<std::uint64_t>(count_intersections(sampled.line, set, &degenerate)));
        }
        sums.degenerate = degenerate.count;
        partial[c] = sums;
    });
    CountSums total;
    for (const auto& p : partial) total.merge(p);

    const auto n = static_cast<long double>(samples);
    const long double e1 = static_cast<long double>(total.s1) / n;
    const long double e2 = static_cast<long double>(total.s2) / n;
    const long double e3 = static_cast<long double>(total.s3) / n;
    const long double e4 = static_cast<long double>(total.s4) / n;

    MomentReport r;
    r.sample_count = samples;
    r.perimeter = space.perimeter();
    r.total_length = set.total_length();
    r.mean_count = static_cast<double>(e1);
    r.second_moment = static_cast<double>(e2);
    r.variance = r.second_moment - r.mean_count * r.mean_count;
    r.crofton_length = 0.5 * r.perimeter * r.mean_count;
    r.quarter_second_moment_mu = 0.5 * r.perimeter * r.second_moment;
    r.degenerate_events = total.degenerate;
    r.rejection_attempts = total.attempts;
    if (samples > 1) {
        const long double bessel = n / (n - 1.0L);
        const long double var1 = std::max(0.0L, e2 - e1 * e1) * bessel;
        const long double var2 = std::max(0.0L, e4 - e2 * e2) * bessel;
        const long double mu2 = e2 - e1 * e1;
        const long double mu4 = e4 - 4.0L * e1 * e3 + 6.0L * e1 * e1 * e2 - 3.0L * e1 * e1 * e1 * e1;
        r.std_err_mean = static_cast<double>(std::sqrt(var1 / n));
        r.std_err_second = static_cast<double>(std::sqrt(var2 / n));
        r.std_err_variance = static_cast<double>(std::sqrt(std::max(0.0L, mu4 - mu2 * mu2) * bessel / n));
    }
    return r;
}

Residual variance_identity_check(const MomentReport& report, double length, double perimeter) {
    const double mu_total = 2.0 * perimeter;
    const double m = 2.0 * length / perimeter;
    // int 1_hit (n - m)^2 dmu, expanded in the sampled moments.
    const double centered = mu_total * (report.second_moment - 2.0 * m * report.mean_count + m * m);
    const double simplified = mu_total * report.second_moment - 8.0 * length * length / perimeter;
    Residual r;
    r.value = centered - simplified;
    // centered - simplified = 4 P m (m - E n): only the mean carries noise.
    r.std_err = 4.0 * perimeter * m * report.std_err_mean;
    r.scale = std::max(std::abs(centered), std::abs(simplified));
    return r;
}

CopiesPlusSegment closed_form_copies_plus_segment(const ConvexDomain& domain, int copies, double segment_length) {
    if (copies < 0) throw ParameterDomainError("number of boundary copies must be nonnegative");
    const double diam = domain_diameter(domain);
    if (!(segment_length >= 0.0) || segment_length > diam * (1.0 + 1e-12)) {
        throw ParameterDomainError("segment length " + std::to_string(segment_length) + " outside [0, diameter=" +
                                   std::to_string(diam) + "]");
    }
    const double perimeter = domain_perimeter(domain);
    const double k = copies;
    const double seg = segment_length;
    const double length = k * perimeter + seg;
    CopiesPlusSegment out;
    out.value = 2.0 * k * k * perimeter + (4.0 * k + 1.0) * seg;
    out.alternate = 2.0 * length * length / perimeter + seg * (1.0 - 2.0 * seg / perimeter);
    if (std::abs(out.value - out.alternate) > 1e-10 * std::max(1.0, std::abs(out.value))) {
        throw InternalError("closed forms for copies plus segment disagree");
    }
    return out;
}

}  // namespace crofton
