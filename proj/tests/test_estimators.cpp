#include <gtest/gtest.h>

#include <numbers>

#include "crofton/errors.hpp"
#include "crofton/estimators.hpp"

using namespace crofton;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kN = 1000000;

RectSet cross_set() {
    return RectSet({CurvePiece::segment({-1, 0}, {1, 0}), CurvePiece::segment({0, -1}, {0, 1})});
}

// (1/4) int n^2 dmu for the cross in the unit disk, times four.
const double kCrossSecondMu = 16 + 32 * (1 - std::sqrt(2.0) / 2);

}  // namespace

TEST(EstimateMoments, CrossVariance) {
    const auto r = estimate_moments(cross_set(), ConvexDomain::unit_disk(), kN, 42);
    const double analytic = kCrossSecondMu / (4 * kPi) - (4 / kPi) * (4 / kPi);
    EXPECT_NEAR(r.variance, 0.398, 0.01);
    EXPECT_LT(std::abs(r.variance - analytic), 3 * r.std_err_variance);
    EXPECT_LT(std::abs(r.quarter_second_moment_mu - kCrossSecondMu / 4), 3 * r.std_err_quarter_second());
    EXPECT_EQ(r.sample_count, kN);
    EXPECT_EQ(r.total_length, 4.0);
}

TEST(EstimateMoments, DiameterIsBernoulli) {
    const auto r = estimate_moments(RectSet({CurvePiece::segment({-1, 0}, {1, 0})}), ConvexDomain::unit_disk(), kN, 7);
    const double q = 2 / kPi;
    EXPECT_LT(std::abs(r.variance - q * (1 - q)), 3 * r.std_err_variance);
    EXPECT_EQ(r.second_moment, r.mean_count);
}

TEST(EstimateMoments, BoundaryCircleHasZeroVariance) {
    const auto r = estimate_moments(boundary_pieces(ConvexDomain::unit_disk(), 1), ConvexDomain::unit_disk(), 100000, 1);
    EXPECT_LT(r.variance, 1e-4);
    EXPECT_NEAR(r.mean_count, 2.0, 1e-4);
}

TEST(EstimateMoments, DeterministicInSeed) {
    const auto a = estimate_moments(cross_set(), ConvexDomain::unit_disk(), 300000, 9);
    const auto b = estimate_moments(cross_set(), ConvexDomain::unit_disk(), 300000, 9);
    const auto c = estimate_moments(cross_set(), ConvexDomain::unit_disk(), 300000, 10);
    EXPECT_EQ(a.mean_count, b.mean_count);
    EXPECT_EQ(a.second_moment, b.second_moment);
    EXPECT_EQ(a.rejection_attempts, b.rejection_attempts);
    EXPECT_NE(a.second_moment, c.second_moment);
}

TEST(EstimateMoments, CroftonLengthGoldenScenes) {
    const auto disk = ConvexDomain::unit_disk();
    const std::vector<std::pair<RectSet, ConvexDomain>> scenes = {
        {RectSet({CurvePiece::segment({-1, 0}, {1, 0})}), disk},
        {cross_set(), disk},
        {boundary_pieces(disk, 1), disk},
        {boundary_pieces(ConvexDomain::unit_square(), 1), ConvexDomain::unit_square()},
        {boundary_pieces(disk, 1).merged(RectSet({CurvePiece::segment({-1, 0}, {1, 0})})), disk},
    };
    for (const auto& [set, domain] : scenes) {
        const auto r = estimate_moments(set, domain, kN, 42);
        const double err = std::abs(r.crofton_length - set.total_length());
        EXPECT_LT(err / set.total_length(), 0.01);
        EXPECT_LE(err, 3 * r.std_err_crofton_length() + 1e-12);
    }
}

TEST(EstimateMoments, Errors) {
    EXPECT_THROW(estimate_moments(cross_set(), ConvexDomain::unit_disk(), 0, 1), ParameterDomainError);
    const RectSet outside({CurvePiece::segment({0, 0}, {0.5, 0}), CurvePiece::segment({0, 0}, {2, 0})});
    try {
        estimate_moments(outside, ConvexDomain::unit_disk(), 10, 1);
        FAIL() << "expected ContainmentError";
    } catch (const ContainmentError& e) {
        ASSERT_EQ(e.offending_pieces().size(), 1u);
        EXPECT_EQ(e.offending_pieces()[0], 1u);
    }
}

TEST(EstimateMoments, EmptySet) {
    const auto r = estimate_moments(RectSet(), ConvexDomain::unit_disk(), 1000, 1);
    EXPECT_EQ(r.mean_count, 0.0);
    EXPECT_EQ(r.second_moment, 0.0);
    const auto res = variance_identity_check(r, 0.0, r.perimeter);
    EXPECT_EQ(res.value, 0.0);
    EXPECT_TRUE(res.within());
}

TEST(VarianceIdentity, ResidualWithinTolerance) {
    const auto disk = ConvexDomain::unit_disk();
    for (const auto& set : {cross_set(), boundary_pieces(disk, 2), RectSet({CurvePiece::segment({-0.5, 0}, {0.5, 0.2})})}) {
        const auto r = estimate_moments(set, disk, 200000, 3);
        EXPECT_TRUE(variance_identity_check(r, set.total_length(), r.perimeter).within());
    }
}

TEST(ClosedForm, Examples) {
    const auto disk = ConvexDomain::unit_disk();
    EXPECT_NEAR(closed_form_copies_plus_segment(disk, 1, 2.0).value, 4 * kPi + 10, 1e-12);
    EXPECT_NEAR(closed_form_copies_plus_segment(disk, 0, 1.3).value, 1.3, 1e-15);
    EXPECT_NEAR(closed_form_copies_plus_segment(disk, 2, 0.0).value, 16 * kPi, 1e-12);
    for (int k : {0, 1, 2, 3}) {
        for (double s : {0.0, 0.5, 1.0, 2.0}) {
            const auto cf = closed_form_copies_plus_segment(disk, k, s);
            EXPECT_NEAR(cf.value, cf.alternate, 1e-10 * std::max(1.0, cf.value));
        }
    }
    EXPECT_THROW(closed_form_copies_plus_segment(disk, 1, 2.5), ParameterDomainError);
    EXPECT_THROW(closed_form_copies_plus_segment(disk, 1, -0.1), ParameterDomainError);
}

TEST(ClosedForm, MatchesMonteCarlo) {
    const auto disk = ConvexDomain::unit_disk();
    const double diam = domain_diameter(disk);
    for (int k : {0, 1, 2}) {
        for (double s : {0.0, diam / 2, diam}) {
            if (k == 0 && s == 0.0) continue;
            RectSet set = k > 0 ? boundary_pieces(disk, k) : RectSet();
            if (s > 0) set = set.merged(RectSet({CurvePiece::segment({-s / 2, 0}, {s / 2, 0})}));
            const auto r = estimate_moments(set, disk, 400000, 100 + k);
            const double want = closed_form_copies_plus_segment(disk, k, s).value;
            EXPECT_LE(std::abs(r.quarter_second_moment_mu - want), 3 * r.std_err_quarter_second() + 1e-12 * want)
                << "k=" << k << " s=" << s;
        }
    }
}
