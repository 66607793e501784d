#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "crofton/errors.hpp"
#include "crofton/geometry.hpp"

using namespace crofton;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_vec(Vec2 got, Vec2 want, double tol = 1e-12) {
    EXPECT_NEAR(got.x, want.x, tol);
    EXPECT_NEAR(got.y, want.y, tol);
}

}  // namespace

TEST(PieceLength, SegmentIsEuclideanDistance) {
    EXPECT_DOUBLE_EQ(piece_length(CurvePiece::segment({0, 0}, {3, 4})), 5.0);
}

TEST(PieceLength, FullUnitCircle) {
    EXPECT_DOUBLE_EQ(piece_length(CurvePiece::full_circle({0, 0}, 1.0)), 2 * kPi);
}

TEST(PieceLength, QuarterArcOfRadiusTwo) {
    EXPECT_DOUBLE_EQ(piece_length(CurvePiece::arc({0, 0}, 2.0, 0.0, kPi / 2)), kPi);
}

TEST(PieceLength, NegativeSweepHasPositiveLength) {
    EXPECT_DOUBLE_EQ(piece_length(CurvePiece::arc({0, 0}, 1.0, 1.0, -kPi)), kPi);
}

TEST(CurvePieceValidation, RejectsBadPieces) {
    EXPECT_THROW(CurvePiece::segment({1, 1}, {1, 1}), ValidationError);
    EXPECT_THROW(CurvePiece::segment({0, 0}, {1, 1}, 0), ValidationError);
    EXPECT_THROW(CurvePiece::arc({0, 0}, 0.0, 0.0, 1.0), ValidationError);
    EXPECT_THROW(CurvePiece::arc({0, 0}, -1.0, 0.0, 1.0), ValidationError);
    EXPECT_THROW(CurvePiece::arc({0, 0}, 1.0, 0.0, 0.0), ValidationError);
    EXPECT_THROW(CurvePiece::arc({0, 0}, 1.0, 0.0, 7.0), ValidationError);
}

TEST(PointAndNormal, HorizontalSegmentMidpoint) {
    const auto pn = point_and_normal(CurvePiece::segment({0, 0}, {2, 0}), 1.0);
    expect_vec(pn.point, {1, 0});
    expect_vec(pn.normal, {0, 1});
}

TEST(PointAndNormal, TopOfUnitCircle) {
    const auto pn = point_and_normal(CurvePiece::full_circle({0, 0}, 1.0), kPi / 2);
    expect_vec(pn.point, {0, 1});
    expect_vec(pn.normal, {0, 1});
}

TEST(PointAndNormal, VerticalSegmentEndpoint) {
    const auto pn = point_and_normal(CurvePiece::segment({0, 0}, {0, 2}), 2.0);
    expect_vec(pn.point, {0, 2});
    expect_vec(pn.normal, {-1, 0});
}

TEST(PointAndNormal, ClockwiseArcRunsBackwards) {
    const auto pn = point_and_normal(CurvePiece::arc({0, 0}, 1.0, kPi / 2, -kPi), kPi / 2);
    expect_vec(pn.point, {1, 0});
    expect_vec(pn.normal, {1, 0});
}

TEST(PointAndNormal, OutOfRangeThrows) {
    const auto seg = CurvePiece::segment({0, 0}, {1, 0});
    EXPECT_THROW(point_and_normal(seg, -0.1), ParameterDomainError);
    EXPECT_THROW(point_and_normal(seg, 1.1), ParameterDomainError);
}

TEST(PointAndNormal, NormalIsUnitAndOrthogonalToTangent) {
    const std::vector<CurvePiece> pieces = {
        CurvePiece::segment({-1, 0.3}, {2, -0.7}),
        CurvePiece::arc({0.5, -0.2}, 1.7, 0.4, 2.5),
        CurvePiece::arc({0, 0}, 0.3, 5.0, -4.0),
        CurvePiece::full_circle({1, 1}, 2.0),
    };
    for (const auto& piece : pieces) {
        const double len = piece_length(piece);
        for (int i = 1; i < 50; ++i) {
            const double s = len * i / 50.0;
            const double h = 1e-6;
            const auto pn = point_and_normal(piece, s);
            const Vec2 tangent = point_and_normal(piece, s + h).point - point_and_normal(piece, s - h).point;
            EXPECT_NEAR(norm(pn.normal), 1.0, 1e-12);
            EXPECT_LT(std::abs(dot(tangent / norm(tangent), pn.normal)), 1e-8);
        }
    }
}

TEST(RectSet, TotalLengthCountsMultiplicity) {
    const RectSet set({CurvePiece::segment({0, 0}, {1, 0}, 3), CurvePiece::full_circle({0, 0}, 1.0, 2)});
    EXPECT_NEAR(set.total_length(), 3.0 + 4 * kPi, 1e-12);
    EXPECT_TRUE(RectSet().empty());
    EXPECT_EQ(RectSet().total_length(), 0.0);
    EXPECT_NEAR(set.merged(set).total_length(), 2 * set.total_length(), 1e-12);
}

TEST(SupportFunction, UnitDiskIsOneEverywhere) {
    const auto d = ConvexDomain::unit_disk();
    for (double phi : {0.0, 0.3, 1.7, 4.0, 6.2}) EXPECT_NEAR(support_function(d, phi), 1.0, 1e-15);
}

TEST(SupportFunction, UnitSquareAlongX) {
    EXPECT_NEAR(support_function(ConvexDomain::unit_square(), 0.0), 1.0, 1e-15);
}

TEST(SupportFunction, ShiftedDiskFacingOrigin) {
    EXPECT_NEAR(support_function(ConvexDomain::disk({1, 0}, 1.0), kPi), 0.0, 1e-15);
}

TEST(SupportFunction, DominatesEveryDomainPoint) {
    const std::vector<ConvexDomain> domains = {
        ConvexDomain::unit_disk(),
        ConvexDomain::unit_square(),
        ConvexDomain::ellipse({0.3, -0.2}, 2.0, 0.7, 0.6),
        ConvexDomain::regular_polygon({1, 1}, 1.5, 7, 0.2),
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0), a(0.0, 2 * kPi);
    for (const auto& d : domains) {
        int inside = 0;
        while (inside < 1000) {
            const Vec2 x{u(rng), u(rng)};
            if (!contains(d, x, 0.0)) continue;
            ++inside;
            const double phi = a(rng);
            EXPECT_GE(support_function(d, phi) + 1e-12, dot(x, unit_direction(phi)));
        }
        for (int i = 0; i < 100; ++i) EXPECT_GT(width(d, a(rng)), 0.0);
    }
}

TEST(DomainMetrics, UnitDisk) {
    const auto d = ConvexDomain::unit_disk();
    EXPECT_DOUBLE_EQ(domain_perimeter(d), 2 * kPi);
    EXPECT_DOUBLE_EQ(domain_diameter(d), 2.0);
    const auto& chord = longest_chord(d).as_segment();
    EXPECT_NEAR(distance(chord.a, chord.b), 2.0, 1e-12);
    expect_vec(chord.a, {-1, 0});
    expect_vec(chord.b, {1, 0});
}

TEST(DomainMetrics, UnitSquare) {
    const auto d = ConvexDomain::unit_square();
    EXPECT_DOUBLE_EQ(domain_perimeter(d), 4.0);
    EXPECT_NEAR(domain_diameter(d), std::sqrt(2.0), 1e-15);
    const auto& chord = longest_chord(d).as_segment();
    EXPECT_NEAR(distance(chord.a, chord.b), std::sqrt(2.0), 1e-12);
    const bool diagonal = (chord.a == Vec2{0, 0} && chord.b == Vec2{1, 1}) || (chord.a == Vec2{1, 1} && chord.b == Vec2{0, 0});
    EXPECT_TRUE(diagonal || (chord.a == Vec2{1, 0} && chord.b == Vec2{0, 1}) || (chord.a == Vec2{0, 1} && chord.b == Vec2{1, 0}));
}

TEST(DomainMetrics, EllipseDiameterAndPerimeter) {
    const auto d = ConvexDomain::ellipse({0, 0}, 2.0, 1.0, 0.0);
    EXPECT_DOUBLE_EQ(domain_diameter(d), 4.0);
    // Ramanujan's second approximation is accurate to ~1e-10 at this aspect ratio.
    const double a = 2.0, b = 1.0, h = (a - b) * (a - b) / ((a + b) * (a + b));
    const double ramanujan = kPi * (a + b) * (1 + 3 * h / (10 + std::sqrt(4 - 3 * h)));
    EXPECT_NEAR(domain_perimeter(d), ramanujan, 1e-8);
    EXPECT_NEAR(domain_perimeter(ConvexDomain::ellipse({0, 0}, 1.0, 1.0, 0.3)), 2 * kPi, 1e-12);
}

TEST(DomainMetrics, LongestChordInsideAndMatchesDiameter) {
    const std::vector<ConvexDomain> domains = {
        ConvexDomain::disk({2, -1}, 0.5),
        ConvexDomain::unit_square(),
        ConvexDomain::ellipse({0.3, -0.2}, 2.0, 0.7, 0.6),
        ConvexDomain::regular_polygon({1, 1}, 1.5, 7, 0.2),
    };
    for (const auto& d : domains) {
        const auto& c = longest_chord(d).as_segment();
        EXPECT_TRUE(contains(d, c.a));
        EXPECT_TRUE(contains(d, c.b));
        EXPECT_NEAR(distance(c.a, c.b), domain_diameter(d), 1e-12);
        EXPECT_LE(domain_diameter(d), domain_perimeter(d) / 2 + 1e-12);
    }
}

TEST(Polygon, AcceptsClockwiseAndDropsDuplicates) {
    const auto d = ConvexDomain::polygon({{0, 0}, {0, 1}, {0, 1}, {1, 1}, {1, 0}});
    const auto& poly = std::get<ConvexPolygon>(d.shape());
    ASSERT_EQ(poly.vertices.size(), 4u);
    double area = 0.0;
    for (std::size_t i = 0; i < 4; ++i) area += cross(poly.vertices[i], poly.vertices[(i + 1) % 4]);
    EXPECT_GT(area, 0.0);
}

TEST(Polygon, RejectsCollinearAndNonConvex) {
    EXPECT_THROW(ConvexDomain::polygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), ValidationError);
    EXPECT_THROW(ConvexDomain::polygon({{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}}), ValidationError);
    EXPECT_THROW(ConvexDomain::polygon({{0, 0}, {1, 0}}), ValidationError);
}

TEST(BoundaryPieces, UnitDiskOneArc) {
    const auto set = boundary_pieces(ConvexDomain::unit_disk(), 1);
    ASSERT_EQ(set.size(), 1u);
    EXPECT_TRUE(set.pieces()[0].is_arc());
    EXPECT_NEAR(set.total_length(), 2 * kPi, 1e-15);
}

TEST(BoundaryPieces, UnitDiskThreeCopies) {
    EXPECT_NEAR(boundary_pieces(ConvexDomain::unit_disk(), 3).total_length(), 6 * kPi, 1e-14);
}

TEST(BoundaryPieces, UnitSquareFourSegments) {
    const auto set = boundary_pieces(ConvexDomain::unit_square(), 1);
    EXPECT_EQ(set.size(), 4u);
    EXPECT_DOUBLE_EQ(set.total_length(), 4.0);
}

TEST(BoundaryPieces, LengthIsCopiesTimesPerimeter) {
    for (int copies : {1, 2, 5}) {
        const auto poly = ConvexDomain::regular_polygon({0, 0}, 1.0, 9);
        EXPECT_NEAR(boundary_pieces(poly, copies).total_length(), copies * domain_perimeter(poly), 1e-12);
        EXPECT_NEAR(boundary_pieces(ConvexDomain::disk({1, 2}, 3.0), copies).total_length(), copies * 6 * kPi, 1e-12);
    }
    const auto e = ConvexDomain::ellipse({0, 0}, 2.0, 1.0, 0.0);
    EXPECT_NEAR(boundary_pieces(e, 1).total_length(), domain_perimeter(e), 1e-4);
}

TEST(BoundarySubdivision, EqualParts) {
    for (const auto& d : {ConvexDomain::unit_disk(), ConvexDomain::unit_square()}) {
        const auto parts = boundary_subdivision(d, 10);
        ASSERT_EQ(parts.size(), 10u);
        for (const auto& part : parts) {
            double len = 0.0;
            for (const auto& piece : part) len += piece_length(piece);
            EXPECT_NEAR(len, domain_perimeter(d) / 10, 1e-12);
        }
    }
}

TEST(Containment, ProjectionAndMembership) {
    const auto sq = ConvexDomain::unit_square();
    EXPECT_TRUE(contains(sq, {1.0, 0.5}));
    EXPECT_FALSE(contains(sq, {1.1, 0.5}));
    expect_vec(project_to_domain(sq, {2.0, 0.5}), {1.0, 0.5});
    expect_vec(project_to_domain(sq, {2.0, 2.0}), {1.0, 1.0});
    expect_vec(project_to_domain(ConvexDomain::unit_disk(), {3.0, 4.0}), {0.6, 0.8});
    const auto e = ConvexDomain::ellipse({0, 0}, 2.0, 1.0, 0.0);
    expect_vec(project_to_domain(e, {5.0, 0.0}), {2.0, 0.0}, 1e-9);
    const Vec2 q = project_to_domain(e, {3.0, 3.0});
    EXPECT_NEAR(q.x * q.x / 4 + q.y * q.y, 1.0, 1e-9);
}

TEST(Containment, PiecesOutside) {
    const RectSet set({CurvePiece::segment({-1, 0}, {1, 0}), CurvePiece::segment({0, 0}, {2, 0}),
                       CurvePiece::arc({0, 0}, 1.0, 0.0, kPi)});
    const auto bad = pieces_outside(set, ConvexDomain::unit_disk());
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_EQ(bad[0], 1u);
}
