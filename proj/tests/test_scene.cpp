#include <gtest/gtest.h>

#include <numbers>

#include "crofton/errors.hpp"
#include "crofton/scene.hpp"

using namespace crofton;

namespace {

constexpr double kPi = std::numbers::pi;

std::string data(const std::string& name) { return std::string(CROFTON_TEST_DATA) + "/" + name; }

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

void expect_same_geometry(const RectSet& a, const RectSet& b) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& p = a.pieces()[i];
        const auto& q = b.pieces()[i];
        EXPECT_EQ(p.multiplicity(), q.multiplicity());
        ASSERT_EQ(p.is_segment(), q.is_segment());
        if (p.is_segment()) {
            EXPECT_NEAR(distance(p.as_segment().a, q.as_segment().a), 0.0, 1e-12);
            EXPECT_NEAR(distance(p.as_segment().b, q.as_segment().b), 0.0, 1e-12);
        } else {
            EXPECT_NEAR(distance(p.as_arc().center, q.as_arc().center), 0.0, 1e-12);
            EXPECT_NEAR(p.as_arc().radius, q.as_arc().radius, 1e-12);
            EXPECT_NEAR(p.as_arc().start, q.as_arc().start, 1e-12);
            EXPECT_NEAR(p.as_arc().sweep, q.as_arc().sweep, 1e-12);
        }
    }
}

void expect_same_domain(const ConvexDomain& a, const ConvexDomain& b) {
    for (int i = 0; i < 16; ++i) {
        const double phi = 2 * kPi * i / 16;
        EXPECT_NEAR(support_function(a, phi), support_function(b, phi), 1e-12);
    }
    EXPECT_EQ(a.shape().index(), b.shape().index());
}

}  // namespace

TEST(Scene, LoadsGoldenFiles) {
    const auto cross = load_scene(data("cross.json"));
    ASSERT_TRUE(cross.domain.has_value());
    EXPECT_EQ(cross.set.size(), 2u);
    EXPECT_DOUBLE_EQ(cross.set.total_length(), 4.0);
    EXPECT_NEAR(load_scene(data("circle.json")).set.total_length(), 2 * kPi, 1e-12);
    EXPECT_NEAR(load_scene(data("circle_x2.json")).set.total_length(), 4 * kPi, 1e-12);
    EXPECT_DOUBLE_EQ(load_scene(data("square_boundary.json")).set.total_length(), 4.0);
    EXPECT_NEAR(load_scene(data("circle_diameter.json")).set.total_length(), 2 * kPi + 2, 1e-12);
    EXPECT_DOUBLE_EQ(load_scene(data("segment.json")).set.total_length(), 2.0);
    EXPECT_FALSE(load_scene(data("cross_no_domain.json")).domain.has_value());
}

TEST(Scene, RoundTrip) {
    for (const char* name : {"cross.json", "circle.json", "circle_x2.json", "square_boundary.json", "circle_diameter.json"}) {
        const auto a = load_scene(data(name));
        const auto b = parse_scene(scene_to_json(a).dump());
        const auto c = parse_scene(scene_to_json(b).dump(2));
        expect_same_geometry(a.set, c.set);
        expect_same_domain(*a.domain, *c.domain);
    }
}

TEST(Scene, DomainRoundTrip) {
    for (const auto& d : {ConvexDomain::ellipse({0.5, -1}, 2.0, 0.3, 1.1), ConvexDomain::regular_polygon({1, 2}, 0.7, 5, 0.3),
                          ConvexDomain::disk({-1, 0.25}, 3.5)}) {
        expect_same_domain(d, domain_from_json(nlohmann::json::parse(domain_to_json(d).dump())));
    }
}

TEST(Scene, UnknownFieldNamesThePath) {
    try {
        load_scene(data("unknown_field.json"));
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("set[0].weight"), std::string::npos) << e.what();
    }
}

TEST(Scene, MalformedInputs) {
    EXPECT_THROW(parse_scene("{"), ValidationError);
    EXPECT_THROW(parse_scene(R"({"set": [{"kind": "segment", "a": [0, 0]}]})"), ValidationError);
    EXPECT_THROW(parse_scene(R"({"set": [{"kind": "spline"}]})"), ValidationError);
    EXPECT_THROW(parse_scene(R"({"set": [{"kind": "segment", "a": [0, 0], "b": [0, 0]}]})"), ValidationError);
    EXPECT_THROW(parse_scene(R"({"set": [{"kind": "segment", "a": [0, 0], "b": [1, 0], "mult": 0}]})"), ValidationError);
    EXPECT_THROW(parse_scene(R"({"set": [{"kind": "segment", "a": [0, "x"], "b": [1, 0]}]})"), ValidationError);
    EXPECT_THROW(parse_scene(R"({"domain": {"kind": "disk", "center": [0, 0], "radius": -1}, "set": []})"), ValidationError);
    EXPECT_THROW(parse_scene(R"({"set": [], "extra": 1})"), ValidationError);
    EXPECT_THROW(load_scene(data("does_not_exist.json")), ValidationError);
    try {
        parse_scene(R"({"set": [{"kind": "segment", "a": [0, 0], "b": [1, 0]}, {"kind": "arc", "center": [0, 0]}]})");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("set[1]"), std::string::npos) << e.what();
    }
}

TEST(DomainSpec, Parses) {
    expect_same_domain(parse_domain_spec("disk:1"), ConvexDomain::unit_disk());
    expect_same_domain(parse_domain_spec("disk:2:1:-1"), ConvexDomain::disk({1, -1}, 2));
    expect_same_domain(parse_domain_spec("square:1"), ConvexDomain::unit_square());
    expect_same_domain(parse_domain_spec("ellipse:2:1"), ConvexDomain::ellipse({}, 2, 1, 0));
    expect_same_domain(parse_domain_spec("ellipse:2:1:0.5"), ConvexDomain::ellipse({}, 2, 1, 0.5));
    expect_same_domain(parse_domain_spec("polygon:0,0;2,0;1,1"), ConvexDomain::polygon({{0, 0}, {2, 0}, {1, 1}}));
    for (const char* bad : {"disk", "disk:x", "disk:1:2", "circle:1", "square:-1", "polygon:0,0;1", "ellipse:1"}) {
        EXPECT_THROW(parse_domain_spec(bad), ValidationError) << bad;
    }
}

TEST(Svg, CrossHasOneCircleAndTwoLines) {
    const auto scene = load_scene(data("cross.json"));
    const auto svg = render_svg(*scene.domain, scene.set);
    EXPECT_EQ(count(svg, "<circle"), 1u);
    EXPECT_EQ(count(svg, "<line"), 2u);
    EXPECT_EQ(svg, render_svg(*scene.domain, scene.set));
}

TEST(Svg, MultiplicityDoublesStrokeWidth) {
    const auto once = render_svg(ConvexDomain::unit_disk(), boundary_pieces(ConvexDomain::unit_disk(), 1));
    const auto twice = render_svg(ConvexDomain::unit_disk(), boundary_pieces(ConvexDomain::unit_disk(), 2));
    EXPECT_NE(once.find("stroke=\"black\" stroke-width=\"2.000\""), std::string::npos);
    EXPECT_NE(twice.find("stroke=\"black\" stroke-width=\"4.000\""), std::string::npos);
}

TEST(Svg, EmptySetIsOutlineOnly) {
    const auto svg = render_svg(ConvexDomain::unit_square(), RectSet());
    EXPECT_EQ(count(svg, "class=\"domain\""), 1u);
    EXPECT_EQ(count(svg, "<line"), 0u);
    EXPECT_EQ(count(svg, "<path"), 0u);
    EXPECT_EQ(count(svg, "stroke=\"black\""), 0u);
}

TEST(Svg, SampledLinesAndArcs) {
    SvgOptions opt;
    opt.lines = 100;
    const RectSet arc({CurvePiece::arc({0, 0}, 0.5, 0.0, 2.0)});
    const auto svg = render_svg(ConvexDomain::ellipse({}, 2, 1, 0.3), arc, opt);
    EXPECT_EQ(count(svg, "class=\"sample\""), 100u);
    EXPECT_EQ(count(svg, "<path"), 1u);
    EXPECT_EQ(count(svg, "<ellipse"), 1u);
}
