#pragma once

// Scene files: a convex domain plus a set of curve pieces, stored as JSON.
//
//   {"domain": {"kind": "disk", "center": [0, 0], "radius": 1},
//    "set": [{"kind": "segment", "a": [-1, 0], "b": [1, 0], "mult": 1},
//            {"kind": "arc", "center": [0, 0], "radius": 1, "start": 0, "sweep": 6.283185307179586, "mult": 1}]}
//
// Domain kinds are "disk" (center, radius), "polygon" (vertices) and "ellipse"
// (center, semi_major, semi_minor, rotation). "mult" defaults to 1. Unknown
// fields are rejected.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "crofton/geometry.hpp"
#include "crofton/kinematic.hpp"

namespace crofton {

struct Scene {
    std::optional<ConvexDomain> domain;
    RectSet set;
};

/// Throws ValidationError naming the offending field.
Scene scene_from_json(const nlohmann::json& doc);
Scene parse_scene(std::string_view text);
Scene load_scene(const std::string& path);

nlohmann::json domain_to_json(const ConvexDomain& domain);
ConvexDomain domain_from_json(const nlohmann::json& doc);
nlohmann::json piece_to_json(const CurvePiece& piece);
nlohmann::json set_to_json(const RectSet& set);
nlohmann::json scene_to_json(const Scene& scene);

/// Compact domain notation used on the command line:
///   disk:R   disk:R:CX:CY   square:S   polygon:x1,y1;x2,y2;...   ellipse:A:B[:ROT]
/// Throws ValidationError for anything else.
ConvexDomain parse_domain_spec(std::string_view text);

struct SvgOptions {
    /// Number of sampled hitting lines drawn (clipped to the domain); 0 for none.
    int lines = 0;
    std::uint64_t seed = 42;
    double size_px = 480.0;
    double base_stroke = 2.0;  ///< stroke width of a multiplicity-1 piece, in pixels
};

/// Domain outline, pieces with stroke width proportional to multiplicity and
/// optional sampled lines. Output depends only on the inputs.
std::string render_svg(const ConvexDomain& domain, const RectSet& set, const SvgOptions& options = {});

}  // namespace crofton
