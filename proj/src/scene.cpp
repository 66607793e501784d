#include "crofton/scene.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "crofton/errors.hpp"

namespace crofton {

using nlohmann::json;

namespace {

void check_fields(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ValidationError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.count(key)) throw ValidationError(where + "." + key + ": unknown field");
    }
}

const json& require(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) throw ValidationError(where + "." + key + ": missing field");
    return obj.at(key);
}

double number(const json& obj, const std::string& where, const char* key) {
    const json& v = require(obj, where, key);
    if (!v.is_number()) throw ValidationError(where + "." + key + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(where + "." + key + ": not finite");
    return d;
}

Vec2 point(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ValidationError(where + ": expected [x, y]");
    }
    const Vec2 p{v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError(where + ": not finite");
    return p;
}

Vec2 point(const json& obj, const std::string& where, const char* key) {
    return point(require(obj, where, key), where + "." + key);
}

int multiplicity(const json& obj, const std::string& where) {
    if (!obj.contains("mult")) return 1;
    const json& v = obj.at("mult");
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1'000'000) {
        throw ValidationError(where + ".mult: expected a positive integer");
    }
    return static_cast<int>(v.get<long long>());
}

json to_json(Vec2 p) { return json::array({p.x, p.y}); }

// Rethrows geometry validation failures with the field path attached.
template <typename F>
auto with_context(const std::string& where, F&& make) {
    try {
        return make();
    } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

CurvePiece piece_from_json(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + ": expected an object");
    const json& kind = require(obj, where, "kind");
    if (kind == "segment") {
        check_fields(obj, where, {"kind", "a", "b", "mult"});
        const Vec2 a = point(obj, where, "a"), b = point(obj, where, "b");
        const int m = multiplicity(obj, where);
        return with_context(where, [&] { return CurvePiece::segment(a, b, m); });
    }
    if (kind == "arc") {
        check_fields(obj, where, {"kind", "center", "radius", "start", "sweep", "mult"});
        const Vec2 c = point(obj, where, "center");
        const double r = number(obj, where, "radius");
        const double start = number(obj, where, "start");
        const double sweep = number(obj, where, "sweep");
        const int m = multiplicity(obj, where);
        return with_context(where, [&] { return CurvePiece::arc(c, r, start, sweep, m); });
    }
    throw ValidationError(where + ".kind: expected \"segment\" or \"arc\"");
}

double parse_double(std::string_view text, const std::string& what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ValidationError("domain spec: bad " + what + " '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = text.find(sep, pos);
        out.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

ConvexDomain domain_from_json(const json& doc) {
    const std::string where = "domain";
    if (!doc.is_object()) throw ValidationError(where + ": expected an object");
    const json& kind = require(doc, where, "kind");
    if (kind == "disk") {
        check_fields(doc, where, {"kind", "center", "radius"});
        const Vec2 c = doc.contains("center") ? point(doc, where, "center") : Vec2{};
        const double r = number(doc, where, "radius");
        return with_context(where, [&] { return ConvexDomain::disk(c, r); });
    }
    if (kind == "polygon") {
        check_fields(doc, where, {"kind", "vertices"});
        const json& vs = require(doc, where, "vertices");
        if (!vs.is_array()) throw ValidationError(where + ".vertices: expected an array");
        std::vector<Vec2> vertices;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            vertices.push_back(point(vs[i], where + ".vertices[" + std::to_string(i) + "]"));
        }
        return with_context(where, [&] { return ConvexDomain::polygon(vertices); });
    }
    if (kind == "ellipse") {
        check_fields(doc, where, {"kind", "center", "semi_major", "semi_minor", "rotation"});
        const Vec2 c = doc.contains("center") ? point(doc, where, "center") : Vec2{};
        const double a = number(doc, where, "semi_major");
        const double b = number(doc, where, "semi_minor");
        const double rot = doc.contains("rotation") ? number(doc, where, "rotation") : 0.0;
        return with_context(where, [&] { return ConvexDomain::ellipse(c, a, b, rot); });
    }
    throw ValidationError(where + ".kind: expected \"disk\", \"polygon\" or \"ellipse\"");
}

Scene scene_from_json(const json& doc) {
    check_fields(doc, "scene", {"domain", "set"});
    Scene scene;
    if (doc.contains("domain")) scene.domain = domain_from_json(doc.at("domain"));
    const json& set = require(doc, "scene", "set");
    if (!set.is_array()) throw ValidationError("set: expected an array");
    std::vector<CurvePiece> pieces;
    for (std::size_t i = 0; i < set.size(); ++i) pieces.push_back(piece_from_json(set[i], "set[" + std::to_string(i) + "]"));
    scene.set = RectSet(std::move(pieces));
    return scene;
}

Scene parse_scene(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scene is not valid JSON: ") + e.what());
    }
    return scene_from_json(doc);
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scene file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scene(buffer.str());
}

json domain_to_json(const ConvexDomain& domain) {
    return std::visit(
        [](const auto& d) -> json {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return {{"kind", "disk"}, {"center", to_json(d.center)}, {"radius", d.radius}};
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                json vs = json::array();
                for (const auto& v : d.vertices) vs.push_back(to_json(v));
                return {{"kind", "polygon"}, {"vertices", vs}};
            } else {
                return {{"kind", "ellipse"},
                        {"center", to_json(d.center)},
                        {"semi_major", d.semi_major},
                        {"semi_minor", d.semi_minor},
                        {"rotation", d.rotation}};
            }
        },
        domain.shape());
}

json piece_to_json(const CurvePiece& piece) {
    if (piece.is_segment()) {
        const auto& s = piece.as_segment();
        return {{"kind", "segment"}, {"a", to_json(s.a)}, {"b", to_json(s.b)}, {"mult", piece.multiplicity()}};
    }
    const auto& a = piece.as_arc();
    return {{"kind", "arc"},         {"center", to_json(a.center)}, {"radius", a.radius},
            {"start", a.start},      {"sweep", a.sweep},            {"mult", piece.multiplicity()}};
}

json set_to_json(const RectSet& set) {
    json out = json::array();
    for (const auto& p : set.pieces()) out.push_back(piece_to_json(p));
    return out;
}

json scene_to_json(const Scene& scene) {
    json out;
    if (scene.domain) out["domain"] = domain_to_json(*scene.domain);
    out["set"] = set_to_json(scene.set);
    return out;
}

ConvexDomain parse_domain_spec(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ValidationError("domain spec '" + std::string(text) + "' has no parameters");
    const std::string_view kind = text.substr(0, colon);
    const std::string_view rest = text.substr(colon + 1);
    const auto parts = split(rest, ':');
    if (kind == "disk") {
        if (parts.size() != 1 && parts.size() != 3) throw ValidationError("domain spec: expected disk:R or disk:R:CX:CY");
        const double r = parse_double(parts[0], "radius");
        const Vec2 c = parts.size() == 3 ? Vec2{parse_double(parts[1], "center"), parse_double(parts[2], "center")} : Vec2{};
        return ConvexDomain::disk(c, r);
    }
    if (kind == "square") {
        if (parts.size() != 1) throw ValidationError("domain spec: expected square:S");
        return ConvexDomain::square({0.0, 0.0}, parse_double(parts[0], "side"));
    }
    if (kind == "ellipse") {
        if (parts.size() != 2 && parts.size() != 3) throw ValidationError("domain spec: expected ellipse:A:B[:ROT]");
        const double rot = parts.size() == 3 ? parse_double(parts[2], "rotation") : 0.0;
        return ConvexDomain::ellipse({}, parse_double(parts[0], "semi-axis"), parse_double(parts[1], "semi-axis"), rot);
    }
    if (kind == "polygon") {
        std::vector<Vec2> vertices;
        for (auto pair : split(rest, ';')) {
            const auto xy = split(pair, ',');
            if (xy.size() != 2) throw ValidationError("domain spec: polygon vertices are x,y pairs separated by ';'");
            vertices.push_back({parse_double(xy[0], "vertex"), parse_double(xy[1], "vertex")});
        }
        return ConvexDomain::polygon(std::move(vertices));
    }
    throw ValidationError("domain spec: unknown kind '" + std::string(kind) + "'");
}

namespace {

class SvgWriter {
public:
    SvgWriter(const ConvexDomain& domain, double size_px) : size_(size_px) {
        const double xmin = -support_function(domain, std::numbers::pi);
        const double xmax = support_function(domain, 0.0);
        const double ymin = -support_function(domain, 1.5 * std::numbers::pi);
        const double ymax = support_function(domain, 0.5 * std::numbers::pi);
        const double extent = std::max(xmax - xmin, ymax - ymin);
        scale_ = 0.9 * size_ / extent;
        cx_ = 0.5 * (xmin + xmax);
        cy_ = 0.5 * (ymin + ymax);
    }

    std::string x(double v) const { return fmt(0.5 * size_ + (v - cx_) * scale_); }
    std::string y(double v) const { return fmt(0.5 * size_ - (v - cy_) * scale_); }
    std::string len(double v) const { return fmt(v * scale_); }
    double scale() const { return scale_; }

    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return buf;
    }

private:
    double size_, scale_, cx_, cy_;
};

}  // namespace

std::string render_svg(const ConvexDomain& domain, const RectSet& set, const SvgOptions& options) {
    const SvgWriter w(domain, options.size_px);
    const std::string size = SvgWriter::fmt(options.size_px);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            const char* style = " fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"";
            if constexpr (std::is_same_v<T, Disk>) {
                out << "<circle class=\"domain\" cx=\"" << w.x(d.center.x) << "\" cy=\"" << w.y(d.center.y) << "\" r=\""
                    << w.len(d.radius) << '"' << style << "/>\n";
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                out << "<polygon class=\"domain\" points=\"";
                for (std::size_t i = 0; i < d.vertices.size(); ++i) {
                    out << (i ? " " : "") << w.x(d.vertices[i].x) << ',' << w.y(d.vertices[i].y);
                }
                out << '"' << style << "/>\n";
            } else {
                out << "<ellipse class=\"domain\" cx=\"" << w.x(d.center.x) << "\" cy=\"" << w.y(d.center.y)
                    << "\" rx=\"" << w.len(d.semi_major) << "\" ry=\"" << w.len(d.semi_minor) << "\" transform=\"rotate("
                    << SvgWriter::fmt(-d.rotation * 180.0 / std::numbers::pi) << ' ' << w.x(d.center.x) << ' '
                    << w.y(d.center.y) << ")\"" << style << "/>\n";
            }
        },
        domain.shape());

    if (options.lines > 0) {
        const HittingLineSpace space(domain, options.seed);
        for (int i = 0; i < options.lines; ++i) {
            const auto chord = clip_line(sample_hitting_line(space, static_cast<std::uint64_t>(i)), domain);
            if (!chord) continue;
            out << "<line class=\"sample\" x1=\"" << w.x(chord->a.x) << "\" y1=\"" << w.y(chord->a.y) << "\" x2=\""
                << w.x(chord->b.x) << "\" y2=\"" << w.y(chord->b.y) << "\" stroke=\"#4a90d9\" stroke-width=\"0.5\"/>\n";
        }
    }

    for (const auto& piece : set.pieces()) {
        const std::string stroke =
            " fill=\"none\" stroke=\"black\" stroke-width=\"" + SvgWriter::fmt(options.base_stroke * piece.multiplicity()) + "\"";
        if (piece.is_segment()) {
            const auto& s = piece.as_segment();
            out << "<line x1=\"" << w.x(s.a.x) << "\" y1=\"" << w.y(s.a.y) << "\" x2=\"" << w.x(s.b.x) << "\" y2=\""
                << w.y(s.b.y) << '"' << stroke << "/>\n";
            continue;
        }
        const auto& a = piece.as_arc();
        if (std::abs(a.sweep) >= kTwoPi) {
            out << "<circle cx=\"" << w.x(a.center.x) << "\" cy=\"" << w.y(a.center.y) << "\" r=\"" << w.len(a.radius)
                << '"' << stroke << "/>\n";
            continue;
        }
        const Vec2 p0 = a.center + unit_direction(a.start) * a.radius;
        const Vec2 p1 = a.center + unit_direction(a.start + a.sweep) * a.radius;
        // The y flip turns counter-clockwise sweeps into SVG sweep-flag 0.
        out << "<path d=\"M " << w.x(p0.x) << ' ' << w.y(p0.y) << " A " << w.len(a.radius) << ' ' << w.len(a.radius)
            << " 0 " << (std::abs(a.sweep) > std::numbers::pi ? 1 : 0) << ' ' << (a.sweep > 0 ? 0 : 1) << ' ' << w.x(p1.x)
            << ' ' << w.y(p1.y) << '"' << stroke << "/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace crofton
