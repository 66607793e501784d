#include "crofton/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "crofton/errors.hpp"

namespace crofton {

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Vec2 nearest_on_segment(Vec2 a, Vec2 b, Vec2 q) {
    const Vec2 d = b - a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return a;
    const double t = std::clamp(dot(q - a, d) / len2, 0.0, 1.0);
    return a + d * t;
}

// Closest point on the axis-aligned ellipse (x/a)^2 + (y/b)^2 = 1 to a point in
// the first quadrant, by bisection on the Lagrange parameter.
Vec2 nearest_on_ellipse_quadrant(double a, double b, Vec2 q) {
    // Swap so that a >= b.
    const bool swapped = a < b;
    if (swapped) {
        std::swap(a, b);
        std::swap(q.x, q.y);
    }
    Vec2 result;
    if (q.y > 0.0) {
        if (q.x > 0.0) {
            const double z0 = q.x / a;
            const double z1 = q.y / b;
            const double ratio = (a * a) / (b * b);
            const double g0 = z0 * z0 + z1 * z1 - 1.0;
            if (g0 != 0.0) {
                // Root of F(s) = (r*z0/(s+r))^2 + (z1/(s+1))^2 - 1.
                const double n0 = ratio * z0;
                double s0 = z1 - 1.0;
                double s1 = g0 < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
                double s = 0.0;
                for (int i = 0; i < 200; ++i) {
                    s = 0.5 * (s0 + s1);
                    if (s == s0 || s == s1) break;
                    const double r0 = n0 / (s + ratio);
                    const double r1 = z1 / (s + 1.0);
                    const double g = r0 * r0 + r1 * r1 - 1.0;
                    if (g > 0.0) {
                        s0 = s;
                    } else if (g < 0.0) {
                        s1 = s;
                    } else {
                        break;
                    }
                }
                result = {ratio * q.x / (s + ratio), q.y / (s + 1.0)};
            } else {
                result = q;
            }
        } else {
            result = {0.0, b};
        }
    } else {
        const double numer = a * q.x;
        const double denom = a * a - b * b;
        if (numer < denom) {
            const double xa = numer / denom;
            result = {a * xa, b * std::sqrt(std::max(0.0, 1.0 - xa * xa))};
        } else {
            result = {a, 0.0};
        }
    }
    if (swapped) std::swap(result.x, result.y);
    return result;
}

double arc_sign(const Arc& arc) { return arc.sweep >= 0.0 ? 1.0 : -1.0; }

}  // namespace

double normalize_angle(double angle) {
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

CurvePiece CurvePiece::segment(Vec2 a, Vec2 b, int multiplicity) {
    if (multiplicity < 1) throw ValidationError("segment multiplicity must be positive");
    if (!(std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(b.x) && std::isfinite(b.y))) {
        throw ValidationError("segment endpoints must be finite");
    }
    if (a == b) throw ValidationError("segment endpoints must be distinct");
    return CurvePiece(Segment{a, b}, multiplicity);
}

CurvePiece CurvePiece::arc(Vec2 center, double radius, double start, double sweep, int multiplicity) {
    if (multiplicity < 1) throw ValidationError("arc multiplicity must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("arc radius must be positive");
    if (!std::isfinite(start) || !std::isfinite(sweep) || !std::isfinite(center.x) || !std::isfinite(center.y)) {
        throw ValidationError("arc parameters must be finite");
    }
    if (sweep == 0.0) throw ValidationError("arc sweep must be nonzero");
    if (std::abs(sweep) > kTwoPi * (1.0 + 1e-12)) throw ValidationError("arc |sweep| must not exceed 2*pi");
    sweep = std::clamp(sweep, -kTwoPi, kTwoPi);
    return CurvePiece(Arc{center, radius, start, sweep}, multiplicity);
}

CurvePiece CurvePiece::with_multiplicity(int multiplicity) const {
    if (multiplicity < 1) throw ValidationError("multiplicity must be positive");
    return CurvePiece(shape_, multiplicity);
}

double piece_length(const CurvePiece& piece) {
    if (piece.is_segment()) {
        const auto& s = piece.as_segment();
        return distance(s.a, s.b);
    }
    const auto& a = piece.as_arc();
    return a.radius * std::abs(a.sweep);
}

PointNormal point_and_normal(const CurvePiece& piece, double s) {
    const double len = piece_length(piece);
    if (!(s >= 0.0 && s <= len)) {
        throw ParameterDomainError("arclength parameter " + std::to_string(s) + " outside [0, " +
                                   std::to_string(len) + "]");
    }
    if (piece.is_segment()) {
        const auto& seg = piece.as_segment();
        const Vec2 dir = (seg.b - seg.a) / len;
        return {seg.a + dir * s, perp(dir)};
    }
    const auto& arc = piece.as_arc();
    const double angle = arc.start + arc_sign(arc) * s / arc.radius;
    const Vec2 radial = unit_direction(angle);
    return {arc.center + radial * arc.radius, radial};
}

RectSet::RectSet(std::vector<CurvePiece> pieces) : pieces_(std::move(pieces)) {
    CompensatedSum total;
    for (const auto& p : pieces_) total.add(p.multiplicity() * piece_length(p));
    total_length_ = total.value();
}

RectSet RectSet::merged(const RectSet& other) const {
    std::vector<CurvePiece> all(pieces_.begin(), pieces_.end());
    all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
    return RectSet(std::move(all));
}

ConvexDomain ConvexDomain::disk(Vec2 center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("disk radius must be positive");
    return ConvexDomain(Disk{center, radius});
}

ConvexDomain ConvexDomain::polygon(std::vector<Vec2> vertices) {
    std::vector<Vec2> v;
    for (const auto& p : vertices) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("polygon vertices must be finite");
        if (v.empty() || distance(v.back(), p) > kGeometryEps) v.push_back(p);
    }
    while (v.size() > 1 && distance(v.front(), v.back()) <= kGeometryEps) v.pop_back();
    if (v.size() < 3) throw ValidationError("polygon needs at least three distinct vertices");

    double area2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) area2 += cross(v[i], v[(i + 1) % v.size()]);
    if (area2 < 0.0) std::reverse(v.begin(), v.end());

    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i];
        const Vec2 b = v[(i + 1) % n];
        const Vec2 c = v[(i + 2) % n];
        // Distance of c from the line through a, b must be strictly positive.
        if (cross(b - a, c - b) <= kGeometryEps * norm(b - a)) {
            throw ValidationError("polygon vertices are not strictly convex (vertex " + std::to_string((i + 1) % n) +
                                  ")");
        }
    }
    // Winding exactly once: total turning equals 2*pi.
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = v[(i + 1) % n] - v[i];
        const Vec2 e1 = v[(i + 2) % n] - v[(i + 1) % n];
        turning += std::atan2(cross(e0, e1), dot(e0, e1));
    }
    if (std::abs(turning - kTwoPi) > 1e-6) throw ValidationError("polygon is self-intersecting");
    return ConvexDomain(ConvexPolygon{std::move(v)});
}

ConvexDomain ConvexDomain::square(Vec2 corner, double side) {
    if (!(side > 0.0)) throw ValidationError("square side must be positive");
    return polygon({corner, corner + Vec2{side, 0.0}, corner + Vec2{side, side}, corner + Vec2{0.0, side}});
}

ConvexDomain ConvexDomain::ellipse(Vec2 center, double axis_x, double axis_y, double rotation) {
    if (!(axis_x > 0.0) || !(axis_y > 0.0) || !std::isfinite(axis_x) || !std::isfinite(axis_y)) {
        throw ValidationError("ellipse semi-axes must be positive");
    }
    return ConvexDomain(Ellipse{center, axis_x, axis_y, rotation});
}

ConvexDomain ConvexDomain::regular_polygon(Vec2 center, double radius, int sides, double phase) {
    if (sides < 3) throw ValidationError("regular polygon needs at least three sides");
    std::vector<Vec2> v;
    for (int i = 0; i < sides; ++i) v.push_back(center + unit_direction(phase + kTwoPi * i / sides) * radius);
    return polygon(std::move(v));
}

double support_function(const ConvexDomain& domain, double phi) {
    const Vec2 u = unit_direction(phi);
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return dot(d.center, u) + d.radius;
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                double h = -std::numeric_limits<double>::infinity();
                for (const auto& v : d.vertices) h = std::max(h, dot(v, u));
                return h;
            } else {
                const Vec2 e1 = unit_direction(d.rotation);
                const Vec2 e2 = perp(e1);
                return dot(d.center, u) + std::hypot(d.semi_major * dot(u, e1), d.semi_minor * dot(u, e2));
            }
        },
        domain.shape());
}

double width(const ConvexDomain& domain, double phi) {
    return support_function(domain, phi) + support_function(domain, phi + std::numbers::pi);
}

double domain_perimeter(const ConvexDomain& domain) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return kTwoPi * d.radius;
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                CompensatedSum sum;
                const auto& v = d.vertices;
                for (std::size_t i = 0; i < v.size(); ++i) sum.add(distance(v[i], v[(i + 1) % v.size()]));
                return sum.value();
            } else {
                const double a = std::max(d.semi_major, d.semi_minor);
                const double b = std::min(d.semi_major, d.semi_minor);
                const double e = std::sqrt(std::max(0.0, 1.0 - (b * b) / (a * a)));
                return 4.0 * a * std::comp_ellint_2(e);
            }
        },
        domain.shape());
}

double domain_diameter(const ConvexDomain& domain) {
    const auto chord = longest_chord(domain).as_segment();
    return distance(chord.a, chord.b);
}

CurvePiece longest_chord(const ConvexDomain& domain) {
    return std::visit(
        [](const auto& d) -> CurvePiece {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return CurvePiece::segment(d.center - Vec2{d.radius, 0.0}, d.center + Vec2{d.radius, 0.0});
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                const auto& v = d.vertices;
                std::size_t bi = 0, bj = 1;
                double best = -1.0;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    for (std::size_t j = i + 1; j < v.size(); ++j) {
                        const double dd = distance(v[i], v[j]);
                        if (dd > best) {
                            best = dd;
                            bi = i;
                            bj = j;
                        }
                    }
                }
                return CurvePiece::segment(v[bi], v[bj]);
            } else {
                const Vec2 axis = d.semi_major >= d.semi_minor ? unit_direction(d.rotation) * d.semi_major
                                                               : perp(unit_direction(d.rotation)) * d.semi_minor;
                return CurvePiece::segment(d.center - axis, d.center + axis);
            }
        },
        domain.shape());
}

Vec2 domain_center(const ConvexDomain& domain) {
    return std::visit(
        [](const auto& d) -> Vec2 {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConvexPolygon>) {
                Vec2 c;
                for (const auto& v : d.vertices) c += v;
                return c / static_cast<double>(d.vertices.size());
            } else {
                return d.center;
            }
        },
        domain.shape());
}

double max_radius(const ConvexDomain& domain) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return norm(d.center) + d.radius;
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                double r = 0.0;
                for (const auto& v : d.vertices) r = std::max(r, norm(v));
                return r;
            } else {
                return norm(d.center) + std::max(d.semi_major, d.semi_minor);
            }
        },
        domain.shape());
}

bool contains(const ConvexDomain& domain, Vec2 point, double tol) {
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return distance(point, d.center) <= d.radius + tol;
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                const auto& v = d.vertices;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const Vec2 a = v[i];
                    const Vec2 b = v[(i + 1) % v.size()];
                    if (cross(b - a, point - a) < -tol * norm(b - a)) return false;
                }
                return true;
            } else {
                const Vec2 local = rotate(point - d.center, -d.rotation);
                const double f = std::hypot(local.x / d.semi_major, local.y / d.semi_minor);
                if (f <= 1.0) return true;
                const Vec2 q = nearest_on_ellipse_quadrant(d.semi_major, d.semi_minor,
                                                           {std::abs(local.x), std::abs(local.y)});
                return distance(q, {std::abs(local.x), std::abs(local.y)}) <= tol;
            }
        },
        domain.shape());
}

Vec2 project_to_domain(const ConvexDomain& domain, Vec2 point) {
    return std::visit(
        [&](const auto& d) -> Vec2 {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Disk>) {
                const Vec2 rel = point - d.center;
                const double r = norm(rel);
                if (r <= d.radius) return point;
                return d.center + rel * (d.radius / r);
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                if (contains(domain, point, 0.0)) return point;
                const auto& v = d.vertices;
                Vec2 best = v[0];
                double best_d = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const Vec2 q = nearest_on_segment(v[i], v[(i + 1) % v.size()], point);
                    const double dd = distance(q, point);
                    if (dd < best_d) {
                        best_d = dd;
                        best = q;
                    }
                }
                return best;
            } else {
                const Vec2 local = rotate(point - d.center, -d.rotation);
                if (std::hypot(local.x / d.semi_major, local.y / d.semi_minor) <= 1.0) return point;
                Vec2 q = nearest_on_ellipse_quadrant(d.semi_major, d.semi_minor,
                                                     {std::abs(local.x), std::abs(local.y)});
                q.x = std::copysign(q.x, local.x);
                q.y = std::copysign(q.y, local.y);
                // Pull onto the closed set if rounding left it a hair outside.
                const double f = std::hypot(q.x / d.semi_major, q.y / d.semi_minor);
                if (f > 1.0) q = q / f;
                return d.center + rotate(q, d.rotation);
            }
        },
        domain.shape());
}

namespace {

std::vector<Vec2> ellipse_boundary_vertices(const Ellipse& e, double max_deviation) {
    const double a = std::max(e.semi_major, e.semi_minor);
    const double b = std::min(e.semi_major, e.semi_minor);
    // Sagitta of a chord of length h at curvature k is about k h^2 / 8.
    const double kmax = a / (b * b);
    const double h = std::sqrt(8.0 * max_deviation / kmax);
    const int n = std::max(16, static_cast<int>(std::ceil(kTwoPi * a / h)));
    std::vector<Vec2> v;
    v.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double t = kTwoPi * i / n;
        v.push_back(e.center + rotate({e.semi_major * std::cos(t), e.semi_minor * std::sin(t)}, e.rotation));
    }
    return v;
}

// Closed polyline tracing the boundary (first vertex not repeated).
std::vector<Vec2> boundary_polyline(const ConvexDomain& domain, double max_deviation) {
    if (const auto* p = std::get_if<ConvexPolygon>(&domain.shape())) return p->vertices;
    if (const auto* e = std::get_if<Ellipse>(&domain.shape())) return ellipse_boundary_vertices(*e, max_deviation);
    throw InternalError("boundary_polyline called for a disk");
}

}  // namespace

RectSet boundary_pieces(const ConvexDomain& domain, int copies, double max_deviation) {
    if (copies < 1) throw ParameterDomainError("boundary copies must be at least 1");
    if (const auto* d = std::get_if<Disk>(&domain.shape())) {
        return RectSet({CurvePiece::full_circle(d->center, d->radius, copies)});
    }
    const auto v = boundary_polyline(domain, max_deviation);
    std::vector<CurvePiece> pieces;
    pieces.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) pieces.push_back(CurvePiece::segment(v[i], v[(i + 1) % v.size()], copies));
    return RectSet(std::move(pieces));
}

std::vector<std::vector<CurvePiece>> boundary_subdivision(const ConvexDomain& domain, int count,
                                                          double max_deviation) {
    if (count < 1) throw ParameterDomainError("subdivision count must be at least 1");
    std::vector<std::vector<CurvePiece>> parts(count);
    if (const auto* d = std::get_if<Disk>(&domain.shape())) {
        const double step = kTwoPi / count;
        for (int i = 0; i < count; ++i) parts[i].push_back(CurvePiece::arc(d->center, d->radius, i * step, step));
        return parts;
    }
    const auto v = boundary_polyline(domain, max_deviation);
    const std::size_t n = v.size();
    std::vector<double> cumulative(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cumulative[i + 1] = cumulative[i] + distance(v[i], v[(i + 1) % n]);
    const double total = cumulative[n];
    auto point_at = [&](double s, std::size_t edge) {
        const Vec2 a = v[edge];
        const Vec2 b = v[(edge + 1) % n];
        const double len = cumulative[edge + 1] - cumulative[edge];
        return a + (b - a) * ((s - cumulative[edge]) / len);
    };
    std::size_t edge = 0;
    for (int i = 0; i < count; ++i) {
        const double s0 = total * i / count;
        const double s1 = i + 1 == count ? total : total * (i + 1) / count;
        while (edge + 1 < n && cumulative[edge + 1] <= s0) ++edge;
        double s = s0;
        std::size_t e = edge;
        while (s < s1) {
            const double end = std::min(s1, cumulative[e + 1]);
            const Vec2 pa = point_at(s, e);
            const Vec2 pb = end == cumulative[e + 1] ? v[(e + 1) % n] : point_at(end, e);
            if (distance(pa, pb) > 1e-15 * total) parts[i].push_back(CurvePiece::segment(pa, pb));
            s = end;
            if (s >= cumulative[e + 1] && e + 1 < n) ++e;
            else if (s >= cumulative[e + 1]) break;
        }
    }
    return parts;
}

std::vector<std::size_t> pieces_outside(const RectSet& set, const ConvexDomain& domain, int samples_per_piece,
                                        double tol) {
    std::vector<std::size_t> bad;
    const int m = std::max(2, samples_per_piece);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& piece = set.pieces()[i];
        const double len = piece_length(piece);
        for (int k = 0; k < m; ++k) {
            const double s = len * k / (m - 1);
            if (!contains(domain, point_and_normal(piece, std::min(s, len)).point, tol)) {
                bad.push_back(i);
                break;
            }
        }
    }
    return bad;
}

}  // namespace crofton
