#pragma once

// Curve pieces, rectifiable sets built from them, and convex planar domains.
//
// A piece is either a straight segment or a circular arc; general curves must
// be discretized by the caller. Every piece carries an integer multiplicity so
// that k copies of a curve are represented exactly rather than as duplicated
// geometry. All types are immutable after construction.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace crofton {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Absolute tolerance (domain units) used to classify degenerate geometry.
inline constexpr double kGeometryEps = 1e-9;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }
/// Left-hand perpendicular (rotation by +90 degrees).
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline Vec2 unit_direction(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Reduces an angle to [0, 2*pi).
double normalize_angle(double angle);

struct Segment {
    Vec2 a;
    Vec2 b;
};

struct Arc {
    Vec2 center;
    double radius = 1.0;
    double start = 0.0;  ///< radians
    double sweep = kTwoPi;  ///< signed radians, |sweep| <= 2*pi
};

struct PointNormal {
    Vec2 point;
    Vec2 normal;
};

class CurvePiece {
public:
    using Shape = std::variant<Segment, Arc>;

    /// Throws ValidationError for coincident endpoints or zero multiplicity.
    static CurvePiece segment(Vec2 a, Vec2 b, int multiplicity = 1);
    /// Throws ValidationError for non-positive radius, zero sweep or |sweep| > 2*pi.
    static CurvePiece arc(Vec2 center, double radius, double start, double sweep, int multiplicity = 1);
    static CurvePiece full_circle(Vec2 center, double radius, int multiplicity = 1) {
        return arc(center, radius, 0.0, kTwoPi, multiplicity);
    }

    const Shape& shape() const noexcept { return shape_; }
    int multiplicity() const noexcept { return multiplicity_; }
    bool is_segment() const noexcept { return std::holds_alternative<Segment>(shape_); }
    bool is_arc() const noexcept { return std::holds_alternative<Arc>(shape_); }
    const Segment& as_segment() const { return std::get<Segment>(shape_); }
    const Arc& as_arc() const { return std::get<Arc>(shape_); }

    /// Same geometry with a different multiplicity.
    CurvePiece with_multiplicity(int multiplicity) const;

private:
    CurvePiece(Shape shape, int multiplicity) : shape_(shape), multiplicity_(multiplicity) {}

    Shape shape_;
    int multiplicity_;
};

/// Analytic length of one copy of the piece (multiplicity excluded).
double piece_length(const CurvePiece& piece);

/// Point at arclength `s` from the start and the unit normal there.
/// Segments use the left perpendicular of the direction, arcs the outward radial
/// direction. Throws ParameterDomainError when s is outside [0, length].
PointNormal point_and_normal(const CurvePiece& piece, double s);

/// Finite multiset of curve pieces.
class RectSet {
public:
    RectSet() = default;
    explicit RectSet(std::vector<CurvePiece> pieces);

    std::span<const CurvePiece> pieces() const noexcept { return pieces_; }
    std::size_t size() const noexcept { return pieces_.size(); }
    bool empty() const noexcept { return pieces_.empty(); }
    /// Sum over pieces of multiplicity times length.
    double total_length() const noexcept { return total_length_; }

    /// Concatenation of two sets.
    RectSet merged(const RectSet& other) const;

private:
    std::vector<CurvePiece> pieces_;
    double total_length_ = 0.0;
};

struct Disk {
    Vec2 center;
    double radius = 1.0;
};

/// Strictly convex polygon, counter-clockwise vertex order.
struct ConvexPolygon {
    std::vector<Vec2> vertices;
};

struct Ellipse {
    Vec2 center;
    double semi_major = 1.0;  ///< semi-axis along the rotated x direction
    double semi_minor = 1.0;  ///< semi-axis along the rotated y direction
    double rotation = 0.0;
};

class ConvexDomain {
public:
    using Shape = std::variant<Disk, ConvexPolygon, Ellipse>;

    static ConvexDomain disk(Vec2 center, double radius);
    static ConvexDomain unit_disk() { return disk({0.0, 0.0}, 1.0); }
    /// Accepts either orientation; consecutive duplicates are removed. Throws
    /// ValidationError unless the remaining vertices are strictly convex.
    static ConvexDomain polygon(std::vector<Vec2> vertices);
    /// Axis-aligned square [x0, x0+side] x [y0, y0+side].
    static ConvexDomain square(Vec2 corner, double side);
    static ConvexDomain unit_square() { return square({0.0, 0.0}, 1.0); }
    /// The two semi-axes are measured along the rotated x and y directions.
    static ConvexDomain ellipse(Vec2 center, double axis_x, double axis_y, double rotation);
    /// Regular n-gon with circumradius `radius`, first vertex at angle `phase`.
    static ConvexDomain regular_polygon(Vec2 center, double radius, int sides, double phase = 0.0);

    const Shape& shape() const noexcept { return shape_; }

private:
    explicit ConvexDomain(Shape shape) : shape_(std::move(shape)) {}
    Shape shape_;
};

/// h(phi) = max over the domain of x . (cos phi, sin phi).
double support_function(const ConvexDomain& domain, double phi);
/// h(phi) + h(phi + pi).
double width(const ConvexDomain& domain, double phi);

double domain_perimeter(const ConvexDomain& domain);
double domain_diameter(const ConvexDomain& domain);
/// A segment realizing the diameter, endpoints in the closed domain.
CurvePiece longest_chord(const ConvexDomain& domain);

/// A point guaranteed to be interior (center, or vertex centroid for polygons).
Vec2 domain_center(const ConvexDomain& domain);
/// Upper bound on |x| over the domain; exact for disks and polygons.
double max_radius(const ConvexDomain& domain);

/// Closed-domain membership with an absolute distance tolerance.
bool contains(const ConvexDomain& domain, Vec2 point, double tol = kGeometryEps);
/// Nearest point of the closed domain (identity for points inside).
Vec2 project_to_domain(const ConvexDomain& domain, Vec2 point);

/// Default chord-to-arc deviation when an ellipse boundary is polygonized.
inline constexpr double kEllipseBoundaryDeviation = 1e-5;

/// The boundary as a set whose pieces cover it once, each with multiplicity
/// `copies`. Disks give one full arc and polygons their edges; an ellipse
/// boundary is an inscribed polygon whose edges deviate from the true curve by
/// at most `max_deviation`.
RectSet boundary_pieces(const ConvexDomain& domain, int copies,
                        double max_deviation = kEllipseBoundaryDeviation);

/// Splits the boundary into `count` consecutive parts of equal length. Each part
/// is a group of pieces (a part of a polygon boundary may turn a corner).
std::vector<std::vector<CurvePiece>> boundary_subdivision(const ConvexDomain& domain, int count,
                                                          double max_deviation = kEllipseBoundaryDeviation);

/// Indices of pieces that are not inside the closed domain, checked on
/// `samples_per_piece` points spread along each piece.
std::vector<std::size_t> pieces_outside(const RectSet& set, const ConvexDomain& domain,
                                        int samples_per_piece = 64, double tol = kGeometryEps);

}  // namespace crofton
