#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crp {

class GeometryError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Point2
{
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
    friend Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
    friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 rotate(Point2 p, double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

struct Box2
{
    Point2 lo{+INFINITY, +INFINITY};
    Point2 hi{-INFINITY, -INFINITY};

    void expand(Point2 p)
    {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    [[nodiscard]] bool overlaps(const Box2& o, double tol = 0.0) const
    {
        return lo.x < o.hi.x + tol && o.lo.x < hi.x + tol && lo.y < o.hi.y + tol && o.lo.y < hi.y + tol;
    }
};

/// Signed area of a closed ring (positive for counterclockwise order).
double signed_area(std::span<const Point2> ring);

/// Convex polygon with counterclockwise vertices and cached edge half-planes.
class ConvexPolygon
{
public:
    ConvexPolygon() = default;
    /// Throws GeometryError when the ring is not convex or has zero area.
    /// Clockwise input is reversed.
    explicit ConvexPolygon(std::vector<Point2> vertices);

    [[nodiscard]] const std::vector<Point2>& vertices() const { return vertices_; }
    [[nodiscard]] std::size_t size() const { return vertices_.size(); }
    [[nodiscard]] const Point2& operator[](std::size_t i) const { return vertices_[i]; }
    [[nodiscard]] const Box2& bounds() const { return bounds_; }
    [[nodiscard]] double area() const;
    [[nodiscard]] double perimeter() const;
    [[nodiscard]] Point2 centroid() const;

    /// True when p lies inside the polygon shrunk by `tol` (strict interior).
    [[nodiscard]] bool contains_strict(Point2 p, double tol) const;
    /// True when p lies inside the polygon grown by `tol` (closed).
    [[nodiscard]] bool contains_closed(Point2 p, double tol) const;
    /// True when the open segment ab passes through the interior shrunk by `tol`.
    [[nodiscard]] bool segment_crosses_interior(Point2 a, Point2 b, double tol) const;
    /// Positive-area overlap test (separating axis with tolerance).
    [[nodiscard]] bool overlaps(const ConvexPolygon& other, double tol) const;
    /// Closest point of the closed polygon to p.
    [[nodiscard]] Point2 closest_point(Point2 p) const;

private:
    std::vector<Point2> vertices_;
    std::vector<Point2> normals_;   // outward unit normals, edge i = (v_i, v_{i+1})
    std::vector<double> offsets_;   // normal_i . x <= offset_i inside
    Box2 bounds_;
};

struct OrientedRect
{
    Point2 center;
    double half_x = 0.5;
    double half_y = 0.5;
    double angle = 0.0;  // radians, normalized to [0, 2pi)

    /// Corners in counterclockwise order starting at (+hx, -hy) in the local frame.
    [[nodiscard]] std::vector<Point2> corners() const;
    [[nodiscard]] ConvexPolygon polygon() const { return ConvexPolygon(corners()); }
    [[nodiscard]] double area() const { return 4.0 * half_x * half_y; }
};

/// Outer ring counterclockwise, holes clockwise.
struct PolygonRegion
{
    std::vector<Point2> outer;
    std::vector<std::vector<Point2>> holes;

    [[nodiscard]] double area() const;
    [[nodiscard]] double perimeter() const;
};

double normalize_angle(double angle);

/// Vertices of the regular 16-gon whose apothem is `radius` (it circumscribes the
/// disc), rotated so one edge normal points along `angle`.
std::vector<Point2> disc_polygon(double radius, double angle = 0.0);
inline constexpr int kDiscSides = 16;

/// Minkowski sum with the 16-gon disc approximation. The disc polygon is aligned
/// with the rectangle axes so flat faces stay exactly `radius` away.
ConvexPolygon inflate(const OrientedRect& rect, double radius);
/// Convex regions only; holes are rejected.
ConvexPolygon inflate(const ConvexPolygon& shape, double radius);
PolygonRegion inflate(const PolygonRegion& region, double radius);

/// Inward offset of a convex ring by `radius` (exact half-plane offset).
ConvexPolygon shrink(const ConvexPolygon& shape, double radius);

/// Robot-centre configuration space: a convex boundary region the centre must stay
/// in, minus the union of convex blockers (inflated obstacles and objects).
struct FreeSpace
{
    ConvexPolygon boundary;
    std::vector<ConvexPolygon> blockers;
    std::uint64_t provenance = 0;  // objects present when built
    double tolerance = 1e-9;

    /// Inside the boundary (closed) and outside every blocker interior.
    [[nodiscard]] bool contains(Point2 p) const;
    /// No blocker interior crossed by ab. Endpoint containment is not checked.
    [[nodiscard]] bool visible(Point2 a, Point2 b) const;
};

struct Path
{
    double length = 0.0;
    std::vector<Point2> polyline;
};

/// Distances from one source to every graph vertex.
struct PathTree
{
    Point2 source;
    std::vector<double> dist;
    std::vector<int> parent;  // -1 for the source
};

/// Visibility graph over blocker vertices, restricted to bitangent edges.
class VisibilityGraph
{
public:
    explicit VisibilityGraph(const FreeSpace& free);

    [[nodiscard]] const FreeSpace& free() const { return free_; }
    [[nodiscard]] std::size_t vertex_count() const { return nodes_.size(); }
    [[nodiscard]] Point2 vertex(std::size_t i) const { return nodes_[i].p; }

    /// Single-source shortest distances. The source may sit on the workspace
    /// border (an exit) and is not containment-checked.
    [[nodiscard]] PathTree tree(Point2 source) const;
    /// Shortest distance from the tree source to `target`; +inf when unreachable.
    [[nodiscard]] double distance(const PathTree& tree, Point2 target) const;
    [[nodiscard]] std::optional<Path> path(const PathTree& tree, Point2 target) const;

private:
    struct Node
    {
        Point2 p;
        Point2 prev;
        Point2 next;
        std::vector<std::pair<int, double>> adj;
    };
    [[nodiscard]] bool tangent_at(const Node& n, Point2 other) const;
    [[nodiscard]] int best_last_vertex(const PathTree& tree, Point2 target, double* out) const;

    FreeSpace free_;
    std::vector<Node> nodes_;
};

/// Exact Euclidean shortest path among the blockers. Throws GeometryError when an
/// endpoint is outside `free`; returns nullopt when b is not reachable from a.
std::optional<Path> shortest_path(const FreeSpace& free, Point2 a, Point2 b);

/// Where a robot coming in through `exit` (a point on the workspace border) joins
/// the free space: the closest point of the free boundary, reached in a straight
/// step. nullopt when that point is blocked or the step crosses a blocker.
std::optional<Point2> entry_point(const FreeSpace& free, Point2 exit);

}  // namespace crp
