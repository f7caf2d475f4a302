#include "crp/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <queue>

namespace crp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Point2> convex_hull(std::vector<Point2> pts)
{
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3)
    {
        return pts;
    }
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0)
        {
            --k;
        }
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i)
    {
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i - 1] - hull[k - 2]) <= 0)
        {
            --k;
        }
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);
    return hull;
}

double ring_perimeter(std::span<const Point2> ring)
{
    double total = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i)
    {
        total += distance(ring[i], ring[(i + 1) % ring.size()]);
    }
    return total;
}

}  // namespace

double signed_area(std::span<const Point2> ring)
{
    double twice = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i)
    {
        twice += cross(ring[i], ring[(i + 1) % ring.size()]);
    }
    return 0.5 * twice;
}

double normalize_angle(double angle)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(angle, two_pi);
    if (a < 0.0)
    {
        a += two_pi;
    }
    if (a >= two_pi)
    {
        a = 0.0;
    }
    return a;
}

ConvexPolygon::ConvexPolygon(std::vector<Point2> vertices)
{
    if (vertices.size() < 3)
    {
        throw GeometryError("convex polygon needs at least 3 vertices");
    }
    for (const auto& p : vertices)
    {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
        {
            throw GeometryError("non-finite polygon vertex");
        }
    }
    if (signed_area(vertices) < 0.0)
    {
        std::reverse(vertices.begin(), vertices.end());
    }
    Box2 box;
    for (const auto& p : vertices)
    {
        box.expand(p);
    }
    const double scale = std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y);
    if (!(scale > 0.0))
    {
        throw GeometryError("degenerate polygon");
    }
    const double eps = 1e-12 * scale * scale;

    // Drop duplicate and collinear vertices.
    bool changed = true;
    while (changed && vertices.size() >= 3)
    {
        changed = false;
        for (std::size_t i = 0; i < vertices.size(); ++i)
        {
            const Point2 a = vertices[(i + vertices.size() - 1) % vertices.size()];
            const Point2 b = vertices[i];
            const Point2 c = vertices[(i + 1) % vertices.size()];
            if (std::abs(cross(b - a, c - b)) <= eps && dot(b - a, c - b) >= 0.0)
            {
                vertices.erase(vertices.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
            if (distance(a, b) <= 1e-12 * scale)
            {
                vertices.erase(vertices.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    if (vertices.size() < 3 || signed_area(vertices) <= eps)
    {
        throw GeometryError("degenerate (zero-area) polygon");
    }
    for (std::size_t i = 0; i < vertices.size(); ++i)
    {
        const Point2 a = vertices[i];
        const Point2 b = vertices[(i + 1) % vertices.size()];
        const Point2 c = vertices[(i + 2) % vertices.size()];
        if (cross(b - a, c - b) < -eps)
        {
            throw GeometryError("polygon is not convex");
        }
    }
    vertices_ = std::move(vertices);
    bounds_ = box;
    normals_.reserve(vertices_.size());
    offsets_.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i)
    {
        const Point2 e = vertices_[(i + 1) % vertices_.size()] - vertices_[i];
        const double len = norm(e);
        const Point2 n{e.y / len, -e.x / len};
        normals_.push_back(n);
        offsets_.push_back(dot(n, vertices_[i]));
    }
}

double ConvexPolygon::area() const { return signed_area(vertices_); }

double ConvexPolygon::perimeter() const { return ring_perimeter(vertices_); }

Point2 ConvexPolygon::centroid() const
{
    double a = 0.0;
    Point2 c;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
    {
        const Point2 p = vertices_[i];
        const Point2 q = vertices_[(i + 1) % vertices_.size()];
        const double w = cross(p, q);
        a += w;
        c = c + (p + q) * w;
    }
    return c * (1.0 / (3.0 * a));
}

bool ConvexPolygon::contains_strict(Point2 p, double tol) const
{
    if (p.x <= bounds_.lo.x || p.x >= bounds_.hi.x || p.y <= bounds_.lo.y || p.y >= bounds_.hi.y)
    {
        return false;
    }
    for (std::size_t i = 0; i < normals_.size(); ++i)
    {
        if (dot(normals_[i], p) >= offsets_[i] - tol)
        {
            return false;
        }
    }
    return true;
}

bool ConvexPolygon::contains_closed(Point2 p, double tol) const
{
    for (std::size_t i = 0; i < normals_.size(); ++i)
    {
        if (dot(normals_[i], p) > offsets_[i] + tol)
        {
            return false;
        }
    }
    return true;
}

bool ConvexPolygon::segment_crosses_interior(Point2 a, Point2 b, double tol) const
{
    if (std::max(a.x, b.x) <= bounds_.lo.x || std::min(a.x, b.x) >= bounds_.hi.x ||
        std::max(a.y, b.y) <= bounds_.lo.y || std::min(a.y, b.y) >= bounds_.hi.y)
    {
        return false;
    }
    const Point2 d = b - a;
    double t0 = 0.0;
    double t1 = 1.0;
    for (std::size_t i = 0; i < normals_.size(); ++i)
    {
        const double num = (offsets_[i] - tol) - dot(normals_[i], a);
        const double den = dot(normals_[i], d);
        if (den == 0.0)
        {
            if (num <= 0.0)
            {
                return false;
            }
            continue;
        }
        const double t = num / den;
        if (den > 0.0)
        {
            t1 = std::min(t1, t);
        }
        else
        {
            t0 = std::max(t0, t);
        }
        if (t0 >= t1)
        {
            return false;
        }
    }
    return (t1 - t0) * norm(d) > tol;
}

bool ConvexPolygon::overlaps(const ConvexPolygon& other, double tol) const
{
    if (!bounds_.overlaps(other.bounds_, -tol))
    {
        return false;
    }
    auto separated = [tol](const ConvexPolygon& p, const ConvexPolygon& q) {
        for (std::size_t i = 0; i < p.normals_.size(); ++i)
        {
            double qmin = kInf;
            for (const auto& v : q.vertices_)
            {
                qmin = std::min(qmin, dot(p.normals_[i], v));
            }
            if (qmin >= p.offsets_[i] - tol)
            {
                return true;
            }
        }
        return false;
    };
    return !separated(*this, other) && !separated(other, *this);
}

Point2 ConvexPolygon::closest_point(Point2 p) const
{
    if (contains_closed(p, 0.0))
    {
        return p;
    }
    Point2 best = vertices_.front();
    double best_d = kInf;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
    {
        const Point2 a = vertices_[i];
        const Point2 b = vertices_[(i + 1) % vertices_.size()];
        const Point2 ab = b - a;
        const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
        const Point2 q = a + ab * t;
        const double d = distance(p, q);
        if (d < best_d)
        {
            best_d = d;
            best = q;
        }
    }
    return best;
}

std::vector<Point2> OrientedRect::corners() const
{
    const std::vector<Point2> local{{half_x, -half_y}, {half_x, half_y}, {-half_x, half_y}, {-half_x, -half_y}};
    std::vector<Point2> out;
    out.reserve(4);
    for (const auto& p : local)
    {
        out.push_back(center + rotate(p, angle));
    }
    return out;
}

double PolygonRegion::area() const
{
    double a = std::abs(signed_area(outer));
    for (const auto& h : holes)
    {
        a -= std::abs(signed_area(h));
    }
    return a;
}

double PolygonRegion::perimeter() const { return ring_perimeter(outer); }

std::vector<Point2> disc_polygon(double radius, double angle)
{
    const double circum = radius / std::cos(std::numbers::pi / kDiscSides);
    std::vector<Point2> pts;
    pts.reserve(kDiscSides);
    for (int k = 0; k < kDiscSides; ++k)
    {
        const double t = angle + std::numbers::pi / kDiscSides + 2.0 * std::numbers::pi * k / kDiscSides;
        pts.push_back({circum * std::cos(t), circum * std::sin(t)});
    }
    return pts;
}

namespace {

ConvexPolygon minkowski_with_disc(const std::vector<Point2>& shape, double radius, double angle)
{
    if (radius < 0.0)
    {
        throw GeometryError("negative inflation radius");
    }
    if (radius == 0.0)
    {
        return ConvexPolygon(shape);
    }
    std::vector<Point2> sums;
    const auto disc = disc_polygon(radius, angle);
    sums.reserve(shape.size() * disc.size());
    for (const auto& p : shape)
    {
        for (const auto& d : disc)
        {
            sums.push_back(p + d);
        }
    }
    return ConvexPolygon(convex_hull(std::move(sums)));
}

}  // namespace

ConvexPolygon inflate(const OrientedRect& rect, double radius)
{
    if (!(rect.half_x > 0.0) || !(rect.half_y > 0.0))
    {
        throw GeometryError("degenerate rectangle");
    }
    return minkowski_with_disc(rect.corners(), radius, rect.angle);
}

ConvexPolygon inflate(const ConvexPolygon& shape, double radius)
{
    return minkowski_with_disc(shape.vertices(), radius, 0.0);
}

PolygonRegion inflate(const PolygonRegion& region, double radius)
{
    if (!region.holes.empty())
    {
        throw GeometryError("inflate: regions with holes are not supported");
    }
    const ConvexPolygon out = inflate(ConvexPolygon(region.outer), radius);
    return PolygonRegion{out.vertices(), {}};
}

ConvexPolygon shrink(const ConvexPolygon& shape, double radius)
{
    if (radius < 0.0)
    {
        throw GeometryError("negative shrink radius");
    }
    std::vector<Point2> poly = shape.vertices();
    const auto& v = shape.vertices();
    for (std::size_t i = 0; i < v.size() && !poly.empty(); ++i)
    {
        const Point2 e = v[(i + 1) % v.size()] - v[i];
        const Point2 n = Point2{e.y, -e.x} * (1.0 / norm(e));
        const double off = dot(n, v[i]) - radius;
        std::vector<Point2> next;
        for (std::size_t j = 0; j < poly.size(); ++j)
        {
            const Point2 p = poly[j];
            const Point2 q = poly[(j + 1) % poly.size()];
            const double fp = dot(n, p) - off;
            const double fq = dot(n, q) - off;
            if (fp <= 0.0)
            {
                next.push_back(p);
            }
            if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0))
            {
                next.push_back(p + (q - p) * (fp / (fp - fq)));
            }
        }
        poly = std::move(next);
    }
    if (poly.size() < 3)
    {
        throw GeometryError("shrink: region vanishes");
    }
    return ConvexPolygon(std::move(poly));
}

std::optional<Point2> entry_point(const FreeSpace& free, Point2 exit)
{
    const Point2 q = free.boundary.closest_point(exit);
    if (!free.contains(q) || !free.visible(exit, q))
    {
        return std::nullopt;
    }
    return q;
}

bool FreeSpace::contains(Point2 p) const
{
    if (!boundary.contains_closed(p, tolerance))
    {
        return false;
    }
    for (const auto& b : blockers)
    {
        if (b.contains_strict(p, tolerance))
        {
            return false;
        }
    }
    return true;
}

bool FreeSpace::visible(Point2 a, Point2 b) const
{
    for (const auto& blk : blockers)
    {
        if (blk.segment_crosses_interior(a, b, tolerance))
        {
            return false;
        }
    }
    return true;
}

VisibilityGraph::VisibilityGraph(const FreeSpace& free) : free_(free)
{
    for (std::size_t bi = 0; bi < free_.blockers.size(); ++bi)
    {
        const auto& poly = free_.blockers[bi];
        const auto& vs = poly.vertices();
        for (std::size_t i = 0; i < vs.size(); ++i)
        {
            const Point2 p = vs[i];
            if (!free_.boundary.contains_closed(p, free_.tolerance))
            {
                continue;
            }
            bool buried = false;
            for (std::size_t bj = 0; bj < free_.blockers.size() && !buried; ++bj)
            {
                buried = bj != bi && free_.blockers[bj].contains_strict(p, free_.tolerance);
            }
            if (buried)
            {
                continue;
            }
            nodes_.push_back(Node{p, vs[(i + vs.size() - 1) % vs.size()], vs[(i + 1) % vs.size()], {}});
        }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
        for (std::size_t j = i + 1; j < nodes_.size(); ++j)
        {
            if (!tangent_at(nodes_[i], nodes_[j].p) || !tangent_at(nodes_[j], nodes_[i].p))
            {
                continue;
            }
            if (!free_.visible(nodes_[i].p, nodes_[j].p))
            {
                continue;
            }
            const double w = crp::distance(nodes_[i].p, nodes_[j].p);
            nodes_[i].adj.emplace_back(static_cast<int>(j), w);
            nodes_[j].adj.emplace_back(static_cast<int>(i), w);
        }
    }
}

bool VisibilityGraph::tangent_at(const Node& n, Point2 other) const
{
    const Point2 d = other - n.p;
    const double dl = norm(d);
    if (dl == 0.0)
    {
        return true;
    }
    const Point2 a = n.prev - n.p;
    const Point2 b = n.next - n.p;
    const double c1 = cross(d, a) / (dl * norm(a));
    const double c2 = cross(d, b) / (dl * norm(b));
    constexpr double eps = 1e-10;
    return !((c1 < -eps && c2 > eps) || (c1 > eps && c2 < -eps));
}

PathTree VisibilityGraph::tree(Point2 source) const
{
    PathTree t{source, std::vector<double>(nodes_.size(), kInf), std::vector<int>(nodes_.size(), -1)};
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
        if (tangent_at(nodes_[i], source) && free_.visible(source, nodes_[i].p))
        {
            t.dist[i] = crp::distance(source, nodes_[i].p);
            heap.emplace(t.dist[i], static_cast<int>(i));
        }
    }
    while (!heap.empty())
    {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > t.dist[static_cast<std::size_t>(u)])
        {
            continue;
        }
        for (const auto& [v, w] : nodes_[static_cast<std::size_t>(u)].adj)
        {
            const double nd = d + w;
            if (nd < t.dist[static_cast<std::size_t>(v)])
            {
                t.dist[static_cast<std::size_t>(v)] = nd;
                t.parent[static_cast<std::size_t>(v)] = u;
                heap.emplace(nd, v);
            }
        }
    }
    return t;
}

int VisibilityGraph::best_last_vertex(const PathTree& tree, Point2 target, double* out) const
{
    if (free_.visible(tree.source, target))
    {
        *out = crp::distance(tree.source, target);
        return -1;
    }
    std::vector<std::pair<double, int>> cand;
    cand.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
        if (tree.dist[i] < kInf && tangent_at(nodes_[i], target))
        {
            cand.emplace_back(tree.dist[i] + crp::distance(nodes_[i].p, target), static_cast<int>(i));
        }
    }
    auto cmp = [](const auto& a, const auto& b) { return a > b; };
    std::make_heap(cand.begin(), cand.end(), cmp);
    while (!cand.empty())
    {
        std::pop_heap(cand.begin(), cand.end(), cmp);
        const auto [key, idx] = cand.back();
        cand.pop_back();
        if (free_.visible(nodes_[static_cast<std::size_t>(idx)].p, target))
        {
            *out = key;
            return idx;
        }
    }
    *out = kInf;
    return -2;
}

double VisibilityGraph::distance(const PathTree& tree, Point2 target) const
{
    double d = kInf;
    (void)best_last_vertex(tree, target, &d);
    return d;
}

std::optional<Path> VisibilityGraph::path(const PathTree& tree, Point2 target) const
{
    double d = kInf;
    int last = best_last_vertex(tree, target, &d);
    if (last == -2)
    {
        return std::nullopt;
    }
    Path p;
    p.length = d;
    p.polyline.push_back(target);
    while (last >= 0)
    {
        p.polyline.push_back(nodes_[static_cast<std::size_t>(last)].p);
        last = tree.parent[static_cast<std::size_t>(last)];
    }
    p.polyline.push_back(tree.source);
    std::reverse(p.polyline.begin(), p.polyline.end());
    return p;
}

std::optional<Path> shortest_path(const FreeSpace& free, Point2 a, Point2 b)
{
    if (!free.contains(a) || !free.contains(b))
    {
        throw GeometryError("shortest_path: endpoint outside free space");
    }
    const VisibilityGraph graph(free);
    return graph.path(graph.tree(a), b);
}

}  // namespace crp
