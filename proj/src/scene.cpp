#include "crp/scene.hpp"

#include <algorithm>
#include <numeric>

namespace crp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConvexPolygon convex_or_throw(const std::vector<Point2>& ring, const char* what)
{
    try
    {
        return ConvexPolygon(ring);
    }
    catch (const GeometryError& e)
    {
        throw SceneError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

Point2 point_at_arc(const std::vector<Point2>& ring, double s)
{
    double perim = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i)
    {
        perim += distance(ring[i], ring[(i + 1) % ring.size()]);
    }
    s = std::fmod(s, perim);
    if (s < 0.0)
    {
        s += perim;
    }
    for (std::size_t i = 0; i < ring.size(); ++i)
    {
        const Point2 a = ring[i];
        const Point2 b = ring[(i + 1) % ring.size()];
        const double len = distance(a, b);
        if (s <= len || i + 1 == ring.size())
        {
            return a + (b - a) * (std::min(s, len) / len);
        }
        s -= len;
    }
    return ring.front();
}

std::pair<double, double> arc_of(const std::vector<Point2>& ring, Point2 p)
{
    double best_d = kInf;
    double best_s = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i)
    {
        const Point2 a = ring[i];
        const Point2 b = ring[(i + 1) % ring.size()];
        const Point2 ab = b - a;
        const double len = norm(ab);
        const double t = std::clamp(dot(p - a, ab) / (len * len), 0.0, 1.0);
        const double d = distance(p, a + ab * t);
        if (d < best_d)
        {
            best_d = d;
            best_s = acc + t * len;
        }
        acc += len;
    }
    if (best_s >= acc)
    {
        best_s -= acc;
    }
    return {best_s, best_d};
}

double Scene::sample_step(ObjectIndex k) const
{
    if (grasp_sample_step)
    {
        return *grasp_sample_step;
    }
    const auto& r = objects[k].shape;
    return 2.0 * std::min(r.half_x, r.half_y) / 20.0;
}

double Scene::diameter() const
{
    Box2 box;
    for (const auto& p : workspace.outer)
    {
        box.expand(p);
    }
    return std::hypot(box.hi.x - box.lo.x, box.hi.y - box.lo.y);
}

void Scene::finalize()
{
    if (workspace.outer.size() < 3)
    {
        throw SceneError("workspace needs at least 3 vertices");
    }
    if (signed_area(workspace.outer) < 0.0)
    {
        std::reverse(workspace.outer.begin(), workspace.outer.end());
    }
    const ConvexPolygon outer = convex_or_throw(workspace.outer, "workspace");
    const double tol = tolerance();
    for (auto& h : workspace.holes)
    {
        if (signed_area(h) > 0.0)
        {
            std::reverse(h.begin(), h.end());
        }
        const ConvexPolygon hole = convex_or_throw(h, "workspace hole");
        for (const auto& p : hole.vertices())
        {
            if (!outer.contains_closed(p, tol))
            {
                throw SceneError("workspace hole leaves the outer ring");
            }
        }
    }
    for (auto& o : obstacles)
    {
        if (!o.holes.empty())
        {
            throw SceneError("obstacles must be convex polygons without holes");
        }
        if (signed_area(o.outer) < 0.0)
        {
            std::reverse(o.outer.begin(), o.outer.end());
        }
        convex_or_throw(o.outer, "obstacle");
    }
    if (!(robot_radius > 0.0) || !std::isfinite(robot_radius))
    {
        throw SceneError("robot_radius must be positive");
    }
    if (standoff() < robot_radius - tol)
    {
        throw SceneError("grasp_standoff must be at least robot_radius");
    }
    if (grasp_sample_step && !(*grasp_sample_step > 0.0))
    {
        throw SceneError("grasp_sample_step must be positive");
    }
    if (objects.size() > kMaxObjects)
    {
        throw SceneError("at most 64 objects are supported");
    }
    std::vector<ConvexPolygon> feet;
    for (auto& obj : objects)
    {
        auto& r = obj.shape;
        if (!(r.half_x > 0.0) || !(r.half_y > 0.0) || !std::isfinite(r.half_x) || !std::isfinite(r.half_y))
        {
            throw SceneError("object half extents must be positive");
        }
        if (!std::isfinite(r.center.x) || !std::isfinite(r.center.y) || !std::isfinite(r.angle))
        {
            throw SceneError("object pose must be finite");
        }
        r.angle = normalize_angle(r.angle);
        for (const auto& c : r.corners())
        {
            if (!outer.contains_closed(c, tol))
            {
                throw SceneError("object lies outside the workspace");
            }
        }
        feet.push_back(r.polygon());
    }
    for (std::size_t i = 0; i < feet.size(); ++i)
    {
        for (std::size_t j = i + 1; j < feet.size(); ++j)
        {
            if (objects[i].stack_height == objects[j].stack_height && feet[i].overlaps(feet[j], tol))
            {
                throw SceneError("overlapping objects must have distinct stack heights");
            }
        }
    }
    if (exits.empty())
    {
        throw SceneError("scene needs at least one exit");
    }
    const double perim = perimeter();
    for (auto& e : exits)
    {
        if (std::isnan(e.arc))
        {
            const auto [s, d] = arc_of(workspace.outer, e.position);
            if (d > 10.0 * tol)
            {
                throw SceneError("exit does not lie on the workspace border");
            }
            e.arc = s;
        }
        else
        {
            e.arc = std::fmod(e.arc, perim);
            if (e.arc < 0.0)
            {
                e.arc += perim;
            }
        }
        e.position = point_at_arc(workspace.outer, e.arc);
    }
}

double boundary_distance(const Scene& scene, ExitIndex a, ExitIndex b)
{
    if (a == b)
    {
        return 0.0;
    }
    const double d = std::abs(scene.exits.at(a).arc - scene.exits.at(b).arc);
    return std::min(d, scene.perimeter() - d);
}

SceneGeometry::SceneGeometry(const Scene& scene) : scene_(scene)
{
    const double r = scene_.robot_radius;
    inner_ = shrink(ConvexPolygon(scene_.workspace.outer), r);
    auto add_static = [&](const std::vector<Point2>& ring) {
        ConvexPolygon raw(ring);
        static_blockers_.push_back(inflate(raw, r));
        raw_obstacles_.push_back(std::move(raw));
    };
    for (const auto& o : scene_.obstacles)
    {
        add_static(o.outer);
    }
    for (const auto& h : scene_.workspace.holes)
    {
        add_static(h);
    }
    const std::size_t n = scene_.objects.size();
    const double standoff = scene_.standoff();
    poses_.resize(n);
    for (ObjectIndex k = 0; k < n; ++k)
    {
        const auto& rect = scene_.objects[k].shape;
        footprints_.push_back(rect.polygon());
        inflated_objects_.push_back(inflate(rect, r));
        const auto corners = rect.corners();
        const double step = scene_.sample_step(k);
        for (int edge = 0; edge < 4; ++edge)
        {
            const Point2 a = corners[static_cast<std::size_t>(edge)];
            const Point2 b = corners[static_cast<std::size_t>((edge + 1) % 4)];
            const Point2 e = b - a;
            const double len = norm(e);
            const Point2 normal{e.y / len, -e.x / len};
            const int count = std::max(1, static_cast<int>(std::lround(len / step)));
            for (int j = 0; j < count; ++j)
            {
                const Point2 handle = a + e * ((j + 0.5) / count);
                poses_[k].push_back(GraspPose{k, handle + normal * standoff, edge, handle});
            }
        }
    }
    covers_.assign(n, 0);
    const double tol = scene_.tolerance();
    for (ObjectIndex k = 0; k < n; ++k)
    {
        for (ObjectIndex j = 0; j < n; ++j)
        {
            if (j != k && scene_.objects[j].stack_height > scene_.objects[k].stack_height &&
                footprints_[j].overlaps(footprints_[k], tol))
            {
                covers_[k] |= std::uint64_t{1} << j;
            }
        }
    }
}

FreeSpace SceneGeometry::free_space(RemainingSet present) const
{
    FreeSpace f;
    f.boundary = inner_;
    f.blockers = static_blockers_;
    for (ObjectIndex k : present.indices())
    {
        f.blockers.push_back(inflated_objects_[k]);
    }
    f.provenance = present.bits();
    f.tolerance = scene_.tolerance();
    return f;
}

FreeSpace SceneGeometry::static_free_space() const
{
    FreeSpace f;
    f.boundary = ConvexPolygon(scene_.workspace.outer);
    f.blockers = raw_obstacles_;
    f.tolerance = scene_.tolerance();
    return f;
}

bool SceneGeometry::covered(RemainingSet remaining, ObjectIndex k) const
{
    return (covers_[k] & remaining.bits()) != 0;
}

std::vector<GraspCandidate> graspable(const Scene& scene, RemainingSet remaining, ExitIndex from_exit)
{
    const SceneGeometry geo(scene);
    const FreeSpace free = geo.free_space(remaining);
    const VisibilityGraph graph(free);
    const Point2 exit = scene.exits.at(from_exit).position;
    const auto entry = entry_point(free, exit);
    std::vector<GraspCandidate> out;
    if (!entry)
    {
        return out;
    }
    const double step = distance(exit, *entry);
    const PathTree tree = graph.tree(*entry);
    for (ObjectIndex k : remaining.indices())
    {
        if (geo.covered(remaining, k))
        {
            continue;
        }
        GraspCandidate best{k, {}, kInf};
        for (const auto& pose : geo.pose_samples(k))
        {
            if (!free.contains(pose.robot_position))
            {
                continue;
            }
            const double d = step + graph.distance(tree, pose.robot_position);
            if (d < best.approach_cost)
            {
                best.pose = pose;
                best.approach_cost = d;
            }
        }
        if (std::isfinite(best.approach_cost))
        {
            out.push_back(best);
        }
    }
    return out;
}

std::vector<ExitIndex> voronoi_labels(const Scene& scene)
{
    if (scene.exits.empty())
    {
        throw SceneError("voronoi_labels needs at least one exit");
    }
    const SceneGeometry geo(scene);
    const FreeSpace free = geo.static_free_space();
    const VisibilityGraph graph(free);
    std::vector<PathTree> trees;
    for (const auto& e : scene.exits)
    {
        trees.push_back(graph.tree(e.position));
    }
    std::vector<ExitIndex> labels(scene.objects.size(), 0);
    for (ObjectIndex k = 0; k < scene.objects.size(); ++k)
    {
        const Point2 c = scene.objects[k].shape.center;
        double best = kInf;
        if (free.contains(c))
        {
            for (ExitIndex e = 0; e < trees.size(); ++e)
            {
                const double d = graph.distance(trees[e], c);
                if (d < best)
                {
                    best = d;
                    labels[k] = e;
                }
            }
        }
        if (!std::isfinite(best))
        {
            throw SceneError("object centre unreachable from every exit");
        }
    }
    return labels;
}

std::vector<std::vector<ObjectIndex>> clusters(const Scene& scene)
{
    const std::size_t n = scene.objects.size();
    std::vector<ConvexPolygon> grown;
    for (const auto& o : scene.objects)
    {
        grown.push_back(inflate(o.shape, 2.0 * scene.robot_radius));
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
        {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    const double tol = scene.tolerance();
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = i + 1; j < n; ++j)
        {
            if (grown[i].overlaps(grown[j], tol))
            {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<std::vector<ObjectIndex>> groups;
    std::vector<int> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i)
    {
        const std::size_t root = find(i);
        if (slot[root] < 0)
        {
            slot[root] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(slot[root])].push_back(i);
    }
    return groups;
}

}  // namespace crp
