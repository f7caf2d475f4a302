#pragma once

#include "crp/geometry.hpp"
#include "crp/types.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace crp {

class SceneError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Exit
{
    Point2 position;
    /// Arc-length position along the workspace outer ring, measured from its first
    /// vertex counterclockwise. NaN means "derive from position".
    double arc = std::numeric_limits<double>::quiet_NaN();
};

struct SceneObject
{
    OrientedRect shape;
    int stack_height = 0;
};

struct Scene
{
    PolygonRegion workspace;
    std::vector<PolygonRegion> obstacles;
    std::vector<SceneObject> objects;
    std::vector<Exit> exits;
    double robot_radius = 0.2;
    std::optional<double> grasp_standoff;     // default: robot_radius
    std::optional<double> grasp_sample_step;  // default: 1/20 of each object's shorter side
    double grasp_time_constant = 0.0;

    /// Normalizes orientation and angles, fills exit arc/position, and checks the
    /// scene invariants. Throws SceneError.
    void finalize();

    [[nodiscard]] std::size_t object_count() const { return objects.size(); }
    [[nodiscard]] double standoff() const { return grasp_standoff.value_or(robot_radius); }
    [[nodiscard]] double sample_step(ObjectIndex k) const;
    [[nodiscard]] double diameter() const;
    [[nodiscard]] double tolerance() const { return 1e-7 * diameter(); }
    [[nodiscard]] double perimeter() const { return workspace.perimeter(); }
    [[nodiscard]] RemainingSet all_objects() const { return RemainingSet::all(objects.size()); }
};

/// Point at arc length `s` along a closed ring.
Point2 point_at_arc(const std::vector<Point2>& ring, double s);
/// Arc length of the ring point closest to p, and the distance to it.
std::pair<double, double> arc_of(const std::vector<Point2>& ring, Point2 p);

/// Shortest travel along the workspace border between two exits.
double boundary_distance(const Scene& scene, ExitIndex a, ExitIndex b);

/// Exit whose geodesic distance (static obstacles only, zero clearance) to each
/// object centre is smallest; ties go to the lower exit index.
std::vector<ExitIndex> voronoi_labels(const Scene& scene);

struct GraspPose
{
    ObjectIndex object = 0;
    Point2 robot_position;
    int approach_edge = 0;
    Point2 handle_point;
};

struct GraspCandidate
{
    ObjectIndex object = 0;
    GraspPose pose;
    double approach_cost = 0.0;
};

/// Precomputed inflated shapes and grasp samples for one scene.
class SceneGeometry
{
public:
    explicit SceneGeometry(const Scene& scene);

    [[nodiscard]] const Scene& scene() const { return scene_; }
    /// Free space with the objects of `present` as blockers.
    [[nodiscard]] FreeSpace free_space(RemainingSet present) const;
    /// Free space for voronoi labelling: static obstacles, zero clearance.
    [[nodiscard]] FreeSpace static_free_space() const;
    [[nodiscard]] const std::vector<GraspPose>& pose_samples(ObjectIndex k) const { return poses_[k]; }
    [[nodiscard]] const ConvexPolygon& footprint(ObjectIndex k) const { return footprints_[k]; }
    [[nodiscard]] const ConvexPolygon& inflated(ObjectIndex k) const { return inflated_objects_[k]; }
    /// True when a remaining object with a greater stack height overlaps k.
    [[nodiscard]] bool covered(RemainingSet remaining, ObjectIndex k) const;

private:
    Scene scene_;
    ConvexPolygon inner_;
    std::vector<ConvexPolygon> static_blockers_;
    std::vector<ConvexPolygon> raw_obstacles_;
    std::vector<ConvexPolygon> footprints_;
    std::vector<ConvexPolygon> inflated_objects_;
    std::vector<std::vector<GraspPose>> poses_;
    std::vector<std::uint64_t> covers_;  // bit j set when j overlaps k and sits higher
};

/// Graspable objects of `remaining` approached from `from_exit`, with the cheapest
/// reachable pose for each.
std::vector<GraspCandidate> graspable(const Scene& scene, RemainingSet remaining, ExitIndex from_exit);

/// Connected components of "footprints inflated by the robot diameter intersect".
std::vector<std::vector<ObjectIndex>> clusters(const Scene& scene);

}  // namespace crp
