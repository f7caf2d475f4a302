#pragma once

#include "crp/cost_oracle.hpp"
#include "crp/roadmap.hpp"
#include "crp/scene.hpp"

#include <memory>
#include <optional>
#include <shared_mutex>
#include <unordered_map>

namespace crp {

enum class PathBackend
{
    visibility,
    roadmap,
};

struct GeometricOracleOptions
{
    PathBackend backend = PathBackend::visibility;
    std::size_t roadmap_samples = 2000;
    RadiusRule radius_rule;
    std::uint64_t roadmap_seed = 1;
    /// Cached states are dropped wholesale once this many are stored.
    std::size_t cache_limit = 400000;
};

/// Removal costs from scene geometry. For remaining set S,
///   c(S, e, k, j) = min over entry exit x and grasp pose p of
///                   boundary_distance(e, x) + d_S(x, p) + d_S(p, j)
/// with d_S the robot-centre shortest path in FreeSpace(S). Queries with e == j are
/// answered without building the other exits' path trees unless a detour through
/// them could be shorter.
class GeometricCostOracle : public CostOracle
{
public:
    explicit GeometricCostOracle(Scene scene, GeometricOracleOptions options = {});

    [[nodiscard]] std::size_t object_count() const override { return scene_.objects.size(); }
    [[nodiscard]] std::size_t exit_count() const override { return scene_.exits.size(); }
    [[nodiscard]] RemainingSet accessible(RemainingSet remaining, ExitIndex from) const override;
    [[nodiscard]] double removal_cost(RemainingSet remaining, ExitIndex from, ObjectIndex object,
                                      ExitIndex to) const override;
    [[nodiscard]] double boundary_distance(ExitIndex a, ExitIndex b) const override;
    [[nodiscard]] double grasp_time() const override { return scene_.grasp_time_constant; }
    [[nodiscard]] std::vector<std::vector<ObjectIndex>> object_clusters() const override;
    [[nodiscard]] double cluster_anchor_distance(const std::vector<ObjectIndex>& cluster,
                                                 ExitIndex exit) const override;

    /// Grasp pose realizing removal_cost(S, e, k, j), if feasible.
    [[nodiscard]] std::optional<GraspPose> best_pose(RemainingSet remaining, ExitIndex from, ObjectIndex object,
                                                     ExitIndex to) const;

    [[nodiscard]] const Scene& scene() const { return scene_; }
    [[nodiscard]] const SceneGeometry& geometry() const { return geometry_; }
    [[nodiscard]] std::size_t computed_states() const;

private:
    struct StateCosts
    {
        RemainingSet accessible;
        std::vector<double> cost;  // full: (k * E + e) * E + j; single exit: k
        std::vector<int> pose;     // index into pose_samples(k), -1 when infeasible
    };
    struct PathContext;
    static constexpr std::uint32_t kFull = ~std::uint32_t{0};

    [[nodiscard]] std::shared_ptr<const StateCosts> find(RemainingSet remaining, std::uint32_t mode) const;
    [[nodiscard]] std::shared_ptr<const StateCosts> lookup(RemainingSet remaining, std::uint32_t mode) const;
    [[nodiscard]] std::shared_ptr<const StateCosts> compute(RemainingSet remaining, std::uint32_t mode) const;
    [[nodiscard]] std::shared_ptr<PathContext> context(RemainingSet remaining) const;
    [[nodiscard]] std::uint32_t mode_for(ExitIndex e, ExitIndex j) const;

    struct KeyHash
    {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint32_t>& k) const noexcept
        {
            return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ULL + k.second);
        }
    };

    Scene scene_;
    GeometricOracleOptions options_;
    SceneGeometry geometry_;
    std::vector<std::vector<double>> bd_;
    std::vector<std::vector<std::size_t>> pose_order_;  // per object, by distance to the nearest exit
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::pair<std::uint64_t, std::uint32_t>, std::shared_ptr<const StateCosts>, KeyHash>
        cache_;
    mutable std::vector<std::shared_ptr<PathContext>> recent_;  // small LRU of path structures
};

}  // namespace crp
