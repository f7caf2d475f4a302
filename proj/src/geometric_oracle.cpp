#include "crp/geometric_oracle.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <optional>

namespace crp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Scene finalized(Scene s)
{
    s.finalize();
    return s;
}

}  // namespace

GeometricCostOracle::GeometricCostOracle(Scene scene, GeometricOracleOptions options)
    : scene_(finalized(std::move(scene))), options_(options), geometry_(scene_)
{
    const std::size_t e = scene_.exits.size();
    bd_.assign(e, std::vector<double>(e, 0.0));
    for (ExitIndex a = 0; a < e; ++a)
    {
        for (ExitIndex b = 0; b < e; ++b)
        {
            bd_[a][b] = crp::boundary_distance(scene_, a, b);
        }
    }
    for (ObjectIndex k = 0; k < scene_.objects.size(); ++k)
    {
        const auto& poses = geometry_.pose_samples(k);
        std::vector<double> key(poses.size(), kInf);
        for (std::size_t i = 0; i < poses.size(); ++i)
        {
            for (const auto& ex : scene_.exits)
            {
                key[i] = std::min(key[i], distance(ex.position, poses[i].robot_position));
            }
        }
        std::vector<std::size_t> order(poses.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
        pose_order_.push_back(std::move(order));
    }
}

double GeometricCostOracle::boundary_distance(ExitIndex a, ExitIndex b) const { return bd_.at(a).at(b); }

std::size_t GeometricCostOracle::computed_states() const
{
    std::shared_lock lock(mutex_);
    return cache_.size();
}

struct GeometricCostOracle::PathContext
{
    std::uint64_t key = 0;
    FreeSpace free;
    std::mutex mutex;
    std::optional<VisibilityGraph> graph;
    std::vector<std::optional<PathTree>> trees;
    std::vector<std::optional<Roadmap>> maps;
    std::vector<std::optional<Point2>> entries;
};

std::shared_ptr<GeometricCostOracle::PathContext> GeometricCostOracle::context(RemainingSet remaining) const
{
    constexpr std::size_t kRecent = 4;
    std::unique_lock lock(mutex_);
    for (std::size_t i = 0; i < recent_.size(); ++i)
    {
        if (recent_[i]->key == remaining.bits())
        {
            auto ctx = recent_[i];
            recent_.erase(recent_.begin() + static_cast<std::ptrdiff_t>(i));
            recent_.insert(recent_.begin(), ctx);
            return ctx;
        }
    }
    auto ctx = std::make_shared<PathContext>();
    ctx->key = remaining.bits();
    ctx->free = geometry_.free_space(remaining);
    ctx->trees.resize(scene_.exits.size());
    ctx->maps.resize(scene_.exits.size());
    for (const auto& e : scene_.exits)
    {
        ctx->entries.push_back(entry_point(ctx->free, e.position));
    }
    recent_.insert(recent_.begin(), ctx);
    if (recent_.size() > kRecent)
    {
        recent_.pop_back();
    }
    return ctx;
}

std::uint32_t GeometricCostOracle::mode_for(ExitIndex e, ExitIndex j) const
{
    if (scene_.exits.size() == 1 || e != j)
    {
        return kFull;
    }
    return static_cast<std::uint32_t>(e);
}

std::shared_ptr<const GeometricCostOracle::StateCosts> GeometricCostOracle::find(RemainingSet remaining,
                                                                                 std::uint32_t mode) const
{
    std::shared_lock lock(mutex_);
    auto it = cache_.find({remaining.bits(), mode});
    return it == cache_.end() ? nullptr : it->second;
}

std::shared_ptr<const GeometricCostOracle::StateCosts> GeometricCostOracle::lookup(RemainingSet remaining,
                                                                                   std::uint32_t mode) const
{
    if (auto hit = find(remaining, mode))
    {
        return hit;
    }
    auto entry = compute(remaining, mode);
    std::unique_lock lock(mutex_);
    if (cache_.size() >= options_.cache_limit)
    {
        cache_.clear();
    }
    return cache_.emplace(std::make_pair(remaining.bits(), mode), std::move(entry)).first->second;
}

std::shared_ptr<const GeometricCostOracle::StateCosts> GeometricCostOracle::compute(RemainingSet remaining,
                                                                                    std::uint32_t mode) const
{
    const std::size_t n = scene_.objects.size();
    const std::size_t ne = scene_.exits.size();
    std::vector<std::pair<ExitIndex, ExitIndex>> pairs;
    if (mode == kFull)
    {
        for (ExitIndex e = 0; e < ne; ++e)
        {
            for (ExitIndex j = 0; j < ne; ++j)
            {
                pairs.emplace_back(e, j);
            }
        }
    }
    else
    {
        pairs.emplace_back(mode, mode);
    }
    const std::size_t np = pairs.size();
    auto out = std::make_shared<StateCosts>();
    out->cost.assign(n * np, kInf);
    out->pose.assign(n * np, -1);

    const auto ctx = context(remaining);
    std::lock_guard ctx_lock(ctx->mutex);
    const FreeSpace& free = ctx->free;
    // Path structures are built on first use: states whose objects are all covered
    // or boxed in never need them.
    auto dist = [&](ExitIndex x, Point2 p) -> double {
        const auto& entry = ctx->entries[x];
        if (!entry)
        {
            return kInf;
        }
        const double step = distance(scene_.exits[x].position, *entry);
        if (options_.backend == PathBackend::visibility)
        {
            if (!ctx->graph)
            {
                ctx->graph.emplace(free);
            }
            if (!ctx->trees[x])
            {
                ctx->trees[x] = ctx->graph->tree(*entry);
            }
            return step + ctx->graph->distance(*ctx->trees[x], p);
        }
        if (!ctx->maps[x])
        {
            ctx->maps[x] = Roadmap::build(free, *entry, options_.roadmap_samples, options_.radius_rule,
                                          options_.roadmap_seed);
        }
        return step + ctx->maps[x]->query_cost(p);
    };

    constexpr double kUnknown = -1.0;
    std::vector<double> lb(ne);
    std::vector<double> a(ne);
    auto get = [&](ExitIndex x, Point2 p) {
        if (a[x] == kUnknown)
        {
            a[x] = dist(x, p);
        }
        return a[x];
    };
    for (ObjectIndex k : remaining.indices())
    {
        if (geometry_.covered(remaining, k))
        {
            continue;
        }
        const auto& poses = geometry_.pose_samples(k);
        double* best = &out->cost[k * np];
        int* best_pose = &out->pose[k * np];
        std::vector<std::size_t> valid;
        for (std::size_t idx : pose_order_[k])
        {
            const Point2 p = poses[idx].robot_position;
            for (ExitIndex x = 0; x < ne; ++x)
            {
                lb[x] = distance(scene_.exits[x].position, p);
            }
            auto pair_bound = [&](ExitIndex e, ExitIndex j) {
                double in = kInf;
                for (ExitIndex x = 0; x < ne; ++x)
                {
                    in = std::min(in, bd_[e][x] + lb[x]);
                }
                return in + lb[j];
            };
            bool useful = false;
            for (std::size_t q = 0; q < np && !useful; ++q)
            {
                useful = pair_bound(pairs[q].first, pairs[q].second) < best[q];
            }
            if (!useful || !free.contains(p))
            {
                continue;
            }
            valid.push_back(idx);
            std::fill(a.begin(), a.end(), kUnknown);
            for (std::size_t q = 0; q < np; ++q)
            {
                const auto [e, j] = pairs[q];
                if (pair_bound(e, j) >= best[q])
                {
                    continue;
                }
                const double aj = get(j, p);
                if (aj == kInf)
                {
                    continue;
                }
                // Entering at e itself first, so detours through other exits are
                // usually pruned by the bound before their trees are needed.
                for (std::size_t t = 0; t < ne; ++t)
                {
                    const ExitIndex x = t == 0 ? e : (t <= e ? t - 1 : t);
                    if (bd_[e][x] + lb[x] + aj >= best[q])
                    {
                        continue;
                    }
                    const double v = bd_[e][x] + get(x, p) + aj;
                    if (v < best[q])
                    {
                        best[q] = v;
                        best_pose[q] = static_cast<int>(idx);
                    }
                }
            }
        }
        bool reach = std::any_of(best, best + np, [](double v) { return v < kInf; });
        // A single-exit view still reports exit-independent accessibility.
        for (std::size_t i = 0; i < valid.size() && !reach && mode != kFull; ++i)
        {
            const Point2 p = poses[valid[i]].robot_position;
            std::fill(a.begin(), a.end(), kUnknown);
            for (ExitIndex x = 0; x < ne && !reach; ++x)
            {
                reach = get(x, p) < kInf;
            }
        }
        if (reach)
        {
            out->accessible = out->accessible.with(k);
        }
    }
    return out;
}

RemainingSet GeometricCostOracle::accessible(RemainingSet remaining, ExitIndex from) const
{
    if (from >= scene_.exits.size())
    {
        throw std::out_of_range("exit index out of range");
    }
    if (auto full = find(remaining, kFull))
    {
        return full->accessible;
    }
    return lookup(remaining, mode_for(from, from))->accessible;
}

double GeometricCostOracle::removal_cost(RemainingSet remaining, ExitIndex from, ObjectIndex object,
                                         ExitIndex to) const
{
    const std::size_t ne = scene_.exits.size();
    if (from >= ne || to >= ne || object >= scene_.objects.size())
    {
        throw std::out_of_range("removal_cost index out of range");
    }
    if (!remaining.contains(object))
    {
        return kInfeasible;
    }
    if (auto full = find(remaining, kFull))
    {
        return full->cost[(object * ne + from) * ne + to];
    }
    const std::uint32_t mode = mode_for(from, to);
    const auto entry = lookup(remaining, mode);
    return mode == kFull ? entry->cost[(object * ne + from) * ne + to] : entry->cost[object];
}

std::optional<GraspPose> GeometricCostOracle::best_pose(RemainingSet remaining, ExitIndex from, ObjectIndex object,
                                                        ExitIndex to) const
{
    const std::size_t ne = scene_.exits.size();
    if (!remaining.contains(object))
    {
        return std::nullopt;
    }
    const auto entry = lookup(remaining, kFull);
    const int idx = entry->pose[(object * ne + from) * ne + to];
    if (idx < 0)
    {
        return std::nullopt;
    }
    return geometry_.pose_samples(object)[static_cast<std::size_t>(idx)];
}

std::vector<std::vector<ObjectIndex>> GeometricCostOracle::object_clusters() const { return clusters(scene_); }

double GeometricCostOracle::cluster_anchor_distance(const std::vector<ObjectIndex>& cluster, ExitIndex exit) const
{
    if (cluster.empty())
    {
        return 0.0;
    }
    Point2 c{};
    for (auto k : cluster)
    {
        c = c + scene_.objects[k].shape.center;
    }
    c = c * (1.0 / static_cast<double>(cluster.size()));
    return distance(c, scene_.exits.at(exit).position);
}

}  // namespace crp
