#include "planner_util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crp {

namespace {

Plan run_inner(InnerPlanner inner, const CostOracle& oracle, SearchState start, const PlannerConfig& cfg)
{
    switch (inner)
    {
    case InnerPlanner::optimal:
        return plan_optimal_single_exit(oracle, start, cfg);
    case InnerPlanner::greedy:
        return plan_greedy(oracle, start, cfg);
    case InnerPlanner::lookahead:
        return plan_lookahead(oracle, start, cfg);
    case InnerPlanner::mcts:
        return plan_mcts(oracle, start, cfg);
    }
    throw std::invalid_argument("unknown inner planner");
}

/// Exits to visit from `at`, walking the border in whichever direction needs less travel.
std::vector<ExitIndex> visit_order(const Scene& scene, const CostOracle& oracle, ExitIndex at,
                                   const std::vector<ExitIndex>& targets)
{
    const double perim = scene.perimeter();
    auto offset = [&](ExitIndex x) {
        double d = scene.exits[x].arc - scene.exits[at].arc;
        d = std::fmod(d, perim);
        return d < 0.0 ? d + perim : d;
    };
    std::vector<ExitIndex> ccw = targets;
    std::stable_sort(ccw.begin(), ccw.end(), [&](ExitIndex a, ExitIndex b) { return offset(a) < offset(b); });
    std::vector<ExitIndex> cw = ccw;
    // Clockwise: the current exit (offset 0) stays first, the rest reverse.
    const auto first_nonzero = std::find_if(cw.begin(), cw.end(), [&](ExitIndex x) { return offset(x) > 0.0; });
    std::reverse(first_nonzero, cw.end());
    auto travel = [&](const std::vector<ExitIndex>& order) {
        double t = 0.0;
        ExitIndex cur = at;
        for (auto x : order)
        {
            t += oracle.boundary_distance(cur, x);
            cur = x;
        }
        return t;
    };
    return travel(cw) < travel(ccw) ? cw : ccw;
}

}  // namespace

Plan plan_voronoi(const Scene& scene, const CostOracle& oracle, SearchState start, InnerPlanner inner,
                  const PlannerConfig& cfg)
{
    cfg.validate();
    const std::size_t ne = oracle.exit_count();
    if (ne != scene.exits.size() || oracle.object_count() != scene.objects.size())
    {
        throw std::invalid_argument("plan_voronoi: oracle does not match the scene");
    }
    if (ne == 1)
    {
        return run_inner(inner, oracle, start, cfg);
    }
    const auto labels = voronoi_labels(scene);

    std::vector<PlanStep> steps;
    RemainingSet s = start.remaining;
    ExitIndex at = start.exit;
    bool timed_out = false;
    bool fallback = false;
    std::string warning;
    std::uint64_t visited = 0;
    while (!s.empty())
    {
        std::vector<ExitIndex> targets;
        for (ObjectIndex k : s.indices())
        {
            if (std::find(targets.begin(), targets.end(), labels[k]) == targets.end())
            {
                targets.push_back(labels[k]);
            }
        }
        bool progress = false;
        for (ExitIndex x : visit_order(scene, oracle, at, targets))
        {
            std::vector<ObjectIndex> members;
            for (ObjectIndex k : s.indices())
            {
                if (labels[k] == x)
                {
                    members.push_back(k);
                }
            }
            if (members.empty())
            {
                continue;
            }
            // Objects of this region removable while the other regions stay in place.
            SubsetOracle region(oracle, members, s, x);
            RemainingSet stuck = RemainingSet::all(members.size());
            for (;;)
            {
                // Accessible is not enough: the object must also leave through x.
                RemainingSet acc;
                for (ObjectIndex i : (region.accessible(stuck, 0) & stuck).indices())
                {
                    if (std::isfinite(region.removal_cost(stuck, 0, i, 0)))
                    {
                        acc = acc.with(i);
                    }
                }
                if (acc.empty())
                {
                    break;
                }
                stuck = stuck.minus(acc);
            }
            std::vector<ObjectIndex> now;
            for (std::size_t i = 0; i < members.size(); ++i)
            {
                if (!stuck.contains(i))
                {
                    now.push_back(members[i]);
                }
            }
            if (now.empty())
            {
                continue;
            }
            SubsetOracle sub(oracle, now, s, x);
            const Plan part = run_inner(inner, sub, {RemainingSet::all(now.size()), 0}, cfg);
            timed_out = timed_out || part.timed_out;
            visited += part.visited_states;
            for (const auto& st : part.steps)
            {
                const ObjectIndex k = sub.parent_index(st.object);
                const double c = oracle.removal_cost(s, at, k, x);
                steps.push_back({k, at, x, c});
                s = s.without(k);
                at = x;
            }
            progress = true;
        }
        if (!progress)
        {
            fallback = true;
            warning = "voronoi regions block each other; finished with unrestricted greedy";
            auto rest = detail::greedy_steps(oracle, {s, at});
            steps.insert(steps.end(), rest.begin(), rest.end());
            break;
        }
    }
    Plan plan = detail::make_plan(oracle, std::move(steps));
    plan.timed_out = timed_out;
    plan.fallback = fallback;
    plan.warning = warning;
    plan.visited_states = visited;
    return plan;
}

}  // namespace crp
