#pragma once

#include "crp/cost_oracle.hpp"
#include "crp/scene.hpp"

#include <cstdint>
#include <string>

namespace crp {

struct PlannerConfig
{
    double time_limit = 400.0;  // seconds
    std::size_t lookahead_depth = 3;
    std::size_t mcts_iterations = 2000;
    double mcts_exploration = 1.0;
    bool use_reachability_pruning = true;
    bool use_clustering = true;
    bool use_lower_bound = true;
    /// Removes an object immediately when doing so now is provably no worse than
    /// doing it at any later point.
    bool use_dominance = true;
    bool use_memo = true;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on a non-positive time limit or zero depth.
    void validate() const;
};

/// Exact DP over remaining sets for an oracle with a single exit.
/// Throws InfeasibleError when some reachable state is stuck.
Plan plan_optimal_single_exit(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg);

/// Exact DP over (remaining set, exit) states.
Plan plan_optimal_multi_exit(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg);

/// Cheapest immediate (object, exit) at every step; ties go to the lower object,
/// then the lower exit.
Plan plan_greedy(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg);

/// Commits the first action of the cheapest action sequence of length
/// min(k, |remaining|); k = 1 is greedy.
Plan plan_lookahead(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg);

/// UCT with greedy rollouts and reward greedy_cost / rollout_cost. Returns the
/// cheaper of the committed plan and the best complete sequence seen while searching.
Plan plan_mcts(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg);

enum class InnerPlanner
{
    optimal,
    greedy,
    lookahead,
    mcts,
};

/// Solves each exit's Voronoi region as a single-exit problem, visiting exits along
/// the border. `oracle` must be the geometric oracle of `scene`.
Plan plan_voronoi(const Scene& scene, const CostOracle& oracle, SearchState start, InnerPlanner inner,
                  const PlannerConfig& cfg);

/// Sum over remaining objects of their cheapest standalone removal cost.
double lower_bound(const CostOracle& oracle, SearchState state);

/// Dispatch by name: optimal, greedy, lookahead, mcts, voronoi (voronoi needs a scene).
Plan run_planner(const std::string& name, const CostOracle& oracle, SearchState start, const PlannerConfig& cfg,
                 const Scene* scene = nullptr);

}  // namespace crp
