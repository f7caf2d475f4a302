#pragma once

#include "crp/cost_oracle.hpp"
#include "crp/planners.hpp"

#include <chrono>
#include <vector>

namespace crp::detail {

struct Action
{
    ObjectIndex object = 0;
    ExitIndex exit = 0;
    double cost = 0.0;
};

class Deadline
{
public:
    explicit Deadline(double seconds)
        : end_(std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds)))
    {
    }
    [[nodiscard]] bool expired() const { return std::chrono::steady_clock::now() >= end_; }

private:
    std::chrono::steady_clock::time_point end_;
};

struct TimedOut
{
};

/// Feasible actions in (object, exit) order.
std::vector<Action> actions(const CostOracle& oracle, RemainingSet remaining, ExitIndex at, bool use_accessible = true);

/// Greedy completion from a state; throws InfeasibleError when stuck.
std::vector<PlanStep> greedy_steps(const CostOracle& oracle, SearchState start);

/// Wraps steps into a Plan with total cost including grasp time.
Plan make_plan(const CostOracle& oracle, std::vector<PlanStep> steps);

}  // namespace crp::detail
