#include "brute_force.hpp"

#include <cmath>
#include <stdexcept>

namespace crp::oracles {

namespace {

void walk(const CostOracle& oracle, RemainingSet s, ExitIndex at, double so_far, std::vector<PlanStep>& path,
          BruteForceResult& best)
{
    if (s.empty())
    {
        ++best.sequences;
        if (so_far < best.cost)
        {
            best.cost = so_far;
            best.steps = path;
        }
        return;
    }
    for (ObjectIndex k : s.indices())
    {
        for (ExitIndex j = 0; j < oracle.exit_count(); ++j)
        {
            const double c = oracle.removal_cost(s, at, k, j);
            if (!std::isfinite(c))
            {
                continue;
            }
            path.push_back({k, at, j, c});
            walk(oracle, s.without(k), j, so_far + c, path, best);
            path.pop_back();
        }
    }
}

}  // namespace

BruteForceResult brute_force(const CostOracle& oracle, SearchState start)
{
    if (start.remaining.size() > 8)
    {
        throw std::invalid_argument("brute force is limited to 8 objects");
    }
    BruteForceResult best;
    std::vector<PlanStep> path;
    walk(oracle, start.remaining, start.exit, 0.0, path, best);
    if (std::isfinite(best.cost))
    {
        best.cost += oracle.grasp_time() * static_cast<double>(start.remaining.size());
    }
    return best;
}

}  // namespace crp::oracles
