#pragma once

#include "crp/cost_oracle.hpp"

#include <vector>

namespace crp::oracles {

struct BruteForceResult
{
    double cost = kInfeasible;
    std::vector<PlanStep> steps;
    std::uint64_t sequences = 0;  // complete removal sequences enumerated
};

/// Minimum over every removal order (and, with several exits, every choice of exit
/// per removal). Feasibility comes from finite removal_cost alone, so the result
/// does not depend on the oracle's accessible() answer. Exponential; n <= 8.
BruteForceResult brute_force(const CostOracle& oracle, SearchState start);

}  // namespace crp::oracles
