#pragma once

#include "crp/types.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace crp {

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

/// Answers accessibility and per-removal travel cost for a remaining set.
///
/// Implementations must satisfy:
///  * monotonicity: removing objects never revokes accessibility and never raises
///    a removal cost;
///  * removal_cost(S, e, k, j) is finite iff k is accessible and leaving through j
///    is possible;
///  * boundary entry: removal_cost(S, e, k, j) <= boundary_distance(e, x) +
///    removal_cost(S, x, k, j) for every exit x (the robot may walk along the
///    border before entering).
/// All queries must be safe for concurrent callers.
class CostOracle
{
public:
    virtual ~CostOracle() = default;

    [[nodiscard]] virtual std::size_t object_count() const = 0;
    [[nodiscard]] virtual std::size_t exit_count() const = 0;
    [[nodiscard]] virtual RemainingSet accessible(RemainingSet remaining, ExitIndex from) const = 0;
    [[nodiscard]] virtual double removal_cost(RemainingSet remaining, ExitIndex from, ObjectIndex object,
                                              ExitIndex to) const = 0;
    [[nodiscard]] virtual double boundary_distance(ExitIndex a, ExitIndex b) const = 0;

    /// Constant time spent per grasp; adds n * grasp_time to every complete plan.
    [[nodiscard]] virtual double grasp_time() const { return 0.0; }
    /// Candidate object clusters; a single group when the backend has no notion of them.
    [[nodiscard]] virtual std::vector<std::vector<ObjectIndex>> object_clusters() const;
    /// Distance proxy used to order independent clusters (nearest first).
    [[nodiscard]] virtual double cluster_anchor_distance(const std::vector<ObjectIndex>& cluster, ExitIndex exit) const;
};

struct PlanStep
{
    ObjectIndex object = 0;
    ExitIndex from_exit = 0;
    ExitIndex to_exit = 0;
    double step_cost = 0.0;

    friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

struct Plan
{
    std::vector<PlanStep> steps;
    double total_cost = 0.0;
    bool optimal = false;      // proven optimal w.r.t. the oracle
    bool timed_out = false;
    bool fallback = false;     // planner fell back to an unrestricted strategy
    std::uint64_t visited_states = 0;
    std::string warning;
};

class InfeasibleError : public std::runtime_error
{
public:
    InfeasibleError(SearchState blocking, const std::string& what)
        : std::runtime_error(what), state(blocking)
    {
    }
    SearchState state;
};

/// Re-evaluates a plan step by step. Throws InfeasibleError when a step removes an
/// inaccessible object or an object twice.
double replay_cost(const CostOracle& oracle, SearchState start, const Plan& plan);

/// Sum of step costs plus the per-grasp constant.
double plan_total(const CostOracle& oracle, const std::vector<PlanStep>& steps);

struct MonotoneViolation
{
    RemainingSet larger;
    RemainingSet smaller;
    ObjectIndex object = 0;
    ExitIndex exit = 0;
    std::string reason;
};

/// Checks accessibility and cost monotonicity on chains S ⊃ S'. With n <= 16 and
/// exhaustive set, every pair (S, S \ {i}) is checked; otherwise random chains.
std::optional<MonotoneViolation> verify_monotone_feasibility(const CostOracle& oracle, std::size_t n,
                                                             std::size_t trials, std::uint64_t seed,
                                                             bool exhaustive = true);

/// True when, on `trials` random subsets, each cluster's accessibility and costs
/// are unchanged by removing every object outside it.
bool clusters_independent(const CostOracle& oracle, const std::vector<std::vector<ObjectIndex>>& clusters,
                          std::size_t trials, std::uint64_t seed);

/// Oracle view over a subset of objects of a parent oracle; local index i maps to
/// parent object members[i]. Parent objects outside `members` are treated as
/// `background` (present) or removed.
class SubsetOracle : public CostOracle
{
public:
    SubsetOracle(const CostOracle& parent, std::vector<ObjectIndex> members, RemainingSet background,
                 std::optional<ExitIndex> only_exit = std::nullopt);

    [[nodiscard]] std::size_t object_count() const override { return members_.size(); }
    [[nodiscard]] std::size_t exit_count() const override;
    [[nodiscard]] RemainingSet accessible(RemainingSet remaining, ExitIndex from) const override;
    [[nodiscard]] double removal_cost(RemainingSet remaining, ExitIndex from, ObjectIndex object,
                                      ExitIndex to) const override;
    [[nodiscard]] double boundary_distance(ExitIndex a, ExitIndex b) const override;
    [[nodiscard]] double grasp_time() const override { return parent_.grasp_time(); }

    [[nodiscard]] RemainingSet to_parent(RemainingSet local) const;
    [[nodiscard]] ObjectIndex parent_index(ObjectIndex local) const { return members_[local]; }
    [[nodiscard]] ExitIndex parent_exit(ExitIndex local) const { return only_exit_ ? *only_exit_ : local; }

private:
    const CostOracle& parent_;
    std::vector<ObjectIndex> members_;
    RemainingSet background_;
    std::optional<ExitIndex> only_exit_;
};

}  // namespace crp
