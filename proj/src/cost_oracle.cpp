#include "crp/cost_oracle.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace crp {

std::vector<std::vector<ObjectIndex>> CostOracle::object_clusters() const
{
    std::vector<ObjectIndex> all(object_count());
    std::iota(all.begin(), all.end(), ObjectIndex{0});
    return {all};
}

double CostOracle::cluster_anchor_distance(const std::vector<ObjectIndex>& /*cluster*/, ExitIndex /*exit*/) const
{
    return 0.0;
}

double plan_total(const CostOracle& oracle, const std::vector<PlanStep>& steps)
{
    double total = 0.0;
    for (const auto& s : steps)
    {
        total += s.step_cost;
    }
    return total + static_cast<double>(steps.size()) * oracle.grasp_time();
}

double replay_cost(const CostOracle& oracle, SearchState start, const Plan& plan)
{
    RemainingSet remaining = start.remaining;
    ExitIndex at = start.exit;
    double total = 0.0;
    for (const auto& step : plan.steps)
    {
        if (step.from_exit != at)
        {
            throw InfeasibleError({remaining, at}, "plan step does not start at the current exit");
        }
        if (!remaining.contains(step.object) || !oracle.accessible(remaining, at).contains(step.object))
        {
            throw InfeasibleError({remaining, at}, "plan removes an inaccessible object");
        }
        const double c = oracle.removal_cost(remaining, at, step.object, step.to_exit);
        if (!std::isfinite(c))
        {
            throw InfeasibleError({remaining, at}, "plan step has no feasible route");
        }
        total += c;
        remaining = remaining.without(step.object);
        at = step.to_exit;
    }
    return total + static_cast<double>(plan.steps.size()) * oracle.grasp_time();
}

namespace {

bool cost_le(double a, double b)
{
    if (!std::isfinite(b))
    {
        return true;
    }
    return a <= b + 1e-9 * (1.0 + std::abs(b));
}

std::optional<MonotoneViolation> check_pair(const CostOracle& oracle, RemainingSet larger, ObjectIndex removed)
{
    const RemainingSet smaller = larger.without(removed);
    const std::size_t exits = oracle.exit_count();
    for (ExitIndex e = 0; e < exits; ++e)
    {
        const RemainingSet acc_large = oracle.accessible(larger, e);
        const RemainingSet acc_small = oracle.accessible(smaller, e);
        for (ObjectIndex o : smaller.indices())
        {
            if (acc_large.contains(o) && !acc_small.contains(o))
            {
                return MonotoneViolation{larger, smaller, o, e, "accessibility revoked by a removal"};
            }
            if (!acc_large.contains(o))
            {
                continue;
            }
            for (ExitIndex j = 0; j < exits; ++j)
            {
                if (!cost_le(oracle.removal_cost(smaller, e, o, j), oracle.removal_cost(larger, e, o, j)))
                {
                    return MonotoneViolation{larger, smaller, o, e, "removal cost increased after a removal"};
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<MonotoneViolation> verify_monotone_feasibility(const CostOracle& oracle, std::size_t n,
                                                             std::size_t trials, std::uint64_t seed,
                                                             bool exhaustive)
{
    if (exhaustive && n <= 16)
    {
        const std::uint64_t count = std::uint64_t{1} << n;
        for (std::uint64_t bits = 1; bits < count; ++bits)
        {
            const RemainingSet s(bits);
            for (ObjectIndex i : s.indices())
            {
                if (auto v = check_pair(oracle, s, i))
                {
                    return v;
                }
            }
        }
        return std::nullopt;
    }
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t)
    {
        RemainingSet s = RemainingSet::all(n);
        while (!s.empty())
        {
            auto items = s.indices();
            std::uniform_int_distribution<std::size_t> pick(0, items.size() - 1);
            const ObjectIndex i = items[pick(rng)];
            if (auto v = check_pair(oracle, s, i))
            {
                return v;
            }
            s = s.without(i);
        }
    }
    return std::nullopt;
}

bool clusters_independent(const CostOracle& oracle, const std::vector<std::vector<ObjectIndex>>& clusters,
                          std::size_t trials, std::uint64_t seed)
{
    const std::size_t n = oracle.object_count();
    const std::size_t exits = oracle.exit_count();
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(0.5);
    for (std::size_t t = 0; t < trials; ++t)
    {
        RemainingSet s;
        for (ObjectIndex i = 0; i < n; ++i)
        {
            if (t == 0 || keep(rng))
            {
                s = s.with(i);
            }
        }
        for (const auto& cluster : clusters)
        {
            RemainingSet members;
            for (auto i : cluster)
            {
                members = members.with(i);
            }
            const RemainingSet local = s & members;
            if (local.empty())
            {
                continue;
            }
            for (ExitIndex e = 0; e < exits; ++e)
            {
                const RemainingSet a_global = oracle.accessible(s, e) & members;
                const RemainingSet a_local = oracle.accessible(local, e) & members;
                if (a_global != a_local)
                {
                    return false;
                }
                for (ObjectIndex k : a_local.indices())
                {
                    for (ExitIndex j = 0; j < exits; ++j)
                    {
                        const double cg = oracle.removal_cost(s, e, k, j);
                        const double cl = oracle.removal_cost(local, e, k, j);
                        if (std::isfinite(cg) != std::isfinite(cl))
                        {
                            return false;
                        }
                        if (std::isfinite(cg) && std::abs(cg - cl) > 1e-9 * (1.0 + std::abs(cg)))
                        {
                            return false;
                        }
                    }
                }
            }
        }
    }
    return true;
}

SubsetOracle::SubsetOracle(const CostOracle& parent, std::vector<ObjectIndex> members, RemainingSet background,
                           std::optional<ExitIndex> only_exit)
    : parent_(parent), members_(std::move(members)), background_(background), only_exit_(only_exit)
{
    for (auto m : members_)
    {
        background_ = background_.without(m);
    }
}

std::size_t SubsetOracle::exit_count() const { return only_exit_ ? 1 : parent_.exit_count(); }

RemainingSet SubsetOracle::to_parent(RemainingSet local) const
{
    RemainingSet out = background_;
    for (ObjectIndex i : local.indices())
    {
        out = out.with(members_[i]);
    }
    return out;
}

RemainingSet SubsetOracle::accessible(RemainingSet remaining, ExitIndex from) const
{
    const RemainingSet acc = parent_.accessible(to_parent(remaining), parent_exit(from));
    RemainingSet out;
    for (ObjectIndex i : remaining.indices())
    {
        if (acc.contains(members_[i]))
        {
            out = out.with(i);
        }
    }
    return out;
}

double SubsetOracle::removal_cost(RemainingSet remaining, ExitIndex from, ObjectIndex object, ExitIndex to) const
{
    return parent_.removal_cost(to_parent(remaining), parent_exit(from), members_[object], parent_exit(to));
}

double SubsetOracle::boundary_distance(ExitIndex a, ExitIndex b) const
{
    return parent_.boundary_distance(parent_exit(a), parent_exit(b));
}

}  // namespace crp
