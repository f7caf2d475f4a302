#include "planner_util.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace crp {

namespace {

using detail::Action;

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(b)); }

/// Depth-first DP over (remaining, exit) with a memo of visited states.
///
/// search(S, e, budget) returns J(S, e) exactly when the result is below `budget`;
/// otherwise it returns a lower bound that is at least `budget`.
class DpSolver
{
public:
    DpSolver(const CostOracle& oracle, const PlannerConfig& cfg, const detail::Deadline& deadline)
        : oracle_(oracle), cfg_(cfg), deadline_(deadline)
    {
    }

    Plan solve(SearchState start)
    {
        prepare(start.remaining);
        const auto greedy = detail::greedy_steps(oracle_, start);
        incumbent_ = greedy;
        incumbent_cost_ = 0.0;
        for (const auto& s : greedy)
        {
            incumbent_cost_ += s.step_cost;
        }
        root_ = start;
        const double budget = incumbent_cost_ * (1.0 + 1e-9) + 1e-12;
        Plan plan;
        try
        {
            const Result r = search(start.remaining, start.exit, budget);
            if (!r.exact)
            {
                throw InfeasibleError(start, "search failed to improve on the greedy plan");
            }
            plan = detail::make_plan(oracle_, reconstruct(start, r.value));
            plan.optimal = true;
        }
        catch (const detail::TimedOut&)
        {
            plan = detail::make_plan(oracle_, incumbent_);
            plan.timed_out = true;
        }
        plan.visited_states = cfg_.use_memo ? memo_.size() : expanded_;
        return plan;
    }

private:
    struct Result
    {
        double value = 0.0;
        bool exact = false;
    };

    struct Entry
    {
        double value = 0.0;
        bool exact = false;
        ObjectIndex object = 0;
        ExitIndex exit = 0;
    };

    void prepare(RemainingSet all)
    {
        const std::size_t n = oracle_.object_count();
        const std::size_t ne = oracle_.exit_count();
        alone_.assign(n, 0.0);
        floor_.assign(n, -kInfeasible);
        for (ObjectIndex k : all.indices())
        {
            const RemainingSet s = RemainingSet::of({k});
            double lo = kInfeasible;
            double fl = kInfeasible;
            for (ExitIndex e = 0; e < ne; ++e)
            {
                for (ExitIndex j = 0; j < ne; ++j)
                {
                    const double c = oracle_.removal_cost(s, e, k, j);
                    lo = std::min(lo, c);
                    fl = std::min(fl, c - oracle_.boundary_distance(e, j));
                }
            }
            alone_[k] = lo;
            floor_[k] = fl;
        }
    }

    double bound(RemainingSet s) const
    {
        if (!cfg_.use_lower_bound)
        {
            return 0.0;
        }
        double total = 0.0;
        for (ObjectIndex k : s.indices())
        {
            total += alone_[k];
        }
        return total;
    }

    std::vector<Action> branch(RemainingSet s, ExitIndex e) const
    {
        auto acts = detail::actions(oracle_, s, e, cfg_.use_reachability_pruning);
        if (cfg_.use_dominance)
        {
            // Removing k now and staying at e is no worse than any later removal of k
            // when it already costs no more than k's cheapest standalone round trip
            // net of border travel.
            for (const auto& a : acts)
            {
                if (a.exit == e && a.cost <= floor_[a.object] + 1e-10 * (1.0 + std::abs(floor_[a.object])))
                {
                    return {a};
                }
            }
        }
        std::stable_sort(acts.begin(), acts.end(), [](const Action& a, const Action& b) { return a.cost < b.cost; });
        return acts;
    }

    Result search(RemainingSet s, ExitIndex e, double budget)
    {
        if (s.empty())
        {
            return {0.0, true};
        }
        const SearchState key{s, e};
        double known = 0.0;
        if (cfg_.use_memo)
        {
            if (auto it = memo_.find(key); it != memo_.end())
            {
                if (it->second.exact || it->second.value >= budget)
                {
                    return {it->second.value, it->second.exact};
                }
                known = it->second.value;
            }
        }
        const double lb = std::max(known, bound(s));
        if (lb >= budget)
        {
            store(key, {lb, false, 0, 0});
            return {lb, false};
        }
        if ((++expanded_ & 127U) == 0 && deadline_.expired())
        {
            throw detail::TimedOut{};
        }
        const auto acts = branch(s, e);
        if (acts.empty())
        {
            throw InfeasibleError(key, "no accessible object remains");
        }
        double best = kInfeasible;
        Entry entry;
        for (const auto& a : acts)
        {
            const double limit = std::min(best, budget);
            const RemainingSet child = s.without(a.object);
            if (a.cost + bound(child) >= limit)
            {
                continue;
            }
            // A bound-only answer means this branch cannot beat `limit`.
            const Result r = search(child, a.exit, limit - a.cost);
            if (!r.exact)
            {
                continue;
            }
            const double v = a.cost + r.value;
            if (v < best)
            {
                best = v;
                entry.object = a.object;
                entry.exit = a.exit;
                if (key == root_ && v < budget)
                {
                    improve_incumbent(a, v);
                }
            }
        }
        if (best < budget)
        {
            entry.value = best;
            entry.exact = true;
        }
        else
        {
            entry.value = std::max(budget, lb);
            entry.exact = false;
        }
        store(key, entry);
        return {entry.value, entry.exact};
    }

    void store(const SearchState& key, const Entry& entry)
    {
        if (!cfg_.use_memo)
        {
            return;
        }
        auto [it, inserted] = memo_.try_emplace(key, entry);
        if (!inserted && !it->second.exact && (entry.exact || entry.value > it->second.value))
        {
            it->second = entry;
        }
    }

    void improve_incumbent(const Action& a, double value)
    {
        if (!cfg_.use_memo || value >= incumbent_cost_)
        {
            return;
        }
        std::vector<PlanStep> steps{{a.object, root_.exit, a.exit, a.cost}};
        try
        {
            auto rest = reconstruct({root_.remaining.without(a.object), a.exit}, value - a.cost);
            steps.insert(steps.end(), rest.begin(), rest.end());
        }
        catch (const detail::TimedOut&)
        {
            return;
        }
        incumbent_ = std::move(steps);
        incumbent_cost_ = value;
    }

    /// Follows memo actions; without a memo entry, re-derives the action whose
    /// subtree value matches.
    std::vector<PlanStep> reconstruct(SearchState state, double value)
    {
        std::vector<PlanStep> steps;
        while (!state.remaining.empty())
        {
            std::optional<Action> pick;
            if (cfg_.use_memo)
            {
                if (auto it = memo_.find(state); it != memo_.end() && it->second.exact)
                {
                    const auto& en = it->second;
                    pick = Action{en.object, en.exit, oracle_.removal_cost(state.remaining, state.exit, en.object, en.exit)};
                }
            }
            if (!pick)
            {
                const double budget = value * (1.0 + 1e-9) + 1e-9;
                for (const auto& a : branch(state.remaining, state.exit))
                {
                    const RemainingSet child = state.remaining.without(a.object);
                    const Result r = search(child, a.exit, budget - a.cost);
                    if (r.exact && close(a.cost + r.value, value))
                    {
                        pick = a;
                        break;
                    }
                }
            }
            if (!pick)
            {
                throw InfeasibleError(state, "could not reconstruct the optimal plan");
            }
            steps.push_back({pick->object, state.exit, pick->exit, pick->cost});
            value -= pick->cost;
            state = {state.remaining.without(pick->object), pick->exit};
        }
        return steps;
    }

    const CostOracle& oracle_;
    const PlannerConfig& cfg_;
    const detail::Deadline& deadline_;
    std::unordered_map<SearchState, Entry, SearchStateHash> memo_;
    std::vector<double> alone_;
    std::vector<double> floor_;
    std::vector<PlanStep> incumbent_;
    double incumbent_cost_ = kInfeasible;
    SearchState root_;
    std::uint64_t expanded_ = 0;
};

Plan solve_dp(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg, const detail::Deadline& deadline)
{
    if (start.exit >= oracle.exit_count())
    {
        throw std::invalid_argument("start exit out of range");
    }
    DpSolver solver(oracle, cfg, deadline);
    return solver.solve(start);
}

/// Solves independent clusters separately; nullopt when clustering does not apply.
std::optional<Plan> solve_clustered(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg,
                                    const detail::Deadline& deadline)
{
    std::vector<std::vector<ObjectIndex>> groups;
    for (const auto& c : oracle.object_clusters())
    {
        std::vector<ObjectIndex> g;
        for (auto k : c)
        {
            if (start.remaining.contains(k))
            {
                g.push_back(k);
            }
        }
        if (!g.empty())
        {
            groups.push_back(std::move(g));
        }
    }
    if (groups.size() < 2)
    {
        return std::nullopt;
    }
    // Validation runs on subsets of the start set only.
    std::vector<ObjectIndex> present = start.remaining.indices();
    SubsetOracle view(oracle, present, RemainingSet{});
    std::vector<std::vector<ObjectIndex>> local(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g)
    {
        for (auto k : groups[g])
        {
            local[g].push_back(static_cast<ObjectIndex>(std::find(present.begin(), present.end(), k) - present.begin()));
        }
    }
    if (!clusters_independent(view, local, 100, cfg.seed))
    {
        return std::nullopt;
    }
    std::vector<std::size_t> order(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i)
    {
        order[i] = i;
    }
    std::vector<double> anchor(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g)
    {
        anchor[g] = oracle.cluster_anchor_distance(groups[g], start.exit);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return anchor[a] < anchor[b]; });

    std::vector<PlanStep> steps;
    bool timed_out = false;
    std::uint64_t visited = 0;
    for (std::size_t g : order)
    {
        SubsetOracle sub(oracle, groups[g], RemainingSet{});
        Plan part = solve_dp(sub, {RemainingSet::all(groups[g].size()), start.exit}, cfg, deadline);
        timed_out = timed_out || part.timed_out;
        visited += part.visited_states;
        for (const auto& st : part.steps)
        {
            steps.push_back({sub.parent_index(st.object), st.from_exit, st.to_exit, st.step_cost});
        }
    }
    // Re-price the concatenation in the real states; independence was sampled, not proven.
    RemainingSet s = start.remaining;
    double sampled = 0.0;
    for (auto& st : steps)
    {
        sampled += st.step_cost;
        if (!oracle.accessible(s, st.from_exit).contains(st.object))
        {
            return std::nullopt;
        }
        const double c = oracle.removal_cost(s, st.from_exit, st.object, st.to_exit);
        if (!std::isfinite(c) || !close(c, st.step_cost))
        {
            return std::nullopt;
        }
        st.step_cost = c;
        s = s.without(st.object);
    }
    Plan plan = detail::make_plan(oracle, std::move(steps));
    if (!close(plan.total_cost - static_cast<double>(plan.steps.size()) * oracle.grasp_time(), sampled))
    {
        return std::nullopt;
    }
    plan.optimal = !timed_out;
    plan.timed_out = timed_out;
    plan.visited_states = visited;
    return plan;
}

}  // namespace

Plan plan_optimal_single_exit(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg)
{
    cfg.validate();
    if (oracle.exit_count() != 1)
    {
        throw std::invalid_argument("plan_optimal_single_exit needs an oracle with exactly one exit");
    }
    const detail::Deadline deadline(cfg.time_limit);
    if (cfg.use_clustering)
    {
        if (auto p = solve_clustered(oracle, start, cfg, deadline))
        {
            return *p;
        }
    }
    return solve_dp(oracle, start, cfg, deadline);
}

Plan plan_optimal_multi_exit(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg)
{
    cfg.validate();
    const detail::Deadline deadline(cfg.time_limit);
    return solve_dp(oracle, start, cfg, deadline);
}

}  // namespace crp
