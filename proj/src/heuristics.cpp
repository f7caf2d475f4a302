#include "planner_util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace crp {

namespace detail {

std::vector<Action> actions(const CostOracle& oracle, RemainingSet remaining, ExitIndex at, bool use_accessible)
{
    std::vector<Action> out;
    const RemainingSet candidates = use_accessible ? oracle.accessible(remaining, at) & remaining : remaining;
    const std::size_t exits = oracle.exit_count();
    for (ObjectIndex k : candidates.indices())
    {
        for (ExitIndex j = 0; j < exits; ++j)
        {
            const double c = oracle.removal_cost(remaining, at, k, j);
            if (std::isfinite(c))
            {
                out.push_back({k, j, c});
            }
        }
    }
    return out;
}

std::vector<PlanStep> greedy_steps(const CostOracle& oracle, SearchState start)
{
    std::vector<PlanStep> steps;
    RemainingSet s = start.remaining;
    ExitIndex at = start.exit;
    while (!s.empty())
    {
        const auto acts = actions(oracle, s, at);
        if (acts.empty())
        {
            throw InfeasibleError({s, at}, "no accessible object remains");
        }
        const Action* best = &acts.front();
        for (const auto& a : acts)
        {
            if (a.cost < best->cost)
            {
                best = &a;
            }
        }
        steps.push_back({best->object, at, best->exit, best->cost});
        s = s.without(best->object);
        at = best->exit;
    }
    return steps;
}

Plan make_plan(const CostOracle& oracle, std::vector<PlanStep> steps)
{
    Plan p;
    p.total_cost = plan_total(oracle, steps);
    p.steps = std::move(steps);
    return p;
}

}  // namespace detail

using detail::Action;
using detail::actions;

void PlannerConfig::validate() const
{
    if (!(time_limit > 0.0))
    {
        throw std::invalid_argument("time_limit must be positive");
    }
    if (lookahead_depth < 1)
    {
        throw std::invalid_argument("lookahead depth must be at least 1");
    }
    if (mcts_iterations < 1)
    {
        throw std::invalid_argument("mcts_iterations must be at least 1");
    }
}

Plan plan_greedy(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg)
{
    cfg.validate();
    return detail::make_plan(oracle, detail::greedy_steps(oracle, start));
}

namespace {

class Lookahead
{
public:
    Lookahead(const CostOracle& oracle, const detail::Deadline& deadline) : oracle_(oracle), deadline_(deadline) {}

    /// Cheapest cost of the next min(depth, |S|) removals.
    double best(RemainingSet s, ExitIndex at, std::size_t depth)
    {
        if (depth == 0 || s.empty())
        {
            return 0.0;
        }
        const Key key{s.bits(), at, depth};
        if (auto it = memo_.find(key); it != memo_.end())
        {
            return it->second;
        }
        if ((++calls_ & 255U) == 0 && deadline_.expired())
        {
            throw detail::TimedOut{};
        }
        double v = kInfeasible;
        for (const auto& a : actions(oracle_, s, at))
        {
            v = std::min(v, a.cost + best(s.without(a.object), a.exit, depth - 1));
        }
        memo_.emplace(key, v);
        return v;
    }

private:
    using Key = std::tuple<std::uint64_t, ExitIndex, std::size_t>;
    const CostOracle& oracle_;
    const detail::Deadline& deadline_;
    std::map<Key, double> memo_;
    std::uint64_t calls_ = 0;
};

}  // namespace

Plan plan_lookahead(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg)
{
    cfg.validate();
    const detail::Deadline deadline(cfg.time_limit);
    Lookahead la(oracle, deadline);
    std::vector<PlanStep> steps;
    RemainingSet s = start.remaining;
    ExitIndex at = start.exit;
    bool timed_out = false;
    try
    {
        while (!s.empty())
        {
            const auto acts = actions(oracle, s, at);
            if (acts.empty())
            {
                throw InfeasibleError({s, at}, "no accessible object remains");
            }
            const Action* choice = nullptr;
            double score = kInfeasible;
            for (const auto& a : acts)
            {
                const double v = a.cost + la.best(s.without(a.object), a.exit, cfg.lookahead_depth - 1);
                if (v < score)
                {
                    score = v;
                    choice = &a;
                }
            }
            if (choice == nullptr)
            {
                throw InfeasibleError({s, at}, "every action leads to a stuck state");
            }
            steps.push_back({choice->object, at, choice->exit, choice->cost});
            s = s.without(choice->object);
            at = choice->exit;
        }
    }
    catch (const detail::TimedOut&)
    {
        timed_out = true;
        auto rest = detail::greedy_steps(oracle, {s, at});
        steps.insert(steps.end(), rest.begin(), rest.end());
    }
    Plan p = detail::make_plan(oracle, std::move(steps));
    p.timed_out = timed_out;
    return p;
}

namespace {

class Mcts
{
public:
    Mcts(const CostOracle& oracle, const PlannerConfig& cfg, double baseline)
        : oracle_(oracle), cfg_(cfg), baseline_(baseline), rng_(cfg.seed)
    {
    }

    /// Runs the iteration budget from `root` and returns the most visited action.
    /// `prefix` holds the steps already committed.
    std::optional<Action> search(SearchState root, const std::vector<PlanStep>& prefix, double prefix_cost,
                                 const detail::Deadline& deadline, bool& timed_out)
    {
        nodes_.clear();
        nodes_.push_back(make_node(root, -1, {}, 0.0));
        if (nodes_[0].untried.size() == 1)
        {
            return nodes_[0].untried.front();
        }
        for (std::size_t it = 0; it < cfg_.mcts_iterations; ++it)
        {
            if ((it & 63U) == 0 && deadline.expired())
            {
                timed_out = true;
                break;
            }
            iterate(prefix, prefix_cost);
        }
        const Node& r = nodes_[0];
        int pick = -1;
        for (int c : r.children)
        {
            const Node& n = nodes_[static_cast<std::size_t>(c)];
            if (pick < 0)
            {
                pick = c;
                continue;
            }
            const Node& b = nodes_[static_cast<std::size_t>(pick)];
            if (n.visits > b.visits || (n.visits == b.visits && n.mean() > b.mean()))
            {
                pick = c;
            }
        }
        if (pick < 0)
        {
            if (r.untried.empty())
            {
                return std::nullopt;
            }
            return r.untried.front();
        }
        return nodes_[static_cast<std::size_t>(pick)].via;
    }

    [[nodiscard]] const std::vector<PlanStep>& best_sequence() const { return best_seq_; }
    [[nodiscard]] double best_cost() const { return best_cost_; }

private:
    struct Node
    {
        SearchState state;
        int parent = -1;
        Action via;
        double g = 0.0;  // cost from the search root
        std::vector<Action> untried;
        std::vector<int> children;
        std::uint64_t visits = 0;
        double reward = 0.0;
        [[nodiscard]] double mean() const { return visits ? reward / static_cast<double>(visits) : 0.0; }
    };

    Node make_node(SearchState s, int parent, Action via, double g)
    {
        Node n{s, parent, via, g, actions(oracle_, s.remaining, s.exit), {}, 0, 0.0};
        std::shuffle(n.untried.begin(), n.untried.end(), rng_);
        return n;
    }

    void iterate(const std::vector<PlanStep>& prefix, double prefix_cost)
    {
        std::size_t cur = 0;
        while (nodes_[cur].untried.empty() && !nodes_[cur].children.empty())
        {
            const Node& n = nodes_[cur];
            const double logn = std::log(static_cast<double>(std::max<std::uint64_t>(n.visits, 1)));
            int pick = n.children.front();
            double best = -kInfeasible;
            for (int c : n.children)
            {
                const Node& ch = nodes_[static_cast<std::size_t>(c)];
                const double u = ch.mean() + cfg_.mcts_exploration * std::sqrt(logn / static_cast<double>(ch.visits));
                if (u > best)
                {
                    best = u;
                    pick = c;
                }
            }
            cur = static_cast<std::size_t>(pick);
        }
        if (!nodes_[cur].untried.empty())
        {
            const Action a = nodes_[cur].untried.back();
            nodes_[cur].untried.pop_back();
            const SearchState s = nodes_[cur].state;
            Node child = make_node({s.remaining.without(a.object), a.exit}, static_cast<int>(cur), a,
                                   nodes_[cur].g + a.cost);
            nodes_.push_back(std::move(child));
            const int id = static_cast<int>(nodes_.size()) - 1;
            nodes_[cur].children.push_back(id);
            cur = static_cast<std::size_t>(id);
        }

        double reward = 0.0;
        const Node& leaf = nodes_[cur];
        std::vector<PlanStep> tail;
        bool complete = true;
        try
        {
            tail = detail::greedy_steps(oracle_, leaf.state);
        }
        catch (const InfeasibleError&)
        {
            complete = false;
        }
        if (complete)
        {
            double total = prefix_cost + leaf.g;
            for (const auto& st : tail)
            {
                total += st.step_cost;
            }
            reward = total > 0.0 ? baseline_ / total : 1.0;
            if (total < best_cost_)
            {
                best_cost_ = total;
                std::vector<PlanStep> path;
                for (int n = static_cast<int>(cur); nodes_[static_cast<std::size_t>(n)].parent >= 0;
                     n = nodes_[static_cast<std::size_t>(n)].parent)
                {
                    const Node& nd = nodes_[static_cast<std::size_t>(n)];
                    const Node& par = nodes_[static_cast<std::size_t>(nd.parent)];
                    path.push_back({nd.via.object, par.state.exit, nd.via.exit, nd.via.cost});
                }
                std::reverse(path.begin(), path.end());
                best_seq_ = prefix;
                best_seq_.insert(best_seq_.end(), path.begin(), path.end());
                best_seq_.insert(best_seq_.end(), tail.begin(), tail.end());
            }
        }
        for (int n = static_cast<int>(cur); n >= 0; n = nodes_[static_cast<std::size_t>(n)].parent)
        {
            nodes_[static_cast<std::size_t>(n)].visits += 1;
            nodes_[static_cast<std::size_t>(n)].reward += reward;
        }
    }

    const CostOracle& oracle_;
    const PlannerConfig& cfg_;
    double baseline_;
    std::mt19937_64 rng_;
    std::vector<Node> nodes_;
    std::vector<PlanStep> best_seq_;
    double best_cost_ = kInfeasible;
};

}  // namespace

Plan plan_mcts(const CostOracle& oracle, SearchState start, const PlannerConfig& cfg)
{
    cfg.validate();
    const detail::Deadline deadline(cfg.time_limit);
    const auto greedy = detail::greedy_steps(oracle, start);
    double baseline = 0.0;
    for (const auto& st : greedy)
    {
        baseline += st.step_cost;
    }
    Mcts mcts(oracle, cfg, baseline);
    std::vector<PlanStep> steps;
    double cost = 0.0;
    RemainingSet s = start.remaining;
    ExitIndex at = start.exit;
    bool timed_out = false;
    while (!s.empty())
    {
        if (timed_out)
        {
            auto rest = detail::greedy_steps(oracle, {s, at});
            steps.insert(steps.end(), rest.begin(), rest.end());
            break;
        }
        const auto a = mcts.search({s, at}, steps, cost, deadline, timed_out);
        if (!a)
        {
            throw InfeasibleError({s, at}, "no accessible object remains");
        }
        steps.push_back({a->object, at, a->exit, a->cost});
        cost += a->cost;
        s = s.without(a->object);
        at = a->exit;
    }
    Plan committed = detail::make_plan(oracle, std::move(steps));
    Plan out = committed;
    if (!mcts.best_sequence().empty())
    {
        Plan seen = detail::make_plan(oracle, mcts.best_sequence());
        if (seen.total_cost < committed.total_cost)
        {
            out = std::move(seen);
        }
    }
    out.timed_out = timed_out;
    return out;
}

double lower_bound(const CostOracle& oracle, SearchState state)
{
    double total = 0.0;
    const std::size_t exits = oracle.exit_count();
    for (ObjectIndex k : state.remaining.indices())
    {
        const RemainingSet alone = RemainingSet::of({k});
        double best = kInfeasible;
        for (ExitIndex e = 0; e < exits; ++e)
        {
            for (ExitIndex j = 0; j < exits; ++j)
            {
                best = std::min(best, oracle.removal_cost(alone, e, k, j));
            }
        }
        total += best;
    }
    return total;
}

Plan run_planner(const std::string& name, const CostOracle& oracle, SearchState start, const PlannerConfig& cfg,
                 const Scene* scene)
{
    if (name == "optimal")
    {
        return oracle.exit_count() == 1 ? plan_optimal_single_exit(oracle, start, cfg)
                                        : plan_optimal_multi_exit(oracle, start, cfg);
    }
    if (name == "greedy")
    {
        return plan_greedy(oracle, start, cfg);
    }
    if (name == "lookahead")
    {
        return plan_lookahead(oracle, start, cfg);
    }
    if (name == "mcts")
    {
        return plan_mcts(oracle, start, cfg);
    }
    if (name == "voronoi")
    {
        if (scene == nullptr)
        {
            throw std::invalid_argument("voronoi planner needs a geometric scene");
        }
        return plan_voronoi(*scene, oracle, start, InnerPlanner::greedy, cfg);
    }
    throw std::invalid_argument("unknown planner '" + name + "'");
}

}  // namespace crp
