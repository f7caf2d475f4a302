#include "crp/tabular_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crp {

Condition Condition::all_removed(const std::vector<ObjectIndex>& objects)
{
    std::vector<Condition> c;
    for (auto k : objects)
    {
        c.push_back(removed(k));
    }
    return all_of(std::move(c));
}

Condition Condition::any_removed(const std::vector<ObjectIndex>& objects)
{
    std::vector<Condition> c;
    for (auto k : objects)
    {
        c.push_back(removed(k));
    }
    return any_of(std::move(c));
}

bool Condition::satisfied(RemainingSet remaining) const
{
    switch (kind)
    {
    case Kind::always:
        return true;
    case Kind::removed:
        return !remaining.contains(object);
    case Kind::present:
        return remaining.contains(object);
    case Kind::all:
        return std::all_of(children.begin(), children.end(), [&](const Condition& c) { return c.satisfied(remaining); });
    case Kind::any:
        return std::any_of(children.begin(), children.end(), [&](const Condition& c) { return c.satisfied(remaining); });
    }
    return false;
}

bool Condition::monotone() const
{
    if (kind == Kind::present)
    {
        return false;
    }
    return std::all_of(children.begin(), children.end(), [](const Condition& c) { return c.monotone(); });
}

std::string Condition::to_string() const
{
    std::ostringstream os;
    switch (kind)
    {
    case Kind::always:
        return "true";
    case Kind::removed:
        os << "removed(" << object << ")";
        return os.str();
    case Kind::present:
        os << "present(" << object << ")";
        return os.str();
    case Kind::all:
    case Kind::any:
        os << (kind == Kind::all ? "all(" : "any(");
        for (std::size_t i = 0; i < children.size(); ++i)
        {
            os << (i ? ", " : "") << children[i].to_string();
        }
        os << ")";
        return os.str();
    }
    return "?";
}

double AbstractInstance::param(const std::string& key) const
{
    auto it = params.find(key);
    if (it == params.end())
    {
        throw std::out_of_range("instance has no parameter '" + key + "'");
    }
    return it->second;
}

namespace {

void check_condition(const Condition& c, std::size_t n)
{
    if (c.kind == Condition::Kind::present)
    {
        throw std::invalid_argument("condition is not monotone: " + c.to_string());
    }
    if (c.kind == Condition::Kind::removed && c.object >= n)
    {
        throw std::invalid_argument("condition references a missing object");
    }
    for (const auto& ch : c.children)
    {
        check_condition(ch, n);
    }
}

}  // namespace

TabularCostOracle::TabularCostOracle(AbstractInstance instance, Unchecked) : instance_(std::move(instance))
{
    normalize();
}

TabularCostOracle TabularCostOracle::unchecked(AbstractInstance instance)
{
    return TabularCostOracle(std::move(instance), Unchecked{});
}

void TabularCostOracle::normalize()
{
    const std::size_t e = instance_.exit_count;
    if (e == 0)
    {
        throw std::invalid_argument("instance needs at least one exit");
    }
    if (instance_.boundary.empty())
    {
        instance_.boundary.assign(e, std::vector<double>(e, 0.0));
    }
    if (instance_.boundary.size() != e ||
        std::any_of(instance_.boundary.begin(), instance_.boundary.end(), [&](const auto& row) { return row.size() != e; }))
    {
        throw std::invalid_argument("boundary matrix must be exit_count x exit_count");
    }
    if (instance_.objects.size() > kMaxObjects)
    {
        throw std::invalid_argument("at most 64 objects are supported");
    }
}

TabularCostOracle::TabularCostOracle(AbstractInstance instance) : instance_(std::move(instance))
{
    normalize();
    const std::size_t e = instance_.exit_count;
    const auto& bd = instance_.boundary;
    for (std::size_t a = 0; a < e; ++a)
    {
        if (bd[a][a] != 0.0)
        {
            throw std::invalid_argument("boundary distance to self must be zero");
        }
        for (std::size_t b = 0; b < e; ++b)
        {
            if (!(bd[a][b] >= 0.0) || !std::isfinite(bd[a][b]) || bd[a][b] != bd[b][a])
            {
                throw std::invalid_argument("boundary distances must be finite, nonnegative and symmetric");
            }
            for (std::size_t c = 0; c < e; ++c)
            {
                if (bd[a][c] > bd[a][b] + bd[b][c] + 1e-12 * (1.0 + bd[a][c]))
                {
                    throw std::invalid_argument("boundary distances violate the triangle inequality");
                }
            }
        }
    }
    if (instance_.start_exit >= e)
    {
        throw std::invalid_argument("start exit out of range");
    }
    const std::size_t n = instance_.objects.size();
    for (const auto& obj : instance_.objects)
    {
        if (obj.routes.empty())
        {
            throw std::invalid_argument("object '" + obj.label + "' has no routes");
        }
        for (const auto& r : obj.routes)
        {
            if (r.entry >= e || r.leave >= e)
            {
                throw std::invalid_argument("route exit out of range");
            }
            if (!(r.cost >= 0.0) || !std::isfinite(r.cost))
            {
                throw std::invalid_argument("route costs must be finite and nonnegative");
            }
            check_condition(r.when, n);
        }
    }
    // With monotone conditions, removing any accessible object never hurts, so a
    // single greedy sweep decides feasibility.
    RemainingSet s = RemainingSet::all(n);
    while (!s.empty())
    {
        const RemainingSet acc = accessible(s, instance_.start_exit);
        if (acc.empty())
        {
            throw std::invalid_argument("instance has no feasible removal order");
        }
        s = s.minus(acc);
    }
}

RemainingSet TabularCostOracle::accessible(RemainingSet remaining, ExitIndex /*from*/) const
{
    RemainingSet out;
    for (ObjectIndex k : remaining.indices())
    {
        const auto& routes = instance_.objects[k].routes;
        if (std::any_of(routes.begin(), routes.end(), [&](const Route& r) { return r.when.satisfied(remaining); }))
        {
            out = out.with(k);
        }
    }
    return out;
}

double TabularCostOracle::removal_cost(RemainingSet remaining, ExitIndex from, ObjectIndex object, ExitIndex to) const
{
    if (from >= instance_.exit_count || to >= instance_.exit_count || object >= instance_.objects.size())
    {
        throw std::out_of_range("removal_cost index out of range");
    }
    if (!remaining.contains(object))
    {
        return kInfeasible;
    }
    double best = kInfeasible;
    for (const auto& r : instance_.objects[object].routes)
    {
        if (r.leave == to && r.when.satisfied(remaining))
        {
            best = std::min(best, instance_.boundary[from][r.entry] + r.cost);
        }
    }
    return best;
}

double TabularCostOracle::boundary_distance(ExitIndex a, ExitIndex b) const { return instance_.boundary.at(a).at(b); }

}  // namespace crp
