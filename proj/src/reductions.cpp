#include "crp/instances.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

namespace crp {

namespace {

struct Span
{
    std::size_t lo;
    std::size_t hi;
};

Span span_of(const std::vector<std::size_t>& clause)
{
    const auto [lo, hi] = std::minmax_element(clause.begin(), clause.end());
    return {*lo, *hi};
}

void validate_side(const std::vector<std::vector<std::size_t>>& clauses, std::size_t n_vars, const char* side)
{
    for (const auto& c : clauses)
    {
        if (c.empty() || c.size() > 3)
        {
            throw std::invalid_argument(std::string("each ") + side + " clause needs one to three literals");
        }
        if (std::set<std::size_t>(c.begin(), c.end()).size() != c.size())
        {
            throw std::invalid_argument(std::string("repeated variable in a ") + side + " clause");
        }
        if (std::any_of(c.begin(), c.end(), [&](std::size_t v) { return v >= n_vars; }))
        {
            throw std::invalid_argument(std::string("variable index out of range in a ") + side + " clause");
        }
    }
    for (std::size_t a = 0; a < clauses.size(); ++a)
    {
        for (std::size_t b = 0; b < clauses.size(); ++b)
        {
            if (a == b)
            {
                continue;
            }
            const Span sa = span_of(clauses[a]);
            const Span sb = span_of(clauses[b]);
            if (sa.lo == sb.lo && sa.hi == sb.hi)
            {
                throw std::invalid_argument(std::string("two ") + side + " clauses span the same variables");
            }
            const bool disjoint = sa.hi <= sb.lo || sb.hi <= sa.lo;
            const bool b_in_a = sa.lo <= sb.lo && sb.hi <= sa.hi;
            const bool a_in_b = sb.lo <= sa.lo && sa.hi <= sb.hi;
            if (!disjoint && !b_in_a && !a_in_b)
            {
                throw std::invalid_argument(std::string("crossing ") + side + " clauses: the embedding is not planar");
            }
            // An outer clause cannot reach a variable strictly under an inner one.
            if (b_in_a && !disjoint)
            {
                for (std::size_t v : clauses[a])
                {
                    if (sb.lo < v && v < sb.hi)
                    {
                        throw std::invalid_argument(std::string("a ") + side +
                                                    " clause reaches a variable under a nested clause");
                    }
                }
            }
        }
    }
}

enum class Leg
{
    left_group,   // the variable is the right end: the clause extends left
    right_group,  // the variable is the left end
    both,         // interior or single-variable clause
};

Leg leg_of(const std::vector<std::size_t>& clause, std::size_t v)
{
    const Span s = span_of(clause);
    if (s.lo == s.hi || (s.lo < v && v < s.hi))
    {
        return Leg::both;
    }
    return v == s.hi ? Leg::left_group : Leg::right_group;
}

bool needs_two_pairs(const std::vector<std::vector<std::size_t>>& clauses, std::size_t v)
{
    bool left = false;
    bool right = false;
    for (const auto& c : clauses)
    {
        if (std::find(c.begin(), c.end(), v) == c.end())
        {
            continue;
        }
        const Leg l = leg_of(c, v);
        left = left || l == Leg::left_group;
        right = right || l == Leg::right_group;
    }
    return left && right;
}

/// Clause index of the innermost clause on one side, ties to the lower index.
std::optional<std::size_t> lowest_clause(const std::vector<std::vector<std::size_t>>& clauses)
{
    std::optional<std::size_t> best;
    std::size_t width = 0;
    for (std::size_t c = 0; c < clauses.size(); ++c)
    {
        const Span s = span_of(clauses[c]);
        if (!best || s.hi - s.lo < width)
        {
            best = c;
            width = s.hi - s.lo;
        }
    }
    return best;
}

Route route(ExitIndex entry, ExitIndex leave, double cost, Condition when = Condition::always())
{
    return {entry, leave, cost, std::move(when)};
}

/// Shared selector / connector / clause bookkeeping for the Appendix layouts.
struct Layout
{
    std::vector<std::size_t> pairs;                              // per variable
    std::vector<std::vector<ObjectIndex>> pos;                   // selectors per variable
    std::vector<std::vector<ObjectIndex>> neg;
    std::vector<std::vector<ObjectIndex>> selector_connectors;   // by object index
    std::vector<std::vector<ObjectIndex>> connector_selectors;   // by object index
    std::vector<ObjectIndex> connector_clause;                   // by object index
    std::vector<bool> connector_positive;                        // by object index
    std::vector<ObjectIndex> clause_objects;                     // positive then negative
    std::vector<std::vector<ObjectIndex>> clause_connectors;     // by clause position
    ObjectIndex black = 0;
    std::size_t n_prime = 0;
    std::vector<AbstractObject> objects;

    explicit Layout(const MpsatFormula& f)
    {
        for (const auto& shape : gadget_shapes(f))
        {
            pairs.push_back(shape.selector_pairs);
            n_prime += shape.selector_pairs;
        }
        auto add = [&](std::string label) {
            objects.push_back({std::move(label), {}});
            return static_cast<ObjectIndex>(objects.size() - 1);
        };
        for (std::size_t i = 0; i < f.n_vars; ++i)
        {
            pos.emplace_back();
            neg.emplace_back();
            for (std::size_t p = 0; p < pairs[i]; ++p)
            {
                pos[i].push_back(add("pos_selector_" + std::to_string(i) + "_" + std::to_string(p)));
            }
            for (std::size_t p = 0; p < pairs[i]; ++p)
            {
                neg[i].push_back(add("neg_selector_" + std::to_string(i) + "_" + std::to_string(p)));
            }
        }
        const std::size_t m = f.clause_count();
        clause_connectors.resize(m);
        std::vector<std::pair<std::size_t, ObjectIndex>> pending;  // (clause position, connector)
        auto side_connectors = [&](const std::vector<std::vector<std::size_t>>& clauses, bool positive,
                                   std::size_t offset) {
            for (std::size_t c = 0; c < clauses.size(); ++c)
            {
                for (std::size_t v : clauses[c])
                {
                    const ObjectIndex k = add(std::string(positive ? "pos" : "neg") + "_connector_c" +
                                              std::to_string(offset + c) + "_x" + std::to_string(v));
                    const auto& sel = positive ? pos[v] : neg[v];
                    std::vector<ObjectIndex> attached;
                    if (sel.size() == 1)
                    {
                        attached = sel;
                    }
                    else
                    {
                        switch (leg_of(clauses[c], v))
                        {
                        case Leg::left_group: attached = {sel[0]}; break;
                        case Leg::right_group: attached = {sel[1]}; break;
                        case Leg::both: attached = sel; break;
                        }
                    }
                    connector_selectors.resize(k + 1);
                    connector_selectors[k] = attached;
                    connector_positive.resize(k + 1);
                    connector_positive[k] = positive;
                    pending.emplace_back(offset + c, k);
                }
            }
        };
        side_connectors(f.positive, true, 0);
        side_connectors(f.negative, false, f.positive.size());
        black = add("black");
        for (std::size_t c = 0; c < m; ++c)
        {
            clause_objects.push_back(add("clause_c" + std::to_string(c)));
        }
        selector_connectors.resize(objects.size());
        connector_selectors.resize(objects.size());
        connector_positive.resize(objects.size());
        connector_clause.assign(objects.size(), 0);
        for (const auto& [c, k] : pending)
        {
            connector_clause[k] = clause_objects[c];
            clause_connectors[c].push_back(k);
            for (ObjectIndex s : connector_selectors[k])
            {
                selector_connectors[s].push_back(k);
            }
        }
    }

    [[nodiscard]] Condition passage(std::size_t i) const
    {
        return Condition::any_of({Condition::all_removed(pos[i]), Condition::all_removed(neg[i])});
    }
    [[nodiscard]] Condition passages_before(std::size_t i) const
    {
        std::vector<Condition> c;
        for (std::size_t j = 0; j < i; ++j)
        {
            c.push_back(passage(j));
        }
        return Condition::all_of(std::move(c));
    }
};

}  // namespace

void MpsatFormula::validate() const
{
    if (n_vars < 1)
    {
        throw std::invalid_argument("formula needs at least one variable");
    }
    if (n_vars > kMaxObjects)
    {
        throw std::invalid_argument("too many variables");
    }
    validate_side(positive, n_vars, "positive");
    validate_side(negative, n_vars, "negative");
}

bool MpsatFormula::satisfied_by(const std::vector<bool>& assignment) const
{
    if (assignment.size() != n_vars)
    {
        throw std::invalid_argument("assignment size does not match the variable count");
    }
    auto any = [&](const std::vector<std::size_t>& c, bool value) {
        return std::any_of(c.begin(), c.end(), [&](std::size_t v) { return assignment[v] == value; });
    };
    return std::all_of(positive.begin(), positive.end(), [&](const auto& c) { return any(c, true); }) &&
           std::all_of(negative.begin(), negative.end(), [&](const auto& c) { return any(c, false); });
}

bool MpsatFormula::satisfiable() const
{
    if (n_vars > 24)
    {
        throw std::invalid_argument("brute-force satisfiability is limited to 24 variables");
    }
    std::vector<bool> a(n_vars);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n_vars); ++bits)
    {
        for (std::size_t v = 0; v < n_vars; ++v)
        {
            a[v] = ((bits >> v) & 1U) != 0;
        }
        if (satisfied_by(a))
        {
            return true;
        }
    }
    return false;
}

std::vector<GadgetShape> gadget_shapes(const MpsatFormula& formula)
{
    formula.validate();
    std::vector<GadgetShape> shapes(formula.n_vars);
    for (std::size_t v = 0; v < formula.n_vars; ++v)
    {
        const bool two = needs_two_pairs(formula.positive, v) || needs_two_pairs(formula.negative, v);
        shapes[v].selector_pairs = two ? 2 : 1;
    }
    return shapes;
}

std::size_t n_prime(const MpsatFormula& formula)
{
    std::size_t total = 0;
    for (const auto& s : gadget_shapes(formula))
    {
        total += s.selector_pairs;
    }
    return total;
}

AbstractInstance reduce_mpsat(const MpsatFormula& f, double w1, double w2)
{
    f.validate();
    if (!(w1 > 0.0) || w2 < 10.0 * static_cast<double>(f.n_vars) * w1)
    {
        throw std::invalid_argument("reduce_mpsat needs w1 > 0 and w2 >= 10 n w1");
    }
    constexpr ExitIndex L = 0;
    constexpr ExitIndex M = 1;
    constexpr ExitIndex R = 2;
    const std::size_t n = f.n_vars;
    const std::size_t m = f.clause_count();

    std::size_t incidences = 0;
    for (const auto& c : f.positive)
    {
        incidences += c.size();
    }
    for (const auto& c : f.negative)
    {
        incidences += c.size();
    }
    const std::size_t count = 3 * n + incidences + 1 + m + 2;
    const double eps = w1 / (100.0 * static_cast<double>(count));
    const double side = w1 + w2;

    AbstractInstance inst;
    inst.exit_count = 3;
    inst.boundary = {{0.0, side, 2.0 * side}, {side, 0.0, side}, {2.0 * side, side, 0.0}};
    inst.start_exit = M;
    inst.objects.resize(count);

    auto green = [](std::size_t i) { return static_cast<ObjectIndex>(3 * i); };
    auto orange = [](std::size_t i) { return static_cast<ObjectIndex>(3 * i + 1); };
    auto purple = [](std::size_t i) { return static_cast<ObjectIndex>(3 * i + 2); };
    const ObjectIndex cap = static_cast<ObjectIndex>(3 * n + incidences);
    auto clause_obj = [&](std::size_t c) { return static_cast<ObjectIndex>(cap + 1 + c); };
    const ObjectIndex gray_pos = static_cast<ObjectIndex>(cap + 1 + m);
    const ObjectIndex gray_neg = static_cast<ObjectIndex>(gray_pos + 1);

    std::vector<std::vector<ObjectIndex>> sel_conn(count);
    std::vector<std::vector<ObjectIndex>> clause_conn(m);
    ObjectIndex next = static_cast<ObjectIndex>(3 * n);
    auto connectors = [&](const std::vector<std::vector<std::size_t>>& clauses, bool positive, std::size_t offset) {
        for (std::size_t c = 0; c < clauses.size(); ++c)
        {
            for (std::size_t v : clauses[c])
            {
                const ObjectIndex k = next++;
                const ObjectIndex sel = positive ? green(v) : orange(v);
                const ExitIndex x = positive ? L : R;
                inst.objects[k] = {std::string(positive ? "lime_c" : "yellow_c") + std::to_string(offset + c) + "_x" +
                                       std::to_string(v),
                                   {route(M, M, eps, Condition::removed(sel)),
                                    route(x, x, eps, Condition::removed(clause_obj(offset + c)))}};
                sel_conn[sel].push_back(k);
                clause_conn[offset + c].push_back(k);
            }
        }
    };
    connectors(f.positive, true, 0);
    connectors(f.negative, false, f.positive.size());

    std::vector<Condition> each_var;
    for (std::size_t i = 0; i < n; ++i)
    {
        for (ObjectIndex s : {green(i), orange(i)})
        {
            inst.objects[s] = {std::string(s == green(i) ? "green_x" : "orange_x") + std::to_string(i),
                               {route(M, M, 2.0 * w1),
                                route(M, M, eps,
                                      Condition::all_of({Condition::removed(purple(i)),
                                                         Condition::all_removed(sel_conn[s])}))}};
        }
        inst.objects[purple(i)] = {"purple_x" + std::to_string(i),
                                   {route(M, M, eps, Condition::any_removed({green(i), orange(i)}))}};
        each_var.push_back(Condition::any_removed({green(i), orange(i)}));
    }
    inst.objects[cap] = {"cap",
                         {route(M, M, eps, Condition::all_of(each_var)), route(L, L, 2.0 * side + eps),
                          route(R, R, 2.0 * side + eps)}};
    for (std::size_t c = 0; c < m; ++c)
    {
        const ExitIndex x = c < f.positive.size() ? L : R;
        inst.objects[clause_obj(c)] = {
            (x == L ? "blue_c" : "cyan_c") + std::to_string(c),
            {route(x, x, eps, Condition::all_of({Condition::removed(cap), Condition::any_removed(clause_conn[c])})),
             route(M, M, 2.0 * side + eps, Condition::any_removed(clause_conn[c]))}};
    }
    auto gray = [&](const std::vector<std::vector<std::size_t>>& clauses, std::size_t offset) {
        const auto low = lowest_clause(clauses);
        return low ? Condition::removed(clause_obj(offset + *low)) : Condition::always();
    };
    inst.objects[gray_pos] = {"gray_pos", {route(M, M, eps, gray(f.positive, 0))}};
    inst.objects[gray_neg] = {"gray_neg", {route(M, M, eps, gray(f.negative, f.positive.size()))}};

    const double eps_terms = static_cast<double>(count - n);
    inst.params = {{"w1", w1},
                   {"w2", w2},
                   {"epsilon", eps},
                   {"eps_count", eps_terms},
                   {"n", static_cast<double>(n)},
                   {"m", static_cast<double>(m)},
                   {"target", (2.0 * static_cast<double>(n) + 4.0) * w1 + 4.0 * w2 + eps_terms * eps}};
    return inst;
}

AbstractInstance reduce_mpsat_single_exit(const MpsatFormula& f, double w, AppendixVariant variant)
{
    f.validate();
    if (!(w > 0.0))
    {
        throw std::invalid_argument("reduce_mpsat_single_exit needs w > 0");
    }
    Layout lay(f);
    const std::size_t count = lay.objects.size();
    const std::size_t m = f.clause_count();
    const double eps = w / (100.0 * static_cast<double>(count));
    const auto np = static_cast<double>(lay.n_prime);
    auto& objs = lay.objects;

    AbstractInstance inst;
    if (variant == AppendixVariant::three_exit)
    {
        constexpr ExitIndex T = 0;
        constexpr ExitIndex M = 1;
        constexpr ExitIndex B = 2;
        inst.exit_count = 3;
        inst.boundary = {{0.0, w, 2.0 * w}, {w, 0.0, w}, {2.0 * w, w, 0.0}};
        inst.start_exit = M;
        for (std::size_t i = 0; i < f.n_vars; ++i)
        {
            for (bool positive : {true, false})
            {
                const ExitIndex x = positive ? T : B;
                for (ObjectIndex s : positive ? lay.pos[i] : lay.neg[i])
                {
                    objs[s].routes = {route(M, M, 2.0 * w, lay.passages_before(i)),
                                      route(x, x, eps,
                                            Condition::all_of({Condition::removed(lay.black),
                                                               Condition::all_removed(lay.selector_connectors[s])}))};
                }
            }
        }
        for (ObjectIndex k = 0; k < count; ++k)
        {
            if (!lay.connector_selectors[k].empty())
            {
                const ExitIndex x = lay.connector_positive[k] ? T : B;
                objs[k].routes = {route(M, M, eps, Condition::any_removed(lay.connector_selectors[k])),
                                  route(x, x, eps, Condition::removed(lay.connector_clause[k]))};
            }
        }
        objs[lay.black].routes = {route(M, M, eps, lay.passages_before(f.n_vars))};
        for (std::size_t c = 0; c < m; ++c)
        {
            const ExitIndex x = c < f.positive.size() ? T : B;
            objs[lay.clause_objects[c]].routes = {
                route(x, x, eps,
                      Condition::all_of(
                          {Condition::removed(lay.black), Condition::any_removed(lay.clause_connectors[c])}))};
        }
        const double eps_terms = static_cast<double>(count) - np;
        inst.params["target"] = (2.0 * np + 3.0) * w + eps_terms * eps;
        inst.params["eps_count"] = eps_terms;
    }
    else
    {
        constexpr ExitIndex X = 0;
        inst.exit_count = 1;
        inst.boundary = {{0.0}};
        inst.start_exit = X;
        for (std::size_t i = 0; i < f.n_vars; ++i)
        {
            for (const auto* group : {&lay.pos[i], &lay.neg[i]})
            {
                for (ObjectIndex s : *group)
                {
                    objs[s].routes = {
                        route(X, X, 4.0 * w, lay.passages_before(i)),
                        // From the inner side: a selector plus connector detour.
                        route(X, X, 4.0 * w, Condition::removed(lay.black)),
                        route(X, X, eps,
                              Condition::all_of({Condition::removed(lay.black),
                                                 Condition::all_removed(lay.selector_connectors[s])}))};
                }
            }
        }
        for (ObjectIndex k = 0; k < count; ++k)
        {
            if (!lay.connector_selectors[k].empty())
            {
                objs[k].routes = {route(X, X, 2.0 * w, Condition::any_removed(lay.connector_selectors[k])),
                                  route(X, X, eps, Condition::removed(lay.connector_clause[k]))};
            }
        }
        objs[lay.black].routes = {route(X, X, 2.0 * w, lay.passages_before(f.n_vars))};
        for (std::size_t c = 0; c < m; ++c)
        {
            objs[lay.clause_objects[c]].routes = {route(
                X, X, eps,
                Condition::all_of({Condition::removed(lay.black), Condition::any_removed(lay.clause_connectors[c])}))};
        }
        const double eps_terms = static_cast<double>(count) - np - static_cast<double>(m) - 1.0;
        inst.params["target"] = (4.0 * np + 2.0 * static_cast<double>(m) + 2.0) * w + eps_terms * eps;
        inst.params["eps_count"] = eps_terms;
    }
    inst.objects = std::move(objs);
    inst.params["w"] = w;
    inst.params["epsilon"] = eps;
    inst.params["n_prime"] = np;
    inst.params["m"] = static_cast<double>(m);
    return inst;
}

}  // namespace crp
