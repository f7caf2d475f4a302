#include "brute_force.hpp"

#include "crp/geometric_oracle.hpp"
#include "crp/instances.hpp"
#include "crp/planners.hpp"
#include "crp/tabular_oracle.hpp"

#include <doctest.h>

#include <random>

using namespace crp;

namespace {

Scene make_scene(const char* code, std::size_t n, std::size_t exits, std::uint64_t seed)
{
    GenSettings g = GenSettings::from_code(code);
    g.n = n;
    g.exits = exits;
    g.seed = seed;
    return generate_scene(g);
}

// Random abstract instance: each object waits for a random subset of lower-indexed
// objects and has a cost that drops once some other object is gone.
AbstractInstance random_abstract(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> cost(1.0, 10.0);
    std::bernoulli_distribution coin(0.3);
    AbstractInstance inst;
    for (std::size_t k = 0; k < n; ++k)
    {
        std::vector<Condition> need;
        for (std::size_t j = 0; j < k; ++j)
        {
            if (coin(rng))
            {
                need.push_back(Condition::removed(j));
            }
        }
        AbstractObject o;
        const double base = cost(rng);
        o.routes.push_back({0, 0, base, Condition::all_of(need)});
        const std::size_t helper = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        if (helper != k)
        {
            need.push_back(Condition::removed(helper));
            o.routes.push_back({0, 0, 0.4 * base, Condition::all_of(need)});
        }
        inst.objects.push_back(o);
    }
    return inst;
}

}  // namespace

TEST_CASE("one object")
{
    const Scene s = make_scene("SRN", 1, 1, 1);
    const GeometricCostOracle oracle(s);
    const SearchState start{s.all_objects(), 0};
    const Plan p = plan_optimal_single_exit(oracle, start, {});
    REQUIRE(p.steps.size() == 1);
    CHECK(p.total_cost == doctest::Approx(oracle.removal_cost(s.all_objects(), 0, 0, 0)));
    CHECK(p.optimal);
    CHECK(plan_greedy(oracle, start, {}).steps == p.steps);
}

TEST_CASE("optimal planners agree with enumeration")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed)
    {
        const Scene s = make_scene(seed % 2 ? "CRN" : "SRO", 6, 1, 40 + seed);
        const GeometricCostOracle oracle(s);
        const SearchState start{s.all_objects(), 0};
        const double bf = oracles::brute_force(oracle, start).cost;
        CHECK(plan_optimal_single_exit(oracle, start, {}).total_cost == doctest::Approx(bf).epsilon(1e-9));
        CHECK(plan_optimal_multi_exit(oracle, start, {}).total_cost == doctest::Approx(bf).epsilon(1e-9));
    }
    std::mt19937_64 rng(9);
    for (int i = 0; i < 10; ++i)
    {
        const TabularCostOracle oracle(random_abstract(rng, 7));
        const SearchState start{RemainingSet::all(7), 0};
        const double bf = oracles::brute_force(oracle, start).cost;
        CHECK(plan_optimal_single_exit(oracle, start, {}).total_cost == doctest::Approx(bf).epsilon(1e-9));
    }
}

TEST_CASE("every pruning switch keeps the optimum")
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 5; ++i)
    {
        const TabularCostOracle oracle(random_abstract(rng, 8));
        const SearchState start{RemainingSet::all(8), 0};
        const double bf = oracles::brute_force(oracle, start).cost;
        for (int mask = 0; mask < 16; ++mask)
        {
            PlannerConfig cfg;
            cfg.use_lower_bound = mask & 1;
            cfg.use_dominance = mask & 2;
            cfg.use_clustering = mask & 4;
            cfg.use_memo = mask & 8;
            CHECK(plan_optimal_single_exit(oracle, start, cfg).total_cost == doctest::Approx(bf).epsilon(1e-9));
        }
    }
}

TEST_CASE("single-exit DP rejects a multi-exit oracle")
{
    const Scene s = make_scene("SRN", 4, 3, 2);
    const GeometricCostOracle oracle(s);
    CHECK_THROWS_AS((void)plan_optimal_single_exit(oracle, {s.all_objects(), 0}, {}), std::invalid_argument);
}

TEST_CASE("greedy is never better than optimal")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const Scene s = make_scene("CRN", 8, 2, 70 + seed);
        const GeometricCostOracle oracle(s);
        const SearchState start{s.all_objects(), 0};
        CHECK(plan_greedy(oracle, start, {}).total_cost >=
              plan_optimal_multi_exit(oracle, start, {}).total_cost - 1e-9);
    }
}

TEST_CASE("greedy gap on the adversarial motif")
{
    const Scene s = generate_adversarial(1);
    const GeometricCostOracle oracle(s);
    const SearchState start{s.all_objects(), 0};
    const Plan g = plan_greedy(oracle, start, {});
    const Plan o = plan_optimal_single_exit(oracle, start, {});
    REQUIRE(g.steps.size() == 4);
    CHECK(o.total_cost < g.total_cost);
    // Greedy takes the cheapest object available at every step.
    RemainingSet rest = s.all_objects();
    for (const auto& st : g.steps)
    {
        for (ObjectIndex k : oracle.accessible(rest, 0).indices())
        {
            CHECK(st.step_cost <= oracle.removal_cost(rest, 0, k, 0));
        }
        rest = rest.without(st.object);
    }
    PlannerConfig cfg;
    cfg.lookahead_depth = 3;
    CHECK(plan_lookahead(oracle, start, cfg).total_cost == doctest::Approx(o.total_cost).epsilon(1e-12));
}

TEST_CASE("lookahead depth one is greedy, full depth is optimal")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i)
    {
        const TabularCostOracle oracle(random_abstract(rng, 6));
        const SearchState start{RemainingSet::all(6), 0};
        PlannerConfig cfg;
        cfg.lookahead_depth = 1;
        CHECK(plan_lookahead(oracle, start, cfg).steps == plan_greedy(oracle, start, cfg).steps);
        cfg.lookahead_depth = 6;
        CHECK(plan_lookahead(oracle, start, cfg).total_cost ==
              doctest::Approx(plan_optimal_single_exit(oracle, start, {}).total_cost).epsilon(1e-9));
    }
}

TEST_CASE("mcts")
{
    SUBCASE("never much worse than greedy")
    {
        for (std::uint64_t seed = 0; seed < 10; ++seed)
        {
            const Scene s = make_scene("CRN", 8, 1, 90 + seed);
            const GeometricCostOracle oracle(s);
            const SearchState start{s.all_objects(), 0};
            PlannerConfig cfg;
            cfg.mcts_iterations = 2000;
            cfg.seed = seed;
            CHECK(plan_mcts(oracle, start, cfg).total_cost <= 1.05 * plan_greedy(oracle, start, cfg).total_cost);
        }
    }
    SUBCASE("forced chain matches greedy")
    {
        AbstractInstance inst;
        for (std::size_t k = 0; k < 5; ++k)
        {
            inst.objects.push_back(
                {"o", {{0, 0, 1.0 + k, k == 0 ? Condition::always() : Condition::removed(k - 1)}}});
        }
        const TabularCostOracle oracle(inst);
        const SearchState start{RemainingSet::all(5), 0};
        CHECK(plan_mcts(oracle, start, {}).steps == plan_greedy(oracle, start, {}).steps);
    }
    SUBCASE("many iterations find the optimum")
    {
        std::mt19937_64 rng(77);
        int hits = 0;
        for (int i = 0; i < 20; ++i)
        {
            const TabularCostOracle oracle(random_abstract(rng, 7));
            const SearchState start{RemainingSet::all(7), 0};
            PlannerConfig cfg;
            cfg.mcts_iterations = 50000;
            cfg.seed = static_cast<std::uint64_t>(i);
            const double opt = plan_optimal_single_exit(oracle, start, {}).total_cost;
            hits += std::abs(plan_mcts(oracle, start, cfg).total_cost - opt) <= 1e-9 * opt ? 1 : 0;
        }
        CHECK(hits >= 18);
    }
}

TEST_CASE("voronoi composition")
{
    SUBCASE("one exit is the inner planner")
    {
        const Scene s = make_scene("SRN", 8, 1, 31);
        const GeometricCostOracle oracle(s);
        const SearchState start{s.all_objects(), 0};
        CHECK(plan_voronoi(s, oracle, start, InnerPlanner::greedy, {}).steps == plan_greedy(oracle, start, {}).steps);
    }
    SUBCASE("symmetric clutter splits evenly")
    {
        Scene s;
        s.workspace.outer = {{0, 0}, {10, 0}, {10, 6}, {0, 6}};
        s.exits = {{{0, 3}}, {{10, 3}}};
        for (double y : {1.5, 3.0, 4.5})
        {
            s.objects.push_back({OrientedRect{{3.0, y}, 0.4, 0.3, 0.0}, 0});
            s.objects.push_back({OrientedRect{{7.0, y}, 0.4, 0.3, 0.0}, 0});
        }
        s.finalize();
        const GeometricCostOracle oracle(s);
        const Plan p = plan_voronoi(s, oracle, {s.all_objects(), 0}, InnerPlanner::optimal, {});
        int left = 0;
        for (const auto& st : p.steps)
        {
            left += st.to_exit == 0 ? 1 : 0;
        }
        CHECK(std::abs(2 * left - 6) <= 2);
    }
    SUBCASE("within one perimeter of greedy")
    {
        for (std::uint64_t seed = 0; seed < 5; ++seed)
        {
            const Scene s = make_scene("SRN", 12, 3, 300 + seed);
            const GeometricCostOracle oracle(s);
            const SearchState start{s.all_objects(), 0};
            const Plan v = plan_voronoi(s, oracle, start, InnerPlanner::greedy, {});
            CHECK(v.steps.size() == 12);
            CHECK(v.total_cost <= plan_greedy(oracle, start, {}).total_cost + s.perimeter());
        }
    }
}

TEST_CASE("lower bound")
{
    const Scene s = make_scene("CRN", 7, 1, 12);
    const GeometricCostOracle oracle(s);
    CHECK(lower_bound(oracle, {RemainingSet{}, 0}) == 0.0);
    CHECK(lower_bound(oracle, {s.all_objects(), 0}) <=
          plan_optimal_single_exit(oracle, {s.all_objects(), 0}, {}).total_cost + 1e-9);
    CHECK(lower_bound(oracle, {RemainingSet::of({3}), 0}) ==
          doctest::Approx(oracle.removal_cost(RemainingSet::of({3}), 0, 3, 0)));
    std::mt19937_64 rng(8);
    for (int i = 0; i < 10; ++i)
    {
        const TabularCostOracle t(random_abstract(rng, 8));
        CHECK(lower_bound(t, {RemainingSet::all(8), 0}) <=
              plan_optimal_single_exit(t, {RemainingSet::all(8), 0}, {}).total_cost + 1e-9);
    }
}

TEST_CASE("timeout returns the best plan found so far")
{
    std::mt19937_64 rng(3);
    const TabularCostOracle oracle(random_abstract(rng, 40));
    PlannerConfig cfg;
    cfg.time_limit = 1e-4;
    cfg.use_dominance = false;
    cfg.use_lower_bound = false;
    const Plan p = plan_optimal_single_exit(oracle, {RemainingSet::all(40), 0}, cfg);
    CHECK(p.timed_out);
    CHECK_FALSE(p.optimal);
    CHECK(p.steps.size() == 40);
    CHECK(replay_cost(oracle, {RemainingSet::all(40), 0}, p) == doctest::Approx(p.total_cost));
}

TEST_CASE("multi-exit DP on a lemma instance")
{
    const MpsatFormula f{2, {{0, 1}}, {{1}}};
    const AbstractInstance inst = reduce_mpsat(f, 1.0, 20.0);
    const TabularCostOracle oracle(inst);
    const Plan p = plan_optimal_multi_exit(oracle, {RemainingSet::all(inst.object_count()), inst.start_exit}, {});
    CHECK(p.total_cost == doctest::Approx(inst.param("target")).epsilon(1e-12));
}

TEST_CASE("run_planner dispatch")
{
    const Scene s = make_scene("SRN", 5, 1, 8);
    const GeometricCostOracle oracle(s);
    const SearchState start{s.all_objects(), 0};
    for (const char* name : {"optimal", "greedy", "lookahead", "mcts", "voronoi"})
    {
        CHECK(run_planner(name, oracle, start, {}, &s).steps.size() == 5);
    }
    CHECK_THROWS_AS((void)run_planner("nope", oracle, start, {}, &s), std::invalid_argument);
}
