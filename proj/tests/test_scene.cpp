#include "crp/geometric_oracle.hpp"
#include "crp/instances.hpp"
#include "crp/scene.hpp"
#include "crp/tabular_oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace crp;

namespace {

Scene room(double w, double h, std::vector<SceneObject> objects, std::vector<Point2> exits = {{5, 0}})
{
    Scene s;
    s.workspace.outer = {{0, 0}, {w, 0}, {w, h}, {0, h}};
    s.objects = std::move(objects);
    for (auto p : exits)
    {
        s.exits.push_back({p});
    }
    s.finalize();
    return s;
}

SceneObject box(double cx, double cy, double hx, double hy, int height = 0)
{
    return {OrientedRect{{cx, cy}, hx, hy, 0.0}, height};
}

bool has(const std::vector<GraspCandidate>& g, ObjectIndex k)
{
    return std::any_of(g.begin(), g.end(), [&](const GraspCandidate& c) { return c.object == k; });
}

}  // namespace

TEST_CASE("single object in an empty room")
{
    // Object straight ahead of the exit; its bottom edge is 2.5 away and the robot
    // stands 0.2 off it.
    const Scene s = room(10, 10, {box(5, 3, 0.5, 0.5)});
    const auto g = graspable(s, s.all_objects(), 0);
    REQUIRE(g.size() == 1);
    // Grasp poses are sampled along the edge, so the nearest one is slightly off axis.
    CHECK(g[0].approach_cost >= 2.3 - 1e-12);
    CHECK(g[0].approach_cost <= 2.3 + 1e-3);
    CHECK(g[0].approach_cost == doctest::Approx(distance(s.exits[0].position, g[0].pose.robot_position)));

    const GeometricCostOracle oracle(s);
    CHECK(oracle.removal_cost(s.all_objects(), 0, 0, 0) == doctest::Approx(2.0 * g[0].approach_cost).epsilon(1e-12));
}

TEST_CASE("ringed object needs a neighbour removed")
{
    // Centre box boxed in by four touching boxes.
    const Scene s = room(10, 10,
                         {box(5, 5, 0.5, 0.5), box(5, 3.5, 1.5, 1.0), box(5, 6.5, 1.5, 1.0), box(4.0, 5, 0.5, 0.5),
                          box(6.0, 5, 0.5, 0.5)});
    const RemainingSet all = s.all_objects();
    CHECK_FALSE(has(graspable(s, all, 0), 0));
    CHECK(has(graspable(s, all.without(1), 0), 0));
    const GeometricCostOracle oracle(s);
    CHECK_FALSE(oracle.accessible(all, 0).contains(0));
    CHECK(oracle.removal_cost(all, 0, 0, 0) == kInfeasible);
    CHECK(std::isfinite(oracle.removal_cost(all.without(1), 0, 0, 0)));
}

TEST_CASE("stacked objects: only the top one is graspable")
{
    const Scene s = room(10, 10, {box(5, 5, 1.0, 0.5, 0), box(5.5, 5.2, 0.8, 0.5, 1)});
    const auto g = graspable(s, s.all_objects(), 0);
    CHECK_FALSE(has(g, 0));
    CHECK(has(g, 1));
    CHECK(has(graspable(s, RemainingSet::of({0}), 0), 0));
}

TEST_CASE("equal stack heights may not overlap")
{
    CHECK_THROWS_AS(room(10, 10, {box(5, 5, 1, 1), box(5.5, 5, 1, 1)}), SceneError);
}

TEST_CASE("removal cost never rises when objects leave")
{
    GenSettings g = GenSettings::from_code("CRN");
    g.n = 8;
    g.exits = 2;
    g.seed = 17;
    const Scene s = generate_scene(g);
    const GeometricCostOracle oracle(s);
    const RemainingSet all = s.all_objects();
    for (ObjectIndex k = 0; k < s.objects.size(); ++k)
    {
        for (ObjectIndex i = 0; i < s.objects.size(); ++i)
        {
            if (i == k)
            {
                continue;
            }
            for (ExitIndex e = 0; e < 2; ++e)
            {
                for (ExitIndex j = 0; j < 2; ++j)
                {
                    CHECK(oracle.removal_cost(all.without(i), e, k, j) <= oracle.removal_cost(all, e, k, j) + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("boundary entry inequality holds")
{
    GenSettings g = GenSettings::from_code("SRN");
    g.n = 6;
    g.exits = 3;
    g.seed = 4;
    const Scene s = generate_scene(g);
    const GeometricCostOracle oracle(s);
    const RemainingSet all = s.all_objects();
    for (ObjectIndex k : oracle.accessible(all, 0).indices())
    {
        for (ExitIndex e = 0; e < 3; ++e)
        {
            for (ExitIndex x = 0; x < 3; ++x)
            {
                for (ExitIndex j = 0; j < 3; ++j)
                {
                    CHECK(oracle.removal_cost(all, e, k, j) <=
                          oracle.boundary_distance(e, x) + oracle.removal_cost(all, x, k, j) + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("voronoi labels")
{
    SUBCASE("single exit")
    {
        const Scene s = room(10, 10, {box(2, 2, 0.3, 0.3), box(8, 8, 0.3, 0.3)});
        CHECK(voronoi_labels(s) == std::vector<ExitIndex>{0, 0});
    }
    SUBCASE("left and right exits")
    {
        const Scene s = room(10, 10, {box(3, 5, 0.3, 0.3), box(7.5, 5, 0.3, 0.3)}, {{10, 5}, {0, 5}});
        CHECK(voronoi_labels(s) == std::vector<ExitIndex>{1, 0});
    }
}

TEST_CASE("clusters")
{
    SUBCASE("far apart")
    {
        const Scene s = room(10, 10, {box(2, 5, 0.5, 0.5), box(8, 5, 0.5, 0.5)});
        CHECK(clusters(s).size() == 2);
    }
    SUBCASE("touching chain")
    {
        const Scene s = room(10, 10, {box(3, 5, 0.5, 0.5), box(4, 5, 0.5, 0.5), box(5, 5, 0.5, 0.5), box(6, 5, 0.5, 0.5)});
        CHECK(clusters(s).size() == 1);
    }
    SUBCASE("random scene clusters are independent")
    {
        GenSettings g = GenSettings::from_code("SRN");
        g.n = 20;
        g.seed = 3;
        const Scene s = generate_scene(g);
        const GeometricCostOracle oracle(s);
        const auto parts = oracle.object_clusters();
        std::size_t total = 0;
        for (const auto& c : parts)
        {
            total += c.size();
        }
        CHECK(total == 20);
        // Graspability inside a cluster ignores everything outside it. Travel costs
        // may still differ, since paths can cross other clusters.
        std::mt19937_64 rng(5);
        for (int t = 0; t < 100; ++t)
        {
            const RemainingSet sub(rng() & s.all_objects().bits());
            for (const auto& c : parts)
            {
                RemainingSet members;
                for (auto i : c)
                {
                    members = members.with(i);
                }
                std::vector<ObjectIndex> global;
                std::vector<ObjectIndex> local;
                for (const auto& g : graspable(s, sub, 0))
                {
                    if (members.contains(g.object))
                    {
                        global.push_back(g.object);
                    }
                }
                for (const auto& g : graspable(s, sub & members, 0))
                {
                    local.push_back(g.object);
                }
                CHECK(global == local);
            }
        }
    }
}

TEST_CASE("tabular oracle")
{
    SUBCASE("no preconditions")
    {
        AbstractInstance inst;
        for (int i = 0; i < 3; ++i)
        {
            inst.objects.push_back({"o", {{0, 0, 1.0, Condition::always()}}});
        }
        const TabularCostOracle oracle(inst);
        CHECK(oracle.accessible(RemainingSet::all(3), 0) == RemainingSet::all(3));
        CHECK(oracle.removal_cost(RemainingSet::all(3), 0, 2, 0) == 1.0);
    }
    SUBCASE("precedence")
    {
        AbstractInstance inst;
        inst.objects.push_back({"o1", {{0, 0, 1.0, Condition::always()}}});
        inst.objects.push_back({"o2", {{0, 0, 1.0, Condition::removed(0)}}});
        const TabularCostOracle oracle(inst);
        CHECK(oracle.accessible(RemainingSet::all(2), 0) == RemainingSet::of({0}));
        CHECK(oracle.accessible(RemainingSet::of({1}), 0) == RemainingSet::of({1}));
    }
    SUBCASE("non-monotone condition is rejected")
    {
        AbstractInstance inst;
        inst.objects.push_back({"o1", {{0, 0, 1.0, Condition::always()}}});
        inst.objects.push_back({"o2", {{0, 0, 1.0, Condition::present(0)}}});
        CHECK_THROWS_AS(TabularCostOracle{inst}, std::invalid_argument);
    }
    SUBCASE("empty disjunction is false, empty conjunction is true")
    {
        CHECK_FALSE(Condition::any_of({}).satisfied(RemainingSet{}));
        CHECK(Condition::all_of({}).satisfied(RemainingSet::all(4)));
    }
}

TEST_CASE("monotone feasibility check")
{
    SUBCASE("geometric oracle passes")
    {
        GenSettings g = GenSettings::from_code("SRN");
        g.n = 7;
        g.seed = 12;
        const GeometricCostOracle oracle(generate_scene(g));
        CHECK_FALSE(verify_monotone_feasibility(oracle, 7, 0, 1, true).has_value());
    }
    SUBCASE("non-monotone tabular instance is caught")
    {
        AbstractInstance inst;
        inst.objects.push_back({"a", {{0, 0, 1.0, Condition::always()}}});
        inst.objects.push_back({"b", {{0, 0, 1.0, Condition::present(0)}}});
        inst.objects.push_back({"c", {{0, 0, 1.0, Condition::always()}}});
        const auto oracle = TabularCostOracle::unchecked(inst);
        const auto v = verify_monotone_feasibility(oracle, 3, 0, 1, true);
        REQUIRE(v.has_value());
        CHECK(v->object == 1);
    }
    SUBCASE("lemma instance passes")
    {
        const MpsatFormula f{2, {{0, 1}}, {{1}}};
        const TabularCostOracle oracle(reduce_mpsat(f, 1.0, 30.0));
        REQUIRE(oracle.object_count() <= 16);
        CHECK_FALSE(verify_monotone_feasibility(oracle, oracle.object_count(), 0, 1, true).has_value());
    }
}
