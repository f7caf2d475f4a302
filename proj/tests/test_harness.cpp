#include "crp/harness.hpp"
#include "crp/instances.hpp"
#include "crp/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <sstream>

using namespace crp;

namespace {

Scene small_scene(std::size_t n, std::uint64_t seed)
{
    GenSettings g = GenSettings::from_code("SRN");
    g.n = n;
    g.seed = seed;
    return generate_scene(g);
}

std::size_t count_lines(const std::string& text, const std::string& needle)
{
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);)
    {
        n += line.find(needle) != std::string::npos ? 1 : 0;
    }
    return n;
}

std::size_t count(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
    {
        ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("scene JSON round trip")
{
    const Scene s = small_scene(6, 5);
    const std::string text = scene_to_json(s);
    const Scene back = scene_from_json(text);
    CHECK(scene_to_json(back) == text);
    REQUIRE(back.objects.size() == 6);
    CHECK(back.objects[3].shape.center == s.objects[3].shape.center);
    CHECK(back.exits[0].arc == s.exits[0].arc);
}

TEST_CASE("strict parsing rejects unknown fields")
{
    auto j = nlohmann::json::parse(scene_to_json(small_scene(2, 1)));
    j["objects"][0]["colour"] = "red";
    CHECK_THROWS_AS(scene_from_json(j.dump(), true), ParseError);
    CHECK_NOTHROW(scene_from_json(j.dump(), false));
    CHECK_THROWS_AS(scene_from_json("{ not json"), ParseError);
    auto v = nlohmann::json::parse(scene_to_json(small_scene(2, 1)));
    v["version"] = 99;
    CHECK_THROWS_AS(scene_from_json(v.dump()), ParseError);
}

TEST_CASE("instance and formula round trip")
{
    const MpsatFormula f{3, {{0, 1}, {2}}, {{1, 2}}};
    const MpsatFormula f2 = formula_from_json(formula_to_json(f));
    CHECK(f2.n_vars == 3);
    CHECK(f2.positive == f.positive);
    CHECK(f2.negative == f.negative);

    const AbstractInstance inst = reduce_mpsat(f, 1.0, 30.0);
    const std::string text = instance_to_json(inst);
    const AbstractInstance back = instance_from_json(text);
    CHECK(instance_to_json(back) == text);
    CHECK(back.param("target") == inst.param("target"));

    const Document d = document_from_json(text);
    CHECK(std::holds_alternative<AbstractInstance>(d));
}

TEST_CASE("solve_once records a replayable plan")
{
    const Scene s = small_scene(5, 2);
    const GeometricCostOracle oracle(s);
    PlannerConfig cfg;
    cfg.seed = 11;
    const RunRecord r = solve_once("case", oracle, {s.all_objects(), 0}, "greedy", cfg, &s);
    CHECK(r.plan.steps.size() == 5);
    CHECK(r.version == std::string(code_version()));
    const auto j = nlohmann::json::parse(run_record_json(r));
    CHECK(j["planner"] == "greedy");
    CHECK(j["seed"] == 11);
    CHECK(j["steps"].size() == 5);
    CHECK(j["total_cost"].get<double>() == doctest::Approx(r.plan.total_cost));
}

TEST_CASE("bench rows and aggregates")
{
    BenchSpec spec;
    spec.ns = {5, 10};
    spec.planners = {"optimal", "greedy"};
    spec.cases = 3;
    spec.seed = 4;
    const BenchResult single = run_bench(spec);
    const std::string csv = bench_csv(single);
    CHECK(count_lines(csv, ",run,") == 12);
    CHECK(count_lines(csv, ",aggregate,") == 4);
    CHECK(single.cells.size() == 4);
    for (const auto& c : single.cells)
    {
        CHECK(c.runs == 3);
        CHECK_FALSE(c.flagged);
    }

    spec.threads = 4;
    const BenchResult threaded = run_bench(spec);
    REQUIRE(threaded.rows.size() == single.rows.size());
    for (std::size_t i = 0; i < single.rows.size(); ++i)
    {
        CHECK(threaded.rows[i].seed == single.rows[i].seed);
        CHECK(threaded.rows[i].planner == single.rows[i].planner);
        CHECK(threaded.rows[i].cost == single.rows[i].cost);
    }
}

TEST_CASE("case seeds are stable and distinct")
{
    CHECK(case_seed(1, "SRN", 10, 0) == case_seed(1, "SRN", 10, 0));
    CHECK(case_seed(1, "SRN", 10, 0) != case_seed(1, "SRN", 10, 1));
    CHECK(case_seed(1, "SRN", 10, 0) != case_seed(1, "CRN", 10, 0));
    CHECK(case_seed(1, "SRN", 10, 0) != case_seed(2, "SRN", 10, 0));
}

TEST_CASE("aggregate flags timed-out cells")
{
    std::vector<BenchRow> rows(2);
    rows[0] = {"SRN", 5, 0, 1, "optimal", 10.0, 1.0, 7, false, true};
    rows[1] = {"SRN", 5, 1, 2, "optimal", 20.0, 3.0, 9, true, false};
    const auto cells = aggregate(rows);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].mean_cost == 15.0);
    CHECK(cells[0].mean_time == 2.0);
    CHECK(cells[0].flagged);
}

TEST_CASE("rendering")
{
    SUBCASE("empty scene is just the outline")
    {
        Scene s;
        s.workspace.outer = {{0, 0}, {4, 0}, {4, 3}, {0, 3}};
        s.exits = {{{2, 0}}};
        s.finalize();
        const std::string svg = render_svg(s);
        // Workspace and the exit marker.
        CHECK(count(svg, "<polygon") == 2);
        CHECK(count(svg, "fill=\"red\"") == 1);
        CHECK(count(svg, "<text") == 0);
    }
    SUBCASE("plan steps are numbered and output is stable")
    {
        const Scene s = generate_adversarial(1);
        const GeometricCostOracle oracle(s);
        const SearchState start{s.all_objects(), 0};
        const Plan p = plan_greedy(oracle, start, {});
        const auto grasps = plan_grasp_points(oracle, start, p);
        CHECK(grasps.size() == 4);
        const std::string a = render_svg(s, &p, grasps);
        const std::string b = render_svg(s, &p, grasps);
        CHECK(a == b);
        for (int i = 1; i <= 4; ++i)
        {
            CHECK(count(a, ">" + std::to_string(i) + "</text>") == 1);
        }
        CHECK(count(a, "<circle") == 4);
    }
}
