// Acceptance checks. Prints one PASS/FAIL line per criterion; pass criterion numbers
// as arguments to run a subset. Exit status is nonzero when any selected check fails.

#include "brute_force.hpp"
#include "support.hpp"

#include "crp/geometric_oracle.hpp"
#include "crp/instances.hpp"
#include "crp/planners.hpp"
#include "crp/tabular_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

using namespace crp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool rel_equal(double a, double b, double tol = 1e-9)
{
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Scene make_scene(const std::string& code, std::size_t n, std::size_t exits, std::uint64_t seed)
{
    GenSettings g = GenSettings::from_code(code);
    g.n = n;
    g.exits = exits;
    g.seed = seed;
    return generate_scene(g);
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Travel cost of a plan, without the per-grasp constant.
double travel(const CostOracle& oracle, const Plan& p)
{
    return p.total_cost - oracle.grasp_time() * static_cast<double>(p.steps.size());
}

Outcome c1_single_exit_equivalence()
{
    const char* codes[] = {"SRN", "SRO", "SAN", "CRN"};
    int bad = 0;
    std::uint64_t seqs = 0;
    for (int i = 0; i < 100; ++i)
    {
        const Scene s = make_scene(codes[i % 4], 4 + i % 5, 1, 1000 + i);
        const GeometricCostOracle oracle(s);
        const SearchState start{s.all_objects(), 0};
        const Plan p = plan_optimal_single_exit(oracle, start, {});
        const auto bf = oracles::brute_force(oracle, start);
        seqs += bf.sequences;
        if (!rel_equal(p.total_cost, bf.cost) || !rel_equal(replay_cost(oracle, start, p), bf.cost))
        {
            ++bad;
            std::printf("  instance %d (%s n=%zu): dp %.12g brute force %.12g\n", i, codes[i % 4], s.objects.size(),
                        p.total_cost, bf.cost);
        }
    }
    return {bad == 0, fmt("%d/100 mismatches, %llu sequences enumerated", bad, (unsigned long long)seqs)};
}

Outcome c2_multi_exit_equivalence()
{
    int bad = 0;
    for (int i = 0; i < 50; ++i)
    {
        const Scene s = make_scene(i % 2 ? "SRN" : "SRO", 3 + i % 4, 3, 2000 + i);
        const GeometricCostOracle oracle(s);
        const SearchState start{s.all_objects(), 0};
        const Plan p = plan_optimal_multi_exit(oracle, start, {});
        const auto bf = oracles::brute_force(oracle, start);
        if (!rel_equal(p.total_cost, bf.cost))
        {
            ++bad;
            std::printf("  instance %d n=%zu: dp %.12g brute force %.12g\n", i, s.objects.size(), p.total_cost, bf.cost);
        }
    }
    return {bad == 0, fmt("%d/50 mismatches", bad)};
}

double abstract_optimum(const AbstractInstance& inst)
{
    const TabularCostOracle oracle(inst);
    const SearchState start{RemainingSet::all(inst.object_count()), inst.start_exit};
    return plan_optimal_multi_exit(oracle, start, {}).total_cost;
}

Outcome c3_lemma()
{
    std::mt19937_64 rng(31);
    const double w1 = 1.0;
    int sat = 0;
    int unsat = 0;
    int bad = 0;
    double worst_unsat_margin = kInfeasible;
    auto check = [&](const MpsatFormula& f) {
        const double w2 = 10.0 * static_cast<double>(f.n_vars) * w1;
        const AbstractInstance inst = reduce_mpsat(f, w1, w2);
        const double target = inst.param("target");
        const double opt = abstract_optimum(inst);
        if (f.satisfiable())
        {
            ++sat;
            bad += rel_equal(opt, target) ? 0 : 1;
        }
        else
        {
            ++unsat;
            const double need = 2.0 * w1 - inst.param("eps_count") * inst.param("epsilon");
            worst_unsat_margin = std::min(worst_unsat_margin, opt - target);
            bad += opt - target >= need - 1e-9 ? 0 : 1;
        }
    };
    // x0 and not x0: the smallest unsatisfiable formula with both sides present.
    check(MpsatFormula{1, {{0}}, {{0}}});
    check(MpsatFormula{2, {{0}, {1}}, {{0, 1}}});
    while (sat < 20)
    {
        check(testing::random_formula(rng, 4));
    }
    return {bad == 0, fmt("%d satisfiable, %d unsatisfiable, %d violations, smallest unsat excess %.4g w1", sat, unsat,
                          bad, worst_unsat_margin / w1)};
}

Outcome c4_appendix()
{
    std::mt19937_64 rng(47);
    int sat = 0;
    int bad = 0;
    while (sat < 10)
    {
        const MpsatFormula f = testing::random_formula(rng, 3);
        if (!f.satisfiable())
        {
            continue;
        }
        ++sat;
        for (auto v : {AppendixVariant::three_exit, AppendixVariant::single_exit})
        {
            const AbstractInstance inst = reduce_mpsat_single_exit(f, 1.0, v);
            const double opt = abstract_optimum(inst);
            if (!rel_equal(opt, inst.param("target")))
            {
                ++bad;
                std::printf("  %s variant: optimum %.12g target %.12g\n",
                            v == AppendixVariant::three_exit ? "three-exit" : "single-exit", opt, inst.param("target"));
            }
        }
    }
    return {bad == 0, fmt("10 formulas, %d target mismatches", bad)};
}

Outcome c5_adversarial()
{
    double ratio[4] = {};
    for (std::size_t copies : {1, 3})
    {
        const Scene s = generate_adversarial(copies);
        const GeometricCostOracle oracle(s);
        const SearchState start{s.all_objects(), 0};
        const double g = travel(oracle, plan_greedy(oracle, start, {}));
        const double o = travel(oracle, plan_optimal_single_exit(oracle, start, {}));
        ratio[copies] = g / o;
    }
    return {ratio[1] >= 1.3, fmt("greedy/optimal travel ratio %.4f (copies=1), %.4f (copies=3)", ratio[1], ratio[3])};
}

Outcome c6_greedy_ratio()
{
    bool ok = true;
    std::string detail;
    for (std::size_t n : {8, 10, 12})
    {
        double sum = 0.0;
        double worst = 0.0;
        for (int i = 0; i < 20; ++i)
        {
            const Scene s = make_scene("SRN", n, 1, 6000 + 100 * n + i);
            const GeometricCostOracle oracle(s);
            const SearchState start{s.all_objects(), 0};
            const double r =
                plan_greedy(oracle, start, {}).total_cost / plan_optimal_single_exit(oracle, start, {}).total_cost;
            sum += r;
            worst = std::max(worst, r);
        }
        const double mean = sum / 20.0;
        ok = ok && mean <= 1.10;
        detail += fmt("n=%zu mean ratio %.6f (max %.6f); ", n, mean, worst);
    }
    return {ok, detail};
}

Outcome c7_scalability()
{
    int solved = 0;
    double worst = 0.0;
    double visited = 0.0;
    for (int i = 0; i < 20; ++i)
    {
        const Scene s = make_scene("SRN", 20, 1, 7000 + i);
        const GeometricCostOracle oracle(s);
        PlannerConfig cfg;
        cfg.time_limit = 60.0;
        const auto t0 = Clock::now();
        const Plan p = plan_optimal_single_exit(oracle, {s.all_objects(), 0}, cfg);
        const double t = seconds_since(t0);
        worst = std::max(worst, t);
        visited += static_cast<double>(p.visited_states);
        solved += (p.optimal && !p.timed_out && t <= 60.0) ? 1 : 0;
    }
    // Larger sizes are reported, not asserted.
    int solved30 = 0;
    double worst30 = 0.0;
    for (int i = 0; i < 5; ++i)
    {
        const Scene s = make_scene("SRN", 30, 1, 7100 + i);
        const GeometricCostOracle oracle(s);
        PlannerConfig cfg;
        cfg.time_limit = 400.0;
        const auto t0 = Clock::now();
        const Plan p = plan_optimal_single_exit(oracle, {s.all_objects(), 0}, cfg);
        worst30 = std::max(worst30, seconds_since(t0));
        solved30 += p.optimal ? 1 : 0;
    }
    return {solved == 20, fmt("%d/20 solved optimally, slowest %.2f s, mean visited states %.0f; n=30: %d/5 solved, "
                              "slowest %.2f s",
                              solved, worst, visited / 20.0, solved30, worst30)};
}

Outcome c8_trends()
{
    double mean[3] = {};
    const char* codes[] = {"SRN", "CRN", "SRO"};
    for (int c = 0; c < 3; ++c)
    {
        for (int i = 0; i < 20; ++i)
        {
            const Scene s = make_scene(codes[c], 12, 1, 8000 + i);
            const GeometricCostOracle oracle(s);
            const auto t0 = Clock::now();
            (void)plan_optimal_single_exit(oracle, {s.all_objects(), 0}, {});
            mean[c] += seconds_since(t0) / 20.0;
        }
    }
    return {mean[1] > mean[0] && mean[2] <= mean[0],
            fmt("mean optimal time SRN %.4f s, CRN %.4f s, SRO %.4f s", mean[0], mean[1], mean[2])};
}

Outcome c9_lookahead()
{
    int step_mismatch = 0;
    int cost_mismatch = 0;
    for (int i = 0; i < 50; ++i)
    {
        const Scene s = make_scene(i % 2 ? "SRN" : "CRN", 3 + i % 5, 1, 9000 + i);
        const GeometricCostOracle oracle(s);
        const SearchState start{s.all_objects(), 0};
        PlannerConfig cfg;
        cfg.lookahead_depth = 1;
        const Plan g = plan_greedy(oracle, start, cfg);
        const Plan l1 = plan_lookahead(oracle, start, cfg);
        step_mismatch += (g.steps == l1.steps && g.total_cost == l1.total_cost) ? 0 : 1;
        cfg.lookahead_depth = s.objects.size();
        const Plan ln = plan_lookahead(oracle, start, cfg);
        const Plan opt = plan_optimal_single_exit(oracle, start, {});
        cost_mismatch += rel_equal(ln.total_cost, opt.total_cost) ? 0 : 1;
    }
    return {step_mismatch == 0 && cost_mismatch == 0,
            fmt("k=1 differs from greedy on %d/50, k=n differs from optimal on %d/50", step_mismatch, cost_mismatch)};
}

Outcome c10_voronoi()
{
    int over = 0;
    double tv = 0.0;
    double tg = 0.0;
    double worst_excess = -kInfeasible;
    for (int i = 0; i < 20; ++i)
    {
        const Scene s = make_scene("SRN", 20, 3, 10000 + i);
        const SearchState start{s.all_objects(), 0};
        Plan g;
        Plan v;
        {
            const GeometricCostOracle oracle(s);
            const auto t0 = Clock::now();
            g = plan_greedy(oracle, start, {});
            tg += seconds_since(t0);
        }
        {
            const GeometricCostOracle oracle(s);
            const auto t0 = Clock::now();
            v = plan_voronoi(s, oracle, start, InnerPlanner::greedy, {});
            tv += seconds_since(t0);
            if (!rel_equal(replay_cost(oracle, start, v), v.total_cost))
            {
                ++over;
            }
        }
        const double excess = v.total_cost - g.total_cost;
        worst_excess = std::max(worst_excess, excess / s.perimeter());
        over += excess <= s.perimeter() + 1e-9 ? 0 : 1;
    }
    return {over == 0 && tv <= tg,
            fmt("%d/20 over the bound, largest excess %.3f perimeters, mean time voronoi %.3f s greedy %.3f s", over,
                worst_excess, tv / 20.0, tg / 20.0)};
}

Outcome c11_roadmap()
{
    const std::size_t budgets[] = {500, 1000, 2000, 4000};
    std::vector<double> med;
    std::string detail;
    for (auto b : budgets)
    {
        std::vector<double> gaps;
        for (int i = 0; i < 20; ++i)
        {
            const Scene s = make_scene("SRN", 10, 1, 11000 + i);
            const GeometricCostOracle vis(s);
            GeometricOracleOptions opt;
            opt.backend = PathBackend::roadmap;
            opt.roadmap_samples = b;
            const GeometricCostOracle rm(s, opt);
            const RemainingSet all = s.all_objects();
            for (ObjectIndex k : vis.accessible(all, 0).indices())
            {
                const double a = vis.removal_cost(all, 0, k, 0);
                const double r = rm.removal_cost(all, 0, k, 0);
                gaps.push_back(std::isfinite(r) ? (r - a) / a : 1.0);
            }
        }
        med.push_back(median(gaps));
        detail += fmt("%zu: %.4f; ", b, med.back());
    }
    bool monotone = true;
    for (std::size_t i = 1; i < med.size(); ++i)
    {
        monotone = monotone && med[i] <= med[i - 1];
    }
    return {monotone && med.back() <= 0.05, "median relative gap " + detail};
}

Outcome c12_monotone()
{
    int checked = 0;
    std::string failures;
    auto run = [&](const std::string& name, const CostOracle& oracle) {
        ++checked;
        if (auto v = verify_monotone_feasibility(oracle, oracle.object_count(), 0, 1, true))
        {
            failures += name + " (" + v->reason + ") ";
        }
    };
    for (const char* code : {"SRN", "SRO", "SAN", "SAO", "CRN", "CRO", "CAN", "CAO"})
    {
        for (std::size_t exits : {1, 3})
        {
            const Scene s = make_scene(code, 10, exits, 12000 + exits);
            run(std::string(code) + "/" + std::to_string(exits), GeometricCostOracle(s));
        }
    }
    for (std::size_t copies = 1; copies <= 3; ++copies)
    {
        run("adversarial" + std::to_string(copies), GeometricCostOracle(generate_adversarial(copies)));
    }
    const MpsatFormula f{2, {{0, 1}}, {{0}, {1}}};
    run("lemma", TabularCostOracle(reduce_mpsat(f, 1.0, 20.0)));
    run("three-exit", TabularCostOracle(reduce_mpsat_single_exit(f, 1.0, AppendixVariant::three_exit)));
    run("single-exit", TabularCostOracle(reduce_mpsat_single_exit(f, 1.0, AppendixVariant::single_exit)));
    return {failures.empty(), fmt("%d oracles checked exhaustively", checked) +
                                  (failures.empty() ? std::string() : "; violations: " + failures)};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::function<Outcome()>> checks = {
        c1_single_exit_equivalence, c2_multi_exit_equivalence, c3_lemma,        c4_appendix,
        c5_adversarial,             c6_greedy_ratio,           c7_scalability,  c8_trends,
        c9_lookahead,               c10_voronoi,               c11_roadmap,     c12_monotone,
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
    {
        selected.insert(std::atoi(argv[i]));
    }
    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i)
    {
        const int id = static_cast<int>(i + 1);
        if (!selected.empty() && !selected.contains(id))
        {
            continue;
        }
        const auto t0 = Clock::now();
        Outcome o;
        try
        {
            o = checks[i]();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("CRITERION %d %s: %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
