// crp: command-line front end for the clutter removal planners.

#include "brute_force.hpp"
#include "crp/harness.hpp"
#include "crp/instances.hpp"
#include "crp/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

enum Status : int
{
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kParse = 3,
    kInfeasible = 4,
    kTimeout = 5,
    kOracleMismatch = 6,
    kIo = 7,
    kVerifyFailed = 8,
    kGeneration = 9,
};

struct Loaded
{
    crp::Document doc;
    std::unique_ptr<crp::CostOracle> oracle;
    crp::SearchState start;
    std::string backend;

    [[nodiscard]] const crp::Scene* scene() const { return std::get_if<crp::Scene>(&doc); }
};

crp::PathBackend backend_of(const std::string& name)
{
    return name == "roadmap" ? crp::PathBackend::roadmap : crp::PathBackend::visibility;
}

Loaded load(const std::string& path, bool strict, const crp::GeometricOracleOptions& opts, const std::string& backend)
{
    Loaded l{crp::document_from_json(crp::read_file(path), strict), nullptr, {}, backend};
    if (const auto* scene = std::get_if<crp::Scene>(&l.doc))
    {
        l.oracle = std::make_unique<crp::GeometricCostOracle>(*scene, opts);
        l.start = {scene->all_objects(), 0};
    }
    else if (const auto* inst = std::get_if<crp::AbstractInstance>(&l.doc))
    {
        try
        {
            l.oracle = std::make_unique<crp::TabularCostOracle>(*inst);
        }
        catch (const std::invalid_argument& e)
        {
            throw crp::ParseError(std::string("invalid instance: ") + e.what());
        }
        l.start = {crp::RemainingSet::all(inst->object_count()), inst->start_exit};
        l.backend = "tabular";
    }
    else
    {
        throw crp::ParseError("expected a scene or an instance file, got a formula");
    }
    return l;
}

void emit(const std::string& out, const std::string& content)
{
    if (out.empty() || out == "-")
    {
        std::cout << content;
    }
    else
    {
        crp::write_file(out, content);
    }
}

crp::Plan plan_from_record(const std::string& path)
{
    const auto j = nlohmann::json::parse(crp::read_file(path));
    crp::Plan p;
    for (const auto& s : j.at("steps"))
    {
        p.steps.push_back({s.at("object").get<crp::ObjectIndex>(), s.at("from_exit").get<crp::ExitIndex>(),
                           s.at("to_exit").get<crp::ExitIndex>(), s.at("cost").get<double>()});
    }
    p.total_cost = j.at("total_cost").get<double>();
    return p;
}

std::vector<std::string> split(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (!item.empty())
        {
            out.push_back(item);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Clutter removal planning: solve, benchmark, generate and inspect instances."};
    app.require_subcommand(1);

    bool strict = false;
    std::string backend = "visibility";
    std::size_t roadmap_samples = 2000;
    crp::PlannerConfig cfg;
    std::string planner = "optimal";
    std::string out;

    auto add_planner_flags = [&](CLI::App* sub) {
        sub->add_option("--time-limit", cfg.time_limit, "Planner time limit in seconds")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "Seed for randomized planners and generators")->capture_default_str();
        sub->add_option("--lookahead-k", cfg.lookahead_depth, "Lookahead depth")->capture_default_str();
        sub->add_option("--mcts-iters", cfg.mcts_iterations, "MCTS iterations per step")->capture_default_str();
        sub->add_option("--backend", backend, "Motion-planning backend")
            ->check(CLI::IsMember({"visibility", "roadmap"}))
            ->capture_default_str();
        sub->add_option("--roadmap-samples", roadmap_samples, "Roadmap sample budget")->capture_default_str();
        sub->add_flag("--strict", strict, "Reject unknown fields in input files");
    };

    auto* solve = app.add_subcommand("solve", "Plan a removal sequence for a scene or instance file");
    std::string input;
    bool cross_check = false;
    solve->add_option("file", input, "Scene or instance file")->required();
    solve->add_option("--planner", planner, "Planner")
        ->check(CLI::IsMember({"optimal", "greedy", "lookahead", "mcts", "voronoi"}))
        ->capture_default_str();
    solve->add_flag("--oracle", cross_check, "Cross-check the cost against brute-force enumeration (n <= 8)");
    solve->add_option("-o,--out", out, "Write the run record here instead of stdout");
    add_planner_flags(solve);

    auto* bench = app.add_subcommand("bench", "Benchmark planners over generated instances and write CSV");
    std::string settings = "SRN";
    std::string ns = "5,10";
    std::string planners = "optimal,greedy";
    crp::BenchSpec spec;
    bench->add_option("--settings", settings, "Comma-separated setting codes (e.g. SRN,CRN)")->capture_default_str();
    bench->add_option("--ns", ns, "Comma-separated object counts")->capture_default_str();
    bench->add_option("--planners", planners, "Comma-separated planners")->capture_default_str();
    bench->add_option("--cases", spec.cases, "Cases per cell")->capture_default_str();
    bench->add_option("--exits", spec.exits, "Exits per scene")->capture_default_str();
    bench->add_option("--threads", spec.threads, "Worker threads")->capture_default_str();
    bench->add_option("-o,--out", out, "CSV output path")->required();
    add_planner_flags(bench);

    auto* generate = app.add_subcommand("generate", "Generate a random or adversarial scene");
    std::string setting = "SRN";
    std::size_t n = 10;
    std::size_t exits = 1;
    std::size_t adversarial = 0;
    generate->add_option("--setting", setting, "Setting code")->capture_default_str();
    generate->add_option("--n", n, "Object count")->capture_default_str();
    generate->add_option("--exits", exits, "Exit count")->capture_default_str();
    generate->add_option("--seed", cfg.seed, "Generator seed")->capture_default_str();
    generate->add_option("--adversarial", adversarial, "Emit the greedy-adversarial family with this many copies");
    generate->add_option("-o,--out", out, "Output path (default stdout)");

    auto* reduce = app.add_subcommand("reduce", "Build an abstract instance from a monotone planar 3-SAT formula");
    std::string variant = "lemma";
    double w1 = 1.0;
    double w2 = 0.0;
    double w = 1.0;
    reduce->add_option("file", input, "Formula file")->required();
    reduce->add_option("--variant", variant, "lemma, three-exit or single-exit")
        ->check(CLI::IsMember({"lemma", "three-exit", "single-exit"}))
        ->capture_default_str();
    reduce->add_option("--w1", w1, "Variable gadget half span")->capture_default_str();
    reduce->add_option("--w2", w2, "Middle to side distance (default 10 n w1)");
    reduce->add_option("--w", w, "Vertical gadget span")->capture_default_str();
    reduce->add_flag("--strict", strict, "Reject unknown fields in input files");
    reduce->add_option("-o,--out", out, "Output path (default stdout)");

    auto* render = app.add_subcommand("render", "Draw a scene, optionally with a plan, as SVG");
    std::string plan_file;
    std::string render_planner;
    render->add_option("file", input, "Scene file")->required();
    render->add_option("--plan", plan_file, "Run record whose steps to draw");
    render->add_option("--planner", render_planner, "Plan with this planner and draw the result")
        ->check(CLI::IsMember({"optimal", "greedy", "lookahead", "mcts", "voronoi"}));
    render->add_option("-o,--out", out, "Output path (default stdout)");
    add_planner_flags(render);

    auto* verify = app.add_subcommand("verify", "Check monotone feasibility of a scene or instance");
    std::size_t trials = 2000;
    verify->add_option("file", input, "Scene or instance file")->required();
    verify->add_option("--trials", trials, "Random chains when n > 12")->capture_default_str();
    add_planner_flags(verify);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    crp::GeometricOracleOptions opts;
    opts.backend = backend_of(backend);
    opts.roadmap_samples = roadmap_samples;
    opts.roadmap_seed = cfg.seed;

    try
    {
        if (*solve)
        {
            cfg.validate();
            const Loaded l = load(input, strict, opts, backend);
            if (planner == "voronoi" && l.scene() == nullptr)
            {
                std::cerr << "crp: the voronoi planner needs a geometric scene\n";
                return kUsage;
            }
            const crp::RunRecord rec = crp::solve_once(input, *l.oracle, l.start, planner, cfg, l.scene(), l.backend);
            int status = rec.plan.timed_out ? kTimeout : kOk;
            std::ostringstream text;
            for (std::size_t i = 0; i < rec.plan.steps.size(); ++i)
            {
                const auto& s = rec.plan.steps[i];
                text << "step " << i + 1 << ": object " << s.object << " exit " << s.from_exit << " -> " << s.to_exit
                     << " cost " << s.step_cost << "\n";
            }
            text << "total " << rec.plan.total_cost << (rec.plan.timed_out ? " (time limit reached)" : "") << "\n";
            if (cross_check)
            {
                const auto bf = crp::oracles::brute_force(*l.oracle, l.start);
                const double tol = 1e-9 * std::max(1.0, std::abs(bf.cost));
                const bool ok = planner == "optimal" ? std::abs(bf.cost - rec.plan.total_cost) <= tol
                                                     : rec.plan.total_cost >= bf.cost - tol;
                text << "oracle " << bf.cost << " over " << bf.sequences << " sequences: " << (ok ? "agree" : "MISMATCH")
                     << "\n";
                if (!ok)
                {
                    status = kOracleMismatch;
                }
            }
            std::cerr << text.str();
            emit(out, crp::run_record_json(rec));
            return status;
        }
        if (*bench)
        {
            spec.settings = split(settings);
            spec.planners = split(planners);
            spec.ns.clear();
            for (const auto& s : split(ns))
            {
                spec.ns.push_back(std::stoul(s));
            }
            spec.config = cfg;
            spec.seed = cfg.seed;
            spec.oracle = opts;
            const auto result = crp::run_bench(spec, [](const crp::BenchRow& r) {
                std::cerr << r.setting << " n=" << r.n << " case " << r.case_index << " " << r.planner << ": cost "
                          << r.cost << " time " << r.time << "s" << (r.timed_out ? " TIMEOUT" : "") << "\n";
            });
            crp::write_file(out, crp::bench_csv(result));
            return kOk;
        }
        if (*generate)
        {
            crp::Scene scene;
            if (adversarial > 0)
            {
                scene = crp::generate_adversarial(adversarial, cfg.seed);
            }
            else
            {
                crp::GenSettings g = crp::GenSettings::from_code(setting);
                g.n = n;
                g.exits = exits;
                g.seed = cfg.seed;
                scene = crp::generate_scene(g);
            }
            emit(out, crp::scene_to_json(scene));
            return kOk;
        }
        if (*reduce)
        {
            const crp::MpsatFormula f = crp::formula_from_json(crp::read_file(input), strict);
            crp::AbstractInstance inst;
            if (variant == "lemma")
            {
                inst = crp::reduce_mpsat(f, w1, w2 > 0.0 ? w2 : 10.0 * static_cast<double>(f.n_vars) * w1);
            }
            else
            {
                inst = crp::reduce_mpsat_single_exit(
                    f, w, variant == "three-exit" ? crp::AppendixVariant::three_exit : crp::AppendixVariant::single_exit);
            }
            emit(out, crp::instance_to_json(inst));
            return kOk;
        }
        if (*render)
        {
            const crp::Scene scene = crp::scene_from_json(crp::read_file(input), strict);
            std::optional<crp::Plan> plan;
            std::vector<crp::Point2> grasps;
            if (!plan_file.empty() || !render_planner.empty())
            {
                const crp::GeometricCostOracle oracle(scene, opts);
                const crp::SearchState start{scene.all_objects(), 0};
                plan = plan_file.empty() ? crp::run_planner(render_planner, oracle, start, cfg, &scene)
                                         : plan_from_record(plan_file);
                (void)crp::replay_cost(oracle, start, *plan);
                grasps = crp::plan_grasp_points(oracle, start, *plan);
            }
            emit(out, crp::render_svg(scene, plan ? &*plan : nullptr, grasps));
            return kOk;
        }
        if (*verify)
        {
            const Loaded l = load(input, strict, opts, backend);
            const std::size_t count = l.oracle->object_count();
            const auto v = crp::verify_monotone_feasibility(*l.oracle, count, trials, cfg.seed, count <= 12);
            if (v)
            {
                std::cout << "violation: object " << v->object << " exit " << v->exit << ": " << v->reason << "\n";
                return kVerifyFailed;
            }
            std::cout << "monotone feasibility holds (" << (count <= 12 ? "exhaustive" : "sampled") << ")\n";
            return kOk;
        }
    }
    catch (const crp::ParseError& e)
    {
        std::cerr << "crp: parse error: " << e.what() << "\n";
        return kParse;
    }
    catch (const nlohmann::json::exception& e)
    {
        std::cerr << "crp: parse error: " << e.what() << "\n";
        return kParse;
    }
    catch (const crp::SceneError& e)
    {
        std::cerr << "crp: invalid scene: " << e.what() << "\n";
        return kParse;
    }
    catch (const crp::InfeasibleError& e)
    {
        std::cerr << "crp: infeasible: " << e.what() << "\n";
        return kInfeasible;
    }
    catch (const crp::GenerationError& e)
    {
        std::cerr << "crp: generation failed: " << e.what() << "\n";
        return kGeneration;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "crp: " << e.what() << "\n";
        return kUsage;
    }
    catch (const std::runtime_error& e)
    {
        std::cerr << "crp: " << e.what() << "\n";
        return kIo;
    }
    catch (const std::exception& e)
    {
        std::cerr << "crp: internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}
