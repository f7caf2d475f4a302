#include "crp/harness.hpp"

#include "crp/instances.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#ifndef CRP_VERSION
#define CRP_VERSION "dev"
#endif

namespace crp {

using nlohmann::json;

const char* code_version() { return CRP_VERSION; }

RunRecord solve_once(const std::string& instance_id, const CostOracle& oracle, SearchState start,
                     const std::string& planner, const PlannerConfig& cfg, const Scene* scene,
                     const std::string& backend)
{
    RunRecord r;
    r.instance_id = instance_id;
    r.seed = cfg.seed;
    r.planner = planner;
    r.backend = backend;
    r.config = cfg;
    const auto t0 = std::chrono::steady_clock::now();
    r.plan = run_planner(planner, oracle, start, cfg, scene);
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double replay = replay_cost(oracle, start, r.plan);
    if (std::abs(replay - r.plan.total_cost) > 1e-9 * std::max(1.0, std::abs(replay)))
    {
        throw std::logic_error("plan cost does not replay through the oracle");
    }
    return r;
}

std::string run_record_json(const RunRecord& r)
{
    json steps = json::array();
    for (const auto& s : r.plan.steps)
    {
        steps.push_back({{"object", s.object}, {"from_exit", s.from_exit}, {"to_exit", s.to_exit}, {"cost", s.step_cost}});
    }
    json cfg{{"time_limit", r.config.time_limit},
             {"lookahead_depth", r.config.lookahead_depth},
             {"mcts_iterations", r.config.mcts_iterations},
             {"mcts_exploration", r.config.mcts_exploration},
             {"reachability_pruning", r.config.use_reachability_pruning},
             {"clustering", r.config.use_clustering},
             {"lower_bound", r.config.use_lower_bound},
             {"dominance", r.config.use_dominance},
             {"memo", r.config.use_memo}};
    json j{{"instance", r.instance_id},
           {"seed", r.seed},
           {"planner", r.planner},
           {"backend", r.backend},
           {"config", cfg},
           {"total_cost", r.plan.total_cost},
           {"wall_time_s", r.wall_time},
           {"visited_states", r.plan.visited_states},
           {"optimal", r.plan.optimal},
           {"timed_out", r.plan.timed_out},
           {"fallback", r.plan.fallback},
           {"steps", steps},
           {"version", r.version}};
    if (!r.plan.warning.empty())
    {
        j["warning"] = r.plan.warning;
    }
    return j.dump(2) + "\n";
}

std::uint64_t case_seed(std::uint64_t base, const std::string& setting, std::size_t n, std::size_t c)
{
    // splitmix64 over the cell coordinates
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(base);
    for (char ch : setting)
    {
        h = mix(h ^ static_cast<unsigned char>(ch));
    }
    h = mix(h ^ n);
    return mix(h ^ c);
}

std::vector<BenchCell> aggregate(const std::vector<BenchRow>& rows)
{
    std::vector<BenchCell> cells;
    for (const auto& r : rows)
    {
        auto it = std::find_if(cells.begin(), cells.end(), [&](const BenchCell& c) {
            return c.setting == r.setting && c.n == r.n && c.planner == r.planner;
        });
        if (it == cells.end())
        {
            cells.push_back({r.setting, r.n, r.planner});
            it = cells.end() - 1;
        }
        ++it->runs;
        it->mean_cost += r.cost;
        it->mean_time += r.time;
        it->mean_visited += static_cast<double>(r.visited);
        it->flagged = it->flagged || r.timed_out;
    }
    for (auto& c : cells)
    {
        const auto k = static_cast<double>(c.runs);
        c.mean_cost /= k;
        c.mean_time /= k;
        c.mean_visited /= k;
    }
    return cells;
}

BenchResult run_bench(const BenchSpec& spec, const std::function<void(const BenchRow&)>& progress)
{
    spec.config.validate();
    struct Job
    {
        std::string setting;
        std::size_t n;
        std::size_t c;
    };
    std::vector<Job> jobs;
    for (const auto& s : spec.settings)
    {
        (void)GenSettings::from_code(s);
        for (auto n : spec.ns)
        {
            for (std::size_t c = 0; c < spec.cases; ++c)
            {
                jobs.push_back({s, n, c});
            }
        }
    }
    std::vector<std::vector<BenchRow>> out(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex report;
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next++;
            if (i >= jobs.size())
            {
                return;
            }
            try
            {
                const auto& job = jobs[i];
                GenSettings g = GenSettings::from_code(job.setting);
                g.n = job.n;
                g.exits = spec.exits;
                g.seed = case_seed(spec.seed, job.setting, job.n, job.c);
                const Scene scene = generate_scene(g);
                for (const auto& p : spec.planners)
                {
                    // A fresh oracle per run so no planner inherits another's cache.
                    const GeometricCostOracle oracle(scene, spec.oracle);
                    PlannerConfig cfg = spec.config;
                    cfg.seed = g.seed;
                    const RunRecord r = solve_once(job.setting, oracle, {scene.all_objects(), 0}, p, cfg, &scene);
                    BenchRow row{job.setting, job.n, job.c, g.seed, p, r.plan.total_cost, r.wall_time,
                                 r.plan.visited_states, r.plan.timed_out, r.plan.optimal};
                    out[i].push_back(row);
                    if (progress)
                    {
                        std::lock_guard lock(report);
                        progress(row);
                    }
                }
            }
            catch (...)
            {
                std::lock_guard lock(report);
                if (!failure)
                {
                    failure = std::current_exception();
                }
                next = jobs.size();
                return;
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(spec.threads, jobs.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t)
    {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool)
    {
        t.join();
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
    BenchResult result;
    for (auto& rows : out)
    {
        result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    }
    result.cells = aggregate(result.rows);
    return result;
}

std::string bench_csv(const BenchResult& result)
{
    std::ostringstream os;
    os.precision(17);
    os << "schema,kind,setting,n,case,seed,planner,cost,time_s,visited,timed_out,optimal,runs,flagged\n";
    for (const auto& r : result.rows)
    {
        os << kBenchCsvSchema << ",run," << r.setting << ',' << r.n << ',' << r.case_index << ',' << r.seed << ','
           << r.planner << ',' << r.cost << ',' << r.time << ',' << r.visited << ',' << int(r.timed_out) << ','
           << int(r.optimal) << ",,\n";
    }
    for (const auto& c : result.cells)
    {
        os << kBenchCsvSchema << ",aggregate," << c.setting << ',' << c.n << ",,," << c.planner << ',' << c.mean_cost
           << ',' << c.mean_time << ',' << c.mean_visited << ",,," << c.runs << ',' << int(c.flagged) << '\n';
    }
    return os.str();
}

}  // namespace crp
