#pragma once

#include "crp/geometric_oracle.hpp"
#include "crp/planners.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace crp {

/// Library version recorded in run records.
const char* code_version();

struct RunRecord
{
    std::string instance_id;
    std::uint64_t seed = 0;
    std::string planner;
    std::string backend;  // "visibility", "roadmap" or "tabular"
    PlannerConfig config;
    Plan plan;
    double wall_time = 0.0;  // seconds
    std::string version = code_version();
};

/// Runs one planner and replays the plan through the oracle. Throws
/// std::logic_error when the replayed cost differs from the plan total by more
/// than 1e-9 relative.
RunRecord solve_once(const std::string& instance_id, const CostOracle& oracle, SearchState start,
                     const std::string& planner, const PlannerConfig& cfg, const Scene* scene = nullptr,
                     const std::string& backend = "visibility");

std::string run_record_json(const RunRecord& record);

struct BenchSpec
{
    std::vector<std::string> settings{"SRN"};
    std::vector<std::size_t> ns{5, 10};
    std::vector<std::string> planners{"optimal", "greedy"};
    std::size_t cases = 20;
    std::size_t exits = 1;
    std::uint64_t seed = 0;
    GeometricOracleOptions oracle;
    PlannerConfig config;  // time_limit applies per run
    std::size_t threads = 1;
};

struct BenchRow
{
    std::string setting;
    std::size_t n = 0;
    std::size_t case_index = 0;
    std::uint64_t seed = 0;
    std::string planner;
    double cost = 0.0;
    double time = 0.0;
    std::uint64_t visited = 0;
    bool timed_out = false;
    bool optimal = false;
};

struct BenchCell
{
    std::string setting;
    std::size_t n = 0;
    std::string planner;
    std::size_t runs = 0;
    double mean_cost = 0.0;
    double mean_time = 0.0;
    double mean_visited = 0.0;
    /// Some case hit the time limit; the cell should not be plotted.
    bool flagged = false;
};

struct BenchResult
{
    std::vector<BenchRow> rows;
    std::vector<BenchCell> cells;
};

/// Seed of case `c` in cell (setting, n); stable across runs and thread counts.
std::uint64_t case_seed(std::uint64_t base, const std::string& setting, std::size_t n, std::size_t c);

/// Generates the instances and runs every planner on a fresh oracle per run.
/// Rows come out ordered by (setting, n, case, planner) regardless of threads.
BenchResult run_bench(const BenchSpec& spec, const std::function<void(const BenchRow&)>& progress = {});

/// Aggregates per (setting, n, planner), in first-seen order.
std::vector<BenchCell> aggregate(const std::vector<BenchRow>& rows);

inline constexpr int kBenchCsvSchema = 1;
/// One "run" line per row and one "aggregate" line per cell.
std::string bench_csv(const BenchResult& result);

/// SVG drawing of the scene. With a plan, objects are numbered in removal order
/// and `grasp_points` (one per step, optional) are marked.
std::string render_svg(const Scene& scene, const Plan* plan = nullptr,
                       const std::vector<Point2>& grasp_points = {});

/// Robot positions of the grasps used by each step of `plan`.
std::vector<Point2> plan_grasp_points(const GeometricCostOracle& oracle, SearchState start, const Plan& plan);

}  // namespace crp
