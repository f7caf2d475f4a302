#pragma once

#include "crp/scene.hpp"
#include "crp/tabular_oracle.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace crp {

class GenerationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Placement
{
    scattered,
    centered,
};

enum class Orientation
{
    random_angle,
    axis_aligned,
};

enum class Overlap
{
    overlapping,
    non_overlapping,
};

struct GenSettings
{
    Placement placement = Placement::scattered;
    Orientation orientation = Orientation::random_angle;
    Overlap overlap = Overlap::non_overlapping;
    std::size_t n = 10;
    double side_min = 0.5;
    double side_max = 1.5;
    double width = 10.0;
    double height = 10.0;
    /// Exits are spread evenly by arc length, the first at the middle of the bottom wall.
    std::size_t exits = 1;
    double robot_radius = 0.2;
    std::uint64_t seed = 0;
    std::size_t max_regenerations = 50;

    /// Three-letter setting code: S|C, R|A, O|N (e.g. "SRN", "CRN", "SRO", "SAN").
    static GenSettings from_code(const std::string& code);
    [[nodiscard]] std::string code() const;
};

/// Random scene; verified feasible by running greedy. Throws GenerationError when
/// the placement or regeneration budget runs out.
Scene generate_scene(const GenSettings& settings);

/// `copies` four-object cups arranged around the single exit, three per ring. Each
/// cup holds a plug in a gap of its bottom wall, a cover lying on the plug from
/// inside, and two objects in its inner corners. Greedy fetches the corner objects
/// around the cup before opening the gap. Throws GenerationError when the
/// greedy/optimal ratio for copies = 1 drops below 1.3.
Scene generate_adversarial(std::size_t copies, std::uint64_t seed = 0);

/// Monotone 3-SAT formula with a left-to-right variable order. Clause intervals
/// [min var, max var] on each side must be laminar, which is the planarity
/// condition for this embedding.
struct MpsatFormula
{
    std::size_t n_vars = 0;
    std::vector<std::vector<std::size_t>> positive;
    std::vector<std::vector<std::size_t>> negative;

    /// Throws std::invalid_argument on malformed clauses or a non-planar embedding.
    void validate() const;
    [[nodiscard]] std::size_t clause_count() const { return positive.size() + negative.size(); }
    [[nodiscard]] bool satisfied_by(const std::vector<bool>& assignment) const;
    /// Brute force; fine for the small formulas used here.
    [[nodiscard]] bool satisfiable() const;
};

struct GadgetShape
{
    std::size_t selector_pairs = 1;  // 1 or 2
};

/// Selector pairs per variable for the Appendix construction: two when, on some
/// side, the variable is the right end of one clause and the left end of another.
std::vector<GadgetShape> gadget_shapes(const MpsatFormula& formula);
/// Total selector-pair count n'.
std::size_t n_prime(const MpsatFormula& formula);

/// Three-exit instance (exits L = 0, M = 1, R = 2; start at M) whose optimum is
/// (2n + 4) w1 + 4 w2 plus the epsilon terms exactly when the formula is satisfiable.
/// params: w1, w2, epsilon, eps_count, target.
AbstractInstance reduce_mpsat(const MpsatFormula& formula, double w1, double w2);

enum class AppendixVariant
{
    three_exit,
    single_exit,
};

/// Appendix construction. Three exits T = 0, M = 1, B = 2 (start at M), target
/// (2n' + 3) w; or folded into one exit, target (4n' + 2m + 2) w. Epsilon terms are
/// included in params["target"].
AbstractInstance reduce_mpsat_single_exit(const MpsatFormula& formula, double w, AppendixVariant variant);

}  // namespace crp
