#include "crp/geometric_oracle.hpp"
#include "crp/instances.hpp"
#include "crp/planners.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace crp {

GenSettings GenSettings::from_code(const std::string& code)
{
    if (code.size() != 3)
    {
        throw std::invalid_argument("setting code must have three letters, e.g. SRN");
    }
    GenSettings g;
    switch (code[0])
    {
    case 'S': g.placement = Placement::scattered; break;
    case 'C': g.placement = Placement::centered; break;
    default: throw std::invalid_argument("placement letter must be S or C");
    }
    switch (code[1])
    {
    case 'R': g.orientation = Orientation::random_angle; break;
    case 'A': g.orientation = Orientation::axis_aligned; break;
    default: throw std::invalid_argument("orientation letter must be R or A");
    }
    switch (code[2])
    {
    case 'O': g.overlap = Overlap::overlapping; break;
    case 'N': g.overlap = Overlap::non_overlapping; break;
    default: throw std::invalid_argument("overlap letter must be O or N");
    }
    return g;
}

std::string GenSettings::code() const
{
    std::string s;
    s += placement == Placement::scattered ? 'S' : 'C';
    s += orientation == Orientation::random_angle ? 'R' : 'A';
    s += overlap == Overlap::overlapping ? 'O' : 'N';
    return s;
}

namespace {

Scene empty_room(double width, double height, std::size_t exits, double robot_radius)
{
    Scene s;
    s.workspace.outer = {{0.0, 0.0}, {width, 0.0}, {width, height}, {0.0, height}};
    s.robot_radius = robot_radius;
    const double perim = 2.0 * (width + height);
    for (std::size_t i = 0; i < exits; ++i)
    {
        Exit e;
        e.arc = std::fmod(width / 2.0 + perim * static_cast<double>(i) / static_cast<double>(exits), perim);
        s.exits.push_back(e);
    }
    return s;
}

bool inside(const ConvexPolygon& room, const OrientedRect& r)
{
    const auto cs = r.corners();
    return std::all_of(cs.begin(), cs.end(), [&](Point2 c) { return room.contains_closed(c, 0.0); });
}

/// Heights from a topological order of a random DAG on each overlap component.
void assign_stack_heights(Scene& scene, std::mt19937_64& rng)
{
    const std::size_t n = scene.objects.size();
    std::vector<ConvexPolygon> feet;
    for (const auto& o : scene.objects)
    {
        feet.push_back(o.shape.polygon());
    }
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = i + 1; j < n; ++j)
        {
            if (feet[i].overlaps(feet[j], 1e-9))
            {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    std::vector<int> comp(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (comp[i] >= 0)
        {
            continue;
        }
        std::vector<std::size_t> stack{i};
        comp[i] = next;
        std::vector<std::size_t> members;
        while (!stack.empty())
        {
            const auto u = stack.back();
            stack.pop_back();
            members.push_back(u);
            for (auto v : adj[u])
            {
                if (comp[v] < 0)
                {
                    comp[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
        // Orient overlap edges along a random permutation, then Kahn with random ties.
        std::vector<std::size_t> perm = members;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::size_t> rank(n, 0);
        for (std::size_t r = 0; r < perm.size(); ++r)
        {
            rank[perm[r]] = r;
        }
        std::vector<int> indeg(n, 0);
        for (auto u : members)
        {
            for (auto v : adj[u])
            {
                if (rank[u] < rank[v])
                {
                    ++indeg[v];
                }
            }
        }
        std::vector<std::size_t> ready;
        for (auto u : members)
        {
            if (indeg[u] == 0)
            {
                ready.push_back(u);
            }
        }
        int height = 0;
        while (!ready.empty())
        {
            std::uniform_int_distribution<std::size_t> pick(0, ready.size() - 1);
            const std::size_t at = pick(rng);
            const auto u = ready[at];
            ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(at));
            scene.objects[u].stack_height = height++;
            for (auto v : adj[u])
            {
                if (rank[u] < rank[v] && --indeg[v] == 0)
                {
                    ready.push_back(v);
                }
            }
        }
    }
}

std::optional<Scene> try_generate(const GenSettings& g, std::mt19937_64& rng)
{
    Scene scene = empty_room(g.width, g.height, g.exits, g.robot_radius);
    const ConvexPolygon room(scene.workspace.outer);
    std::uniform_real_distribution<double> side(g.side_min, g.side_max);
    std::uniform_real_distribution<double> ux(0.0, g.width);
    std::uniform_real_distribution<double> uy(0.0, g.height);
    std::normal_distribution<double> gx(g.width / 2.0, g.width / 8.0);
    std::normal_distribution<double> gy(g.height / 2.0, g.width / 8.0);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::vector<ConvexPolygon> placed;
    for (std::size_t i = 0; i < g.n; ++i)
    {
        bool ok = false;
        for (int attempt = 0; attempt < 10000 && !ok; ++attempt)
        {
            OrientedRect r;
            r.half_x = side(rng) / 2.0;
            r.half_y = side(rng) / 2.0;
            r.angle = g.orientation == Orientation::random_angle ? angle(rng) : 0.0;
            if (g.placement == Placement::scattered)
            {
                r.center = {ux(rng), uy(rng)};
            }
            else
            {
                r.center = {gx(rng), gy(rng)};
            }
            if (!inside(room, r))
            {
                continue;
            }
            const ConvexPolygon poly = r.polygon();
            if (g.overlap == Overlap::non_overlapping &&
                std::any_of(placed.begin(), placed.end(), [&](const ConvexPolygon& p) { return p.overlaps(poly, 1e-9); }))
            {
                continue;
            }
            placed.push_back(poly);
            scene.objects.push_back({r, 0});
            ok = true;
        }
        if (!ok)
        {
            return std::nullopt;
        }
    }
    if (g.overlap == Overlap::overlapping)
    {
        assign_stack_heights(scene, rng);
    }
    scene.finalize();
    return scene;
}

}  // namespace

Scene generate_scene(const GenSettings& g)
{
    if (g.n < 1 || g.n > kMaxObjects)
    {
        throw std::invalid_argument("object count must be in [1, 64]");
    }
    if (!(g.side_min > 0.0) || g.side_max < g.side_min || !(g.width > 0.0) || !(g.height > 0.0) || g.exits < 1)
    {
        throw std::invalid_argument("invalid generator settings");
    }
    std::mt19937_64 rng(g.seed);
    for (std::size_t round = 0; round <= g.max_regenerations; ++round)
    {
        auto scene = try_generate(g, rng);
        if (!scene)
        {
            throw GenerationError("could not place every object within the retry budget");
        }
        try
        {
            const GeometricCostOracle oracle(*scene);
            PlannerConfig cfg;
            (void)plan_greedy(oracle, {scene->all_objects(), 0}, cfg);
            return *scene;
        }
        catch (const InfeasibleError&)
        {
        }
    }
    throw GenerationError("every generated scene was infeasible");
}

namespace {

/// Local frame at the exit: u runs sideways, v away from the exit along angle `th`.
struct Frame
{
    Point2 origin;
    double th;

    [[nodiscard]] Point2 at(double u, double v) const
    {
        return {origin.x + u * std::sin(th) + v * std::cos(th), origin.y - u * std::cos(th) + v * std::sin(th)};
    }
    [[nodiscard]] double rect_angle() const
    {
        const double a = th - std::numbers::pi / 2.0;
        return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
    }
};

PolygonRegion box(const Frame& f, double u0, double u1, double v0, double v1)
{
    return {{f.at(u0, v0), f.at(u1, v0), f.at(u1, v1), f.at(u0, v1)}, {}};
}

constexpr double kCupNear = 7.0;   // exit to the cup's bottom wall
constexpr double kCupHalf = 2.5;   // outer half width
constexpr double kCupDepth = 6.0;  // bottom wall to the open end
constexpr double kRingStep = 9.0;
constexpr double kWall = 0.3;

/// A cup open away from the exit. The plug fills a gap in its bottom wall, the
/// cover lies on the plug from inside, and two objects sit in the inner corners.
/// Greedy reaches the corner objects around the cup before opening the gap.
void add_cup(Scene& s, const Frame& f, double near)
{
    const double gap = 0.6;
    s.obstacles.push_back(box(f, -kCupHalf, -gap, near, near + kWall));
    s.obstacles.push_back(box(f, gap, kCupHalf, near, near + kWall));
    s.obstacles.push_back(box(f, -kCupHalf, -kCupHalf + kWall, near + kWall, near + kCupDepth));
    s.obstacles.push_back(box(f, kCupHalf - kWall, kCupHalf, near + kWall, near + kCupDepth));
    const double a = f.rect_angle();
    s.objects.push_back({{f.at(0.0, near + 0.15), 0.55, 0.3, a}, 0});
    s.objects.push_back({{f.at(0.0, near + 0.7), 0.6, 0.35, a}, 1});
    s.objects.push_back({{f.at(-1.5, near + 1.5), 0.35, 0.35, a}, 0});
    s.objects.push_back({{f.at(1.5, near + 1.5), 0.35, 0.35, a}, 0});
}

}  // namespace

Scene generate_adversarial(std::size_t copies, std::uint64_t /*seed*/)
{
    if (copies < 1)
    {
        throw std::invalid_argument("copies must be at least 1");
    }
    if (copies * 4 > kMaxObjects)
    {
        throw std::invalid_argument("too many copies for the 64-object bound");
    }
    // Three copies per ring at 90, 45 and 135 degrees around the robot's entry point.
    // These are symmetries of the robot's disc polygon, so copies on one ring cost
    // exactly the same.
    const std::size_t rings = (copies + 2) / 3;
    const double reach = kCupNear + kRingStep * static_cast<double>(rings - 1) + kCupDepth + 2.0;
    const double width = 2.0 * reach;
    Scene s;
    s.workspace.outer = {{0.0, 0.0}, {width, 0.0}, {width, reach}, {0.0, reach}};
    s.robot_radius = 0.2;
    Exit exit;
    exit.position = {width / 2.0, 0.0};
    s.exits.push_back(exit);
    const double angles[3] = {90.0, 45.0, 135.0};
    for (std::size_t c = 0; c < copies; ++c)
    {
        const Frame f{{exit.position.x, s.robot_radius}, angles[c % 3] * std::numbers::pi / 180.0};
        add_cup(s, f, kCupNear + kRingStep * static_cast<double>(c / 3));
    }
    s.finalize();
    if (copies == 1)
    {
        const GeometricCostOracle oracle(s);
        PlannerConfig cfg;
        const double greedy = plan_greedy(oracle, {s.all_objects(), 0}, cfg).total_cost;
        const double best = plan_optimal_single_exit(oracle, {s.all_objects(), 0}, cfg).total_cost;
        if (greedy < 1.3 * best)
        {
            throw GenerationError("adversarial motif lost its greedy gap");
        }
    }
    return s;
}

}  // namespace crp
