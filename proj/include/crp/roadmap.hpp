#pragma once

#include "crp/geometry.hpp"

#include <cstdint>
#include <vector>

namespace crp {

struct RadiusRule
{
    /// Multiplies the PRM* constant 2*sqrt(1 + 1/d)*sqrt(area/pi) (d = 2).
    double gamma_factor = 1.5;
    /// Connection radius used when rewiring around a freed region.
    double rewire_factor = 2.0;
};

/// Sampled shortest-path roadmap rooted at one point. Samples come from a fixed
/// stream that is uniform over the free-space boundary polygon and independent of
/// the blockers, so a roadmap built in a larger free space is a supergraph.
class Roadmap
{
public:
    struct Edge
    {
        int to = 0;
        double length = 0.0;
    };

    /// `n_samples` counts the root. The root may sit on the outer workspace border
    /// (like an exit) but must not lie inside a blocker. Throws GeometryError.
    static Roadmap build(const FreeSpace& free, Point2 root, std::size_t n_samples, RadiusRule rule,
                         std::uint64_t seed);

    /// `updated` must contain the previous free space; `freed_region` is the area
    /// that stopped being blocked. Adds `extra_samples` inside it, connects with the
    /// rewire radius and cascades cost decreases.
    void remove_and_rewire(const FreeSpace& updated, const ConvexPolygon& freed_region, std::size_t extra_samples,
                           std::uint64_t seed);

    /// Best cost_to_root plus connector over visible samples within the connection
    /// radius; +inf when none is reachable.
    [[nodiscard]] double query_cost(Point2 target) const;

    [[nodiscard]] const std::vector<Point2>& samples() const { return samples_; }
    [[nodiscard]] const std::vector<double>& cost_to_root() const { return cost_; }
    [[nodiscard]] const std::vector<std::vector<Edge>>& edges() const { return adj_; }
    [[nodiscard]] Point2 root() const { return samples_.front(); }
    [[nodiscard]] int generation() const { return generation_; }
    [[nodiscard]] double radius() const { return radius_; }
    [[nodiscard]] const FreeSpace& free() const { return free_; }

private:
    void add_sample(Point2 p);
    void connect(int a, int b);
    void relax_from(std::vector<int> seeds);
    template <class F>
    void for_near(Point2 p, double r, F&& f) const;

    FreeSpace free_;
    RadiusRule rule_;
    double radius_ = 0.0;
    double cell_ = 1.0;
    Box2 box_;
    int grid_w_ = 1;
    int grid_h_ = 1;
    std::vector<std::vector<int>> grid_;
    std::vector<Point2> samples_;
    std::vector<std::vector<Edge>> adj_;
    std::vector<double> cost_;
    int generation_ = 0;
};

/// Connection radius for m candidates in a region of the given area.
double connection_radius(double area, std::size_t m, const RadiusRule& rule);

}  // namespace crp
