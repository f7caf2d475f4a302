#include "crp/roadmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>

namespace crp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double connection_radius(double area, std::size_t m, const RadiusRule& rule)
{
    const double mm = static_cast<double>(std::max<std::size_t>(m, 2));
    const double gamma = 2.0 * std::sqrt(1.5) * std::sqrt(area / std::numbers::pi) * rule.gamma_factor;
    return gamma * std::sqrt(std::log(mm) / mm);
}

template <class F>
void Roadmap::for_near(Point2 p, double r, F&& f) const
{
    const auto cell_of = [&](double v, double lo, int count) {
        return std::clamp(static_cast<int>(std::floor((v - lo) / cell_)), 0, count - 1);
    };
    const int x0 = cell_of(p.x - r, box_.lo.x, grid_w_);
    const int x1 = cell_of(p.x + r, box_.lo.x, grid_w_);
    const int y0 = cell_of(p.y - r, box_.lo.y, grid_h_);
    const int y1 = cell_of(p.y + r, box_.lo.y, grid_h_);
    for (int gy = y0; gy <= y1; ++gy)
    {
        for (int gx = x0; gx <= x1; ++gx)
        {
            for (int i : grid_[static_cast<std::size_t>(gy * grid_w_ + gx)])
            {
                if (distance(samples_[static_cast<std::size_t>(i)], p) <= r)
                {
                    f(i);
                }
            }
        }
    }
}

void Roadmap::add_sample(Point2 p)
{
    const int id = static_cast<int>(samples_.size());
    samples_.push_back(p);
    adj_.emplace_back();
    cost_.push_back(kInf);
    const int gx = std::clamp(static_cast<int>(std::floor((p.x - box_.lo.x) / cell_)), 0, grid_w_ - 1);
    const int gy = std::clamp(static_cast<int>(std::floor((p.y - box_.lo.y) / cell_)), 0, grid_h_ - 1);
    grid_[static_cast<std::size_t>(gy * grid_w_ + gx)].push_back(id);
}

void Roadmap::connect(int a, int b)
{
    const double w = distance(samples_[static_cast<std::size_t>(a)], samples_[static_cast<std::size_t>(b)]);
    adj_[static_cast<std::size_t>(a)].push_back({b, w});
    adj_[static_cast<std::size_t>(b)].push_back({a, w});
}

void Roadmap::relax_from(std::vector<int> seeds)
{
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int s : seeds)
    {
        if (cost_[static_cast<std::size_t>(s)] < kInf)
        {
            heap.emplace(cost_[static_cast<std::size_t>(s)], s);
        }
    }
    while (!heap.empty())
    {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > cost_[static_cast<std::size_t>(u)])
        {
            continue;
        }
        for (const auto& e : adj_[static_cast<std::size_t>(u)])
        {
            const double nd = d + e.length;
            if (nd < cost_[static_cast<std::size_t>(e.to)])
            {
                cost_[static_cast<std::size_t>(e.to)] = nd;
                heap.emplace(nd, e.to);
            }
        }
    }
}

Roadmap Roadmap::build(const FreeSpace& free, Point2 root, std::size_t n_samples, RadiusRule rule,
                       std::uint64_t seed)
{
    if (n_samples < 1)
    {
        throw GeometryError("roadmap needs at least one sample");
    }
    for (const auto& b : free.blockers)
    {
        if (b.contains_strict(root, free.tolerance))
        {
            throw GeometryError("roadmap root lies outside free space");
        }
    }
    Roadmap rm;
    rm.free_ = free;
    rm.rule_ = rule;
    const std::size_t m = n_samples - 1;
    rm.radius_ = connection_radius(free.boundary.area(), m, rule);
    rm.box_ = free.boundary.bounds();
    rm.box_.expand(root);
    rm.cell_ = std::max(rm.radius_, 1e-9);
    const auto dims = [&](double extent) {
        return std::clamp(static_cast<int>(std::ceil(extent / rm.cell_)), 1, 2048);
    };
    rm.grid_w_ = dims(rm.box_.hi.x - rm.box_.lo.x);
    rm.grid_h_ = dims(rm.box_.hi.y - rm.box_.lo.y);
    rm.cell_ = std::max((rm.box_.hi.x - rm.box_.lo.x) / rm.grid_w_, (rm.box_.hi.y - rm.box_.lo.y) / rm.grid_h_);
    rm.cell_ = std::max(rm.cell_, 1e-9);
    rm.grid_.assign(static_cast<std::size_t>(rm.grid_w_ * rm.grid_h_), {});

    rm.add_sample(root);
    rm.cost_[0] = 0.0;
    std::mt19937_64 rng(seed);
    const Box2 bb = free.boundary.bounds();
    std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x);
    std::uniform_real_distribution<double> uy(bb.lo.y, bb.hi.y);
    std::size_t drawn = 0;
    while (drawn < m)
    {
        const Point2 p{ux(rng), uy(rng)};
        if (!free.boundary.contains_closed(p, 0.0))
        {
            continue;
        }
        ++drawn;
        if (free.contains(p))
        {
            rm.add_sample(p);
        }
    }
    const int count = static_cast<int>(rm.samples_.size());
    for (int i = 0; i < count; ++i)
    {
        const Point2 p = rm.samples_[static_cast<std::size_t>(i)];
        rm.for_near(p, rm.radius_, [&](int j) {
            if (j > i && free.visible(p, rm.samples_[static_cast<std::size_t>(j)]))
            {
                rm.connect(i, j);
            }
        });
    }
    rm.relax_from({0});
    return rm;
}

void Roadmap::remove_and_rewire(const FreeSpace& updated, const ConvexPolygon& freed_region,
                                std::size_t extra_samples, std::uint64_t seed)
{
    free_ = updated;
    ++generation_;
    const int old_count = static_cast<int>(samples_.size());
    const double big = rule_.rewire_factor * radius_;
    const Box2 fb = freed_region.bounds();

    std::vector<int> touched;
    // Pairs of retained samples that the freed region used to separate.
    Box2 near = fb;
    near.lo = near.lo - Point2{radius_, radius_};
    near.hi = near.hi + Point2{radius_, radius_};
    for (int i = 1; i < old_count; ++i)
    {
        const Point2 p = samples_[static_cast<std::size_t>(i)];
        if (p.x < near.lo.x || p.x > near.hi.x || p.y < near.lo.y || p.y > near.hi.y)
        {
            continue;
        }
        for_near(p, radius_, [&](int j) {
            if (j <= i && j != 0)
            {
                return;
            }
            const bool linked = std::any_of(adj_[static_cast<std::size_t>(i)].begin(),
                                            adj_[static_cast<std::size_t>(i)].end(),
                                            [&](const Edge& e) { return e.to == j; });
            if (!linked && free_.visible(p, samples_[static_cast<std::size_t>(j)]))
            {
                connect(i, j);
                touched.push_back(i);
                touched.push_back(j);
            }
        });
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(fb.lo.x, fb.hi.x);
    std::uniform_real_distribution<double> uy(fb.lo.y, fb.hi.y);
    std::size_t added = 0;
    for (std::size_t attempt = 0; added < extra_samples && attempt < 1000 * extra_samples + 1000; ++attempt)
    {
        const Point2 p{ux(rng), uy(rng)};
        if (!freed_region.contains_closed(p, 0.0) || !free_.contains(p))
        {
            continue;
        }
        add_sample(p);
        ++added;
        const int id = static_cast<int>(samples_.size()) - 1;
        for_near(p, big, [&](int j) {
            if (j != id && free_.visible(p, samples_[static_cast<std::size_t>(j)]))
            {
                connect(id, j);
                touched.push_back(j);
            }
        });
    }
    relax_from(std::move(touched));
}

double Roadmap::query_cost(Point2 target) const
{
    double best = kInf;
    for_near(target, radius_, [&](int i) {
        const double c = cost_[static_cast<std::size_t>(i)];
        if (c < kInf && free_.visible(samples_[static_cast<std::size_t>(i)], target))
        {
            best = std::min(best, c + distance(samples_[static_cast<std::size_t>(i)], target));
        }
    });
    return best;
}

}  // namespace crp
