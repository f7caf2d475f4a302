#include "crp/geometry.hpp"
#include "crp/roadmap.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace crp;

namespace {

ConvexPolygon square(double x0, double y0, double x1, double y1)
{
    return ConvexPolygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

FreeSpace open_room()
{
    FreeSpace f;
    f.boundary = square(0, 0, 10, 10);
    f.tolerance = 1e-8;
    return f;
}

FreeSpace pocket_room()
{
    FreeSpace f = open_room();
    f.blockers = {square(3, 3, 7, 4), square(3, 6, 7, 7), square(3, 3, 4, 7), square(6, 3, 7, 7)};
    return f;
}

}  // namespace

TEST_CASE("far corner of an empty square")
{
    const Roadmap rm = Roadmap::build(open_room(), {5, 0}, 2000, {}, 1);
    const double straight = distance({5, 0}, {10, 10});
    CHECK(rm.query_cost({9.99, 9.99}) <= 1.05 * straight);
    CHECK(rm.query_cost({5, 0}) == 0.0);
}

TEST_CASE("single sample roadmap holds only the root")
{
    const Roadmap rm = Roadmap::build(open_room(), {5, 0}, 1, {}, 1);
    CHECK(rm.samples().size() == 1);
    CHECK(rm.cost_to_root().front() == 0.0);
}

TEST_CASE("sealed pocket stays unreachable")
{
    const Roadmap rm = Roadmap::build(pocket_room(), {5, 0}, 2000, {}, 1);
    for (std::size_t i = 0; i < rm.samples().size(); ++i)
    {
        const Point2 p = rm.samples()[i];
        if (p.x > 4 && p.x < 6 && p.y > 4 && p.y < 6)
        {
            CHECK(std::isinf(rm.cost_to_root()[i]));
        }
    }
    CHECK(std::isinf(rm.query_cost({5, 5})));
}

TEST_CASE("rewiring after a removal")
{
    SUBCASE("far removal changes nothing")
    {
        FreeSpace before = open_room();
        before.blockers = {square(1, 1, 2, 2), square(4, 4, 6, 6)};
        Roadmap rm = Roadmap::build(before, {5, 0}, 1500, {}, 3);
        FreeSpace after = open_room();
        after.blockers = {square(4, 4, 6, 6)};
        const std::vector<double> old = rm.cost_to_root();
        rm.remove_and_rewire(after, square(1, 1, 2, 2), 0, 4);
        for (std::size_t i = 0; i < old.size(); ++i)
        {
            const Point2 p = rm.samples()[i];
            // Right of the middle box, away from the removed one.
            if (p.x > 6 && p.y > 3)
            {
                CHECK(rm.cost_to_root()[i] == old[i]);
            }
        }
    }
    SUBCASE("opening a pocket makes it reachable")
    {
        Roadmap rm = Roadmap::build(pocket_room(), {5, 0}, 2000, {}, 5);
        FreeSpace opened = open_room();
        opened.blockers = {square(3, 6, 7, 7), square(3, 3, 4, 7), square(6, 3, 7, 7)};
        rm.remove_and_rewire(opened, square(3, 3, 7, 4), 200, 6);
        CHECK(std::isfinite(rm.query_cost({5, 5})));
        CHECK(rm.generation() == 1);
    }
    SUBCASE("costs behind the removed object drop")
    {
        FreeSpace before = open_room();
        before.blockers = {square(2, 2, 8, 3)};
        Roadmap rm = Roadmap::build(before, {5, 0}, 2000, {}, 7);
        const double old = rm.query_cost({5, 4});
        FreeSpace after = open_room();
        rm.remove_and_rewire(after, square(2, 2, 8, 3), 200, 8);
        const double now = rm.query_cost({5, 4});
        CHECK(now < old);
        CHECK(now <= 1.05 * 4.0);
    }
}

TEST_CASE("obstacle-free queries are close to straight lines")
{
    const FreeSpace f = open_room();
    const Point2 root{5, 0};
    const Roadmap rm = Roadmap::build(f, root, 5000, {}, 11);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.5, 9.5);
    for (int i = 0; i < 50; ++i)
    {
        const Point2 p{u(rng), u(rng)};
        const auto exact = shortest_path(f, root, p);
        REQUIRE(exact);
        CHECK(rm.query_cost(p) <= 1.05 * exact->length);
        CHECK(rm.query_cost(p) >= exact->length - 1e-9);
    }
}

TEST_CASE("roadmap never beats the exact distance around blockers")
{
    FreeSpace f = open_room();
    f.blockers = {square(2, 2, 4, 6), square(5, 5, 8, 7)};
    const Point2 root{5, 0};
    const Roadmap rm = Roadmap::build(f, root, 3000, {}, 13);
    for (Point2 p : {Point2{3, 8}, Point2{6.5, 9}, Point2{9, 6}})
    {
        const auto exact = shortest_path(f, root, p);
        REQUIRE(exact);
        CHECK(rm.query_cost(p) >= exact->length - 1e-9);
        CHECK(rm.query_cost(p) <= 1.1 * exact->length);
    }
}
