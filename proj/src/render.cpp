#include "crp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace crp {

namespace {

/// Fixed-precision number so equal inputs give byte-identical files.
std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", std::abs(v) < 5e-5 ? 0.0 : v);
    return buf;
}

class Svg
{
public:
    Svg(const Box2& box, double scale) : box_(box), scale_(scale) {}

    [[nodiscard]] double x(double v) const { return (v - box_.lo.x) * scale_; }
    [[nodiscard]] double y(double v) const { return (box_.hi.y - v) * scale_; }

    void polygon(const std::vector<Point2>& pts, const std::string& style)
    {
        out_ += "<polygon points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
        {
            out_ += (i ? " " : "") + num(x(pts[i].x)) + "," + num(y(pts[i].y));
        }
        out_ += "\" " + style + "/>\n";
    }
    void circle(Point2 c, double r, const std::string& style)
    {
        out_ += "<circle cx=\"" + num(x(c.x)) + "\" cy=\"" + num(y(c.y)) + "\" r=\"" + num(r * scale_) + "\" " +
                style + "/>\n";
    }
    void text(Point2 at, const std::string& s, double size)
    {
        out_ += "<text x=\"" + num(x(at.x)) + "\" y=\"" + num(y(at.y)) + "\" font-size=\"" + num(size * scale_) +
                "\" text-anchor=\"middle\" dominant-baseline=\"central\" font-family=\"sans-serif\">" + s +
                "</text>\n";
    }

    [[nodiscard]] std::string finish(double w, double h) const
    {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
               "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n" + out_ + "</svg>\n";
    }

private:
    Box2 box_;
    double scale_;
    std::string out_;
};

}  // namespace

std::string render_svg(const Scene& scene, const Plan* plan, const std::vector<Point2>& grasp_points)
{
    Box2 box = ConvexPolygon(scene.workspace.outer).bounds();
    const double margin = 0.05 * std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y);
    box.lo = {box.lo.x - margin, box.lo.y - margin};
    box.hi = {box.hi.x + margin, box.hi.y + margin};
    const double width = 800.0;
    const double scale = width / (box.hi.x - box.lo.x);
    const double height = (box.hi.y - box.lo.y) * scale;
    Svg svg(box, scale);

    svg.polygon(scene.workspace.outer, "fill=\"white\" stroke=\"black\" stroke-width=\"2\"");
    for (const auto& h : scene.workspace.holes)
    {
        svg.polygon(h, "fill=\"#888888\" stroke=\"black\"");
    }
    for (const auto& o : scene.obstacles)
    {
        svg.polygon(o.outer, "fill=\"#888888\" stroke=\"black\"");
    }
    for (const auto& o : scene.objects)
    {
        const int shade = std::clamp(200 - 40 * o.stack_height, 0, 200);
        char fill[24];
        std::snprintf(fill, sizeof fill, "#%02x%02xff", shade, shade);
        svg.polygon(o.shape.corners(), std::string("fill=\"") + fill + "\" fill-opacity=\"0.8\" stroke=\"#000080\"");
    }
    const double r = scene.robot_radius;
    for (const auto& e : scene.exits)
    {
        std::vector<Point2> hex;
        for (int i = 0; i < 6; ++i)
        {
            const double a = std::numbers::pi / 3.0 * i;
            hex.push_back({e.position.x + 1.5 * r * std::cos(a), e.position.y + 1.5 * r * std::sin(a)});
        }
        svg.polygon(hex, "fill=\"red\" stroke=\"darkred\"");
    }
    if (plan != nullptr)
    {
        for (std::size_t i = 0; i < plan->steps.size(); ++i)
        {
            const ObjectIndex k = plan->steps[i].object;
            if (k < scene.objects.size())
            {
                svg.text(scene.objects[k].shape.center, std::to_string(i + 1), 2.0 * r);
            }
        }
        for (auto p : grasp_points)
        {
            svg.circle(p, r, "fill=\"none\" stroke=\"green\" stroke-width=\"1.5\"");
        }
    }
    return svg.finish(width, height);
}

std::vector<Point2> plan_grasp_points(const GeometricCostOracle& oracle, SearchState start, const Plan& plan)
{
    std::vector<Point2> out;
    RemainingSet s = start.remaining;
    for (const auto& st : plan.steps)
    {
        if (auto pose = oracle.best_pose(s, st.from_exit, st.object, st.to_exit))
        {
            out.push_back(pose->robot_position);
        }
        s = s.without(st.object);
    }
    return out;
}

}  // namespace crp
