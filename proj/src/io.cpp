#include "crp/io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace crp {

using nlohmann::json;

namespace {

constexpr const char* kSceneFormat = "crp-scene";
constexpr const char* kInstanceFormat = "crp-instance";
constexpr const char* kFormulaFormat = "crp-mpsat";

void check_keys(const json& j, std::initializer_list<const char*> known, bool strict, const std::string& where)
{
    if (!j.is_object())
    {
        throw ParseError(where + ": expected an object");
    }
    if (!strict)
    {
        return;
    }
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : j.items())
    {
        if (!allowed.contains(key))
        {
            throw ParseError(where + ": unknown field '" + key + "'");
        }
    }
}

const json& need(const json& j, const char* key, const std::string& where)
{
    auto it = j.find(key);
    if (it == j.end())
    {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    return *it;
}

json parse_text(const std::string& text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

void check_header(const json& j, const char* format)
{
    if (!j.is_object())
    {
        throw ParseError("document must be a JSON object");
    }
    const auto& f = need(j, "format", "document");
    if (!f.is_string() || f.get<std::string>() != format)
    {
        throw ParseError(std::string("expected format '") + format + "'");
    }
    const auto& v = need(j, "version", "document");
    if (!v.is_number_integer() || v.get<int>() != kFileFormatVersion)
    {
        throw ParseError("unsupported format version");
    }
}

json point(Point2 p) { return json::array({p.x, p.y}); }

Point2 to_point(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    {
        throw ParseError(where + ": expected [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json ring(const std::vector<Point2>& pts)
{
    json a = json::array();
    for (auto p : pts)
    {
        a.push_back(point(p));
    }
    return a;
}

std::vector<Point2> to_ring(const json& j, const std::string& where)
{
    if (!j.is_array())
    {
        throw ParseError(where + ": expected a list of points");
    }
    std::vector<Point2> out;
    for (const auto& p : j)
    {
        out.push_back(to_point(p, where));
    }
    return out;
}

json region(const PolygonRegion& r)
{
    json holes = json::array();
    for (const auto& h : r.holes)
    {
        holes.push_back(ring(h));
    }
    return {{"outer", ring(r.outer)}, {"holes", holes}};
}

PolygonRegion to_region(const json& j, bool strict, const std::string& where)
{
    check_keys(j, {"outer", "holes"}, strict, where);
    PolygonRegion r;
    r.outer = to_ring(need(j, "outer", where), where + ".outer");
    if (j.contains("holes"))
    {
        for (const auto& h : j.at("holes"))
        {
            r.holes.push_back(to_ring(h, where + ".holes"));
        }
    }
    return r;
}

double number(const json& j, const std::string& where)
{
    if (!j.is_number())
    {
        throw ParseError(where + ": expected a number");
    }
    return j.get<double>();
}

std::size_t index(const json& j, const std::string& where)
{
    if (!j.is_number_unsigned())
    {
        throw ParseError(where + ": expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

json condition(const Condition& c)
{
    switch (c.kind)
    {
    case Condition::Kind::always:
        return "always";
    case Condition::Kind::removed:
        return {{"removed", c.object}};
    case Condition::Kind::present:
        return {{"present", c.object}};
    case Condition::Kind::all:
    case Condition::Kind::any:
    {
        json a = json::array();
        for (const auto& ch : c.children)
        {
            a.push_back(condition(ch));
        }
        return {{c.kind == Condition::Kind::all ? "all" : "any", a}};
    }
    }
    return "always";
}

Condition to_condition(const json& j, const std::string& where)
{
    if (j.is_string() && j.get<std::string>() == "always")
    {
        return Condition::always();
    }
    if (!j.is_object() || j.size() != 1)
    {
        throw ParseError(where + ": a condition is \"always\" or a single-key object");
    }
    const auto& [key, value] = *j.items().begin();
    if (key == "removed" || key == "present")
    {
        const auto k = static_cast<ObjectIndex>(index(value, where));
        return key == "removed" ? Condition::removed(k) : Condition::present(k);
    }
    if (key == "all" || key == "any")
    {
        if (!value.is_array())
        {
            throw ParseError(where + ": expected a list of conditions");
        }
        std::vector<Condition> ch;
        for (const auto& c : value)
        {
            ch.push_back(to_condition(c, where));
        }
        return key == "all" ? Condition::all_of(std::move(ch)) : Condition::any_of(std::move(ch));
    }
    throw ParseError(where + ": unknown condition '" + key + "'");
}

Scene scene_from(const json& j, bool strict)
{
    check_header(j, kSceneFormat);
    check_keys(j, {"format", "version", "units", "workspace", "obstacles", "objects", "exits", "robot"}, strict,
               "scene");
    if (j.contains("units") && j.at("units") != "m")
    {
        throw ParseError("scene: only metre units are supported");
    }
    Scene s;
    s.workspace = to_region(need(j, "workspace", "scene"), strict, "workspace");
    for (const auto& o : j.value("obstacles", json::array()))
    {
        s.obstacles.push_back(to_region(o, strict, "obstacle"));
    }
    for (const auto& o : need(j, "objects", "scene"))
    {
        check_keys(o, {"center", "half_extents", "angle", "stack_height"}, strict, "object");
        SceneObject obj;
        obj.shape.center = to_point(need(o, "center", "object"), "object.center");
        const Point2 h = to_point(need(o, "half_extents", "object"), "object.half_extents");
        obj.shape.half_x = h.x;
        obj.shape.half_y = h.y;
        obj.shape.angle = o.contains("angle") ? number(o.at("angle"), "object.angle") : 0.0;
        if (o.contains("stack_height"))
        {
            if (!o.at("stack_height").is_number_integer())
            {
                throw ParseError("object.stack_height: expected an integer");
            }
            obj.stack_height = o.at("stack_height").get<int>();
        }
        s.objects.push_back(obj);
    }
    for (const auto& e : need(j, "exits", "scene"))
    {
        check_keys(e, {"position", "arc"}, strict, "exit");
        Exit x;
        if (e.contains("arc"))
        {
            x.arc = number(e.at("arc"), "exit.arc");
        }
        else if (e.contains("position"))
        {
            x.position = to_point(e.at("position"), "exit.position");
        }
        else
        {
            throw ParseError("exit: needs a position or an arc");
        }
        s.exits.push_back(x);
    }
    if (j.contains("robot"))
    {
        const auto& r = j.at("robot");
        check_keys(r, {"radius", "grasp_standoff", "grasp_sample_step", "grasp_time"}, strict, "robot");
        if (r.contains("radius"))
        {
            s.robot_radius = number(r.at("radius"), "robot.radius");
        }
        if (r.contains("grasp_standoff"))
        {
            s.grasp_standoff = number(r.at("grasp_standoff"), "robot.grasp_standoff");
        }
        if (r.contains("grasp_sample_step"))
        {
            s.grasp_sample_step = number(r.at("grasp_sample_step"), "robot.grasp_sample_step");
        }
        if (r.contains("grasp_time"))
        {
            s.grasp_time_constant = number(r.at("grasp_time"), "robot.grasp_time");
        }
    }
    s.finalize();
    return s;
}

AbstractInstance instance_from(const json& j, bool strict)
{
    check_header(j, kInstanceFormat);
    check_keys(j, {"format", "version", "exit_count", "start_exit", "boundary", "params", "objects"}, strict,
               "instance");
    AbstractInstance inst;
    inst.exit_count = index(need(j, "exit_count", "instance"), "exit_count");
    inst.start_exit = static_cast<ExitIndex>(j.contains("start_exit") ? index(j.at("start_exit"), "start_exit") : 0);
    for (const auto& row : j.value("boundary", json::array()))
    {
        std::vector<double> r;
        for (const auto& v : row)
        {
            r.push_back(number(v, "boundary"));
        }
        inst.boundary.push_back(r);
    }
    const json params = j.value("params", json::object());
    for (const auto& [key, value] : params.items())
    {
        inst.params[key] = number(value, "params." + key);
    }
    for (const auto& o : need(j, "objects", "instance"))
    {
        check_keys(o, {"label", "routes"}, strict, "object");
        AbstractObject obj;
        obj.label = o.value("label", "");
        for (const auto& r : need(o, "routes", "object"))
        {
            check_keys(r, {"entry", "leave", "cost", "when"}, strict, "route");
            Route rt;
            rt.entry = static_cast<ExitIndex>(index(need(r, "entry", "route"), "route.entry"));
            rt.leave = static_cast<ExitIndex>(index(need(r, "leave", "route"), "route.leave"));
            rt.cost = number(need(r, "cost", "route"), "route.cost");
            rt.when = r.contains("when") ? to_condition(r.at("when"), "route.when") : Condition::always();
            obj.routes.push_back(std::move(rt));
        }
        inst.objects.push_back(std::move(obj));
    }
    return inst;
}

MpsatFormula formula_from(const json& j, bool strict)
{
    check_header(j, kFormulaFormat);
    check_keys(j, {"format", "version", "n_vars", "positive", "negative"}, strict, "formula");
    MpsatFormula f;
    f.n_vars = index(need(j, "n_vars", "formula"), "n_vars");
    auto side = [&](const char* key, std::vector<std::vector<std::size_t>>& out) {
        for (const auto& c : j.value(key, json::array()))
        {
            std::vector<std::size_t> clause;
            for (const auto& v : c)
            {
                clause.push_back(index(v, key));
            }
            out.push_back(clause);
        }
    };
    side("positive", f.positive);
    side("negative", f.negative);
    try
    {
        f.validate();
    }
    catch (const std::invalid_argument& e)
    {
        throw ParseError(std::string("formula: ") + e.what());
    }
    return f;
}

template <class F>
auto guarded(F&& f)
{
    try
    {
        return f();
    }
    catch (const json::exception& e)
    {
        throw ParseError(std::string("bad document: ") + e.what());
    }
}

}  // namespace

std::string scene_to_json(const Scene& scene)
{
    json j;
    j["format"] = kSceneFormat;
    j["version"] = kFileFormatVersion;
    j["units"] = "m";
    j["workspace"] = region(scene.workspace);
    j["obstacles"] = json::array();
    for (const auto& o : scene.obstacles)
    {
        j["obstacles"].push_back(region(o));
    }
    j["objects"] = json::array();
    for (const auto& o : scene.objects)
    {
        j["objects"].push_back({{"center", point(o.shape.center)},
                                {"half_extents", json::array({o.shape.half_x, o.shape.half_y})},
                                {"angle", o.shape.angle},
                                {"stack_height", o.stack_height}});
    }
    j["exits"] = json::array();
    for (const auto& e : scene.exits)
    {
        json x;
        if (!std::isnan(e.arc))
        {
            x["arc"] = e.arc;
        }
        x["position"] = point(e.position);
        j["exits"].push_back(x);
    }
    json r{{"radius", scene.robot_radius}, {"grasp_time", scene.grasp_time_constant}};
    if (scene.grasp_standoff)
    {
        r["grasp_standoff"] = *scene.grasp_standoff;
    }
    if (scene.grasp_sample_step)
    {
        r["grasp_sample_step"] = *scene.grasp_sample_step;
    }
    j["robot"] = r;
    return j.dump(2) + "\n";
}

Scene scene_from_json(const std::string& text, bool strict)
{
    return guarded([&] { return scene_from(parse_text(text), strict); });
}

std::string instance_to_json(const AbstractInstance& inst)
{
    json j;
    j["format"] = kInstanceFormat;
    j["version"] = kFileFormatVersion;
    j["exit_count"] = inst.exit_count;
    j["start_exit"] = inst.start_exit;
    j["boundary"] = inst.boundary;
    j["params"] = json::object();
    for (const auto& [k, v] : inst.params)
    {
        j["params"][k] = v;
    }
    j["objects"] = json::array();
    for (const auto& o : inst.objects)
    {
        json routes = json::array();
        for (const auto& r : o.routes)
        {
            routes.push_back({{"entry", r.entry}, {"leave", r.leave}, {"cost", r.cost}, {"when", condition(r.when)}});
        }
        j["objects"].push_back({{"label", o.label}, {"routes", routes}});
    }
    return j.dump(2) + "\n";
}

AbstractInstance instance_from_json(const std::string& text, bool strict)
{
    return guarded([&] { return instance_from(parse_text(text), strict); });
}

std::string formula_to_json(const MpsatFormula& f)
{
    json j;
    j["format"] = kFormulaFormat;
    j["version"] = kFileFormatVersion;
    j["n_vars"] = f.n_vars;
    j["positive"] = f.positive;
    j["negative"] = f.negative;
    return j.dump(2) + "\n";
}

MpsatFormula formula_from_json(const std::string& text, bool strict)
{
    return guarded([&] { return formula_from(parse_text(text), strict); });
}

Document document_from_json(const std::string& text, bool strict)
{
    return guarded([&]() -> Document {
        const json j = parse_text(text);
        if (!j.is_object() || !j.contains("format") || !j.at("format").is_string())
        {
            throw ParseError("document has no format field");
        }
        const std::string f = j.at("format").get<std::string>();
        if (f == kSceneFormat)
        {
            return scene_from(j, strict);
        }
        if (f == kInstanceFormat)
        {
            return instance_from(j, strict);
        }
        if (f == kFormulaFormat)
        {
            return formula_from(j, strict);
        }
        throw ParseError("unknown format '" + f + "'");
    });
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content) || !out.flush())
    {
        throw std::runtime_error("cannot write " + path);
    }
}

}  // namespace crp
