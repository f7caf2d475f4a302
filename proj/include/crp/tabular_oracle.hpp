#pragma once

#include "crp/cost_oracle.hpp"

#include <map>
#include <string>
#include <vector>

namespace crp {

/// Boolean formula over "object x has been removed" literals.
struct Condition
{
    enum class Kind
    {
        always,
        removed,
        all,
        any,
        present,  // non-monotone; only accepted by TabularCostOracle::unchecked
    };

    Kind kind = Kind::always;
    ObjectIndex object = 0;
    std::vector<Condition> children;

    static Condition always() { return {}; }
    static Condition removed(ObjectIndex k) { return {Kind::removed, k, {}}; }
    static Condition present(ObjectIndex k) { return {Kind::present, k, {}}; }
    static Condition all_of(std::vector<Condition> c) { return {Kind::all, 0, std::move(c)}; }
    static Condition any_of(std::vector<Condition> c) { return {Kind::any, 0, std::move(c)}; }
    static Condition all_removed(const std::vector<ObjectIndex>& objects);
    static Condition any_removed(const std::vector<ObjectIndex>& objects);

    [[nodiscard]] bool satisfied(RemainingSet remaining) const;
    [[nodiscard]] bool monotone() const;
    [[nodiscard]] std::string to_string() const;
};

/// One way of removing an object: enter the workspace at `entry`, leave through
/// `leave`, paying `cost` once `when` holds.
struct Route
{
    ExitIndex entry = 0;
    ExitIndex leave = 0;
    double cost = 0.0;
    Condition when;
};

struct AbstractObject
{
    std::string label;
    std::vector<Route> routes;
};

/// Geometry-free instance: exits with a border metric and per-object routes.
struct AbstractInstance
{
    std::size_t exit_count = 1;
    std::vector<std::vector<double>> boundary;  // exit_count x exit_count; empty means all zero
    std::vector<AbstractObject> objects;
    ExitIndex start_exit = 0;
    std::map<std::string, double> params;  // w1, w2, w, n_prime, m, epsilon, target, ...

    [[nodiscard]] std::size_t object_count() const { return objects.size(); }
    [[nodiscard]] double param(const std::string& key) const;
};

class TabularCostOracle : public CostOracle
{
public:
    /// Validates the instance: monotone conditions, in-range indices, nonnegative
    /// costs, a border metric and at least one feasible removal order.
    /// Throws std::invalid_argument.
    explicit TabularCostOracle(AbstractInstance instance);
    /// Skips validation; for negative controls.
    static TabularCostOracle unchecked(AbstractInstance instance);

    [[nodiscard]] std::size_t object_count() const override { return instance_.objects.size(); }
    [[nodiscard]] std::size_t exit_count() const override { return instance_.exit_count; }
    [[nodiscard]] RemainingSet accessible(RemainingSet remaining, ExitIndex from) const override;
    [[nodiscard]] double removal_cost(RemainingSet remaining, ExitIndex from, ObjectIndex object,
                                      ExitIndex to) const override;
    [[nodiscard]] double boundary_distance(ExitIndex a, ExitIndex b) const override;

    [[nodiscard]] const AbstractInstance& instance() const { return instance_; }

private:
    struct Unchecked
    {
    };
    TabularCostOracle(AbstractInstance instance, Unchecked);
    void normalize();

    AbstractInstance instance_;
};

}  // namespace crp
