#pragma once

#include "crp/instances.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace crp::testing {

/// Random valid formula with 1..max_vars variables and at least one clause on each
/// side. Rejection-samples until the embedding is laminar.
inline MpsatFormula random_formula(std::mt19937_64& rng, std::size_t max_vars, std::size_t max_clauses_per_side = 3)
{
    std::uniform_int_distribution<std::size_t> nv(1, max_vars);
    for (;;)
    {
        MpsatFormula f;
        f.n_vars = nv(rng);
        auto side = [&](std::vector<std::vector<std::size_t>>& out) {
            const std::size_t count = std::uniform_int_distribution<std::size_t>(1, max_clauses_per_side)(rng);
            for (std::size_t c = 0; c < count; ++c)
            {
                const std::size_t size = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(3, f.n_vars))(rng);
                std::vector<std::size_t> vars(f.n_vars);
                for (std::size_t i = 0; i < f.n_vars; ++i)
                {
                    vars[i] = i;
                }
                std::shuffle(vars.begin(), vars.end(), rng);
                vars.resize(size);
                std::sort(vars.begin(), vars.end());
                out.push_back(vars);
            }
        };
        side(f.positive);
        side(f.negative);
        try
        {
            f.validate();
            return f;
        }
        catch (const std::invalid_argument&)
        {
        }
    }
}

}  // namespace crp::testing
