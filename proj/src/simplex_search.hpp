#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rpu::detail {

// Number of points k/r (k integer, sum k = r) on the simplex with d coordinates.
double simplex_grid_size(std::size_t d, std::size_t r);

// Largest resolution whose grid stays within `budget` points.
std::size_t resolution_for_budget(std::size_t d, std::size_t budget);

// Visits every composition k of r into d parts. Return false from f to stop early.
void for_each_composition(std::size_t d, std::size_t r,
                          const std::function<bool(const std::vector<std::size_t>&)>& f);

struct SimplexSearchResult {
    std::vector<double> point;
    double value = 0.0;
};

using SimplexObjective = std::function<double(const std::vector<double>&)>;

// Grid at `resolution`, then pairwise mass transfers with a halving radius.
SimplexSearchResult maximize_on_simplex(std::size_t d, const SimplexObjective& f,
                                        std::size_t resolution, int refine_steps = 20);

SimplexSearchResult minimize_on_simplex(std::size_t d, const SimplexObjective& f,
                                        std::size_t resolution, int refine_steps = 20);

}  // namespace rpu::detail
