#ifndef GRIDSTACK_PRICING_HPP
#define GRIDSTACK_PRICING_HPP

#include <vector>

#include <Eigen/Dense>

#include "gridstack/core_model.hpp"

namespace gridstack {

struct PricingGrid {
    std::vector<double> alpha_values;
    std::vector<double> beta_values;
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    LeaderParams leader;
};

struct PricingCell {
    double alpha = 0.0;
    double beta = 0.0;
    double payoff = 0.0;
    bool converged = false;
    int iterations = 0;
    /// Equilibrium aggregate demand per (stage, error index).
    Eigen::MatrixXi aggregate_demand;
};

struct PricingResult {
    /// Row-major: alpha outer, beta inner.
    std::vector<PricingCell> cells;
    int num_alpha = 0;
    int num_beta = 0;
    /// -1 when no cell converged.
    int best = -1;

    const PricingCell& at(int a, int b) const { return cells[a * num_beta + b]; }
    const PricingCell& winner() const { return cells[best]; }
};

/// Solves the follower equilibrium from the all-zero profile in every grid
/// cell and keeps the cell with the largest leader payoff (first in row-major
/// order on ties). Cells that fail to converge are excluded.
PricingResult grid_search_pricing(const GameG1& base, const PricingGrid& grid, int k_max = 10000);

/// Index of the best beta in each alpha row (converged cells only; -1 if none).
std::vector<int> row_argmax_beta(const PricingResult& result);

} // namespace gridstack

#endif
