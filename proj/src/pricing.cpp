#include "gridstack/pricing.hpp"

#include <stdexcept>

#include "gridstack/mpg_solver.hpp"
#include "gridstack/parallel.hpp"
#include "gridstack/payoff.hpp"

namespace gridstack {

PricingResult grid_search_pricing(const GameG1& base, const PricingGrid& grid, int k_max) {
    if (grid.alpha_values.empty() || grid.beta_values.empty()) {
        throw std::invalid_argument("pricing grid must have at least one alpha and one beta");
    }
    PricingResult result;
    result.num_alpha = static_cast<int>(grid.alpha_values.size());
    result.num_beta = static_cast<int>(grid.beta_values.size());
    result.cells.resize(static_cast<std::size_t>(result.num_alpha) * result.num_beta);

    parallel_for(0, static_cast<int>(result.cells.size()), [&](int c) {
        GameG1 game = base;
        game.pricing = {grid.alpha_values[c / result.num_beta], grid.beta_values[c % result.num_beta],
                        grid.gamma1, grid.gamma2};
        const GameG2 reduced = build_reduced_game(game);
        const auto eq = fip_solve(reduced, zero_profile(reduced), k_max);
        auto& cell = result.cells[c];
        cell.alpha = game.pricing.alpha;
        cell.beta = game.pricing.beta;
        cell.converged = eq.converged;
        cell.iterations = eq.iterations;
        cell.aggregate_demand = aggregate_demand(eq.policies);
        cell.payoff = leader_payoff(eq.policies, game, grid.leader);
    });

    for (int c = 0; c < static_cast<int>(result.cells.size()); ++c) {
        const auto& cell = result.cells[c];
        if (!cell.converged) continue;
        if (result.best < 0 || cell.payoff > result.cells[result.best].payoff) result.best = c;
    }
    return result;
}

std::vector<int> row_argmax_beta(const PricingResult& result) {
    std::vector<int> out(result.num_alpha, -1);
    for (int a = 0; a < result.num_alpha; ++a) {
        for (int b = 0; b < result.num_beta; ++b) {
            const auto& cell = result.at(a, b);
            if (!cell.converged) continue;
            if (out[a] < 0 || cell.payoff > result.at(a, out[a]).payoff) out[a] = b;
        }
    }
    return out;
}

} // namespace gridstack
