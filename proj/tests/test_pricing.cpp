#include <doctest.h>

#include "gridstack/fixtures.hpp"
#include "gridstack/payoff.hpp"
#include "gridstack/pricing.hpp"
#include "oracles.hpp"

using namespace gridstack;

namespace {

GameG1 toy() {
    GameG1 game;
    game.chain.predicted = {4.0};
    game.chain.error_support = {0.0};
    game.chain.transition = {Eigen::MatrixXd::Identity(1, 1)};
    game.chain.initial_dist = Eigen::VectorXd::Ones(1);
    game.users = {UserSpec::linear(1.0, 3, 3, 0), UserSpec::linear(1.2, 3, 3, 0)};
    game.pricing = {1.0, 1.0, 1.0, 1.0};
    game.initial_storage = {0, 0};
    return game;
}

/// Every pure Nash equilibrium of the one-stage toy under (alpha, beta).
std::vector<std::pair<int, int>> toy_equilibria(const GameG1& game, double alpha, double beta) {
    PricingParams p = game.pricing;
    p.alpha = alpha;
    p.beta = beta;
    const double e = 4.0;
    auto gain = [&](int i, int own, int other) {
        return *game.users[i].theta * own - oracle::direct_price(own + other, e, p, 2) * own;
    };
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; b <= 3; ++b) {
            bool stable = true;
            for (int x = 0; x <= 3; ++x) {
                stable &= gain(0, x, b) <= gain(0, a, b) + 1e-12;
                stable &= gain(1, x, a) <= gain(1, b, a) + 1e-12;
            }
            if (stable) out.emplace_back(a, b);
        }
    }
    return out;
}

double toy_leader(int total, double alpha, double beta, const LeaderParams& l) {
    const double e = 4.0;
    const double p = oracle::direct_price(total, e, {alpha, beta, 1.0, 1.0}, 2);
    const double miss = total - e - l.target;
    return p * total - l.unit_cost * (total - e) - 0.5 * l.penalty_weight * miss * miss;
}

} // namespace

TEST_CASE("a single cell is its own winner") {
    const auto game = toy();
    PricingGrid grid;
    grid.alpha_values = {1.0};
    grid.beta_values = {1.0};
    grid.leader = {0.5, 0.1, 0.0};
    const auto res = grid_search_pricing(game, grid);
    REQUIRE(res.cells.size() == 1);
    CHECK(res.best == 0);
    CHECK(res.winner().converged);
    const auto eq = toy_equilibria(game, 1.0, 1.0);
    REQUIRE(eq.size() == 1);
    CHECK(res.winner().aggregate_demand(0, 0) == eq[0].first + eq[0].second);
    CHECK(res.winner().payoff == doctest::Approx(toy_leader(eq[0].first + eq[0].second, 1.0, 1.0, grid.leader)));
}

TEST_CASE("two-cell grid agrees with manual comparison") {
    const auto game = toy();
    PricingGrid grid;
    grid.alpha_values = {0.5, 4.0};
    grid.beta_values = {1.0};
    grid.leader = {0.5, 0.1, 0.0};
    const auto res = grid_search_pricing(game, grid);
    REQUIRE(res.cells.size() == 2);
    std::vector<double> manual;
    for (double a : grid.alpha_values) {
        const auto eq = toy_equilibria(game, a, 1.0);
        REQUIRE(eq.size() == 1);
        manual.push_back(toy_leader(eq[0].first + eq[0].second, a, 1.0, grid.leader));
    }
    CHECK(manual[0] != doctest::Approx(manual[1]));
    for (int k = 0; k < 2; ++k) CHECK(res.cells[k].payoff == doctest::Approx(manual[k]).epsilon(1e-12));
    CHECK(res.best == (manual[1] > manual[0] ? 1 : 0));
}

TEST_CASE("table shape, maximum and tie order") {
    const auto game = toy();
    PricingGrid grid;
    grid.alpha_values = {0.5, 1.0, 2.0};
    grid.beta_values = {1.0, 1.0};
    grid.leader = {0.5, 0.1, 0.0};
    const auto res = grid_search_pricing(game, grid);
    REQUIRE(res.cells.size() == 6);
    CHECK(res.num_alpha == 3);
    CHECK(res.num_beta == 2);
    double best = -1e300;
    for (const auto& c : res.cells) best = std::max(best, c.payoff);
    CHECK(res.winner().payoff == best);
    // Duplicate beta columns tie; the first in row-major order wins.
    CHECK(res.best % 2 == 0);
    for (int a = 0; a < 3; ++a) CHECK(res.at(a, 0).payoff == res.at(a, 1).payoff);
}

TEST_CASE("grid search is reproducible") {
    const auto game = fixtures::example1();
    const auto grid = fixtures::example3_grid();
    const auto a = grid_search_pricing(game, grid);
    const auto b = grid_search_pricing(game, grid);
    REQUIRE(a.cells.size() == 9);
    for (std::size_t k = 0; k < a.cells.size(); ++k) {
        CHECK(a.cells[k].payoff == b.cells[k].payoff);
        CHECK(a.cells[k].iterations == b.cells[k].iterations);
        CHECK(a.cells[k].aggregate_demand == b.cells[k].aggregate_demand);
    }
    CHECK(a.best == b.best);
}

TEST_CASE("bundled pricing grid picks (21, 19)") {
    const auto res = grid_search_pricing(fixtures::example1(), fixtures::example3_grid());
    CHECK(res.winner().alpha == 21.0);
    CHECK(res.winner().beta == 19.0);
    CHECK(row_argmax_beta(res) == std::vector<int>{2, 1, 0});
    for (const auto& c : res.cells) CHECK(c.converged);
}

TEST_CASE("cell payoff equals the leader payoff of its equilibrium") {
    const auto game = toy();
    PricingGrid grid;
    grid.alpha_values = {2.0};
    grid.beta_values = {0.5};
    grid.leader = {1.0, 0.2, 1.0};
    const auto res = grid_search_pricing(game, grid);
    const int total = res.winner().aggregate_demand(0, 0);
    CHECK(res.winner().payoff == doctest::Approx(toy_leader(total, 2.0, 0.5, grid.leader)).epsilon(1e-12));
}
