#include "gridstack/fixtures.hpp"

namespace gridstack::fixtures {

Eigen::MatrixXd solar_transition() {
    Eigen::MatrixXd q(3, 3);
    q << 5.0 / 11.0, 5.0 / 11.0, 1.0 / 11.0,
         1.0 / 4.0, 7.0 / 16.0, 5.0 / 16.0,
         2.0 / 9.0, 4.0 / 9.0, 1.0 / 3.0;
    return q;
}

const std::vector<double>& fifty_user_thetas() {
    static const std::vector<double> thetas{
        1.019, 1.01, 1.021, 1.025, 1.002, 1.02,  1.2,   1.3,   1.4,   1.5,
        0.9,   1,    1.1,   1.15,  1.32,  1.22,  1.23,  1.33,  1.34,  1.35,
        0.9,   1.1,  1.01,  1.05,  1.12,  1.02,  1.12,  1.03,  1.04,  1.05,
        0.9,   1,    1.01,  1.05,  1.042, 1.032, 1.012, 1.023, 1.014, 1.025,
        1.019, 1,    1.01,  1.05,  1.02,  1.02,  1.12,  1.13,  1.14,  1.01};
    return thetas;
}

const std::vector<int>& published_demand_t1_e70() {
    static const std::vector<int> row{
        2, 1, 2, 3, 0, 2, 4, 4, 4, 4, 0, 0, 4, 4, 4, 4, 4, 4, 4, 4, 0, 4, 1, 4, 4,
        2, 4, 4, 4, 4, 0, 0, 1, 4, 4, 4, 1, 3, 1, 3, 2, 0, 1, 4, 3, 2, 4, 4, 4, 0};
    return row;
}

const std::vector<int>& published_demand_t3_e90() {
    static const std::vector<int> row{
        4, 4, 4, 4, 3, 4, 4, 4, 4, 4, 0, 2, 4, 4, 4, 4, 4, 4, 4, 4, 0, 4, 4, 4, 4,
        4, 4, 4, 4, 4, 0, 2, 4, 4, 4, 4, 4, 4, 4, 4, 4, 3, 4, 4, 4, 4, 4, 4, 4, 4};
    return row;
}

GameG1 example1() {
    GameG1 game;
    game.chain.predicted = {50, 110, 90, 130, 80, 70, 100};
    game.chain.error_support = {20, 0, -20};
    game.chain.transition = {solar_transition()};
    game.chain.initial_dist = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
    for (double theta : fifty_user_thetas()) {
        game.users.push_back(UserSpec::linear(theta, 4, 4, 0));
    }
    game.pricing = {19.0, 20.0, 1.0, 1.0};
    game.initial_storage.assign(game.users.size(), 0);
    return game;
}

GameG1 example2() {
    GameG1 game;
    game.chain.predicted = {5, 11, 8};
    game.chain.error_support = {2, 0, -2};
    game.chain.transition = {solar_transition()};
    game.chain.initial_dist = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
    for (double theta : {0.9, 1.0, 1.1}) {
        game.users.push_back(UserSpec::linear(theta, 4, 6, 2));
    }
    game.pricing = {1.5, 1.5, 1.0, 1.0};
    game.initial_storage.assign(game.users.size(), 0);
    return game;
}

PricingGrid example3_grid() {
    PricingGrid grid;
    grid.alpha_values = {19, 20, 21};
    grid.beta_values = {19, 20, 21};
    grid.gamma1 = 1.0;
    grid.gamma2 = 1.0;
    grid.leader = {1.0, 0.1, 70.0};
    return grid;
}

GameG1 example4() {
    GameG1 game;
    game.chain.predicted = {10, 2};
    game.chain.error_support = {-1, 0, 1};
    Eigen::MatrixXd q(3, 3);
    q.rowwise() = Eigen::RowVector3d(0.3, 0.4, 0.3);
    game.chain.transition = {q};
    game.chain.initial_dist = Eigen::Vector3d(0.0, 1.0, 0.0);
    const std::vector<double> utility{0.0, 0.9, 1.8, 1.8, 1.8};
    for (int i = 0; i < 2; ++i) {
        game.users.push_back(UserSpec::tabulated(utility, 3, 1));
    }
    game.pricing = {1.0, 1.5, 1.0, 1.0};
    game.initial_storage = {0, 0};
    return game;
}

UserPolicy example4_storage_strategy(const GameG1& game, int user) {
    return stage_pure_policy(game.users[user], game.chain, {{3, 2}, {1, 2}});
}

} // namespace gridstack::fixtures
