#ifndef GRIDSTACK_FIXTURES_HPP
#define GRIDSTACK_FIXTURES_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "gridstack/analysis.hpp"
#include "gridstack/core_model.hpp"
#include "gridstack/pricing.hpp"

namespace gridstack::fixtures {

/// Three-level forecast-error transition estimated from the solar panel.
Eigen::MatrixXd solar_transition();

/// Consumption benefit coefficients of the 50-user experiment.
const std::vector<double>& fifty_user_thetas();

/// Published equilibrium demand rows of the 50-user experiment at
/// (stage 1, e = 70) and (stage 3, e = 90); stages here are 1-based.
const std::vector<int>& published_demand_t1_e70();
const std::vector<int>& published_demand_t3_e90();

/// 50 users, 7 stages, alpha = 19, beta = 20, gamma = 1, uniform initial error.
GameG1 example1();

/// 3 users, 3 stages, theta = (0.9, 1, 1.1), alpha = beta = 1.5, gamma = 1.
GameG1 example2();

/// Pricing grid over alpha, beta in {19, 20, 21} with C = 1, k = 0.1, r0 = 70.
PricingGrid example3_grid();

/// 2 users, 2 stages, piecewise utility, e1 = 10 and e2 in {1, 2, 3}.
GameG1 example4();

/// Buy three and consume two at stage 1, buy one and consume two at stage 2.
UserPolicy example4_storage_strategy(const GameG1& game, int user);

/// Demand levels of the non-storage family in the two-stage example.
inline const std::vector<int> kExample4Levels{1, 2, 3};

} // namespace gridstack::fixtures

#endif
