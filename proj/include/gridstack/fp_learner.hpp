#ifndef GRIDSTACK_FP_LEARNER_HPP
#define GRIDSTACK_FP_LEARNER_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gridstack/core_model.hpp"
#include "gridstack/mdp.hpp"
#include "gridstack/policy.hpp"

namespace gridstack {

struct EpisodeStep {
    int stage = 0;
    int error_index = 0;
    /// Storage levels before acting.
    std::vector<int> storage;
    ActionProfile actions;
    /// Aggregate demand of everyone but user i.
    std::vector<int> others_demand;
    Eigen::VectorXd rewards;
};

using Trajectory = std::vector<EpisodeStep>;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double unit_draw(std::mt19937_64& rng);

/// Index sampled from a probability vector by inverse CDF.
int sample_index(const Eigen::VectorXd& probs, std::mt19937_64& rng);

Trajectory simulate_episode(const PMSProfile& profile, const GameG1& game, std::mt19937_64& rng);
Trajectory simulate_episode(const PMSProfile& profile, const GameG1& game, std::uint64_t seed);

/// current <- (1 - step) current + step response at every private state.
/// Returns the largest L1 change over private states.
double update_policy(UserPolicy& current, const UserPolicy& response, double step);

/// Moves the estimate of `user` toward the observed aggregate demand at the
/// cells visited by the trajectory; other cells are untouched.
void update_estimate(UserEstimate& current, int user, const Trajectory& trajectory, double step);

struct FPOptions {
    int iterations = 1000;
    std::uint64_t seed = 0;
    int eval_every = 50;
    std::size_t cap = kDefaultStateCap;
    /// Step applied after episode k (1-based).
    std::function<double(int)> schedule = [](int k) { return 1.0 / (k + 1); };
};

struct FPTraceRow {
    int iteration = 0;
    double nashconv = 0.0;
    std::vector<double> policy_change;
};

struct FPResult {
    PMSProfile profile;
    AggregateEstimate estimate;
    std::vector<FPTraceRow> trace;
};

/// Fictitious play over best-response MDPs. The trace starts with the initial
/// profile's NashConv at iteration 0.
FPResult fp_mdp_solve(const GameG1& game, const FPOptions& options);

} // namespace gridstack

#endif
