#ifndef GRIDSTACK_MPG_SOLVER_HPP
#define GRIDSTACK_MPG_SOLVER_HPP

#include <vector>

#include <Eigen/Dense>

#include "gridstack/core_model.hpp"
#include "gridstack/policy.hpp"

namespace gridstack {

/// Relative tolerance under which two stage payoffs count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Unconstrained maximiser of the concave stage payoff
/// f(d) = (theta - base - slope * others) d - slope d^2.
double continuous_best_response(int i, double e, int others, const GameG2& game);

/// Stage payoff f(d) of user i given the others' demand sum.
double stage_gain(int i, double e, int others, int d, const GameG2& game);

/// Integer argmax of the stage payoff over 0..d_max; smaller demand on ties.
int accelerated_best_response(int i, double e, int others, const GameG2& game);

/// Cell-wise best response against the other users' demands in `profile`
/// (profile[i] is ignored).
PurePublicPolicy best_response_policy(int i, const PureProfile& profile, const GameG2& game);

/// Like best_response_policy, but a cell keeps its current demand unless the
/// best response beats it by more than the tie tolerance.
PurePublicPolicy improving_response(int i, const PureProfile& profile, const GameG2& game);

/// V_i(response, others) - V_i(current, others) from one initial error index.
double improvement_delta(int i, const PureProfile& current, const PurePublicPolicy& response,
                         const GameG2& game, int initial_error);

struct TraceRow {
    int iteration = 0;
    /// Updated user, or -1 on the final sweep that found no improvement.
    int user = -1;
    double max_improvement = 0.0;
    /// Initial-distribution weighted potential after the iteration.
    double potential = 0.0;
};

struct EquilibriumResult {
    PureProfile policies;
    /// n x m values at stage 0.
    Eigen::MatrixXd per_state_values;
    Eigen::VectorXd potential_per_state;
    std::vector<TraceRow> trace;
    bool converged = false;
    int iterations = 0;
};

/// Finite-improvement best-response dynamics on the reduced game. Each
/// iteration computes every user's improving response and its improvement
/// (maximum over initial error indices with positive probability), then
/// updates only the user with the largest improvement (lowest index on ties).
/// Stops when no user improves or after k_max iterations.
EquilibriumResult fip_solve(const GameG2& game, PureProfile initial, int k_max);

/// Weighted potential sum_j initial_dist[j] * Phi(j).
double weighted_potential(const PureProfile& profile, const GameG2& game);

/// Private Markovian profile consuming demand plus stored energy.
PMSProfile lift_to_pme(const PureProfile& equilibrium, const GameG1& game);

} // namespace gridstack

#endif
