#ifndef GRIDSTACK_PAYOFF_HPP
#define GRIDSTACK_PAYOFF_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "gridstack/core_model.hpp"
#include "gridstack/policy.hpp"

namespace gridstack {

struct JointState {
    int stage = 0;
    int error_index = 0;
    std::vector<int> storage;

    friend bool operator==(const JointState&, const JointState&) = default;
};

struct WeightedState {
    JointState state;
    double probability = 0.0;
};

class InfeasibleAction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double price(int d_total, double e, const PricingParams& pricing, int n);

/// Marginal price slope alpha / (n e + gamma1) and base price beta / (e + gamma2).
inline double price_slope(double e, const PricingParams& p, int n) {
    return p.alpha / (n * e + p.gamma1);
}
inline double base_price(double e, const PricingParams& p) { return p.beta / (e + p.gamma2); }

double stage_reward_r(int i, const JointState& state, const ActionProfile& profile,
                      const GameG1& game);

double stage_reward_g(int i, double e, const Eigen::VectorXi& demands, const GameG2& game);

double stage_potential(double e, const Eigen::VectorXi& demands, const GameG2& game);

std::vector<WeightedState> step_state(const JointState& state, const ActionProfile& profile,
                                      const GameG1& game);

/// Backward accumulation over the error chain. `stage_columns(t)` returns an
/// m x k matrix of stage rewards over error indices; the result holds the
/// expected sums from stage 0, one row per initial error index.
template <typename StageColumns>
Eigen::MatrixXd accumulate_backward(const ForecastChain& chain, StageColumns&& stage_columns) {
    Eigen::MatrixXd w = stage_columns(chain.horizon() - 1);
    for (int t = chain.horizon() - 2; t >= 0; --t) {
        w = stage_columns(t) + chain.step(t) * w;
    }
    return w;
}

/// Values of every user from every initial error index: n x m.
Eigen::MatrixXd value_g2_all(const PureProfile& profile, const GameG2& game);
Eigen::VectorXd value_g2(const PureProfile& profile, const GameG2& game, int initial_error);

/// Value of user i playing `own` while the others' demands sum to `others`
/// per cell; one entry per initial error index.
Eigen::VectorXd own_value_g2(int i, const PurePublicPolicy& own, const Eigen::MatrixXi& others,
                             const GameG2& game);

Eigen::VectorXd potential_value_all(const PureProfile& profile, const GameG2& game);
double potential_value_g2(const PureProfile& profile, const GameG2& game, int initial_error);

double leader_stage_payoff(int d_total, double e, const PricingParams& pricing,
                           const LeaderParams& leader, int n);

/// Expected leader payoff from every initial error index.
Eigen::VectorXd leader_payoff_all(const PureProfile& demand, const GameG1& game,
                                  const LeaderParams& leader);

/// Expected leader payoff under the chain's initial distribution.
double leader_payoff(const PureProfile& demand, const GameG1& game, const LeaderParams& leader);

} // namespace gridstack

#endif
