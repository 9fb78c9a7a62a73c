#ifndef GRIDSTACK_POLICY_HPP
#define GRIDSTACK_POLICY_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gridstack/core_model.hpp"

namespace gridstack {

struct Action {
    int demand = 0;
    int consumption = 0;

    friend bool operator==(const Action&, const Action&) = default;
};

using ActionProfile = std::vector<Action>;

/// Actions allowed at storage level b, ordered by demand then consumption.
std::vector<Action> feasible_actions(const UserSpec& user, int storage);

bool is_feasible(const UserSpec& user, int storage, const Action& action);

/// Demand table of one user in the reduced game: rows are stages, columns
/// error indices.
using PurePublicPolicy = Eigen::MatrixXi;
using PureProfile = std::vector<PurePublicPolicy>;

PureProfile zero_profile(const GameG2& game);
PureProfile random_profile(const GameG2& game, std::uint64_t seed);

/// Sum of demands per (stage, error index).
Eigen::MatrixXi aggregate_demand(const PureProfile& profile);

/// Private Markovian strategy of one user: a distribution over the feasible
/// actions at every (stage, error index, storage).
class UserPolicy {
public:
    UserPolicy() = default;
    UserPolicy(const UserSpec& user, int horizon, int num_errors);

    static UserPolicy uniform(const UserSpec& user, const ForecastChain& chain);
    static UserPolicy pure(const UserSpec& user, const ForecastChain& chain,
                           const std::function<Action(int, int, int)>& rule);

    int horizon() const { return horizon_; }
    int num_errors() const { return num_errors_; }
    int b_max() const { return b_max_; }

    const std::vector<Action>& actions(int storage) const { return actions_[storage]; }
    int action_index(int storage, const Action& action) const;

    Eigen::VectorXd& at(int t, int j, int b) { return probs_[cell(t, j, b)]; }
    const Eigen::VectorXd& at(int t, int j, int b) const { return probs_[cell(t, j, b)]; }

    /// Point mass on `action` at the given private state.
    void set_pure(int t, int j, int b, const Action& action);

    /// Action with the largest probability (lowest index on ties).
    Action mode(int t, int j, int b) const;

    int num_cells() const { return static_cast<int>(probs_.size()); }
    const std::vector<Eigen::VectorXd>& table() const { return probs_; }
    std::vector<Eigen::VectorXd>& table() { return probs_; }

private:
    int cell(int t, int j, int b) const { return (t * num_errors_ + j) * (b_max_ + 1) + b; }

    int horizon_ = 0;
    int num_errors_ = 0;
    int b_max_ = 0;
    std::vector<std::vector<Action>> actions_;
    std::vector<Eigen::VectorXd> probs_;
};

using PMSProfile = std::vector<UserPolicy>;

/// One user's belief about the aggregate demand of everyone else, per
/// (stage, error index), over 0..sum of the other users' demand caps.
class UserEstimate {
public:
    UserEstimate() = default;
    UserEstimate(int horizon, int num_errors, int max_other);

    static UserEstimate uniform(int horizon, int num_errors, int max_other);

    int horizon() const { return horizon_; }
    int num_errors() const { return num_errors_; }
    int max_other() const { return max_other_; }

    Eigen::VectorXd& at(int t, int j) { return cells_[t * num_errors_ + j]; }
    const Eigen::VectorXd& at(int t, int j) const { return cells_[t * num_errors_ + j]; }

private:
    int horizon_ = 0;
    int num_errors_ = 0;
    int max_other_ = 0;
    std::vector<Eigen::VectorXd> cells_;
};

using AggregateEstimate = std::vector<UserEstimate>;

AggregateEstimate uniform_estimate(const GameG1& game);

/// Sum of demand caps over every user except `i`.
int others_demand_cap(const GameG1& game, int i);

} // namespace gridstack

#endif
