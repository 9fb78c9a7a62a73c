#ifndef GRIDSTACK_MDP_HPP
#define GRIDSTACK_MDP_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "gridstack/core_model.hpp"
#include "gridstack/policy.hpp"

namespace gridstack {

struct Successor {
    int next = 0;
    double probability = 0.0;
};

struct MDPAction {
    double reward = 0.0;
    /// Distribution over states of the next stage; empty at the last stage.
    std::vector<Successor> successors;
};

/// Finite-horizon MDP: stages[t][s] lists the feasible actions of state s at
/// stage t. The last stage has no successors.
struct FiniteMDP {
    std::vector<std::vector<std::vector<MDPAction>>> stages;

    int horizon() const { return static_cast<int>(stages.size()); }
    int num_states(int t) const { return static_cast<int>(stages[t].size()); }
};

using DeterministicPolicy = std::vector<std::vector<int>>;

struct MDPSolution {
    std::vector<Eigen::VectorXd> value;
    DeterministicPolicy policy;
};

/// Throws std::invalid_argument on an empty action list, a successor outside
/// the next stage, or a distribution that does not sum to 1 within 1e-9.
void check_mdp(const FiniteMDP& mdp);

/// Optimal values and an argmax policy (lowest action index on ties). The last
/// stage takes the best immediate reward.
MDPSolution backward_induction(const FiniteMDP& mdp);

std::vector<Eigen::VectorXd> evaluate_policy(const FiniteMDP& mdp, const DeterministicPolicy& policy);

/// Index of the private state (error index j, storage b).
inline int private_state(int j, int b, int b_max) { return j * (b_max + 1) + b; }

/// Expected price for own demand d when the others' aggregate demand follows
/// `belief` over 0..belief.size()-1.
double expected_price(int d, double e, const Eigen::VectorXd& belief, const PricingParams& pricing,
                      int n);

/// Best-response model of user i against its aggregate-demand estimate. States
/// are private states; actions follow feasible_actions order.
FiniteMDP build_br_mdp(int i, const UserEstimate& estimate, const GameG1& game);

/// Pure strategy reading the argmax action of an MDP over private states.
UserPolicy policy_from_solution(int i, const MDPSolution& solution, const GameG1& game);

class StateSpaceTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultStateCap = 10'000'000;

/// Mixed-radix encoding of (error index, b_1, ..., b_n).
class JointStateSpace {
public:
    JointStateSpace(const GameG1& game, std::size_t cap = kDefaultStateCap);

    int num_errors() const { return num_errors_; }
    int num_storage() const { return num_storage_; }
    int size() const { return num_errors_ * num_storage_; }
    int stride(int user) const { return strides_[user]; }

    int storage_index(const std::vector<int>& storage) const;
    std::vector<int> decode_storage(int index) const;
    int index(int j, int storage_index) const { return j * num_storage_ + storage_index; }

private:
    int num_errors_ = 0;
    int num_storage_ = 1;
    std::vector<int> radices_;
    std::vector<int> strides_;
};

struct FullInfoBestResponse {
    /// Best-response value from each initial error index at the initial storage.
    Eigen::VectorXd value;
    /// Per stage, values over joint states (j * num_storage + storage index).
    std::vector<Eigen::VectorXd> stage_values;
    /// Per stage, chosen action index (into the user's feasible actions at its
    /// own storage) for every joint state.
    std::vector<std::vector<int>> policy;
};

/// Exact best response of user i over the joint state, with the other users'
/// mixed strategies folded into rewards and transitions.
FullInfoBestResponse full_info_best_response(int i, const PMSProfile& profile, const GameG1& game,
                                             std::size_t cap = kDefaultStateCap);

/// Exact values of every user under the profile from each initial error index:
/// n x m.
Eigen::MatrixXd evaluate_profile(const PMSProfile& profile, const GameG1& game,
                                 std::size_t cap = kDefaultStateCap);

/// Initial storage vector of the game (zeros when unspecified).
std::vector<int> initial_storage_of(const GameG1& game);

} // namespace gridstack

#endif
