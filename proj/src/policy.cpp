#include "gridstack/policy.hpp"

#include <random>
#include <stdexcept>

namespace gridstack {

std::vector<Action> feasible_actions(const UserSpec& user, int storage) {
    std::vector<Action> out;
    for (int d = 0; d <= user.d_max; ++d) {
        const int lo = std::max(0, storage + d - user.b_max);
        const int hi = std::min(user.c_max, storage + d);
        for (int c = lo; c <= hi; ++c) {
            out.push_back({d, c});
        }
    }
    return out;
}

bool is_feasible(const UserSpec& user, int storage, const Action& a) {
    return a.demand >= 0 && a.demand <= user.d_max && a.consumption >= 0 &&
           a.consumption <= user.c_max && a.consumption >= storage + a.demand - user.b_max &&
           a.consumption <= storage + a.demand;
}

PureProfile zero_profile(const GameG2& game) {
    const auto T = game.chain.horizon();
    const auto m = game.chain.num_errors();
    return PureProfile(game.num_users(), PurePublicPolicy::Zero(T, m));
}

PureProfile random_profile(const GameG2& game, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto profile = zero_profile(game);
    for (int i = 0; i < game.num_users(); ++i) {
        std::uniform_int_distribution<int> pick(0, game.d_max[i]);
        for (int t = 0; t < profile[i].rows(); ++t) {
            for (int j = 0; j < profile[i].cols(); ++j) {
                profile[i](t, j) = pick(rng);
            }
        }
    }
    return profile;
}

Eigen::MatrixXi aggregate_demand(const PureProfile& profile) {
    Eigen::MatrixXi total = Eigen::MatrixXi::Zero(profile.front().rows(), profile.front().cols());
    for (const auto& p : profile) total += p;
    return total;
}

UserPolicy::UserPolicy(const UserSpec& user, int horizon, int num_errors)
    : horizon_(horizon), num_errors_(num_errors), b_max_(user.b_max) {
    actions_.reserve(b_max_ + 1);
    for (int b = 0; b <= b_max_; ++b) {
        actions_.push_back(feasible_actions(user, b));
    }
    probs_.resize(static_cast<std::size_t>(horizon_) * num_errors_ * (b_max_ + 1));
    for (int t = 0; t < horizon_; ++t) {
        for (int j = 0; j < num_errors_; ++j) {
            for (int b = 0; b <= b_max_; ++b) {
                at(t, j, b) = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(actions_[b].size()));
            }
        }
    }
}

UserPolicy UserPolicy::uniform(const UserSpec& user, const ForecastChain& chain) {
    UserPolicy policy(user, chain.horizon(), chain.num_errors());
    for (int t = 0; t < policy.horizon_; ++t) {
        for (int j = 0; j < policy.num_errors_; ++j) {
            for (int b = 0; b <= policy.b_max_; ++b) {
                auto& p = policy.at(t, j, b);
                p.setConstant(1.0 / static_cast<double>(p.size()));
            }
        }
    }
    return policy;
}

UserPolicy UserPolicy::pure(const UserSpec& user, const ForecastChain& chain,
                            const std::function<Action(int, int, int)>& rule) {
    UserPolicy policy(user, chain.horizon(), chain.num_errors());
    for (int t = 0; t < policy.horizon_; ++t) {
        for (int j = 0; j < policy.num_errors_; ++j) {
            for (int b = 0; b <= policy.b_max_; ++b) {
                policy.set_pure(t, j, b, rule(t, j, b));
            }
        }
    }
    return policy;
}

int UserPolicy::action_index(int storage, const Action& action) const {
    const auto& list = actions_[storage];
    for (std::size_t k = 0; k < list.size(); ++k) {
        if (list[k] == action) return static_cast<int>(k);
    }
    return -1;
}

void UserPolicy::set_pure(int t, int j, int b, const Action& action) {
    const int k = action_index(b, action);
    if (k < 0) {
        throw std::invalid_argument("action (" + std::to_string(action.demand) + "," +
                                    std::to_string(action.consumption) +
                                    ") is infeasible at storage " + std::to_string(b));
    }
    auto& p = at(t, j, b);
    p.setZero();
    p[k] = 1.0;
}

Action UserPolicy::mode(int t, int j, int b) const {
    Eigen::Index k = 0;
    at(t, j, b).maxCoeff(&k);
    return actions_[b][k];
}

UserEstimate::UserEstimate(int horizon, int num_errors, int max_other)
    : horizon_(horizon), num_errors_(num_errors), max_other_(max_other),
      cells_(static_cast<std::size_t>(horizon) * num_errors, Eigen::VectorXd::Zero(max_other + 1)) {}

UserEstimate UserEstimate::uniform(int horizon, int num_errors, int max_other) {
    UserEstimate est(horizon, num_errors, max_other);
    for (auto& cell : est.cells_) cell.setConstant(1.0 / (max_other + 1));
    return est;
}

int others_demand_cap(const GameG1& game, int i) {
    int total = 0;
    for (int k = 0; k < game.num_users(); ++k) {
        if (k != i) total += game.users[k].d_max;
    }
    return total;
}

AggregateEstimate uniform_estimate(const GameG1& game) {
    AggregateEstimate out;
    out.reserve(game.users.size());
    for (int i = 0; i < game.num_users(); ++i) {
        out.push_back(UserEstimate::uniform(game.chain.horizon(), game.chain.num_errors(),
                                            others_demand_cap(game, i)));
    }
    return out;
}

} // namespace gridstack
