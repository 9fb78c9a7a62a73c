#include "gridstack/payoff.hpp"

#include <string>

namespace gridstack {

namespace {

void require_feasible(const JointState& state, const ActionProfile& profile, const GameG1& game) {
    if (static_cast<int>(profile.size()) != game.num_users() ||
        static_cast<int>(state.storage.size()) != game.num_users()) {
        throw InfeasibleAction("action profile or storage size differs from user count");
    }
    for (int k = 0; k < game.num_users(); ++k) {
        if (!is_feasible(game.users[k], state.storage[k], profile[k])) {
            throw InfeasibleAction("user " + std::to_string(k) + " action (" +
                                   std::to_string(profile[k].demand) + "," +
                                   std::to_string(profile[k].consumption) +
                                   ") is infeasible at storage " + std::to_string(state.storage[k]));
        }
    }
}

/// Stage reward columns g_i over error indices for stage t: m x 1.
Eigen::VectorXd own_stage_column(int i, int t, const PurePublicPolicy& own,
                                 const Eigen::MatrixXi& others, const GameG2& game) {
    const int m = game.chain.num_errors();
    const int n = game.num_users();
    Eigen::VectorXd col(m);
    for (int j = 0; j < m; ++j) {
        const double e = game.chain.public_state(t, j);
        const int d = own(t, j);
        const double p = price(d + others(t, j), e, game.pricing, n);
        col[j] = game.theta[i] * d - p * d;
    }
    return col;
}

} // namespace

double price(int d_total, double e, const PricingParams& pricing, int n) {
    return price_slope(e, pricing, n) * d_total + base_price(e, pricing);
}

double stage_reward_r(int i, const JointState& state, const ActionProfile& profile,
                      const GameG1& game) {
    require_feasible(state, profile, game);
    int total = 0;
    for (const auto& a : profile) total += a.demand;
    const double e = game.chain.public_state(state.stage, state.error_index);
    const auto& a = profile[i];
    return game.users[i].utility_of(a.consumption) -
           price(total, e, game.pricing, game.num_users()) * a.demand;
}

double stage_reward_g(int i, double e, const Eigen::VectorXi& demands, const GameG2& game) {
    const double p = price(demands.sum(), e, game.pricing, game.num_users());
    return game.theta[i] * demands[i] - p * demands[i];
}

double stage_potential(double e, const Eigen::VectorXi& demands, const GameG2& game) {
    const int n = game.num_users();
    const double slope = price_slope(e, game.pricing, n);
    const double base = base_price(e, game.pricing);
    double linear = 0.0;
    for (int i = 0; i < n; ++i) {
        linear += (game.theta[i] - base) * demands[i];
    }
    const long long total = demands.cast<long long>().sum();
    const long long squares = demands.cast<long long>().squaredNorm();
    const long long cross = (total * total - squares) / 2;
    return linear - slope * static_cast<double>(squares) - slope * static_cast<double>(cross);
}

std::vector<WeightedState> step_state(const JointState& state, const ActionProfile& profile,
                                      const GameG1& game) {
    require_feasible(state, profile, game);
    if (state.stage + 1 >= game.chain.horizon()) {
        return {};
    }
    JointState next;
    next.stage = state.stage + 1;
    next.storage.resize(profile.size());
    for (std::size_t k = 0; k < profile.size(); ++k) {
        next.storage[k] = state.storage[k] + profile[k].demand - profile[k].consumption;
    }
    std::vector<WeightedState> out;
    const auto row = game.chain.step(state.stage).row(state.error_index);
    for (int j = 0; j < row.size(); ++j) {
        if (row[j] > 0.0) {
            next.error_index = j;
            out.push_back({next, row[j]});
        }
    }
    return out;
}

Eigen::MatrixXd value_g2_all(const PureProfile& profile, const GameG2& game) {
    const int n = game.num_users();
    const int m = game.chain.num_errors();
    const Eigen::MatrixXi total = aggregate_demand(profile);
    const Eigen::MatrixXd w = accumulate_backward(game.chain, [&](int t) {
        Eigen::MatrixXd cols(m, n);
        for (int j = 0; j < m; ++j) {
            const double e = game.chain.public_state(t, j);
            const double p = price(total(t, j), e, game.pricing, n);
            for (int i = 0; i < n; ++i) {
                const int d = profile[i](t, j);
                cols(j, i) = game.theta[i] * d - p * d;
            }
        }
        return cols;
    });
    return w.transpose();
}

Eigen::VectorXd value_g2(const PureProfile& profile, const GameG2& game, int initial_error) {
    return value_g2_all(profile, game).col(initial_error);
}

Eigen::VectorXd own_value_g2(int i, const PurePublicPolicy& own, const Eigen::MatrixXi& others,
                             const GameG2& game) {
    return accumulate_backward(game.chain, [&](int t) -> Eigen::MatrixXd {
        return own_stage_column(i, t, own, others, game);
    });
}

Eigen::VectorXd potential_value_all(const PureProfile& profile, const GameG2& game) {
    const int n = game.num_users();
    const int m = game.chain.num_errors();
    return accumulate_backward(game.chain, [&](int t) -> Eigen::MatrixXd {
        Eigen::VectorXd col(m);
        Eigen::VectorXi demands(n);
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < n; ++i) demands[i] = profile[i](t, j);
            col[j] = stage_potential(game.chain.public_state(t, j), demands, game);
        }
        return col;
    });
}

double potential_value_g2(const PureProfile& profile, const GameG2& game, int initial_error) {
    return potential_value_all(profile, game)[initial_error];
}

double leader_stage_payoff(int d_total, double e, const PricingParams& pricing,
                           const LeaderParams& leader, int n) {
    const double gap = d_total - e;
    const double miss = gap - leader.target;
    return price(d_total, e, pricing, n) * d_total - leader.unit_cost * gap -
           0.5 * leader.penalty_weight * miss * miss;
}

Eigen::VectorXd leader_payoff_all(const PureProfile& demand, const GameG1& game,
                                  const LeaderParams& leader) {
    const int n = game.num_users();
    const int m = game.chain.num_errors();
    const Eigen::MatrixXi total = aggregate_demand(demand);
    return accumulate_backward(game.chain, [&](int t) -> Eigen::MatrixXd {
        Eigen::VectorXd col(m);
        for (int j = 0; j < m; ++j) {
            col[j] = leader_stage_payoff(total(t, j), game.chain.public_state(t, j), game.pricing,
                                         leader, n);
        }
        return col;
    });
}

double leader_payoff(const PureProfile& demand, const GameG1& game, const LeaderParams& leader) {
    return game.chain.initial_dist.dot(leader_payoff_all(demand, game, leader));
}

} // namespace gridstack
