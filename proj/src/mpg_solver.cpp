#include "gridstack/mpg_solver.hpp"

#include <algorithm>
#include <cmath>

#include "gridstack/parallel.hpp"
#include "gridstack/payoff.hpp"

namespace gridstack {

namespace {

bool clearly_greater(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return a > b + kTieTolerance * scale;
}

Eigen::MatrixXi others_demand(int i, const PureProfile& profile) {
    Eigen::MatrixXi total = Eigen::MatrixXi::Zero(profile.front().rows(), profile.front().cols());
    for (int k = 0; k < static_cast<int>(profile.size()); ++k) {
        if (k != i) total += profile[k];
    }
    return total;
}

} // namespace

double continuous_best_response(int i, double e, int others, const GameG2& game) {
    const int n = game.num_users();
    const double slope = price_slope(e, game.pricing, n);
    const double margin = game.theta[i] - base_price(e, game.pricing) - slope * others;
    return margin / (2.0 * slope);
}

double stage_gain(int i, double e, int others, int d, const GameG2& game) {
    const int n = game.num_users();
    const double slope = price_slope(e, game.pricing, n);
    const double margin = game.theta[i] - base_price(e, game.pricing) - slope * others;
    return margin * d - slope * d * d;
}

int accelerated_best_response(int i, double e, int others, const GameG2& game) {
    const int cap = game.d_max[i];
    const double clipped = std::clamp(continuous_best_response(i, e, others, game), 0.0,
                                      static_cast<double>(cap));
    const int lo = static_cast<int>(std::floor(clipped));
    const int hi = std::min(lo + 1, cap);
    if (hi == lo) return lo;
    return clearly_greater(stage_gain(i, e, others, hi, game), stage_gain(i, e, others, lo, game))
               ? hi
               : lo;
}

PurePublicPolicy best_response_policy(int i, const PureProfile& profile, const GameG2& game) {
    const Eigen::MatrixXi others = others_demand(i, profile);
    PurePublicPolicy out(others.rows(), others.cols());
    for (int t = 0; t < others.rows(); ++t) {
        for (int j = 0; j < others.cols(); ++j) {
            out(t, j) = accelerated_best_response(i, game.chain.public_state(t, j), others(t, j), game);
        }
    }
    return out;
}

PurePublicPolicy improving_response(int i, const PureProfile& profile, const GameG2& game) {
    const Eigen::MatrixXi others = others_demand(i, profile);
    PurePublicPolicy out = profile[i];
    for (int t = 0; t < others.rows(); ++t) {
        for (int j = 0; j < others.cols(); ++j) {
            const double e = game.chain.public_state(t, j);
            const int best = accelerated_best_response(i, e, others(t, j), game);
            const int current = profile[i](t, j);
            if (best != current &&
                clearly_greater(stage_gain(i, e, others(t, j), best, game),
                                stage_gain(i, e, others(t, j), current, game))) {
                out(t, j) = best;
            }
        }
    }
    return out;
}

double improvement_delta(int i, const PureProfile& current, const PurePublicPolicy& response,
                         const GameG2& game, int initial_error) {
    const Eigen::MatrixXi others = others_demand(i, current);
    const Eigen::VectorXd after = own_value_g2(i, response, others, game);
    const Eigen::VectorXd before = own_value_g2(i, current[i], others, game);
    return after[initial_error] - before[initial_error];
}

double weighted_potential(const PureProfile& profile, const GameG2& game) {
    return game.chain.initial_dist.dot(potential_value_all(profile, game));
}

EquilibriumResult fip_solve(const GameG2& game, PureProfile initial, int k_max) {
    const int n = game.num_users();
    const auto starts = initial_error_indices(game.chain);
    EquilibriumResult result;
    result.policies = std::move(initial);

    std::vector<PurePublicPolicy> responses(n);
    std::vector<double> deltas(n, 0.0);
    for (int k = 1; k <= k_max; ++k) {
        parallel_for(0, n, [&](int i) {
            responses[i] = improving_response(i, result.policies, game);
            if (responses[i] == result.policies[i]) {
                deltas[i] = 0.0;
                return;
            }
            const Eigen::MatrixXi others = others_demand(i, result.policies);
            const Eigen::VectorXd gain = own_value_g2(i, responses[i], others, game) -
                                         own_value_g2(i, result.policies[i], others, game);
            double best = 0.0;
            for (int j : starts) best = std::max(best, gain[j]);
            deltas[i] = best;
        });
        int chosen = 0;
        for (int i = 1; i < n; ++i) {
            if (deltas[i] > deltas[chosen]) chosen = i;
        }
        result.iterations = k;
        if (deltas[chosen] <= 0.0) {
            result.converged = true;
            result.trace.push_back({k, -1, 0.0, weighted_potential(result.policies, game)});
            break;
        }
        result.policies[chosen] = responses[chosen];
        result.trace.push_back({k, chosen, deltas[chosen], weighted_potential(result.policies, game)});
    }
    result.per_state_values = value_g2_all(result.policies, game);
    result.potential_per_state = potential_value_all(result.policies, game);
    return result;
}

PMSProfile lift_to_pme(const PureProfile& equilibrium, const GameG1& game) {
    PMSProfile out;
    out.reserve(game.users.size());
    for (int i = 0; i < game.num_users(); ++i) {
        const auto& user = game.users[i];
        const auto& demand = equilibrium[i];
        out.push_back(UserPolicy::pure(user, game.chain, [&](int t, int j, int b) {
            const int d = demand(t, j);
            return Action{d, std::min(d + b, user.c_max)};
        }));
    }
    return out;
}

} // namespace gridstack
