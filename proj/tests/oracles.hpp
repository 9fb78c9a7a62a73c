// Brute-force reference implementations used only by the tests. They share
// no evaluation code with the library beyond the data types.
#ifndef GRIDSTACK_TESTS_ORACLES_HPP
#define GRIDSTACK_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "gridstack/core_model.hpp"
#include "gridstack/mdp.hpp"
#include "gridstack/policy.hpp"

namespace oracle {

using namespace gridstack;

inline double direct_price(double total, double e, const PricingParams& p, int n) {
    return p.alpha * total / (n * e + p.gamma1) + p.beta / (e + p.gamma2);
}

/// Values of every user by summing over every error path: n x m.
inline Eigen::MatrixXd path_sum_values(const PureProfile& profile, const GameG2& game) {
    const auto& chain = game.chain;
    const int n = game.num_users();
    const int m = chain.num_errors();
    const int T = chain.horizon();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, m);
    std::vector<int> path(T);
    std::function<void(int, double)> walk = [&](int t, double prob) {
        if (t == T) {
            for (int i = 0; i < n; ++i) {
                double total = 0.0;
                for (int s = 0; s < T; ++s) {
                    const double e = chain.predicted[s] + chain.error_support[path[s]];
                    int demand = 0;
                    for (int k = 0; k < n; ++k) demand += profile[k](s, path[s]);
                    const int d = profile[i](s, path[s]);
                    total += game.theta[i] * d - direct_price(demand, e, game.pricing, n) * d;
                }
                out(i, path[0]) += prob * total;
            }
            return;
        }
        for (int j = 0; j < m; ++j) {
            const double p = t == 0 ? (j == path[0] ? 1.0 : 0.0) : chain.step(t - 1)(path[t - 1], j);
            if (p == 0.0) continue;
            path[t] = j;
            walk(t + 1, prob * p);
        }
    };
    for (int j0 = 0; j0 < m; ++j0) {
        path[0] = j0;
        walk(1, 1.0);
    }
    return out;
}

/// Calls visit(policy) for every demand table of a user over T x m cells.
inline void for_each_public_policy(int T, int m, int d_max,
                                   const std::function<void(const PurePublicPolicy&)>& visit) {
    PurePublicPolicy p = PurePublicPolicy::Zero(T, m);
    const int cells = T * m;
    while (true) {
        visit(p);
        int c = 0;
        while (c < cells) {
            int& v = p(c / m, c % m);
            if (++v <= d_max) break;
            v = 0;
            ++c;
        }
        if (c == cells) return;
    }
}

/// Largest gain any user obtains by switching to any pure public policy, over
/// initial error indices with positive probability.
inline double exhaustive_nash_gap(const PureProfile& profile, const GameG2& game) {
    const Eigen::MatrixXd base = path_sum_values(profile, game);
    const auto starts = initial_error_indices(game.chain);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < game.num_users(); ++i) {
        auto trial = profile;
        for_each_public_policy(game.chain.horizon(), game.chain.num_errors(), game.d_max[i],
                               [&](const PurePublicPolicy& p) {
                                   trial[i] = p;
                                   const Eigen::MatrixXd v = path_sum_values(trial, game);
                                   for (int j : starts) worst = std::max(worst, v(i, j) - base(i, j));
                               });
    }
    return worst;
}

/// Value of one deterministic policy, stage by stage.
inline std::vector<Eigen::VectorXd> policy_values(const FiniteMDP& mdp, const DeterministicPolicy& pol) {
    const int T = mdp.horizon();
    std::vector<Eigen::VectorXd> v(T + 1);
    v[T] = Eigen::VectorXd::Zero(0);
    for (int t = T - 1; t >= 0; --t) {
        v[t] = Eigen::VectorXd::Zero(mdp.num_states(t));
        for (int s = 0; s < mdp.num_states(t); ++s) {
            const auto& a = mdp.stages[t][s][pol[t][s]];
            double q = a.reward;
            for (const auto& succ : a.successors) q += succ.probability * v[t + 1][succ.next];
            v[t][s] = q;
        }
    }
    return v;
}

/// Best stage-0 value per state over every deterministic Markov policy.
inline Eigen::VectorXd enumerate_policies(const FiniteMDP& mdp) {
    const int T = mdp.horizon();
    DeterministicPolicy pol(T);
    std::vector<std::pair<int, int>> slots;
    for (int t = 0; t < T; ++t) {
        pol[t].assign(mdp.num_states(t), 0);
        for (int s = 0; s < mdp.num_states(t); ++s) slots.emplace_back(t, s);
    }
    Eigen::VectorXd best = Eigen::VectorXd::Constant(mdp.num_states(0), -std::numeric_limits<double>::infinity());
    while (true) {
        const auto v = policy_values(mdp, pol);
        best = best.cwiseMax(v[0]);
        std::size_t k = 0;
        while (k < slots.size()) {
            auto [t, s] = slots[k];
            if (++pol[t][s] < static_cast<int>(mdp.stages[t][s].size())) break;
            pol[t][s] = 0;
            ++k;
        }
        if (k == slots.size()) break;
    }
    return best;
}

/// Own action chosen at each private state (t, j, b).
using OwnAssignment = std::map<std::tuple<int, int, int>, Action>;

/// Expected total reward of user i when it follows `own` and the others
/// follow `profile`, by expanding the joint-state tree forward.
inline double tree_value(int i, const OwnAssignment& own, const PMSProfile& profile, const GameG1& game,
                         int initial_error) {
    const auto& chain = game.chain;
    const int n = game.num_users();
    const int T = chain.horizon();
    std::vector<int> start = game.initial_storage.empty() ? std::vector<int>(n, 0) : game.initial_storage;
    std::function<double(int, int, std::vector<int>)> expand = [&](int t, int j, std::vector<int> storage) {
        if (t == T) return 0.0;
        const double e = chain.predicted[t] + chain.error_support[j];
        double total = 0.0;
        std::vector<Action> acts(n);
        std::function<void(int, double)> pick = [&](int k, double prob) {
            if (k == n) {
                int demand = 0;
                for (const auto& a : acts) demand += a.demand;
                const auto& a = acts[i];
                double r = game.users[i].utility[a.consumption] - direct_price(demand, e, game.pricing, n) * a.demand;
                std::vector<int> next(n);
                for (int q = 0; q < n; ++q) next[q] = storage[q] + acts[q].demand - acts[q].consumption;
                if (t + 1 < T) {
                    for (int jn = 0; jn < chain.num_errors(); ++jn) {
                        const double pq = chain.step(t)(j, jn);
                        if (pq > 0.0) r += pq * expand(t + 1, jn, next);
                    }
                }
                total += prob * r;
                return;
            }
            if (k == i) {
                acts[k] = own.at({t, j, storage[k]});
                pick(k + 1, prob);
                return;
            }
            const auto& dist = profile[k].at(t, j, storage[k]);
            for (Eigen::Index a = 0; a < dist.size(); ++a) {
                if (dist[a] <= 0.0) continue;
                acts[k] = profile[k].actions(storage[k])[a];
                pick(k + 1, prob * dist[a]);
            }
        };
        pick(0, 1.0);
        return total;
    };
    return expand(0, initial_error, start);
}

/// Best value of user i over every pure private strategy, enumerating actions
/// only at the private states its own choices can reach.
inline double best_pure_pms_value(int i, const PMSProfile& profile, const GameG1& game, int initial_error) {
    const auto& chain = game.chain;
    const auto& user = game.users[i];
    const int T = chain.horizon();
    const int b0 = game.initial_storage.empty() ? 0 : game.initial_storage[i];
    double best = -std::numeric_limits<double>::infinity();
    OwnAssignment own;
    std::function<void(int, std::vector<std::pair<int, int>>)> stage = [&](int t, std::vector<std::pair<int, int>> cells) {
        if (t == T) {
            best = std::max(best, tree_value(i, own, profile, game, initial_error));
            return;
        }
        std::function<void(std::size_t)> assign = [&](std::size_t c) {
            if (c == cells.size()) {
                std::vector<std::pair<int, int>> next;
                if (t + 1 < T) {
                    for (auto [j, b] : cells) {
                        const auto& a = own.at({t, j, b});
                        for (int jn = 0; jn < chain.num_errors(); ++jn) {
                            if (chain.step(t)(j, jn) <= 0.0) continue;
                            std::pair<int, int> cell{jn, b + a.demand - a.consumption};
                            if (std::find(next.begin(), next.end(), cell) == next.end()) next.push_back(cell);
                        }
                    }
                }
                stage(t + 1, next);
                return;
            }
            const auto [j, b] = cells[c];
            for (int d = 0; d <= user.d_max; ++d) {
                for (int cons = 0; cons <= user.c_max; ++cons) {
                    if (cons > b + d || cons < b + d - user.b_max) continue;
                    own[{t, j, b}] = {d, cons};
                    assign(c + 1);
                }
            }
            own.erase({t, j, b});
        };
        assign(0);
    };
    stage(0, {{initial_error, b0}});
    return best;
}

struct Estimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Monte Carlo estimate of user values and the leader payoff on the reduced
/// game from one initial error index. Returns n user estimates followed by the
/// leader estimate.
inline std::vector<Estimate> monte_carlo(const PureProfile& profile, const GameG2& game, const LeaderParams& leader,
                                         int initial_error, long episodes, std::uint64_t seed) {
    const auto& chain = game.chain;
    const int n = game.num_users();
    const int T = chain.horizon();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> sum(n + 1, 0.0), sq(n + 1, 0.0);
    std::vector<double> episode(n + 1);
    for (long k = 0; k < episodes; ++k) {
        std::fill(episode.begin(), episode.end(), 0.0);
        int j = initial_error;
        for (int t = 0; t < T; ++t) {
            const double e = chain.predicted[t] + chain.error_support[j];
            int demand = 0;
            for (int i = 0; i < n; ++i) demand += profile[i](t, j);
            const double p = direct_price(demand, e, game.pricing, n);
            for (int i = 0; i < n; ++i) {
                const int d = profile[i](t, j);
                episode[i] += game.theta[i] * d - p * d;
            }
            const double miss = demand - e - leader.target;
            episode[n] += p * demand - leader.unit_cost * (demand - e) - 0.5 * leader.penalty_weight * miss * miss;
            if (t + 1 < T) {
                const double u = unit(rng);
                double acc = 0.0;
                int next = chain.num_errors() - 1;
                for (int q = 0; q < chain.num_errors(); ++q) {
                    acc += chain.step(t)(j, q);
                    if (u < acc) {
                        next = q;
                        break;
                    }
                }
                j = next;
            }
        }
        for (int q = 0; q <= n; ++q) {
            sum[q] += episode[q];
            sq[q] += episode[q] * episode[q];
        }
    }
    std::vector<Estimate> out(n + 1);
    for (int q = 0; q <= n; ++q) {
        const double mean = sum[q] / episodes;
        const double var = std::max(0.0, sq[q] / episodes - mean * mean);
        out[q] = {mean, std::sqrt(var / episodes)};
    }
    return out;
}

/// Random reduced-game instance with the given size limits.
inline GameG1 random_linear_game(std::mt19937_64& rng, int n, int T, int m, int d_max, int b_max) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GameG1 game;
    for (int t = 0; t < T; ++t) game.chain.predicted.push_back(2.0 + 10.0 * unit(rng));
    for (int j = 0; j < m; ++j) game.chain.error_support.push_back(static_cast<double>(j) - 0.5 * (m - 1));
    Eigen::MatrixXd q(m, m);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) q(r, c) = 0.05 + unit(rng);
        q.row(r) /= q.row(r).sum();
    }
    game.chain.transition = {q};
    game.chain.initial_dist = Eigen::VectorXd::Constant(m, 1.0 / m);
    for (int i = 0; i < n; ++i) {
        game.users.push_back(UserSpec::linear(0.3 + 1.5 * unit(rng), d_max, d_max + b_max, b_max));
    }
    game.pricing = {0.2 + 2.0 * unit(rng), 0.2 + 2.0 * unit(rng), 1.0, 1.0};
    game.initial_storage.assign(n, 0);
    return game;
}

/// Random finite MDP with at most the given numbers of states and actions.
inline FiniteMDP random_mdp(std::mt19937_64& rng, int horizon, int max_states, int max_actions) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> states(1, max_states), actions(1, max_actions);
    FiniteMDP mdp;
    std::vector<int> sizes(horizon);
    for (auto& s : sizes) s = states(rng);
    mdp.stages.resize(horizon);
    for (int t = 0; t < horizon; ++t) {
        mdp.stages[t].resize(sizes[t]);
        for (auto& acts : mdp.stages[t]) {
            acts.resize(actions(rng));
            for (auto& a : acts) {
                a.reward = 10.0 * unit(rng) - 5.0;
                if (t + 1 == horizon) continue;
                double total = 0.0;
                for (int s = 0; s < sizes[t + 1]; ++s) {
                    const double w = unit(rng) < 0.3 ? 0.0 : unit(rng);
                    if (w > 0.0) a.successors.push_back({s, w});
                    total += w;
                }
                if (total == 0.0) {
                    a.successors = {{0, 1.0}};
                    continue;
                }
                for (auto& succ : a.successors) succ.probability /= total;
            }
        }
    }
    return mdp;
}

/// Random pure private strategy.
inline UserPolicy random_pure_policy(const UserSpec& user, const ForecastChain& chain, std::mt19937_64& rng) {
    return UserPolicy::pure(user, chain, [&](int, int, int b) {
        const auto acts = feasible_actions(user, b);
        return acts[rng() % acts.size()];
    });
}

/// Random mixed private strategy with full support.
inline UserPolicy random_mixed_policy(const UserSpec& user, const ForecastChain& chain, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    auto pol = UserPolicy::uniform(user, chain);
    for (auto& cell : pol.table()) {
        for (Eigen::Index a = 0; a < cell.size(); ++a) cell[a] = unit(rng);
        cell /= cell.sum();
    }
    return pol;
}

/// Own assignment reading the mode of a pure strategy at every private state.
inline OwnAssignment assignment_of(const UserPolicy& pol) {
    OwnAssignment own;
    for (int t = 0; t < pol.horizon(); ++t) {
        for (int j = 0; j < pol.num_errors(); ++j) {
            for (int b = 0; b <= pol.b_max(); ++b) own[{t, j, b}] = pol.mode(t, j, b);
        }
    }
    return own;
}

} // namespace oracle

#endif
