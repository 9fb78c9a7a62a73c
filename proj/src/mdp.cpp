#include "gridstack/mdp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gridstack/parallel.hpp"
#include "gridstack/payoff.hpp"

namespace gridstack {

namespace {

/// Visits every combination of the users' actions (except `skip`) with
/// positive probability at stage t, error index j and the given storages.
template <typename Visit>
void for_each_combo(const PMSProfile& profile, int t, int j, const std::vector<int>& storage,
                    int skip, Visit&& visit) {
    const int n = static_cast<int>(profile.size());
    std::vector<Action> chosen(n);
    auto recurse = [&](auto&& self, int k, double prob) -> void {
        if (k == n) {
            visit(prob, chosen);
            return;
        }
        if (k == skip) {
            self(self, k + 1, prob);
            return;
        }
        const auto& dist = profile[k].at(t, j, storage[k]);
        const auto& actions = profile[k].actions(storage[k]);
        for (Eigen::Index a = 0; a < dist.size(); ++a) {
            if (dist[a] <= 0.0) continue;
            chosen[k] = actions[a];
            self(self, k + 1, prob * dist[a]);
        }
    };
    recurse(recurse, 0, 1.0);
}

/// Flattens an m x B matrix into joint-state order j * B + s.
Eigen::VectorXd flatten(const Eigen::MatrixXd& values) {
    Eigen::VectorXd out(values.size());
    const auto B = values.cols();
    for (Eigen::Index j = 0; j < values.rows(); ++j) {
        out.segment(j * B, B) = values.row(j).transpose();
    }
    return out;
}

} // namespace

void check_mdp(const FiniteMDP& mdp) {
    const int T = mdp.horizon();
    for (int t = 0; t < T; ++t) {
        for (int s = 0; s < mdp.num_states(t); ++s) {
            const auto& actions = mdp.stages[t][s];
            if (actions.empty()) {
                throw std::invalid_argument("state " + std::to_string(s) + " at stage " +
                                            std::to_string(t) + " has no action");
            }
            for (const auto& a : actions) {
                if (t + 1 == T) {
                    if (!a.successors.empty()) {
                        throw std::invalid_argument("last-stage action has successors");
                    }
                    continue;
                }
                double total = 0.0;
                for (const auto& succ : a.successors) {
                    if (succ.next < 0 || succ.next >= mdp.num_states(t + 1) || succ.probability < 0.0) {
                        throw std::invalid_argument("invalid successor at stage " + std::to_string(t));
                    }
                    total += succ.probability;
                }
                if (std::abs(total - 1.0) > 1e-9) {
                    throw std::invalid_argument("transition at stage " + std::to_string(t) +
                                                " sums to " + std::to_string(total));
                }
            }
        }
    }
}

MDPSolution backward_induction(const FiniteMDP& mdp) {
    const int T = mdp.horizon();
    MDPSolution sol;
    sol.value.resize(T);
    sol.policy.resize(T);
    for (int t = T - 1; t >= 0; --t) {
        const int S = mdp.num_states(t);
        sol.value[t] = Eigen::VectorXd::Zero(S);
        sol.policy[t].assign(S, 0);
        for (int s = 0; s < S; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            int arg = 0;
            const auto& actions = mdp.stages[t][s];
            for (std::size_t a = 0; a < actions.size(); ++a) {
                double q = actions[a].reward;
                for (const auto& succ : actions[a].successors) {
                    q += succ.probability * sol.value[t + 1][succ.next];
                }
                if (q > best) {
                    best = q;
                    arg = static_cast<int>(a);
                }
            }
            sol.value[t][s] = best;
            sol.policy[t][s] = arg;
        }
    }
    return sol;
}

std::vector<Eigen::VectorXd> evaluate_policy(const FiniteMDP& mdp, const DeterministicPolicy& policy) {
    const int T = mdp.horizon();
    std::vector<Eigen::VectorXd> value(T);
    for (int t = T - 1; t >= 0; --t) {
        const int S = mdp.num_states(t);
        value[t] = Eigen::VectorXd::Zero(S);
        for (int s = 0; s < S; ++s) {
            const auto& a = mdp.stages[t][s][policy[t][s]];
            double q = a.reward;
            for (const auto& succ : a.successors) {
                q += succ.probability * value[t + 1][succ.next];
            }
            value[t][s] = q;
        }
    }
    return value;
}

double expected_price(int d, double e, const Eigen::VectorXd& belief, const PricingParams& pricing,
                      int n) {
    double p = 0.0;
    for (Eigen::Index x = 0; x < belief.size(); ++x) {
        if (belief[x] != 0.0) p += belief[x] * price(static_cast<int>(x) + d, e, pricing, n);
    }
    return p;
}

FiniteMDP build_br_mdp(int i, const UserEstimate& estimate, const GameG1& game) {
    const auto& user = game.users[i];
    const auto& chain = game.chain;
    const int T = chain.horizon();
    const int m = chain.num_errors();
    const int n = game.num_users();
    std::vector<std::vector<Action>> actions;
    for (int b = 0; b <= user.b_max; ++b) actions.push_back(feasible_actions(user, b));

    FiniteMDP mdp;
    mdp.stages.resize(T);
    for (int t = 0; t < T; ++t) {
        auto& stage = mdp.stages[t];
        stage.resize(static_cast<std::size_t>(m) * (user.b_max + 1));
        for (int j = 0; j < m; ++j) {
            const double e = chain.public_state(t, j);
            const auto& belief = estimate.at(t, j);
            for (int b = 0; b <= user.b_max; ++b) {
                auto& list = stage[private_state(j, b, user.b_max)];
                list.reserve(actions[b].size());
                for (const auto& a : actions[b]) {
                    MDPAction act;
                    act.reward = user.utility_of(a.consumption) -
                                 expected_price(a.demand, e, belief, game.pricing, n) * a.demand;
                    if (t + 1 < T) {
                        const int next_b = b + a.demand - a.consumption;
                        const auto row = chain.step(t).row(j);
                        for (int k = 0; k < m; ++k) {
                            if (row[k] > 0.0) {
                                act.successors.push_back({private_state(k, next_b, user.b_max), row[k]});
                            }
                        }
                    }
                    list.push_back(std::move(act));
                }
            }
        }
    }
    return mdp;
}

UserPolicy policy_from_solution(int i, const MDPSolution& solution, const GameG1& game) {
    const auto& user = game.users[i];
    UserPolicy policy(user, game.chain.horizon(), game.chain.num_errors());
    for (int t = 0; t < policy.horizon(); ++t) {
        for (int j = 0; j < policy.num_errors(); ++j) {
            for (int b = 0; b <= user.b_max; ++b) {
                const int a = solution.policy[t][private_state(j, b, user.b_max)];
                policy.set_pure(t, j, b, policy.actions(b)[a]);
            }
        }
    }
    return policy;
}

JointStateSpace::JointStateSpace(const GameG1& game, std::size_t cap)
    : num_errors_(game.chain.num_errors()) {
    const int n = game.num_users();
    radices_.resize(n);
    strides_.resize(n);
    std::size_t total = static_cast<std::size_t>(num_errors_);
    std::size_t storage = 1;
    for (int k = n - 1; k >= 0; --k) {
        radices_[k] = game.users[k].b_max + 1;
        strides_[k] = static_cast<int>(storage);
        storage *= static_cast<std::size_t>(radices_[k]);
        if (total * storage > cap) {
            throw StateSpaceTooLarge("joint state space exceeds the cap of " + std::to_string(cap));
        }
    }
    num_storage_ = static_cast<int>(storage);
}

int JointStateSpace::storage_index(const std::vector<int>& storage) const {
    int index = 0;
    for (std::size_t k = 0; k < storage.size(); ++k) index += storage[k] * strides_[k];
    return index;
}

std::vector<int> JointStateSpace::decode_storage(int index) const {
    std::vector<int> storage(radices_.size());
    for (std::size_t k = 0; k < radices_.size(); ++k) {
        storage[k] = index / strides_[k];
        index %= strides_[k];
    }
    return storage;
}

std::vector<int> initial_storage_of(const GameG1& game) {
    if (game.initial_storage.empty()) return std::vector<int>(game.users.size(), 0);
    return game.initial_storage;
}

FullInfoBestResponse full_info_best_response(int i, const PMSProfile& profile, const GameG1& game,
                                             std::size_t cap) {
    const JointStateSpace space(game, cap);
    const auto& chain = game.chain;
    const auto& user = game.users[i];
    const int T = chain.horizon();
    const int m = space.num_errors();
    const int B = space.num_storage();
    const int n = game.num_users();

    FullInfoBestResponse out;
    out.stage_values.resize(T);
    out.policy.resize(T);
    Eigen::MatrixXd next_value = Eigen::MatrixXd::Zero(m, B);
    for (int t = T - 1; t >= 0; --t) {
        const Eigen::MatrixXd continuation =
            t + 1 < T ? Eigen::MatrixXd(chain.step(t) * next_value) : Eigen::MatrixXd::Zero(m, B);
        Eigen::MatrixXd value(m, B);
        std::vector<int> choice(static_cast<std::size_t>(m) * B, 0);
        parallel_for(0, m * B, [&](int cell) {
            const int j = cell / B;
            const int s = cell % B;
            const auto storage = space.decode_storage(s);
            const double e = chain.public_state(t, j);
            struct Combo {
                double prob;
                int others_demand;
                int next_partial;
            };
            std::vector<Combo> combos;
            for_each_combo(profile, t, j, storage, i, [&](double prob, const std::vector<Action>& acts) {
                int demand = 0;
                int next = 0;
                for (int k = 0; k < n; ++k) {
                    if (k == i) continue;
                    demand += acts[k].demand;
                    next += (storage[k] + acts[k].demand - acts[k].consumption) * space.stride(k);
                }
                combos.push_back({prob, demand, next});
            });
            const auto& actions = profile[i].actions(storage[i]);
            double best = -std::numeric_limits<double>::infinity();
            int arg = 0;
            for (std::size_t a = 0; a < actions.size(); ++a) {
                const auto& act = actions[a];
                const int own_next = (storage[i] + act.demand - act.consumption) * space.stride(i);
                double q = 0.0;
                for (const auto& c : combos) {
                    q += c.prob * (user.utility_of(act.consumption) -
                                   price(act.demand + c.others_demand, e, game.pricing, n) * act.demand +
                                   continuation(j, c.next_partial + own_next));
                }
                if (q > best) {
                    best = q;
                    arg = static_cast<int>(a);
                }
            }
            value(j, s) = best;
            choice[cell] = arg;
        });
        out.stage_values[t] = flatten(value);
        out.policy[t] = std::move(choice);
        next_value = std::move(value);
    }
    const int start = space.storage_index(initial_storage_of(game));
    out.value = next_value.col(start);
    return out;
}

Eigen::MatrixXd evaluate_profile(const PMSProfile& profile, const GameG1& game, std::size_t cap) {
    const JointStateSpace space(game, cap);
    const auto& chain = game.chain;
    const int T = chain.horizon();
    const int m = space.num_errors();
    const int B = space.num_storage();
    const int n = game.num_users();

    // One m x B value matrix per user.
    std::vector<Eigen::MatrixXd> next_value(n, Eigen::MatrixXd::Zero(m, B));
    for (int t = T - 1; t >= 0; --t) {
        std::vector<Eigen::MatrixXd> continuation(n);
        for (int k = 0; k < n; ++k) {
            continuation[k] = t + 1 < T ? Eigen::MatrixXd(chain.step(t) * next_value[k])
                                        : Eigen::MatrixXd::Zero(m, B);
        }
        std::vector<Eigen::MatrixXd> value(n, Eigen::MatrixXd::Zero(m, B));
        parallel_for(0, m * B, [&](int cell) {
            const int j = cell / B;
            const int s = cell % B;
            const auto storage = space.decode_storage(s);
            const double e = chain.public_state(t, j);
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
            for_each_combo(profile, t, j, storage, -1, [&](double prob, const std::vector<Action>& acts) {
                int demand = 0;
                int next = 0;
                for (int k = 0; k < n; ++k) {
                    demand += acts[k].demand;
                    next += (storage[k] + acts[k].demand - acts[k].consumption) * space.stride(k);
                }
                const double p = price(demand, e, game.pricing, n);
                for (int k = 0; k < n; ++k) {
                    acc[k] += prob * (game.users[k].utility_of(acts[k].consumption) -
                                      p * acts[k].demand + continuation[k](j, next));
                }
            });
            for (int k = 0; k < n; ++k) value[k](j, s) = acc[k];
        });
        next_value = std::move(value);
    }
    const int start = space.storage_index(initial_storage_of(game));
    Eigen::MatrixXd out(n, m);
    for (int k = 0; k < n; ++k) out.row(k) = next_value[k].col(start).transpose();
    return out;
}

} // namespace gridstack
