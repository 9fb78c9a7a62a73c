#include "gridstack/fp_learner.hpp"

#include <algorithm>

#include "gridstack/analysis.hpp"
#include "gridstack/parallel.hpp"
#include "gridstack/payoff.hpp"

namespace gridstack {

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_index(const Eigen::VectorXd& probs, std::mt19937_64& rng) {
    const double u = unit_draw(rng);
    double acc = 0.0;
    int last = 0;
    for (Eigen::Index k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) continue;
        acc += probs[k];
        last = static_cast<int>(k);
        if (u < acc) return last;
    }
    return last;
}

Trajectory simulate_episode(const PMSProfile& profile, const GameG1& game, std::mt19937_64& rng) {
    const auto& chain = game.chain;
    const int n = game.num_users();
    Trajectory out;
    out.reserve(chain.horizon());
    std::vector<int> storage = initial_storage_of(game);
    int j = sample_index(chain.initial_dist, rng);
    for (int t = 0; t < chain.horizon(); ++t) {
        EpisodeStep step;
        step.stage = t;
        step.error_index = j;
        step.storage = storage;
        step.actions.resize(n);
        int total = 0;
        for (int i = 0; i < n; ++i) {
            const int a = sample_index(profile[i].at(t, j, storage[i]), rng);
            step.actions[i] = profile[i].actions(storage[i])[a];
            total += step.actions[i].demand;
        }
        const double e = chain.public_state(t, j);
        const double p = price(total, e, game.pricing, n);
        step.others_demand.resize(n);
        step.rewards.resize(n);
        for (int i = 0; i < n; ++i) {
            const auto& a = step.actions[i];
            step.others_demand[i] = total - a.demand;
            step.rewards[i] = game.users[i].utility_of(a.consumption) - p * a.demand;
            storage[i] += a.demand - a.consumption;
        }
        out.push_back(std::move(step));
        if (t + 1 < chain.horizon()) {
            j = sample_index(chain.step(t).row(j).transpose(), rng);
        }
    }
    return out;
}

Trajectory simulate_episode(const PMSProfile& profile, const GameG1& game, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return simulate_episode(profile, game, rng);
}

double update_policy(UserPolicy& current, const UserPolicy& response, double step) {
    double largest = 0.0;
    auto& cells = current.table();
    const auto& target = response.table();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Eigen::VectorXd next = (1.0 - step) * cells[c] + step * target[c];
        largest = std::max(largest, (next - cells[c]).cwiseAbs().sum());
        cells[c] = next;
    }
    return largest;
}

void update_estimate(UserEstimate& current, int user, const Trajectory& trajectory, double step) {
    for (const auto& s : trajectory) {
        auto& cell = current.at(s.stage, s.error_index);
        cell *= 1.0 - step;
        cell[s.others_demand[user]] += step;
    }
}

FPResult fp_mdp_solve(const GameG1& game, const FPOptions& options) {
    const int n = game.num_users();
    std::mt19937_64 rng(options.seed);
    FPResult result;
    result.profile.reserve(n);
    for (const auto& user : game.users) {
        result.profile.push_back(UserPolicy::uniform(user, game.chain));
    }
    result.estimate = uniform_estimate(game);
    result.trace.push_back({0, nashconv(result.profile, game, options.cap), std::vector<double>(n, 0.0)});

    PMSProfile responses(n);
    std::vector<double> change(n, 0.0);
    for (int k = 1; k <= options.iterations; ++k) {
        parallel_for(0, n, [&](int i) {
            const auto mdp = build_br_mdp(i, result.estimate[i], game);
            responses[i] = policy_from_solution(i, backward_induction(mdp), game);
        });
        const Trajectory episode = simulate_episode(responses, game, rng);
        const double step = options.schedule(k);
        for (int i = 0; i < n; ++i) {
            change[i] = update_policy(result.profile[i], responses[i], step);
            update_estimate(result.estimate[i], i, episode, step);
        }
        if (options.eval_every > 0 && k % options.eval_every == 0) {
            result.trace.push_back({k, nashconv(result.profile, game, options.cap), change});
        }
    }
    return result;
}

} // namespace gridstack
