#include "gridstack/analysis.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "gridstack/payoff.hpp"

namespace gridstack {

namespace {

constexpr double kClampTolerance = 1e-9;

double own_gain(int i, double e, int others, int d, const GameG2& game) {
    const double p = price(d + others, e, game.pricing, game.num_users());
    return game.theta[i] * d - p * d;
}

} // namespace

NashConvReport nashconv_report(const PMSProfile& profile, const GameG1& game, std::size_t cap) {
    const int n = game.num_users();
    const auto starts = initial_error_indices(game.chain);
    const Eigen::MatrixXd own = evaluate_profile(profile, game, cap);
    NashConvReport report;
    report.gains = Eigen::MatrixXd::Zero(n, game.chain.num_errors());
    for (int i = 0; i < n; ++i) {
        const auto br = full_info_best_response(i, profile, game, cap);
        report.gains.row(i) = br.value.transpose() - own.row(i);
    }
    double total = 0.0;
    for (int j : starts) total += report.gains.col(j).sum() / n;
    report.value = total / static_cast<double>(starts.size());
    if (report.value < 0.0 && report.value >= -kClampTolerance) report.value = 0.0;
    return report;
}

double nashconv(const PMSProfile& profile, const GameG1& game, std::size_t cap) {
    return nashconv_report(profile, game, cap).value;
}

double verify_potential_property(const GameG2& game, int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> seeds;
    std::uniform_int_distribution<int> pick_user(0, game.num_users() - 1);
    double worst = 0.0;
    for (int k = 0; k < trials; ++k) {
        const auto profile = random_profile(game, seeds(rng));
        const int i = pick_user(rng);
        auto deviated = profile;
        deviated[i] = random_profile(game, seeds(rng))[i];
        const Eigen::VectorXd dv =
            value_g2_all(deviated, game).row(i).transpose() - value_g2_all(profile, game).row(i).transpose();
        const Eigen::VectorXd dphi = potential_value_all(deviated, game) - potential_value_all(profile, game);
        worst = std::max(worst, (dv - dphi).cwiseAbs().maxCoeff());
    }
    return worst;
}

DeviationCertificate max_deviation_gain(const PureProfile& profile, const GameG2& game) {
    const auto reach = reach_matrices(game.chain);
    const auto starts = initial_error_indices(game.chain);
    const Eigen::MatrixXi total = aggregate_demand(profile);
    DeviationCertificate cert;
    cert.max_gain = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < game.num_users(); ++i) {
        for (int t = 0; t < game.chain.horizon(); ++t) {
            for (int j = 0; j < game.chain.num_errors(); ++j) {
                const double e = game.chain.public_state(t, j);
                const int current = profile[i](t, j);
                const int others = total(t, j) - current;
                const double base = own_gain(i, e, others, current, game);
                for (int d = 0; d <= game.d_max[i]; ++d) {
                    if (d == current) continue;
                    const double cell_gain = own_gain(i, e, others, d, game) - base;
                    for (int s : starts) {
                        const double gain = reach[t](s, j) * cell_gain;
                        ++cert.deviations_checked;
                        if (gain > cert.max_gain) {
                            cert.max_gain = gain;
                            cert.user = i;
                            cert.stage = t;
                            cert.error_index = j;
                            cert.demand = d;
                            cert.initial_error = s;
                        }
                    }
                }
            }
        }
    }
    if (cert.deviations_checked == 0) cert.max_gain = 0.0;
    cert.max_gain += 0.0;  // no negative zero
    return cert;
}

bool condition_c1(const GameG1& game, const C1Spec& spec) {
    const auto& chain = game.chain;
    if (chain.horizon() < 2) return false;
    const int n = game.num_users();
    const auto marginals = chain_marginals(chain);
    for (int j1 = 0; j1 < chain.num_errors(); ++j1) {
        if (marginals[0][j1] <= 0.0) continue;
        const double e1 = chain.public_state(0, j1);
        for (int j2 = 0; j2 < chain.num_errors(); ++j2) {
            if (marginals[1][j2] <= 0.0) continue;
            const double e2 = chain.public_state(1, j2);
            for (int x1 : spec.opponent_demands) {
                const double left = price_slope(e1, game.pricing, n) * (spec.first_offset + x1) +
                                    base_price(e1, game.pricing);
                if (!(left < spec.threshold)) return false;
            }
            for (int x2 : spec.opponent_demands) {
                const double right = price_slope(e2, game.pricing, n) * (spec.second_offset + x2) +
                                     base_price(e2, game.pricing);
                if (!(spec.threshold < right)) return false;
            }
        }
    }
    return true;
}

UserPolicy stage_pure_policy(const UserSpec& user, const ForecastChain& chain,
                             const std::vector<Action>& per_stage) {
    return UserPolicy::pure(user, chain, [&](int t, int, int b) {
        Action a = per_stage[t];
        const int lo = std::max(0, b + a.demand - user.b_max);
        const int hi = std::min(user.c_max, b + a.demand);
        a.consumption = std::clamp(a.consumption, lo, hi);
        return a;
    });
}

std::vector<UserPolicy> non_storage_family(const UserSpec& user, const ForecastChain& chain,
                                           const std::vector<int>& levels) {
    const int T = chain.horizon();
    std::vector<UserPolicy> out;
    std::vector<int> digits(T, 0);
    const int L = static_cast<int>(levels.size());
    while (true) {
        std::vector<Action> per_stage(T);
        for (int t = 0; t < T; ++t) per_stage[t] = {levels[digits[t]], levels[digits[t]]};
        out.push_back(stage_pure_policy(user, chain, per_stage));
        int t = T - 1;
        while (t >= 0 && ++digits[t] == L) digits[t--] = 0;
        if (t < 0) break;
    }
    return out;
}

DominanceReport check_storage_dominance(const GameG1& game, const std::vector<UserPolicy>& storage,
                                        const std::vector<std::vector<UserPolicy>>& families,
                                        const C1Spec& spec) {
    const int n = game.num_users();
    const auto starts = initial_error_indices(game.chain);
    DominanceReport report;
    report.condition_c1_holds = condition_c1(game, spec);
    report.dominated_per_user.assign(n, 0);
    report.min_gap = std::numeric_limits<double>::infinity();

    for (int i = 0; i < n; ++i) {
        const int family_size = static_cast<int>(families[i].size());
        std::vector<bool> dominated(family_size, true);
        // Odometer over the opponents' family members.
        std::vector<int> choice(n, 0);
        bool done = false;
        for (int k = 0; k < n; ++k) {
            if (k != i && families[k].empty()) done = true;
        }
        while (!done) {
            PMSProfile profile(n);
            for (int k = 0; k < n; ++k) {
                if (k != i) profile[k] = families[k][choice[k]];
            }
            profile[i] = storage[i];
            const Eigen::VectorXd with_storage = evaluate_profile(profile, game).row(i).transpose();
            for (int s = 0; s < family_size; ++s) {
                profile[i] = families[i][s];
                const Eigen::VectorXd without = evaluate_profile(profile, game).row(i).transpose();
                for (int j : starts) {
                    const double gap = with_storage[j] - without[j];
                    ++report.comparisons;
                    report.min_gap = std::min(report.min_gap, gap);
                    if (!(gap > 0.0)) {
                        dominated[s] = false;
                        if (!report.counterexample) {
                            std::vector<int> opponents;
                            for (int k = 0; k < n; ++k) {
                                if (k != i) opponents.push_back(choice[k]);
                            }
                            report.counterexample = DominanceCounterexample{i, s, opponents, j, gap};
                        }
                    }
                }
            }
            int k = n - 1;
            while (k >= 0) {
                if (k == i) {
                    --k;
                    continue;
                }
                if (++choice[k] < static_cast<int>(families[k].size())) break;
                choice[k] = 0;
                --k;
            }
            done = k < 0;
        }
        report.dominated_per_user[i] =
            static_cast<int>(std::count(dominated.begin(), dominated.end(), true));
        report.dominated_strategy_count += report.dominated_per_user[i];
    }
    if (report.comparisons == 0) report.min_gap = 0.0;
    return report;
}

} // namespace gridstack
