#ifndef GRIDSTACK_ANALYSIS_HPP
#define GRIDSTACK_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gridstack/core_model.hpp"
#include "gridstack/mdp.hpp"
#include "gridstack/policy.hpp"

namespace gridstack {

struct NashConvReport {
    double value = 0.0;
    /// Best-response gain of each user from each initial error index: n x m.
    Eigen::MatrixXd gains;
};

NashConvReport nashconv_report(const PMSProfile& profile, const GameG1& game,
                               std::size_t cap = kDefaultStateCap);

/// Average best-response gain over initial error indices and users; values
/// within -1e-9 of zero are clamped to zero.
double nashconv(const PMSProfile& profile, const GameG1& game, std::size_t cap = kDefaultStateCap);

/// Largest |dV_i - dPhi| over random pure profiles, random unilateral
/// deviations and every initial error index.
double verify_potential_property(const GameG2& game, int trials, std::uint64_t seed);

struct DeviationCertificate {
    /// Largest value gain of any single-cell demand deviation.
    double max_gain = 0.0;
    long long deviations_checked = 0;
    int user = -1;
    int stage = -1;
    int error_index = -1;
    int demand = -1;
    int initial_error = -1;
};

/// Checks every single-cell demand deviation of every user from every initial
/// error index with positive probability.
DeviationCertificate max_deviation_gain(const PureProfile& profile, const GameG2& game);

/// Buy-early, consume-later condition for a two-stage game: for all
/// first-stage states e1, second-stage states e2 and opponent demands x,
/// slope(e1) (first_offset + x) + base(e1) < threshold <
/// slope(e2) (second_offset + x) + base(e2).
struct C1Spec {
    double first_offset = 5.0;
    double second_offset = 3.0;
    double threshold = 0.9;
    std::vector<int> opponent_demands{1, 2, 3};
};

bool condition_c1(const GameG1& game, const C1Spec& spec = {});

/// Pure strategy playing per_stage[t] at every error index and storage level;
/// consumption is clamped into the feasible range where the prescribed action
/// is infeasible.
UserPolicy stage_pure_policy(const UserSpec& user, const ForecastChain& chain,
                             const std::vector<Action>& per_stage);

/// Every pure strategy with consumption equal to demand, where the demand at
/// stage t is drawn from `levels` regardless of state.
std::vector<UserPolicy> non_storage_family(const UserSpec& user, const ForecastChain& chain,
                                           const std::vector<int>& levels);

struct DominanceCounterexample {
    int user = -1;
    int strategy = -1;
    std::vector<int> opponent_strategies;
    int initial_error = -1;
    double gap = 0.0;
};

struct DominanceReport {
    bool condition_c1_holds = false;
    /// Number of family strategies strictly dominated, per user.
    std::vector<int> dominated_per_user;
    int dominated_strategy_count = 0;
    long long comparisons = 0;
    double min_gap = 0.0;
    std::optional<DominanceCounterexample> counterexample;
};

/// Compares storage[i] against every member of families[i] for each user i,
/// against every opponent profile drawn from the other users' families, from
/// every initial error index with positive probability.
DominanceReport check_storage_dominance(const GameG1& game, const std::vector<UserPolicy>& storage,
                                        const std::vector<std::vector<UserPolicy>>& families,
                                        const C1Spec& spec = {});

} // namespace gridstack

#endif
