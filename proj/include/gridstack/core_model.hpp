#ifndef GRIDSTACK_CORE_MODEL_HPP
#define GRIDSTACK_CORE_MODEL_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gridstack {

/// Renewable forecast: predicted output per stage plus a Markov chain over a
/// fixed error support. The public state at (t, j) is predicted[t] + support[j].
struct ForecastChain {
    std::vector<double> predicted;
    std::vector<double> error_support;
    /// Either T-1 stage matrices (stage t -> t+1) or a single matrix that is
    /// broadcast to every stage.
    std::vector<Eigen::MatrixXd> transition;
    Eigen::VectorXd initial_dist;

    int horizon() const { return static_cast<int>(predicted.size()); }
    int num_errors() const { return static_cast<int>(error_support.size()); }

    double public_state(int stage, int error_index) const {
        return predicted[stage] + error_support[error_index];
    }

    /// Transition matrix from `stage` to `stage + 1`.
    const Eigen::MatrixXd& step(int stage) const {
        return transition.size() == 1 ? transition.front() : transition[stage];
    }
};

struct PricingParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma1 = 1.0;
    double gamma2 = 1.0;
};

struct LeaderParams {
    double unit_cost = 1.0;
    double penalty_weight = 0.1;
    double target = 0.0;
};

/// One storage user. Utility is always tabulated over consumption 0..c_max;
/// a linear user keeps `theta` and the table holds theta * c.
struct UserSpec {
    std::optional<double> theta;
    std::vector<double> utility;
    int d_max = 0;
    int c_max = 0;
    int b_max = 0;

    static UserSpec linear(double theta, int d_max, int c_max, int b_max);
    static UserSpec tabulated(std::vector<double> utility, int d_max, int b_max);

    double utility_of(int consumption) const { return utility[consumption]; }
};

struct GameG1 {
    ForecastChain chain;
    std::vector<UserSpec> users;
    PricingParams pricing;
    std::vector<int> initial_storage;

    int num_users() const { return static_cast<int>(users.size()); }
};

/// Demand-only reduction over public states.
struct GameG2 {
    ForecastChain chain;
    std::vector<double> theta;
    std::vector<int> d_max;
    PricingParams pricing;

    int num_users() const { return static_cast<int>(theta.size()); }
    int num_cells() const { return chain.horizon() * chain.num_errors(); }
};

enum class ViolationKind {
    RowNotStochastic,
    BadInitialDist,
    CapViolation,
    NegativePublicState,
    BadInitialStorage,
    BadUtility,
    BadPricing,
    BadShape,
};

struct Violation {
    ViolationKind kind;
    std::string message;
    int stage = -1;
    int index = -1;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }
    bool has(ViolationKind kind) const;

private:
    std::vector<Violation> violations_;
};

std::vector<Violation> check_chain(const ForecastChain& chain);
std::vector<Violation> check_game(const GameG1& game);

/// Returns the game unchanged if every invariant holds, otherwise throws a
/// ValidationError listing every violation found.
const GameG1& validate_game(const GameG1& game);

GameG2 build_reduced_game(const GameG1& game);

/// State marginals per stage starting from the chain's initial distribution.
std::vector<Eigen::VectorXd> chain_marginals(const ForecastChain& chain);

/// Reach probabilities per stage: row s of element t is the distribution of
/// the error index at stage t given error index s at stage 0.
std::vector<Eigen::MatrixXd> reach_matrices(const ForecastChain& chain);

/// Error indices with positive initial probability; these form the initial
/// public states over which equilibria and NashConv are quantified.
std::vector<int> initial_error_indices(const ForecastChain& chain);

ForecastChain uniform_initial(ForecastChain chain);

} // namespace gridstack

#endif
