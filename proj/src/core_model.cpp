#include "gridstack/core_model.hpp"

#include <cmath>
#include <sstream>

namespace gridstack {

namespace {

constexpr double kStochasticTol = 1e-12;

std::string join_messages(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << "invalid game (" << violations.size() << " violation"
       << (violations.size() == 1 ? "" : "s") << ")";
    for (const auto& v : violations) {
        os << "\n  - " << v.message;
    }
    return os.str();
}

void check_stochastic_matrix(const Eigen::MatrixXd& matrix, int stage, int m,
                             std::vector<Violation>& out) {
    if (matrix.rows() != m || matrix.cols() != m) {
        std::ostringstream os;
        os << "transition[" << stage << "] is " << matrix.rows() << "x" << matrix.cols()
           << ", expected " << m << "x" << m;
        out.push_back({ViolationKind::BadShape, os.str(), stage, -1});
        return;
    }
    for (int r = 0; r < m; ++r) {
        const auto row = matrix.row(r);
        const bool in_range = (row.array() >= 0.0).all() && (row.array() <= 1.0).all();
        if (!in_range || std::abs(row.sum() - 1.0) > kStochasticTol) {
            std::ostringstream os;
            os << "RowNotStochastic: transition[" << stage << "] row " << r << " sums to "
               << row.sum();
            out.push_back({ViolationKind::RowNotStochastic, os.str(), stage, r});
        }
    }
}

} // namespace

UserSpec UserSpec::linear(double theta, int d_max, int c_max, int b_max) {
    UserSpec user;
    user.theta = theta;
    user.d_max = d_max;
    user.c_max = c_max;
    user.b_max = b_max;
    user.utility.resize(static_cast<std::size_t>(std::max(c_max, 0)) + 1);
    for (int c = 0; c <= c_max; ++c) {
        user.utility[c] = theta * c;
    }
    return user;
}

UserSpec UserSpec::tabulated(std::vector<double> utility, int d_max, int b_max) {
    UserSpec user;
    user.c_max = static_cast<int>(utility.size()) - 1;
    user.utility = std::move(utility);
    user.d_max = d_max;
    user.b_max = b_max;
    return user;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_messages(violations)), violations_(std::move(violations)) {}

bool ValidationError::has(ViolationKind kind) const {
    for (const auto& v : violations_) {
        if (v.kind == kind) return true;
    }
    return false;
}

std::vector<Violation> check_chain(const ForecastChain& chain) {
    std::vector<Violation> out;
    const int T = chain.horizon();
    const int m = chain.num_errors();
    if (T < 1) {
        out.push_back({ViolationKind::BadShape, "horizon must be at least 1"});
        return out;
    }
    if (m < 1) {
        out.push_back({ViolationKind::BadShape, "error support is empty"});
        return out;
    }
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            if (chain.error_support[a] == chain.error_support[b]) {
                out.push_back({ViolationKind::BadShape, "error support values must be distinct"});
            }
        }
    }
    for (int t = 0; t < T; ++t) {
        if (chain.predicted[t] < 0.0) {
            std::ostringstream os;
            os << "predicted[" << t << "] is negative";
            out.push_back({ViolationKind::NegativePublicState, os.str(), t, -1});
        }
    }
    if (T > 1) {
        const auto count = static_cast<int>(chain.transition.size());
        if (count != 1 && count != T - 1) {
            std::ostringstream os;
            os << "expected 1 or " << T - 1 << " transition matrices, got " << count;
            out.push_back({ViolationKind::BadShape, os.str()});
        } else {
            for (int t = 0; t < count; ++t) {
                check_stochastic_matrix(chain.transition[t], t, m, out);
            }
        }
    }
    if (chain.initial_dist.size() != m) {
        out.push_back({ViolationKind::BadInitialDist, "initial_dist length differs from error support"});
    } else if ((chain.initial_dist.array() < 0.0).any() ||
               std::abs(chain.initial_dist.sum() - 1.0) > kStochasticTol) {
        out.push_back({ViolationKind::BadInitialDist, "initial_dist is not a probability vector"});
    }
    for (int t = 0; t < T; ++t) {
        for (int j = 0; j < m; ++j) {
            if (chain.public_state(t, j) < 0.0) {
                std::ostringstream os;
                os << "NegativePublicState: stage " << t << " error index " << j << " gives "
                   << chain.public_state(t, j);
                out.push_back({ViolationKind::NegativePublicState, os.str(), t, j});
            }
        }
    }
    return out;
}

std::vector<Violation> check_game(const GameG1& game) {
    auto out = check_chain(game.chain);
    const int n = game.num_users();
    if (n < 1) {
        out.push_back({ViolationKind::BadShape, "at least one user is required"});
    }
    const auto& p = game.pricing;
    if (!(p.alpha > 0.0 && p.beta > 0.0 && p.gamma1 > 0.0 && p.gamma2 > 0.0)) {
        out.push_back({ViolationKind::BadPricing, "pricing coefficients must be strictly positive"});
    }
    for (int i = 0; i < n; ++i) {
        const auto& u = game.users[i];
        if (u.d_max < 0 || u.b_max < 0 || u.c_max < 0) {
            std::ostringstream os;
            os << "user " << i << " has a negative cap";
            out.push_back({ViolationKind::CapViolation, os.str(), -1, i});
            continue;
        }
        if (u.c_max < u.b_max + u.d_max) {
            std::ostringstream os;
            os << "CapViolation: user " << i << " has c_max " << u.c_max << " < b_max + d_max = "
               << u.b_max + u.d_max;
            out.push_back({ViolationKind::CapViolation, os.str(), -1, i});
        }
        if (static_cast<int>(u.utility.size()) != u.c_max + 1) {
            std::ostringstream os;
            os << "user " << i << " utility table has " << u.utility.size() << " entries, expected "
               << u.c_max + 1;
            out.push_back({ViolationKind::BadUtility, os.str(), -1, i});
        } else {
            for (int c = 1; c <= u.c_max; ++c) {
                if (u.utility[c] < u.utility[c - 1]) {
                    std::ostringstream os;
                    os << "user " << i << " utility table decreases at consumption " << c;
                    out.push_back({ViolationKind::BadUtility, os.str(), -1, i});
                    break;
                }
            }
        }
        if (u.theta && !(*u.theta > 0.0)) {
            std::ostringstream os;
            os << "user " << i << " theta must be positive";
            out.push_back({ViolationKind::BadUtility, os.str(), -1, i});
        }
    }
    if (!game.initial_storage.empty() && static_cast<int>(game.initial_storage.size()) != n) {
        out.push_back({ViolationKind::BadInitialStorage, "initial_storage length differs from user count"});
    } else {
        for (int i = 0; i < static_cast<int>(game.initial_storage.size()); ++i) {
            const int b = game.initial_storage[i];
            if (b < 0 || b > game.users[i].b_max) {
                std::ostringstream os;
                os << "BadInitialStorage: user " << i << " starts at " << b;
                out.push_back({ViolationKind::BadInitialStorage, os.str(), -1, i});
            }
        }
    }
    return out;
}

const GameG1& validate_game(const GameG1& game) {
    auto violations = check_game(game);
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return game;
}

GameG2 build_reduced_game(const GameG1& game) {
    validate_game(game);
    GameG2 reduced;
    reduced.chain = game.chain;
    reduced.pricing = game.pricing;
    reduced.theta.reserve(game.users.size());
    reduced.d_max.reserve(game.users.size());
    for (std::size_t i = 0; i < game.users.size(); ++i) {
        const auto& u = game.users[i];
        if (!u.theta) {
            throw ValidationError({{ViolationKind::BadUtility,
                                    "demand reduction requires linear utility (user " +
                                        std::to_string(i) + " has a tabulated utility)",
                                    -1, static_cast<int>(i)}});
        }
        reduced.theta.push_back(*u.theta);
        reduced.d_max.push_back(u.d_max);
    }
    return reduced;
}

std::vector<Eigen::VectorXd> chain_marginals(const ForecastChain& chain) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(chain.horizon());
    Eigen::RowVectorXd current = chain.initial_dist.transpose();
    for (int t = 0; t < chain.horizon(); ++t) {
        out.emplace_back(current.transpose());
        if (t + 1 < chain.horizon()) {
            current = current * chain.step(t);
        }
    }
    return out;
}

std::vector<Eigen::MatrixXd> reach_matrices(const ForecastChain& chain) {
    const int m = chain.num_errors();
    std::vector<Eigen::MatrixXd> out;
    out.reserve(chain.horizon());
    Eigen::MatrixXd current = Eigen::MatrixXd::Identity(m, m);
    for (int t = 0; t < chain.horizon(); ++t) {
        out.push_back(current);
        if (t + 1 < chain.horizon()) {
            current = current * chain.step(t);
        }
    }
    return out;
}

std::vector<int> initial_error_indices(const ForecastChain& chain) {
    std::vector<int> out;
    for (int j = 0; j < chain.num_errors(); ++j) {
        if (chain.initial_dist[j] > 0.0) out.push_back(j);
    }
    return out;
}

ForecastChain uniform_initial(ForecastChain chain) {
    const int m = chain.num_errors();
    chain.initial_dist = Eigen::VectorXd::Constant(m, 1.0 / m);
    return chain;
}

} // namespace gridstack
