#include "gridstack/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gridstack {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& field) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ConfigError(field, "missing required field");
    }
    return obj.at(key);
}

int parse_int(const json& value, const std::string& field) {
    if (!value.is_number_integer()) {
        throw ConfigError(field, "expected an integer");
    }
    return value.get<int>();
}

std::vector<double> parse_vector(const json& value, const std::string& field) {
    if (!value.is_array()) throw ConfigError(field, "expected an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < value.size(); ++k) {
        out.push_back(parse_number(value[k], field + "[" + std::to_string(k) + "]"));
    }
    return out;
}

Eigen::MatrixXd parse_matrix(const json& value, const std::string& field) {
    if (!value.is_array() || value.empty()) throw ConfigError(field, "expected a non-empty matrix");
    const auto rows = value.size();
    const auto cols = value[0].is_array() ? value[0].size() : 0;
    Eigen::MatrixXd out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = parse_vector(value[r], field + "[" + std::to_string(r) + "]");
        if (row.size() != cols) throw ConfigError(field, "rows have different lengths");
        for (std::size_t c = 0; c < cols; ++c) out(r, c) = row[c];
    }
    return out;
}

double positive(const json& obj, const std::string& key, const std::string& field) {
    const double v = parse_number(require(obj, key, field + "." + key), field + "." + key);
    if (!(v > 0.0)) throw ConfigError(field + "." + key, "must be strictly positive");
    return v;
}

UserSpec parse_user(const json& u, const std::string& field, const json* shared) {
    auto cap = [&](const char* key) {
        if (u.is_object() && u.contains(key)) return parse_int(u.at(key), field + "." + key);
        if (shared && shared->contains(key)) return parse_int(shared->at(key), std::string(key));
        throw ConfigError(field + "." + key, "missing required field");
    };
    const int d_max = cap("d_max");
    const int b_max = cap("b_max");
    if (u.is_object() && u.contains("utility")) {
        return UserSpec::tabulated(parse_vector(u.at("utility"), field + ".utility"), d_max, b_max);
    }
    const json& theta_json = u.is_object() ? require(u, "theta", field + ".theta") : u;
    const double theta = parse_number(theta_json, field + ".theta");
    return UserSpec::linear(theta, d_max, cap("c_max"), b_max);
}

std::string field_of(const Violation& v) {
    switch (v.kind) {
    case ViolationKind::RowNotStochastic:
        return "transition[" + std::to_string(v.stage) + "][" + std::to_string(v.index) + "]";
    case ViolationKind::BadInitialDist:
        return "initial_dist";
    case ViolationKind::CapViolation:
    case ViolationKind::BadUtility:
        return v.index >= 0 ? "users[" + std::to_string(v.index) + "]" : "users";
    case ViolationKind::NegativePublicState:
        return "predicted";
    case ViolationKind::BadInitialStorage:
        return "initial_storage";
    case ViolationKind::BadPricing:
        return "pricing";
    case ViolationKind::BadShape:
        return "game";
    }
    return "game";
}

} // namespace

double parse_number(const json& value, const std::string& field) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        const auto text = value.get<std::string>();
        try {
            std::size_t used = 0;
            const auto slash = text.find('/');
            if (slash == std::string::npos) {
                const double v = std::stod(text, &used);
                if (used == text.size()) return v;
            } else {
                const auto num = text.substr(0, slash);
                const auto den = text.substr(slash + 1);
                std::size_t used_den = 0;
                const double a = std::stod(num, &used);
                const double b = std::stod(den, &used_den);
                if (used == num.size() && used_den == den.size() && b != 0.0) return a / b;
            }
        } catch (const std::exception&) {
        }
        throw ConfigError(field, "cannot parse number '" + text + "'");
    }
    throw ConfigError(field, "expected a number or rational string");
}

GameConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
    GameConfig cfg;
    auto& game = cfg.game;
    auto& chain = game.chain;
    chain.predicted = parse_vector(require(doc, "predicted", "predicted"), "predicted");
    chain.error_support = parse_vector(require(doc, "error_support", "error_support"), "error_support");
    const int m = static_cast<int>(chain.error_support.size());

    const json& trans = require(doc, "transition", "transition");
    if (!trans.is_array() || trans.empty() || !trans[0].is_array() || trans[0].empty()) {
        throw ConfigError("transition", "expected a matrix or a list of matrices");
    }
    if (trans[0][0].is_array()) {
        for (std::size_t t = 0; t < trans.size(); ++t) {
            chain.transition.push_back(parse_matrix(trans[t], "transition[" + std::to_string(t) + "]"));
        }
    } else {
        chain.transition.push_back(parse_matrix(trans, "transition"));
    }

    if (doc.contains("initial_dist")) {
        const auto dist = parse_vector(doc.at("initial_dist"), "initial_dist");
        chain.initial_dist = Eigen::Map<const Eigen::VectorXd>(dist.data(), static_cast<Eigen::Index>(dist.size()));
    } else {
        chain.initial_dist = Eigen::VectorXd::Constant(m, 1.0 / std::max(m, 1));
    }

    const json& pricing = require(doc, "pricing", "pricing");
    game.pricing = {positive(pricing, "alpha", "pricing"), positive(pricing, "beta", "pricing"),
                    positive(pricing, "gamma1", "pricing"), positive(pricing, "gamma2", "pricing")};

    if (doc.contains("users")) {
        const json& users = doc.at("users");
        if (!users.is_array() || users.empty()) throw ConfigError("users", "expected a non-empty array");
        for (std::size_t i = 0; i < users.size(); ++i) {
            game.users.push_back(parse_user(users[i], "users[" + std::to_string(i) + "]", &doc));
        }
    } else if (doc.contains("thetas")) {
        const json& thetas = doc.at("thetas");
        if (!thetas.is_array() || thetas.empty()) throw ConfigError("thetas", "expected a non-empty array");
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            game.users.push_back(parse_user(thetas[i], "thetas[" + std::to_string(i) + "]", &doc));
        }
    } else {
        throw ConfigError("users", "missing required field (or shorthand 'thetas')");
    }

    if (doc.contains("initial_storage")) {
        const json& s = doc.at("initial_storage");
        if (!s.is_array()) throw ConfigError("initial_storage", "expected an array");
        for (std::size_t i = 0; i < s.size(); ++i) {
            game.initial_storage.push_back(parse_int(s[i], "initial_storage[" + std::to_string(i) + "]"));
        }
    } else {
        game.initial_storage.assign(game.users.size(), 0);
    }

    if (doc.contains("leader")) {
        const json& l = doc.at("leader");
        cfg.leader = LeaderParams{positive(l, "unit_cost", "leader"), positive(l, "penalty_weight", "leader"),
                                  parse_number(require(l, "target", "leader.target"), "leader.target")};
    }
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        PricingGrid grid;
        grid.alpha_values = parse_vector(require(g, "alpha", "grid.alpha"), "grid.alpha");
        grid.beta_values = parse_vector(require(g, "beta", "grid.beta"), "grid.beta");
        if (grid.alpha_values.empty()) throw ConfigError("grid.alpha", "must not be empty");
        if (grid.beta_values.empty()) throw ConfigError("grid.beta", "must not be empty");
        for (double a : grid.alpha_values) {
            if (!(a > 0.0)) throw ConfigError("grid.alpha", "values must be strictly positive");
        }
        for (double b : grid.beta_values) {
            if (!(b > 0.0)) throw ConfigError("grid.beta", "values must be strictly positive");
        }
        grid.gamma1 = game.pricing.gamma1;
        grid.gamma2 = game.pricing.gamma2;
        if (cfg.leader) grid.leader = *cfg.leader;
        cfg.grid = grid;
    }

    const auto violations = check_game(game);
    if (!violations.empty()) {
        throw ConfigError(field_of(violations.front()), violations.front().message);
    }
    return cfg;
}

GameConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(doc);
}

json chain_to_json(const ForecastChain& chain) {
    json out;
    out["predicted"] = chain.predicted;
    out["error_support"] = chain.error_support;
    json matrices = json::array();
    for (const auto& q : chain.transition) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < q.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < q.cols(); ++c) row.push_back(q(r, c));
            rows.push_back(row);
        }
        matrices.push_back(rows);
    }
    out["transition"] = matrices.size() == 1 ? matrices[0] : matrices;
    out["initial_dist"] = std::vector<double>(chain.initial_dist.data(),
                                              chain.initial_dist.data() + chain.initial_dist.size());
    return out;
}

json config_to_json(const GameConfig& config) {
    const auto& game = config.game;
    json out = chain_to_json(game.chain);
    out["pricing"] = {{"alpha", game.pricing.alpha},
                      {"beta", game.pricing.beta},
                      {"gamma1", game.pricing.gamma1},
                      {"gamma2", game.pricing.gamma2}};
    json users = json::array();
    for (const auto& u : game.users) {
        json ju = {{"d_max", u.d_max}, {"b_max", u.b_max}};
        if (u.theta) {
            ju["theta"] = *u.theta;
            ju["c_max"] = u.c_max;
        } else {
            ju["utility"] = u.utility;
        }
        users.push_back(ju);
    }
    out["users"] = users;
    out["initial_storage"] = game.initial_storage;
    if (config.leader) {
        out["leader"] = {{"unit_cost", config.leader->unit_cost},
                         {"penalty_weight", config.leader->penalty_weight},
                         {"target", config.leader->target}};
    }
    if (config.grid) {
        out["grid"] = {{"alpha", config.grid->alpha_values}, {"beta", config.grid->beta_values}};
    }
    return out;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

} // namespace gridstack
