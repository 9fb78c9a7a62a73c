#include "gridstack/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridstack/analysis.hpp"
#include "gridstack/data_ingest.hpp"
#include "gridstack/fixtures.hpp"
#include "gridstack/fp_learner.hpp"
#include "gridstack/io.hpp"
#include "gridstack/mdp.hpp"
#include "gridstack/mpg_solver.hpp"
#include "gridstack/payoff.hpp"
#include "gridstack/pricing.hpp"

namespace gridstack::cli {

namespace {

using nlohmann::json;

#ifndef GRIDSTACK_VERSION
#define GRIDSTACK_VERSION "0.0.0"
#endif

struct Options {
    std::string config;
    std::string out = "out";
    std::uint64_t seed = 0;
    int kmax = 10000;
    int iters = 2000;
    int eval_every = 50;
    std::size_t cap = kDefaultStateCap;
    std::string name;
    std::string data;
    double scale = 1.0;
    std::vector<double> support;
};

/// Thrown when a solver finishes without a usable result; outputs already
/// written stay in place.
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json matrix_json(const Eigen::MatrixXi& m) { return matrix_json(Eigen::MatrixXd(m.cast<double>())); }

json vector_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

class Output {
public:
    explicit Output(std::string dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    std::string path(const std::string& file) const { return (std::filesystem::path(dir_) / file).string(); }
    void json_file(const std::string& file, const json& doc) const { write_text(path(file), doc.dump(2) + "\n"); }
    void text_file(const std::string& file, const std::string& text) const { write_text(path(file), text); }

    void manifest(const std::string& command, const json& config, std::uint64_t seed) const {
        json m;
        m["command"] = command;
        m["config_hash"] = fnv1a_hex(config.dump());
        m["seed"] = seed;
        m["version"] = GRIDSTACK_VERSION;
        json_file("manifest.json", m);
    }

private:
    std::string dir_;
};

json pure_profile_json(const PureProfile& profile) {
    json out = json::array();
    for (const auto& p : profile) out.push_back(matrix_json(p));
    return out;
}

json pms_json(const PMSProfile& profile) {
    json users = json::array();
    for (const auto& policy : profile) {
        json stages = json::array();
        for (int t = 0; t < policy.horizon(); ++t) {
            json errors = json::array();
            for (int j = 0; j < policy.num_errors(); ++j) {
                json storages = json::array();
                for (int b = 0; b <= policy.b_max(); ++b) {
                    json dist = json::array();
                    const auto& p = policy.at(t, j, b);
                    for (Eigen::Index a = 0; a < p.size(); ++a) {
                        if (p[a] <= 0.0) continue;
                        const auto& act = policy.actions(b)[a];
                        dist.push_back({{"d", act.demand}, {"c", act.consumption}, {"p", p[a]}});
                    }
                    storages.push_back(dist);
                }
                errors.push_back(storages);
            }
            stages.push_back(errors);
        }
        users.push_back(stages);
    }
    return users;
}

std::string fip_trace_csv(const EquilibriumResult& eq) {
    std::ostringstream os;
    os << "iteration,user,delta,potential\n";
    for (const auto& row : eq.trace) {
        os << row.iteration << ',' << row.user << ',' << num(row.max_improvement) << ','
           << num(row.potential) << '\n';
    }
    return os.str();
}

json equilibrium_json(const EquilibriumResult& eq, const GameG2& reduced) {
    const auto cert = max_deviation_gain(eq.policies, reduced);
    json doc;
    doc["converged"] = eq.converged;
    doc["iterations"] = eq.iterations;
    doc["demand"] = pure_profile_json(eq.policies);
    doc["aggregate_demand"] = matrix_json(aggregate_demand(eq.policies));
    doc["per_state_values"] = matrix_json(eq.per_state_values);
    doc["potential_per_state"] = vector_json(eq.potential_per_state);
    doc["weighted_potential"] = weighted_potential(eq.policies, reduced);
    doc["certificate"] = {{"max_gain", cert.max_gain}, {"deviations_checked", cert.deviations_checked}};
    return doc;
}

int run_solve(const GameConfig& cfg, const Options& opt, std::ostream& out, const Output& dir,
              json* extra = nullptr) {
    const GameG2 reduced = build_reduced_game(cfg.game);
    const auto eq = fip_solve(reduced, zero_profile(reduced), opt.kmax);
    json doc = equilibrium_json(eq, reduced);
    if (extra) doc.update(*extra);
    dir.json_file("equilibrium.json", doc);
    dir.text_file("trace.csv", fip_trace_csv(eq));
    out << json{{"command", "solve"},
                {"converged", eq.converged},
                {"iterations", eq.iterations},
                {"certificate_max_gain", doc["certificate"]["max_gain"]}}
               .dump()
        << '\n';
    if (!eq.converged) throw SolverFailure("no equilibrium within " + std::to_string(opt.kmax) + " iterations");
    return kOk;
}

int run_learn(const GameConfig& cfg, const Options& opt, std::ostream& out, const Output& dir) {
    FPOptions fp;
    fp.iterations = opt.iters;
    fp.seed = opt.seed;
    fp.eval_every = opt.eval_every;
    fp.cap = opt.cap;
    const auto result = fp_mdp_solve(cfg.game, fp);
    std::ostringstream csv;
    csv << "iteration,nashconv";
    for (int i = 0; i < cfg.game.num_users(); ++i) csv << ",policy_change_" << i;
    csv << '\n';
    for (const auto& row : result.trace) {
        csv << row.iteration << ',' << num(row.nashconv);
        for (double c : row.policy_change) csv << ',' << num(c);
        csv << '\n';
    }
    dir.text_file("nashconv.csv", csv.str());
    const double final_nc = result.trace.back().nashconv;
    dir.json_file("learn.json", {{"iterations", opt.iters},
                                 {"eval_every", opt.eval_every},
                                 {"initial_nashconv", result.trace.front().nashconv},
                                 {"final_nashconv", final_nc},
                                 {"policy", pms_json(result.profile)}});
    out << json{{"command", "learn"},
                {"initial_nashconv", result.trace.front().nashconv},
                {"final_nashconv", final_nc}}
               .dump()
        << '\n';
    return kOk;
}

json pricing_json(const PricingResult& result) {
    json cells = json::array();
    for (const auto& c : result.cells) {
        cells.push_back({{"alpha", c.alpha},
                         {"beta", c.beta},
                         {"payoff", c.payoff},
                         {"converged", c.converged},
                         {"iterations", c.iterations},
                         {"aggregate_demand", matrix_json(c.aggregate_demand)}});
    }
    json rows = json::array();
    const auto argmax = row_argmax_beta(result);
    for (int a = 0; a < result.num_alpha; ++a) {
        rows.push_back({{"alpha", result.at(a, 0).alpha},
                        {"best_beta", argmax[a] >= 0 ? json(result.at(a, argmax[a]).beta) : json()}});
    }
    json doc;
    doc["cells"] = cells;
    doc["row_best_beta"] = rows;
    if (result.best >= 0) {
        doc["best"] = {{"alpha", result.winner().alpha},
                       {"beta", result.winner().beta},
                       {"payoff", result.winner().payoff}};
    }
    doc["note"] = "each cell solves the follower game from the all-zero demand profile; "
                  "the leader payoff depends on which follower equilibrium is reached";
    return doc;
}

std::string pricing_csv(const PricingResult& result) {
    std::ostringstream os;
    os << "alpha,beta,U,converged\n";
    for (const auto& c : result.cells) {
        os << num(c.alpha) << ',' << num(c.beta) << ',' << num(c.payoff) << ','
           << (c.converged ? "true" : "false") << '\n';
    }
    return os.str();
}

PricingResult run_grid(const GameG1& game, const PricingGrid& grid, const Options& opt,
                       const Output& dir, json* doc_out = nullptr) {
    const auto result = grid_search_pricing(game, grid, opt.kmax);
    json doc = pricing_json(result);
    if (doc_out) {
        doc.update(*doc_out);
        *doc_out = doc;
    }
    dir.json_file("pricing.json", doc);
    dir.text_file("pricing.csv", pricing_csv(result));
    return result;
}

int run_price(const GameConfig& cfg, const Options& opt, std::ostream& out, const Output& dir) {
    if (!cfg.leader) throw ConfigError("leader", "required by the price command");
    if (!cfg.grid) throw ConfigError("grid", "required by the price command");
    const auto result = run_grid(cfg.game, *cfg.grid, opt, dir);
    json summary{{"command", "price"}};
    if (result.best >= 0) {
        summary["best_alpha"] = result.winner().alpha;
        summary["best_beta"] = result.winner().beta;
        summary["best_payoff"] = result.winner().payoff;
    }
    out << summary.dump() << '\n';
    if (result.best < 0) throw SolverFailure("no grid cell converged");
    return kOk;
}

int run_estimate(const Options& opt, std::ostream& out, const Output& dir) {
    if (opt.data.empty()) throw ConfigError("--data", "a generation CSV is required");
    if (opt.support.empty()) throw ConfigError("--support", "at least one level is required");
    if (!(opt.scale > 0.0)) throw ConfigError("--scale", "must be strictly positive");
    const auto records = read_generation_csv(opt.data);
    const auto est = estimate_forecast_and_chain(records, opt.scale, opt.support);
    json doc = chain_to_json(est.chain);
    doc["unvisited_rows"] = est.unvisited_rows;
    dir.json_file("chain.json", doc);
    out << json{{"command", "estimate"}, {"horizon", est.chain.horizon()}, {"unvisited_rows", est.unvisited_rows}}
               .dump()
        << '\n';
    return kOk;
}

int run_verify(const GameConfig& cfg, const Options& opt, std::ostream& out, const Output& dir) {
    json doc;
    const GameG2 reduced = build_reduced_game(cfg.game);
    doc["potential_discrepancy"] = verify_potential_property(reduced, 1000, opt.seed);
    const auto eq = fip_solve(reduced, zero_profile(reduced), opt.kmax);
    doc["fip_converged"] = eq.converged;
    doc["fip_iterations"] = eq.iterations;
    doc["certificate_max_gain"] = max_deviation_gain(eq.policies, reduced).max_gain;
    dir.json_file("verify.json", doc);
    doc["lifted_nashconv"] = nashconv(lift_to_pme(eq.policies, cfg.game), cfg.game, opt.cap);
    dir.json_file("verify.json", doc);
    out << json{{"command", "verify"},
                {"potential_discrepancy", doc["potential_discrepancy"]},
                {"fip_converged", eq.converged},
                {"lifted_nashconv", doc["lifted_nashconv"]}}
               .dump()
        << '\n';
    if (!eq.converged) throw SolverFailure("equilibrium search did not converge");
    return kOk;
}

int repro_example1(const Options& opt, std::ostream& out, const Output& dir) {
    const GameG1 game = fixtures::example1();
    const GameG2 reduced = build_reduced_game(game);
    const auto eq = fip_solve(reduced, zero_profile(reduced), opt.kmax);
    // Published rows: stage 1 at e = 70 (error +20), stage 3 at e = 90 (error 0).
    auto compare = [&](int t, int j, const std::vector<int>& published) {
        json mismatches = json::array();
        int ours_total = 0;
        int published_total = 0;
        for (int i = 0; i < game.num_users(); ++i) {
            ours_total += eq.policies[i](t, j);
            published_total += published[i];
            if (eq.policies[i](t, j) != published[i]) {
                mismatches.push_back({{"user", i}, {"ours", eq.policies[i](t, j)}, {"published", published[i]}});
            }
        }
        return json{{"stage", t + 1},
                    {"public_state", game.chain.public_state(t, j)},
                    {"mismatches", mismatches},
                    {"aggregate_ours", ours_total},
                    {"aggregate_published", published_total}};
    };
    json doc = equilibrium_json(eq, reduced);
    doc["published_comparison"] = {compare(0, 0, fixtures::published_demand_t1_e70()),
                                   compare(2, 1, fixtures::published_demand_t3_e90())};
    dir.json_file("equilibrium.json", doc);
    dir.text_file("trace.csv", fip_trace_csv(eq));
    out << json{{"command", "repro example1"},
                {"converged", eq.converged},
                {"iterations", eq.iterations},
                {"certificate_max_gain", doc["certificate"]["max_gain"]},
                {"published_mismatches",
                 {doc["published_comparison"][0]["mismatches"].size(),
                  doc["published_comparison"][1]["mismatches"].size()}}}
               .dump()
        << '\n';
    if (!eq.converged) throw SolverFailure("equilibrium search did not converge");
    return kOk;
}

int repro_example3(const Options& opt, std::ostream& out, const Output& dir) {
    const auto grid = fixtures::example3_grid();
    json extra = json::object();
    const auto result = run_grid(fixtures::example1(), grid, opt, dir, &extra);
    const auto argmax = row_argmax_beta(result);
    const std::vector<double> expected_rows{21, 20, 19};
    json discrepancies = json::array();
    for (int a = 0; a < result.num_alpha; ++a) {
        const double got = argmax[a] >= 0 ? result.at(a, argmax[a]).beta : -1.0;
        if (got != expected_rows[a]) {
            discrepancies.push_back({{"alpha", result.at(a, 0).alpha}, {"best_beta", got}, {"published", expected_rows[a]}});
        }
    }
    const bool winner_ok = result.best >= 0 && result.winner().alpha == 21 && result.winner().beta == 19;
    if (!winner_ok) {
        discrepancies.push_back({{"published_winner", {21, 19}},
                                 {"winner", result.best >= 0 ? json{result.winner().alpha, result.winner().beta}
                                                             : json()}});
    }
    extra["published_discrepancies"] = discrepancies;
    extra["matches_published"] = discrepancies.empty();
    dir.json_file("pricing.json", extra);
    out << json{{"command", "repro example3"},
                {"best_alpha", result.best >= 0 ? json(result.winner().alpha) : json()},
                {"best_beta", result.best >= 0 ? json(result.winner().beta) : json()},
                {"matches_published", discrepancies.empty()}}
               .dump()
        << '\n';
    if (result.best < 0) throw SolverFailure("no grid cell converged");
    return kOk;
}

int repro_example4(std::ostream& out, const Output& dir) {
    const GameG1 game = fixtures::example4();
    std::vector<UserPolicy> storage;
    std::vector<std::vector<UserPolicy>> families;
    for (int i = 0; i < game.num_users(); ++i) {
        storage.push_back(fixtures::example4_storage_strategy(game, i));
        families.push_back(non_storage_family(game.users[i], game.chain, fixtures::kExample4Levels));
    }
    const auto report = check_storage_dominance(game, storage, families);
    json doc{{"condition_c1_holds", report.condition_c1_holds},
             {"dominated_per_user", report.dominated_per_user},
             {"dominated_strategy_count", report.dominated_strategy_count},
             {"family_size_per_user", families.front().size()},
             {"comparisons", report.comparisons},
             {"min_gap", report.min_gap}};
    if (report.counterexample) {
        const auto& c = *report.counterexample;
        doc["counterexample"] = {{"user", c.user},
                                 {"strategy", c.strategy},
                                 {"opponent_strategies", c.opponent_strategies},
                                 {"initial_error", c.initial_error},
                                 {"gap", c.gap}};
    }
    dir.json_file("dominance.json", doc);
    out << json{{"command", "repro example4"},
                {"condition_c1_holds", report.condition_c1_holds},
                {"dominated_strategy_count", report.dominated_strategy_count},
                {"min_gap", report.min_gap}}
               .dump()
        << '\n';
    return kOk;
}

GameConfig fixture_config(const std::string& name) {
    GameConfig cfg;
    if (name == "example1" || name == "example3") {
        cfg.game = fixtures::example1();
        if (name == "example3") {
            const auto grid = fixtures::example3_grid();
            cfg.leader = grid.leader;
            cfg.grid = grid;
        }
    } else if (name == "example2") {
        cfg.game = fixtures::example2();
    } else {
        cfg.game = fixtures::example4();
    }
    return cfg;
}

int run_repro(const Options& opt, std::ostream& out, const Output& dir) {
    const GameConfig cfg = fixture_config(opt.name);
    const json config = config_to_json(cfg);
    dir.json_file("config.json", config);
    dir.manifest("repro " + opt.name, config, opt.seed);
    if (opt.name == "example1") return repro_example1(opt, out, dir);
    if (opt.name == "example2") return run_learn(cfg, opt, out, dir);
    if (opt.name == "example3") return repro_example3(opt, out, dir);
    return repro_example4(out, dir);
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equilibrium and pricing toolkit for storage-aware demand response games", "gridstack"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", GRIDSTACK_VERSION);
    Options opt;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "Game config (JSON)")->required()->check(CLI::ExistingFile);
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", opt.out, "Output directory"); };
    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", opt.seed, "Random seed"); };
    auto add_kmax = [&](CLI::App* sub) {
        sub->add_option("--kmax", opt.kmax, "Iteration budget of the equilibrium search")->check(CLI::PositiveNumber);
    };
    auto add_cap = [&](CLI::App* sub) {
        sub->add_option("--cap", opt.cap, "Joint state cap for exact best responses")->check(CLI::PositiveNumber);
    };
    auto add_learn = [&](CLI::App* sub) {
        sub->add_option("--iters", opt.iters, "Fictitious play iterations")->check(CLI::PositiveNumber);
        sub->add_option("--eval-every", opt.eval_every, "NashConv evaluation period")->check(CLI::PositiveNumber);
    };

    auto* solve = app.add_subcommand("solve", "Pure equilibrium of the reduced game and its lift");
    add_config(solve), add_out(solve), add_seed(solve), add_kmax(solve);
    auto* learn = app.add_subcommand("learn", "Fictitious play over best-response MDPs");
    add_config(learn), add_out(learn), add_seed(learn), add_learn(learn), add_cap(learn);
    auto* price = app.add_subcommand("price", "Leader grid search over alpha and beta");
    add_config(price), add_out(price), add_seed(price), add_kmax(price);
    auto* estimate = app.add_subcommand("estimate", "Forecast and error chain from a generation panel");
    estimate->add_option("--data", opt.data, "CSV with header month,day,value")->required()->check(CLI::ExistingFile);
    estimate->add_option("--scale", opt.scale, "Multiplier applied to every value");
    estimate->add_option("--support", opt.support, "Error levels")->delimiter(',')->required();
    add_out(estimate), add_seed(estimate);
    auto* verify = app.add_subcommand("verify", "Potential identity, equilibrium certificate and NashConv");
    add_config(verify), add_out(verify), add_seed(verify), add_kmax(verify), add_cap(verify);
    auto* repro = app.add_subcommand("repro", "Run a bundled experiment");
    repro->add_option("name", opt.name, "example1 | example2 | example3 | example4")
        ->required()
        ->check(CLI::IsMember({"example1", "example2", "example3", "example4"}));
    add_out(repro), add_seed(repro), add_kmax(repro), add_learn(repro), add_cap(repro);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kOk;
        err << app.help();
        return kUsage;
    }

    try {
        const Output dir(opt.out);
        if (*estimate) {
            dir.manifest("estimate", json{{"data", opt.data}, {"scale", opt.scale}, {"support", opt.support}}, opt.seed);
            return run_estimate(opt, out, dir);
        }
        if (*repro) return run_repro(opt, out, dir);

        const GameConfig cfg = load_config(opt.config);
        const json config = config_to_json(cfg);
        const auto* sub = app.get_subcommands().front();
        dir.manifest(sub->get_name(), config, opt.seed);
        if (*solve) return run_solve(cfg, opt, out, dir);
        if (*learn) return run_learn(cfg, opt, out, dir);
        if (*price) return run_price(cfg, opt, out, dir);
        return run_verify(cfg, opt, out, dir);
    } catch (const ConfigError& e) {
        err << "invalid config: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const ValidationError& e) {
        err << "invalid config: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const IngestError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const StateSpaceTooLarge& e) {
        err << "state space too large: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << '\n';
        return kSolverFailure;
    }
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

} // namespace gridstack::cli
