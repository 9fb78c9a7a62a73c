#include <doctest.h>

#include "gridstack/core_model.hpp"
#include "gridstack/fixtures.hpp"

using namespace gridstack;

TEST_CASE("example 2 game is valid") {
    const auto game = fixtures::example2();
    CHECK(check_game(game).empty());
    CHECK_NOTHROW(validate_game(game));
    CHECK(&validate_game(game) == &game);
}

TEST_CASE("consumption cap below storage plus demand is rejected") {
    auto game = fixtures::example2();
    game.users[1] = UserSpec::linear(1.0, 4, 5, 2);
    try {
        validate_game(game);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ViolationKind::CapViolation));
        REQUIRE(e.violations().size() == 1);
        CHECK(e.violations()[0].index == 1);
    }
}

TEST_CASE("row summing to 1.1 is rejected") {
    auto game = fixtures::example2();
    Eigen::MatrixXd q = fixtures::solar_transition();
    q.row(0) << 0.5, 0.6, 0.0;
    game.chain.transition = {q};
    const auto v = check_game(game);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::RowNotStochastic);
    CHECK(v[0].index == 0);
}

TEST_CASE("every violation is reported") {
    auto game = fixtures::example2();
    game.chain.predicted[2] = 1.0;  // 1 + (-2) < 0
    game.users[0] = UserSpec::linear(0.9, 4, 5, 2);
    game.initial_storage = {0, 3, 0};
    try {
        validate_game(game);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.has(ViolationKind::NegativePublicState));
        CHECK(e.has(ViolationKind::CapViolation));
        CHECK(e.has(ViolationKind::BadInitialStorage));
    }
}

TEST_CASE("initial distribution must be a probability vector") {
    auto game = fixtures::example2();
    game.chain.initial_dist = Eigen::Vector3d(0.5, 0.5, 0.5);
    bool found = false;
    for (const auto& v : check_game(game)) found |= v.kind == ViolationKind::BadInitialDist;
    CHECK(found);
}

TEST_CASE("reduced game cell counts") {
    const auto g1 = fixtures::example1();
    CHECK(build_reduced_game(g1).num_cells() == 21);

    const auto g2 = build_reduced_game(fixtures::example2());
    CHECK(g2.num_cells() == 9);
    CHECK(g2.num_users() == 3);
    for (int d : g2.d_max) CHECK(d == 4);

    GameG1 tiny;
    tiny.chain.predicted = {3.0};
    tiny.chain.error_support = {0.0};
    tiny.chain.transition = {Eigen::MatrixXd::Identity(1, 1)};
    tiny.chain.initial_dist = Eigen::VectorXd::Ones(1);
    tiny.users = {UserSpec::linear(1.0, 2, 2, 0)};
    tiny.initial_storage = {0};
    CHECK(build_reduced_game(tiny).num_cells() == 1);
}

TEST_CASE("reduced game shares chain and pricing and is reproducible") {
    const auto g1 = fixtures::example2();
    const auto a = build_reduced_game(g1);
    const auto b = build_reduced_game(g1);
    CHECK(a.theta == b.theta);
    CHECK(a.d_max == b.d_max);
    CHECK(a.chain.predicted == g1.chain.predicted);
    CHECK(a.chain.error_support == b.chain.error_support);
    CHECK(a.chain.step(0) == g1.chain.step(0));
    CHECK(a.pricing.alpha == g1.pricing.alpha);
    CHECK(a.pricing.beta == g1.pricing.beta);
    CHECK(a.theta == std::vector<double>{0.9, 1.0, 1.1});
}

TEST_CASE("reduced game needs linear utility") {
    CHECK_THROWS_AS(build_reduced_game(fixtures::example4()), ValidationError);
}

TEST_CASE("marginals under the identity stay put") {
    ForecastChain chain;
    chain.predicted = {1, 1, 1, 1};
    chain.error_support = {0, 0.1, 0.2};
    chain.transition = {Eigen::MatrixXd::Identity(3, 3)};
    chain.initial_dist = Eigen::Vector3d(1, 0, 0);
    for (const auto& m : chain_marginals(chain)) CHECK(m.isApprox(Eigen::Vector3d(1, 0, 0)));
}

TEST_CASE("second-stage marginal from the middle state") {
    auto chain = fixtures::example2().chain;
    chain.initial_dist = Eigen::Vector3d(0, 1, 0);
    const auto m = chain_marginals(chain);
    REQUIRE(m.size() == 3);
    CHECK(m[1][0] == doctest::Approx(1.0 / 4).epsilon(1e-15));
    CHECK(m[1][1] == doctest::Approx(7.0 / 16).epsilon(1e-15));
    CHECK(m[1][2] == doctest::Approx(5.0 / 16).epsilon(1e-15));
}

TEST_CASE("two-step marginals against a hand multiply") {
    const auto chain = fixtures::example2().chain;
    const auto m = chain_marginals(chain);
    const Eigen::MatrixXd q = fixtures::solar_transition();
    for (int k = 0; k < 3; ++k) {
        double expected = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) expected += (1.0 / 3.0) * q(a, b) * q(b, k);
        }
        CHECK(m[2][k] == doctest::Approx(expected).epsilon(1e-14));
    }
    for (const auto& v : m) CHECK(v.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("reach matrices start at the identity and stay stochastic") {
    const auto reach = reach_matrices(fixtures::example1().chain);
    REQUIRE(reach.size() == 7);
    CHECK(reach[0].isApprox(Eigen::MatrixXd::Identity(3, 3)));
    for (const auto& r : reach) {
        for (int row = 0; row < 3; ++row) CHECK(r.row(row).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("initial error indices follow the support of the initial distribution") {
    CHECK(initial_error_indices(fixtures::example4().chain) == std::vector<int>{1});
    CHECK(initial_error_indices(fixtures::example2().chain) == std::vector<int>{0, 1, 2});
    const auto u = uniform_initial(fixtures::example4().chain);
    CHECK(initial_error_indices(u) == std::vector<int>{0, 1, 2});
}

TEST_CASE("linear and tabulated users") {
    const auto lin = UserSpec::linear(1.5, 4, 6, 2);
    CHECK(lin.utility.size() == 7);
    CHECK(lin.utility_of(3) == doctest::Approx(4.5));
    const auto tab = UserSpec::tabulated({0.0, 0.9, 1.8, 1.8, 1.8}, 3, 1);
    CHECK(tab.c_max == 4);
    CHECK_FALSE(tab.theta.has_value());
}
