#include <doctest.h>

#include <cmath>
#include <set>

#include "mtrl/dp.hpp"
#include "mtrl/environments.hpp"
#include "mtrl/passage.hpp"
#include "mtrl/separability.hpp"

using namespace mtrl;

TEST_CASE("gridworld set invariants") {
    const ModelSet grid = make_gridworld_set();
    CHECK(grid.size() == 4);
    CHECK(grid.num_states() == 16);
    CHECK(grid.num_actions() == 4);
    CHECK_NOTHROW(grid.validate());

    // reward 1 exactly at the corner states, for every action
    const std::set<int> corners = {0, 3, 12, 15};
    for (int s = 0; s < 16; ++s)
        for (int a = 0; a < 4; ++a)
            CHECK(grid.shared_reward().at(s, a) == (corners.count(s) ? 1.0 : 0.0));

    // reward tables bit-equal across models
    for (const auto& m : grid.models) CHECK(m.reward.values == grid.models[0].reward.values);

    // every model communicating
    for (const auto& m : grid.models) CHECK(std::isfinite(diameter(m)));

    CHECK(grid.dtilde == doctest::Approx(7.0));
    REQUIRE(grid.lam.has_value());
    CHECK(std::abs(*grid.lam - 1.2999) <= 5e-4);
}

TEST_CASE("gridworld published distinguishing sets validate") {
    const ModelSet grid = make_gridworld_set();
    const double lam = 1.2999;

    const auto gamma = StateActionSet::from_pairs({{1, 0}, {8, 3}, {2, 1}}, 16, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            bool covered = false;
            for (const auto& [s, a] : gamma.pairs)
                covered |= l1_distance(grid.models[i].kernel.row(s, a),
                                       grid.models[j].kernel.row(s, a)) >= lam;
            CHECK(covered);
        }
    }
}

TEST_CASE("gridworld corner slide and reduced-success rows") {
    const ModelSet grid = make_gridworld_set();
    const MdpModel& m1 = grid.models[0];
    // (0,0) border-facing action stays 0.7 and slides to the opposite cell 0.3
    CHECK(m1.kernel.at(0, kGridActionUp, 0) == doctest::Approx(0.7));
    CHECK(m1.kernel.at(0, kGridActionUp, 4) == doctest::Approx(0.3));
    CHECK(m1.kernel.at(0, kGridActionLeft, 0) == doctest::Approx(0.7));
    CHECK(m1.kernel.at(0, kGridActionLeft, 1) == doctest::Approx(0.3));
    // m1's own corner is easy: (0,1) moving left succeeds at 0.85
    CHECK(m1.kernel.at(1, kGridActionLeft, 0) == doctest::Approx(0.85));
    // in m2 that corner is hard: success drops to 0.2
    CHECK(grid.models[1].kernel.at(1, kGridActionLeft, 0) == doctest::Approx(0.2));
    // actions into (3,3) succeed at 0.3 when hard
    CHECK(m1.kernel.at(11, kGridActionDown, 15) == doctest::Approx(0.3));
    CHECK(grid.models[3].kernel.at(11, kGridActionDown, 15) == doctest::Approx(0.85));
    // edge cell moving off-grid spreads 1/3 over its neighbors
    CHECK(m1.kernel.at(1, kGridActionUp, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(m1.kernel.at(1, kGridActionUp, 2) == doctest::Approx(1.0 / 3.0));
    CHECK(m1.kernel.at(1, kGridActionUp, 5) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("jao generator") {
    // lam = 0 makes every action identical
    ModelSet flat;
    flat.models.push_back(make_jao({4, 0.2, 0.0, 0}));
    flat.models.push_back(make_jao({4, 0.2, 0.0, 2}));
    CHECK(separation_level(flat) == doctest::Approx(0.0));

    CHECK(jao_optimal_average_reward(0.2, 0.4) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const ModelSet pair = make_jao_set(2, 4, 0.2, 0.4);
    CHECK(separation_level(pair) == doctest::Approx(0.4).epsilon(1e-12));
    const auto gamma = pairwise_distinguishing_pairs(pair.models[0], pair.models[1], 0.4);
    REQUIRE(gamma.size() == 2);
    CHECK(gamma.pairs[0] == std::make_pair(0, 0));
    CHECK(gamma.pairs[1] == std::make_pair(0, 1));

    CHECK_THROWS_AS(make_jao({4, 0.9, 0.4, 0}), std::invalid_argument);
}

TEST_CASE("two-jao generator") {
    const ModelSet set = make_two_jao_set(12, 16.0, 10000, 0.5);
    CHECK(set.size() == 12);
    CHECK(set.num_actions() == 24);
    CHECK(separation_level(set) == doctest::Approx(0.5).epsilon(1e-12));

    // slowest ordered pair routes through the hub: 2 -> 0 -> 1, about D/2
    const double d = diameter(set.models[0]);
    CHECK(std::isfinite(d));
    CHECK(d <= 16.0);
    CHECK(d >= 4.0);

    // degenerate: lam = 0 and capital_delta = 0 collapse the family
    ModelSet flat;
    flat.models.push_back(make_two_jao({4, 0.25, 0.0, 0.0, 0}));
    flat.models.push_back(make_two_jao({4, 0.25, 0.0, 0.0, 2}));
    CHECK(separation_level(flat) == doctest::Approx(0.0));
}

TEST_CASE("non-communicating two-jao") {
    const ModelSet set = make_noncommunicating_two_jao_set(6, 16.0, 10000, 0.5);
    CHECK_THROWS_AS(diameter(set.models[0]), InfiniteDiameterError);

    // still separable through the state-2 rows
    CHECK(separation_level(set) == doctest::Approx(0.5).epsilon(1e-12));
    for (int i = 0; i < set.size(); ++i)
        for (int j = i + 1; j < set.size(); ++j) {
            const auto gamma =
                pairwise_distinguishing_pairs(set.models[i], set.models[j], 0.5);
            bool from_state2 = false;
            for (const auto& [s, a] : gamma.pairs) from_state2 |= s == 2;
            CHECK(from_state2);
        }

    // state 2 is unreachable from the hub
    Rng rng(5);
    const MdpModel& env = set.models[2];
    int s = 0;
    for (int step = 0; step < 100000; ++step) {
        s = sample_transition(env, s, static_cast<int>(rng.next_below(env.num_actions())), rng);
        REQUIRE(s != 2);
    }
}

TEST_CASE("counterexample pair: separable but chain-identical off the split pair") {
    // dyadic level: the boundary l1 distance evaluates exactly
    {
        const ModelSet exact = make_counterexample_pair(0.5);
        const auto gamma = pairwise_distinguishing_pairs(exact.models[0], exact.models[1], 0.5);
        REQUIRE(gamma.size() == 1);
        CHECK(gamma.pairs[0] == std::make_pair(0, 0));
    }

    const double lam = 0.45;
    const ModelSet pair = make_counterexample_pair(lam);
    CHECK(separation_level(pair) == doctest::Approx(lam).epsilon(1e-12));

    // arbitrary levels sit within an ulp of the boundary; query just below
    const auto gamma =
        pairwise_distinguishing_pairs(pair.models[0], pair.models[1], lam * (1.0 - 1e-9));
    REQUIRE(gamma.size() == 1);
    CHECK(gamma.pairs[0] == std::make_pair(0, 0));

    // policy that avoids (s0, a0): log-likelihood identical under both models
    Rng rng(7);
    const MdpModel& m1 = pair.models[0];
    const MdpModel& m2 = pair.models[1];
    for (int traj = 0; traj < 10000; ++traj) {
        int s = static_cast<int>(rng.next_below(3));
        double ll1 = 0.0, ll2 = 0.0;
        for (int h = 0; h < 20; ++h) {
            const int a = (s == 0) ? 1 : 0;
            const int s2 = sample_transition(m1, s, a, rng);
            ll1 += std::log(m1.kernel.at(s, a, s2));
            ll2 += std::log(m2.kernel.at(s, a, s2));
            s = s2;
        }
        REQUIRE(ll1 == ll2);  // identical induced chains, bit for bit
    }
    CHECK_THROWS_AS(make_counterexample_pair(1.0), std::invalid_argument);
}

TEST_CASE("coin instance construction") {
    CHECK_NOTHROW(make_coin_instance(1, 0.25, 0.25, 100, 0));

    const CoinInstance inst = make_coin_instance(12, 0.25, 0.25, 10000, 3);
    CHECK(inst.epsilon == doctest::Approx(0.05 * std::sqrt(3.0 / 10000.0)).epsilon(1e-12));
    CHECK(inst.mean(3, 0) == doctest::Approx(0.75));
    CHECK(inst.mean(3, 1) == doctest::Approx(0.25 + inst.epsilon));
    for (int r = 0; r < 12; ++r) {
        if (r == 3) continue;
        CHECK(inst.mean(r, 0) == doctest::Approx(0.5));
        CHECK(inst.mean(r, 1) == doctest::Approx(0.25));
    }

    CHECK_THROWS_AS(make_coin_instance(12, 0.55, 0.25, 10000, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_coin_instance(12, 0.25, 0.3, 10000, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_coin_instance(12, 0.25, 0.25, 10000, 12), std::invalid_argument);
    // delta + epsilon above 1/2 is rejected: tiny budget inflates epsilon
    CHECK_THROWS_AS(make_coin_instance(200, 0.25, 0.25, 1, 0), std::invalid_argument);
}

TEST_CASE("generated kernels always satisfy the row invariants") {
    for (const auto& set :
         {make_gridworld_set(), make_jao_set(3, 5, 0.1, 0.3), make_two_jao_set(5, 20.0, 5000, 0.4),
          make_noncommunicating_two_jao_set(4, 20.0, 5000, 0.4), make_counterexample_pair(0.3)})
        CHECK_NOTHROW(set.validate());
}
