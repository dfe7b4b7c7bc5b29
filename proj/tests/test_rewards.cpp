#include <doctest.h>

#include "swarm/formation.hpp"
#include "swarm/lidar.hpp"
#include "swarm/rewards.hpp"
#include "oracles.hpp"

using namespace swarm;

static const RewardConstants kRc;

TEST_CASE("directed hausdorff basics") {
    CHECK(directed_hausdorff({{0, 0}}, {{0, 0}}) == 0.0);
    CHECK(directed_hausdorff({{0, 0}, {1, 0}}, {{0, 0}}) == 1.0);
    CHECK(directed_hausdorff({{0, 0}}, {{0, 0}, {5, 0}}) == 0.0);
    CHECK_THROWS_AS(directed_hausdorff({}, {{0, 0}}), ContractError);
}

TEST_CASE("directed hausdorff properties") {
    Rng rng(31);
    auto rand_set = [&](int n) {
        std::vector<Vec2> s;
        for (int i = 0; i < n; ++i) s.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
        return s;
    };
    for (int trial = 0; trial < 1000; ++trial) {
        auto a = rand_set(1 + static_cast<int>(rng.uniform_index(6)));
        auto b = rand_set(1 + static_cast<int>(rng.uniform_index(6)));
        auto c = rand_set(1 + static_cast<int>(rng.uniform_index(6)));
        CHECK(directed_hausdorff(a, a) == 0.0);
        double ab = directed_hausdorff(a, b);
        CHECK(ab >= 0.0);
        // directed triangle inequality
        CHECK(directed_hausdorff(a, c) <= ab + directed_hausdorff(b, c) + 1e-12);
        CHECK(ab == doctest::Approx(oracle::hausdorff_directed(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("formation templates") {
    for (int c = 3; c <= 8; ++c) {
        auto t = formation_template(c);
        REQUIRE(static_cast<int>(t.size()) == c);
        Vec2 mean{0, 0};
        for (const auto& p : t) mean += p;
        CHECK(std::abs(mean.x / c) < 1e-15);
        CHECK(std::abs(mean.y / c) < 1e-15);
        for (const auto& p : t) CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-9));
    }
    // triangle side sqrt(3), square rotated 45 deg has diagonal 2
    auto tri = formation_template(3);
    CHECK(distance(tri[0], tri[1]) == doctest::Approx(std::sqrt(3.0)));
    auto sq = formation_template(4);
    CHECK(sq[0].y == doctest::Approx(1.0));
    CHECK(sq[0].x == doctest::Approx(0.0));
    CHECK(distance(sq[0], sq[2]) == doctest::Approx(2.0));
    CHECK_THROWS_AS(formation_template(2), ContractError);
    CHECK_THROWS_AS(formation_template(9), ContractError);
}

TEST_CASE("formation reward on-template and lag") {
    EnvConfig cfg;
    cfg.n_agents = 5;
    cfg.obstacle_density = 0;
    WorldState w = init_world(cfg, 1);
    auto tmpl = formation_template(5);
    for (int i = 0; i < 5; ++i) w.agents[i].pos = tmpl[i] + Vec2{3.0, -2.0};
    Grouping g = partition_groups(w);
    CHECK(formation_reward(g, w, 0.0, kRc) == doctest::Approx(0.0).epsilon(1e-12));

    // rigid translation leaves it unchanged
    for (int i = 0; i < 5; ++i) w.agents[i].pos += Vec2{-7.5, 4.25};
    CHECK(formation_reward(partition_groups(w), w, 0.0, kRc) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("formation reward lag arithmetic") {
    // error 0.5 with prev 0 -> -0.5; then error 0.5 with prev -0.5 -> -0.35
    EnvConfig cfg;
    cfg.n_agents = 3;
    cfg.obstacle_density = 0;
    WorldState w = init_world(cfg, 1);
    auto tmpl = formation_template(3);
    for (int i = 0; i < 3; ++i) w.agents[i].pos = tmpl[i];
    // push one vertex radially out so exactly one template point is 0.5 away
    // HD(template, positions): moving agent 0 out by 0.5 leaves min distance
    // to template point 0 at... compute via library instead: displace and
    // verify against the lag formula using the measured error.
    w.agents[0].pos = tmpl[0] * 1.5;
    Grouping g = partition_groups(w);
    std::vector<double> errs;
    double r1 = formation_reward(g, w, 0.0, kRc, &errs);
    REQUIRE(errs.size() == 1);
    double e = errs[0];
    CHECK(r1 == doctest::Approx(-e));
    double r2 = formation_reward(g, w, r1, kRc);
    CHECK(r2 == doctest::Approx(-e - 0.3 * r1));
}

TEST_CASE("navigation rewards") {
    EnvConfig cfg;
    cfg.n_agents = 1;
    cfg.obstacle_density = 0;
    WorldState w = init_world(cfg, 1);
    w.agents[0].pos = {0, 0};
    w.targets[0] = {{5, 0}, 1.0};
    w.targets[1] = {{0, 2}, 0.5};
    CHECK(navigation_reward(w) == doctest::Approx(-6.0));

    w.targets[0].urgency = 0.0;
    w.targets[1].urgency = 0.0;
    CHECK(navigation_reward(w) == 0.0);

    w.agents[0].pos = {1.5, -2.5};
    CHECK(navigation_reward_low(w, {1.5, -2.5}) == 0.0);
    CHECK(navigation_reward_low(w, {1.5, -1.5}) == doctest::Approx(-1.0));
}

TEST_CASE("task reward and urgency decay") {
    EnvConfig cfg;
    cfg.n_agents = 5;
    cfg.obstacle_density = 0;
    WorldState w = init_world(cfg, 1);
    auto tmpl = formation_template(5);
    w.targets[0].pos = {0, 0};
    w.targets[1].pos = {50, 50};
    for (int i = 0; i < 5; ++i) w.agents[i].pos = tmpl[i];  // centroid on target 0
    Grouping g = partition_groups(w);

    std::vector<double> urg{1.0, 1.0};
    double rt = task_reward_and_decay(w, g, kRc, urg);
    CHECK(rt == doctest::Approx(5.0));
    CHECK(urg[0] == doctest::Approx(0.985));
    CHECK(urg[1] == 1.0);

    // no group in range
    for (int i = 0; i < 5; ++i) w.agents[i].pos = tmpl[i] + Vec2{20, 20};
    g = partition_groups(w);
    urg = {1.0, 1.0};
    CHECK(task_reward_and_decay(w, g, kRc, urg) == 0.0);
    CHECK(urg[0] == 1.0);

    // decay clamps at zero
    for (int i = 0; i < 5; ++i) w.agents[i].pos = tmpl[i];
    g = partition_groups(w);
    urg = {0.01, 1.0};
    task_reward_and_decay(w, g, kRc, urg);
    CHECK(urg[0] == 0.0);
}

TEST_CASE("urgency monotone non-increasing over trajectories") {
    Rng rng(17);
    EnvConfig cfg;
    cfg.n_agents = 5;
    cfg.obstacle_density = 0;
    WorldState w = init_world(cfg, 23);
    std::vector<double> urg{1.0, 1.0};
    std::vector<double> prev = urg;
    for (int t = 0; t < 300; ++t) {
        std::vector<Vec2> acts;
        for (int i = 0; i < 5; ++i) acts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
        step(w, acts, {0, 0});
        task_reward_and_decay(w, partition_groups(w), kRc, urg);
        for (size_t k = 0; k < urg.size(); ++k) {
            CHECK(urg[k] <= prev[k]);
            CHECK(urg[k] >= 0.0);
            CHECK(urg[k] <= 1.0);
        }
        prev = urg;
    }
}

TEST_CASE("evasion reward") {
    EnvConfig cfg;
    cfg.n_agents = 2;
    cfg.obstacle_density = 0;
    WorldState w = init_world(cfg, 1);
    w.adversary.pos = {0, 0};
    w.agents[0].pos = {1.0, 0};
    w.agents[1].pos = {30, 0};
    CHECK(evasion_reward(w, kRc) == doctest::Approx(-1.0));

    w.agents[0].pos = {3.0, 0};
    CHECK(evasion_reward(w, kRc) == 0.0);

    w.agents[0].pos = {1.5, 0};
    w.agents[1].pos = {0, 0.5};
    CHECK(evasion_reward(w, kRc) == doctest::Approx(-2.0));
}

TEST_CASE("collision penalty branches") {
    CHECK(collision_penalty_from_min(0.1, kRc) == doctest::Approx(5.4));
    CHECK(collision_penalty_from_min(0.3, kRc) == doctest::Approx(2.6));
    CHECK(collision_penalty_from_min(0.6, kRc) == 0.0);
    // boundaries take the lower-penalty branch
    CHECK(collision_penalty_from_min(0.2, kRc) == doctest::Approx(8 * 0.3 + 1));
    CHECK(collision_penalty_from_min(0.5, kRc) == 0.0);
    CHECK(collision_reward({0.1, 0.3, 0.6}, kRc) == doctest::Approx(-8.0));
}

TEST_CASE("collision branch selection vs table oracle") {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        double d = rng.uniform(0.0, 3.0);
        double got = collision_penalty_from_min(d, kRc);
        double want;
        if (d < 0.2)
            want = 24 * (0.2 - d) + 3;
        else if (d < 0.5)
            want = 8 * (0.5 - d) + 1;
        else
            want = 0.0;
        CHECK(got == want);
    }
}

TEST_CASE("total reward modes") {
    RewardBreakdown b;
    b.formation = -0.5;
    b.navigation = -2.0;
    b.collision = 0.0;
    RewardWeights w;
    CHECK(total_reward(b, w, RewardMode::kLow) == doctest::Approx(-15.5));

    RewardBreakdown zero;
    CHECK(total_reward(zero, w, RewardMode::kFull) == 0.0);

    RewardBreakdown h;
    h.task = 5;
    h.navigation = -6;
    h.evasion = -1;
    CHECK(total_reward(h, w, RewardMode::kHigh) == doctest::Approx(-50.6));
}

TEST_CASE("reward breakdown matches brute-force oracle") {
    Rng rng(71);
    for (int trial = 0; trial < 300; ++trial) {  // acceptance runs 1000
        WorldState w = oracle::random_world(rng);
        double prev_f = rng.uniform(-3, 0);

        std::vector<double> mins;
        for (int i = 0; i < w.n_agents(); ++i) {
            auto scan = lidar_scan(w, i);
            mins.push_back(*std::min_element(scan.begin(), scan.end()));
        }

        Grouping g = partition_groups(w);
        RewardBreakdown b;
        b.formation = formation_reward(g, w, prev_f, kRc);
        b.navigation = navigation_reward(w);
        std::vector<double> urg;
        for (const auto& t : w.targets) urg.push_back(t.urgency);
        b.task = task_reward_and_decay(w, g, kRc, urg);
        b.evasion = evasion_reward(w, kRc);
        b.collision = collision_reward(mins, kRc);

        auto ref = oracle::rewards_brute(w, prev_f, mins, kRc);
        CHECK(std::abs(b.formation - ref.formation) < 1e-9);
        CHECK(std::abs(b.navigation - ref.navigation) < 1e-9);
        CHECK(std::abs(b.task - ref.task) < 1e-9);
        CHECK(std::abs(b.evasion - ref.evasion) < 1e-9);
        CHECK(std::abs(b.collision - ref.collision) < 1e-9);
        REQUIRE(urg.size() == ref.urgencies_after.size());
        for (size_t k = 0; k < urg.size(); ++k)
            CHECK(std::abs(urg[k] - ref.urgencies_after[k]) < 1e-12);
    }
}
