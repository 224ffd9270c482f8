#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>

#include "mtrl/schedule.hpp"

using namespace mtrl;

TEST_CASE("uniform_schedule: singleton subset is constant") {
    Rng rng(3);
    const TaskSchedule sched = uniform_schedule({2}, 50, 0, rng);
    for (const auto& [m, s] : sched.entries) {
        CHECK(m == 2);
        CHECK(s == 0);
    }
}

TEST_CASE("uniform_schedule: frequencies converge and seeds reproduce") {
    Rng rng(5);
    const TaskSchedule sched = uniform_schedule({0, 1, 2, 3}, 10000, 5, rng);
    std::array<int, 4> hits = {0, 0, 0, 0};
    for (const auto& [m, s] : sched.entries) hits[m]++;
    for (int m = 0; m < 4; ++m)
        CHECK(std::abs(hits[m] / 10000.0 - 0.25) < 0.02);

    Rng rng_a(9), rng_b(9);
    const TaskSchedule a = uniform_schedule({0, 1, 2}, 100, 5, rng_a);
    const TaskSchedule b = uniform_schedule({0, 1, 2}, 100, 5, rng_b);
    CHECK(a.entries == b.entries);

    Rng empty_rng(1);
    CHECK_THROWS_AS(uniform_schedule({}, 10, 0, empty_rng), std::invalid_argument);
}

TEST_CASE("paper_schedule windows") {
    Rng rng(7);
    const TaskSchedule sched = paper_schedule(200, rng);
    REQUIRE(sched.episodes() == 200);
    // 1-based episode 120 sits in the first window
    CHECK(sched.model_of(119) == 3);
    CHECK(sched.model_of(99) == 3);    // episode 100
    CHECK(sched.model_of(149) == 3);   // episode 150
    CHECK(sched.model_of(179) == 3);   // episode 180
    CHECK(sched.model_of(199) == 3);   // episode 200
    CHECK(sched.model_of(0) < 3);      // episode 1
    CHECK(sched.model_of(159) < 3);    // episode 160, between the windows
    CHECK(sched.model_of(98) < 3);     // episode 99

    int m4_count = 0;
    for (const auto& [m, s] : sched.entries) {
        CHECK(s == 5);
        if (m == 3) ++m4_count;
    }
    CHECK(m4_count == 72);  // 51 + 21 inclusive windows
}

TEST_CASE("all_models_first_schedule layout") {
    Rng rng(11);
    const TaskSchedule sched = all_models_first_schedule(4, 5, [&] {
        return paper_schedule(200, rng);
    });
    REQUIRE(sched.episodes() == 204);
    for (int m = 0; m < 4; ++m) {
        CHECK(sched.model_of(m) == m);
        CHECK(sched.start_of(m) == 5);
    }
    // the tail is the paper schedule shifted by four episodes
    CHECK(sched.model_of(4 + 119) == 3);
    CHECK(sched.model_of(4 + 159) < 3);
}

TEST_CASE("fixed_schedule_from_list and the schedule file format") {
    CHECK(fixed_schedule_from_list({}, 4, 16).episodes() == 0);
    const TaskSchedule one = fixed_schedule_from_list({{2, 7}}, 4, 16);
    REQUIRE(one.episodes() == 1);
    CHECK(one.model_of(0) == 2);
    CHECK(one.start_of(0) == 7);
    CHECK_THROWS_AS(fixed_schedule_from_list({{4, 0}}, 4, 16), std::invalid_argument);
    CHECK_THROWS_AS(fixed_schedule_from_list({{0, 16}}, 4, 16), std::invalid_argument);

    Rng rng(13);
    const TaskSchedule sched = uniform_schedule({0, 1, 2}, 25, 5, rng);
    const std::string path =
        (std::filesystem::temp_directory_path() / "mtrl_sched_test.txt").string();
    save_schedule(sched, path);
    const TaskSchedule loaded = load_schedule(path);
    CHECK(loaded.entries == sched.entries);
    std::remove(path.c_str());
}
