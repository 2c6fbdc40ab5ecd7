#include "drmsim/thermal.hpp"

#include <doctest.h>

#include <random>

using namespace drmsim;

namespace {

Home small_home(int start, int end, int num_states, double gain, double capacity) {
    Home home;
    home.id = "t";
    home.essential_load_kw = Eigen::ArrayXd::Zero(288);
    home.heat_gain_btu_hr = Eigen::ArrayXd::Constant(288, gain);
    home.thermal_capacity_btu_f = capacity;
    home.initial_temp_f = 65.0;
    home.ac = AcUnit{5.0, 10.0, num_states, start, end};
    return home;
}

}  // namespace

TEST_CASE("step_temperature hand oracle") {
    // 65 + (1/12)(12000 - 50000)/4000 = 64.2083...
    CHECK(step_temperature(65.0, 12000.0, 50000.0, true, 1.0 / 12.0, 4000.0) ==
          doctest::Approx(65.0 + (12000.0 - 50000.0) / 12.0 / 4000.0).epsilon(1e-12));
    CHECK(step_temperature(65.0, 0.0, 0.0, true, 1.0 / 12.0, 4000.0) == 65.0);
    // AC off: pure heat-gain rise.
    CHECK(step_temperature(65.0, 12000.0, 0.0, true, 1.0 / 12.0, 4000.0) == doctest::Approx(65.25));
    // Not demanded: cooling ignored.
    CHECK(step_temperature(65.0, 12000.0, 50000.0, false, 1.0 / 12.0, 4000.0) ==
          doctest::Approx(65.25));
}

TEST_CASE("step_temperature rejects invalid inputs") {
    CHECK_THROWS_AS(step_temperature(65.0, 1.0, 1.0, true, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(step_temperature(65.0, -1.0, 1.0, true, 1.0, 100.0), std::domain_error);
    CHECK_THROWS_AS(step_temperature(std::nan(""), 1.0, 1.0, true, 1.0, 100.0), std::domain_error);
}

TEST_CASE("step_temperature has unit coefficient on theta") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const double gain = (rng() % 20000);
        const double cooling = (rng() % 50000);
        const double a = step_temperature(60.0, gain, cooling, true, 1.0 / 12.0, 4000.0);
        const double b = step_temperature(72.5, gain, cooling, true, 1.0 / 12.0, 4000.0);
        CHECK(b - a == doctest::Approx(12.5).epsilon(1e-14));
    }
}

TEST_CASE("simulate_trajectory matches manual iteration") {
    const SimClock clock = SimClock::five_minute();
    const Home home = small_home(100, 102, 3, 12000.0, 4000.0);
    StateSchedule schedule = StateSchedule::all_rated(clock.slot_count, 3);
    schedule.state[100] = 1;
    schedule.state[101] = 2;

    const TemperatureTrajectory traj = simulate_trajectory(home, schedule, clock);
    REQUIRE(traj.temps_f.size() == 4);
    double theta = 65.0;
    CHECK(traj.temps_f[0] == theta);
    theta = step_temperature(theta, 12000.0, 0.0, true, clock.slot_hours, 4000.0);
    CHECK(traj.temps_f[1] == doctest::Approx(theta).epsilon(1e-12));
    theta = step_temperature(theta, 12000.0, 25000.0, true, clock.slot_hours, 4000.0);
    CHECK(traj.temps_f[2] == doctest::Approx(theta).epsilon(1e-12));
    theta = step_temperature(theta, 12000.0, 50000.0, true, clock.slot_hours, 4000.0);
    CHECK(traj.temps_f[3] == doctest::Approx(theta).epsilon(1e-12));
}

TEST_CASE("trajectory direction follows the sign of the net flux") {
    const SimClock clock = SimClock::five_minute();
    const Home home = small_home(50, 97, 2, 12000.0, 4000.0);  // rated cooling 50000 > gain

    SUBCASE("always rated: strictly non-increasing") {
        const StateSchedule schedule = StateSchedule::all_rated(clock.slot_count, 2);
        const TemperatureTrajectory traj = simulate_trajectory(home, schedule, clock);
        for (int i = 1; i < traj.temps_f.size(); ++i) CHECK(traj.temps_f[i] < traj.temps_f[i - 1]);
    }
    SUBCASE("always off: rises by dt*G/dc per slot") {
        StateSchedule schedule = StateSchedule::all_rated(clock.slot_count, 2);
        for (int t = 50; t <= 97; ++t) schedule.state[t] = 1;
        const TemperatureTrajectory traj = simulate_trajectory(home, schedule, clock);
        const double slope = clock.slot_hours * 12000.0 / 4000.0;
        for (int i = 1; i < traj.temps_f.size(); ++i)
            CHECK(traj.temps_f[i] - traj.temps_f[i - 1] == doctest::Approx(slope).epsilon(1e-12));
    }
    SUBCASE("one-slot window reproduces the hand step") {
        const Home one = small_home(100, 100, 2, 12000.0, 4000.0);
        const StateSchedule schedule = StateSchedule::all_rated(clock.slot_count, 2);
        const TemperatureTrajectory traj = simulate_trajectory(one, schedule, clock);
        REQUIRE(traj.temps_f.size() == 2);
        CHECK(traj.temps_f[0] == 65.0);
        CHECK(traj.temps_f[1] == doctest::Approx(65.0 - 38000.0 / 12.0 / 4000.0).epsilon(1e-12));
    }
}

TEST_CASE("intermediate states stay between the OFF and rated trajectories") {
    const SimClock clock = SimClock::five_minute();
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int num_states = 3 + static_cast<int>(rng() % 3);
        Home home = small_home(120, 139, num_states, 8000.0 + (rng() % 8000), 4000.0);
        StateSchedule mid = StateSchedule::all_rated(clock.slot_count, num_states);
        StateSchedule off = StateSchedule::all_rated(clock.slot_count, num_states);
        StateSchedule rated = StateSchedule::all_rated(clock.slot_count, num_states);
        for (int t = 120; t <= 139; ++t) {
            mid.state[t] = 1 + static_cast<int>(rng() % num_states);
            off.state[t] = 1;
        }
        const auto t_mid = simulate_trajectory(home, mid, clock);
        const auto t_off = simulate_trajectory(home, off, clock);
        const auto t_rated = simulate_trajectory(home, rated, clock);
        for (int i = 0; i < t_mid.temps_f.size(); ++i) {
            CHECK(t_mid.temps_f[i] <= t_off.temps_f[i] + 1e-12);
            CHECK(t_mid.temps_f[i] >= t_rated.temps_f[i] - 1e-12);
        }
    }
}

TEST_CASE("max_deviation scans the whole trajectory") {
    TemperatureTrajectory traj;
    traj.temps_f.resize(2);
    traj.temps_f << 65.0, 64.2;
    CHECK(max_deviation(traj, 65.0) == doctest::Approx(0.0));

    traj.temps_f.resize(3);
    traj.temps_f << 65.0, 65.25, 65.5;
    CHECK(max_deviation(traj, 65.0) == doctest::Approx(0.5));

    traj.temps_f.resize(1);
    traj.temps_f << 65.0;
    CHECK(max_deviation(traj, 68.0) == doctest::Approx(-3.0));

    traj.temps_f.resize(0);
    CHECK_THROWS_AS(max_deviation(traj, 65.0), std::invalid_argument);
}
