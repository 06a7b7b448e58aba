#include "dnc/device.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

using namespace dnc::device;

namespace {
const DeviceParams kDefaults{};
}

TEST_CASE("resistance boundaries and midpoint") {
    CHECK(resistance({1.0}, kDefaults) == doctest::Approx(25000.0));
    CHECK(resistance({0.0}, kDefaults) == doctest::Approx(350000.0));
    // 1 / (0.5/25k + 0.5/350k)
    CHECK(resistance({0.5}, kDefaults) == doctest::Approx(46666.6667).epsilon(1e-8));
}

TEST_CASE("resistance is strictly decreasing in x") {
    double prev = resistance({0.0}, kDefaults);
    for (int i = 1; i <= 100; ++i) {
        const double r = resistance({i / 100.0}, kDefaults);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("state_from_resistance inverts resistance") {
    for (double x : {0.0, 0.013, 0.2, 0.5, 0.77, 1.0}) {
        const double r = resistance({x}, kDefaults);
        CHECK(state_from_resistance(r, kDefaults).x == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("eigenvalue is the normalized conductance") {
    CHECK(eigenvalue({1.0}, kDefaults) == doctest::Approx(1.0));
    CHECK(eigenvalue({0.0}, kDefaults) == doctest::Approx(0.0));
    // (1/46666.7 - 1/350k) / (1/25k - 1/350k)
    CHECK(eigenvalue({0.5}, kDefaults) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("zero and sub-threshold voltage leave the state bit-identical") {
    const MemristorState s{0.3};
    CHECK(step(s, 0.0, 1.0, kDefaults).x == 0.3);
    CHECK(step(s, kDefaults.v_threshold_pos_v / 2.0, 1e-3, kDefaults).x == 0.3);
    CHECK(step(s, kDefaults.v_threshold_neg_v / 2.0, 1e-3, kDefaults).x == 0.3);
    // exactly at threshold: dead zone is closed
    CHECK(step(s, kDefaults.v_threshold_pos_v, 1e-3, kDefaults).x == 0.3);
}

TEST_CASE("step rejects invalid inputs") {
    CHECK_THROWS_AS(step({0.5}, std::nan(""), 1e-6, kDefaults), std::invalid_argument);
    CHECK_THROWS_AS(step({0.5}, 0.5, 0.0, kDefaults), std::invalid_argument);
    CHECK_THROWS_AS(step({0.5}, 0.5, -1e-6, kDefaults), std::invalid_argument);
    CHECK_THROWS_AS(step({0.5}, 0.5, std::nan(""), kDefaults), std::invalid_argument);
}

TEST_CASE("step matches the brute-force Euler oracle") {
    // +0.6 V for 10 us from x = 0.2. The plain fine-dt oracle carries its own
    // first-order bias, so it brackets the implementation at ~1e-4; the
    // extrapolated oracle pins it to 1e-6.
    const MemristorState out = step({0.2}, 0.6, 10e-6, kDefaults);
    const double plain = oracles::euler_step(0.2, 0.6, 10e-6, kDefaults, 1000);  // dt = 10 ns
    CHECK(std::abs(out.x - plain) / plain < 2e-4);
    const double extrap = oracles::richardson_step(0.2, 0.6, 10e-6, kDefaults, 2000);
    CHECK(std::abs(out.x - extrap) / extrap < 1e-6);
}

TEST_CASE("step matches the oracle for negative drive") {
    const MemristorState out = step({0.9}, -0.5, 10e-6, kDefaults);
    const double extrap = oracles::richardson_step(0.9, -0.5, 10e-6, kDefaults, 2000);
    CHECK(std::abs(out.x - extrap) / extrap < 1e-6);
}

TEST_CASE("generic window exponent integrates against the oracle") {
    DeviceParams p2 = kDefaults;
    p2.window_exponent = 2;
    const MemristorState out = step({0.3}, 0.4, 5e-6, p2);
    const double extrap = oracles::richardson_step(0.3, 0.4, 5e-6, p2, 4000);
    CHECK(std::abs(out.x - extrap) / extrap < 1e-5);
}

TEST_CASE("apply_pulse_train basics") {
    const PulseTrain null_train{0.0, 10e-6, 0.5, 7};
    CHECK(apply_pulse_train({0.37}, null_train, kDefaults).x == 0.37);

    // composition: one train of 20 equals two trains of 10
    const PulseTrain t20{0.6, 10e-6, 0.5, 20};
    const PulseTrain t10{0.6, 10e-6, 0.5, 10};
    const double once = apply_pulse_train({0.0}, t20, kDefaults).x;
    const double twice = apply_pulse_train(apply_pulse_train({0.0}, t10, kDefaults), t10, kDefaults).x;
    CHECK(once == doctest::Approx(twice).epsilon(1e-12));

    // x = 0 sits on the window's fixed point; positive pulses cannot lift it
    CHECK(apply_pulse_train({0.0}, t20, kDefaults).x == 0.0);

    // fold of step(): the train is defined as the sequential integration
    MemristorState folded{0.12};
    const PulseTrain t5{0.6, 10e-6, 0.5, 5};
    for (int i = 0; i < 5; ++i) folded = step(folded, 0.6, 10e-6, kDefaults);
    CHECK(apply_pulse_train({0.12}, t5, kDefaults).x ==
          doctest::Approx(folded.x).epsilon(1e-12));
}

TEST_CASE("apply_pulse_train validates the train") {
    CHECK_THROWS_AS(apply_pulse_train({0.5}, {0.6, 0.0, 0.5, 1}, kDefaults),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_pulse_train({0.5}, {0.6, 10e-6, 0.0, 1}, kDefaults),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_pulse_train({0.5}, {0.6, 10e-6, 1.5, 1}, kDefaults),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_pulse_train({0.5}, {0.6, 10e-6, 0.5, 0}, kDefaults),
                    std::invalid_argument);
}

TEST_CASE("randomized trains stay in [0,1] and follow drive direction") {
    oracles::Rng rng{42};
    for (int i = 0; i < 500; ++i) {
        const double x0 = rng.uniform(0.0, 1.0);
        const PulseTrain t{rng.uniform(-1.2, 1.2), rng.uniform(1e-7, 5e-5),
                           rng.uniform(0.05, 1.0), rng.integer(1, 30)};
        const double x1 = apply_pulse_train({x0}, t, kDefaults).x;
        CHECK(x1 >= 0.0);
        CHECK(x1 <= 1.0);
        if (t.amplitude_v > kDefaults.v_threshold_pos_v) CHECK(x1 >= x0);
        if (t.amplitude_v < kDefaults.v_threshold_neg_v) CHECK(x1 <= x0);
        // supra-threshold positive drive never increases resistance
        if (t.amplitude_v > kDefaults.v_threshold_pos_v)
            CHECK(resistance({x1}, kDefaults) <= resistance({x0}, kDefaults));
    }
}

TEST_CASE("gentle randomized trains match the extrapolated oracle to 1e-6") {
    // weak-drive regime where a brute-force oracle converges within reach
    oracles::Rng rng{7};
    for (int i = 0; i < 200; ++i) {
        const double x0 = rng.uniform(0.02, 0.98);
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const PulseTrain t{sign * rng.uniform(0.151, 0.175), rng.uniform(2e-6, 10e-6),
                           rng.uniform(0.2, 1.0), rng.integer(1, 4)};
        const double got = apply_pulse_train({x0}, t, kDefaults).x;
        const double want = oracles::richardson_train(x0, t, kDefaults, 4000);
        CHECK(std::abs(got - want) / want < 1e-6);
    }
}

TEST_CASE("iv_sweep: sub-threshold sweep leaves the state constant") {
    SweepSpec spec;
    spec.peak_to_peak_v = 0.25;  // peak 0.125 < v_tp everywhere
    spec.series_resistance_ohms = 0.0;
    const auto trace = iv_sweep(spec, kDefaults, {0.4});
    for (const auto& s : trace) {
        CHECK(s.x == 0.4);
        CHECK(s.device_v == s.applied_v);
    }
}

TEST_CASE("iv_sweep: zero series resistance means device sees the source") {
    SweepSpec spec;
    spec.series_resistance_ohms = 0.0;
    const auto trace = iv_sweep(spec, kDefaults, {0.1});
    for (const auto& s : trace) CHECK(s.device_v == s.applied_v);
}

TEST_CASE("iv_sweep: sub-threshold curve is single-valued") {
    SweepSpec spec;
    spec.peak_to_peak_v = 0.25;
    spec.series_resistance_ohms = 0.0;
    const auto trace = iv_sweep(spec, kDefaults, {0.4});
    // same applied voltage on rising and falling branch gives the same current
    const int spp = spec.samples_per_period;
    for (int k = 1; k < spp / 4; ++k) {
        const auto& a = trace[k];
        const auto& b = trace[spp / 2 - k];
        CHECK(a.applied_v == doctest::Approx(b.applied_v).epsilon(1e-9));
        CHECK(a.current_a == doctest::Approx(b.current_a).epsilon(1e-9));
    }
}

TEST_CASE("iv_sweep: default sweep produces a pinched hysteresis loop") {
    SweepSpec spec;  // 500 mV pp through 10 kOhm
    const auto trace = iv_sweep(spec, kDefaults, state_from_resistance(170e3, kDefaults));
    REQUIRE(trace.size() == static_cast<std::size_t>(spec.samples_per_period) * spec.periods);

    // branches pass within 1 uA of the origin at every zero crossing
    const int spp = spec.samples_per_period;
    for (int k = 0; k < spec.periods * 2; ++k) {
        const auto& s = trace[static_cast<std::size_t>(k) * spp / 2];
        CHECK(std::abs(s.applied_v) < 1e-9);
        CHECK(std::abs(s.current_a) < 1e-6);
    }

    // shoelace area over the last full period is clearly nonzero
    double area = 0.0;
    for (int k = 0; k < spp; ++k) {
        const auto& a = trace[static_cast<std::size_t>(spp * (spec.periods - 1)) + k];
        const auto& b = trace[static_cast<std::size_t>(spp * (spec.periods - 1)) +
                              ((k + 1) % spp)];
        area += a.device_v * b.current_a - b.device_v * a.current_a;
    }
    CHECK(std::abs(0.5 * area) > 1e-10);

    // and the device actually switches between the rails during a period
    double x_min = 1.0, x_max = 0.0;
    for (const auto& s : trace) {
        x_min = std::min(x_min, s.x);
        x_max = std::max(x_max, s.x);
    }
    CHECK(x_min < 0.05);
    CHECK(x_max > 0.95);
}

TEST_CASE("states beyond the internal cap never move against their drive") {
    // x this close to 1 is representable but past the integrator's log-odds cap
    const MemristorState near_one{1.0 - 1e-16};
    const MemristorState up = step(near_one, 0.6, 10e-6, kDefaults);
    CHECK(up.x >= near_one.x);
    const MemristorState down = step(near_one, -0.6, 10e-6, kDefaults);
    CHECK(down.x <= near_one.x);

    const MemristorState near_zero{1e-17};
    const MemristorState lifted = step(near_zero, 0.6, 10e-6, kDefaults);
    CHECK(lifted.x >= near_zero.x);
    const MemristorState pushed = step(near_zero, -0.6, 10e-6, kDefaults);
    CHECK(pushed.x <= near_zero.x);
}

TEST_CASE("param validation") {
    DeviceParams bad = kDefaults;
    bad.r_on_ohms = 400e3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = kDefaults;
    bad.v_threshold_neg_v = 0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = kDefaults;
    bad.alpha_pos = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
