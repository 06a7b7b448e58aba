#include "dnc/tactile.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "dnc/config.hpp"

using namespace dnc;
using namespace dnc::tactile;

namespace {
const SimConfig kCfg{};

GraspScenario basic_scenario(double duration = 1.0) {
    GraspScenario sc;
    sc.name = "test";
    sc.duration_s = duration;
    sc.control_dt_s = 1e-3;
    sc.events.push_back({0.0, Directive::Kind::Force, 0.0, 0.0, 0.0, ""});
    return sc;
}
}  // namespace

TEST_CASE("piezo_resistance") {
    const PiezoModel m{};
    CHECK(piezo_resistance(0.0, m) == doctest::Approx(100e3));
    CHECK(piezo_resistance(2.0, m) == doctest::Approx(80e3));  // 100k - 2*10k
    CHECK(piezo_resistance(1000.0, m) == doctest::Approx(m.r_floor_ohms));
    CHECK_THROWS_AS(piezo_resistance(-1.0, m), std::invalid_argument);

    // nonincreasing in force
    double prev = piezo_resistance(0.0, m);
    for (double f = 0.5; f < 20.0; f += 0.5) {
        const double r = piezo_resistance(f, m);
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("piezo_force inverts the linear branch") {
    const PiezoModel m{};
    for (double f : {0.0, 0.5, 2.0, 7.5})
        CHECK(piezo_force(piezo_resistance(f, m), m) == doctest::Approx(f));
}

TEST_CASE("gain_from_resistance") {
    const GainConfig g{};
    const device::DeviceParams d{};
    CHECK(gain_from_resistance(d.r_off_ohms, g, d) == doctest::Approx(0.4));
    CHECK(gain_from_resistance(d.r_on_ohms, g, d) == doctest::Approx(8.5));
    // 35 kOhm gives at least 500% amplification with headroom
    CHECK(gain_from_resistance(35e3, g, d) >= 6.0);
    CHECK(gain_from_resistance(35e3, g, d) == doctest::Approx(6.0076923).epsilon(1e-6));

    // strictly decreasing across the band
    double prev = 1e9;
    for (double r = d.r_on_ohms; r <= d.r_off_ohms; r += 5e3) {
        const double v = gain_from_resistance(r, g, d);
        CHECK(v < prev);
        prev = v;
    }

    // out-of-band input is clamped and flagged
    bool clamped = false;
    CHECK(gain_from_resistance(1e3, g, d, &clamped) == doctest::Approx(8.5));
    CHECK(clamped);
    gain_from_resistance(100e3, g, d, &clamped);
    CHECK_FALSE(clamped);
}

TEST_CASE("controller transitions") {
    const ControllerConfig cfg{};
    ControllerState s;

    // approach -> contact on any contact attribute
    controller_step(s, {encoding::TactileKind::Mild, 1.0, 0.0}, 1.0, cfg);
    CHECK(s.phase == Phase::Contact);
    CHECK(s.grip_force_cmd_n == doctest::Approx(cfg.initial_grip_n));

    // hazard with amplified signal >= 500% triggers the pain reflex
    const auto action = controller_step(s, {encoding::TactileKind::Hazard, 8.0, 0.0}, 5.2, cfg);
    CHECK(action == ActionKind::PainRegrasp);
    CHECK(s.phase == Phase::PainReflex);

    // one-step transient into regrasp
    controller_step(s, {encoding::TactileKind::Hazard, 8.0, 0.0}, 5.2, cfg);
    CHECK(s.phase == Phase::Regrasp);

    // sustained mild completes the regrasp
    for (int i = 0; i < cfg.stable_after_mild_steps; ++i)
        controller_step(s, {encoding::TactileKind::Mild, 1.0, 0.0}, 1.0, cfg);
    CHECK(s.phase == Phase::StableHold);

    // stable hold is a fixpoint under mild input
    controller_step(s, {encoding::TactileKind::Mild, 1.0, 0.0}, 1.0, cfg);
    CHECK(s.phase == Phase::StableHold);

    // slip spike: recovery plus grip increase within the same step
    const double before = s.grip_force_cmd_n;
    const auto slip = controller_step(s, {encoding::TactileKind::SlipSpike, 2.0, 80.0}, 1.0, cfg);
    CHECK(slip == ActionKind::GripIncrease);
    CHECK(s.phase == Phase::SlipRecovery);
    CHECK(s.grip_force_cmd_n == doctest::Approx(before * cfg.grip_increase_factor));
}

TEST_CASE("controller: no pain reflex below the gain threshold") {
    const ControllerConfig cfg{};
    ControllerState s;
    controller_step(s, {encoding::TactileKind::Mild, 1.0, 0.0}, 1.0, cfg);
    const auto action = controller_step(s, {encoding::TactileKind::Hazard, 8.0, 0.0}, 4.9, cfg);
    CHECK(action == ActionKind::None);
    CHECK(s.phase == Phase::Contact);
}

TEST_CASE("controller: grip command stays within bounds") {
    const ControllerConfig cfg{};
    ControllerState s;
    for (int i = 0; i <= cfg.stable_after_mild_steps; ++i)
        controller_step(s, {encoding::TactileKind::Mild, 1.0, 0.0}, 1.0, cfg);
    CHECK(s.phase == Phase::StableHold);
    for (int i = 0; i < 50; ++i) {
        controller_step(s, {encoding::TactileKind::SlipSpike, 2.0, 80.0}, 1.0, cfg);
        CHECK(s.grip_force_cmd_n <= cfg.f_max_n);
    }
}

TEST_CASE("run_scenario: empty force stays at the recovery band with no events") {
    const auto trace = run_scenario(basic_scenario(), kCfg);
    REQUIRE(trace.rows.size() == 1000);
    for (const auto& row : trace.rows) {
        CHECK(row.attr == encoding::TactileKind::NoContact);
        CHECK(row.event.empty());
        // normalization holds the initial mid (normal perception) state
        CHECK(row.mem_r_ohms == doctest::Approx(170e3).epsilon(0.10));
    }
}

TEST_CASE("run_scenario: traces are deterministic") {
    GraspScenario sc = basic_scenario(2.0);
    sc.events.push_back({0.5, Directive::Kind::Ramp, 8.0, 0.2, 0.0, ""});
    sc.events.push_back({1.5, Directive::Kind::Ramp, 1.0, 0.3, 0.0, ""});
    const auto a = run_scenario(sc, kCfg);
    const auto b = run_scenario(sc, kCfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].mem_r_ohms == b.rows[i].mem_r_ohms);
        CHECK(a.rows[i].gain == b.rows[i].gain);
        CHECK(a.rows[i].event == b.rows[i].event);
    }
}

TEST_CASE("run_scenario: pain reflex only after the gain threshold") {
    GraspScenario sc = basic_scenario(2.0);
    sc.events.push_back({0.5, Directive::Kind::Ramp, 8.0, 0.2, 0.0, ""});
    const auto trace = run_scenario(sc, kCfg);
    const auto pain = trace.find_marker("pain_reflex");
    REQUIRE(pain.has_value());
    bool crossed = false;
    for (std::size_t i = 0; i <= *pain; ++i)
        if (trace.rows[i].gain >= kCfg.controller.pain_gain) crossed = true;
    CHECK(crossed);
}

TEST_CASE("run_scenario: hazard amplification reaches the reported bands") {
    // constant hazardous force: >170% amplification, then >720% sensitized
    GraspScenario sc = basic_scenario(1.0);
    sc.events.push_back({0.02, Directive::Kind::Ramp, 8.0, 0.2, 0.0, ""});
    const auto trace = run_scenario(sc, kCfg);

    bool seen_170 = false, seen_720_sensitized = false;
    for (const auto& row : trace.rows) {
        if (row.gain > 1.7) seen_170 = true;
        if (row.attr == encoding::TactileKind::PersistentHazard && row.gain > 7.2)
            seen_720_sensitized = true;
    }
    CHECK(seen_170);
    CHECK(seen_720_sensitized);
}

TEST_CASE("run_scenario: mild adaptation attenuates below 50%") {
    GraspScenario sc = basic_scenario(1.0);
    sc.initial_x = 0.9;
    sc.modulation_start_s = 0.2;
    sc.events.push_back({0.02, Directive::Kind::Ramp, 2.2, 0.05, 0.0, ""});
    sc.events.push_back({0.199, Directive::Kind::Marker, 0.0, 0.0, 0.0, "stable"});
    const auto trace = run_scenario(sc, kCfg);
    const auto stable = trace.find_marker("stable");
    REQUIRE(stable.has_value());
    const double ref = trace.rows[*stable].output;
    CHECK(trace.rows.back().output < 0.5 * ref);
}

TEST_CASE("run_scenario: fast adaptation attenuates in strictly fewer steps") {
    GraspScenario sc = basic_scenario(1.0);
    sc.initial_x = 0.9;
    sc.modulation_start_s = 0.2;
    sc.events.push_back({0.02, Directive::Kind::Ramp, 2.2, 0.05, 0.0, ""});
    sc.events.push_back({0.199, Directive::Kind::Marker, 0.0, 0.0, 0.0, "stable"});

    auto steps_to_half = [&](const encoding::SchemeTable& table) {
        SimConfig cfg = kCfg;
        cfg.table = table;
        const auto trace = run_scenario(sc, cfg);
        const std::size_t s = *trace.find_marker("stable");
        const double ref = trace.rows[s].output;
        for (std::size_t i = s; i < trace.rows.size(); ++i)
            if (trace.rows[i].output < 0.5 * ref) return i - s;
        return trace.rows.size();
    };

    encoding::SchemeTable fast_table = kCfg.table;
    fast_table.adapt_slow =
        encoding::adaptation_schedule(encoding::AdaptationSpeed::Fast, kCfg.table);
    fast_table.adapt_slow_low = fast_table.adapt_slow;
    const auto slow_steps = steps_to_half(kCfg.table);
    const auto fast_steps = steps_to_half(fast_table);
    CHECK(fast_steps < slow_steps);
    CHECK(slow_steps < 200);
}

TEST_CASE("run_scenario validates scenarios") {
    GraspScenario empty;
    empty.duration_s = 1.0;
    CHECK_THROWS_AS(run_scenario(empty, kCfg), std::invalid_argument);

    GraspScenario unsorted = basic_scenario();
    unsorted.events.push_back({0.5, Directive::Kind::Force, 1.0, 0.0, 0.0, ""});
    unsorted.events.push_back({0.2, Directive::Kind::Force, 2.0, 0.0, 0.0, ""});
    CHECK_THROWS_AS(run_scenario(unsorted, kCfg), std::invalid_argument);
}

TEST_CASE("detect_slip") {
    const SlipDetectConfig cfg{};  // 10 kOhm/ms, 2 ms gap
    std::vector<std::pair<double, double>> window;
    for (int i = 0; i < 50; ++i) window.emplace_back(i * 1e-3, 80e3);
    CHECK(detect_slip(window, cfg).empty());

    // one 40 kOhm step over 1 ms
    for (std::size_t i = 25; i < window.size(); ++i) window[i].second = 120e3;
    const auto events = detect_slip(window, cfg);
    REQUIRE(events.size() == 1);
    CHECK(events[0] == doctest::Approx(25e-3));

    // two spikes 0.5 ms apart are debounced into one event
    std::vector<std::pair<double, double>> fast;
    for (int i = 0; i < 20; ++i) {
        double r = 80e3;
        if (i == 10) r = 120e3;
        if (i == 11) r = 80e3;
        fast.emplace_back(i * 0.5e-3, r);
    }
    CHECK(detect_slip(fast, cfg).size() == 1);
}

TEST_CASE("scenario files parse into runnable scenarios") {
    const std::string text =
        "[scenario]\n"
        "name = demo\n"
        "duration_s = 0.5\n"
        "[events]\n"
        "0.0, force, 0.0\n"
        "0.1, ramp, 3.0 0.1\n"
        "0.3, marker, stable\n"
        "[expect]\n"
        "contact, 0.1, 0.2\n";
    const auto ini = dnc::config::parse_ini(text, "demo");
    const auto sc = dnc::config::parse_scenario(ini, "demo");
    CHECK(sc.name == "demo");
    CHECK(sc.events.size() == 3);
    CHECK(sc.expected.size() == 1);
    const auto trace = run_scenario(sc, kCfg);
    CHECK(trace.find_marker("contact").has_value());
    CHECK(trace.find_marker("stable").has_value());
}

TEST_CASE("unknown scenario directives are configuration errors") {
    const std::string text = "[scenario]\nduration_s = 0.5\n[events]\n0.0, wiggle, 1.0\n";
    const auto ini = dnc::config::parse_ini(text, "demo");
    CHECK_THROWS_AS(dnc::config::parse_scenario(ini, "demo"), dnc::config::ConfigError);
}
