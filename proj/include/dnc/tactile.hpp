#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dnc/device.hpp"
#include "dnc/encoding.hpp"

// Closed-loop grasp simulation: piezoresistive front end, memristor-controlled
// amplifier gain, grasp controller state machine, and scripted scenario replay.
// One control step samples force, classifies the window, pulses the memristor,
// reads the new gain and advances the controller.
namespace dnc::tactile {

struct PiezoModel {
    double r_unloaded_ohms = 100e3;
    double sensitivity_ohms_per_n = 10e3;  // resistance drops with force
    double r_floor_ohms = 5e3;

    void validate() const;
};

struct GainConfig {
    double g_min = 0.4;
    double g_max = 8.5;
};

enum class Phase { Approach, Contact, PainReflex, Regrasp, StableHold, SlipRecovery };

struct ControllerConfig {
    double pain_gain = 5.0;          // amplified signal >= 500% triggers the reflex
    double grip_increase_factor = 1.3;
    double f_max_n = 15.0;
    double initial_grip_n = 2.5;
    int stable_after_mild_steps = 120;
};

struct ControllerState {
    Phase phase = Phase::Approach;
    double grip_force_cmd_n = 0.0;
    int mild_streak = 0;
};

enum class ActionKind { None, PainRegrasp, GripIncrease };

struct Directive {
    enum class Kind { Force, Ramp, Wobble, Marker };
    double t_s = 0.0;
    Kind kind = Kind::Force;
    double a = 0.0;  // Force: target N | Ramp: target N | Wobble: amplitude N
    double b = 0.0;  // Ramp: duration s | Wobble: frequency Hz
    double c = 0.0;  // Wobble: duration s
    std::string name;  // Marker
};

struct ExpectedMarker {
    std::string name;
    double t_min_s = 0.0;
    double t_max_s = 0.0;
};

struct GraspScenario {
    std::string name;
    double duration_s = 0.0;
    double control_dt_s = 1e-3;
    double initial_x = -1.0;        // < 0: start at the mid (normal) band
    double modulation_start_s = 0.0;  // pulses withheld before this time
    std::vector<Directive> events;   // time-sorted
    std::vector<ExpectedMarker> expected;

    void validate() const;
};

struct TraceRow {
    double t_s = 0.0;
    double piezo_r_ohms = 0.0;
    double mem_r_ohms = 0.0;
    double gain = 1.0;
    double force_cmd_n = 0.0;
    std::string event;  // semicolon-joined markers fired this step
    // not part of the exported CSV, kept for metrics and tests:
    encoding::TactileKind attr = encoding::TactileKind::NoContact;
    double force_n = 0.0;
    double output = 0.0;  // gain-scaled response, gain * force
    Phase phase = Phase::Approach;
    bool gain_clamped = false;
};

struct GraspTrace {
    std::vector<TraceRow> rows;

    // first row whose event list contains the marker
    std::optional<std::size_t> find_marker(const std::string& name) const;
};

struct SimConfig {
    device::DeviceParams device;
    encoding::SchemeTable table;
    encoding::TactileThresholds thresholds;
    PiezoModel piezo;
    GainConfig gain;
    ControllerConfig controller;
    double window_s = 0.02;            // force window for attribute extraction
    double marker_low_ohms = 35e3;     // trace marker when mem_r drops below
    bool unity_gain = false;           // baseline mode: gain pinned to 1.0
};

struct SlipDetectConfig {
    double threshold_ohms_per_s = 10e6;  // 10 kOhm per ms
    double min_gap_s = 2e-3;
};

// Piezoresistive response: max(r_floor, r_unloaded - sensitivity * force).
double piezo_resistance(double force_n, const PiezoModel& model);

// Inverse of the linear branch, used to recover force from a trace.
double piezo_force(double r_ohms, const PiezoModel& model);

// Amplifier gain from memristor resistance, linear in conductance:
// g_min at r_off, g_max at r_on, strictly decreasing in resistance.
// Out-of-band resistances are clamped; *clamped is set when provided.
double gain_from_resistance(double mem_r_ohms, const GainConfig& gain,
                            const device::DeviceParams& params, bool* clamped = nullptr);

// One controller transition. Returns the action taken this step.
ActionKind controller_step(ControllerState& state, const encoding::TactileAttribute& attr,
                           double gain, const ControllerConfig& cfg);

// Replay a scripted scenario. Deterministic: identical scenario and config
// produce an identical trace.
GraspTrace run_scenario(const GraspScenario& scenario, const SimConfig& cfg);

// Spike events where |d(piezo_r)/dt| exceeds the threshold, debounced.
std::vector<double> detect_slip(const std::vector<std::pair<double, double>>& window_t_r,
                                const SlipDetectConfig& cfg);

const char* phase_name(Phase p);
const char* kind_name(encoding::TactileKind k);

}  // namespace dnc::tactile
