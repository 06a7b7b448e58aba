#pragma once

#include <cstddef>
#include <vector>

// Behavioral model of a nonvolatile threshold-switching analogue memristor.
// The internal state x in [0,1] maps to resistance between r_on (x=1) and
// r_off (x=0) through conductance-linear mixing. State moves only while the
// applied voltage exceeds a threshold, scaled by a polynomial boundary
// window; below threshold the device is ideally nonvolatile.
namespace dnc::device {

struct DeviceParams {
    double r_on_ohms = 25e3;
    double r_off_ohms = 350e3;
    double v_threshold_pos_v = 0.15;   // positive switching threshold (> 0)
    double v_threshold_neg_v = -0.15;  // negative switching threshold (< 0)
    double alpha_pos = 4e5;            // drive rate above v_tp, 1/(V*s)
    double alpha_neg = 4e5;            // drive rate below v_tn, 1/(V*s)
    int window_exponent = 1;

    void validate() const;  // throws std::invalid_argument on bad values
};

struct MemristorState {
    double x = 0.0;  // 0 = full OFF (r_off), 1 = full ON (r_on)
};

struct PulseTrain {
    double amplitude_v = 0.0;  // signed; 0 means a null train
    double pulse_width_s = 10e-6;
    double duty_cycle = 0.5;  // fraction of the period the voltage is on
    int count = 1;

    void validate() const;
    double period_s() const { return pulse_width_s / duty_cycle; }
};

struct SweepSpec {
    double peak_to_peak_v = 0.5;
    double frequency_hz = 10.0;
    double series_resistance_ohms = 10e3;
    int samples_per_period = 2000;
    int periods = 2;

    void validate() const;
};

struct SweepSample {
    double t_s = 0.0;
    double applied_v = 0.0;
    double device_v = 0.0;
    double current_a = 0.0;
    double x = 0.0;
};

// Resistance of the device at state x: 1 / (x/r_on + (1-x)/r_off).
// Strictly decreasing in x.
double resistance(const MemristorState& state, const DeviceParams& params);

// Inverse of resistance(); clamps r into [r_on, r_off] first.
MemristorState state_from_resistance(double r_ohms, const DeviceParams& params);

// Normalized conductance in [0,1] (1 = full ON). Used as the state summary
// for scheme selection. Numerically equal to x for the conductance-linear map.
double eigenvalue(const MemristorState& state, const DeviceParams& params);

// Integrate dx/dt = alpha*(v - v_t)*w(x) over dt at constant voltage v,
// where w(x) = 1 - (2x-1)^(2p). For p = 1 the solution is exact (the state
// evolves linearly in log-odds); other exponents fall back to fine-step
// explicit Euler. Result is clamped to [0,1]; sub-threshold voltages leave
// the state bit-identical. Throws std::invalid_argument on non-finite
// inputs or dt <= 0.
MemristorState step(const MemristorState& state, double voltage_v, double dt_s,
                    const DeviceParams& params);

// Apply `count` pulse periods: amplitude for pulse_width, then 0 for the
// rest of the period. Zero-voltage segments cannot move the state, so only
// the on-segments are integrated.
MemristorState apply_pulse_train(const MemristorState& state, const PulseTrain& train,
                                 const DeviceParams& params);

// Sine sweep through a series resistor. Each sample solves the resistive
// divider at the current state (device_v = applied * R/(R + Rs)), records
// (applied, device_v, I, x), then advances the state over one sample interval
// at that device voltage.
std::vector<SweepSample> iv_sweep(const SweepSpec& spec, const DeviceParams& params,
                                  MemristorState initial);

}  // namespace dnc::device
