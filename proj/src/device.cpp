#include "dnc/device.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dnc::device {

namespace {

// Log-odds cap. Keeps driven states strictly inside (0,1) so that a later
// opposite-sign drive can always move them back; sigma(+/-34) is still
// representable away from 1.0 and 0.0 in double precision.
constexpr double kLogitCap = 34.0;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double logit(double x) { return std::log(x / (1.0 - x)); }

}  // namespace

void DeviceParams::validate() const {
    if (!(r_on_ohms > 0.0) || !(r_off_ohms > 0.0) || !(r_on_ohms < r_off_ohms))
        throw std::invalid_argument("device: requires 0 < r_on < r_off");
    if (!(v_threshold_pos_v > 0.0) || !(v_threshold_neg_v < 0.0))
        throw std::invalid_argument("device: requires v_tn < 0 < v_tp");
    if (!(alpha_pos > 0.0) || !(alpha_neg > 0.0))
        throw std::invalid_argument("device: alpha_pos and alpha_neg must be > 0");
    if (window_exponent < 1)
        throw std::invalid_argument("device: window_exponent must be >= 1");
}

void PulseTrain::validate() const {
    if (!std::isfinite(amplitude_v))
        throw std::invalid_argument("pulse train: non-finite amplitude");
    if (!(pulse_width_s > 0.0))
        throw std::invalid_argument("pulse train: pulse_width must be > 0");
    if (!(duty_cycle > 0.0) || duty_cycle > 1.0)
        throw std::invalid_argument("pulse train: duty_cycle must be in (0,1]");
    if (count < 1) throw std::invalid_argument("pulse train: count must be >= 1");
}

void SweepSpec::validate() const {
    if (!(peak_to_peak_v > 0.0))
        throw std::invalid_argument("sweep: peak_to_peak must be > 0");
    if (!(frequency_hz > 0.0)) throw std::invalid_argument("sweep: frequency must be > 0");
    if (series_resistance_ohms < 0.0)
        throw std::invalid_argument("sweep: series_resistance must be >= 0");
    if (samples_per_period < 2)
        throw std::invalid_argument("sweep: samples_per_period must be >= 2");
    if (periods < 1) throw std::invalid_argument("sweep: periods must be >= 1");
}

double resistance(const MemristorState& state, const DeviceParams& params) {
    const double g = state.x / params.r_on_ohms + (1.0 - state.x) / params.r_off_ohms;
    return 1.0 / g;
}

MemristorState state_from_resistance(double r_ohms, const DeviceParams& params) {
    const double r = std::clamp(r_ohms, params.r_on_ohms, params.r_off_ohms);
    const double g_off = 1.0 / params.r_off_ohms;
    const double g_on = 1.0 / params.r_on_ohms;
    return MemristorState{(1.0 / r - g_off) / (g_on - g_off)};
}

double eigenvalue(const MemristorState& state, const DeviceParams& params) {
    const double g_off = 1.0 / params.r_off_ohms;
    const double g_on = 1.0 / params.r_on_ohms;
    return (1.0 / resistance(state, params) - g_off) / (g_on - g_off);
}

namespace {

// Drive term alpha*(v - v_t) for the active branch, 0 in the dead zone.
double drive_rate(double v, const DeviceParams& p) {
    if (v > p.v_threshold_pos_v) return p.alpha_pos * (v - p.v_threshold_pos_v);
    if (v < p.v_threshold_neg_v) return p.alpha_neg * (v - p.v_threshold_neg_v);
    return 0.0;
}

MemristorState integrate_exact_p1(double x0, double rate, double dt) {
    // dx/dt = rate * 4x(1-x)  =>  d logit(x)/dt = 4*rate.
    if (x0 <= 0.0) return MemristorState{0.0};
    if (x0 >= 1.0) return MemristorState{1.0};
    double z = logit(x0) + 4.0 * rate * dt;
    z = std::clamp(z, -kLogitCap, kLogitCap);
    double x1 = logistic(z);
    // the cap must never move a state against its drive (states constructed
    // beyond the cap stay where they are)
    if (rate > 0.0) x1 = std::max(x1, x0);
    else x1 = std::min(x1, x0);
    return MemristorState{x1};
}

MemristorState integrate_heun(double x0, double rate, double dt, int exponent) {
    // Fixed-step Heun for window exponents without a closed form. Substeps
    // keep the per-step move small; the second-order update keeps the
    // integration bias well under the oracle tolerances.
    const auto w = [exponent](double x) {
        const double m = 2.0 * x - 1.0;
        return 1.0 - std::pow(m * m, exponent);
    };
    const double max_move = 4.0 * std::abs(rate) * dt;
    const std::size_t n =
        std::max<std::size_t>(128, static_cast<std::size_t>(max_move / 1e-3) + 1);
    const double h = dt / static_cast<double>(n);
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        const double k1 = rate * w(x);
        const double mid = std::clamp(x + h * k1, 0.0, 1.0);
        const double k2 = rate * w(mid);
        x += 0.5 * h * (k1 + k2);
        if (x <= 0.0) return MemristorState{0.0};
        if (x >= 1.0) return MemristorState{1.0};
    }
    return MemristorState{x};
}

}  // namespace

MemristorState step(const MemristorState& state, double voltage_v, double dt_s,
                    const DeviceParams& params) {
    if (!std::isfinite(voltage_v)) throw std::invalid_argument("step: non-finite voltage");
    if (!std::isfinite(dt_s) || !(dt_s > 0.0))
        throw std::invalid_argument("step: dt must be finite and > 0");
    const double rate = drive_rate(voltage_v, params);
    if (rate == 0.0) return state;  // nonvolatile: sub-threshold leaves x untouched
    if (params.window_exponent == 1) return integrate_exact_p1(state.x, rate, dt_s);
    return integrate_heun(state.x, rate, dt_s, params.window_exponent);
}

MemristorState apply_pulse_train(const MemristorState& state, const PulseTrain& train,
                                 const DeviceParams& params) {
    train.validate();
    if (train.amplitude_v == 0.0) return state;
    MemristorState s = state;
    for (int i = 0; i < train.count; ++i) {
        s = step(s, train.amplitude_v, train.pulse_width_s, params);
        // off-segment of the period is 0 V: no state change
    }
    return s;
}

std::vector<SweepSample> iv_sweep(const SweepSpec& spec, const DeviceParams& params,
                                  MemristorState initial) {
    spec.validate();
    params.validate();
    const std::size_t total =
        static_cast<std::size_t>(spec.samples_per_period) * static_cast<std::size_t>(spec.periods);
    const double dt = 1.0 / (spec.frequency_hz * spec.samples_per_period);
    const double amp = 0.5 * spec.peak_to_peak_v;
    const double two_pi = 2.0 * std::acos(-1.0);

    std::vector<SweepSample> out;
    out.reserve(total);
    MemristorState s = initial;
    for (std::size_t k = 0; k < total; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double applied = amp * std::sin(two_pi * spec.frequency_hz * t);
        const double r = resistance(s, params);
        const double v_dev = applied * (r / (r + spec.series_resistance_ohms));
        out.push_back(SweepSample{t, applied, v_dev, v_dev / r, s.x});
        s = step(s, v_dev, dt, params);
    }
    return out;
}

}  // namespace dnc::device
