#include "dnc/tactile.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace dnc::tactile {

void PiezoModel::validate() const {
    if (!(r_floor_ohms > 0.0) || !(r_floor_ohms < r_unloaded_ohms))
        throw std::invalid_argument("piezo: requires 0 < r_floor < r_unloaded");
    if (!(sensitivity_ohms_per_n > 0.0))
        throw std::invalid_argument("piezo: sensitivity must be > 0");
}

void GraspScenario::validate() const {
    if (!(duration_s > 0.0)) throw std::invalid_argument("scenario: duration must be > 0");
    if (!(control_dt_s > 0.0)) throw std::invalid_argument("scenario: control_dt must be > 0");
    if (events.empty()) throw std::invalid_argument("scenario: no events");
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].t_s < events[i - 1].t_s)
            throw std::invalid_argument("scenario: events must be time-sorted");
}

double piezo_resistance(double force_n, const PiezoModel& model) {
    if (!(force_n >= 0.0)) throw std::invalid_argument("piezo_resistance: negative force");
    return std::max(model.r_floor_ohms,
                    model.r_unloaded_ohms - model.sensitivity_ohms_per_n * force_n);
}

double piezo_force(double r_ohms, const PiezoModel& model) {
    return std::max(0.0, (model.r_unloaded_ohms - r_ohms) / model.sensitivity_ohms_per_n);
}

double gain_from_resistance(double mem_r_ohms, const GainConfig& gain,
                            const device::DeviceParams& params, bool* clamped) {
    const double r = std::clamp(mem_r_ohms, params.r_on_ohms, params.r_off_ohms);
    if (clamped) *clamped = r != mem_r_ohms;
    const double g_off = 1.0 / params.r_off_ohms;
    const double g_on = 1.0 / params.r_on_ohms;
    const double e = (1.0 / r - g_off) / (g_on - g_off);
    return gain.g_min + (gain.g_max - gain.g_min) * e;
}

ActionKind controller_step(ControllerState& s, const encoding::TactileAttribute& attr,
                           double gain, const ControllerConfig& cfg) {
    using encoding::TactileKind;
    const bool hazardous =
        attr.kind == TactileKind::Hazard || attr.kind == TactileKind::PersistentHazard;
    const bool mild = attr.kind == TactileKind::Mild;
    s.mild_streak = mild ? s.mild_streak + 1 : 0;

    switch (s.phase) {
        case Phase::Approach:
            if (attr.kind != TactileKind::NoContact) {
                s.phase = Phase::Contact;
                s.grip_force_cmd_n = cfg.initial_grip_n;
            }
            break;
        case Phase::Contact:
            if (hazardous && gain >= cfg.pain_gain) {
                s.phase = Phase::PainReflex;
                return ActionKind::PainRegrasp;
            }
            if (mild && s.mild_streak >= cfg.stable_after_mild_steps) s.phase = Phase::StableHold;
            break;
        case Phase::PainReflex:
            // one-step transient; the regrasp command was issued on entry
            s.phase = Phase::Regrasp;
            break;
        case Phase::Regrasp:
            if (mild && s.mild_streak >= cfg.stable_after_mild_steps) s.phase = Phase::StableHold;
            break;
        case Phase::StableHold:
            if (attr.kind == TactileKind::SlipSpike) {
                s.phase = Phase::SlipRecovery;
                s.grip_force_cmd_n =
                    std::min(cfg.f_max_n, s.grip_force_cmd_n * cfg.grip_increase_factor);
                return ActionKind::GripIncrease;
            }
            if (hazardous) s.phase = Phase::Contact;  // re-alert; pain only from Contact
            break;
        case Phase::SlipRecovery:
            // holds the normalized-attention regime for the rest of the grasp
            break;
    }
    return ActionKind::None;
}

std::optional<std::size_t> GraspTrace::find_marker(const std::string& name) const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string& ev = rows[i].event;
        std::size_t pos = 0;
        while (pos <= ev.size()) {
            const std::size_t end = std::min(ev.find(';', pos), ev.size());
            if (ev.compare(pos, end - pos, name) == 0) return i;
            pos = end + 1;
        }
    }
    return std::nullopt;
}

namespace {

// Piecewise force profile driven by scenario directives.
class ForceProfile {
public:
    explicit ForceProfile(const std::vector<Directive>& events) : events_(events) {}

    // Advance to time t and return the force. Must be called with
    // nondecreasing t. Marker names firing in (previous t, t] are appended
    // to `fired`.
    double at(double t, std::vector<std::string>* fired) {
        while (next_ < events_.size() && events_[next_].t_s <= t) {
            const Directive& d = events_[next_];
            switch (d.kind) {
                case Directive::Kind::Force:
                    base_ = d.a;
                    ramp_active_ = false;
                    break;
                case Directive::Kind::Ramp:
                    ramp_from_ = value_at(d.t_s);
                    ramp_to_ = d.a;
                    ramp_t0_ = d.t_s;
                    ramp_t1_ = d.t_s + std::max(d.b, 1e-12);
                    ramp_active_ = true;
                    break;
                case Directive::Kind::Wobble:
                    wob_amp_ = d.a;
                    wob_freq_ = d.b;
                    wob_t0_ = d.t_s;
                    wob_t1_ = d.t_s + d.c;
                    break;
                case Directive::Kind::Marker:
                    if (fired) fired->push_back(d.name);
                    break;
            }
            ++next_;
        }
        return value_at(t);
    }

private:
    double value_at(double t) const {
        double f = base_;
        if (ramp_active_) {
            if (t >= ramp_t1_) {
                f = ramp_to_;
            } else if (t > ramp_t0_) {
                f = ramp_from_ + (ramp_to_ - ramp_from_) * (t - ramp_t0_) / (ramp_t1_ - ramp_t0_);
            } else {
                f = ramp_from_;
            }
        }
        if (t >= wob_t0_ && t < wob_t1_)
            f += wob_amp_ * std::sin(2.0 * std::acos(-1.0) * wob_freq_ * (t - wob_t0_));
        return std::max(0.0, f);
    }

    const std::vector<Directive>& events_;
    std::size_t next_ = 0;
    double base_ = 0.0;
    bool ramp_active_ = false;
    double ramp_from_ = 0.0, ramp_to_ = 0.0, ramp_t0_ = 0.0, ramp_t1_ = 0.0;
    double wob_amp_ = 0.0, wob_freq_ = 0.0, wob_t0_ = 0.0, wob_t1_ = -1.0;
};

void append_event(std::string& ev, const char* name) {
    if (!ev.empty()) ev += ';';
    ev += name;
}

}  // namespace

GraspTrace run_scenario(const GraspScenario& scenario, const SimConfig& cfg) {
    scenario.validate();
    cfg.device.validate();
    cfg.table.validate();
    cfg.piezo.validate();

    // A ramp directive resolves its start value through the same profile, so
    // the base value seen when it fires must be consistent; ForceProfile
    // handles that by resolving directives in time order.
    ForceProfile profile(scenario.events);

    device::MemristorState state =
        scenario.initial_x >= 0.0
            ? device::MemristorState{std::clamp(scenario.initial_x, 0.0, 1.0)}
            : device::state_from_resistance(cfg.table.mid_center_ohms, cfg.device);
    ControllerState ctrl;

    const double dt = scenario.control_dt_s;
    const auto n_steps = static_cast<std::size_t>(std::llround(scenario.duration_s / dt));
    std::deque<std::pair<double, double>> window;

    GraspTrace trace;
    trace.rows.reserve(n_steps);
    bool seen_contact = false, seen_hazard = false, seen_sensitized = false, seen_amp = false;
    bool seen_adapted = false, seen_normalized = false;
    encoding::TactileKind prev_attr = encoding::TactileKind::NoContact;

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        std::vector<std::string> fired;
        const double force = profile.at(t, &fired);

        window.emplace_back(t, force);
        while (!window.empty() && window.front().first < t - cfg.window_s - 0.5 * dt)
            window.pop_front();

        const double piezo_r = piezo_resistance(force, cfg.piezo);
        const double r_pre = device::resistance(state, cfg.device);
        const encoding::TactileAttribute attr = encoding::extract_tactile(
            {window.begin(), window.end()}, r_pre, cfg.thresholds);

        device::PulseTrain train;
        if (t < scenario.modulation_start_s) {
            train.amplitude_v = 0.0;
        } else if (attr.kind == encoding::TactileKind::NoContact ||
                   ctrl.phase == Phase::SlipRecovery) {
            // recovery regime: settle toward the normal (mid) perception state
            train = encoding::normalize_toward_mid(state, cfg.device, cfg.table);
        } else {
            train = encoding::scheme_for(attr, r_pre, cfg.table);
        }
        state = device::apply_pulse_train(state, train, cfg.device);
        const double mem_r = device::resistance(state, cfg.device);

        bool clamped = false;
        const double gain =
            cfg.unity_gain ? 1.0 : gain_from_resistance(mem_r, cfg.gain, cfg.device, &clamped);

        const ActionKind action = controller_step(ctrl, attr, gain, cfg.controller);

        TraceRow row;
        row.t_s = t;
        row.piezo_r_ohms = piezo_r;
        row.mem_r_ohms = mem_r;
        row.gain = gain;
        row.force_cmd_n = ctrl.grip_force_cmd_n;
        row.attr = attr.kind;
        row.force_n = force;
        row.output = gain * force;
        row.phase = ctrl.phase;
        row.gain_clamped = clamped;

        for (const std::string& m : fired) append_event(row.event, m.c_str());
        if (clamped) append_event(row.event, "gain_clamped");
        if (!seen_contact && attr.kind != encoding::TactileKind::NoContact) {
            seen_contact = true;
            append_event(row.event, "contact");
        }
        if (!seen_hazard && (attr.kind == encoding::TactileKind::Hazard ||
                             attr.kind == encoding::TactileKind::PersistentHazard)) {
            seen_hazard = true;
            append_event(row.event, "hazard");
        }
        if (!seen_sensitized && attr.kind == encoding::TactileKind::PersistentHazard) {
            seen_sensitized = true;
            append_event(row.event, "sensitized");
        }
        if (!seen_amp && mem_r < cfg.marker_low_ohms && gain >= cfg.controller.pain_gain) {
            seen_amp = true;
            append_event(row.event, "amp500");
        }
        if (action == ActionKind::PainRegrasp) append_event(row.event, "pain_reflex");
        if (action == ActionKind::GripIncrease) append_event(row.event, "grip_increase");
        if (attr.kind == encoding::TactileKind::SlipSpike &&
            prev_attr != encoding::TactileKind::SlipSpike)
            append_event(row.event, "slip");
        if (seen_hazard && !seen_adapted && mem_r > cfg.table.high_min_ohms &&
            r_pre <= cfg.table.high_min_ohms) {
            seen_adapted = true;
            append_event(row.event, "adapted_high");
        }
        if (ctrl.phase == Phase::SlipRecovery && !seen_normalized &&
            std::abs(mem_r - cfg.table.mid_center_ohms) <=
                cfg.table.normalize_deadband * cfg.table.mid_center_ohms) {
            seen_normalized = true;
            append_event(row.event, "normalized");
        }

        prev_attr = attr.kind;
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

std::vector<double> detect_slip(const std::vector<std::pair<double, double>>& window,
                                const SlipDetectConfig& cfg) {
    std::vector<double> events;
    double last = -1e300;
    for (std::size_t i = 1; i < window.size(); ++i) {
        const double dt = window[i].first - window[i - 1].first;
        if (!(dt > 0.0)) continue;
        const double rate = std::abs(window[i].second - window[i - 1].second) / dt;
        if (rate >= cfg.threshold_ohms_per_s && window[i].first - last >= cfg.min_gap_s) {
            events.push_back(window[i].first);
            last = window[i].first;
        }
    }
    return events;
}

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Approach: return "approach";
        case Phase::Contact: return "contact";
        case Phase::PainReflex: return "pain_reflex";
        case Phase::Regrasp: return "regrasp";
        case Phase::StableHold: return "stable_hold";
        case Phase::SlipRecovery: return "slip_recovery";
    }
    return "?";
}

const char* kind_name(encoding::TactileKind k) {
    using encoding::TactileKind;
    switch (k) {
        case TactileKind::NoContact: return "no_contact";
        case TactileKind::Mild: return "mild";
        case TactileKind::Hazard: return "hazard";
        case TactileKind::PersistentHazard: return "persistent_hazard";
        case TactileKind::SlipSpike: return "slip_spike";
    }
    return "?";
}

}  // namespace dnc::tactile
