#include "dnc/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dnc::encoding {

void SchemeTable::validate() const {
    if (!(low_max_ohms < high_min_ohms))
        throw std::invalid_argument("scheme table: low_max must be below high_min");
    if (!(mid_center_ohms > low_max_ohms) || !(mid_center_ohms < high_min_ohms))
        throw std::invalid_argument("scheme table: mid_center must lie between the bands");
    if (sensitized.amplitude_v < hazard.amplitude_v ||
        sensitized.duty_cycle < hazard.duty_cycle)
        throw std::invalid_argument(
            "scheme table: sensitized template must not be weaker than hazard");
    if (!(adapt_fast.amplitude_v <= adapt_slow.amplitude_v))
        throw std::invalid_argument("scheme table: fast adaptation must drive harder than slow");
    hazard.validate();
    sensitized.validate();
    adapt_slow.validate();
    adapt_slow_low.validate();
    adapt_fast.validate();
    slip_spike.validate();
    release.validate();
}

Band SchemeTable::band_of(double r_ohms) const {
    if (r_ohms < low_max_ohms) return Band::Low;
    if (r_ohms > high_min_ohms) return Band::High;
    return Band::Mid;
}

TactileAttribute extract_tactile(const std::vector<std::pair<double, double>>& window,
                                 double device_r_ohms, const TactileThresholds& th) {
    if (window.empty()) throw std::invalid_argument("extract_tactile: empty window");
    double peak = 0.0;
    double rate = 0.0;
    for (std::size_t i = 0; i < window.size(); ++i) {
        peak = std::max(peak, window[i].second);
        if (i > 0) {
            const double dt = window[i].first - window[i - 1].first;
            if (dt > 0.0)
                rate = std::max(rate, std::abs(window[i].second - window[i - 1].second) / dt);
        }
    }
    TactileAttribute attr;
    attr.magnitude_n = peak;
    attr.spike_rate_n_per_s = rate;
    if (peak < th.f_contact_n) {
        attr.kind = TactileKind::NoContact;
    } else if (rate >= th.spike_rate_n_per_s) {
        attr.kind = TactileKind::SlipSpike;
    } else if (peak >= th.f_hazard_n) {
        attr.kind = device_r_ohms < th.sensitization_threshold_ohms
                        ? TactileKind::PersistentHazard
                        : TactileKind::Hazard;
    } else {
        attr.kind = TactileKind::Mild;
    }
    return attr;
}

VisualChange extract_visual(double prev, double curr, double fast_threshold) {
    if (!(prev >= 0.0) || prev > 2.56 || !(curr >= 0.0) || curr > 2.56)
        throw std::invalid_argument("extract_visual: intensity outside [0, 2.56]");
    VisualChange c;
    c.delta = std::abs(curr - prev);
    c.cls = c.delta >= fast_threshold ? VisualClass::Fast : VisualClass::Slow;
    return c;
}

namespace {

device::PulseTrain null_train(const device::PulseTrain& like) {
    device::PulseTrain t = like;
    t.amplitude_v = 0.0;
    return t;
}

}  // namespace

device::PulseTrain scheme_for(const TactileAttribute& attr, double device_r_ohms,
                              const SchemeTable& table) {
    const Band band = table.band_of(device_r_ohms);
    switch (attr.kind) {
        case TactileKind::NoContact:
            return null_train(table.adapt_slow);
        case TactileKind::Mild:
            if (band == Band::High) return null_train(table.adapt_slow);  // adapted out
            return band == Band::Low ? table.adapt_slow_low : table.adapt_slow;
        case TactileKind::Hazard: {
            // A hazard observed while the device is already sensitized is the
            // persistent branch regardless of how the caller classified it.
            const bool sensitized = device_r_ohms < table.sensitization_threshold_ohms;
            const device::PulseTrain& t = sensitized ? table.sensitized : table.hazard;
            return device_r_ohms <= table.drive_floor_ohms ? null_train(t) : t;
        }
        case TactileKind::PersistentHazard:
            return device_r_ohms <= table.drive_floor_ohms ? null_train(table.sensitized)
                                                           : table.sensitized;
        case TactileKind::SlipSpike:
            return device_r_ohms <= table.drive_floor_ohms ? null_train(table.slip_spike)
                                                           : table.slip_spike;
    }
    throw std::runtime_error("scheme_for: attribute not covered by the table");
}

device::PulseTrain scheme_for(const VisualChange& change, double device_r_ohms,
                              const SchemeTable& table) {
    if (change.cls == VisualClass::Fast) {
        device::PulseTrain t = table.visual_fast_template;
        t.amplitude_v =
            std::min(table.visual_amp_max_v, table.visual_amp_gain_v_per_unit * change.delta);
        if (device_r_ohms <= table.drive_floor_ohms) t.amplitude_v = 0.0;
        return t;
    }
    // Slow: fixed release toward the high band, independent of delta.
    if (device_r_ohms >= table.release_floor_ohms) return null_train(table.release);
    return table.release;
}

device::PulseTrain normalize_toward_mid(const device::MemristorState& state,
                                        const device::DeviceParams& params,
                                        const SchemeTable& table) {
    const double r = device::resistance(state, params);
    device::PulseTrain t = table.normalize_template;
    if (std::abs(r - table.mid_center_ohms) <= table.normalize_deadband * table.mid_center_ohms) {
        t.amplitude_v = 0.0;
    } else if (r > table.mid_center_ohms) {
        t.amplitude_v = +table.normalize_v;
    } else {
        t.amplitude_v = -table.normalize_v;
    }
    return t;
}

device::PulseTrain adaptation_schedule(AdaptationSpeed speed, const SchemeTable& table) {
    return speed == AdaptationSpeed::Fast ? table.adapt_fast : table.adapt_slow;
}

}  // namespace dnc::encoding
