#pragma once

#include <utility>
#include <vector>

#include "dnc/device.hpp"

// Feature extraction and the piecewise pulse-encoding scheme. Tactile force
// windows and per-pixel visual changes are classified into attributes; a
// declared scheme table then maps (attribute, device resistance band) to a
// pulse train template. The shipped default table is the normative mapping.
namespace dnc::encoding {

enum class TactileKind { NoContact, Mild, Hazard, PersistentHazard, SlipSpike };

struct TactileAttribute {
    TactileKind kind = TactileKind::NoContact;
    double magnitude_n = 0.0;       // peak force in the window
    double spike_rate_n_per_s = 0.0;  // max |dF/dt| in the window
};

enum class VisualClass { Fast, Slow };

struct VisualChange {
    double delta = 0.0;  // |curr - prev| per compressed pixel, intensity units
    VisualClass cls = VisualClass::Slow;
};

struct TactileThresholds {
    double f_contact_n = 0.2;
    double f_hazard_n = 5.0;
    double spike_rate_n_per_s = 50.0;
    double sensitization_threshold_ohms = 100e3;
};

enum class Band { Low, Mid, High };

struct SchemeTable {
    // Resistance bands: low < low_max <= mid <= high_min < high.
    double low_max_ohms = 100e3;
    double mid_center_ohms = 170e3;
    double high_min_ohms = 250e3;
    double sensitization_threshold_ohms = 100e3;
    // Positive (amplifying) trains are withheld once resistance has reached
    // this floor: the device has saturated and harder driving would only
    // push the state into the numerically degenerate corner.
    double drive_floor_ohms = 27e3;

    // Tactile templates.
    device::PulseTrain hazard{+0.60, 10e-6, 0.50, 1};
    device::PulseTrain sensitized{+0.80, 10e-6, 0.80, 1};  // PersistentHazard
    device::PulseTrain adapt_slow{-0.30, 10e-6, 0.30, 1};  // Mild, mid band
    device::PulseTrain adapt_slow_low{-0.30, 10e-6, 0.30, 1};  // Mild, low band
    device::PulseTrain adapt_fast{-0.50, 10e-6, 0.60, 1};
    device::PulseTrain slip_spike{+0.55, 10e-6, 0.50, 1};

    // Normalization toward the mid band; sign is set per call.
    double normalize_v = 0.17;
    device::PulseTrain normalize_template{0.0, 10e-6, 0.50, 1};
    double normalize_deadband = 0.10;  // fraction of mid_center

    // Visual templates. Fast changes scale a positive pulse with delta;
    // slow changes apply the fixed release train while the cell is below
    // the high band.
    double visual_amp_gain_v_per_unit = 0.5;
    double visual_amp_max_v = 0.8;
    device::PulseTrain visual_fast_template{0.0, 10e-6, 0.50, 1};
    device::PulseTrain release{-0.20, 10e-6, 0.50, 1};
    double release_floor_ohms = 250e3;  // stop releasing once in the high band

    void validate() const;
    Band band_of(double r_ohms) const;
};

enum class AdaptationSpeed { Slow, Fast };

// Classify a time-sorted force window. Precedence: NoContact (peak below
// contact force), then SlipSpike (rate), then Hazard / PersistentHazard
// (peak, with the persistent branch requiring device resistance below the
// sensitization threshold), else Mild. Throws on an empty window.
TactileAttribute extract_tactile(const std::vector<std::pair<double, double>>& window_t_force,
                                 double device_r_ohms, const TactileThresholds& thresholds);

// Per-pixel change classification. Inputs must lie in [0, 2.56].
VisualChange extract_visual(double prev, double curr, double fast_threshold);

// Scheme lookups. Pure functions of (attribute, device resistance, table).
device::PulseTrain scheme_for(const TactileAttribute& attr, double device_r_ohms,
                              const SchemeTable& table);
device::PulseTrain scheme_for(const VisualChange& change, double device_r_ohms,
                              const SchemeTable& table);

// One-shot corrective train toward the mid (normal perception) band:
// positive above mid_center, negative below, null within the deadband.
device::PulseTrain normalize_toward_mid(const device::MemristorState& state,
                                        const device::DeviceParams& params,
                                        const SchemeTable& table);

device::PulseTrain adaptation_schedule(AdaptationSpeed speed, const SchemeTable& table);

}  // namespace dnc::encoding
