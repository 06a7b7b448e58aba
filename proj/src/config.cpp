#include "dnc/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dnc::config {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, delim)) out.push_back(trim(tok));
    return out;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ConfigError("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + s + "' for " + what);
    }
}

device::PulseTrain parse_train(const std::string& s, const std::string& what) {
    std::stringstream ss(s);
    device::PulseTrain t;
    if (!(ss >> t.amplitude_v >> t.pulse_width_s >> t.duty_cycle >> t.count))
        throw ConfigError(what + ": expected 'amplitude_v width_s duty count'");
    return t;
}

std::string train_str(const device::PulseTrain& t) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g %d", t.amplitude_v, t.pulse_width_s,
                  t.duty_cycle, t.count);
    return buf;
}

}  // namespace

const Section* IniFile::find(const std::string& name) const {
    for (const Section& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

double IniFile::number(const std::string& section, const std::string& key,
                       double fallback) const {
    const Section* s = find(section);
    if (!s) return fallback;
    auto it = s->kv.find(key);
    if (it == s->kv.end()) return fallback;
    return parse_number(it->second, section + "." + key);
}

int IniFile::integer(const std::string& section, const std::string& key, int fallback) const {
    return static_cast<int>(std::llround(number(section, key, fallback)));
}

IniFile parse_ini(const std::string& text, const std::string& origin) {
    IniFile ini;
    Section* cur = nullptr;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": unterminated section");
            ini.sections.push_back(Section{trim(t.substr(1, t.size() - 2)), {}, {}});
            cur = &ini.sections.back();
            continue;
        }
        if (!cur)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": line outside a section");
        const std::size_t eq = t.find('=');
        const std::size_t comma = t.find(',');
        if (eq != std::string::npos && (comma == std::string::npos || eq < comma)) {
            cur->kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
        } else {
            cur->rows.push_back(t);
        }
    }
    return ini;
}

IniFile load_ini(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_ini(ss.str(), path);
}

RunConfig default_config() {
    RunConfig c;
    c.vision.device = c.tactile.device;
    c.vision.table = c.tactile.table;
    c.vision.fast_threshold = 0.30;
    return c;
}

RunConfig apply_config(RunConfig c, const IniFile& ini) {
    auto& d = c.tactile.device;
    d.r_on_ohms = ini.number("device", "r_on_ohms", d.r_on_ohms);
    d.r_off_ohms = ini.number("device", "r_off_ohms", d.r_off_ohms);
    d.v_threshold_pos_v = ini.number("device", "v_threshold_pos_v", d.v_threshold_pos_v);
    d.v_threshold_neg_v = ini.number("device", "v_threshold_neg_v", d.v_threshold_neg_v);
    d.alpha_pos = ini.number("device", "alpha_pos", d.alpha_pos);
    d.alpha_neg = ini.number("device", "alpha_neg", d.alpha_neg);
    d.window_exponent = ini.integer("device", "window_exponent", d.window_exponent);
    d.validate();

    auto& t = c.tactile.table;
    t.low_max_ohms = ini.number("bands", "low_max_ohms", t.low_max_ohms);
    t.mid_center_ohms = ini.number("bands", "mid_center_ohms", t.mid_center_ohms);
    t.high_min_ohms = ini.number("bands", "high_min_ohms", t.high_min_ohms);
    t.sensitization_threshold_ohms =
        ini.number("bands", "sensitization_threshold_ohms", t.sensitization_threshold_ohms);
    t.drive_floor_ohms = ini.number("bands", "drive_floor_ohms", t.drive_floor_ohms);
    if (const Section* s = ini.find("schemes")) {
        auto train = [&](const char* key, device::PulseTrain& into) {
            auto it = s->kv.find(key);
            if (it != s->kv.end()) into = parse_train(it->second, std::string("schemes.") + key);
        };
        train("hazard", t.hazard);
        train("sensitized", t.sensitized);
        train("adapt_slow", t.adapt_slow);
        train("adapt_slow_low", t.adapt_slow_low);
        train("adapt_fast", t.adapt_fast);
        train("slip_spike", t.slip_spike);
        train("release", t.release);
    }
    t.normalize_v = ini.number("schemes", "normalize_v", t.normalize_v);
    t.normalize_deadband = ini.number("schemes", "normalize_deadband", t.normalize_deadband);
    t.visual_amp_gain_v_per_unit =
        ini.number("schemes", "visual_amp_gain", t.visual_amp_gain_v_per_unit);
    t.visual_amp_max_v = ini.number("schemes", "visual_amp_max", t.visual_amp_max_v);
    t.release_floor_ohms = ini.number("schemes", "release_floor_ohms", t.release_floor_ohms);
    t.validate();

    auto& th = c.tactile.thresholds;
    th.f_contact_n = ini.number("tactile", "f_contact_n", th.f_contact_n);
    th.f_hazard_n = ini.number("tactile", "f_hazard_n", th.f_hazard_n);
    th.spike_rate_n_per_s = ini.number("tactile", "spike_rate_n_per_s", th.spike_rate_n_per_s);
    th.sensitization_threshold_ohms = t.sensitization_threshold_ohms;
    c.tactile.window_s = ini.number("tactile", "window_s", c.tactile.window_s);
    c.tactile.marker_low_ohms = ini.number("tactile", "marker_low_ohms", c.tactile.marker_low_ohms);

    auto& p = c.tactile.piezo;
    p.r_unloaded_ohms = ini.number("piezo", "r_unloaded_ohms", p.r_unloaded_ohms);
    p.sensitivity_ohms_per_n = ini.number("piezo", "sensitivity_ohms_per_n", p.sensitivity_ohms_per_n);
    p.r_floor_ohms = ini.number("piezo", "r_floor_ohms", p.r_floor_ohms);
    p.validate();

    c.tactile.gain.g_min = ini.number("gain", "g_min", c.tactile.gain.g_min);
    c.tactile.gain.g_max = ini.number("gain", "g_max", c.tactile.gain.g_max);

    auto& ct = c.tactile.controller;
    ct.pain_gain = ini.number("controller", "pain_gain", ct.pain_gain);
    ct.grip_increase_factor = ini.number("controller", "grip_increase_factor", ct.grip_increase_factor);
    ct.f_max_n = ini.number("controller", "f_max_n", ct.f_max_n);
    ct.initial_grip_n = ini.number("controller", "initial_grip_n", ct.initial_grip_n);
    ct.stable_after_mild_steps =
        ini.integer("controller", "stable_after_mild_steps", ct.stable_after_mild_steps);

    auto& v = c.vision;
    v.device = d;
    v.table = t;
    v.grid.cols = ini.integer("vision", "cols", v.grid.cols);
    v.grid.rows = ini.integer("vision", "rows", v.grid.rows);
    v.fast_threshold = ini.number("vision", "fast_threshold", v.fast_threshold);
    v.binarize_ohms = ini.number("vision", "binarize_ohms", v.binarize_ohms);
    v.initial_x = ini.number("vision", "initial_x", v.initial_x);
    v.orientation_window = ini.integer("vision", "orientation_window", v.orientation_window);
    v.threads = ini.integer("vision", "threads", v.threads);

    auto& sw = c.sweep;
    sw.peak_to_peak_v = ini.number("sweep", "peak_to_peak_v", sw.peak_to_peak_v);
    sw.frequency_hz = ini.number("sweep", "frequency_hz", sw.frequency_hz);
    sw.series_resistance_ohms = ini.number("sweep", "series_resistance_ohms", sw.series_resistance_ohms);
    sw.samples_per_period = ini.integer("sweep", "samples_per_period", sw.samples_per_period);
    sw.periods = ini.integer("sweep", "periods", sw.periods);

    c.seed = static_cast<std::uint64_t>(ini.number("run", "seed", static_cast<double>(c.seed)));
    return c;
}

RunConfig load_config(const std::string& path) {
    return apply_config(default_config(), load_ini(path));
}

std::string RunConfig::serialize() const {
    std::ostringstream os;
    const auto& d = tactile.device;
    const auto& t = tactile.table;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "device %.9g %.9g %.9g %.9g %.9g %.9g %d\n"
                  "bands %.9g %.9g %.9g %.9g %.9g\n",
                  d.r_on_ohms, d.r_off_ohms, d.v_threshold_pos_v, d.v_threshold_neg_v,
                  d.alpha_pos, d.alpha_neg, d.window_exponent, t.low_max_ohms, t.mid_center_ohms,
                  t.high_min_ohms, t.sensitization_threshold_ohms, t.drive_floor_ohms);
    os << buf;
    os << "hazard " << train_str(t.hazard) << "\nsensitized " << train_str(t.sensitized)
       << "\nadapt_slow " << train_str(t.adapt_slow) << "\nadapt_slow_low "
       << train_str(t.adapt_slow_low) << "\nadapt_fast " << train_str(t.adapt_fast)
       << "\nslip_spike " << train_str(t.slip_spike) << "\nrelease " << train_str(t.release)
       << "\n";
    std::snprintf(buf, sizeof buf, "normalize %.9g %.9g visual %.9g %.9g %.9g\n", t.normalize_v,
                  t.normalize_deadband, t.visual_amp_gain_v_per_unit, t.visual_amp_max_v,
                  t.release_floor_ohms);
    os << buf;
    const auto& th = tactile.thresholds;
    const auto& p = tactile.piezo;
    const auto& ct = tactile.controller;
    std::snprintf(buf, sizeof buf,
                  "tactile %.9g %.9g %.9g %.9g %.9g piezo %.9g %.9g %.9g gain %.9g %.9g "
                  "ctrl %.9g %.9g %.9g %.9g %d\n",
                  th.f_contact_n, th.f_hazard_n, th.spike_rate_n_per_s, tactile.window_s,
                  tactile.marker_low_ohms, p.r_unloaded_ohms, p.sensitivity_ohms_per_n,
                  p.r_floor_ohms, tactile.gain.g_min, tactile.gain.g_max, ct.pain_gain,
                  ct.grip_increase_factor, ct.f_max_n, ct.initial_grip_n,
                  ct.stable_after_mild_steps);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "vision %d %d %.9g %.9g %.9g %d sweep %.9g %.9g %.9g %d %d seed %llu\n",
                  vision.grid.cols, vision.grid.rows, vision.fast_threshold, vision.binarize_ohms,
                  vision.initial_x, vision.orientation_window, sweep.peak_to_peak_v,
                  sweep.frequency_hz, sweep.series_resistance_ohms, sweep.samples_per_period,
                  sweep.periods, static_cast<unsigned long long>(seed));
    os << buf;
    return os.str();
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string RunConfig::fingerprint() const { return to_hex(fnv1a64(serialize())); }

tactile::GraspScenario parse_scenario(const IniFile& ini, const std::string& origin) {
    tactile::GraspScenario sc;
    const Section* meta = ini.find("scenario");
    if (!meta) throw ConfigError(origin + ": missing [scenario] section");
    auto kv = [&](const char* key, double fallback) { return ini.number("scenario", key, fallback); };
    auto it = meta->kv.find("name");
    sc.name = it != meta->kv.end() ? it->second : origin;
    sc.duration_s = kv("duration_s", 0.0);
    sc.control_dt_s = kv("control_dt_s", 1e-3);
    sc.initial_x = kv("initial_x", -1.0);
    sc.modulation_start_s = kv("modulation_start_s", 0.0);

    const Section* ev = ini.find("events");
    if (ev) {
        for (const std::string& row : ev->rows) {
            const auto parts = split(row, ',');
            if (parts.size() < 2)
                throw ConfigError(origin + ": bad event row '" + row + "'");
            tactile::Directive d;
            d.t_s = parse_number(parts[0], "event time");
            const std::string& kind = parts[1];
            const std::string value = parts.size() > 2 ? parts[2] : "";
            if (kind == "force") {
                d.kind = tactile::Directive::Kind::Force;
                d.a = parse_number(value, "force value");
            } else if (kind == "ramp") {
                d.kind = tactile::Directive::Kind::Ramp;
                std::stringstream ss(value);
                if (!(ss >> d.a >> d.b))
                    throw ConfigError(origin + ": ramp needs 'target duration'");
            } else if (kind == "wobble") {
                d.kind = tactile::Directive::Kind::Wobble;
                std::stringstream ss(value);
                if (!(ss >> d.a >> d.b >> d.c))
                    throw ConfigError(origin + ": wobble needs 'amplitude freq duration'");
            } else if (kind == "marker") {
                d.kind = tactile::Directive::Kind::Marker;
                if (value.empty()) throw ConfigError(origin + ": marker needs a name");
                d.name = value;
            } else {
                throw ConfigError(origin + ": unknown directive '" + kind + "'");
            }
            sc.events.push_back(std::move(d));
        }
    }

    if (const Section* ex = ini.find("expect")) {
        for (const std::string& row : ex->rows) {
            const auto parts = split(row, ',');
            if (parts.size() != 3)
                throw ConfigError(origin + ": expect rows are 'marker, t_min, t_max'");
            sc.expected.push_back(tactile::ExpectedMarker{
                parts[0], parse_number(parts[1], "t_min"), parse_number(parts[2], "t_max")});
        }
    }
    sc.validate();
    return sc;
}

tactile::GraspScenario load_scenario(const std::string& path) {
    return parse_scenario(load_ini(path), path);
}

}  // namespace dnc::config
