// dncsim: memristor-based differential perception simulator.
//
// Subcommands mirror the pipeline stages: device sweep, tactile run,
// vision run, synth gen, eval overlap. Every run writes its artifacts plus a
// manifest carrying the resolved-config fingerprint; identical inputs and
// seeds reproduce identical CSV/PGM bytes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dnc/config.hpp"
#include "dnc/eval.hpp"
#include "dnc/io.hpp"
#include "dnc/synth.hpp"
#include "dnc/tactile.hpp"
#include "dnc/vision.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

dnc::config::RunConfig load_run_config(const std::string& path) {
    return path.empty() ? dnc::config::default_config() : dnc::config::load_config(path);
}

void write_run_manifest(const std::string& out_dir, const dnc::config::RunConfig& cfg,
                        std::vector<dnc::io::ManifestEntry> entries, double wall_ms) {
    entries.insert(entries.begin(), {"config_fingerprint", cfg.fingerprint()});
    entries.push_back({"wall_clock_ms", fmt("%.3f", wall_ms)});
    dnc::io::write_manifest(out_dir + "/manifest.txt", entries);
}

int cmd_device_sweep(const std::string& config_path, const std::string& out_dir) {
    const auto t0 = Clock::now();
    auto cfg = load_run_config(config_path);
    dnc::io::ensure_dir(out_dir);

    const auto initial =
        dnc::device::state_from_resistance(cfg.tactile.table.mid_center_ohms, cfg.tactile.device);
    const auto trace = dnc::device::iv_sweep(cfg.sweep, cfg.tactile.device, initial);
    dnc::io::write_sweep_csv(out_dir + "/sweep.csv", trace);

    // pinch check: both zero crossings stay near the origin, loop area nonzero
    const int spp = cfg.sweep.samples_per_period;
    double worst_crossing_a = 0.0;
    for (int k = 0; k < cfg.sweep.periods * 2; ++k)
        worst_crossing_a = std::max(
            worst_crossing_a, std::abs(trace[static_cast<std::size_t>(k) * spp / 2].current_a));
    double area = 0.0;
    const std::size_t base = static_cast<std::size_t>(spp) * (cfg.sweep.periods - 1);
    for (int k = 0; k < spp; ++k) {
        const auto& a = trace[base + k];
        const auto& b = trace[base + (k + 1) % spp];
        area += a.device_v * b.current_a - b.device_v * a.current_a;
    }
    area = std::abs(0.5 * area);
    const bool hysteretic = area > 1e-10;
    const bool pinched = worst_crossing_a < 1e-6;

    std::string summary;
    summary += "pinched = " + std::string(pinched ? "yes" : "no") + "\n";
    summary += "hysteretic = " + std::string(hysteretic ? "yes" : "no") + "\n";
    summary += "worst_zero_crossing_a = " + fmt("%.9g", worst_crossing_a) + "\n";
    summary += "loop_area_va = " + fmt("%.9g", area) + "\n";
    dnc::io::write_text(out_dir + "/sweep_summary.txt", summary);
    std::cout << summary;

    write_run_manifest(out_dir, cfg,
                       {{"command", "device sweep"},
                        {"output", out_dir + "/sweep.csv"},
                        {"rows", std::to_string(trace.size())}},
                       ms_since(t0));
    return pinched && hysteretic ? 0 : 1;
}

int check_markers(const dnc::tactile::GraspScenario& scenario,
                  const dnc::tactile::GraspTrace& trace) {
    int failures = 0;
    double prev_t = -1.0;
    for (const auto& exp : scenario.expected) {
        const auto idx = trace.find_marker(exp.name);
        if (!idx) {
            std::cerr << "marker '" << exp.name << "' not found (expected in [" << exp.t_min_s
                      << ", " << exp.t_max_s << "] s)\n";
            ++failures;
            continue;
        }
        const double t = trace.rows[*idx].t_s;
        if (t < exp.t_min_s || t > exp.t_max_s) {
            std::cerr << "marker '" << exp.name << "' at " << t << " s, expected ["
                      << exp.t_min_s << ", " << exp.t_max_s << "] s\n";
            ++failures;
        }
        if (t < prev_t) {
            std::cerr << "marker '" << exp.name << "' out of order at " << t << " s\n";
            ++failures;
        }
        prev_t = std::max(prev_t, t);
    }
    return failures;
}

int cmd_tactile_run(const std::string& config_path, const std::string& scenario_path,
                    const std::string& out_dir) {
    const auto t0 = Clock::now();
    auto cfg = load_run_config(config_path);
    const auto scenario = dnc::config::load_scenario(scenario_path);
    dnc::io::ensure_dir(out_dir);

    const auto trace = dnc::tactile::run_scenario(scenario, cfg.tactile);
    auto baseline_cfg = cfg.tactile;
    baseline_cfg.unity_gain = true;
    const auto baseline = dnc::tactile::run_scenario(scenario, baseline_cfg);
    dnc::io::write_grasp_csv(out_dir + "/trace.csv", trace);

    std::string report, csv = "metric,value\n";
    double base_peak = 0.0;
    for (const auto& row : baseline.rows) base_peak = std::max(base_peak, row.output);
    if (base_peak > 0.0) {
        const double amp = dnc::eval::amplification_ratio(trace, baseline);
        report += "amplification_ratio_pct = " + fmt("%.2f", amp) + "\n";
        csv += "amplification_ratio_pct," + fmt("%.9g", amp) + "\n";
    } else {
        report += "amplification_ratio_pct = n/a (no stimulus)\n";
    }
    if (trace.find_marker("stable")) {
        double t_eval = trace.rows.back().t_s;
        if (const auto preslip = trace.find_marker("preslip"))
            t_eval = trace.rows[*preslip].t_s;
        const double level = dnc::eval::adaptation_level(trace, t_eval);
        report += "adaptation_level_pct = " + fmt("%.2f", level) + " (at " +
                  fmt("%.3f", t_eval) + " s)\n";
        csv += "adaptation_level_pct," + fmt("%.9g", level) + "\n";
    }
    report += "final_mem_r_ohms = " + fmt("%.1f", trace.rows.back().mem_r_ohms) + "\n";
    csv += "final_mem_r_ohms," + fmt("%.9g", trace.rows.back().mem_r_ohms) + "\n";
    for (std::size_t i = 0; i < trace.rows.size(); ++i)
        if (!trace.rows[i].event.empty())
            report +=
                "event " + fmt("%.3f", trace.rows[i].t_s) + " s: " + trace.rows[i].event + "\n";
    dnc::io::write_text(out_dir + "/report.txt", report);
    dnc::io::write_text(out_dir + "/report.csv", csv);
    std::cout << report;

    const int failures = check_markers(scenario, trace);
    write_run_manifest(out_dir, cfg,
                       {{"command", "tactile run"},
                        {"scenario", scenario_path},
                        {"trace", out_dir + "/trace.csv"},
                        {"markers_matched", failures == 0 ? "yes" : "no"}},
                       ms_since(t0));
    return failures == 0 ? 0 : 1;
}

int cmd_vision_run(const std::string& config_path, const std::string& frames_path,
                   const std::string& labels_path, const std::string& out_dir, bool spectrum) {
    const auto t0 = Clock::now();
    auto cfg = load_run_config(config_path);
    dnc::io::ensure_dir(out_dir);

    const auto frames = dnc::io::load_frames(frames_path);
    if (frames.size() < 2) {
        std::cerr << "need at least two frames\n";
        return 1;
    }
    cfg.vision.grid.validate_frame(frames[0].width, frames[0].height);

    // fold the pipeline by hand so per-frame timing can be recorded
    auto state = dnc::vision::ArrayState::uniform(cfg.vision.grid, cfg.vision.initial_x);
    std::vector<dnc::vision::SaliencyMap> maps;
    std::vector<double> frame_ms;
    dnc::vision::Grid prev = dnc::vision::compress(frames[0], cfg.vision.grid);
    dnc::vision::Grid last_diff(prev.size(), 0.0);
    char name[64];
    for (std::size_t i = 1; i < frames.size(); ++i) {
        const auto f0 = Clock::now();
        dnc::vision::Grid curr = dnc::vision::compress(frames[i], cfg.vision.grid);
        auto result = dnc::vision::update_array(prev, curr, state, cfg.vision);
        frame_ms.push_back(ms_since(f0));

        for (std::size_t c = 0; c < curr.size(); ++c) last_diff[c] = std::abs(curr[c] - prev[c]);
        maps.push_back(std::move(result.map));
        const auto& map = maps.back();
        std::snprintf(name, sizeof name, "/saliency_%04zu.pgm", i - 1);
        dnc::io::write_pgm(out_dir + name,
                           dnc::io::image_from_mask(map.binary, map.cols, map.rows));
        std::snprintf(name, sizeof name, "/resistance_%04zu.csv", i - 1);
        dnc::io::write_grid_csv(out_dir + name, map.resistance_ohms, map.cols, map.rows);
        prev = std::move(curr);
    }

    std::string olog = "map_index,defined,ux,uy\n";
    for (std::size_t i = 0; i < maps.size(); ++i) {
        std::vector<dnc::vision::SaliencyMap> window(maps.begin(), maps.begin() + i + 1);
        const auto dir = dnc::vision::estimate_orientation(window, cfg.vision);
        olog += std::to_string(i) + "," + (dir ? "1" : "0") + "," +
                fmt("%.9g", dir ? dir->ux : 0.0) + "," + fmt("%.9g", dir ? dir->uy : 0.0) + "\n";
    }
    dnc::io::write_text(out_dir + "/orientation.csv", olog);

    if (spectrum) {
        dnc::io::write_grid_csv(out_dir + "/spectrum_compressed.csv",
                                dnc::vision::amplitude_spectrum(prev, cfg.vision.grid),
                                cfg.vision.grid.cols, cfg.vision.grid.rows);
        dnc::io::write_grid_csv(out_dir + "/spectrum_diff.csv",
                                dnc::vision::amplitude_spectrum(last_diff, cfg.vision.grid),
                                cfg.vision.grid.cols, cfg.vision.grid.rows);
    }

    std::vector<double> sorted = frame_ms;
    std::sort(sorted.begin(), sorted.end());
    const double p50 = sorted[sorted.size() / 2];
    std::cout << "frames = " << frames.size() << "\n";
    std::cout << "median_frame_ms = " << fmt("%.3f", p50) << "\n";

    std::vector<dnc::io::ManifestEntry> entries{{"command", "vision run"},
                                                {"frames", frames_path},
                                                {"maps", std::to_string(maps.size())},
                                                {"median_frame_ms", fmt("%.3f", p50)}};
    if (!labels_path.empty()) {
        auto labels = dnc::io::load_masks(labels_path);
        // masks are per frame; maps cover frame transitions, so drop the first label
        if (labels.size() == maps.size() + 1) labels.erase(labels.begin());
        const auto rep = dnc::eval::overlap_rate(maps, labels);
        std::string overlap;
        overlap += "overlap_recall = " + fmt("%.4f", rep.recall) + "\n";
        overlap += "overlap_jaccard = " + fmt("%.4f", rep.jaccard) + "\n";
        overlap += "labeled_cells = " + std::to_string(rep.labeled) + "\n";
        overlap += "vacuous = " + std::string(rep.vacuous ? "yes" : "no") + "\n";
        dnc::io::write_text(out_dir + "/overlap.txt", overlap);
        std::string csv = "frame,recall\n";
        for (std::size_t i = 0; i < rep.per_frame_recall.size(); ++i)
            csv += std::to_string(i) + "," + fmt("%.9g", rep.per_frame_recall[i]) + "\n";
        csv += "total," + fmt("%.9g", rep.recall) + "\n";
        dnc::io::write_text(out_dir + "/overlap.csv", csv);
        std::cout << overlap;
        entries.push_back({"overlap_recall", fmt("%.4f", rep.recall)});
    }
    write_run_manifest(out_dir, cfg, entries, ms_since(t0));
    return 0;
}

int cmd_synth_gen(const std::string& spec_path, const std::string& out_dir) {
    const auto t0 = Clock::now();
    const auto specs = dnc::synth::load_suite(spec_path);
    dnc::io::ensure_dir(out_dir);
    std::vector<dnc::io::ManifestEntry> entries{{"command", "synth gen"}, {"spec", spec_path}};
    for (const auto& spec : specs) {
        const auto video = dnc::synth::generate(spec);
        dnc::synth::write_video(video, out_dir + "/" + spec.name);
        entries.push_back({"video_" + spec.name, std::to_string(spec.frames) + " frames, seed " +
                                                     std::to_string(spec.seed)});
        std::cout << spec.name << ": " << spec.frames << " frames\n";
    }
    const auto cfg = dnc::config::default_config();
    write_run_manifest(out_dir, cfg, std::move(entries), ms_since(t0));
    return 0;
}

int cmd_eval_overlap(const std::string& maps_dir, const std::string& labels_dir,
                     const std::string& out_dir) {
    const auto t0 = Clock::now();
    auto map_masks = dnc::io::load_masks(maps_dir);  // saliency PGMs: black = salient
    auto label_masks = dnc::io::load_masks(labels_dir);
    if (label_masks.size() == map_masks.size() + 1) label_masks.erase(label_masks.begin());
    if (map_masks.size() != label_masks.size()) {
        std::cerr << "map/label count mismatch: " << map_masks.size() << " vs "
                  << label_masks.size() << "\n";
        return 1;
    }
    std::vector<dnc::vision::SaliencyMap> maps;
    for (const auto& m : map_masks) {
        dnc::vision::SaliencyMap sm;
        sm.cols = m.cols;
        sm.rows = m.rows;
        sm.binary.resize(m.cells.size());
        for (std::size_t i = 0; i < m.cells.size(); ++i) sm.binary[i] = m.cells[i] ? 1 : 0;
        maps.push_back(std::move(sm));
    }
    const auto rep = dnc::eval::overlap_rate(maps, label_masks);
    std::string text;
    text += "overlap_recall = " + fmt("%.4f", rep.recall) + "\n";
    text += "overlap_jaccard = " + fmt("%.4f", rep.jaccard) + "\n";
    text += "labeled_cells = " + std::to_string(rep.labeled) + "\n";
    std::cout << text;
    if (!out_dir.empty()) {
        dnc::io::ensure_dir(out_dir);
        dnc::io::write_text(out_dir + "/overlap.txt", text);
        std::string csv = "frame,recall\n";
        for (std::size_t i = 0; i < rep.per_frame_recall.size(); ++i)
            csv += std::to_string(i) + "," + fmt("%.9g", rep.per_frame_recall[i]) + "\n";
        csv += "total," + fmt("%.9g", rep.recall) + "\n";
        dnc::io::write_text(out_dir + "/overlap.csv", csv);
        write_run_manifest(
            out_dir, dnc::config::default_config(),
            {{"command", "eval overlap"}, {"maps", maps_dir}, {"labels", labels_dir}},
            ms_since(t0));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memristor-based differential perception simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", scenario_path, frames_path, labels_path;
    std::string spec_path, maps_dir;
    bool spectrum = false;

    auto* device = app.add_subcommand("device", "device-level experiments");
    auto* sweep = device->add_subcommand("sweep", "sine sweep through the series resistor");
    sweep->add_option("--config", config_path, "config file");
    sweep->add_option("--out", out_dir, "output directory");

    auto* tactile = app.add_subcommand("tactile", "closed-loop grasp scenarios");
    auto* trun = tactile->add_subcommand("run", "replay a scenario file");
    trun->add_option("--config", config_path, "config file");
    trun->add_option("--scenario", scenario_path, "scenario file")->required();
    trun->add_option("--out", out_dir, "output directory");

    auto* vision = app.add_subcommand("vision", "frame-differencing saliency pipeline");
    auto* vrun = vision->add_subcommand("run", "process a frame sequence");
    vrun->add_option("--config", config_path, "config file");
    vrun->add_option("--frames", frames_path, "PGM directory or raw file with .hdr sidecar")
        ->required();
    vrun->add_option("--labels", labels_path, "label masks for the overlap report");
    vrun->add_option("--out", out_dir, "output directory");
    vrun->add_flag("--spectrum", spectrum, "write amplitude-spectrum CSVs");

    auto* synth = app.add_subcommand("synth", "synthetic video generation");
    auto* gen = synth->add_subcommand("gen", "generate frames and ground-truth masks");
    gen->add_option("--spec", spec_path, "suite file with [video] sections")->required();
    gen->add_option("--out", out_dir, "output directory");

    auto* eval = app.add_subcommand("eval", "metrics over saved artifacts");
    auto* overlap = eval->add_subcommand("overlap", "overlap rate of maps against labels");
    overlap->add_option("--maps", maps_dir, "directory of saliency PGMs")->required();
    overlap->add_option("--labels", labels_path, "directory of label masks")->required();
    overlap->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return cmd_device_sweep(config_path, out_dir);
        if (trun->parsed()) return cmd_tactile_run(config_path, scenario_path, out_dir);
        if (vrun->parsed())
            return cmd_vision_run(config_path, frames_path, labels_path, out_dir, spectrum);
        if (gen->parsed()) return cmd_synth_gen(spec_path, out_dir);
        if (overlap->parsed()) return cmd_eval_overlap(maps_dir, labels_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "no subcommand\n";
    return 2;
}
