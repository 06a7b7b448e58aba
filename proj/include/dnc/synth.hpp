#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnc/eval.hpp"
#include "dnc/vision.hpp"

// Seeded synthetic video generator: a rectangular object of uniform intensity
// moves over a uniform background on the cell lattice, optionally with
// per-pixel noise. Emits full-resolution frames plus per-frame ground-truth
// cell masks. Identical seeds produce identical bytes.
namespace dnc::synth {

struct SyntheticVideoSpec {
    std::string name = "synthetic";
    int frames = 40;
    int frame_width = 1920;
    int frame_height = 900;
    int grid_cols = 40;
    int grid_rows = 25;
    int object_w_cells = 3;
    int object_h_cells = 3;
    int start_col = 0;  // may start off-grid so the object enters moving
    int start_row = 0;
    int vel_col_cells = 1;  // cells per frame, signed
    int vel_row_cells = 0;
    double background = 0.30;  // intensity units
    double object = 1.80;
    double noise_amplitude = 0.0;  // intensity units, uniform per pixel
    bool wrap = false;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SyntheticVideo {
    std::vector<vision::Frame> frames;
    std::vector<eval::LabelMask> masks;  // one per frame
    std::vector<std::pair<int, int>> velocity_cells;  // per frame (dcol, drow)
};

SyntheticVideo generate(const SyntheticVideoSpec& spec);

// Writes frame_NNNN.pgm and mask_NNNN.pgm under out_dir.
void write_video(const SyntheticVideo& video, const std::string& out_dir);

// Parse one or more [video] sections from a suite file.
std::vector<SyntheticVideoSpec> load_suite(const std::string& path);

}  // namespace dnc::synth
