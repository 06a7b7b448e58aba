#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dnc/device.hpp"
#include "dnc/encoding.hpp"

// Visual differential pipeline: block-average compression of grayscale frames
// onto a memristor grid, per-cell fast/slow change encoding, array updates
// with analogue afterimage release, orientation from the decaying trail, and
// a 2-D amplitude spectrum for frequency-domain comparisons.
namespace dnc::vision {

struct Frame {
    int width = 0;
    int height = 0;
    std::vector<float> intensities;  // row-major, values in [0, 2.56]

    void validate() const;
};

struct GridSpec {
    int cols = 40;
    int rows = 25;

    void validate_frame(int width, int height) const;  // exact division required
    int block_w(int width) const { return width / cols; }
    int block_h(int height) const { return height / rows; }
    std::size_t cells() const { return static_cast<std::size_t>(cols) * rows; }
};

// Row-major cols x rows grid of compressed intensities.
using Grid = std::vector<double>;

struct ArrayState {
    int cols = 0;
    int rows = 0;
    std::vector<device::MemristorState> cells;  // row-major

    static ArrayState uniform(const GridSpec& spec, double x);
};

struct SaliencyMap {
    int cols = 0;
    int rows = 0;
    std::vector<double> resistance_ohms;  // row-major
    std::vector<std::uint8_t> binary;     // 0 = salient (low resistance), 1 = high
};

struct CellPulse {
    int row = 0;
    int col = 0;
    double amplitude_v = 0.0;
    bool fast = false;
};

struct VisionConfig {
    device::DeviceParams device;
    encoding::SchemeTable table;
    GridSpec grid;
    double fast_threshold = 0.30;
    double binarize_ohms = 100e3;
    double initial_x = 0.02;  // high-resistance starting state
    int orientation_window = 3;
    int threads = 1;  // per-cell updates may run on several threads
};

struct UpdateResult {
    SaliencyMap map;
    std::vector<CellPulse> pulses;  // cells that received a nonzero train
};

struct Direction {
    double ux = 0.0;  // unit vector, +x to the right (columns)
    double uy = 0.0;  // +y downward (rows)
};

// Block-average a frame onto the grid. Frame dimensions must divide exactly.
// The global mean is preserved.
Grid compress(const Frame& frame, const GridSpec& spec);

// Advance every cell from the previous to the current compressed frame:
// classify the per-cell change, look up the pulse scheme, apply it, read the
// new resistance. Cells are independent; the result is identical whether the
// loop runs on one thread or several.
UpdateResult update_array(const Grid& prev, const Grid& curr, ArrayState& state,
                          const VisionConfig& cfg);

// Fold update_array over a sequence of at least two frames starting from the
// uniform high-resistance array. Returns one map per consecutive frame pair.
std::vector<SaliencyMap> run_video(const std::vector<Frame>& frames, const VisionConfig& cfg);

// Motion direction from the analogue trail: from the salience-weighted
// centroid of the oldest map in the window toward the newest. Returns nullopt
// when no salient cells exist or the displacement is degenerate.
std::optional<Direction> estimate_orientation(const std::vector<SaliencyMap>& maps,
                                              const VisionConfig& cfg);

// Magnitude of the 2-D DFT of a grid, zero-frequency component centered.
std::vector<double> amplitude_spectrum(const Grid& grid, const GridSpec& spec);

}  // namespace dnc::vision
