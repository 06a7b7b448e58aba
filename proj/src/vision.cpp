#include "dnc/vision.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <thread>

namespace dnc::vision {

void Frame::validate() const {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("frame: dimensions must be positive");
    if (intensities.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("frame: intensity count does not match dimensions");
    for (float v : intensities)
        if (!(v >= 0.0f) || v > 2.56f)
            throw std::invalid_argument("frame: intensity outside [0, 2.56]");
}

void GridSpec::validate_frame(int width, int height) const {
    if (cols <= 0 || rows <= 0) throw std::invalid_argument("grid: cols/rows must be positive");
    if (width % cols != 0 || height % rows != 0)
        throw std::invalid_argument(
            "grid: " + std::to_string(width) + "x" + std::to_string(height) +
            " does not divide into " + std::to_string(cols) + "x" + std::to_string(rows) +
            " cells; width must be a multiple of " + std::to_string(cols) +
            " and height a multiple of " + std::to_string(rows) + " (no implicit cropping)");
}

ArrayState ArrayState::uniform(const GridSpec& spec, double x) {
    ArrayState s;
    s.cols = spec.cols;
    s.rows = spec.rows;
    s.cells.assign(spec.cells(), device::MemristorState{x});
    return s;
}

Grid compress(const Frame& frame, const GridSpec& spec) {
    spec.validate_frame(frame.width, frame.height);
    const int bw = spec.block_w(frame.width);
    const int bh = spec.block_h(frame.height);
    Grid grid(spec.cells(), 0.0);
    for (int y = 0; y < frame.height; ++y) {
        const float* row = frame.intensities.data() + static_cast<std::size_t>(y) * frame.width;
        double* grow = grid.data() + static_cast<std::size_t>(y / bh) * spec.cols;
        for (int c = 0; c < spec.cols; ++c) {
            const float* p = row + static_cast<std::size_t>(c) * bw;
            // independent accumulators keep the sum off the FP latency chain
            double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
            int i = 0;
            for (; i + 4 <= bw; i += 4) {
                s0 += p[i];
                s1 += p[i + 1];
                s2 += p[i + 2];
                s3 += p[i + 3];
            }
            for (; i < bw; ++i) s0 += p[i];
            grow[c] += (s0 + s1) + (s2 + s3);
        }
    }
    const double inv = 1.0 / (static_cast<double>(bw) * bh);
    for (double& v : grid) v *= inv;
    return grid;
}

namespace {

void update_span(const Grid& prev, const Grid& curr, ArrayState& state, const VisionConfig& cfg,
                 std::size_t begin, std::size_t end, UpdateResult& out) {
    for (std::size_t i = begin; i < end; ++i) {
        const encoding::VisualChange change =
            encoding::extract_visual(prev[i], curr[i], cfg.fast_threshold);
        const double r = device::resistance(state.cells[i], cfg.device);
        const device::PulseTrain train = encoding::scheme_for(change, r, cfg.table);
        state.cells[i] = device::apply_pulse_train(state.cells[i], train, cfg.device);
        const double r_new = device::resistance(state.cells[i], cfg.device);
        out.map.resistance_ohms[i] = r_new;
        out.map.binary[i] = r_new < cfg.binarize_ohms ? 0 : 1;
        if (train.amplitude_v != 0.0) {
            const int row = static_cast<int>(i) / state.cols;
            const int col = static_cast<int>(i) % state.cols;
            out.pulses.push_back(CellPulse{row, col, train.amplitude_v,
                                           change.cls == encoding::VisualClass::Fast});
        }
    }
}

}  // namespace

UpdateResult update_array(const Grid& prev, const Grid& curr, ArrayState& state,
                          const VisionConfig& cfg) {
    const std::size_t n = cfg.grid.cells();
    if (prev.size() != n || curr.size() != n ||
        state.cells.size() != n)
        throw std::invalid_argument("update_array: grid dimensions do not match the spec");

    UpdateResult out;
    out.map.cols = state.cols;
    out.map.rows = state.rows;
    out.map.resistance_ohms.resize(n);
    out.map.binary.resize(n);

    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        update_span(prev, curr, state, cfg, 0, n, out);
        return out;
    }

    // Cells are independent, so spans can run concurrently. Per-span pulse
    // logs are concatenated in span order to keep the result identical to the
    // sequential path.
    std::vector<UpdateResult> parts(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        parts[w].map.cols = state.cols;
        parts[w].map.rows = state.rows;
        parts[w].map.resistance_ohms.resize(n);
        parts[w].map.binary.resize(n);
        const std::size_t b = std::min(n, static_cast<std::size_t>(w) * chunk);
        const std::size_t e = std::min(n, b + chunk);
        pool.emplace_back([&, w, b, e] { update_span(prev, curr, state, cfg, b, e, parts[w]); });
    }
    for (auto& th : pool) th.join();
    for (int w = 0; w < threads; ++w) {
        const std::size_t b = std::min(n, static_cast<std::size_t>(w) * chunk);
        const std::size_t e = std::min(n, b + chunk);
        std::copy(parts[w].map.resistance_ohms.begin() + b, parts[w].map.resistance_ohms.begin() + e,
                  out.map.resistance_ohms.begin() + b);
        std::copy(parts[w].map.binary.begin() + b, parts[w].map.binary.begin() + e,
                  out.map.binary.begin() + b);
        out.pulses.insert(out.pulses.end(), parts[w].pulses.begin(), parts[w].pulses.end());
    }
    return out;
}

std::vector<SaliencyMap> run_video(const std::vector<Frame>& frames, const VisionConfig& cfg) {
    if (frames.size() < 2) throw std::invalid_argument("run_video: need at least two frames");
    ArrayState state = ArrayState::uniform(cfg.grid, cfg.initial_x);
    std::vector<SaliencyMap> maps;
    maps.reserve(frames.size() - 1);
    Grid prev = compress(frames[0], cfg.grid);
    for (std::size_t i = 1; i < frames.size(); ++i) {
        Grid curr = compress(frames[i], cfg.grid);
        maps.push_back(update_array(prev, curr, state, cfg).map);
        prev = std::move(curr);
    }
    return maps;
}

namespace {

struct Centroid {
    double x = 0.0, y = 0.0, weight = 0.0;
};

// Salience-weighted centroid; weight is the normalized conductance above the
// high-band edge so fully released cells contribute nothing.
Centroid centroid_of(const SaliencyMap& map, const VisionConfig& cfg) {
    const double x_floor =
        device::state_from_resistance(cfg.table.high_min_ohms, cfg.device).x;
    Centroid c;
    for (int r = 0; r < map.rows; ++r) {
        for (int col = 0; col < map.cols; ++col) {
            const std::size_t i = static_cast<std::size_t>(r) * map.cols + col;
            const double x =
                device::state_from_resistance(map.resistance_ohms[i], cfg.device).x;
            const double w = std::max(0.0, x - x_floor);
            c.x += w * col;
            c.y += w * r;
            c.weight += w;
        }
    }
    if (c.weight > 0.0) {
        c.x /= c.weight;
        c.y /= c.weight;
    }
    return c;
}

}  // namespace

std::optional<Direction> estimate_orientation(const std::vector<SaliencyMap>& maps,
                                              const VisionConfig& cfg) {
    const int k = std::max(2, cfg.orientation_window);
    if (maps.size() < static_cast<std::size_t>(k)) return std::nullopt;
    const SaliencyMap& oldest = maps[maps.size() - k];
    const SaliencyMap& newest = maps.back();
    const Centroid a = centroid_of(oldest, cfg);
    const Centroid b = centroid_of(newest, cfg);
    if (a.weight <= 0.0 || b.weight <= 0.0) return std::nullopt;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double norm = std::hypot(dx, dy);
    if (norm < 0.25) return std::nullopt;  // stationary within a quarter cell
    return Direction{dx / norm, dy / norm};
}

std::vector<double> amplitude_spectrum(const Grid& grid, const GridSpec& spec) {
    if (grid.size() != spec.cells())
        throw std::invalid_argument("amplitude_spectrum: grid size mismatch");
    const int R = spec.rows;
    const int C = spec.cols;
    const double two_pi = 2.0 * std::acos(-1.0);
    using cd = std::complex<double>;

    // direct DFT along rows, then columns; the grid is small enough that
    // O(n^2) per axis is negligible
    std::vector<cd> stage(grid.size());
    for (int r = 0; r < R; ++r) {
        for (int u = 0; u < C; ++u) {
            cd acc{0.0, 0.0};
            for (int c = 0; c < C; ++c) {
                const double ang = -two_pi * u * c / C;
                acc += grid[static_cast<std::size_t>(r) * C + c] * cd{std::cos(ang), std::sin(ang)};
            }
            stage[static_cast<std::size_t>(r) * C + u] = acc;
        }
    }
    std::vector<double> mag(grid.size());
    const int rc = R / 2;  // DC lands at (rc, cc) after the shift
    const int cc = C / 2;
    for (int u = 0; u < C; ++u) {
        for (int v = 0; v < R; ++v) {
            cd acc{0.0, 0.0};
            for (int r = 0; r < R; ++r) {
                const double ang = -two_pi * v * r / R;
                acc += stage[static_cast<std::size_t>(r) * C + u] * cd{std::cos(ang), std::sin(ang)};
            }
            const int sr = (v + rc) % R;
            const int sc = (u + cc) % C;
            mag[static_cast<std::size_t>(sr) * C + sc] = std::abs(acc);
        }
    }
    return mag;
}

}  // namespace dnc::vision
