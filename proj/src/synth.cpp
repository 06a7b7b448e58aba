#include "dnc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dnc/config.hpp"
#include "dnc/io.hpp"

namespace dnc::synth {

namespace {

// splitmix64: deterministic across platforms, unlike std:: distributions
struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

std::uint8_t to_byte(double intensity_units) {
    const long v = std::lround(intensity_units * 100.0);
    return static_cast<std::uint8_t>(std::clamp(v, 0l, 255l));
}

int wrap_mod(int v, int m) { return ((v % m) + m) % m; }

}  // namespace

void SyntheticVideoSpec::validate() const {
    if (frames < 2) throw std::invalid_argument("synth: need at least 2 frames");
    if (grid_cols <= 0 || grid_rows <= 0) throw std::invalid_argument("synth: bad grid");
    if (frame_width % grid_cols != 0 || frame_height % grid_rows != 0)
        throw std::invalid_argument("synth: frame must divide exactly into the grid");
    if (object_w_cells <= 0 || object_h_cells <= 0)
        throw std::invalid_argument("synth: object size must be positive");
    if (object_w_cells > grid_cols || object_h_cells > grid_rows)
        throw std::invalid_argument("synth: object larger than the grid");
    if (background < 0.0 || background > 2.55 || object < 0.0 || object > 2.55)
        throw std::invalid_argument("synth: intensities must be in [0, 2.55]");
    if (noise_amplitude < 0.0) throw std::invalid_argument("synth: negative noise");
}

SyntheticVideo generate(const SyntheticVideoSpec& spec) {
    spec.validate();
    const int bw = spec.frame_width / spec.grid_cols;
    const int bh = spec.frame_height / spec.grid_rows;
    const std::uint8_t bg = to_byte(spec.background);
    const std::uint8_t obj = to_byte(spec.object);
    const int noise_b = static_cast<int>(std::lround(spec.noise_amplitude * 100.0));
    Rng rng{spec.seed};

    SyntheticVideo video;
    for (int f = 0; f < spec.frames; ++f) {
        const int col0 = spec.start_col + f * spec.vel_col_cells;
        const int row0 = spec.start_row + f * spec.vel_row_cells;

        eval::LabelMask mask;
        mask.cols = spec.grid_cols;
        mask.rows = spec.grid_rows;
        mask.cells.assign(static_cast<std::size_t>(spec.grid_cols) * spec.grid_rows, 0);
        for (int r = 0; r < spec.object_h_cells; ++r) {
            for (int c = 0; c < spec.object_w_cells; ++c) {
                int cc = col0 + c;
                int rr = row0 + r;
                if (spec.wrap) {
                    cc = wrap_mod(cc, spec.grid_cols);
                    rr = wrap_mod(rr, spec.grid_rows);
                } else if (cc < 0 || cc >= spec.grid_cols || rr < 0 || rr >= spec.grid_rows) {
                    continue;
                }
                mask.cells[static_cast<std::size_t>(rr) * spec.grid_cols + cc] = 1;
            }
        }

        io::Image8 img;
        img.width = spec.frame_width;
        img.height = spec.frame_height;
        img.pixels.assign(static_cast<std::size_t>(spec.frame_width) * spec.frame_height, bg);
        for (int y = 0; y < spec.frame_height; ++y) {
            const int cell_row = y / bh;
            std::uint8_t* row = img.pixels.data() + static_cast<std::size_t>(y) * spec.frame_width;
            for (int cell_col = 0; cell_col < spec.grid_cols; ++cell_col) {
                if (!mask.cells[static_cast<std::size_t>(cell_row) * spec.grid_cols + cell_col])
                    continue;
                std::fill(row + static_cast<std::size_t>(cell_col) * bw,
                          row + static_cast<std::size_t>(cell_col + 1) * bw, obj);
            }
        }
        if (noise_b > 0) {
            for (auto& px : img.pixels) {
                const int n = static_cast<int>(rng.next() % (2 * noise_b + 1)) - noise_b;
                px = static_cast<std::uint8_t>(std::clamp(static_cast<int>(px) + n, 0, 255));
            }
        }

        video.frames.push_back(io::frame_from_image(img));
        video.masks.push_back(std::move(mask));
        video.velocity_cells.emplace_back(spec.vel_col_cells, spec.vel_row_cells);
    }
    return video;
}

void write_video(const SyntheticVideo& video, const std::string& out_dir) {
    io::ensure_dir(out_dir + "/frames");
    io::ensure_dir(out_dir + "/masks");
    char name[64];
    for (std::size_t i = 0; i < video.frames.size(); ++i) {
        const vision::Frame& f = video.frames[i];
        io::Image8 img;
        img.width = f.width;
        img.height = f.height;
        img.pixels.resize(f.intensities.size());
        for (std::size_t p = 0; p < f.intensities.size(); ++p)
            img.pixels[p] = to_byte(f.intensities[p]);
        std::snprintf(name, sizeof name, "/frames/frame_%04zu.pgm", i);
        io::write_pgm(out_dir + name, img);
        std::snprintf(name, sizeof name, "/masks/mask_%04zu.pgm", i);
        io::write_pgm(out_dir + name,
                      io::image_from_mask(video.masks[i].cells, video.masks[i].cols,
                                          video.masks[i].rows));
    }
}

std::vector<SyntheticVideoSpec> load_suite(const std::string& path) {
    const config::IniFile ini = config::load_ini(path);
    std::vector<SyntheticVideoSpec> specs;
    for (const config::Section& s : ini.sections) {
        if (s.name != "video") continue;
        SyntheticVideoSpec v;
        auto num = [&](const char* key, double fallback) {
            auto it = s.kv.find(key);
            return it == s.kv.end() ? fallback : std::stod(it->second);
        };
        auto it = s.kv.find("name");
        if (it != s.kv.end()) v.name = it->second;
        v.frames = static_cast<int>(num("frames", v.frames));
        v.frame_width = static_cast<int>(num("frame_width", v.frame_width));
        v.frame_height = static_cast<int>(num("frame_height", v.frame_height));
        v.grid_cols = static_cast<int>(num("grid_cols", v.grid_cols));
        v.grid_rows = static_cast<int>(num("grid_rows", v.grid_rows));
        v.object_w_cells = static_cast<int>(num("object_w_cells", v.object_w_cells));
        v.object_h_cells = static_cast<int>(num("object_h_cells", v.object_h_cells));
        v.start_col = static_cast<int>(num("start_col", v.start_col));
        v.start_row = static_cast<int>(num("start_row", v.start_row));
        v.vel_col_cells = static_cast<int>(num("vel_col_cells", v.vel_col_cells));
        v.vel_row_cells = static_cast<int>(num("vel_row_cells", v.vel_row_cells));
        v.background = num("background", v.background);
        v.object = num("object", v.object);
        v.noise_amplitude = num("noise_amplitude", v.noise_amplitude);
        v.wrap = num("wrap", 0.0) != 0.0;
        v.seed = static_cast<std::uint64_t>(num("seed", static_cast<double>(v.seed)));
        specs.push_back(std::move(v));
    }
    if (specs.empty()) throw config::ConfigError(path + ": no [video] sections");
    return specs;
}

}  // namespace dnc::synth
