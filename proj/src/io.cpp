#include "dnc/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace dnc::io {

namespace {

int next_pnm_token(std::istream& in) {
    // skips whitespace and '#' comments, returns a nonnegative integer
    while (true) {
        int c = in.get();
        if (c == EOF) throw std::runtime_error("pgm: truncated header");
        if (std::isspace(c)) continue;
        if (c == '#') {
            std::string skip;
            std::getline(in, skip);
            continue;
        }
        int value = 0;
        bool any = false;
        while (c != EOF && std::isdigit(c)) {
            value = value * 10 + (c - '0');
            any = true;
            c = in.get();
        }
        if (!any) throw std::runtime_error("pgm: malformed header");
        return value;
    }
}

}  // namespace

Image8 read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw std::runtime_error(path + ": not a binary (P5) PGM file");
    Image8 img;
    img.width = next_pnm_token(in);
    img.height = next_pnm_token(in);
    const int maxval = next_pnm_token(in);
    if (maxval != 255) throw std::runtime_error(path + ": only 8-bit PGM supported");
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw std::runtime_error(path + ": truncated pixel data");
    return img;
}

void write_pgm(const std::string& path, const Image8& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
}

vision::Frame frame_from_image(const Image8& img) {
    vision::Frame f;
    f.width = img.width;
    f.height = img.height;
    f.intensities.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        f.intensities[i] = static_cast<float>(img.pixels[i]) / 100.0f;
    return f;
}

Image8 image_from_mask(const std::vector<std::uint8_t>& binary, int cols, int rows) {
    Image8 img;
    img.width = cols;
    img.height = rows;
    img.pixels.resize(binary.size());
    for (std::size_t i = 0; i < binary.size(); ++i) img.pixels[i] = binary[i] ? 255 : 0;
    return img;
}

namespace {

std::vector<std::string> sorted_files(const std::string& dir, const std::string& ext) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ext)
            names.push_back(e.path().string());
    std::sort(names.begin(), names.end());
    return names;
}

}  // namespace

std::vector<vision::Frame> load_frames(const std::string& path) {
    std::vector<vision::Frame> frames;
    if (fs::is_directory(path)) {
        for (const std::string& name : sorted_files(path, ".pgm")) {
            frames.push_back(frame_from_image(read_pgm(name)));
            if (frames.back().width != frames.front().width ||
                frames.back().height != frames.front().height)
                throw std::runtime_error(name + ": frame dimensions change mid-sequence");
        }
        if (frames.empty()) throw std::runtime_error(path + ": no .pgm files");
        return frames;
    }
    // raw file with sidecar header <path>.hdr
    const std::string hdr_path = path + ".hdr";
    if (!file_exists(hdr_path))
        throw std::runtime_error(path + ": expected a directory of PGMs or a sidecar " + hdr_path);
    int width = 0, height = 0, count = 0;
    std::stringstream hdr(read_text(hdr_path));
    std::string line;
    while (std::getline(hdr, line)) {
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const int value = std::stoi(line.substr(eq + 1));
        if (key == "width") width = value;
        else if (key == "height") height = value;
        else if (key == "frames") count = value;
    }
    if (width <= 0 || height <= 0 || count <= 0)
        throw std::runtime_error(hdr_path + ": needs width=, height=, frames=");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    const std::size_t frame_bytes = static_cast<std::size_t>(width) * height;
    for (int i = 0; i < count; ++i) {
        Image8 img;
        img.width = width;
        img.height = height;
        img.pixels.resize(frame_bytes);
        in.read(reinterpret_cast<char*>(img.pixels.data()),
                static_cast<std::streamsize>(frame_bytes));
        if (in.gcount() != static_cast<std::streamsize>(frame_bytes))
            throw std::runtime_error(path + ": truncated raw frame data");
        frames.push_back(frame_from_image(img));
    }
    return frames;
}

std::vector<eval::LabelMask> load_masks(const std::string& dir) {
    std::vector<eval::LabelMask> masks;
    auto pgms = sorted_files(dir, ".pgm");
    if (!pgms.empty()) {
        for (const std::string& name : pgms) {
            const Image8 img = read_pgm(name);
            eval::LabelMask m;
            m.cols = img.width;
            m.rows = img.height;
            m.cells.resize(img.pixels.size());
            for (std::size_t i = 0; i < img.pixels.size(); ++i)
                m.cells[i] = img.pixels[i] ? 1 : 0;
            masks.push_back(std::move(m));
        }
        return masks;
    }
    for (const std::string& name : sorted_files(dir, ".csv")) {
        eval::LabelMask m;
        std::stringstream ss(read_text(name));
        std::string line;
        while (std::getline(ss, line)) {
            if (line.empty()) continue;
            std::stringstream row(line);
            std::string cell;
            int cols = 0;
            while (std::getline(row, cell, ',')) {
                m.cells.push_back(std::stoi(cell) ? 1 : 0);
                ++cols;
            }
            m.cols = cols;
            ++m.rows;
        }
        masks.push_back(std::move(m));
    }
    if (masks.empty()) throw std::runtime_error(dir + ": no mask files (.pgm or .csv)");
    return masks;
}

void write_sweep_csv(const std::string& path, const std::vector<device::SweepSample>& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t_s,applied_v,device_v,current_a,x\n";
    char buf[160];
    for (const auto& s : trace) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g\n", s.t_s, s.applied_v,
                      s.device_v, s.current_a, s.x);
        out << buf;
    }
}

void write_grasp_csv(const std::string& path, const tactile::GraspTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t_s,piezo_r,mem_r,gain,force_cmd,event\n";
    char buf[200];
    for (const auto& r : trace.rows) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,", r.t_s, r.piezo_r_ohms,
                      r.mem_r_ohms, r.gain, r.force_cmd_n);
        out << buf << r.event << "\n";
    }
}

void write_grid_csv(const std::string& path, const std::vector<double>& grid, int cols,
                    int rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[40];
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            std::snprintf(buf, sizeof buf, "%.9g", grid[static_cast<std::size_t>(r) * cols + c]);
            out << buf << (c + 1 == cols ? "\n" : ",");
        }
    }
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& e : entries) out << e.key << " = " << e.value << "\n";
}

void ensure_dir(const std::string& path) { fs::create_directories(path); }

bool file_exists(const std::string& path) { return fs::exists(path); }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace dnc::io
