#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnc/device.hpp"
#include "dnc/eval.hpp"
#include "dnc/tactile.hpp"
#include "dnc/vision.hpp"

// File formats: binary 8-bit PGM (P5) for frames and masks, CSV for traces
// and grids, and a key-value run manifest carrying the config fingerprint.
// 8-bit gray maps to intensity units as value / 100.
namespace dnc::io {

struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major
};

Image8 read_pgm(const std::string& path);
void write_pgm(const std::string& path, const Image8& img);

vision::Frame frame_from_image(const Image8& img);
Image8 image_from_mask(const std::vector<std::uint8_t>& binary, int cols, int rows);

// Frames from a directory of .pgm files in lexicographic order, or from a raw
// byte file with a sidecar header (`width=`, `height=`, `frames=` lines).
std::vector<vision::Frame> load_frames(const std::string& path);

// Masks from a directory of .pgm files (nonzero = labeled) or CSV grids.
std::vector<eval::LabelMask> load_masks(const std::string& dir);

void write_sweep_csv(const std::string& path, const std::vector<device::SweepSample>& trace);
void write_grasp_csv(const std::string& path, const tactile::GraspTrace& trace);
void write_grid_csv(const std::string& path, const std::vector<double>& grid, int cols, int rows);

struct ManifestEntry {
    std::string key;
    std::string value;
};

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

void ensure_dir(const std::string& path);
bool file_exists(const std::string& path);
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace dnc::io
