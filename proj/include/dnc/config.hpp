#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnc/tactile.hpp"
#include "dnc/vision.hpp"

// Key-value configuration: bracketed section headers with `key = value`
// lines; list sections ([events], [expect]) hold comma-separated rows.
// The shipped default file is the normative scheme table.
namespace dnc::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Section {
    std::string name;
    std::map<std::string, std::string> kv;
    std::vector<std::string> rows;  // non key=value lines, in file order
};

struct IniFile {
    std::vector<Section> sections;  // in file order, duplicates preserved

    const Section* find(const std::string& name) const;
    // missing key: returns fallback
    double number(const std::string& section, const std::string& key, double fallback) const;
    int integer(const std::string& section, const std::string& key, int fallback) const;
};

IniFile parse_ini(const std::string& text, const std::string& origin);
IniFile load_ini(const std::string& path);

struct RunConfig {
    tactile::SimConfig tactile;     // device, table, thresholds, piezo, gain, controller
    vision::VisionConfig vision;    // shares device and table values
    device::SweepSpec sweep;
    std::uint64_t seed = 1;

    // canonical text of every resolved value; hashing it fingerprints the run
    std::string serialize() const;
    std::string fingerprint() const;  // fnv1a-64 over serialize(), hex
};

// Defaults only (the normative built-in table).
RunConfig default_config();

// Defaults overlaid with values from a config file.
RunConfig load_config(const std::string& path);
RunConfig apply_config(RunConfig base, const IniFile& ini);

// Scenario files use the same format with [scenario], [events], [expect].
tactile::GraspScenario load_scenario(const std::string& path);
tactile::GraspScenario parse_scenario(const IniFile& ini, const std::string& origin);

std::uint64_t fnv1a64(const std::string& text);
std::string to_hex(std::uint64_t v);

}  // namespace dnc::config
