#pragma once

#include <map>
#include <string>

#include "nosas/experiment.hpp"

namespace nosas {

inline constexpr const char* report_schema = "nosas.experiment/1";

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

std::string config_to_json(const ExperimentConfig& config);

// Applies key/value settings (keys as in the JSON config: subdomains, cells,
// pattern, kind, c, rtol, max_iter, verify, spectra, threads, out, high,
// low, extra, channels, raster) on top of `config`.
void apply_settings(ExperimentConfig& config, const std::map<std::string, std::string>& settings);

// Reads a config file: a JSON object, or key=value lines ('#' comments).
std::map<std::string, std::string> read_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Writes to path.tmp and renames over path.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace nosas
