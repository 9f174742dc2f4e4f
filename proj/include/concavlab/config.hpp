#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "concavlab/report.hpp"
#include "concavlab/scenarios.hpp"

namespace cvlab {

/// Settings read from a sectioned key-value file plus output options.
struct Config {
  Scenario scenario;
  std::filesystem::path out = "out";
  ReportFormat format = ReportFormat::json;
  int verbosity = 1;
  std::uint64_t seed = 1;
  bool alpha_auto = true;
};

/// Parses "section.key = value" text. Unknown keys and malformed values throw
/// InvalidArgument naming the key. A [scenario] id selects a built-in scenario
/// that the remaining keys override. A given `h` replaces grid.h before the
/// scenario is built.
Config parse_config(std::string_view text, std::optional<double> h = {});
Config load_config(const std::filesystem::path& path, std::optional<double> h = {});

/// Applies one setting, e.g. ("grid", "h", "0.02").
void apply_setting(Config& cfg, std::string_view section, std::string_view key, std::string_view value);

/// Generated reference of every key with its default and meaning.
std::string config_reference();

/// Checks numeric settings against the module preconditions.
void validate_config(const Config& cfg);

}  // namespace cvlab
