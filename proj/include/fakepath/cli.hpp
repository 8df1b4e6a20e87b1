// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface: flat key=value configs, subcommand dispatch, CSV
// emission. Every stochastic subcommand requires an explicit seed and echoes
// its fully resolved configuration into the CSV metadata block (cfg: keys),
// so any table can be reproduced exactly from its own header.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "fakepath/table.hpp"

namespace fakepath::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Flat, validated key=value configuration.
class RunConfig {
 public:
  RunConfig() = default;
  explicit RunConfig(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  const std::map<std::string, std::string>& values() const { return values_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key) const;
  long long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  unsigned long long get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Parse a flat key=value file ('#' starts a comment line).
RunConfig parse_config_file(const std::string& path);

/// Parse key=value lines from a string (same grammar as the file form).
RunConfig parse_config_text(const std::string& text);

/// Recover the cfg: entries echoed into a CSV metadata block.
RunConfig config_from_csv_metadata(const std::string& csv);

/// Validate the config for a subcommand (unknown keys rejected, ranges
/// checked, seed required for stochastic commands) and fill in defaults.
RunConfig resolve_config(const std::string& subcommand, const RunConfig& config);

/// Run one subcommand with a resolved or raw config; returns the table with
/// the config echo attached.
table::ExperimentTable run_subcommand(const std::string& subcommand, const RunConfig& config);

/// Full CLI entry point.
int main_entry(int argc, char** argv);

}  // namespace fakepath::cli
