// Artifact files: CSV tables with 17 significant digits and JSON sidecars.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gadi/config.hpp"

namespace gadi {

using Json = nlohmann::ordered_json;

// Shortest round-trip form is not used on purpose: %.17g is stable across
// platforms and lossless for binary64. NaN and inf print as nan, inf, -inf.
std::string format_number(double x);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

// Writes `table` to path; ContractError if a row width differs from the header.
void write_csv(const std::string& path, const CsvTable& table);

// FNV-1a 64 of the resolved configuration with threads and output removed,
// as 16 hex digits. Worker count and output location do not change results.
std::string config_hash(const RunConfig& config);

struct Sidecar {
  std::string subcommand;
  std::string artifact;     // file name of the CSV this describes
  std::string description;
  std::string provenance;   // statistical | empirical | thin-annulus | oracle | wkb | ...
  std::vector<std::string> columns;
  Json grid = Json::object();
  Json extra = Json::object();
  bool partial = false;
};

// <artifact>.json next to the CSV, with version, config hash, seed and conventions.
void write_sidecar(const std::string& directory, const RunConfig& config, const Sidecar& sidecar);

// Creates the directory (and parents) if needed.
void ensure_directory(const std::string& directory);

void write_text(const std::string& path, const std::string& text);

}  // namespace gadi
