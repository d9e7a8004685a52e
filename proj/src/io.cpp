#include "gadi/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace gadi {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

void CsvTable::add(std::vector<double> row) { rows.push_back(std::move(row)); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(path + ": cannot open for writing");
  out << text;
  if (!out) throw ConfigError(path + ": write failed");
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::string text;
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    text += (i ? "," : "") + table.columns[i];
  text += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw ContractError(path + ": row width " + std::to_string(row.size()) +
                          " differs from header width " + std::to_string(table.columns.size()));
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += format_number(row[i]);
    }
    text += '\n';
  }
  write_text(path, text);
}

std::string config_hash(const RunConfig& config) {
  RunConfig canonical = config;
  canonical.threads = 1;
  canonical.output.clear();
  const std::string text = resolved_config_json(canonical);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

void ensure_directory(const std::string& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw ConfigError(directory + ": cannot create output directory: " + ec.message());
}

void write_sidecar(const std::string& directory, const RunConfig& config, const Sidecar& s) {
  Json j;
  j["artifact"] = s.artifact;
  j["subcommand"] = s.subcommand;
  j["description"] = s.description;
  j["version"] = GADI_VERSION;
  j["config_hash"] = config_hash(config);
  j["config_origin"] = config.origin;
  j["seed"] = config.seed;
  j["provenance"] = s.provenance;
  j["status"] = s.partial ? "partial" : "complete";
  j["columns"] = s.columns;
  j["grid"] = s.grid;
  j["conventions"] = {
      {"fourier", "f^(w) = (1/eps) int f(t) exp(i w t / eps) dt; f(t) = (1/2pi) int f^(w) exp(-i w t / eps) dw"},
      {"frequency", "scaled frequency w; physical angular frequency is w / eps"},
      {"harmonics", "orthonormal Y_lm with Condon-Shortley phase; real Y_lm for field synthesis"},
      {"parity_sign", "(-1)^(l+1)"},
      {"csv", "comma separated, header row, %.17g numbers, nan/inf spelled out"}};
  j["extra"] = s.extra;
  write_text(directory + "/" + s.artifact + ".json", j.dump(2) + "\n");
}

}  // namespace gadi
