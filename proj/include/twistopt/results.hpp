// SPDX-License-Identifier: MIT
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// Experiment output: a CSV of result rows with exact-round-trip doubles,
// key-value manifest and wall-time sidecars, and per-protocol parameter
// files. Reruns resume by skipping rows whose key already exists.
namespace twistopt::results {

struct ResultRow {
  std::string experiment;
  std::string ansatz;
  int n = 0;
  double delta_phi = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double p = 0.0;
  double a_opt = 0.0;
  double bmse_ratio = 0.0;
  int stages = 0;
  std::string status = "ok";
};

// The identity of a row: everything before the computed outputs.
std::string row_key(const ResultRow& row);
std::string csv_header();
std::string to_csv(const ResultRow& row);

// Parses one data line; returns nullopt on malformed input.
std::optional<ResultRow> parse_csv(const std::string& line);

class CsvWriter {
 public:
  // Opens `path` for appending. When the file already has rows, their keys
  // are loaded so work can resume where it stopped; otherwise the header is
  // written.
  explicit CsvWriter(const std::string& path);

  bool has(const ResultRow& row) const;
  std::optional<ResultRow> find(const ResultRow& key_fields) const;
  // Appends and flushes; remembers the key.
  void append(const ResultRow& row);

  const std::string& path() const { return path_; }
  std::size_t rows_loaded() const { return known_.size(); }

 private:
  std::string path_;
  std::map<std::string, ResultRow> known_;
};

// key=value pairs, one per line, written atomically next to the CSV.
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& kv);

// Appends "label seconds" to the wall-time sidecar.
void append_wall_time(const std::string& path, const std::string& label,
                      double seconds);

// Parameter vectors are stored one value per line in
// <dir>/<label>_dphi<value>.csv.
std::string params_path(const std::string& dir, const std::string& label,
                        double delta_phi);
void save_params(const std::string& dir, const std::string& label,
                 double delta_phi, const std::vector<double>& params);
std::optional<std::vector<double>> load_params(const std::string& dir,
                                               const std::string& label,
                                               double delta_phi);

}  // namespace twistopt::results
