// SPDX-License-Identifier: MIT
#include "twistopt/results.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "twistopt/common.hpp"

namespace twistopt::results {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

// Strict full-token double parse. Unlike std::stod, values in the subnormal
// range are accepted (strtod reports them with ERANGE but still returns the
// correctly rounded result); only genuine overflow and malformed input fail.
std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) return std::nullopt;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (*end != '\0') return std::nullopt;
  if (errno == ERANGE && std::abs(v) == HUGE_VAL) return std::nullopt;
  return v;
}

}  // namespace

std::string row_key(const ResultRow& row) {
  std::ostringstream key;
  key << row.experiment << '|' << row.ansatz << '|' << row.n << '|'
      << format_double(row.delta_phi) << '|' << format_double(row.c1) << '|'
      << format_double(row.c2) << '|' << format_double(row.p);
  return key.str();
}

std::string csv_header() {
  return "experiment,ansatz,n,delta_phi,c1,c2,p,a_opt,bmse_ratio,stages,status";
}

std::string to_csv(const ResultRow& row) {
  std::ostringstream line;
  line << row.experiment << ',' << row.ansatz << ',' << row.n << ','
       << format_double(row.delta_phi) << ',' << format_double(row.c1) << ','
       << format_double(row.c2) << ',' << format_double(row.p) << ','
       << format_double(row.a_opt) << ',' << format_double(row.bmse_ratio)
       << ',' << row.stages << ',' << row.status;
  return line.str();
}

std::optional<ResultRow> parse_csv(const std::string& line) {
  std::vector<std::string> f = split(line, ',');
  if (f.size() != 11) return std::nullopt;
  try {
    ResultRow row;
    row.experiment = f[0];
    row.ansatz = f[1];
    row.n = std::stoi(f[2]);
    auto dphi = parse_double(f[3]), c1 = parse_double(f[4]),
         c2 = parse_double(f[5]), p = parse_double(f[6]),
         a = parse_double(f[7]), ratio = parse_double(f[8]);
    if (!dphi || !c1 || !c2 || !p || !a || !ratio) return std::nullopt;
    row.delta_phi = *dphi;
    row.c1 = *c1;
    row.c2 = *c2;
    row.p = *p;
    row.a_opt = *a;
    row.bmse_ratio = *ratio;
    row.stages = std::stoi(f[9]);
    row.status = f[10];
    return row;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {
  std::filesystem::path p(path_);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ifstream in(path_);
  bool has_content = false;
  if (in) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      has_content = true;
      if (auto row = parse_csv(line)) known_.emplace(row_key(*row), *row);
    }
  }
  in.close();
  if (!has_content) {
    std::ofstream out(path_, std::ios::trunc);
    out << csv_header() << '\n';
  }
}

bool CsvWriter::has(const ResultRow& row) const {
  return known_.count(row_key(row)) > 0;
}

std::optional<ResultRow> CsvWriter::find(const ResultRow& key_fields) const {
  auto it = known_.find(row_key(key_fields));
  if (it == known_.end()) return std::nullopt;
  return it->second;
}

void CsvWriter::append(const ResultRow& row) {
  std::ofstream out(path_, std::ios::app);
  out << to_csv(row) << '\n';
  out.flush();
  known_.emplace(row_key(row), row);
}

void write_manifest(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    for (const auto& [key, value] : kv) out << key << '=' << value << '\n';
  }
  std::filesystem::rename(tmp, path);
}

void append_wall_time(const std::string& path, const std::string& label,
                      double seconds) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::app);
  out << label << ' ' << format_double(seconds) << '\n';
}

std::string params_path(const std::string& dir, const std::string& label,
                        double delta_phi) {
  return dir + "/" + label + "_dphi" + format_double(delta_phi) + ".csv";
}

void save_params(const std::string& dir, const std::string& label,
                 double delta_phi, const std::vector<double>& params) {
  std::filesystem::create_directories(dir);
  std::ofstream out(params_path(dir, label, delta_phi), std::ios::trunc);
  for (double v : params) out << format_double(v) << '\n';
}

std::optional<std::vector<double>> load_params(const std::string& dir,
                                               const std::string& label,
                                               double delta_phi) {
  std::ifstream in(params_path(dir, label, delta_phi));
  if (!in) return std::nullopt;
  std::vector<double> params;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto v = parse_double(line);
    if (!v) return std::nullopt;
    params.push_back(*v);
  }
  return params;
}

}  // namespace twistopt::results
