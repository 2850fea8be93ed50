#include "qtur/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qtur/errors.hpp"

namespace qtur {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json complex_matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void ReportTable::add_config(const std::string& key, const std::string& value) {
  config.emplace_back(key, value);
}

void ReportTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw Error("ReportTable: row width does not match columns");
  }
  rows.push_back(std::move(row));
}

std::string ReportTable::to_csv() const {
  std::ostringstream os;
  os << "# qtur-report v1\n";
  for (const auto& [key, value] : config) {
    os << "# " << key << "=" << value << "\n";
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    os << (c ? "," : "") << columns[c];
  }
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c ? "," : "") << row[c];
    }
    os << "\n";
  }
  for (const auto& [key, value] : summary.items()) {
    os << "# summary " << key << "=" <<
        (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
  if (!violations.empty()) {
    os << "# violations " << violations.size() << " (see repro sidecar)\n";
  }
  return os.str();
}

nlohmann::json ReportTable::to_json() const {
  nlohmann::json j;
  j["version"] = "qtur-report v1";
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [key, value] : config) cfg[key] = value;
  j["config"] = cfg;
  j["columns"] = columns;
  j["rows"] = rows;
  j["summary"] = summary;
  j["violations"] = violations;
  return j;
}

void ReportTable::write(const std::string& path,
                        const std::string& format) const {
  if (format != "csv" && format != "json") {
    throw ConfigError("unknown report format '" + format + "'");
  }
  const std::string payload =
      format == "csv" ? to_csv() : to_json().dump(2) + "\n";
  if (path == "-") {
    std::cout << payload;
    return;
  }
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open report file " + path);
    out << payload;
  }
  if (!violations.empty()) {
    std::ofstream repro(path + ".repro.json", std::ios::binary);
    if (!repro) throw Error("cannot open repro sidecar for " + path);
    repro << nlohmann::json(violations).dump(2) << "\n";
  }
}

int worker_count(int n_tasks) {
  if (n_tasks <= 1) return 1;
  int workers = 0;
  if (const char* env = std::getenv("QTUR_THREADS")) {
    workers = std::atoi(env);
    if (workers < 1) workers = 1;
  } else {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  return workers < n_tasks ? workers : n_tasks;
}

}  // namespace qtur
