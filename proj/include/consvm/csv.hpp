#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace consvm {

// Locale-independent decimal form: up to 12 significant digits, trailing
// zeros trimmed, so equal doubles always print identically.
inline std::string format_real(double v, int precision = 12) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general,
                    precision);
  return std::string(buf, ptr);
}

// RFC-4180 quoting; applied only when the field needs it.
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv_line(std::ostream& os,
                           const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_escape(fields[i]);
  }
  os << "\r\n";
}

// One report row; empty optionals serialize as empty cells. The `status`
// column carries "ok" or the error text of a cell that failed (a sweep
// keeps going past unsplittable cells).
struct ReportRow {
  std::string experiment_id;
  std::string method;
  int partition_count = 0;  // M
  int partition_size = 0;   // L
  std::uint64_t seed = 0;
  int iteration = 0;
  std::optional<double> primal_residual;
  std::optional<double> objective;
  std::optional<double> train_accuracy;
  std::optional<double> test_accuracy;
  std::optional<std::int64_t> bytes_communicated;
  std::optional<double> wall_clock_ms;
  std::string status = "ok";
};

struct RunReport {
  std::vector<ReportRow> rows;

  static const std::vector<std::string>& header() {
    static const std::vector<std::string> names = {
        "experiment_id",  "method",         "partitions",
        "partition_size", "seed",           "iteration",
        "primal_residual", "objective",     "train_accuracy",
        "test_accuracy",  "bytes_communicated", "wall_clock_ms",
        "status"};
    return names;
  }

  void sort() {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ReportRow& a, const ReportRow& b) {
                       if (a.experiment_id != b.experiment_id) {
                         return a.experiment_id < b.experiment_id;
                       }
                       return a.iteration < b.iteration;
                     });
  }

  void write(std::ostream& os) const {
    write_csv_line(os, header());
    for (const ReportRow& row : rows) {
      auto real = [](const std::optional<double>& v) {
        return v ? format_real(*v) : std::string();
      };
      write_csv_line(
          os, {row.experiment_id, row.method,
               std::to_string(row.partition_count),
               std::to_string(row.partition_size), std::to_string(row.seed),
               std::to_string(row.iteration), real(row.primal_residual),
               real(row.objective), real(row.train_accuracy),
               real(row.test_accuracy),
               row.bytes_communicated
                   ? std::to_string(*row.bytes_communicated)
                   : std::string(),
               real(row.wall_clock_ms), row.status});
    }
  }

  std::string to_string() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }
};

// Drops the wall-clock column from serialized report text so reruns can
// be compared byte for byte.
inline std::string strip_wall_clock_column(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // Quote-aware column split; wall_clock_ms is second to last.
    std::vector<std::size_t> commas;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == ',' && !quoted) commas.push_back(i);
    }
    if (commas.size() >= 2) {
      const std::size_t second = commas[commas.size() - 2];
      const std::size_t last = commas.back();
      out << line.substr(0, second) << line.substr(last) << '\n';
    } else {
      out << line << '\n';
    }
  }
  return out.str();
}

}  // namespace consvm
