#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lmg/error.hpp"
#include "lmg/sweeps.hpp"

namespace lmg::io {

inline constexpr std::string_view kCsvHeader = "n,l,gamma,h,entropy_bits,largest_prob,ground_energy";

// Shortest decimal that parses back to the same double.
inline std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw numerical_error("cannot format floating-point value");
  return std::string(buffer, end);
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [end, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || end != last) throw usage_error("not a number: '" + std::string(text) + "'");
  return value;
}

inline int parse_int(std::string_view text) {
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw usage_error("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

inline void write_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << r.l << ',' << format_double(r.gamma) << ',' << format_double(r.h) << ','
        << format_double(r.entropy_bits) << ',' << format_double(r.largest_prob) << ','
        << format_double(r.ground_energy) << '\n';
  }
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline std::vector<SweepRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw usage_error("CSV header mismatch");
  std::vector<SweepRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 7) throw usage_error("CSV row has " + std::to_string(fields.size()) + " fields: " + line);
    records.push_back({parse_int(fields[0]), parse_int(fields[1]), parse_double(fields[2]), parse_double(fields[3]),
                       parse_double(fields[4]), parse_double(fields[5]), parse_double(fields[6])});
  }
  return records;
}

// Grid syntax: either a comma-separated list "0,0.5,1" or an inclusive range
// "start:stop:step". Range points are start + k*step, so no error accumulates.
inline std::vector<double> parse_grid(std::string_view text) {
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw usage_error("range grid must be start:stop:step, got '" + std::string(text) + "'");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
      throw usage_error("range grid needs finite start <= stop and step > 0, got '" + std::string(text) + "'");
    }
    const double span = (stop - start) / step;
    if (span > 1e6) throw usage_error("range grid has too many points: '" + std::string(text) + "'");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t k = 0; k < count; ++k) grid.push_back(start + static_cast<double>(k) * step);
    return grid;
  }
  std::vector<double> grid;
  for (auto part : split(text, ',')) {
    if (part.empty()) throw usage_error("empty entry in grid '" + std::string(text) + "'");
    grid.push_back(parse_double(part));
  }
  return grid;
}

inline std::vector<int> parse_int_grid(std::string_view text) {
  std::vector<int> out;
  for (double v : parse_grid(text)) {
    const double rounded = std::round(v);
    if (std::abs(v - rounded) > 1e-9 || std::abs(rounded) > 1e9) {
      throw usage_error("grid '" + std::string(text) + "' must contain integers");
    }
    out.push_back(static_cast<int>(rounded));
  }
  return out;
}

inline void write_csv_file(const std::string& path, const std::vector<SweepRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw usage_error("cannot open output file '" + path + "'");
  write_csv(out, records);
  out.flush();
  if (!out) throw usage_error("failed writing output file '" + path + "'");
}

}  // namespace lmg::io
