#include "dsentry/series_csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace dsentry {

namespace {

constexpr std::string_view kColT = "t";
constexpr std::string_view kColDuration = "duration_days";
constexpr std::string_view kColPower = "power_mtswu_per_day";
constexpr std::string_view kColPattern = "pattern";
constexpr std::string_view kColDiverted = "diverted";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  auto lines = split(text, '\n');
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

double parse_real(std::string_view field, std::size_t row, std::string_view column) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(row, "malformed number '" + std::string(field) + "' in column " +
                              std::string(column));
  }
  return value;
}

long long parse_integer(std::string_view field, std::size_t row, std::string_view column) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(row, "malformed integer '" + std::string(field) + "' in column " +
                              std::string(column));
  }
  return value;
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

LabeledSeries parse_series(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "missing header row");

  int col_t = -1, col_dur = -1, col_pow = -1, col_pat = -1, col_div = -1;
  const auto header = split(lines[0], ',');
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = header[c];
    int* slot = name == kColT          ? &col_t
                : name == kColDuration ? &col_dur
                : name == kColPower    ? &col_pow
                : name == kColPattern  ? &col_pat
                : name == kColDiverted ? &col_div
                                       : nullptr;
    if (slot == nullptr) throw ParseError(1, "unknown column '" + std::string(name) + "'");
    if (*slot != -1) throw ParseError(1, "duplicate column '" + std::string(name) + "'");
    *slot = static_cast<int>(c);
  }
  if (col_t < 0 || col_dur < 0 || col_pow < 0) {
    throw ParseError(1, "header must contain t, duration_days, power_mtswu_per_day");
  }

  LabeledSeries out;
  std::vector<ShipmentObservation> obs;
  obs.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t row = li + 1;
    const auto fields = split(lines[li], ',');
    if (fields.size() != header.size()) {
      throw ParseError(row, "expected " + std::to_string(header.size()) + " fields, got " +
                                std::to_string(fields.size()));
    }
    const auto t = parse_integer(fields[col_t], row, kColT);
    if (t != static_cast<long long>(obs.size() + 1)) {
      throw ParseError(row, "non-consecutive index t = " + std::string(fields[col_t]) +
                                ", expected " + std::to_string(obs.size() + 1));
    }
    ShipmentObservation o{static_cast<std::size_t>(t), parse_real(fields[col_dur], row, kColDuration),
                          parse_real(fields[col_pow], row, kColPower)};
    try {
      validate(o);
    } catch (const DomainError& e) {
      throw ParseError(row, e.what());
    }
    obs.push_back(o);
    if (col_pat >= 0) {
      const auto p = parse_integer(fields[col_pat], row, kColPattern);
      if (p < 1) throw ParseError(row, "pattern must be >= 1");
      out.pattern.push_back(static_cast<int>(p));
    }
    if (col_div >= 0) {
      const auto f = fields[col_div];
      if (f != "0" && f != "1") throw ParseError(row, "diverted must be 0 or 1");
      out.diverted.push_back(f == "1");
    }
  }
  out.series = ShipmentSeries(std::move(obs));
  out.change_point = first_diversion(out.diverted);
  return out;
}

std::string serialize_series(const LabeledSeries& labeled) {
  validate(labeled);
  const bool with_pattern = labeled.has_pattern();
  const bool with_diverted = labeled.has_diverted();
  std::string out = "t,duration_days,power_mtswu_per_day";
  if (with_pattern) out += ",pattern";
  if (with_diverted) out += ",diverted";
  out += '\n';
  const auto& s = labeled.series;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += std::to_string(s[i].t);
    out += ',';
    out += format_real(s[i].duration_days);
    out += ',';
    out += format_real(s[i].power);
    if (with_pattern) {
      out += ',';
      out += std::to_string(labeled.pattern[i]);
    }
    if (with_diverted) out += labeled.diverted[i] ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

LabeledSeries read_series_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_series(buf.str());
}

void write_series_file(const std::string& path, const LabeledSeries& labeled) {
  const auto text = serialize_series(labeled);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace dsentry
