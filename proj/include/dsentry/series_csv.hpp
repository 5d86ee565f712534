#pragma once

/// \file series_csv.hpp
/// Shipment-series CSV interchange.
///
/// Header: `t,duration_days,power_mtswu_per_day[,pattern][,diverted]`, `\n`
/// line endings, reals printed with 17 significant digits so that
/// parse(serialize(s)) == s bit for bit.

#include <string>
#include <string_view>

#include "dsentry/core.hpp"

namespace dsentry {

/// Throws ParseError naming the offending line.
LabeledSeries parse_series(std::string_view text);

std::string serialize_series(const LabeledSeries& labeled);

LabeledSeries read_series_file(const std::string& path);
void write_series_file(const std::string& path, const LabeledSeries& labeled);

/// `%.17g` formatting used by every text output in the project.
std::string format_real(double value);

}  // namespace dsentry
