#include "dsentry/bench/curve_csv.hpp"

#include <fstream>

#include "dsentry/series_csv.hpp"

namespace dsentry::bench {

std::string serialize_curves(const std::vector<NamedCurve>& curves) {
  std::string out(kCurveHeader);
  out += '\n';
  for (const auto& named : curves) {
    for (const auto& p : named.curve) {
      out += named.algo;
      out += ',' + format_real(p.threshold);
      out += ',' + std::to_string(p.trials);
      out += ',' + std::to_string(p.n_false);
      out += ',' + std::to_string(p.n_detect);
      out += ',' + std::to_string(p.n_censored);
      out += ',' + format_real(p.far);
      out += ',' + (p.add ? format_real(*p.add) : std::string());
      out += ',' + (p.add_ci_halfwidth ? format_real(*p.add_ci_halfwidth) : std::string());
      out += '\n';
    }
  }
  return out;
}

void write_curves_file(const std::string& path, const std::vector<NamedCurve>& curves) {
  const auto text = serialize_curves(curves);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace dsentry::bench
