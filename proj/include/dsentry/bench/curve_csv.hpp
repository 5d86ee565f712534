#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dsentry/bench/bench.hpp"

namespace dsentry::bench {

/// Header `algo,threshold,trials,n_false,n_detect,n_censored,far,add,add_ci95`;
/// reals in %.17g, an absent ADD (and its CI) as empty fields.
inline constexpr std::string_view kCurveHeader =
    "algo,threshold,trials,n_false,n_detect,n_censored,far,add,add_ci95";

struct NamedCurve {
  std::string algo;
  Curve curve;
};

std::string serialize_curves(const std::vector<NamedCurve>& curves);
void write_curves_file(const std::string& path, const std::vector<NamedCurve>& curves);

}  // namespace dsentry::bench
