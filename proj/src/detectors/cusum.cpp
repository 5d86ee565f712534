#include "dsentry/detectors/cusum.hpp"

#include <cmath>

#include "dsentry/core.hpp"

namespace dsentry::detectors {

void validate(const ShiftSpec& shift) {
  if (!std::isfinite(shift.lower_mult) || !std::isfinite(shift.upper_mult) ||
      !(shift.lower_mult >= 0.0) || !(shift.upper_mult >= shift.lower_mult)) {
    throw ConfigError("shift must satisfy 0 <= lower_mult <= upper_mult");
  }
}

}  // namespace dsentry::detectors
