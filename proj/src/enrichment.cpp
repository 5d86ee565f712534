#include "dsentry/enrichment.hpp"

#include <cmath>
#include <string>

#include "dsentry/core.hpp"

namespace dsentry::enrichment {

namespace {

bool inside_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

void validate(const EnrichmentSpec& spec) {
  if (!inside_unit(spec.feed_assay) || !inside_unit(spec.product_assay) ||
      !inside_unit(spec.tails_assay)) {
    throw DomainError("assays must lie strictly inside (0, 1)");
  }
  if (spec.feed_assay == spec.tails_assay) {
    throw DomainError("feed assay equals tails assay; mass balance is degenerate");
  }
  if (!(spec.tails_assay < spec.feed_assay && spec.feed_assay < spec.product_assay)) {
    throw DomainError("assays must satisfy tails < feed < product");
  }
  if (!(std::isfinite(spec.product_mass_kg) && spec.product_mass_kg > 0.0)) {
    throw DomainError("product mass must be > 0");
  }
}

double value_function(double assay) {
  if (!inside_unit(assay)) {
    throw DomainError("value function needs 0 < x < 1, got " + std::to_string(assay));
  }
  return (2.0 * assay - 1.0) * std::log(assay / (1.0 - assay));
}

MassBalance mass_balance(const EnrichmentSpec& spec) {
  validate(spec);
  const double tails = spec.product_mass_kg * (spec.product_assay - spec.feed_assay) /
                       (spec.feed_assay - spec.tails_assay);
  return {spec.product_mass_kg + tails, tails};
}

double separative_work(const EnrichmentSpec& spec) {
  const auto [feed, tails] = mass_balance(spec);
  const double swu = spec.product_mass_kg * value_function(spec.product_assay) +
                     tails * value_function(spec.tails_assay) -
                     feed * value_function(spec.feed_assay);
  // Rounding can leave a tiny negative value when product ~ feed.
  return swu < 0.0 ? 0.0 : swu;
}

double production_duration(double energy_mtswu, double power_mtswu_per_day) {
  if (!(power_mtswu_per_day > 0.0)) throw DomainError("power must be > 0");
  return energy_mtswu / power_mtswu_per_day;
}

}  // namespace dsentry::enrichment
