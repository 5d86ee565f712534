#pragma once

/// \file enrichment.hpp
/// Separative-work arithmetic for uranium enrichment.
///
/// The default feed (0.711 %) and tails (0.30 %) assays are fitted values:
/// with them the closed-form separative work reproduces 3.43 / 4.35 / 5.29
/// MTSWU per tonne of 3 / 3.5 / 4 % product and 0.1934 MTSWU per kg of 90 %
/// product to within 1 %.

namespace dsentry::enrichment {

inline constexpr double kNaturalFeedAssay = 0.00711;
inline constexpr double kDefaultTailsAssay = 0.003;
inline constexpr double kKgSwuPerMtswu = 1000.0;

struct EnrichmentSpec {
  double feed_assay = kNaturalFeedAssay;
  double product_assay = 0.03;
  double tails_assay = kDefaultTailsAssay;
  double product_mass_kg = 1000.0;
};

/// Throws DomainError unless 0 < tails < feed < product < 1 and mass > 0.
void validate(const EnrichmentSpec& spec);

/// Separative potential V(x) = (2x - 1) ln(x / (1 - x)), 0 < x < 1.
double value_function(double assay);

/// Feed and tails mass (kg) from the mass balance.
struct MassBalance {
  double feed_kg;
  double tails_kg;
};
MassBalance mass_balance(const EnrichmentSpec& spec);

/// Separative work in kg-SWU.
double separative_work(const EnrichmentSpec& spec);

/// Days needed to spend `energy_mtswu` at `power_mtswu_per_day`.
double production_duration(double energy_mtswu, double power_mtswu_per_day);

}  // namespace dsentry::enrichment
