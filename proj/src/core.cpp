#include "dsentry/core.hpp"

#include <cmath>

namespace dsentry {

void validate(const ShipmentObservation& obs) {
  if (!(std::isfinite(obs.duration_days) && obs.duration_days > 0.0)) {
    throw DomainError("shipment " + std::to_string(obs.t) + ": duration must be finite and > 0");
  }
  if (!(std::isfinite(obs.power) && obs.power > 0.0)) {
    throw DomainError("shipment " + std::to_string(obs.t) + ": power must be finite and > 0");
  }
  if (!std::isfinite(energy_of(obs))) {
    throw DomainError("shipment " + std::to_string(obs.t) + ": energy overflows");
  }
}

ShipmentSeries::ShipmentSeries(std::vector<ShipmentObservation> observations)
    : obs_(std::move(observations)) {
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    if (obs_[i].t != i + 1) {
      throw DomainError("shipment indices must be consecutive from 1; position " +
                        std::to_string(i + 1) + " has t = " + std::to_string(obs_[i].t));
    }
    validate(obs_[i]);
  }
}

std::vector<double> ShipmentSeries::durations() const {
  std::vector<double> out;
  out.reserve(obs_.size());
  for (const auto& o : obs_) out.push_back(o.duration_days);
  return out;
}

std::vector<double> ShipmentSeries::powers() const {
  std::vector<double> out;
  out.reserve(obs_.size());
  for (const auto& o : obs_) out.push_back(o.power);
  return out;
}

std::vector<double> ShipmentSeries::energies() const {
  std::vector<double> out;
  out.reserve(obs_.size());
  for (const auto& o : obs_) out.push_back(energy_of(o));
  return out;
}

std::optional<std::size_t> first_diversion(const std::vector<bool>& diverted) {
  for (std::size_t i = 0; i < diverted.size(); ++i) {
    if (diverted[i]) return i + 1;
  }
  return std::nullopt;
}

void validate(const LabeledSeries& labeled) {
  const auto n = labeled.series.size();
  if (labeled.has_pattern() && labeled.pattern.size() != n) {
    throw DomainError("pattern labels: expected " + std::to_string(n) + " entries");
  }
  if (labeled.has_diverted() && labeled.diverted.size() != n) {
    throw DomainError("diverted labels: expected " + std::to_string(n) + " entries");
  }
  for (std::size_t i = 0; i < labeled.pattern.size(); ++i) {
    if (labeled.pattern[i] < 1) {
      throw DomainError("shipment " + std::to_string(i + 1) + ": pattern id must be >= 1");
    }
  }
  if (labeled.change_point != first_diversion(labeled.diverted)) {
    throw DomainError("change_point must equal the first diverted shipment");
  }
}

}  // namespace dsentry
