#pragma once

/// \file core.hpp
/// Shared data model: shipment observations, series, labels, and the error
/// hierarchy used across the library.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsentry {

// ---------------------------------------------------------------------------
// Errors. The CLI maps these onto exit codes: DataError and its subclasses are
// "invalid config/data" (2), IoError is 3.
// ---------------------------------------------------------------------------

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t row, const std::string& what)
      : DataError("row " + std::to_string(row) + ": " + what), row_(row) {}

  /// 1-based line number in the source text (header is line 1).
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class DomainError : public DataError {
 public:
  using DataError::DataError;
};

class EstimationError : public DataError {
 public:
  using DataError::DataError;
};

class ClusteringError : public DataError {
 public:
  using DataError::DataError;
};

class TrainingError : public DataError {
 public:
  using DataError::DataError;
};

class ConfigError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------

/// One shipment: production duration y_t (days) and average power z_t
/// (MTSWU/day). Index t is 1-based.
struct ShipmentObservation {
  std::size_t t = 1;
  double duration_days = 1.0;
  double power = 1.0;

  friend bool operator==(const ShipmentObservation&, const ShipmentObservation&) = default;
};

/// Throws DomainError unless duration and power are finite and positive.
void validate(const ShipmentObservation& obs);

/// Energy consumed for the shipment, e_t = y_t * z_t (MTSWU).
inline double energy_of(const ShipmentObservation& obs) noexcept {
  return obs.duration_days * obs.power;
}

/// Ordered shipments with consecutive 1-based indices.
class ShipmentSeries {
 public:
  ShipmentSeries() = default;
  /// Validates every observation and the index sequence 1, 2, ..., n.
  explicit ShipmentSeries(std::vector<ShipmentObservation> observations);

  const std::vector<ShipmentObservation>& observations() const noexcept { return obs_; }
  std::size_t size() const noexcept { return obs_.size(); }
  bool empty() const noexcept { return obs_.empty(); }
  const ShipmentObservation& operator[](std::size_t i) const { return obs_[i]; }
  auto begin() const noexcept { return obs_.begin(); }
  auto end() const noexcept { return obs_.end(); }

  std::vector<double> durations() const;
  std::vector<double> powers() const;
  std::vector<double> energies() const;

  friend bool operator==(const ShipmentSeries&, const ShipmentSeries&) = default;

 private:
  std::vector<ShipmentObservation> obs_;
};

/// A series with optional ground-truth labels.
///
/// `pattern` and `diverted` are either empty (label absent) or have one entry
/// per shipment. `change_point` is the first shipment flagged as diverted, or
/// nullopt when none is.
struct LabeledSeries {
  ShipmentSeries series;
  std::vector<int> pattern;
  std::vector<bool> diverted;
  std::optional<std::size_t> change_point;

  bool has_pattern() const noexcept { return !pattern.empty(); }
  bool has_diverted() const noexcept { return !diverted.empty(); }

  friend bool operator==(const LabeledSeries&, const LabeledSeries&) = default;
};

/// First 1-based index with diverted[t] set, if any.
std::optional<std::size_t> first_diversion(const std::vector<bool>& diverted);

/// Checks label lengths, pattern ids >= 1 and the change-point invariant.
void validate(const LabeledSeries& labeled);

}  // namespace dsentry
