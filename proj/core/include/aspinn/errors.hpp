#pragma once

#include <stdexcept>
#include <string>

namespace aspinn {

/// Invalid construction parameters (empty layer list, r <= 0, unknown problem, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimension mismatch between operands.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the admissible domain of a problem (off-grid location, bad N rate).
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// API misuse, e.g. predicting with an untrained model.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class TrainingDivergence : public std::runtime_error {
 public:
  TrainingDivergence(const std::string& what, int epoch)
      : std::runtime_error(what + " (epoch " + std::to_string(epoch) + ")"), detail_(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }
  /// Message without the epoch suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  int epoch_;
};

/// Conditioning a surrogate covariance on a pivot with (numerically) zero variance.
class DegeneratePivot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aspinn
