#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace aspinn {

/// A point of the input space. 1-D problems use single-element locations.
using Location = std::vector<double>;

double squared_distance(const Location& a, const Location& b);

/// Observed pairs D_t = (X_obs, Y_obs), in insertion order.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t dims) : dims_(dims) {}
  Dataset(std::vector<Location> x, std::vector<double> y);

  void add(Location x, double y);
  void append(const Dataset& other);

  std::size_t size() const noexcept { return y_.size(); }
  bool empty() const noexcept { return y_.empty(); }
  std::size_t dims() const noexcept { return dims_; }

  const std::vector<Location>& x() const noexcept { return x_; }
  const std::vector<double>& y() const noexcept { return y_; }
  const Location& x(std::size_t i) const { return x_[i]; }
  double y(std::size_t i) const { return y_[i]; }

  /// Inputs as a dims x n column-per-sample matrix.
  Eigen::MatrixXd input_matrix() const;
  Eigen::RowVectorXd target_row() const;

  /// FNV-1a over the raw bytes of every coordinate and response.
  std::uint64_t fingerprint() const noexcept;

 private:
  std::size_t dims_ = 0;
  std::vector<Location> x_;
  std::vector<double> y_;
};

Eigen::MatrixXd to_matrix(std::span<const Location> xs);

/// Per-dimension affine standardization. Dimensions with zero spread keep unit scale.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& columns);
  static Standardizer identity(std::size_t dims);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& columns) const;
  Location apply(const Location& x) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& columns) const;
  std::size_t dims() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// CSV with header `x1,...,xd,y`; values written with round-trip precision.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace aspinn
