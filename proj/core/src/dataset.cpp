#include "aspinn/dataset.hpp"

#include "aspinn/errors.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace aspinn {

double squared_distance(const Location& a, const Location& b) {
  if (a.size() != b.size()) throw ShapeError("location dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

Dataset::Dataset(std::vector<Location> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw ShapeError("dataset: x and y lengths differ");
  dims_ = x_.empty() ? 0 : x_.front().size();
  for (const auto& row : x_) {
    if (row.size() != dims_) throw ShapeError("dataset: ragged input rows");
  }
}

void Dataset::add(Location x, double y) {
  if (dims_ == 0 && y_.empty()) dims_ = x.size();
  if (x.size() != dims_) throw ShapeError("dataset: location has wrong dimension");
  x_.push_back(std::move(x));
  y_.push_back(y);
}

void Dataset::append(const Dataset& other) {
  for (std::size_t i = 0; i < other.size(); ++i) add(other.x(i), other.y(i));
}

Eigen::MatrixXd Dataset::input_matrix() const { return to_matrix(x_); }

Eigen::RowVectorXd Dataset::target_row() const {
  return Eigen::Map<const Eigen::RowVectorXd>(y_.data(), static_cast<Eigen::Index>(y_.size()));
}

std::uint64_t Dataset::fingerprint() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t i = 0; i < y_.size(); ++i) {
    for (double v : x_[i]) feed(v);
    feed(y_[i]);
  }
  return h;
}

Eigen::MatrixXd to_matrix(std::span<const Location> xs) {
  const std::size_t d = xs.empty() ? 0 : xs.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(xs.size()));
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].size() != d) throw ShapeError("ragged location list");
    for (std::size_t i = 0; i < d; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = xs[j][i];
  }
  return m;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& columns) {
  Standardizer s;
  const auto n = columns.cols();
  s.mean = columns.rowwise().mean();
  s.scale = Eigen::VectorXd::Ones(columns.rows());
  if (n > 1) {
    const Eigen::MatrixXd centered = columns.colwise() - s.mean;
    const Eigen::VectorXd var = centered.array().square().rowwise().sum() / static_cast<double>(n);
    for (Eigen::Index i = 0; i < var.size(); ++i) {
      const double sd = std::sqrt(var(i));
      s.scale(i) = sd > 1e-12 ? sd : 1.0;
    }
  }
  return s;
}

Standardizer Standardizer::identity(std::size_t dims) {
  const auto d = static_cast<Eigen::Index>(dims);
  return {Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)};
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& columns) const {
  if (columns.rows() != mean.size()) throw ShapeError("standardizer: dimension mismatch");
  return (columns.colwise() - mean).array().colwise() / scale.array();
}

Location Standardizer::apply(const Location& x) const {
  if (static_cast<Eigen::Index>(x.size()) != mean.size()) throw ShapeError("standardizer: dimension mismatch");
  Location out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out[i] = (x[i] - mean(k)) / scale(k);
  }
  return out;
}

Eigen::MatrixXd Standardizer::invert(const Eigen::MatrixXd& columns) const {
  if (columns.rows() != mean.size()) throw ShapeError("standardizer: dimension mismatch");
  return (columns.array().colwise() * scale.array()).matrix().colwise() + mean;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw IoError("failed to format value");
  return std::string(buf, end);
}

double parse_double(std::string_view s, const std::filesystem::path& path, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < data.dims(); ++i) out << 'x' << (i + 1) << ',';
  out << "y\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (double v : data.x(r)) out << format_double(v) << ',';
    out << format_double(data.y(r)) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  std::size_t columns = 1;
  for (char c : line) columns += (c == ',');
  if (columns < 2) throw IoError(path.string() + ": header must be x1,...,xd,y");
  Dataset data(columns - 1);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> values;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_double(rest.substr(0, comma), path, lineno));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (values.size() != columns) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(columns) +
                    " columns");
    }
    const double y = values.back();
    values.pop_back();
    data.add(std::move(values), y);
  }
  return data;
}

}  // namespace aspinn
