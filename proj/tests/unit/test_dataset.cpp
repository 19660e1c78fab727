#include "aspinn/dataset.hpp"
#include "aspinn/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace {

using namespace aspinn;

TEST(Dataset, GrowsAndRejectsMismatchedRows) {
  Dataset d(2);
  d.add({1.0, 2.0}, 3.0);
  EXPECT_EQ(d.size(), 1u);
  EXPECT_THROW(d.add({1.0}, 0.0), ShapeError);
  const std::uint64_t before = d.fingerprint();
  d.add({0.0, 0.0}, 0.0);
  EXPECT_NE(d.fingerprint(), before);
  EXPECT_EQ(d.input_matrix().rows(), 2);
  EXPECT_EQ(d.input_matrix().cols(), 2);
}

TEST(Dataset, CsvRoundTripIsExact) {
  Dataset d(2);
  d.add({0.1, 1.0 / 3.0}, -2.5e-17);
  d.add({1e300, -0.0}, 42.0);
  const auto path = std::filesystem::temp_directory_path() / "aspinn_dataset_roundtrip.csv";
  write_dataset_csv(d, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x1,x2,y");
  const Dataset back = read_dataset_csv(path);
  EXPECT_EQ(back.x(), d.x());
  EXPECT_EQ(back.y(), d.y());
  EXPECT_EQ(back.fingerprint(), d.fingerprint());
  std::filesystem::remove(path);
  EXPECT_THROW(read_dataset_csv(path), IoError);
}

TEST(Standardizer, ZeroSpreadKeepsUnitScale) {
  Eigen::MatrixXd cols(2, 3);
  cols << 1.0, 2.0, 3.0,  //
      5.0, 5.0, 5.0;
  const Standardizer s = Standardizer::fit(cols);
  EXPECT_EQ(s.scale(1), 1.0);
  const Eigen::MatrixXd z = s.apply(cols);
  EXPECT_NEAR(z.row(0).mean(), 0.0, 1e-15);
  EXPECT_TRUE(s.invert(z).isApprox(cols, 1e-15));
}

}  // namespace
