#include "tricrit/state_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "test_support.hpp"

namespace tricrit {
namespace {

TEST(StateIo, PureRoundTrip) {
  std::mt19937_64 rng(21);
  const PureState s = testing::random_state(rng, Dims{{2, 3, 2}});
  const PureState back = io::parse_pure_state(io::to_json(s));
  EXPECT_EQ(back.dims().n, s.dims().n);
  EXPECT_LT((back.amplitudes() - s.amplitudes()).norm(), 1e-15);
  EXPECT_EQ(io::to_json(back), io::to_json(s));
}

TEST(StateIo, DensityRoundTrip) {
  std::mt19937_64 rng(22);
  const DensityMatrix rho = testing::random_density(rng, Dims{{2, 2, 2}}, 3);
  const DensityMatrix back = io::parse_density(io::to_json(rho));
  EXPECT_LT((back.matrix() - rho.matrix()).norm(), 1e-15);
}

TEST(StateIo, Dispatch) {
  const auto pure = io::parse_state_file(io::to_json(named_state(NamedState::ghz2)));
  EXPECT_TRUE(std::holds_alternative<PureState>(pure));
  const auto mixed = io::parse_state_file(io::to_json(ghz_w_mixture(0.5)));
  EXPECT_TRUE(std::holds_alternative<DensityMatrix>(mixed));
}

TEST(StateIo, Rejects) {
  EXPECT_THROW(io::parse_pure_state("{"), InvalidInput);
  EXPECT_THROW(io::parse_pure_state("[1,2]"), InvalidInput);
  EXPECT_THROW(io::parse_pure_state(R"({"amplitudes": []})"), InvalidInput);
  EXPECT_THROW(io::parse_pure_state(R"({"dims": [2,2], "amplitudes": []})"), InvalidInput);
  EXPECT_THROW(io::parse_pure_state(R"({"dims": [1,2,2], "amplitudes": [[1,0],[0,0],[0,0],[0,0]]})"),
               InvalidInput);
  EXPECT_THROW(io::parse_pure_state(R"({"dims": [2,2,2], "amplitudes": [[1,0]]})"), InvalidInput);
  EXPECT_THROW(io::parse_pure_state(
                   R"({"dims": [2,2,2], "amplitudes": [[1e999,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]})"),
               InvalidInput);
  EXPECT_THROW(io::parse_pure_state(
                   R"({"dims": [2,2,2], "amplitudes": [["a",0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]})"),
               InvalidInput);
  EXPECT_THROW(io::parse_density(R"({"dims": [2,2,2], "matrix": [[[1,0]]]})"), InvalidInput);
  EXPECT_THROW(io::parse_state_file(R"({"dims": [2,2,2]})"), InvalidInput);
}

TEST(StateIo, RejectsInvalidDensity) {
  CMatrix m = CMatrix::Identity(8, 8) / 8.0;
  std::string text = io::to_json(DensityMatrix(Dims{{2, 2, 2}}, m));
  const auto pos = text.find("0.125");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 5, "0.500");
  EXPECT_THROW(io::parse_density(text), InvalidInput);
}

TEST(StateIo, Files) {
  const auto dir = std::filesystem::temp_directory_path() / "tricrit_state_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "ghz.json";
  io::write_file(path, io::to_json(named_state(NamedState::ghz2)));
  const PureState s = io::parse_pure_state(io::read_file(path));
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
  EXPECT_THROW(io::read_file(dir / "missing.json"), InvalidInput);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace tricrit
