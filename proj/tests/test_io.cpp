#include <filesystem>

#include "nclp/density.hpp"
#include "nclp/embedding.hpp"
#include "nclp/io.hpp"
#include "nclp/random.hpp"
#include "test_helpers.hpp"

using namespace nclp;
using nclp::testing::code_of;
using nclp::testing::diag;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("nclp_io_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(MatrixJsonTest, RoundTripIsExact) {
  CounterRng rng(91);
  const Mat x = random_gaussian(5, rng);
  EXPECT_EQ(parse_matrix(matrix_to_json(x)), x);
}

TEST(MatrixJsonTest, ParseErrors) {
  EXPECT_EQ(code_of([] { parse_matrix("not json"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_matrix(R"({"dim": 2, "entries": [[1, 0]]})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_matrix(R"({"dim": 1, "entries": [[1]]})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_matrix(R"({"entries": []})"); }), ErrorCode::ParseError);
}

TEST(DensityJsonTest, RoundTripAndTraceCheck) {
  const Density d = make_density(diag({0.2, 0.8}));
  const Density back = density_from_json(nlohmann::json::parse(density_to_json(d)));
  EXPECT_LT((back.matrix() - d.matrix()).norm(), 1e-15);
  EXPECT_EQ(code_of([] { density_from_json(nlohmann::json::parse(matrix_to_json(diag({1, 1})))); }),
            ErrorCode::ZeroTrace);
}

TEST(BlocksJsonTest, Format) {
  const BlockSpectrum b = BlockSpectrum::coordinate({2, 1}, {0.25, 0.5});
  const auto j = nlohmann::json::parse(blocks_to_json(b));
  EXPECT_EQ(j["ranks"], nlohmann::json({2, 1}));
  EXPECT_DOUBLE_EQ(j["values"][1].get<double>(), 0.5);
}

TEST(FileIoTest, ReadWriteAndMissing) {
  const auto dir = scratch("files");
  CounterRng rng(92);
  const Mat x = random_hermitian(3, rng);
  write_matrix_file(dir / "x.json", x);
  EXPECT_EQ(read_matrix_file(dir / "x.json"), x);
  EXPECT_EQ(code_of([&] { read_matrix_file(dir / "missing.json"); }), ErrorCode::IoError);
  EXPECT_EQ(code_of([&] { write_text_file(dir / "no" / "such" / "dir.json", "x"); }), ErrorCode::IoError);
}

TEST(FileIoTest, BasisManifestResolvesRelativePaths) {
  const auto dir = scratch("manifest");
  CounterRng rng(93);
  const Mat a = random_gaussian(3, rng), b = random_gaussian(3, rng);
  write_matrix_file(dir / "a.json", a);
  write_matrix_file(dir / "b.json", b);
  write_text_file(dir / "basis.json", R"({"matrices": ["a.json", "b.json"]})");
  const SubspaceBasis basis = read_basis_manifest(dir / "basis.json");
  ASSERT_EQ(basis.size(), 2u);
  EXPECT_EQ(basis.vectors()[1], b);
  write_text_file(dir / "bad.json", R"({"files": []})");
  EXPECT_EQ(code_of([&] { read_basis_manifest(dir / "bad.json"); }), ErrorCode::ParseError);
}
