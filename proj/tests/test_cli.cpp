#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "nclp/cli.hpp"
#include "nclp/experiment.hpp"
#include "nclp/io.hpp"
#include "nclp/json.hpp"
#include "test_helpers.hpp"

using namespace nclp;
using nclp::testing::code_of;

namespace {

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nclp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::vector<nlohmann::json> lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("nclp_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(CliCheckTest, DiffInequalityPasses) {
  const auto r = cli({"check", "diff-inequality", "--p", "3", "--dim", "4", "--trials", "100", "--seed", "7"});
  EXPECT_EQ(r.status, 0) << r.err;
  const auto recs = lines(r.out);
  ASSERT_EQ(recs.size(), 101u);
  const auto& summary = recs.back();
  EXPECT_TRUE(summary["summary"].get<bool>());
  EXPECT_EQ(summary["fail_count"], 0);
  EXPECT_EQ(summary["pass_count"], 100);
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    EXPECT_EQ(recs[i]["trial"], i);
    EXPECT_EQ(recs[i]["check_name"], "diff-inequality");
    for (const char* key : {"inputs_digest", "lhs", "rhs", "slack", "tolerance", "verdict", "seed", "p_q_params"})
      EXPECT_TRUE(recs[i].contains(key)) << key;
  }
}

TEST(CliCheckTest, InvalidExponentNamesField) {
  const auto r = cli({"check", "diff-inequality", "--p", "1.5", "--dim", "4", "--trials", "10"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("ConfigInvalid"), std::string::npos);
  EXPECT_NE(r.err.find("'p'"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliCheckTest, OtherConfigErrorsNameFields) {
  auto field_of = [](std::vector<std::string> args) {
    const auto r = cli(std::move(args));
    EXPECT_EQ(r.status, 2);
    const auto a = r.err.find('\'');
    return r.err.substr(a + 1, r.err.find('\'', a + 1) - a - 1);
  };
  EXPECT_EQ(field_of({"check", "schur-half", "--trials", "0"}), "trials");
  EXPECT_EQ(field_of({"check", "schur-half", "--dim", "65"}), "dim");
  EXPECT_EQ(field_of({"check", "schur-half", "--dim", "0"}), "dim");
  EXPECT_EQ(field_of({"check", "qr-identity", "--p", "2", "--r", "2"}), "r");
  EXPECT_EQ(field_of({"check", "araki-kosaki", "--eta", "1"}), "eta");
  EXPECT_EQ(field_of({"check", "schur-half", "--eta", "0.5"}), "eta");
  EXPECT_EQ(field_of({"check", "embedding-roundtrip", "--q", "2", "--p", "1.5"}), "p");
  EXPECT_EQ(field_of({"check", "positive-split", "--t", "0"}), "t");
  EXPECT_EQ(field_of({"check", "no-such-check"}), "check");
  EXPECT_EQ(field_of({"check", "schur-half", "--p", "banana"}), "p");
}

TEST(CliCheckTest, ByteIdenticalAcrossRunsAndJobCounts) {
  const std::vector<std::string> base = {"check", "resolvent-triangular", "--dim", "2,5", "--trials", "7", "--seed", "99"};
  auto with_jobs = [&](const char* jobs) {
    auto args = base;
    args.insert(args.end(), {"--jobs", jobs});
    return cli(args).out;
  };
  const std::string a = with_jobs("1");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, with_jobs("1"));
  EXPECT_EQ(a, with_jobs("4"));
  EXPECT_NE(a, cli({"check", "resolvent-triangular", "--dim", "2,5", "--trials", "7", "--seed", "100"}).out);
}

TEST(CliCheckTest, SeedFallsBackToEnvironment) {
  const auto explicit_seed = cli({"check", "balance", "--trials", "3", "--seed", "1234"}).out;
  ::setenv("NCLP_SEED", "1234", 1);
  const auto from_env = cli({"check", "balance", "--trials", "3"}).out;
  ::unsetenv("NCLP_SEED");
  EXPECT_EQ(explicit_seed, from_env);
}

TEST(CliCheckTest, ConfigFileAndOverride) {
  const auto dir = scratch("config");
  write_text_file(dir / "cfg.json",
                  R"({"check": "araki-kosaki", "q": ["2"], "eta": [0.25], "dim": [3], "trials": 4, "seed": 5})");
  const auto r = cli({"check", "araki-kosaki", "--config", (dir / "cfg.json").string()});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 5u);
  const auto o = cli({"check", "araki-kosaki", "--config", (dir / "cfg.json").string(), "--trials", "2"});
  EXPECT_EQ(lines(o.out).size(), 3u);
}

TEST(CliCheckTest, CsvFormat) {
  const auto r = cli({"check", "schur-half", "--trials", "2", "--dim", "3", "--format", "csv", "--p", "2"});
  EXPECT_EQ(r.status, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, row1, row2, summary;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  std::getline(in, summary);
  EXPECT_EQ(header.rfind("trial,check_name,", 0), 0u);
  EXPECT_EQ(row1.rfind("0,schur-half,", 0), 0u);
  EXPECT_EQ(summary.rfind("#summary,pass_count=2,fail_count=0", 0), 0u);
}

TEST(CliCheckTest, FailuresSetStatusAndWriteRepro) {
  // A zero tolerance turns rounding-level slack violations into failures.
  const auto dir = scratch("repro");
  const auto out = (dir / "report.ndjson").string();
  const auto r = cli({"check", "integral-identity", "--trials", "20", "--dim", "6", "--seed", "3", "--tol", "0",
                      "--out", out});
  const auto recs = lines(read_text_file(out));
  const auto& summary = recs.back();
  ASSERT_GT(summary["fail_count"].get<int>(), 0);
  EXPECT_EQ(r.status, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    worst = std::max(worst, std::max(0.0, -recs[i]["slack"].get<double>()));
    if (recs[i]["verdict"] == "fail") {
      const auto repro = dir / ("report.ndjson.repro/trial-" + std::to_string(i) + ".json");
      ASSERT_TRUE(std::filesystem::exists(repro));
      const auto j = nlohmann::json::parse(read_text_file(repro));
      EXPECT_EQ(j["trial"], i);
      EXPECT_EQ(matrix_from_json(j["inputs"]["a"]).rows(), 6);
    }
  }
  EXPECT_EQ(summary["max_violation"].get<double>(), worst);
}

TEST(CliCheckTest, WallTimeIsOptIn) {
  const auto plain = lines(cli({"check", "balance", "--trials", "2"}).out).back();
  EXPECT_FALSE(plain.contains("wall_time"));
  const auto timed = lines(cli({"check", "balance", "--trials", "2", "--wall-time"}).out).back();
  EXPECT_TRUE(timed.contains("wall_time"));
}

TEST(CliCheckTest, EveryCheckRunsClean) {
  for (const auto& name : all_check_names()) {
    std::vector<std::string> args = {"check", name, "--trials", "2", "--dim", "3", "--seed", "1"};
    if (name == "kernel-positivity") args = {"check", name, "--kmax", "200"};
    const auto r = cli(args);
    EXPECT_EQ(r.status, 0) << name << ": " << r.err;
    const auto summary = lines(r.out).back();
    EXPECT_EQ(summary["error_count"], 0) << name;
  }
}

TEST(CliGenTest, Kinds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Mat psd = parse_matrix(cli({"gen", "psd", "--dim", "5", "--seed", std::to_string(seed)}).out);
    const RealVec ev = eigh(psd).values;
    EXPECT_GE(ev.minCoeff(), -1e-12 * ev.maxCoeff());
  }
  const Mat d = parse_matrix(cli({"gen", "density", "--dim", "6", "--seed", "3"}).out);
  EXPECT_NEAR(d.trace().real(), 1.0, 1e-12);
  const Mat h = parse_matrix(cli({"gen", "hermitian", "--dim", "6", "--seed", "3"}).out);
  EXPECT_EQ(h, Mat(h.adjoint()));
  const auto ut = cli({"gen", "upper_triangular", "--dim", "6", "--seed", "3"});
  const auto j = nlohmann::json::parse(ut.out);
  const Mat u = matrix_from_json(j);
  Eigen::Index start = 0;
  for (const auto& rk : j["ranks"]) {
    const auto k = rk.get<Eigen::Index>();
    // Nothing below the diagonal blocks.
    if (start + k < 6) EXPECT_EQ(u.block(start + k, start, 6 - start - k, k).norm(), 0.0);
    start += k;
  }
  EXPECT_EQ(start, 6);
  EXPECT_EQ(cli({"gen", "psd", "--dim", "4", "--seed", "8"}).out, cli({"gen", "psd", "--dim", "4", "--seed", "8"}).out);
  EXPECT_EQ(cli({"gen", "bogus"}).status, 2);
}

TEST(CliConstructTest, EmbeddingRoundTripThroughFiles) {
  const auto dir = scratch("construct");
  const auto d = dir / "d.json", x = dir / "x.json", u = dir / "u.json", back = dir / "back.json";
  ASSERT_EQ(cli({"gen", "density", "--dim", "4", "--seed", "1", "--out", d.string()}).status, 0);
  ASSERT_EQ(cli({"gen", "hermitian", "--dim", "4", "--seed", "2", "--out", x.string()}).status, 0);
  ASSERT_EQ(cli({"construct", "u", "--x", x.string(), "--d", d.string(), "--q", "1", "--p", "1.5", "--out",
                 u.string()}).status,
            0);
  ASSERT_EQ(cli({"construct", "reconstruct", "--u", u.string(), "--d", d.string(), "--q", "1", "--p", "1.5", "--out",
                 back.string()}).status,
            0);
  const Mat xm = read_matrix_file(x);
  EXPECT_LT((read_matrix_file(back) - xm).norm(), 1e-8 * xm.norm());
  const auto blocks = cli({"construct", "blocks", "--d", d.string()});
  EXPECT_EQ(nlohmann::json::parse(blocks.out)["ranks"].size(), 4u);
  const auto disc = cli({"construct", "discretize", "--d", d.string(), "--eps", "0.5"});
  EXPECT_EQ(disc.status, 0) << disc.err;
  const auto split = cli({"construct", "split", "--x", x.string()});
  EXPECT_EQ(nlohmann::json::parse(split.out)["parts"].size(), 4u);
  // Unnormalized density files are rejected.
  ASSERT_EQ(cli({"gen", "psd", "--dim", "4", "--seed", "1", "--out", (dir / "psd.json").string()}).status, 0);
  const auto bad = cli({"construct", "blocks", "--d", (dir / "psd.json").string()});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("ZeroTrace"), std::string::npos);
  EXPECT_EQ(cli({"construct", "u", "--x", (dir / "nope.json").string(), "--d", d.string()}).status, 1);
}

TEST(CliConstructTest, DistortionWithManifest) {
  const auto dir = scratch("distortion");
  for (int k = 0; k < 2; ++k)
    ASSERT_EQ(cli({"gen", "hermitian", "--dim", "4", "--seed", std::to_string(k), "--out",
                   (dir / ("b" + std::to_string(k) + ".json")).string()}).status,
              0);
  write_text_file(dir / "basis.json", R"({"matrices": ["b0.json", "b1.json"]})");
  const auto r = cli({"construct", "distortion", "--basis", (dir / "basis.json").string(), "--q", "1", "--p", "1.25",
                      "--trials", "50"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["lower"].get<double>(), 0.0);
  EXPECT_GE(j["ratio"].get<double>(), 1.0);
}

TEST(CliEstimateTest, TriangularOnS2IsOne) {
  const auto r = cli({"estimate-norm", "--map", "triangular", "--p", "2", "--dim", "5", "--trials", "3"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["estimate"].get<double>(), 1.0, 1e-9);
  const auto m = cli({"estimate-norm", "--map", "min", "--p", "inf", "--dim", "5", "--trials", "2"});
  EXPECT_LE(nlohmann::json::parse(m.out)["estimate"].get<double>(), 0.5 * (1 + 1e-9));
}

TEST(CliBinaryTest, ExitStatusFromProcess) {
  const std::string bin = NCLP_CLI_PATH;
  EXPECT_EQ(std::system((bin + " check balance --trials 2 > /dev/null 2>&1").c_str()), 0);
  EXPECT_NE(std::system((bin + " check diff-inequality --p 1.5 > /dev/null 2>&1").c_str()), 0);
}
