#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nclp/matcore.hpp"
#include "nclp/pnorm.hpp"
#include "nclp/report.hpp"

namespace nclp {

enum class CheckKind {
  DiffInequality,
  IntegralIdentity,
  OperatorConvex,
  CommutativeBound,
  ArakiKosaki,
  Derivative,
  PositiveSplit,
  KernelPositivity,
  SchurHalf,
  ResolventTriangular,
  QrIdentity,
  QrAntisymmetric,
  Lambda,
  Referee,
  EmbeddingRoundtrip,
  Balance,
};

std::string check_name(CheckKind kind);
std::optional<CheckKind> parse_check_kind(const std::string& name);
std::vector<std::string> all_check_names();

enum class OutputFormat { Json, Csv };

struct ExperimentConfig {
  CheckKind check = CheckKind::DiffInequality;
  std::vector<Eigen::Index> dims = {4};
  // Empty grids take the check's default.
  std::vector<PNorm> p;
  std::vector<PNorm> q;
  std::vector<PNorm> r;
  std::vector<double> eta;
  std::vector<double> t;
  std::vector<double> s;
  int trials = 100;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out;
  int jobs = 0;  // 0: all cores
  OutputFormat format = OutputFormat::Json;
  // Appends wall time to the summary, which breaks byte-identical output.
  bool wall_time = false;
  // Largest condition number of sampled densities.
  double condition = 1e4;
  int kmax = 10000;
  int quad_points = 64;
};

// Fills default grids and checks every field against the check's
// preconditions. Errors: ConfigInvalid naming the offending field.
ExperimentConfig validated(ExperimentConfig config);

ExperimentConfig config_from_json(const std::string& text);

// One grid point: dimension plus the exponents in play for the check.
struct TrialPoint {
  std::uint64_t index = 0;
  Eigen::Index dim = 1;
  std::optional<PNorm> p;
  std::optional<PNorm> q;
  std::optional<PNorm> r;
  double eta = 0.0;
  double t = 0.0;
  double s = 0.0;
};

struct TrialOutcome {
  CheckReport report;
  std::vector<std::pair<std::string, Mat>> inputs;
  std::optional<std::string> error;
};

std::vector<TrialPoint> expand_grid(const ExperimentConfig& config);
TrialOutcome run_trial(const ExperimentConfig& config, const TrialPoint& point);

struct RunSummary {
  std::uint64_t pass_count = 0;
  std::uint64_t fail_count = 0;
  std::uint64_t error_count = 0;
  double max_violation = 0.0;
  double wall_time = 0.0;

  int exit_status() const { return fail_count == 0 && error_count == 0 ? 0 : 1; }
};

// Runs every trial, writes one record per trial in trial order followed by a
// summary record. Failing trials also serialize their inputs under
// `<out>.repro/` when an output path is set.
RunSummary run(const ExperimentConfig& config, std::ostream& out);

enum class GenKind { Hermitian, Psd, Density, UpperTriangular };

struct GeneratedMatrix {
  Mat matrix;
  // Block ranks of the triangular structure (upper_triangular only).
  std::vector<Eigen::Index> ranks;
};

GeneratedMatrix gen_random(GenKind kind, Eigen::Index dim, std::uint64_t seed);
std::optional<GenKind> parse_gen_kind(const std::string& name);

}  // namespace nclp
