#include "nclp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "nclp/density.hpp"
#include "nclp/embedding.hpp"
#include "nclp/error.hpp"
#include "nclp/inequalities.hpp"
#include "nclp/io.hpp"
#include "nclp/json.hpp"
#include "nclp/random.hpp"
#include "nclp/schur.hpp"
#include "nclp/spaces.hpp"
#include "nclp/triangular.hpp"

namespace nclp {

namespace {

struct CheckInfo {
  CheckKind kind;
  const char* name;
};

constexpr CheckInfo kChecks[] = {
    {CheckKind::DiffInequality, "diff-inequality"},
    {CheckKind::IntegralIdentity, "integral-identity"},
    {CheckKind::OperatorConvex, "operator-convex"},
    {CheckKind::CommutativeBound, "commutative-bound"},
    {CheckKind::ArakiKosaki, "araki-kosaki"},
    {CheckKind::Derivative, "derivative"},
    {CheckKind::PositiveSplit, "positive-split"},
    {CheckKind::KernelPositivity, "kernel-positivity"},
    {CheckKind::SchurHalf, "schur-half"},
    {CheckKind::ResolventTriangular, "resolvent-triangular"},
    {CheckKind::QrIdentity, "qr-identity"},
    {CheckKind::QrAntisymmetric, "qr-antisymmetric"},
    {CheckKind::Lambda, "lambda"},
    {CheckKind::Referee, "referee"},
    {CheckKind::EmbeddingRoundtrip, "embedding-roundtrip"},
    {CheckKind::Balance, "balance"},
};

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigInvalid, "field '" + field + "': " + why);
}

std::vector<PNorm> pnorms(std::initializer_list<double> values) {
  std::vector<PNorm> out;
  for (const double v : values) out.emplace_back(v);
  return out;
}

bool uses_p(CheckKind k) {
  switch (k) {
    case CheckKind::ArakiKosaki:
    case CheckKind::KernelPositivity:
    case CheckKind::Lambda:
    case CheckKind::Referee:
    case CheckKind::Balance:
      return false;
    default:
      return true;
  }
}

bool uses_q(CheckKind k) {
  return k == CheckKind::ArakiKosaki || k == CheckKind::Lambda || k == CheckKind::Referee ||
         k == CheckKind::EmbeddingRoundtrip;
}

bool uses_r(CheckKind k) { return k == CheckKind::QrIdentity || k == CheckKind::QrAntisymmetric; }

bool uses_eta(CheckKind k) { return k == CheckKind::ArakiKosaki || k == CheckKind::ResolventTriangular; }

bool uses_t(CheckKind k) { return k == CheckKind::PositiveSplit; }

bool uses_s(CheckKind k) { return k == CheckKind::Derivative; }

double finite_p(const PNorm& p) { return p.is_infinite() ? -1.0 : p.value(); }

}  // namespace

std::string check_name(CheckKind kind) {
  for (const auto& c : kChecks)
    if (c.kind == kind) return c.name;
  return "unknown";
}

std::optional<CheckKind> parse_check_kind(const std::string& name) {
  for (const auto& c : kChecks)
    if (name == c.name) return c.kind;
  return std::nullopt;
}

std::vector<std::string> all_check_names() {
  std::vector<std::string> out;
  for (const auto& c : kChecks) out.emplace_back(c.name);
  return out;
}

ExperimentConfig validated(ExperimentConfig c) {
  if (c.trials < 1) invalid("trials", "must be >= 1");
  if (c.dims.empty()) invalid("dim", "at least one dimension is required");
  for (const auto n : c.dims)
    if (n < 1 || n > 64) invalid("dim", "each dimension must lie in [1, 64]");
  if (c.jobs < 0) invalid("jobs", "must be >= 0");
  if (!(c.condition >= 1.0) || !std::isfinite(c.condition)) invalid("condition", "must be finite and >= 1");
  if (c.tol && !(*c.tol >= 0.0)) invalid("tol", "must be >= 0");
  if (c.kmax < 1) invalid("kmax", "must be >= 1");
  if (c.quad_points < 64) invalid("quad-points", "must be >= 64");

  const CheckKind k = c.check;
  if (!uses_p(k) && !c.p.empty()) invalid("p", "not used by check " + check_name(k));
  if (!uses_q(k) && !c.q.empty()) invalid("q", "not used by check " + check_name(k));
  if (!uses_r(k) && !c.r.empty()) invalid("r", "not used by check " + check_name(k));
  if (!uses_eta(k) && !c.eta.empty()) invalid("eta", "not used by check " + check_name(k));
  if (!uses_t(k) && !c.t.empty()) invalid("t", "not used by check " + check_name(k));
  if (!uses_s(k) && !c.s.empty()) invalid("s", "not used by check " + check_name(k));

  auto default_p = [&](std::initializer_list<double> v) {
    if (c.p.empty()) c.p = pnorms(v);
  };
  switch (k) {
    case CheckKind::DiffInequality:
    case CheckKind::IntegralIdentity:
    case CheckKind::CommutativeBound:
      default_p({2.0, 2.5, 3.0, 4.0, 6.0});
      for (const auto& p : c.p)
        if (p.is_infinite() || p.value() < 2.0) invalid("p", "needs 2 <= p < inf, got " + p.to_string());
      break;
    case CheckKind::OperatorConvex:
      default_p({2.0, 2.5, 3.0});
      for (const auto& p : c.p)
        if (p.is_infinite() || p.value() < 2.0 || p.value() > 3.0) invalid("p", "needs 2 <= p <= 3");
      break;
    case CheckKind::ArakiKosaki:
      if (c.q.empty()) c.q = pnorms({1.0, 2.0, 4.0});
      if (c.eta.empty()) c.eta = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
      for (const double e : c.eta)
        if (!(e > 0.0 && e < 1.0)) invalid("eta", "needs 0 < eta < 1");
      break;
    case CheckKind::Derivative:
      default_p({2.5, 3.0, 4.0});
      if (c.s.empty()) c.s = {0.0, 0.5};
      for (const auto& p : c.p)
        if (p.is_infinite() || !(p.value() > 1.0)) invalid("p", "needs 1 < p < inf");
      for (const double s : c.s)
        if (!(s >= 0.0) || !std::isfinite(s)) invalid("s", "needs s >= 0");
      break;
    case CheckKind::PositiveSplit:
      default_p({2.0, 3.0, 4.0});
      if (c.t.empty()) c.t = {0.1, 1.0, 10.0};
      for (const auto& p : c.p)
        if (!p.is_infinite() && p.value() < 2.0) invalid("p", "needs p >= 2");
      for (const double t : c.t)
        if (!(t > 0.0) || !std::isfinite(t)) invalid("t", "needs t > 0");
      break;
    case CheckKind::KernelPositivity:
    case CheckKind::Balance:
      break;
    case CheckKind::SchurHalf:
      if (c.p.empty()) c.p = {PNorm(1.0), PNorm(1.5), PNorm(2.0), PNorm(3.0), PNorm::infinity()};
      break;
    case CheckKind::ResolventTriangular:
      if (c.p.empty()) c.p = {PNorm(1.0), PNorm(1.5), PNorm(2.0), PNorm(3.0), PNorm::infinity()};
      if (c.eta.empty()) c.eta = {0.0, 0.25, 0.5, 0.75, 1.0};
      for (const double e : c.eta)
        if (!(e >= 0.0 && e <= 1.0)) invalid("eta", "needs 0 <= eta <= 1");
      break;
    case CheckKind::QrIdentity:
    case CheckKind::QrAntisymmetric:
      if (c.p.empty()) c.p = {PNorm(2.0), PNorm(4.0), PNorm::infinity()};
      if (c.r.empty()) c.r = pnorms({1.0, 1.5});
      for (const auto& p : c.p)
        for (const auto& r : c.r)
          if (!(p.is_infinite() || r.value() < p.value()) || r.is_infinite()) {
            invalid("r", "needs 1 <= r < p for every grid pair");
          }
      break;
    case CheckKind::Lambda:
    case CheckKind::Referee:
      if (c.q.empty()) c.q = {PNorm(1.0), PNorm(2.0), PNorm::infinity()};
      break;
    case CheckKind::EmbeddingRoundtrip:
      if (c.q.empty()) c.q = pnorms({1.0, 1.2});
      default_p({1.25, 1.5, 1.9});
      for (const auto& p : c.p)
        for (const auto& q : c.q)
          if (q.is_infinite() || !(p.is_infinite() || q.value() < p.value())) {
            invalid("p", "needs q < p for every grid pair");
          }
      break;
  }
  return c;
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + ex.what());
  }
  ExperimentConfig c;
  auto exps = [&](const char* key, std::vector<PNorm>& dst) {
    if (!j.contains(key)) return;
    try {
      for (const auto& v : j[key]) dst.push_back(v.is_string() ? PNorm::parse(v.get<std::string>()) : PNorm(v.get<double>()));
    } catch (const std::exception& ex) {
      invalid(key, ex.what());
    }
  };
  auto reals = [&](const char* key, std::vector<double>& dst) {
    if (!j.contains(key)) return;
    try {
      dst = j[key].get<std::vector<double>>();
    } catch (const std::exception& ex) {
      invalid(key, ex.what());
    }
  };
  try {
    if (j.contains("check")) {
      const auto kind = parse_check_kind(j["check"].get<std::string>());
      if (!kind) invalid("check", "unknown check '" + j["check"].get<std::string>() + "'");
      c.check = *kind;
    }
    if (j.contains("dim")) {
      c.dims.clear();
      if (j["dim"].is_array()) {
        for (const auto& v : j["dim"]) c.dims.push_back(v.get<Eigen::Index>());
      } else {
        c.dims.push_back(j["dim"].get<Eigen::Index>());
      }
    }
    if (j.contains("trials")) c.trials = j["trials"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
    if (j.contains("condition")) c.condition = j["condition"].get<double>();
    if (j.contains("kmax")) c.kmax = j["kmax"].get<int>();
    if (j.contains("quad_points")) c.quad_points = j["quad_points"].get<int>();
    if (j.contains("wall_time")) c.wall_time = j["wall_time"].get<bool>();
    if (j.contains("format")) {
      const auto f = j["format"].get<std::string>();
      if (f == "json") c.format = OutputFormat::Json;
      else if (f == "csv") c.format = OutputFormat::Csv;
      else invalid("format", "must be json or csv");
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ConfigInvalid, ex.what());
  }
  exps("p", c.p);
  exps("q", c.q);
  exps("r", c.r);
  reals("eta", c.eta);
  reals("t", c.t);
  reals("s", c.s);
  return c;
}

std::vector<TrialPoint> expand_grid(const ExperimentConfig& config) {
  std::vector<TrialPoint> points;
  if (config.check == CheckKind::KernelPositivity) {
    points.push_back({});
    return points;
  }
  auto or_single = [](const auto& v, auto fallback) {
    using T = typename std::decay_t<decltype(v)>::value_type;
    return v.empty() ? std::vector<T>{fallback} : v;
  };
  const auto ps = config.p.empty() ? std::vector<std::optional<PNorm>>{std::nullopt}
                                   : std::vector<std::optional<PNorm>>(config.p.begin(), config.p.end());
  const auto qs = config.q.empty() ? std::vector<std::optional<PNorm>>{std::nullopt}
                                   : std::vector<std::optional<PNorm>>(config.q.begin(), config.q.end());
  const auto rs = config.r.empty() ? std::vector<std::optional<PNorm>>{std::nullopt}
                                   : std::vector<std::optional<PNorm>>(config.r.begin(), config.r.end());
  const auto etas = or_single(config.eta, 0.0);
  const auto ts = or_single(config.t, 0.0);
  const auto ss = or_single(config.s, 0.0);
  std::uint64_t index = 0;
  for (const auto n : config.dims)
    for (const auto& p : ps)
      for (const auto& q : qs)
        for (const auto& r : rs)
          for (const double eta : etas)
            for (const double t : ts)
              for (const double s : ss)
                for (int k = 0; k < config.trials; ++k) {
                  TrialPoint pt;
                  pt.index = index++;
                  pt.dim = n;
                  pt.p = p;
                  pt.q = q;
                  pt.r = r;
                  pt.eta = eta;
                  pt.t = t;
                  pt.s = s;
                  points.push_back(pt);
                }
  return points;
}

namespace {

double log_uniform(CounterRng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

Mat random_psd_random_rank(Eigen::Index n, CounterRng& rng) {
  const auto rank = static_cast<Eigen::Index>(rng.uniform_int(1, n));
  Mat a = random_psd_of_rank(n, rank, rng) / static_cast<double>(n);
  return a * log_uniform(rng, 1e-2, 1e2);
}

Density random_blocks_density(Eigen::Index n, double max_condition, CounterRng& rng) {
  const auto m = static_cast<Eigen::Index>(rng.uniform_int(1, n));
  const double cond = log_uniform(rng, 1.0, max_condition);
  return make_density(random_block_density(n, m, cond, rng));
}

Mat triangular_sample(Eigen::Index n, const BlockSpectrum& blocks, Part part, CounterRng& rng) {
  const Mat g = random_gaussian(n, rng);
  return part == Part::Upper ? triangular_project(g, blocks) : triangular_complement(g, blocks);
}

Part pick_part(const BlockSpectrum& blocks, std::uint64_t index) {
  return blocks.size() > 1 && index % 2 == 1 ? Part::Lower : Part::Upper;
}

double relative(const Mat& got, const Mat& want) {
  const double scale = want.norm();
  return scale == 0.0 ? got.norm() : (got - want).norm() / scale;
}

TrialOutcome run_check(const ExperimentConfig& cfg, const TrialPoint& pt, CounterRng& rng) {
  const Eigen::Index n = pt.dim;
  TrialOutcome out;
  switch (cfg.check) {
    case CheckKind::DiffInequality:
    case CheckKind::IntegralIdentity:
    case CheckKind::OperatorConvex: {
      const Mat a = random_psd_random_rank(n, rng);
      const Mat x = random_psd_random_rank(n, rng);
      out.inputs = {{"a", a}, {"x", x}};
      out.report = cfg.check == CheckKind::DiffInequality     ? check_diff_inequality(a, x, *pt.p)
                   : cfg.check == CheckKind::IntegralIdentity ? check_integral_identity(a, x, *pt.p)
                                                              : check_operator_convex_bound(a, x, *pt.p);
      break;
    }
    case CheckKind::CommutativeBound: {
      const Mat u = random_unitary(n, rng);
      RealVec da(n), dx(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        da(i) = rng.uniform() < 0.2 ? 0.0 : log_uniform(rng, 1e-2, 1e1);
        dx(i) = rng.uniform() < 0.2 ? 0.0 : log_uniform(rng, 1e-2, 1e1);
      }
      if (dx.maxCoeff() == 0.0) dx(0) = 1.0;
      if (da.maxCoeff() == 0.0) da(0) = 1.0;
      Mat a = u * da.cast<cplx>().asDiagonal() * u.adjoint();
      Mat x = u * dx.cast<cplx>().asDiagonal() * u.adjoint();
      a = (a + a.adjoint()) * 0.5;
      x = (x + x.adjoint()) * 0.5;
      out.inputs = {{"a", a}, {"x", x}};
      out.report = check_commutative_bound(a, x, *pt.p);
      break;
    }
    case CheckKind::ArakiKosaki: {
      const Mat a = random_psd_random_rank(n, rng);
      const Mat b = random_psd_random_rank(n, rng);
      out.inputs = {{"a", a}, {"b", b}};
      out.report = check_araki_kosaki(a, b, *pt.q, pt.eta);
      break;
    }
    case CheckKind::Derivative: {
      const Mat a = random_psd(n, rng) + 0.1 * identity(n);
      const Mat x = random_psd(n, rng);
      out.inputs = {{"a", a}, {"x", x}};
      out.report = check_derivative(a, x, *pt.p, pt.s);
      break;
    }
    case CheckKind::PositiveSplit: {
      const Density d = make_density(random_density(n, rng));
      const Mat x = random_gaussian(n, rng);
      out.inputs = {{"d", d.matrix()}, {"x", x}};
      out.report = check_positive_split(x, d, *pt.p, pt.t);
      if (out.report.extra("resummation_error") > 1e-12) out.report.verdict = Verdict::Fail;
      break;
    }
    case CheckKind::KernelPositivity: {
      out.report = kernel_positivity_check(cfg.kmax, cfg.quad_points);
      if (out.report.extra("fhat0_error") > 1e-8) out.report.verdict = Verdict::Fail;
      break;
    }
    case CheckKind::SchurHalf: {
      const Density d = random_blocks_density(n, cfg.condition, rng);
      const Mat x = random_gaussian(n, rng);
      const double nx = schatten_norm(x, *pt.p);
      const double lhs = schatten_norm(min_multiplier(x, d.blocks()), *pt.p);
      out.inputs = {{"d", d.matrix()}, {"x", x}};
      out.report = make_report("schur-half", lhs, 0.5 * nx, 1e-9 * 0.5 * nx);
      out.report.p_q_params = {finite_p(*pt.p)};
      out.report.extras = {{"ratio", lhs / nx}, {"blocks", static_cast<double>(d.blocks().size())}};
      out.report.inputs_digest = InputDigest().add(d.matrix()).add(x).hex();
      break;
    }
    case CheckKind::ResolventTriangular: {
      const Density d = random_blocks_density(n, cfg.condition, rng);
      const double beta = rng.uniform(-2.0, 2.0);
      const Part part = pick_part(d.blocks(), pt.index);
      const Mat x = triangular_sample(n, d.blocks(), part, rng);
      const double nx = schatten_norm(x, *pt.p);
      const double lhs = schatten_norm(resolvent_weighted(x, d.blocks(), beta, pt.eta), *pt.p);
      out.inputs = {{"d", d.matrix()}, {"x", x}};
      out.report = make_report("resolvent-triangular", lhs, 1.5 * nx, 1e-9 * 1.5 * nx);
      out.report.p_q_params = {finite_p(*pt.p), pt.eta, beta};
      out.report.warnings = conditioning_warnings(d.blocks(), beta);
      out.report.extras = {{"ratio", lhs / nx}, {"upper", part == Part::Upper ? 1.0 : 0.0}};
      out.report.inputs_digest = InputDigest().add(d.matrix()).add(x).add(beta).hex();
      break;
    }
    case CheckKind::QrIdentity:
    case CheckKind::QrAntisymmetric: {
      const double cond = log_uniform(rng, 1.0, cfg.condition);
      const Density d = make_density(random_density_with_condition(n, cond, rng));
      const Mat x = random_gaussian(n, rng);
      const double alpha = ExponentSpec(*pt.p, *pt.r).weight_exponent();
      out.inputs = {{"d", d.matrix()}, {"x", x}};
      if (cfg.check == CheckKind::QrIdentity) {
        const Mat w = power_weight(d, alpha);
        const double err = relative(qr_project(w * x, x * w, d, *pt.p, *pt.r), x);
        out.report = make_report("qr-identity", err, 0.0, 1e-8);
      } else {
        const double err = qr_project(x, -x, d, *pt.p, *pt.r).cwiseAbs().maxCoeff();
        out.report = make_report("qr-antisymmetric", err, 0.0, 1e-12);
      }
      out.report.p_q_params = {finite_p(*pt.p), pt.r->value()};
      out.report.warnings = conditioning_warnings(d.blocks(), alpha);
      out.report.extras = {{"condition", d.blocks().condition()}};
      out.report.inputs_digest = InputDigest().add(d.matrix()).add(x).hex();
      break;
    }
    case CheckKind::Lambda: {
      const Density d = random_blocks_density(n, cfg.condition, rng);
      const double alpha = rng.uniform(-1.5, 1.5);
      const Part part = pick_part(d.blocks(), pt.index);
      const Mat y = triangular_sample(n, d.blocks(), part, rng);
      const Mat z = triangular_sample(n, d.blocks(), part, rng);
      const double bound = 3.0 * std::max(schatten_norm(y, *pt.q), schatten_norm(z, *pt.q));
      const double lhs = schatten_norm(lambda_map(y, z, d.blocks(), alpha, part), *pt.q);
      const double identity_error = relative(lambda_map(y, y, d.blocks(), alpha, part), y);
      out.inputs = {{"d", d.matrix()}, {"y", y}, {"z", z}};
      out.report = make_report("lambda", lhs, bound, 1e-9 * bound);
      if (identity_error > 1e-10) out.report.verdict = Verdict::Fail;
      out.report.p_q_params = {finite_p(*pt.q), alpha};
      out.report.warnings = conditioning_warnings(d.blocks(), alpha);
      out.report.extras = {{"identity_error", identity_error}, {"ratio", 3.0 * lhs / bound}};
      out.report.inputs_digest = InputDigest().add(d.matrix()).add(y).add(z).add(alpha).hex();
      break;
    }
    case CheckKind::Referee: {
      static constexpr std::pair<double, double> kPairs[] = {{0.0, 1.0}, {1.0, 1.0}, {0.3, 0.7}};
      const auto [a0, a1] = kPairs[pt.index % 3];
      const Density d = random_blocks_density(n, cfg.condition, rng);
      const BlockSpectrum& blocks = d.blocks();
      const Part part = pick_part(blocks, pt.index / 3);
      const Mat y = triangular_sample(n, blocks, part, rng);
      const Mat z = triangular_sample(n, blocks, part, rng);
      const RefereePieces pieces = referee_pieces(y, z, blocks, a0, a1, part);
      double worst = 0.0;
      for (const double aj : {a0, a1}) {
        const Mat w = blocks.weight(aj);
        auto row = [&](const Mat& v) { return schatten_norm(Mat(w * v), *pt.q); };
        auto col = [&](const Mat& v) { return schatten_norm(Mat(v * w), *pt.q); };
        const double ny = row(y);
        const double nz = col(z);
        worst = std::max({worst, row(pieces.from_y) / ny, col(pieces.from_y) / ny, col(pieces.from_z) / nz,
                          row(pieces.from_z) / nz});
      }
      const double partition_error = relative(referee_project(y, y, blocks, a0, a1, part), y);
      out.inputs = {{"d", d.matrix()}, {"y", y}, {"z", z}};
      out.report = make_report("referee", worst, 1.5, 1.5e-9);
      if (partition_error > 1e-10) out.report.verdict = Verdict::Fail;
      out.report.p_q_params = {finite_p(*pt.q), a0, a1};
      out.report.warnings = conditioning_warnings(blocks, a0 + a1);
      out.report.extras = {{"partition_error", partition_error}};
      out.report.inputs_digest = InputDigest().add(d.matrix()).add(y).add(z).hex();
      break;
    }
    case CheckKind::EmbeddingRoundtrip: {
      const bool singular = n >= 2 && pt.index % 4 == 3;
      const Mat dm = singular ? random_psd_of_rank(n, n - 1, rng)
                              : random_density_with_condition(n, log_uniform(rng, 1.0, cfg.condition), rng);
      const Density d = make_density(dm);
      Mat x = random_gaussian(n, rng);
      const Mat f = d.kernel_projection();
      const Mat corner = f * x * f;
      out.inputs = {{"d", d.matrix()}, {"x", x}};
      double corner_rejected = 1.0;
      if (singular) {
        try {
          (void)embed_u(x, d, *pt.q, *pt.p);
          corner_rejected = 0.0;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::CornerNotAnnihilated) throw;
        }
        x -= corner;
      }
      const Mat u = embed_u(x, d, *pt.q, *pt.p);
      const double err = relative(reconstruct(u, d, *pt.q, *pt.p), x);
      out.report = make_report("embedding-roundtrip", err, 0.0, 1e-8);
      if (corner_rejected == 0.0) out.report.verdict = Verdict::Fail;
      out.report.p_q_params = {pt.q->value(), finite_p(*pt.p)};
      out.report.extras = {{"support_rank", static_cast<double>(d.rank())}, {"corner_rejected", corner_rejected}};
      out.report.inputs_digest = InputDigest().add(d.matrix()).add(x).hex();
      break;
    }
    case CheckKind::Balance: {
      const double a = log_uniform(rng, 1e-2, 1e2);
      const double b = log_uniform(rng, 1e-2, 1e2);
      const double qv = rng.uniform(2.0, 6.0);
      const double pv = qv + rng.uniform(0.1, 6.0);
      const PNorm p(pv), q(qv);
      const Balance bal = balance_parameter(a, b, p, q);
      auto objective = [&](double t) {
        return std::max(std::pow(t, 1.0 / pv - 1.0 / qv) * a, std::pow(t, 1.0 - 1.0 / qv) * b);
      };
      double grid_min = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 1000; ++i) grid_min = std::min(grid_min, objective(std::pow(10.0, -6.0 + 12.0 * i / 999.0)));
      out.report = make_report("balance", bal.value, grid_min, 1e-6 * grid_min);
      const double attained = std::abs(objective(bal.t_star) - bal.value) / bal.value;
      if (attained > 1e-10) out.report.verdict = Verdict::Fail;
      out.report.p_q_params = {pv, qv, a, b};
      out.report.extras = {{"t_star", bal.t_star}, {"attained_error", attained}};
      out.report.inputs_digest = InputDigest().add(a).add(b).add(pv).add(qv).hex();
      break;
    }
  }
  return out;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_record(std::ostream& os, const ExperimentConfig& cfg, const TrialOutcome& o, std::uint64_t index) {
  if (cfg.format == OutputFormat::Json) {
    if (o.error) {
      nlohmann::ordered_json j;
      j["check_name"] = check_name(cfg.check);
      j["trial"] = index;
      j["error"] = *o.error;
      os << j.dump() << '\n';
    } else {
      os << to_json(o.report).dump() << '\n';
    }
    return;
  }
  const CheckReport& r = o.report;
  std::string params;
  for (std::size_t i = 0; i < r.p_q_params.size(); ++i) params += (i ? ";" : "") + csv_number(r.p_q_params[i]);
  os << index << ',' << check_name(cfg.check) << ',' << r.seed << ',' << r.inputs_digest << ',' << params << ','
     << csv_number(r.lhs) << ',' << csv_number(r.rhs) << ',' << csv_number(r.slack) << ','
     << csv_number(r.tolerance) << ',' << (o.error ? "error" : (r.passed() ? "pass" : "fail")) << '\n';
}

void write_repro(const ExperimentConfig& cfg, const TrialPoint& pt, const TrialOutcome& o) {
  if (cfg.out.empty()) return;
  const std::filesystem::path dir = cfg.out + ".repro";
  std::filesystem::create_directories(dir);
  std::string text = "{\"check\": \"" + check_name(cfg.check) + "\", \"trial\": " + std::to_string(pt.index) +
                     ", \"seed\": " + std::to_string(cfg.seed) + ", \"dim\": " + std::to_string(pt.dim);
  auto exp = [&](const char* key, const std::optional<PNorm>& v) {
    if (v) text += std::string(", \"") + key + "\": \"" + v->to_string() + "\"";
  };
  exp("p", pt.p);
  exp("q", pt.q);
  exp("r", pt.r);
  text += ", \"eta\": " + format_double(pt.eta) + ", \"t\": " + format_double(pt.t) + ", \"s\": " + format_double(pt.s);
  text += ", \"inputs\": {";
  for (std::size_t i = 0; i < o.inputs.size(); ++i) {
    std::string m = matrix_to_json(o.inputs[i].second);
    m.pop_back();  // trailing newline
    text += (i ? ", \"" : "\"") + o.inputs[i].first + "\": " + m;
  }
  text += "}}\n";
  write_text_file(dir / ("trial-" + std::to_string(pt.index) + ".json"), text);
}

}  // namespace

TrialOutcome run_trial(const ExperimentConfig& config, const TrialPoint& point) {
  const std::uint64_t seed = sub_seed(config.seed, point.index);
  CounterRng rng(seed);
  TrialOutcome out;
  try {
    out = run_check(config, point, rng);
  } catch (const std::exception& ex) {
    out.error = ex.what();
  }
  out.report.seed = seed;
  out.report.trial = point.index;
  if (out.report.check_name.empty()) out.report.check_name = check_name(config.check);
  if (config.tol && !out.error) {
    const bool failed_elsewhere = !out.report.passed() && out.report.slack >= -out.report.tolerance;
    out.report.tolerance = *config.tol;
    out.report.verdict =
        out.report.slack >= -*config.tol && !failed_elsewhere ? Verdict::Pass : Verdict::Fail;
  }
  return out;
}

RunSummary run(const ExperimentConfig& raw, std::ostream& os) {
  const ExperimentConfig cfg = validated(raw);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<TrialPoint> points = expand_grid(cfg);
  std::vector<TrialOutcome> outcomes(points.size());

  unsigned workers = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, points.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) outcomes[i] = run_trial(cfg, points[i]);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  if (cfg.format == OutputFormat::Csv) os << "trial,check_name,seed,inputs_digest,p_q_params,lhs,rhs,slack,tolerance,verdict\n";
  RunSummary summary;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const TrialOutcome& o = outcomes[i];
    write_record(os, cfg, o, points[i].index);
    if (o.error) {
      ++summary.error_count;
    } else if (o.report.passed()) {
      ++summary.pass_count;
    } else {
      ++summary.fail_count;
    }
    if (!o.error) summary.max_violation = std::max(summary.max_violation, o.report.violation());
    if (o.error || !o.report.passed()) write_repro(cfg, points[i], o);
  }
  summary.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (cfg.format == OutputFormat::Json) {
    nlohmann::ordered_json j;
    j["summary"] = true;
    j["check_name"] = check_name(cfg.check);
    j["seed"] = cfg.seed;
    j["records"] = points.size();
    j["pass_count"] = summary.pass_count;
    j["fail_count"] = summary.fail_count;
    j["error_count"] = summary.error_count;
    j["max_violation"] = summary.max_violation;
    if (cfg.wall_time) j["wall_time"] = summary.wall_time;
    os << j.dump() << '\n';
  } else {
    os << "#summary,pass_count=" << summary.pass_count << ",fail_count=" << summary.fail_count
       << ",error_count=" << summary.error_count << ",max_violation=" << csv_number(summary.max_violation);
    if (cfg.wall_time) os << ",wall_time=" << csv_number(summary.wall_time);
    os << '\n';
  }
  return summary;
}

std::optional<GenKind> parse_gen_kind(const std::string& name) {
  if (name == "hermitian") return GenKind::Hermitian;
  if (name == "psd") return GenKind::Psd;
  if (name == "density") return GenKind::Density;
  if (name == "upper_triangular" || name == "upper-triangular") return GenKind::UpperTriangular;
  return std::nullopt;
}

GeneratedMatrix gen_random(GenKind kind, Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "dim must be >= 1");
  // Stream id separates the kinds so the same seed gives unrelated samples.
  CounterRng rng(seed, static_cast<std::uint64_t>(kind) + 1);
  GeneratedMatrix out;
  switch (kind) {
    case GenKind::Hermitian:
      out.matrix = random_hermitian(dim, rng);
      break;
    case GenKind::Psd:
      out.matrix = random_psd(dim, rng);
      break;
    case GenKind::Density:
      out.matrix = random_density(dim, rng);
      break;
    case GenKind::UpperTriangular: {
      out.ranks = random_composition(dim, rng.uniform_int(1, dim), rng);
      std::vector<double> values;
      for (std::size_t k = 0; k < out.ranks.size(); ++k) values.push_back(static_cast<double>(k + 1));
      const BlockSpectrum blocks = BlockSpectrum::coordinate(out.ranks, values);
      out.matrix = triangular_project(random_hermitian(dim, rng), blocks);
      break;
    }
  }
  return out;
}

}  // namespace nclp
