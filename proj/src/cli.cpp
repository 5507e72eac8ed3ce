#include "nclp/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nclp/density.hpp"
#include "nclp/embedding.hpp"
#include "nclp/error.hpp"
#include "nclp/experiment.hpp"
#include "nclp/inequalities.hpp"
#include "nclp/io.hpp"
#include "nclp/random.hpp"
#include "nclp/schur.hpp"
#include "nclp/triangular.hpp"

namespace nclp {

namespace {

std::vector<PNorm> parse_exponents(const std::vector<std::string>& items, const std::string& field) {
  std::vector<PNorm> out;
  for (const auto& s : items) {
    try {
      out.push_back(PNorm::parse(s));
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigInvalid, "field '" + field + "': " + e.what());
    }
  }
  return out;
}

PNorm single_exponent(const std::string& text, const std::string& field) {
  return parse_exponents({text}, field).front();
}

Density read_density(const std::string& path) {
  try {
    return density_from_json(nlohmann::json::parse(read_text_file(path)));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
}

Part parse_part(const std::string& s) {
  if (s == "upper") return Part::Upper;
  if (s == "lower") return Part::Lower;
  throw Error(ErrorCode::ConfigInvalid, "field 'part': expected upper or lower");
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

std::string matrix_body(const Mat& x) {
  std::string m = matrix_to_json(x);
  m.pop_back();
  return m;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-dimensional noncommutative L_p toolkit"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "Run a seeded property check over a parameter grid");
  std::string check_kind;
  std::vector<std::string> ps, qs, rs;
  std::vector<double> etas, ts, ss;
  std::vector<Eigen::Index> dims;
  int trials = 0, jobs = 0, kmax = 0, quad_points = 0;
  std::uint64_t seed = 0;
  double tol = 0.0, condition = 0.0;
  std::string out_path, format, config_path;
  bool wall_time = false;
  check->add_option("name", check_kind, "Check name")->required();
  auto* o_p = check->add_option("--p", ps, "Exponent grid p")->delimiter(',');
  auto* o_q = check->add_option("--q", qs, "Exponent grid q")->delimiter(',');
  auto* o_r = check->add_option("--r", rs, "Exponent grid r")->delimiter(',');
  auto* o_eta = check->add_option("--eta", etas, "Interpolation grid η")->delimiter(',');
  auto* o_t = check->add_option("--t", ts, "Scale grid t")->delimiter(',');
  auto* o_s = check->add_option("--s", ss, "Derivative base points s")->delimiter(',');
  auto* o_dim = check->add_option("--dim", dims, "Matrix dimensions")->delimiter(',');
  auto* o_trials = check->add_option("--trials", trials, "Trials per grid point");
  auto* o_seed = check->add_option("--seed", seed, "Master seed (falls back to NCLP_SEED)");
  auto* o_tol = check->add_option("--tol", tol, "Tolerance override");
  auto* o_out = check->add_option("--out", out_path, "Report path (default stdout)");
  auto* o_jobs = check->add_option("--jobs", jobs, "Worker threads (0: all cores)");
  auto* o_format = check->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  check->add_option("--config", config_path, "JSON config with the same fields");
  auto* o_cond = check->add_option("--condition", condition, "Largest condition number of sampled densities");
  auto* o_kmax = check->add_option("--kmax", kmax, "Kernel positivity: largest k");
  auto* o_quad = check->add_option("--quad-points", quad_points, "Kernel positivity: nodes per unit length");
  auto* o_wall = check->add_flag("--wall-time", wall_time, "Add wall time to the summary");

  // construct
  auto* construct = app.add_subcommand("construct", "Apply a construction to matrix files");
  std::string c_kind, c_x, c_y, c_z, c_u, c_d, c_basis, c_part = "upper", c_out;
  std::string c_p = "2", c_q = "1", c_r = "1";
  double c_alpha = 0.0, c_alpha0 = 0.0, c_alpha1 = 1.0, c_eps = 0.1, c_t = 1.0;
  int c_trials = 100;
  std::uint64_t c_seed = 0;
  construct->add_option("kind", c_kind, "u|reconstruct|qr|lambda|referee|blocks|discretize|distortion|split")
      ->required();
  construct->add_option("--x", c_x);
  construct->add_option("--y", c_y);
  construct->add_option("--z", c_z);
  construct->add_option("--u", c_u);
  construct->add_option("--d", c_d, "Density file (trace one)");
  construct->add_option("--basis", c_basis, "Basis manifest");
  construct->add_option("--p", c_p);
  construct->add_option("--q", c_q);
  construct->add_option("--r", c_r);
  construct->add_option("--alpha", c_alpha);
  construct->add_option("--alpha0", c_alpha0);
  construct->add_option("--alpha1", c_alpha1);
  construct->add_option("--part", c_part);
  construct->add_option("--eps", c_eps);
  construct->add_option("--t", c_t);
  construct->add_option("--trials", c_trials);
  construct->add_option("--seed", c_seed);
  construct->add_option("--out", c_out);

  // estimate-norm
  auto* estimate = app.add_subcommand("estimate-norm", "Lower bound on the S_p operator norm of a block map");
  std::string e_map = "triangular", e_d, e_p = "2";
  double e_beta = 1.0, e_eta = 0.5;
  int e_trials = 8, e_dim = 4;
  std::uint64_t e_seed = 0;
  estimate->add_option("--map", e_map)->check(CLI::IsMember({"triangular", "min", "resolvent"}));
  estimate->add_option("--d", e_d, "Density file; random block density when absent");
  estimate->add_option("--dim", e_dim);
  estimate->add_option("--p", e_p);
  estimate->add_option("--beta", e_beta);
  estimate->add_option("--eta", e_eta);
  estimate->add_option("--trials", e_trials);
  estimate->add_option("--seed", e_seed);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a seeded random matrix");
  std::string g_kind, g_out;
  Eigen::Index g_dim = 4;
  std::uint64_t g_seed = 0;
  gen->add_option("kind", g_kind, "hermitian|psd|density|upper_triangular")->required();
  gen->add_option("--dim", g_dim);
  gen->add_option("--seed", g_seed);
  gen->add_option("--out", g_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) cfg = config_from_json(read_text_file(config_path));
      const auto kind = parse_check_kind(check_kind);
      if (!kind) throw Error(ErrorCode::ConfigInvalid, "field 'check': unknown check '" + check_kind + "'");
      cfg.check = *kind;
      if (o_p->count()) cfg.p = parse_exponents(ps, "p");
      if (o_q->count()) cfg.q = parse_exponents(qs, "q");
      if (o_r->count()) cfg.r = parse_exponents(rs, "r");
      if (o_eta->count()) cfg.eta = etas;
      if (o_t->count()) cfg.t = ts;
      if (o_s->count()) cfg.s = ss;
      if (o_dim->count()) cfg.dims = dims;
      if (o_trials->count()) cfg.trials = trials;
      if (o_seed->count()) {
        cfg.seed = seed;
      } else if (const char* env = std::getenv("NCLP_SEED"); env && config_path.empty()) {
        try {
          cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
          throw Error(ErrorCode::ConfigInvalid, "field 'seed': NCLP_SEED is not an integer");
        }
      }
      if (o_tol->count()) cfg.tol = tol;
      if (o_out->count()) cfg.out = out_path;
      if (o_jobs->count()) cfg.jobs = jobs;
      if (o_format->count()) cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
      if (o_cond->count()) cfg.condition = condition;
      if (o_kmax->count()) cfg.kmax = kmax;
      if (o_quad->count()) cfg.quad_points = quad_points;
      if (o_wall->count()) cfg.wall_time = wall_time;
      cfg = validated(cfg);

      RunSummary summary;
      if (cfg.out.empty()) {
        summary = run(cfg, out);
      } else {
        std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
        if (!file) throw Error(ErrorCode::IoError, "cannot write " + cfg.out);
        summary = run(cfg, file);
        if (!file) throw Error(ErrorCode::IoError, "write failed for " + cfg.out);
      }
      err << check_name(cfg.check) << ": pass " << summary.pass_count << ", fail " << summary.fail_count
          << ", error " << summary.error_count << ", max_violation " << summary.max_violation;
      if (cfg.wall_time) err << ", wall_time " << summary.wall_time << " s";
      err << '\n';
      return summary.exit_status();
    }

    if (construct->parsed()) {
      auto need = [](const std::string& path, const char* flag) {
        if (path.empty()) throw Error(ErrorCode::ConfigInvalid, std::string("field '") + flag + "': required");
        return read_matrix_file(path);
      };
      auto density = [&] {
        if (c_d.empty()) throw Error(ErrorCode::ConfigInvalid, "field 'd': required");
        return read_density(c_d);
      };
      const PNorm p = single_exponent(c_p, "p");
      const PNorm q = single_exponent(c_q, "q");
      std::string text;
      if (c_kind == "u") {
        text = matrix_to_json(embed_u(need(c_x, "x"), density(), q, p));
      } else if (c_kind == "reconstruct") {
        text = matrix_to_json(reconstruct(need(c_u, "u"), density(), q, p));
      } else if (c_kind == "qr") {
        text = matrix_to_json(qr_project(need(c_y, "y"), need(c_z, "z"), density(), p, single_exponent(c_r, "r")));
      } else if (c_kind == "lambda") {
        text = matrix_to_json(
            lambda_map(need(c_y, "y"), need(c_z, "z"), density().blocks(), c_alpha, parse_part(c_part)));
      } else if (c_kind == "referee") {
        text = matrix_to_json(referee_project(need(c_y, "y"), need(c_z, "z"), density().blocks(), c_alpha0,
                                              c_alpha1, parse_part(c_part)));
      } else if (c_kind == "blocks") {
        text = blocks_to_json(density().blocks());
      } else if (c_kind == "discretize") {
        text = density_to_json(discretize(density(), c_eps));
      } else if (c_kind == "distortion") {
        if (c_basis.empty()) throw Error(ErrorCode::ConfigInvalid, "field 'basis': required");
        const SubspaceBasis basis = read_basis_manifest(c_basis);
        const Density d = c_d.empty() ? heuristic_density(basis) : density();
        const Distortion dist = subspace_distortion(basis, d, q, p, c_trials, c_seed);
        nlohmann::ordered_json j;
        j["lower"] = dist.lower;
        j["upper"] = dist.upper;
        j["ratio"] = dist.ratio();
        j["trials"] = dist.trials;
        j["seed"] = dist.seed;
        j["condition_d"] = dist.condition_d;
        text = j.dump() + "\n";
      } else if (c_kind == "split") {
        const auto parts = positive_split(need(c_x, "x"));
        text = "{\"parts\": [";
        for (std::size_t k = 0; k < parts.size(); ++k) text += (k ? ", " : "") + matrix_body(parts[k]);
        text += "]}\n";
      } else {
        throw Error(ErrorCode::ConfigInvalid, "field 'kind': unknown construction '" + c_kind + "'");
      }
      emit(text, c_out, out);
      return 0;
    }

    if (estimate->parsed()) {
      const PNorm p = single_exponent(e_p, "p");
      BlockSpectrum blocks = [&] {
        if (!e_d.empty()) return read_density(e_d).blocks();
        if (e_dim < 1 || e_dim > 64) throw Error(ErrorCode::ConfigInvalid, "field 'dim': must lie in [1, 64]");
        CounterRng rng(e_seed, 7);
        return make_density(random_block_density(e_dim, e_dim, 1e3, rng)).blocks();
      }();
      const auto nb = static_cast<Eigen::Index>(blocks.size());
      Eigen::MatrixXd symbol(nb, nb);
      const MultiplierSymbol m = e_map == "min" ? min_symbol() : resolvent_symbol(e_beta, e_eta);
      for (Eigen::Index i = 0; i < nb; ++i)
        for (Eigen::Index j = 0; j < nb; ++j) {
          const bool upper = i <= j;
          symbol(i, j) = e_map == "triangular" ? (upper ? 1.0 : 0.0)
                         : e_map == "min"      ? m.eval(blocks.values()[i], blocks.values()[j])
                                               : (upper ? m.eval(blocks.values()[i], blocks.values()[j]) : 0.0);
        }
      const double value = operator_norm_estimate(BlockMap(blocks, symbol), p, e_trials, e_seed);
      nlohmann::ordered_json j;
      j["map"] = e_map;
      j["p"] = p.to_string();
      j["dim"] = blocks.dim();
      j["blocks"] = blocks.size();
      j["trials"] = e_trials;
      j["seed"] = e_seed;
      j["estimate"] = value;
      out << j.dump() << '\n';
      return 0;
    }

    if (gen->parsed()) {
      const auto kind = parse_gen_kind(g_kind);
      if (!kind) throw Error(ErrorCode::ConfigInvalid, "field 'kind': unknown generator '" + g_kind + "'");
      if (g_dim < 1) throw Error(ErrorCode::ConfigInvalid, "field 'dim': must be >= 1");
      const GeneratedMatrix g = gen_random(*kind, g_dim, g_seed);
      std::string text = matrix_to_json(g.matrix);
      if (!g.ranks.empty()) {
        text.pop_back();
        text.pop_back();
        text += ", \"ranks\": [";
        for (std::size_t k = 0; k < g.ranks.size(); ++k) text += (k ? ", " : "") + std::to_string(g.ranks[k]);
        text += "]}\n";
      }
      emit(text, g_out, out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigInvalid ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace nclp
