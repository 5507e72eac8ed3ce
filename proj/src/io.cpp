#include "nclp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nclp/error.hpp"

namespace nclp {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

void append_matrix_fields(std::string& out, const Mat& x) {
  out += "\"dim\": " + std::to_string(x.rows()) + ", \"entries\": [";
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (i != 0 || j != 0) out += ", ";
      out += "[" + format_double(x(i, j).real()) + ", " + format_double(x(i, j).imag()) + "]";
    }
  }
  out += "]";
}

}  // namespace

std::string matrix_to_json(const Mat& x) {
  validate_square(x);
  std::string out = "{";
  append_matrix_fields(out, x);
  out += "}\n";
  return out;
}

Mat matrix_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("dim").get<Eigen::Index>();
    const auto& entries = j.at("entries");
    if (n < 1) throw Error(ErrorCode::ParseError, "dim must be >= 1");
    if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != n * n) {
      throw Error(ErrorCode::ParseError, "entries must hold dim^2 [re, im] pairs");
    }
    Mat x(n, n);
    for (Eigen::Index k = 0; k < n * n; ++k) {
      const auto& e = entries[static_cast<std::size_t>(k)];
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::ParseError, "entry must be [re, im]");
      x(k / n, k % n) = cplx(e[0].get<double>(), e[1].get<double>());
    }
    validate_square(x);
    return x;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
}

Mat parse_matrix(const std::string& text) {
  try {
    return matrix_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
}

std::string density_to_json(const Density& d) {
  std::string out = "{";
  append_matrix_fields(out, d.matrix());
  out += ", \"trace_tol\": " + format_double(kTraceTol) + "}\n";
  return out;
}

Density density_from_json(const nlohmann::json& j) {
  const Mat m = matrix_from_json(j);
  const double tol = j.value("trace_tol", kTraceTol);
  const double trace = m.trace().real();
  if (std::abs(trace - 1.0) > tol) {
    throw Error(ErrorCode::ZeroTrace, "density file trace " + format_double(trace) + " is not 1");
  }
  return make_density(m);
}

std::string blocks_to_json(const BlockSpectrum& blocks) {
  std::string out = "{\"values\": [";
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (k) out += ", ";
    out += format_double(blocks.values()[k]);
  }
  out += "], \"ranks\": [";
  const auto ranks = blocks.ranks();
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    if (k) out += ", ";
    out += std::to_string(ranks[k]);
  }
  out += "]}\n";
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Mat read_matrix_file(const std::filesystem::path& path) { return parse_matrix(read_text_file(path)); }

void write_matrix_file(const std::filesystem::path& path, const Mat& x) { write_text_file(path, matrix_to_json(x)); }

SubspaceBasis read_basis_manifest(const std::filesystem::path& manifest) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(manifest));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
  if (!j.contains("matrices") || !j["matrices"].is_array()) {
    throw Error(ErrorCode::ParseError, "manifest needs a \"matrices\" array");
  }
  std::vector<Mat> vectors;
  for (const auto& entry : j["matrices"]) {
    std::filesystem::path p = entry.get<std::string>();
    if (p.is_relative()) p = manifest.parent_path() / p;
    vectors.push_back(read_matrix_file(p));
  }
  return SubspaceBasis(std::move(vectors));
}

}  // namespace nclp
