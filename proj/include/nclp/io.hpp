#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nclp/density.hpp"
#include "nclp/embedding.hpp"
#include "nclp/json.hpp"
#include "nclp/matcore.hpp"

namespace nclp {

// {"dim": n, "entries": [[re, im], …]} row-major, 17 significant digits.
std::string matrix_to_json(const Mat& x);
Mat matrix_from_json(const nlohmann::json& j);
Mat parse_matrix(const std::string& text);

// Matrix format plus {"trace_tol": …}.
std::string density_to_json(const Density& d);
Density density_from_json(const nlohmann::json& j);

// {"values": […], "ranks": […]}
std::string blocks_to_json(const BlockSpectrum& blocks);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
Mat read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const Mat& x);

// Manifest {"matrices": ["a.json", …]}; relative paths resolve against the
// manifest's directory.
SubspaceBasis read_basis_manifest(const std::filesystem::path& manifest);

// "%.16e": 17 significant digits.
std::string format_double(double v);

}  // namespace nclp
