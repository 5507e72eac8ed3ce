#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nclp/json.hpp"
#include "nclp/matcore.hpp"

namespace nclp {

enum class Verdict { Pass, Fail };

// One inequality trial. verdict = Pass iff slack = rhs − lhs ≥ −tolerance.
struct CheckReport {
  std::string check_name;
  std::string inputs_digest;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Pass;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::vector<double> p_q_params;
  // Check-specific diagnostics, emitted in insertion order.
  std::vector<std::pair<std::string, double>> extras;
  std::vector<std::string> warnings;

  bool passed() const { return verdict == Verdict::Pass; }
  // max(0, −slack): how far the trial fell short.
  double violation() const { return slack < 0.0 ? -slack : 0.0; }
  double extra(const std::string& key) const;
};

CheckReport make_report(std::string name, double lhs, double rhs, double tolerance);
// Two-sided variant: slack = −|lhs − rhs|, so pass iff |lhs − rhs| ≤ tolerance.
CheckReport make_equality_report(std::string name, double lhs, double rhs, double tolerance);

// FNV-1a over the raw bytes of the inputs, rendered as 16 hex digits.
class InputDigest {
 public:
  InputDigest& add(const Mat& x);
  InputDigest& add(double v);
  InputDigest& add(std::uint64_t v);
  std::string hex() const;

 private:
  void bytes(const void* data, std::size_t n);
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

nlohmann::ordered_json to_json(const CheckReport& report);

}  // namespace nclp
