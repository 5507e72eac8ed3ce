#include "nclp/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace nclp {

double CheckReport::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  throw std::out_of_range("no report extra named " + key);
}

CheckReport make_report(std::string name, double lhs, double rhs, double tolerance) {
  CheckReport r;
  r.check_name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tolerance = tolerance;
  r.verdict = r.slack >= -tolerance ? Verdict::Pass : Verdict::Fail;
  return r;
}

CheckReport make_equality_report(std::string name, double lhs, double rhs, double tolerance) {
  CheckReport r = make_report(std::move(name), lhs, rhs, tolerance);
  r.slack = -std::abs(lhs - rhs);
  r.verdict = r.slack >= -tolerance ? Verdict::Pass : Verdict::Fail;
  return r;
}

InputDigest& InputDigest::add(const Mat& x) {
  const std::int64_t n = x.rows();
  bytes(&n, sizeof n);
  bytes(x.data(), sizeof(cplx) * static_cast<std::size_t>(x.size()));
  return *this;
}

InputDigest& InputDigest::add(double v) {
  bytes(&v, sizeof v);
  return *this;
}

InputDigest& InputDigest::add(std::uint64_t v) {
  bytes(&v, sizeof v);
  return *this;
}

void InputDigest::bytes(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    state_ ^= p[i];
    state_ *= 0x100000001b3ull;
  }
}

std::string InputDigest::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
  return buf;
}

nlohmann::ordered_json to_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["check_name"] = r.check_name;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["inputs_digest"] = r.inputs_digest;
  j["p_q_params"] = r.p_q_params;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.passed() ? "pass" : "fail";
  if (!r.extras.empty()) {
    nlohmann::ordered_json extras = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.extras) extras[k] = v;
    j["extras"] = extras;
  }
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

}  // namespace nclp
