#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nclp {

// Exact rational num/den with den > 0, kept in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Rational operator-(Rational a, Rational b);
bool operator==(Rational a, Rational b);

// A Schatten exponent in [1, ∞]. Infinity is a distinct state, not a float
// sentinel. When the exponent is rational (integers, simple fractions and
// short decimals), the reciprocal is tracked exactly.
class PNorm {
 public:
  explicit PNorm(double value);

  static PNorm infinity();
  static PNorm rational(std::int64_t num, std::int64_t den);
  // Accepts "inf", "infinity", "∞", "3/2", "1.5", "4".
  static PNorm parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  // +inf when infinite.
  double value() const;
  // 1/p, exactly 0 for p = ∞.
  double reciprocal() const;
  std::optional<Rational> exact_reciprocal() const { return reciprocal_; }
  // p' with 1/p + 1/p' = 1; maps 1 <-> ∞ exactly.
  PNorm conjugate() const;

  std::string to_string() const;

  friend bool operator==(const PNorm& a, const PNorm& b);

 private:
  PNorm() = default;

  bool infinite_ = false;
  double value_ = 1.0;
  std::optional<Rational> reciprocal_;
};

// 1/q - 1/p, computed in exact rationals when both reciprocals are known.
double reciprocal_difference(const PNorm& q, const PNorm& p);

}  // namespace nclp
