#include "nclp/pnorm.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "nclp/error.hpp"

namespace nclp {

namespace {

Rational normalized(__int128 num, __int128 den) {
  if (den == 0) throw Error(ErrorCode::BadExponents, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  const __int128 g = a == 0 ? 1 : a;
  num /= g;
  den /= g;
  constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
  if (num > lim || -num > lim || den > lim) {
    throw Error(ErrorCode::BadExponents, "rational exponent overflow");
  }
  return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

// Recognizes p = n/d with d <= 10^4 when the match is exact to ~1 ulp.
std::optional<Rational> detect_rational(double p) {
  for (std::int64_t den = 1; den <= 10000; ++den) {
    const double scaled = p * static_cast<double>(den);
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) <= 4.0 * std::numeric_limits<double>::epsilon() * scaled &&
        rounded < 9.0e15) {
      return normalized(den, static_cast<std::int64_t>(rounded));
    }
  }
  return std::nullopt;
}

}  // namespace

Rational operator-(Rational a, Rational b) {
  return normalized(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                    static_cast<__int128>(a.den) * b.den);
}

bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }

PNorm::PNorm(double value) {
  if (std::isnan(value) || value < 1.0) {
    throw Error(ErrorCode::BadExponents, "exponent must lie in [1, inf]");
  }
  if (std::isinf(value)) {
    infinite_ = true;
    value_ = std::numeric_limits<double>::infinity();
    reciprocal_ = Rational{0, 1};
    return;
  }
  value_ = value;
  reciprocal_ = detect_rational(value);
}

PNorm PNorm::infinity() { return PNorm(std::numeric_limits<double>::infinity()); }

PNorm PNorm::rational(std::int64_t num, std::int64_t den) {
  if (den == 0 || num == 0) throw Error(ErrorCode::BadExponents, "exponent must be a positive rational");
  PNorm p;
  p.value_ = static_cast<double>(num) / static_cast<double>(den);
  if (std::isnan(p.value_) || p.value_ < 1.0) {
    throw Error(ErrorCode::BadExponents, "exponent must lie in [1, inf]");
  }
  p.reciprocal_ = normalized(den, num);
  return p;
}

PNorm PNorm::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF" || text == "∞") {
    return infinity();
  }
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::ParseError, "cannot parse exponent '" + std::string(text) + "'");
    }
    return v;
  };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  const std::string owned(text);
  char* end = nullptr;
  const double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size()) {
    throw Error(ErrorCode::ParseError, "cannot parse exponent '" + owned + "'");
  }
  return PNorm(v);
}

double PNorm::value() const { return value_; }

double PNorm::reciprocal() const {
  if (infinite_) return 0.0;
  if (reciprocal_) return reciprocal_->to_double();
  return 1.0 / value_;
}

PNorm PNorm::conjugate() const {
  if (infinite_) return PNorm(1.0);
  if (value_ == 1.0) return infinity();
  if (reciprocal_) {
    const Rational r = Rational{1, 1} - *reciprocal_;
    return rational(r.den, r.num);
  }
  return PNorm(value_ / (value_ - 1.0));
}

std::string PNorm::to_string() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

bool operator==(const PNorm& a, const PNorm& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

double reciprocal_difference(const PNorm& q, const PNorm& p) {
  const auto rq = q.exact_reciprocal();
  const auto rp = p.exact_reciprocal();
  if (rq && rp) return (*rq - *rp).to_double();
  return q.reciprocal() - p.reciprocal();
}

}  // namespace nclp
