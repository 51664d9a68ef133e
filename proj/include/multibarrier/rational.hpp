#pragma once

#include <optional>
#include <string>

namespace mbp {

/// Exact rational parameter value. Kept reduced, den > 0.
/// Used for the spacing ratio c so that values like 7/3 survive
/// fingerprinting and file round-trips without precision loss.
struct Rational {
  long long num = 0;
  long long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

bool operator<(const Rational& a, const Rational& b);

/// Reduce and normalize sign; throws std::invalid_argument on zero denominator.
Rational make_rational(long long num, long long den);

/// Accepts "7/3", "0.25", "4", "-1/2". Decimal forms become exact
/// fractions over a power of ten. Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

/// "7/3" when den != 1, otherwise just "7".
std::string to_string(const Rational& r);

}  // namespace mbp
