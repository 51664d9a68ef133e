#include "multibarrier/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace mbp {

bool operator<(const Rational& a, const Rational& b) {
  // denominators are kept positive, so cross multiplication preserves order
  return a.num * b.den < b.num * a.den;
}

Rational make_rational(long long num, long long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

namespace {

bool parse_ll(const std::string& s, long long& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(s, &pos);
  } catch (...) {
    return false;
  }
  return pos == s.size();
}

}  // namespace

std::optional<Rational> parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) return std::nullopt;

  if (auto slash = s.find('/'); slash != std::string::npos) {
    long long num = 0, den = 0;
    if (!parse_ll(s.substr(0, slash), num)) return std::nullopt;
    if (!parse_ll(s.substr(slash + 1), den)) return std::nullopt;
    if (den == 0) return std::nullopt;
    return make_rational(num, den);
  }

  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot);
    std::string fp = s.substr(dot + 1);
    if (fp.empty() || fp.size() > 18) return std::nullopt;
    bool neg = !ip.empty() && ip[0] == '-';
    if (!ip.empty() && (ip[0] == '+' || ip[0] == '-')) ip.erase(0, 1);
    long long ipart = 0;
    if (!ip.empty() && !parse_ll(ip, ipart)) return std::nullopt;
    long long fpart = 0;
    if (!parse_ll(fp, fpart)) return std::nullopt;
    if (fpart < 0) return std::nullopt;
    long long den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    long long num = ipart * den + fpart;
    if (neg) num = -num;
    return make_rational(num, den);
  }

  long long num = 0;
  if (!parse_ll(s, num)) return std::nullopt;
  return Rational{num, 1};
}

std::string to_string(const Rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

}  // namespace mbp
