#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "unimod/error.hpp"
#include "unimod/parse.hpp"

namespace unimod {

using BigInt = boost::multiprecision::cpp_int;

// A non-negative rational num / den held exactly.
struct ExactRational {
  BigInt num;
  BigInt den{1};

  // The exact binary value of a finite double.
  static ExactRational from_double(double x) {
    if (!std::isfinite(x)) throw ArgumentError("non-finite number");
    if (x < 0.0) throw DomainError("expected a non-negative number");
    int exponent = 0;
    const double mantissa = std::frexp(x, &exponent);
    // mantissa * 2^53 is an integer.
    ExactRational out;
    out.num = BigInt(static_cast<std::uint64_t>(std::ldexp(mantissa, 53)));
    exponent -= 53;
    if (exponent >= 0) {
      out.num <<= exponent;
    } else {
      out.den <<= -exponent;
    }
    out.normalize();
    return out;
  }

  // Decimal ("0.6180339887", "1.5e-3") or fraction ("1/3") notation, read
  // exactly.
  static ExactRational parse(std::string_view text) {
    const std::string_view t = parse::trim(text);
    auto fail = [&] { return ArgumentError("malformed number '" + std::string(text) + "'"); };
    if (t.empty()) throw fail();
    const std::size_t slash = t.find('/');
    if (slash != std::string_view::npos) {
      const ExactRational a = parse(t.substr(0, slash));
      const ExactRational b = parse(t.substr(slash + 1));
      if (b.num == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
      ExactRational out{a.num * b.den, a.den * b.num};
      out.normalize();
      return out;
    }
    std::size_t i = 0;
    if (t[i] == '+') ++i;
    if (i < t.size() && t[i] == '-') throw DomainError("expected a non-negative number");
    BigInt digits = 0;
    int scale = 0;
    bool any = false, point = false;
    for (; i < t.size(); ++i) {
      const char c = t[i];
      if (c >= '0' && c <= '9') {
        digits = digits * 10 + (c - '0');
        if (point) --scale;
        any = true;
      } else if (c == '.' && !point) {
        point = true;
      } else {
        break;
      }
    }
    if (!any) throw fail();
    if (i < t.size()) {
      if (t[i] != 'e' && t[i] != 'E') throw fail();
      ++i;
      int sign = 1;
      if (i < t.size() && (t[i] == '+' || t[i] == '-')) sign = t[i++] == '-' ? -1 : 1;
      if (i >= t.size()) throw fail();
      int e = 0;
      for (; i < t.size(); ++i) {
        if (t[i] < '0' || t[i] > '9' || e > 100000) throw fail();
        e = e * 10 + (t[i] - '0');
      }
      scale += sign * e;
    }
    ExactRational out;
    out.num = digits;
    BigInt ten_pow = boost::multiprecision::pow(BigInt(10), std::abs(scale));
    if (scale >= 0) {
      out.num *= ten_pow;
    } else {
      out.den = ten_pow;
    }
    out.normalize();
    return out;
  }

  void normalize() {
    const BigInt g = boost::multiprecision::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return ratio(num, den); }

  // num / den rounded to double without overflowing intermediate steps.
  static double ratio(const BigInt& a, const BigInt& b) {
    if (a == 0) return 0.0;
    const long long shift = static_cast<long long>(boost::multiprecision::msb(a)) -
                            static_cast<long long>(boost::multiprecision::msb(b));
    // Scale so that the integer quotient carries at least 64 significant bits.
    const long long extra = 64 - shift;
    BigInt q = extra >= 0 ? BigInt((a << extra) / b) : BigInt(a / (b << -extra));
    return std::ldexp(q.convert_to<double>(), static_cast<int>(-extra));
  }
};

struct Convergent {
  BigInt p;
  BigInt q;
  double q_value = 0.0;
  // |q x - p|, exact up to the final rounding to double.
  double error = 0.0;
};

// Continued fraction expansion of x in (0, 1), computed with exact integers.
struct ContinuedFraction {
  ExactRational x;
  std::vector<BigInt> partial_quotients;  // a_1, a_2, ...
  std::vector<Convergent> convergents;    // p_0/q_0 = 0/1, p_1/q_1, ...
  bool exact = false;  // the expansion terminated at x itself

  // Index k with q_k < t <= q_{k+1}, or the last index when t exceeds every
  // denominator computed.
  std::size_t interval_index(double t) const {
    std::size_t k = 0;
    while (k + 1 < convergents.size() && convergents[k + 1].q_value < t) ++k;
    return k;
  }
};

// Expands until a denominator exceeds q_max or the remainder vanishes.
inline ContinuedFraction continued_fraction_expand(const ExactRational& x, double q_max) {
  if (!(x.num > 0 && x.num < x.den)) throw DomainError("continued fraction: x must lie in (0, 1)");
  if (!(q_max >= 1.0)) throw DomainError("continued fraction: Q_max must be >= 1");
  ContinuedFraction cf;
  cf.x = x;
  BigInt p_prev = 1, q_prev = 0;  // p_{-1}, q_{-1}
  BigInt p = 0, q = 1;            // p_0, q_0
  auto push = [&] {
    Convergent c;
    c.p = p;
    c.q = q;
    c.q_value = q.convert_to<double>();
    BigInt diff = q * x.num - p * x.den;
    if (diff < 0) diff = -diff;
    c.error = ExactRational::ratio(diff, x.den);
    cf.convergents.push_back(std::move(c));
  };
  push();
  // Euclid on x = num / den: the remainder pair after a_0 = 0 is (den, num).
  BigInt a_num = x.den, a_den = x.num;
  while (true) {
    const BigInt a = a_num / a_den;
    const BigInt rem = a_num - a * a_den;
    cf.partial_quotients.push_back(a);
    BigInt p_next = a * p + p_prev;
    BigInt q_next = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
    push();
    if (rem == 0) {
      cf.exact = true;
      break;
    }
    if (cf.convergents.back().q_value > q_max) break;
    a_num = std::move(a_den);
    a_den = rem;
  }
  return cf;
}

inline ContinuedFraction continued_fraction_expand(double x, double q_max) {
  return continued_fraction_expand(ExactRational::from_double(x), q_max);
}

}  // namespace unimod
