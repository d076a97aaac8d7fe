// Copyright 2026 The cobound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cobound/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cobound/error.hpp"

namespace cobound {

namespace {

__int128 gcd_wide(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits_int64(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

__int128 pow10_wide(int e) {
  __int128 r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw PreconditionError("rational with zero denominator");
  *this = from_wide(numerator, denominator);
}

Rational Rational::from_wide(__int128 numerator, __int128 denominator) {
  if (denominator == 0) throw std::domain_error("rational division by zero");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const __int128 g = gcd_wide(numerator, denominator);
  if (g > 1) {
    numerator /= g;
    denominator /= g;
  }
  if (!fits_int64(numerator) || !fits_int64(denominator)) {
    throw std::overflow_error("rational overflow");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(numerator);
  r.den_ = static_cast<std::int64_t>(denominator);
  return r;
}

Rational Rational::dyadic(std::int64_t count, int log2_denominator) {
  require(log2_denominator >= 0 && log2_denominator <= 62,
          "dyadic denominator exponent must lie in [0, 62]");
  return from_wide(count, static_cast<__int128>(1) << log2_denominator);
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    return parse(text.substr(0, slash)) / parse(text.substr(slash + 1));
  }
  bool negative = false;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  __int128 mantissa = 0;
  int fraction_digits = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_dot) ++fraction_digits;
      seen_digit = true;
      if (mantissa > (static_cast<__int128>(1) << 100)) {
        throw std::overflow_error("rational literal too long: " + std::string(text));
      }
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw PreconditionError("not a number: '" + std::string(text) + "'");
  int exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    const auto* first = text.data() + pos + 1;
    const auto* last = text.data() + text.size();
    if (first < last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || ptr != last) {
      throw PreconditionError("bad exponent in '" + std::string(text) + "'");
    }
    pos = text.size();
  }
  if (pos != text.size()) {
    throw PreconditionError("trailing characters in '" + std::string(text) + "'");
  }
  const int scale = exponent - fraction_digits;
  if (scale > 30 || scale < -36) throw std::overflow_error("rational literal out of range");
  __int128 num = negative ? -mantissa : mantissa;
  __int128 den = 1;
  if (scale >= 0) {
    num *= pow10_wide(scale);
  } else {
    den = pow10_wide(-scale);
  }
  // Reduce before narrowing so literals like 0.000001 still fit.
  return from_wide(num, den);
}

Rational Rational::from_double_shortest(double value) {
  require(std::isfinite(value), "cannot convert a non-finite double to a rational");
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("to_chars failed");
  return parse(std::string_view(buffer, static_cast<std::size_t>(ptr - buffer)));
}

double Rational::to_double() const noexcept {
  return static_cast<double>(to_long_double());
}

long double Rational::to_long_double() const noexcept {
  return static_cast<long double>(num_) / static_cast<long double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  return from_wide(-static_cast<__int128>(num_), den_);
}

Rational& Rational::operator+=(const Rational& other) {
  const __int128 n = static_cast<__int128>(num_) * other.den_ +
                     static_cast<__int128>(other.num_) * den_;
  const __int128 d = static_cast<__int128>(den_) * other.den_;
  return *this = from_wide(n, d);
}

Rational& Rational::operator-=(const Rational& other) { return *this += -other; }

Rational& Rational::operator*=(const Rational& other) {
  const __int128 g1 = gcd_wide(num_, other.den_);
  const __int128 g2 = gcd_wide(other.num_, den_);
  const __int128 n = (static_cast<__int128>(num_) / (g1 ? g1 : 1)) *
                     (static_cast<__int128>(other.num_) / (g2 ? g2 : 1));
  const __int128 d = (static_cast<__int128>(den_) / (g2 ? g2 : 1)) *
                     (static_cast<__int128>(other.den_) / (g1 ? g1 : 1));
  return *this = from_wide(n, d);
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.num_ == 0) throw std::domain_error("rational division by zero");
  return *this *= from_wide(other.den_, other.num_);
}

}  // namespace cobound
