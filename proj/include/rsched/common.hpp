// Copyright 2026 the rsched authors
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

#ifndef RSCHED_COMMON_HPP
#define RSCHED_COMMON_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rsched {

using i64 = std::int64_t;

/// Malformed input: unparsable files, duplicate ids, bad parameters.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A solver refused to run because a configured budget would be exceeded
/// (job cap, table size, oracle enumeration budget, decomposition width).
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Objective value that may be the lattice top (+inf). OPT(empty set of
/// schedules) is infinite; it is never encoded as a sentinel integer.
class Cost {
 public:
  Cost() : value_(0), infinite_(false) {}
  explicit Cost(i64 v) : value_(v), infinite_(false) {}
  static Cost infinity() {
    Cost c;
    c.infinite_ = true;
    return c;
  }

  bool is_infinite() const { return infinite_; }
  i64 value() const {
    if (infinite_) throw std::logic_error("Cost::value() on infinite cost");
    return value_;
  }

  friend bool operator<(const Cost& a, const Cost& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator==(const Cost& a, const Cost& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator!=(const Cost& a, const Cost& b) { return !(a == b); }
  friend Cost max(const Cost& a, const Cost& b) { return a < b ? b : a; }
  friend Cost min(const Cost& a, const Cost& b) { return b < a ? b : a; }

  std::string str() const {
    return infinite_ ? "inf" : std::to_string(value_);
  }

 private:
  i64 value_;
  bool infinite_;
};

/// Exact nonnegative rational, used for epsilon/delta so that all rounding
/// grids and ratio checks stay in integer arithmetic.
struct Rational {
  i64 num = 0;
  i64 den = 1;

  Rational() = default;
  Rational(i64 n, i64 d) : num(n), den(d) {
    if (d <= 0) throw InputError("rational with nonpositive denominator");
    reduce();
  }

  void reduce() {
    i64 g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool positive() const { return num > 0; }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den <
           static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }

  /// Parses "0.25", "1", or "1/4". Decimals are limited to 9 digits.
  static Rational parse(const std::string& text);
};

/// ceil(a / b) for positive b.
inline i64 ceil_div(i64 a, i64 b) { return (a + b - 1) / b; }

/// ceil(a * b / c) without intermediate overflow; all inputs nonnegative.
inline i64 ceil_mul_div(i64 a, i64 b, i64 c) {
  __int128 p = static_cast<__int128>(a) * b;
  return static_cast<i64>((p + c - 1) / c);
}

}  // namespace rsched

#endif  // RSCHED_COMMON_HPP
