// Copyright 2026-present the givens project
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

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>

namespace givens {

using BigInt = boost::multiprecision::cpp_int;

/// Exact dyadic rational, mant * 2^exp2. Every floating-point or fixed-point
/// value in this library is a dyadic rational, so this type is lossless for
/// all of them. Used by reference models and tests; the production datapath
/// never touches it.
class ExactReal {
 public:
  ExactReal() = default;
  ExactReal(long long v) : mant_(v) { normalize(); }  // NOLINT: implicit by design

  static ExactReal scaled(BigInt mant, std::int64_t exp2) {
    ExactReal r;
    r.mant_ = std::move(mant);
    r.exp2_ = exp2;
    r.normalize();
    return r;
  }

  /// Exact conversion; every finite double is a dyadic rational.
  static ExactReal from_double(double v);

  bool is_zero() const { return mant_.is_zero(); }
  int sign() const { return mant_.sign(); }

  ExactReal operator-() const { return scaled(-mant_, exp2_); }
  ExactReal abs() const { return mant_ < 0 ? -*this : *this; }

  ExactReal operator+(const ExactReal& o) const;
  ExactReal operator-(const ExactReal& o) const { return *this + (-o); }
  ExactReal operator*(const ExactReal& o) const {
    return scaled(mant_ * o.mant_, exp2_ + o.exp2_);
  }

  ExactReal mul_pow2(std::int64_t k) const { return scaled(mant_, exp2_ + k); }

  /// Three-way comparison of the represented values.
  int compare(const ExactReal& o) const;

  bool operator==(const ExactReal& o) const { return compare(o) == 0; }
  bool operator!=(const ExactReal& o) const { return compare(o) != 0; }
  bool operator<(const ExactReal& o) const { return compare(o) < 0; }
  bool operator<=(const ExactReal& o) const { return compare(o) <= 0; }
  bool operator>(const ExactReal& o) const { return compare(o) > 0; }
  bool operator>=(const ExactReal& o) const { return compare(o) >= 0; }

  /// floor(value * 2^k) and whether the result is exact.
  std::pair<BigInt, bool> scaled_floor(std::int64_t k) const;

  /// floor(log2(|value|)); value must be nonzero.
  std::int64_t floor_log2() const;

  /// Nearest double (round to nearest even); may overflow to infinity.
  double to_double() const;

  std::string str() const;

  const BigInt& mantissa() const { return mant_; }
  std::int64_t exponent2() const { return exp2_; }

 private:
  void normalize();

  BigInt mant_ = 0;        // odd or zero after normalize()
  std::int64_t exp2_ = 0;  // zero when mant_ is zero
};

}  // namespace givens
