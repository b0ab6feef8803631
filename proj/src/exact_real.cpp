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

#include "givens/exact_real.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace givens {

namespace mp = boost::multiprecision;

void ExactReal::normalize() {
  if (mant_.is_zero()) {
    exp2_ = 0;
    return;
  }
  const unsigned tz = mp::lsb(mant_ < 0 ? BigInt(-mant_) : mant_);
  if (tz > 0) {
    mant_ >>= tz;  // cpp_int shifts act on the magnitude; exact here
    exp2_ += tz;
  }
}

ExactReal ExactReal::from_double(double v) {
  if (v == 0.0) return {};
  if (!std::isfinite(v)) throw std::invalid_argument("ExactReal: non-finite double");
  int e = 0;
  const double frac = std::frexp(v, &e);
  // frac * 2^53 is an integer for any finite double
  const auto m = static_cast<long long>(std::ldexp(frac, 53));
  return scaled(BigInt(m), static_cast<std::int64_t>(e) - 53);
}

ExactReal ExactReal::operator+(const ExactReal& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (exp2_ <= o.exp2_) {
    return scaled(mant_ + (o.mant_ << static_cast<unsigned>(o.exp2_ - exp2_)), exp2_);
  }
  return scaled((mant_ << static_cast<unsigned>(exp2_ - o.exp2_)) + o.mant_, o.exp2_);
}

int ExactReal::compare(const ExactReal& o) const {
  const ExactReal d = *this - o;
  return d.sign();
}

std::pair<BigInt, bool> ExactReal::scaled_floor(std::int64_t k) const {
  if (is_zero()) return {BigInt(0), true};
  const std::int64_t e = exp2_ + k;
  if (e >= 0) return {mant_ << static_cast<unsigned>(e), true};
  const auto s = static_cast<unsigned>(-e);
  if (mant_ > 0) {
    BigInt q = mant_ >> s;
    const bool exact = ((q << s) == mant_);
    return {q, exact};
  }
  // cpp_int >> truncates toward zero; make it floor for negatives
  BigInt neg = -mant_;
  BigInt q = neg >> s;
  const bool exact = ((q << s) == neg);
  if (!exact) ++q;
  return {-q, exact};
}

std::int64_t ExactReal::floor_log2() const {
  if (is_zero()) throw std::domain_error("ExactReal: log2 of zero");
  const BigInt m = mant_ < 0 ? BigInt(-mant_) : mant_;
  return static_cast<std::int64_t>(mp::msb(m)) + exp2_;
}

double ExactReal::to_double() const {
  if (is_zero()) return 0.0;
  const bool neg = mant_ < 0;
  BigInt m = neg ? BigInt(-mant_) : mant_;
  const auto bits = static_cast<std::int64_t>(mp::msb(m)) + 1;
  std::int64_t e = exp2_;
  if (bits > 54) {
    const auto drop = static_cast<unsigned>(bits - 54);
    const bool sticky = mp::lsb(m) < drop;
    m >>= drop;
    e += drop;
    // m now has 54 bits; round to 53 with ties-to-even
    const bool guard = mp::bit_test(m, 0);
    m >>= 1;
    e += 1;
    if (guard && (sticky || mp::bit_test(m, 0))) ++m;
  }
  const double d = std::ldexp(m.convert_to<double>(), static_cast<int>(e));
  return neg ? -d : d;
}

std::string ExactReal::str() const {
  std::ostringstream os;
  os << mant_ << "*2^" << exp2_;
  return os.str();
}

}  // namespace givens
