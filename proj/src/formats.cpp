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

#include "givens/formats.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace givens {

namespace {

std::uint64_t low_mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

std::int64_t sign_extend(std::uint64_t v, int width) {
  const std::uint64_t m = std::uint64_t{1} << (width - 1);
  v &= low_mask(width);
  return static_cast<std::int64_t>((v ^ m) - m);
}

}  // namespace

void validate(const FpFormat& fmt) {
  if (fmt.exp_bits < 2 || fmt.exp_bits > 16)
    throw std::invalid_argument("FpFormat: exp_bits out of range");
  if (fmt.sig_bits < 2 || fmt.sig_bits > 56)
    throw std::invalid_argument("FpFormat: sig_bits out of range");
  if (fmt.total_bits() > 64)
    throw std::invalid_argument("FpFormat: wider than 64 bits");
}

FpValue FpValue::zero(const FpFormat& fmt) {
  FpValue v;
  v.format = fmt;
  return v;
}

FpValue FpValue::make(const FpFormat& fmt, bool sign, std::uint32_t exp_field,
                      std::uint64_t frac_field) {
  validate(fmt);
  if (exp_field > static_cast<std::uint32_t>(fmt.max_exp_field()))
    throw std::invalid_argument("FpValue: exponent field out of range");
  if (frac_field > low_mask(fmt.sig_bits))
    throw std::invalid_argument("FpValue: fraction field out of range");
  if (exp_field == 0 && frac_field == 0) return zero(fmt);
  FpValue v;
  v.format = fmt;
  v.sign = sign;
  v.exponent = exp_field;
  v.significand = frac_field;
  v.is_zero = false;
  return v;
}

std::uint64_t FpValue::pack() const {
  if (is_zero) return 0;
  return (std::uint64_t{sign} << (format.exp_bits + format.sig_bits)) |
         (std::uint64_t{exponent} << format.sig_bits) | significand;
}

FpValue FpValue::unpack(std::uint64_t bits, const FpFormat& fmt) {
  validate(fmt);
  if (bits > low_mask(fmt.total_bits()))
    throw std::invalid_argument("FpValue: bit pattern wider than format");
  const bool sign = (bits >> (fmt.exp_bits + fmt.sig_bits)) & 1;
  const auto exp = static_cast<std::uint32_t>((bits >> fmt.sig_bits) & low_mask(fmt.exp_bits));
  const std::uint64_t frac = bits & low_mask(fmt.sig_bits);
  return make(fmt, sign, exp, frac);
}

std::string FpValue::bit_string() const {
  std::string s;
  s += is_zero ? '0' : (sign ? '1' : '0');
  s += '|';
  for (int i = format.exp_bits - 1; i >= 0; --i) s += ((exponent >> i) & 1) ? '1' : '0';
  s += '|';
  for (int i = format.sig_bits - 1; i >= 0; --i) s += ((significand >> i) & 1) ? '1' : '0';
  return s;
}

FpValue FpValue::from_bit_string(const std::string& s, const FpFormat& fmt) {
  std::uint64_t bits = 0;
  int n = 0;
  for (char c : s) {
    if (c == '|' || c == '.' || c == ' ' || c == '_') continue;
    if (c != '0' && c != '1') throw std::invalid_argument("FpValue: bad bit string");
    bits = (bits << 1) | static_cast<std::uint64_t>(c - '0');
    ++n;
  }
  if (n != fmt.total_bits()) throw std::invalid_argument("FpValue: bit string length mismatch");
  return unpack(bits, fmt);
}

bool FpValue::operator==(const FpValue& o) const {
  if (!(format == o.format)) return false;
  if (is_zero || o.is_zero) return is_zero == o.is_zero;
  return sign == o.sign && exponent == o.exponent && significand == o.significand;
}

ExactReal fp_decode(const FpValue& v) {
  if (v.is_zero) return {};
  const int m = v.format.sig_bits;
  const std::int64_t e = static_cast<std::int64_t>(v.exponent) - v.format.bias();
  BigInt sig;
  std::int64_t exp2;
  if (v.format.hub) {
    sig = (BigInt(1) << (m + 1)) + 2 * BigInt(v.significand) + 1;
    exp2 = e - m - 1;
  } else {
    sig = (BigInt(1) << m) + BigInt(v.significand);
    exp2 = e - m;
  }
  if (v.sign) sig = -sig;
  return ExactReal::scaled(sig, exp2);
}

double fp_decode_f64(const FpValue& v) {
  if (v.is_zero) return 0.0;
  const int m = v.format.sig_bits;
  const std::int64_t e = static_cast<std::int64_t>(v.exponent) - v.format.bias();
  // 1+m fraction bits plus the ILSB, as an integer scaled by 2^(e-m-1)
  const auto wide = static_cast<std::int64_t>(
      (((std::uint64_t{1} << m) | v.significand) << 1) | (v.format.hub ? 1 : 0));
  const double d = std::ldexp(static_cast<double>(wide), static_cast<int>(e - m - 1));
  return v.sign ? -d : d;
}

FpValue detail::encode_from_sig(bool sign, std::uint64_t sig, std::int64_t unbiased_exp,
                                const FpFormat& fmt) {
  const std::int64_t field = unbiased_exp + fmt.bias();
  if (field < 0) return FpValue::zero(fmt);  // underflow: flush
  if (field > fmt.max_exp_field()) throw std::overflow_error("fp_encode: exponent overflow");
  const std::uint64_t frac = sig - (std::uint64_t{1} << fmt.sig_bits);
  if (field == 0 && frac == 0) return FpValue::zero(fmt);  // pattern reserved for zero
  return FpValue::make(fmt, sign, static_cast<std::uint32_t>(field), frac);
}

FpValue fp_encode(const ExactReal& x, const FpFormat& fmt) {
  validate(fmt);
  if (x.is_zero()) return FpValue::zero(fmt);
  const int m = fmt.sig_bits;
  const ExactReal ax = x.abs();
  std::int64_t e = ax.floor_log2();
  BigInt sig;
  if (fmt.hub) {
    sig = ax.scaled_floor(m - e).first;
  } else {
    // round to nearest even on m fraction bits
    auto [twice, exact] = ax.scaled_floor(m - e + 1);
    sig = twice >> 1;
    if (boost::multiprecision::bit_test(twice, 0)) {
      const bool tie = exact;
      if (!tie || boost::multiprecision::bit_test(sig, 0)) ++sig;
    }
    if (sig == (BigInt(1) << (m + 1))) {
      sig >>= 1;
      ++e;
    }
  }
  return detail::encode_from_sig(x.sign() < 0, sig.convert_to<std::uint64_t>(), e, fmt);
}

FpValue fp_encode(double x, const FpFormat& fmt) {
  validate(fmt);
  if (x == 0.0) return FpValue::zero(fmt);
  if (!std::isfinite(x)) throw std::invalid_argument("fp_encode: non-finite input");
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const bool sign = bits >> 63;
  auto raw_exp = static_cast<std::int64_t>((bits >> 52) & 0x7FF);
  std::uint64_t mant = bits & low_mask(52);
  std::int64_t e;
  if (raw_exp == 0) {  // subnormal double: normalize
    const int lead = 63 - std::countl_zero(mant);
    e = -1022 - (52 - lead);
    mant <<= (52 - lead);
  } else {
    mant |= std::uint64_t{1} << 52;
    e = raw_exp - 1023;
  }
  // mant has its leading one at bit 52; |x| = mant * 2^(e-52)
  const int m = fmt.sig_bits;
  const int shift = 52 - m;
  std::uint64_t sig;
  if (shift <= 0) {
    sig = mant << -shift;
  } else if (fmt.hub) {
    sig = mant >> shift;
  } else {
    sig = mant >> shift;
    const std::uint64_t guard = (mant >> (shift - 1)) & 1;
    const bool sticky = (mant & low_mask(shift - 1)) != 0;
    if (guard && (sticky || (sig & 1))) ++sig;
    if (sig == (std::uint64_t{1} << (m + 1))) {
      sig >>= 1;
      ++e;
    }
  }
  return detail::encode_from_sig(sign, sig, e, fmt);
}

FixedWord FixedWord::make(std::int64_t bits, int width, int frac_bits, bool hub) {
  if (width < 2 || width > 62) throw std::invalid_argument("FixedWord: width out of range");
  if (frac_bits < 0 || frac_bits > width) throw std::invalid_argument("FixedWord: bad frac_bits");
  const std::int64_t lo = -(std::int64_t{1} << (width - 1));
  const std::int64_t hi = (std::int64_t{1} << (width - 1)) - 1;
  if (bits < lo || bits > hi) throw std::overflow_error("FixedWord: bits exceed width");
  return FixedWord{bits, width, frac_bits, hub};
}

FixedWord FixedWord::from_raw(std::uint64_t raw, int width, int frac_bits, bool hub) {
  if (width < 2 || width > 62) throw std::invalid_argument("FixedWord: width out of range");
  return make(sign_extend(raw, width), width, frac_bits, hub);
}

std::uint64_t FixedWord::raw() const {
  return static_cast<std::uint64_t>(bits) & low_mask(width);
}

ExactReal FixedWord::value() const {
  if (hub) return ExactReal::scaled(2 * BigInt(bits) + 1, -(frac_bits + 1));
  return ExactReal::scaled(BigInt(bits), -frac_bits);
}

double FixedWord::value_f64() const {
  if (hub) return std::ldexp(static_cast<double>(2 * bits + 1), -(frac_bits + 1));
  return std::ldexp(static_cast<double>(bits), -frac_bits);
}

FixedWord fixed_negate(const FixedWord& a) {
  if (a.hub) return FixedWord{~a.bits, a.width, a.frac_bits, a.hub};
  if (a.bits == -(std::int64_t{1} << (a.width - 1)))
    throw std::overflow_error("fixed_negate: most-negative pattern");
  return FixedWord{-a.bits, a.width, a.frac_bits, a.hub};
}

FixedWord fixed_round_shift(const FixedWord& a, int k, RoundShiftMode mode) {
  if (k < 0) throw std::invalid_argument("fixed_round_shift: negative shift");
  if (k == 0) return a;
  FixedWord r = a;
  if (k >= a.width) {
    r.bits = 0;
    return r;
  }
  switch (mode) {
    case RoundShiftMode::kTruncate:
    case RoundShiftMode::kHub:
      r.bits = a.bits >> k;
      break;
    case RoundShiftMode::kRne: {
      std::int64_t q = a.bits >> k;
      const std::int64_t guard = (a.bits >> (k - 1)) & 1;
      const bool sticky = (a.bits & static_cast<std::int64_t>(low_mask(k - 1))) != 0;
      if (guard && (sticky || (q & 1))) ++q;
      r.bits = q;
      break;
    }
  }
  return r;
}

}  // namespace givens
