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

#include <cstdint>
#include <string>

#include "givens/exact_real.hpp"

namespace givens {

/// Parametric IEEE-like floating-point format. `sig_bits` counts the stored
/// fraction bits; the leading one is implied for every nonzero value. When
/// `hub` is set the format carries an implicit least significant bit (ILSB)
/// of constant one just below the stored fraction, so a pattern 1.f denotes
/// the value 1.f1.
///
/// There are no NaNs, infinities or subnormals: an all-ones exponent field is
/// an ordinary exponent, and the all-zero exponent+fraction pattern is the
/// (only) zero encoding.
struct FpFormat {
  int exp_bits = 8;
  int sig_bits = 23;
  bool hub = false;

  int bias() const { return (1 << (exp_bits - 1)) - 1; }
  int max_exp_field() const { return (1 << exp_bits) - 1; }
  int total_bits() const { return 1 + exp_bits + sig_bits; }

  static FpFormat half(bool hub = false) { return {5, 10, hub}; }
  static FpFormat single(bool hub = false) { return {8, 23, hub}; }
  static FpFormat dbl(bool hub = false) { return {11, 52, hub}; }

  bool operator==(const FpFormat&) const = default;
};

void validate(const FpFormat& fmt);

/// One floating-point datum: sign, biased exponent field and fraction field.
/// Zero is the canonical all-zero pattern with `is_zero` set.
struct FpValue {
  FpFormat format;
  bool sign = false;
  std::uint32_t exponent = 0;     // biased field, exp_bits wide
  std::uint64_t significand = 0;  // fraction field, sig_bits wide
  bool is_zero = true;

  static FpValue zero(const FpFormat& fmt);
  /// Builds a value from raw fields. An all-zero exponent+fraction collapses
  /// to the canonical zero.
  static FpValue make(const FpFormat& fmt, bool sign, std::uint32_t exp_field,
                      std::uint64_t frac_field);

  std::uint64_t pack() const;
  static FpValue unpack(std::uint64_t bits, const FpFormat& fmt);

  /// "s|eeee|ffff" debug form.
  std::string bit_string() const;
  static FpValue from_bit_string(const std::string& s, const FpFormat& fmt);

  bool operator==(const FpValue& o) const;
};

/// Exact represented value, ILSB included for hub formats.
ExactReal fp_decode(const FpValue& v);

/// Fast binary64 decode. Exact whenever 2+sig_bits(+1 if hub) <= 54.
double fp_decode_f64(const FpValue& v);

/// Round a real onto the format grid: round-to-nearest ties-to-even for
/// conventional formats, truncation of the infinitely-precise significand for
/// hub formats (which is round-to-nearest on the hub grid at fixed exponent).
/// Values below the smallest normal flush to zero; values beyond the largest
/// exponent throw std::overflow_error.
FpValue fp_encode(const ExactReal& x, const FpFormat& fmt);

/// Same semantics, integer-exact fast path from a binary64 input.
FpValue fp_encode(double x, const FpFormat& fmt);

/// Two's-complement fixed-point word. `bits` is kept sign-extended into the
/// int64 host; `width` counts total bits including sign. A hub word has an
/// ILSB of weight 2^-(frac_bits+1), so its value is (2*bits+1)*2^-(frac_bits+1).
struct FixedWord {
  std::int64_t bits = 0;
  int width = 0;
  int frac_bits = 0;
  bool hub = false;

  static FixedWord make(std::int64_t bits, int width, int frac_bits, bool hub);
  /// Masks `raw` to `width` bits and sign-extends.
  static FixedWord from_raw(std::uint64_t raw, int width, int frac_bits, bool hub);

  std::uint64_t raw() const;
  ExactReal value() const;
  double value_f64() const;

  bool operator==(const FixedWord& o) const = default;
};

/// Exact negation. Hub path is bitwise inversion (the ILSB absorbs the
/// increment); conventional path is invert-plus-one and throws
/// std::overflow_error on the most-negative pattern.
FixedWord fixed_negate(const FixedWord& a);

enum class RoundShiftMode {
  kTruncate,  // arithmetic shift, discarded bits dropped
  kRne,       // round to nearest, ties to even, sticky over all dropped bits
  kHub,       // plain truncation of a hub word = round-to-nearest on its grid
};

/// Arithmetic right shift by k with the selected disposal of discarded bits.
/// k >= width forces the all-zero word.
FixedWord fixed_round_shift(const FixedWord& a, int k, RoundShiftMode mode);

namespace detail {

/// Packs an already-rounded significand sig in [2^m, 2^(m+1)) with the given
/// unbiased exponent. Underflow flushes to zero, overflow throws.
FpValue encode_from_sig(bool sign, std::uint64_t sig, std::int64_t unbiased_exp,
                        const FpFormat& fmt);

}  // namespace detail

}  // namespace givens
