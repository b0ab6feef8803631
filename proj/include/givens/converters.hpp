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
#include <utility>

#include "givens/formats.hpp"

namespace givens {

/// Knobs of the input/output format converters. `n` is the internal
/// significand width (one sign bit, one integer bit, n-2 fraction bits).
struct ConverterConfig {
  int n = 26;
  /// Disposal of bits dropped when aligning the lower-exponent operand
  /// (conventional formats only; hub alignment always truncates, which is
  /// round-to-nearest on the hub grid).
  RoundShiftMode input_rounding = RoundShiftMode::kTruncate;
  /// Extend hub significands with lsb,~lsb,... instead of the constant
  /// ILSB-then-zeros, making the extension error zero-mean.
  bool hub_unbiased_extension = false;
  /// Encode inputs with exponent field 011..1 and zero fraction (the ones of
  /// an identity matrix) exactly, without the hub ILSB.
  bool hub_detect_identity = false;
  /// Same lsb,~lsb,... trick for the output normalizer's shifted-in bits.
  bool hub_output_unbiased = false;
};

void validate(const ConverterConfig& cfg, const FpFormat& fmt);

/// Two aligned two's-complement significands sharing one exponent; the
/// internal representation between the converters.
struct BlockFpPair {
  FixedWord x_fix;
  FixedWord y_fix;
  std::uint32_t m_exp = 0;  // biased, exp_bits wide
};

/// FP pair -> block fixed point. The coordinate with the lower exponent is
/// right-shifted by the exponent gap; a gap of n or more forces its word to
/// zero. Zero inputs map to the all-zero word and never influence m_exp.
BlockFpPair input_convert(const FpValue& x, const FpValue& y, const ConverterConfig& cfg);

/// Rotated fixed-point pair + shared exponent -> FP pair. Accepts words of
/// the converter width n or the datapath width n+2 (frac bits must be n-2).
/// Exponent underflow flushes the coordinate to zero; overflow throws.
std::pair<FpValue, FpValue> output_convert(const FixedWord& x, const FixedWord& y,
                                           std::uint32_t m_exp, const ConverterConfig& cfg,
                                           const FpFormat& fmt);

}  // namespace givens
