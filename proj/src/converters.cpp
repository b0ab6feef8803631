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

#include "givens/converters.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace givens {

namespace {

std::uint64_t low_mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

/// Converts one FP operand into the n-bit two's-complement significand, hidden
/// leading one included, before any alignment shift.
FixedWord to_fixed_significand(const FpValue& v, const ConverterConfig& cfg) {
  const FpFormat& fmt = v.format;
  const int n = cfg.n;
  const int m = fmt.sig_bits;
  if (v.is_zero) return FixedWord::make(0, n, n - 2, fmt.hub);

  if (!fmt.hub) {
    const std::int64_t mag = static_cast<std::int64_t>((std::uint64_t{1} << m) | v.significand);
    const std::int64_t bits = (v.sign ? -mag : mag) << (n - 2 - m);
    return FixedWord::make(bits, n, n - 2, false);
  }

  // Identity ones (exponent field 011..1, zero fraction) encode exactly,
  // without the ILSB; the emitted word is an ordinary two's-complement +-1.0.
  if (cfg.hub_detect_identity && v.exponent == static_cast<std::uint32_t>(fmt.bias()) &&
      v.significand == 0) {
    std::int64_t bits = std::int64_t{1} << (n - 2);
    if (v.sign) bits = -bits;
    return FixedWord::make(bits, n, n - 2, false);
  }

  // Negation is bitwise inversion of the significand; the extension then
  // materializes the input's ILSB (biased: 1 then zeros) or randomizes the
  // implicit round direction with lsb,~lsb,... (unbiased).
  std::uint64_t u = (std::uint64_t{1} << m) | v.significand;
  if (v.sign) u = ~u & low_mask(m + 1);
  const int ext = n - m - 2;
  std::uint64_t ext_bits = 0;
  if (ext > 0) {
    if (!cfg.hub_unbiased_extension) {
      ext_bits = std::uint64_t{1} << (ext - 1);
    } else {
      const bool lsb = u & 1;
      ext_bits = lsb ? (std::uint64_t{1} << (ext - 1)) : ((std::uint64_t{1} << (ext - 1)) - 1);
    }
  }
  const std::uint64_t raw =
      (std::uint64_t{v.sign} << (n - 1)) | (u << ext) | ext_bits;
  return FixedWord::from_raw(raw, n, n - 2, true);
}

std::uint64_t rne_shift_u64(std::uint64_t v, int k) {
  if (k <= 0) return v << -k;
  std::uint64_t q = v >> k;
  const std::uint64_t guard = (v >> (k - 1)) & 1;
  const bool sticky = (v & low_mask(k - 1)) != 0;
  if (guard && (sticky || (q & 1))) ++q;
  return q;
}

FpValue convert_one_out(const FixedWord& w, std::uint32_t m_exp, const ConverterConfig& cfg,
                        const FpFormat& fmt) {
  if (w.bits == 0) return FpValue::zero(fmt);
  const int m = fmt.sig_bits;
  const int frac = w.frac_bits;
  const std::int64_t block_exp = static_cast<std::int64_t>(m_exp) - fmt.bias();
  const bool sign = w.bits < 0;

  if (!fmt.hub) {
    const auto mag = static_cast<std::uint64_t>(sign ? -w.bits : w.bits);
    const int lead = 63 - std::countl_zero(mag);
    const std::int64_t e = block_exp + (lead - frac);
    std::uint64_t sig = rne_shift_u64(mag, lead - m);
    std::int64_t e_out = e;
    if (sig == (std::uint64_t{1} << (m + 1))) {  // rounding crossed a power of two
      sig >>= 1;
      ++e_out;
    }
    return detail::encode_from_sig(sign, sig, e_out, fmt);
  }

  // Hub: absolute value by inversion, explicit ILSB appended before the
  // normalizer, truncation of everything below the m kept fraction bits.
  const std::int64_t mag_bits = sign ? ~w.bits : w.bits;
  const int append = cfg.hub_output_unbiased ? static_cast<int>(mag_bits & 1) : 1;
  const std::uint64_t b = (static_cast<std::uint64_t>(mag_bits) << 1) |
                          static_cast<std::uint64_t>(append);
  if (b == 0) return FpValue::zero(fmt);
  const int lead = 63 - std::countl_zero(b);
  const std::int64_t e = block_exp + (lead - (frac + 1));
  const int shift = lead - m;
  std::uint64_t sig;
  if (shift >= 0) {
    sig = b >> shift;
  } else {
    const int ls = -shift;
    const bool fill = cfg.hub_output_unbiased && (mag_bits & 1) == 0;
    sig = (b << ls) | (fill ? low_mask(ls) : 0);
  }
  return detail::encode_from_sig(sign, sig, e, fmt);
}

}  // namespace

void validate(const ConverterConfig& cfg, const FpFormat& fmt) {
  validate(fmt);
  if (cfg.n < fmt.sig_bits + 2) throw std::invalid_argument("ConverterConfig: n must exceed m+1");
  if (cfg.n > 60) throw std::invalid_argument("ConverterConfig: n too wide for the datapath host");
  if (cfg.input_rounding == RoundShiftMode::kHub)
    throw std::invalid_argument("ConverterConfig: input_rounding must be truncate or rne");
}

BlockFpPair input_convert(const FpValue& x, const FpValue& y, const ConverterConfig& cfg) {
  if (!(x.format == y.format)) throw std::invalid_argument("input_convert: mixed formats");
  const FpFormat& fmt = x.format;
  validate(cfg, fmt);

  BlockFpPair out;
  out.x_fix = to_fixed_significand(x, cfg);
  out.y_fix = to_fixed_significand(y, cfg);

  if (x.is_zero && y.is_zero) {
    out.m_exp = 0;
    return out;
  }
  if (x.is_zero || y.is_zero) {
    out.m_exp = x.is_zero ? y.exponent : x.exponent;
    return out;
  }

  out.m_exp = std::max(x.exponent, y.exponent);
  const RoundShiftMode mode = fmt.hub ? RoundShiftMode::kHub : cfg.input_rounding;
  if (x.exponent < y.exponent) {
    out.x_fix = fixed_round_shift(out.x_fix, static_cast<int>(y.exponent - x.exponent), mode);
  } else if (y.exponent < x.exponent) {
    out.y_fix = fixed_round_shift(out.y_fix, static_cast<int>(x.exponent - y.exponent), mode);
  }
  return out;
}

std::pair<FpValue, FpValue> output_convert(const FixedWord& x, const FixedWord& y,
                                           std::uint32_t m_exp, const ConverterConfig& cfg,
                                           const FpFormat& fmt) {
  validate(cfg, fmt);
  if (x.frac_bits != cfg.n - 2 || y.frac_bits != cfg.n - 2)
    throw std::invalid_argument("output_convert: word layout mismatch");
  return {convert_one_out(x, m_exp, cfg, fmt), convert_one_out(y, m_exp, cfg, fmt)};
}

}  // namespace givens
