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

#include "givens/verify.hpp"

#include <ostream>
#include <random>

#include "givens/converters.hpp"
#include "givens/cordic.hpp"

namespace givens::verify {

namespace {

bool fits(std::int64_t bits, int width) {
  const std::int64_t hi = std::int64_t{1} << (width - 1);
  return bits >= -hi && bits < hi;
}

std::int64_t widened_add(std::int64_t acc, std::int64_t operand, bool subtract, int stage) {
  const std::int64_t o = subtract ? ~operand : operand;
  const std::int64_t wide = 2 * o + 1;       // ILSB appended
  const std::int64_t sum = (2 * acc + 1) + (wide >> stage);
  return sum >> 1;                           // drop the extra low bit
}

}  // namespace

std::optional<std::pair<std::int64_t, std::int64_t>> naive_hub_stage(std::int64_t x_bits,
                                                                     std::int64_t y_bits, int stage,
                                                                     int sigma, int width) {
  const std::int64_t xn = widened_add(x_bits, y_bits, /*subtract=*/sigma > 0, stage);
  const std::int64_t yn = widened_add(y_bits, x_bits, /*subtract=*/sigma < 0, stage);
  if (!fits(xn, width) || !fits(yn, width)) return std::nullopt;
  return std::make_pair(xn, yn);
}

FixedWord nearest_hub_shift(const FixedWord& a, int k) {
  if (k >= a.width) return FixedWord{0, a.width, a.frac_bits, a.hub};
  const ExactReal target = a.value().mul_pow2(-k);
  // largest hub point at or below the target, then its upper neighbor
  const BigInt fl = target.scaled_floor(a.frac_bits + 1).first;
  const BigInt num = fl - 1;  // b_lo = floor((floor(t) - 1) / 2), t in half-grid units
  BigInt b_lo_big;
  if (num >= 0) {
    b_lo_big = num >> 1;
  } else {
    b_lo_big = -((-num + 1) >> 1);
  }
  const auto lo = b_lo_big.convert_to<std::int64_t>();
  auto word = [&](std::int64_t bits) { return FixedWord{bits, a.width, a.frac_bits, true}; };
  const ExactReal d_lo = (target - word(lo).value()).abs();
  const ExactReal d_hi = (word(lo + 1).value() - target).abs();
  if (d_lo == d_hi) throw std::logic_error("nearest_hub_shift: unexpected tie");
  return d_lo < d_hi ? word(lo) : word(lo + 1);
}

bool check_hub_shift_is_nearest(int max_width, std::ostream* log) {
  for (int w = 2; w <= max_width; ++w) {
    for (std::int64_t bits = -(1 << (w - 1)); bits < (1 << (w - 1)); ++bits) {
      const FixedWord a{bits, w, w - 2, true};
      for (int k = 0; k <= w + 2; ++k) {
        const FixedWord got = fixed_round_shift(a, k, RoundShiftMode::kHub);
        const FixedWord want = nearest_hub_shift(a, k);
        if (got.bits != want.bits) {
          if (log)
            *log << "hub shift mismatch: w=" << w << " bits=" << bits << " k=" << k
                 << " got=" << got.bits << " want=" << want.bits << '\n';
          return false;
        }
      }
    }
  }
  return true;
}

bool check_hub_negation(int max_width, std::ostream* log) {
  for (int w = 2; w <= max_width; ++w) {
    for (std::int64_t bits = -(1 << (w - 1)); bits < (1 << (w - 1)); ++bits) {
      const FixedWord a{bits, w, w - 2, true};
      const FixedWord n = fixed_negate(a);
      if (!(n.value() == -a.value())) {
        if (log) *log << "hub negate not exact: w=" << w << " bits=" << bits << '\n';
        return false;
      }
      if (fixed_negate(n).bits != a.bits) {
        if (log) *log << "hub negate not involutive: w=" << w << " bits=" << bits << '\n';
        return false;
      }
    }
  }
  return true;
}

namespace {

bool check_one_stage(std::int64_t xb, std::int64_t yb, int width, int frac, int stage, int sigma,
                     std::ostream* log) {
  const FixedWord x{xb, width, frac, true};
  const FixedWord y{yb, width, frac, true};
  const auto want = naive_hub_stage(xb, yb, stage, sigma, width);
  if (!want.has_value()) {
    try {
      (void)microrotate(x, y, stage, sigma, /*hub=*/true);
    } catch (const std::overflow_error&) {
      return true;  // both models overflow
    }
    if (log)
      *log << "carry-in accepted an overflowing case: x=" << xb << " y=" << yb << " i=" << stage
           << " sigma=" << sigma << '\n';
    return false;
  }
  const auto [gx, gy] = microrotate(x, y, stage, sigma, /*hub=*/true);
  if (gx.bits != want->first || gy.bits != want->second) {
    if (log)
      *log << "carry-in mismatch: x=" << xb << " y=" << yb << " i=" << stage << " sigma=" << sigma
           << " got=(" << gx.bits << ',' << gy.bits << ") want=(" << want->first << ','
           << want->second << ")\n";
    return false;
  }
  return true;
}

}  // namespace

bool check_carry_in_equivalence(int n, std::ostream* log) {
  const int width = n + 2;
  const int frac = n - 2;
  const std::int64_t hi = std::int64_t{1} << (width - 1);
  for (std::int64_t xb = -hi; xb < hi; ++xb)
    for (std::int64_t yb = -hi; yb < hi; ++yb)
      for (int stage = 0; stage < width; ++stage)
        for (int sigma : {-1, 1})
          if (!check_one_stage(xb, yb, width, frac, stage, sigma, log)) return false;
  return true;
}

bool check_carry_in_equivalence_random(int n, int samples, std::uint64_t seed, std::ostream* log) {
  const int width = n + 2;
  const int frac = n - 2;
  std::mt19937_64 rng(seed);
  // keep drawn values inside the architectural range |v| < 8
  const std::int64_t span = std::int64_t{1} << (frac + 3);
  std::uniform_int_distribution<std::int64_t> dist(-span, span - 1);
  for (int s = 0; s < samples; ++s) {
    const std::int64_t xb = dist(rng);
    const std::int64_t yb = dist(rng);
    const int stage = static_cast<int>(rng() % static_cast<unsigned>(width));
    const int sigma = (rng() & 1) ? 1 : -1;
    if (!check_one_stage(xb, yb, width, frac, stage, sigma, log)) return false;
  }
  return true;
}

bool check_encode_decode_roundtrip(const FpFormat& fmt, std::ostream* log) {
  const std::uint64_t exp_hi = std::uint64_t{1} << fmt.exp_bits;
  const std::uint64_t sig_hi = std::uint64_t{1} << fmt.sig_bits;
  for (int s = 0; s < 2; ++s) {
    for (std::uint64_t e = 0; e < exp_hi; ++e) {
      for (std::uint64_t f = 0; f < sig_hi; ++f) {
        if (e == 0 && f == 0) continue;  // the zero pattern
        const FpValue v = FpValue::make(fmt, s != 0, static_cast<std::uint32_t>(e), f);
        const FpValue back = fp_encode(fp_decode(v), fmt);
        if (!(back == v)) {
          if (log) *log << "roundtrip failed at " << v.bit_string() << '\n';
          return false;
        }
      }
    }
  }
  return true;
}

bool check_unbiased_extension_zero_mean(int sig_bits, int n, std::ostream* log) {
  const FpFormat fmt{5, sig_bits, true};
  ConverterConfig cfg;
  cfg.n = n;
  cfg.hub_unbiased_extension = true;
  cfg.hub_detect_identity = false;
  ExactReal sum;
  const auto bias = static_cast<std::uint32_t>(fmt.bias());
  for (std::uint64_t f = 0; f < (std::uint64_t{1} << sig_bits); ++f) {
    const FpValue v = FpValue::make(fmt, false, bias, f);
    const BlockFpPair pair = input_convert(v, v, cfg);
    sum = sum + (pair.x_fix.value() - fp_decode(v));
  }
  if (!sum.is_zero()) {
    if (log) *log << "extension errors sum to " << sum.str() << " for m=" << sig_bits << '\n';
    return false;
  }
  return true;
}

bool run_all(std::ostream& os) {
  bool ok = true;
  auto report = [&](const char* name, bool pass) {
    os << (pass ? "ok   " : "FAIL ") << name << '\n';
    ok = ok && pass;
  };
  report("hub truncation = round-to-nearest (widths <= 10)", check_hub_shift_is_nearest(10, &os));
  report("hub inversion = exact negation (widths <= 10)", check_hub_negation(10, &os));
  report("carry-in adder = widened model (n=8, exhaustive)", check_carry_in_equivalence(8, &os));
  report("carry-in adder = widened model (n=26, randomized)",
         check_carry_in_equivalence_random(26, 200000, 0xC0FFEE, &os));
  report("encode/decode roundtrip (4,4) conventional",
         check_encode_decode_roundtrip(FpFormat{4, 4, false}, &os));
  report("encode/decode roundtrip (4,4) hub",
         check_encode_decode_roundtrip(FpFormat{4, 4, true}, &os));
  bool zero_mean = true;
  for (int m = 2; m <= 8; ++m)
    zero_mean = zero_mean && check_unbiased_extension_zero_mean(m, m + 4, &os);
  report("unbiased extension error is zero-mean (m <= 8)", zero_mean);
  return ok;
}

}  // namespace givens::verify
