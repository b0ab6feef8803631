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
#include <optional>
#include <utility>
#include <vector>

#include "givens/formats.hpp"

namespace givens {

/// Per-iteration microrotation directions captured in vectoring mode and
/// replayed in rotation mode. Entries are +1 or -1.
struct SigmaVector {
  std::vector<std::int8_t> dirs;

  std::size_t size() const { return dirs.size(); }
  bool operator==(const SigmaVector&) const = default;
};

/// Architecture knobs of the fixed-point rotator. The datapath word is the
/// n-bit converter word widened by two integer bits (width n+2, n-2 fraction
/// bits) to absorb the scale-factor growth.
struct RotatorConfig {
  int n = 26;
  int iterations = 24;  // microrotation count p, 1 <= p <= n-2
  bool hub = false;
  bool compensate_scale = false;

  int width() const { return n + 2; }
};

void validate(const RotatorConfig& cfg);

/// Widens an n-bit converter word to the (n+2)-bit datapath layout. The hub
/// flag of the datapath word follows the argument; the bits are unchanged.
FixedWord widen_to_datapath(const FixedWord& w, bool hub);

/// Narrows a datapath word back to n bits; throws std::overflow_error when
/// the value does not fit one sign and one integer bit.
FixedWord narrow_from_datapath(const FixedWord& w);

/// One CORDIC stage: x' = x - sigma*(y >> stage), y' = y + sigma*(x >> stage).
/// Conventional words truncate the shifted operand. Hub words feed the bit
/// shifted just below the kept window into the adder carry (the ILSB of the
/// unshifted operand supplies the carry at stage 0), and subtraction is
/// bitwise inversion only.
std::pair<FixedWord, FixedWord> microrotate(const FixedWord& x, const FixedWord& y, int stage,
                                            int sigma, bool hub);

struct VectoringResult {
  FixedWord x;
  FixedWord y;
  SigmaVector sigma;
};

/// Drives |y| toward zero, the direction of each microrotation chosen from
/// the sign bits of the current coordinates, and captures the directions.
/// x_out approximates +-K_p * sqrt(x^2+y^2) (uncompensated).
VectoringResult vectoring(FixedWord x, FixedWord y, const RotatorConfig& cfg);

/// Replays a captured direction sequence on another coordinate pair.
std::pair<FixedWord, FixedWord> rotate(FixedWord x, FixedWord y, const SigmaVector& sigma,
                                       const RotatorConfig& cfg);

/// CORDIC gain K_p = prod_{i<p} sqrt(1+2^-2i), to at least 96 fraction bits.
ExactReal scale_factor(int p);
double scale_factor_f64(int p);

/// round(2^width / K_p): the multiplier constant used by compensate_scale.
std::int64_t compensation_constant(int p, int width);

/// Multiplies by the precomputed reciprocal-gain constant and truncates the
/// product back onto the datapath grid (hub truncation for hub words).
FixedWord compensate_scale(const FixedWord& w, const RotatorConfig& cfg);

/// Cycle-accurate model of the pipelined rotator: one stage per cycle, the
/// v/r control and the block exponent ride along, and each stage holds the
/// sigma register it latched during the last vectoring cycle it saw.
class GivensPipeline {
 public:
  struct Input {
    FixedWord x;
    FixedWord y;
    bool vectoring = false;  // v/r control: true = vectoring, false = rotation
    std::uint32_t m_exp = 0;
  };
  struct Output {
    FixedWord x;
    FixedWord y;
    bool vectoring = false;
    std::uint32_t m_exp = 0;
  };
  struct StageState {
    bool valid = false;
    bool vectoring = false;
    FixedWord x;
    FixedWord y;
    std::uint32_t m_exp = 0;
  };

  explicit GivensPipeline(const RotatorConfig& cfg);

  /// Advances one clock cycle. Feeds `in` (or a bubble) into stage 0 and
  /// returns the pair leaving the last stage, if any. A rotation-mode datum
  /// reaching a stage that never latched a direction throws std::logic_error.
  std::optional<Output> step(const std::optional<Input>& in);

  const RotatorConfig& config() const { return cfg_; }
  int stage_count() const { return cfg_.iterations; }
  /// Inter-stage registers, for debug dumps; slot i feeds stage i.
  const std::vector<StageState>& stages() const { return slots_; }
  /// Per-stage latched directions (0 until the stage sees its first
  /// vectoring cycle).
  const std::vector<std::int8_t>& stage_sigma() const { return sigma_; }

 private:
  RotatorConfig cfg_;
  std::vector<StageState> slots_;
  std::vector<std::int8_t> sigma_;  // 0 = not latched yet
};

}  // namespace givens
