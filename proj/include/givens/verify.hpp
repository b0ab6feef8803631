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
#include <iosfwd>
#include <optional>
#include <utility>

#include "givens/formats.hpp"

namespace givens::verify {

/// Widened reference model of one hub CORDIC stage: both ILSBs are appended
/// explicitly, the shifted operand negated by inversion before widening, the
/// sum computed at full width and truncated back. Returns nothing when the
/// result would not fit `width` bits. Independent of the carry-in datapath.
std::optional<std::pair<std::int64_t, std::int64_t>> naive_hub_stage(std::int64_t x_bits,
                                                                     std::int64_t y_bits, int stage,
                                                                     int sigma, int width);

/// Round-to-nearest of value(a)*2^-k onto the hub grid by explicit candidate
/// comparison in exact arithmetic.
FixedWord nearest_hub_shift(const FixedWord& a, int k);

// Exhaustive invariant suites over small widths. Each returns true on
// success and reports the first counterexample to `log` when given.
bool check_hub_shift_is_nearest(int max_width, std::ostream* log = nullptr);
bool check_hub_negation(int max_width, std::ostream* log = nullptr);
bool check_carry_in_equivalence(int n, std::ostream* log = nullptr);
bool check_carry_in_equivalence_random(int n, int samples, std::uint64_t seed,
                                       std::ostream* log = nullptr);
bool check_encode_decode_roundtrip(const FpFormat& fmt, std::ostream* log = nullptr);
bool check_unbiased_extension_zero_mean(int sig_bits, int n, std::ostream* log = nullptr);

/// Runs every suite at its default sizes, one line per check.
bool run_all(std::ostream& os);

}  // namespace givens::verify
