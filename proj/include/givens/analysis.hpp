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
#include <random>
#include <string>
#include <vector>

#include "givens/qrd.hpp"

namespace givens {

/// How one sweep entry computes its QR factors.
enum class Engine {
  kUnit,          // the modeled Givens rotation unit (FP or pure fixed)
  kReferenceF32,  // software Givens QR with every operation rounded to binary32
  kReferenceF64,  // software Givens QR in binary64
};

struct ExperimentConfig {
  std::string id;
  Engine engine = Engine::kUnit;
  GivensUnitConfig unit;
};

/// One Monte Carlo experiment: a grid of dynamic-range parameters times unit
/// variants, a fixed trial count and a seed. Identical (seed, spec) pairs
/// produce bit-identical results, also across thread counts.
struct ExperimentSpec {
  int rows = 4;
  int cols = 4;
  int trials = 1000;
  std::vector<int> r_values;
  std::vector<ExperimentConfig> configs;
  std::uint64_t seed = 1;
  int threads = 1;  // 0 = hardware concurrency
};

std::uint64_t splitmix64(std::uint64_t x);

/// Substream seed for one (r, trial) cell; every config sees the same matrix
/// for a given cell, which pairs the comparisons between variants.
std::uint64_t trial_seed(std::uint64_t seed, int r, int trial);

/// Entries have uniformly random sign and log-uniform magnitude in
/// [2^-r, 2^r]: both bounds of the dynamic range are exercised evenly.
RealMatrix gen_matrix(int rows, int cols, int r, std::mt19937_64& rng);

struct SnrSample {
  double db = 0.0;
  bool exact = false;  // b reproduced a exactly: the ratio is infinite
};

/// 10*log10(sum a^2 / sum (a-b)^2); throws when `a` is identically zero.
SnrSample snr_db(const RealMatrix& a, const RealMatrix& b);

struct ReferenceQr {
  RealMatrix q;
  RealMatrix r;
};

/// Software Givens QR oracle, binary64 arithmetic (A ~= Q*R).
ReferenceQr reference_qr(const RealMatrix& a);
/// Same algorithm with every arithmetic result rounded to binary32.
ReferenceQr reference_qr_f32(const RealMatrix& a);

RealMatrix mat_mul(const RealMatrix& a, const RealMatrix& b);
RealMatrix transpose(const RealMatrix& a);

/// One trial through a configured engine: round the matrix into the engine's
/// input format, decompose, recompose in binary64 and score against `a`.
/// `r` is the dynamic-range parameter of the experiment; the pure fixed-point
/// engine block-scales by the static power 2^-(r+2) so the whole +-2^r range
/// and its rotation growth fit the word layout.
SnrSample trial_snr(const RealMatrix& a, const ExperimentConfig& cfg, int r);

struct SweepRow {
  std::string config_id;
  std::string approach;  // ieee / hub / fixed / ref32 / ref64
  int n = 0;
  int p = 0;
  int r = 0;
  int trials = 0;
  double mean_snr_db = 0.0;
  int exact_count = 0;
};

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec);

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// JSON experiment manifest -> spec. Unknown keys are rejected.
ExperimentSpec spec_from_json(const std::string& text);

std::string approach_name(const ExperimentConfig& cfg);

}  // namespace givens
