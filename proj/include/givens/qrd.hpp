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
#include <stdexcept>
#include <string>
#include <vector>

#include "givens/converters.hpp"
#include "givens/cordic.hpp"
#include "givens/formats.hpp"

namespace givens {

/// Everything that defines one Givens rotation unit: the FP format at its
/// ports, the converter options, the rotator options, and the pure
/// fixed-point mode that bypasses the converters entirely.
struct GivensUnitConfig {
  FpFormat fmt = FpFormat::single(true);
  ConverterConfig conv;
  RotatorConfig rot{26, 24, true, true};
  bool pure_fixed = false;
};

void validate(const GivensUnitConfig& cfg);

/// Unit config with the best-performing defaults for a format: n = m+3,
/// p = n-2 (hub) or n-3 (conventional), identity detection on for hub,
/// scale compensation on.
GivensUnitConfig make_unit_config(const FpFormat& fmt);

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, const T& init = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, init) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("Matrix: dimensions must be positive");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using FpMatrix = Matrix<FpValue>;
using FixedMatrix = Matrix<FixedWord>;
using RealMatrix = Matrix<double>;

enum class GivensMode { kVector, kRotate };

struct GivensPairResult {
  FpValue x;
  FpValue y;
  SigmaVector sigma;  // filled in vector mode
};

/// Full unit path for one coordinate pair: input conversion, vectoring or
/// rotation, optional scale compensation, output conversion. Vector mode
/// returns the captured direction sequence for replay.
GivensPairResult givens_pair(const FpValue& x, const FpValue& y, GivensMode mode,
                             const SigmaVector* sigma, const GivensUnitConfig& cfg);

struct FixedGivensPairResult {
  FixedWord x;
  FixedWord y;
  SigmaVector sigma;
};

/// Converter-less path of the pure fixed-point rotator: n-bit words in and
/// out, the two growth bits appended and dropped internally.
FixedGivensPairResult givens_pair_fixed(const FixedWord& x, const FixedWord& y, GivensMode mode,
                                        const SigmaVector* sigma, const GivensUnitConfig& cfg);

struct QrResult {
  FpMatrix r;
  std::optional<FpMatrix> q;
};

/// QR decomposition by column-major Givens elimination. Annihilated entries
/// are written as exact zeros. When `want_q` is requested, identity rows are
/// appended to the working rows so Q and R share the datapath and precision;
/// Q is returned transposed back (A ~= Q*R).
QrResult qr_decompose(const FpMatrix& a, const GivensUnitConfig& cfg, bool want_q);

struct FixedQrResult {
  FixedMatrix r;
  std::optional<FixedMatrix> q;
};

FixedQrResult qr_decompose_fixed(const FixedMatrix& a, const GivensUnitConfig& cfg, bool want_q);

/// Cycle accounting of the streamed unit. FP-mode latency is the two input
/// converter stages, p rotator stages and three output converter stages; the
/// initiation interval is the row length e = cols (+ rows when Q is
/// computed). total = latency + (rotations-1)*interval for one unit kept
/// busy; the model assumes an uninterrupted stream of row pairs.
struct CycleReport {
  std::int64_t latency_cycles = 0;
  std::int64_t initiation_interval_cycles = 0;
  std::int64_t total_cycles = 0;
  std::int64_t rotations_count = 0;
};

CycleReport schedule_cycles(int rows, int cols, bool want_q, const GivensUnitConfig& cfg);

/// Million Givens rotations per second at the given clock.
double throughput_mops(const CycleReport& report, double freq_mhz);

std::string to_json(const CycleReport& report);

}  // namespace givens
