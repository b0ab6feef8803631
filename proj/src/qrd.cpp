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

#include "givens/qrd.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace givens {

void validate(const GivensUnitConfig& cfg) {
  validate(cfg.rot);
  if (cfg.conv.n != cfg.rot.n)
    throw std::invalid_argument("GivensUnitConfig: converter and rotator widths differ");
  if (!cfg.pure_fixed) validate(cfg.conv, cfg.fmt);
}

GivensUnitConfig make_unit_config(const FpFormat& fmt) {
  validate(fmt);
  GivensUnitConfig cfg;
  cfg.fmt = fmt;
  cfg.conv.n = fmt.sig_bits + 3;
  cfg.conv.hub_detect_identity = fmt.hub;
  cfg.rot.n = cfg.conv.n;
  cfg.rot.iterations = fmt.hub ? cfg.conv.n - 2 : cfg.conv.n - 3;
  cfg.rot.hub = fmt.hub;
  cfg.rot.compensate_scale = true;
  cfg.pure_fixed = false;
  return cfg;
}

GivensPairResult givens_pair(const FpValue& x, const FpValue& y, GivensMode mode,
                             const SigmaVector* sigma, const GivensUnitConfig& cfg) {
  validate(cfg);
  if (mode == GivensMode::kRotate && sigma == nullptr)
    throw std::invalid_argument("givens_pair: rotation mode needs a sigma vector");

  const BlockFpPair pair = input_convert(x, y, cfg.conv);
  FixedWord dx = widen_to_datapath(pair.x_fix, cfg.rot.hub);
  FixedWord dy = widen_to_datapath(pair.y_fix, cfg.rot.hub);

  GivensPairResult res;
  if (mode == GivensMode::kVector) {
    VectoringResult v = vectoring(dx, dy, cfg.rot);
    dx = v.x;
    dy = v.y;
    res.sigma = std::move(v.sigma);
  } else {
    std::tie(dx, dy) = rotate(dx, dy, *sigma, cfg.rot);
  }
  if (cfg.rot.compensate_scale) {
    dx = compensate_scale(dx, cfg.rot);
    dy = compensate_scale(dy, cfg.rot);
  }
  std::tie(res.x, res.y) = output_convert(dx, dy, pair.m_exp, cfg.conv, cfg.fmt);
  return res;
}

FixedGivensPairResult givens_pair_fixed(const FixedWord& x, const FixedWord& y, GivensMode mode,
                                        const SigmaVector* sigma, const GivensUnitConfig& cfg) {
  validate(cfg.rot);
  if (x.width != cfg.rot.n || y.width != cfg.rot.n || x.frac_bits != cfg.rot.n - 2 ||
      y.frac_bits != cfg.rot.n - 2)
    throw std::invalid_argument("givens_pair_fixed: word layout mismatch");
  if (mode == GivensMode::kRotate && sigma == nullptr)
    throw std::invalid_argument("givens_pair_fixed: rotation mode needs a sigma vector");

  FixedWord dx = widen_to_datapath(x, cfg.rot.hub);
  FixedWord dy = widen_to_datapath(y, cfg.rot.hub);

  FixedGivensPairResult res;
  if (mode == GivensMode::kVector) {
    VectoringResult v = vectoring(dx, dy, cfg.rot);
    dx = v.x;
    dy = v.y;
    res.sigma = std::move(v.sigma);
  } else {
    std::tie(dx, dy) = rotate(dx, dy, *sigma, cfg.rot);
  }
  if (cfg.rot.compensate_scale) {
    dx = compensate_scale(dx, cfg.rot);
    dy = compensate_scale(dy, cfg.rot);
  }
  res.x = narrow_from_datapath(dx);
  res.y = narrow_from_datapath(dy);
  return res;
}

namespace {

/// Column-major elimination over the augmented rows, parameterized over the
/// element type and the pair operation. Pivots walk the `data_cols` leading
/// columns; each rotation sweeps every column up to `total_cols` (the
/// appended identity columns included).
template <typename M, typename Elem, typename IsZero, typename VectorOp, typename RotateOp,
          typename ZeroElem>
void eliminate(M& work, int rows, int data_cols, int total_cols, IsZero is_zero,
               VectorOp do_vector, RotateOp do_rotate, ZeroElem zero_elem) {
  const int pivots = std::min(rows - 1, data_cols);
  for (int j = 0; j < pivots; ++j) {
    for (int i = j + 1; i < rows; ++i) {
      if (is_zero(work(i, j))) {
        work(i, j) = zero_elem();  // already annihilated, nothing to rotate
        continue;
      }
      SigmaVector sigma;
      Elem new_diag;
      std::tie(new_diag, sigma) = do_vector(work(j, j), work(i, j));
      work(j, j) = new_diag;
      work(i, j) = zero_elem();  // the vectoring residual is discarded
      for (int k = j + 1; k < total_cols; ++k) {
        std::tie(work(j, k), work(i, k)) = do_rotate(work(j, k), work(i, k), sigma);
      }
    }
  }
}

}  // namespace

QrResult qr_decompose(const FpMatrix& a, const GivensUnitConfig& cfg, bool want_q) {
  validate(cfg);
  if (cfg.pure_fixed)
    throw std::invalid_argument("qr_decompose: FP matrix passed to a pure fixed-point unit");
  const int rows = a.rows();
  const int cols = a.cols();
  const int total = cols + (want_q ? rows : 0);

  FpMatrix work(rows, total, FpValue::zero(cfg.fmt));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (!(a(i, j).format == cfg.fmt)) throw std::invalid_argument("qr_decompose: format mismatch");
      work(i, j) = a(i, j);
    }
  if (want_q) {
    const FpValue one = fp_encode(1.0, cfg.fmt);
    for (int i = 0; i < rows; ++i) work(i, cols + i) = one;
  }

  eliminate<FpMatrix, FpValue>(
      work, rows, cols, total,
      [](const FpValue& v) { return v.is_zero; },
      [&](const FpValue& xx, const FpValue& yy) {
        GivensPairResult r = givens_pair(xx, yy, GivensMode::kVector, nullptr, cfg);
        return std::make_pair(r.x, std::move(r.sigma));
      },
      [&](const FpValue& xx, const FpValue& yy, const SigmaVector& s) {
        GivensPairResult r = givens_pair(xx, yy, GivensMode::kRotate, &s, cfg);
        return std::make_pair(r.x, r.y);
      },
      [&] { return FpValue::zero(cfg.fmt); });

  QrResult res;
  res.r = FpMatrix(rows, cols, FpValue::zero(cfg.fmt));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) res.r(i, j) = work(i, j);
  if (want_q) {
    FpMatrix q(rows, rows, FpValue::zero(cfg.fmt));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < rows; ++j) q(i, j) = work(j, cols + i);  // transpose of the Qt block
    res.q = std::move(q);
  }
  return res;
}

FixedQrResult qr_decompose_fixed(const FixedMatrix& a, const GivensUnitConfig& cfg, bool want_q) {
  validate(cfg.rot);
  if (!cfg.pure_fixed)
    throw std::invalid_argument("qr_decompose_fixed: config is not in pure fixed-point mode");
  const int rows = a.rows();
  const int cols = a.cols();
  const int total = cols + (want_q ? rows : 0);
  const int n = cfg.rot.n;
  const bool hub = cfg.rot.hub;

  const FixedWord zero_word = FixedWord::make(0, n, n - 2, hub);
  FixedMatrix work(rows, total, zero_word);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) work(i, j) = a(i, j);
  if (want_q) {
    const FixedWord one = FixedWord::make(std::int64_t{1} << (n - 2), n, n - 2, hub);
    for (int i = 0; i < rows; ++i) work(i, cols + i) = one;
  }

  eliminate<FixedMatrix, FixedWord>(
      work, rows, cols, total,
      // only a conventional all-zero word is an exact zero; hub words never are
      [hub](const FixedWord& v) { return !hub && v.bits == 0; },
      [&](const FixedWord& xx, const FixedWord& yy) {
        FixedGivensPairResult r = givens_pair_fixed(xx, yy, GivensMode::kVector, nullptr, cfg);
        return std::make_pair(r.x, std::move(r.sigma));
      },
      [&](const FixedWord& xx, const FixedWord& yy, const SigmaVector& s) {
        FixedGivensPairResult r = givens_pair_fixed(xx, yy, GivensMode::kRotate, &s, cfg);
        return std::make_pair(r.x, r.y);
      },
      [&] { return zero_word; });

  FixedQrResult res;
  res.r = FixedMatrix(rows, cols, zero_word);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) res.r(i, j) = work(i, j);
  if (want_q) {
    FixedMatrix q(rows, rows, zero_word);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < rows; ++j) q(i, j) = work(j, cols + i);
    res.q = std::move(q);
  }
  return res;
}

CycleReport schedule_cycles(int rows, int cols, bool want_q, const GivensUnitConfig& cfg) {
  validate(cfg.rot);
  if (rows < 1 || cols < 1) throw std::invalid_argument("schedule_cycles: bad dimensions");
  constexpr std::int64_t kInputConverterStages = 2;
  constexpr std::int64_t kOutputConverterStages = 3;

  CycleReport rep;
  rep.latency_cycles = cfg.pure_fixed
                           ? cfg.rot.iterations
                           : kInputConverterStages + cfg.rot.iterations + kOutputConverterStages;
  rep.initiation_interval_cycles = cols + (want_q ? rows : 0);
  const int pivots = std::min(rows - 1, cols);
  rep.rotations_count = 0;
  for (int j = 0; j < pivots; ++j) rep.rotations_count += rows - 1 - j;
  rep.total_cycles =
      rep.rotations_count == 0
          ? rep.latency_cycles
          : rep.latency_cycles + (rep.rotations_count - 1) * rep.initiation_interval_cycles;
  return rep;
}

double throughput_mops(const CycleReport& report, double freq_mhz) {
  return freq_mhz / static_cast<double>(report.initiation_interval_cycles);
}

std::string to_json(const CycleReport& report) {
  nlohmann::json j;
  j["latency_cycles"] = report.latency_cycles;
  j["initiation_interval_cycles"] = report.initiation_interval_cycles;
  j["total_cycles"] = report.total_cycles;
  j["rotations_count"] = report.rotations_count;
  return j.dump(2);
}

}  // namespace givens
