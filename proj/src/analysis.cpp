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

#include "givens/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace givens {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, int r, int trial) {
  const std::uint64_t a = splitmix64(seed ^ (0xA5A5A5A5A5A5A5A5ull + static_cast<std::uint64_t>(r)));
  return splitmix64(a ^ static_cast<std::uint64_t>(trial));
}

RealMatrix gen_matrix(int rows, int cols, int r, std::mt19937_64& rng) {
  if (r < 1) throw std::invalid_argument("gen_matrix: r must be at least 1");
  RealMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const bool neg = rng() & 1;
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
      const double mag = std::exp2(-r + 2.0 * r * u);
      m(i, j) = neg ? -mag : mag;
    }
  }
  return m;
}

SnrSample snr_db(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("snr_db: dimension mismatch");
  double signal = 0.0;
  double noise = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      signal += a(i, j) * a(i, j);
      const double d = a(i, j) - b(i, j);
      noise += d * d;
    }
  if (signal == 0.0) throw std::domain_error("snr_db: zero signal");
  if (noise == 0.0) return {0.0, true};
  return {10.0 * std::log10(signal / noise), false};
}

namespace {

template <typename T>
ReferenceQr reference_qr_impl(const RealMatrix& a) {
  const int rows = a.rows();
  const int cols = a.cols();
  Matrix<T> r(rows, cols);
  Matrix<T> qt(rows, rows, T{0});
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) r(i, j) = static_cast<T>(a(i, j));
    qt(i, i) = T{1};
  }
  const int pivots = std::min(rows - 1, cols);
  for (int j = 0; j < pivots; ++j) {
    for (int i = j + 1; i < rows; ++i) {
      const T y = r(i, j);
      if (y == T{0}) continue;
      const T x = r(j, j);
      const T theta = std::atan2(y, x);
      const T c = std::cos(theta);
      const T s = std::sin(theta);
      for (int k = j; k < cols; ++k) {
        const T rj = r(j, k);
        const T ri = r(i, k);
        r(j, k) = c * rj + s * ri;
        r(i, k) = c * ri - s * rj;
      }
      for (int k = 0; k < rows; ++k) {
        const T qj = qt(j, k);
        const T qi = qt(i, k);
        qt(j, k) = c * qj + s * qi;
        qt(i, k) = c * qi - s * qj;
      }
      r(i, j) = T{0};
    }
  }
  ReferenceQr out{RealMatrix(rows, rows), RealMatrix(rows, cols)};
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) out.r(i, j) = static_cast<double>(r(i, j));
    for (int j = 0; j < rows; ++j) out.q(i, j) = static_cast<double>(qt(j, i));
  }
  return out;
}

}  // namespace

ReferenceQr reference_qr(const RealMatrix& a) { return reference_qr_impl<double>(a); }
ReferenceQr reference_qr_f32(const RealMatrix& a) { return reference_qr_impl<float>(a); }

RealMatrix mat_mul(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: dimension mismatch");
  RealMatrix c(a.rows(), b.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

namespace {

SnrSample unit_fp_trial(const RealMatrix& a, const GivensUnitConfig& cfg) {
  const int rows = a.rows();
  const int cols = a.cols();
  FpMatrix enc(rows, cols, FpValue::zero(cfg.fmt));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) enc(i, j) = fp_encode(a(i, j), cfg.fmt);
  const QrResult qr = qr_decompose(enc, cfg, /*want_q=*/true);

  RealMatrix q(rows, rows);
  RealMatrix r(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < rows; ++j) q(i, j) = fp_decode_f64((*qr.q)(i, j));
    for (int j = 0; j < cols; ++j) r(i, j) = fp_decode_f64(qr.r(i, j));
  }
  return snr_db(a, mat_mul(q, r));
}

SnrSample unit_fixed_trial(const RealMatrix& a, const GivensUnitConfig& cfg, int r) {
  const int rows = a.rows();
  const int cols = a.cols();
  const int n = cfg.rot.n;
  const int frac = n - 2;

  // Static block scale for the design dynamic range: |entries| <= 2^r map to
  // <= 1/4, which keeps column norms and the rotator growth inside the
  // s1.(n-2) layout for any input in range.
  const int scale_exp = r + 2;

  FixedMatrix enc(rows, cols, FixedWord::make(0, n, frac, cfg.rot.hub));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double scaled = std::ldexp(a(i, j), frac - scale_exp);
      enc(i, j) = FixedWord::make(std::llrint(scaled), n, frac, cfg.rot.hub);
    }
  const FixedQrResult qr = qr_decompose_fixed(enc, cfg, /*want_q=*/true);

  RealMatrix q(rows, rows);
  RealMatrix upper(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < rows; ++j) q(i, j) = (*qr.q)(i, j).value_f64();
    for (int j = 0; j < cols; ++j) upper(i, j) = std::ldexp(qr.r(i, j).value_f64(), scale_exp);
  }
  return snr_db(a, mat_mul(q, upper));
}

SnrSample reference_trial(const RealMatrix& a, bool single) {
  const ReferenceQr qr = single ? reference_qr_f32(a) : reference_qr(a);
  return snr_db(a, mat_mul(qr.q, qr.r));
}

void parallel_over(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SnrSample trial_snr(const RealMatrix& a, const ExperimentConfig& cfg, int r) {
  switch (cfg.engine) {
    case Engine::kUnit:
      return cfg.unit.pure_fixed ? unit_fixed_trial(a, cfg.unit, r) : unit_fp_trial(a, cfg.unit);
    case Engine::kReferenceF32:
      return reference_trial(a, true);
    case Engine::kReferenceF64:
      return reference_trial(a, false);
  }
  throw std::logic_error("trial_snr: bad engine");
}

std::string approach_name(const ExperimentConfig& cfg) {
  switch (cfg.engine) {
    case Engine::kReferenceF32:
      return "ref32";
    case Engine::kReferenceF64:
      return "ref64";
    case Engine::kUnit:
      if (cfg.unit.pure_fixed) return "fixed";
      return cfg.unit.fmt.hub ? "hub" : "ieee";
  }
  return "?";
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("run_sweep: trials must be positive");
  if (spec.r_values.empty()) throw std::invalid_argument("run_sweep: no r values");
  if (spec.configs.empty()) throw std::invalid_argument("run_sweep: no configs");
  for (const auto& c : spec.configs)
    if (c.engine == Engine::kUnit) validate(c.unit);

  std::vector<SweepRow> rows;
  rows.reserve(spec.configs.size() * spec.r_values.size());
  for (const auto& cfg : spec.configs) {
    for (const int r : spec.r_values) {
      std::vector<SnrSample> samples(static_cast<std::size_t>(spec.trials));
      std::string error;
      std::mutex error_mu;
      parallel_over(spec.trials, spec.threads, [&](int trial) {
        try {
          std::mt19937_64 rng(trial_seed(spec.seed, r, trial));
          const RealMatrix a = gen_matrix(spec.rows, spec.cols, r, rng);
          samples[static_cast<std::size_t>(trial)] = trial_snr(a, cfg, r);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (error.empty())
            error = "config " + cfg.id + " r=" + std::to_string(r) + " seed=" +
                    std::to_string(spec.seed) + " trial=" + std::to_string(trial) + ": " + e.what();
        }
      });
      if (!error.empty()) throw std::runtime_error("run_sweep: trial failed: " + error);

      // Sum in trial order, so the result is independent of thread scheduling.
      double sum = 0.0;
      int exact = 0;
      for (const SnrSample& s : samples) {
        if (s.exact)
          ++exact;
        else
          sum += s.db;
      }
      SweepRow row;
      row.config_id = cfg.id;
      row.approach = approach_name(cfg);
      if (cfg.engine == Engine::kUnit) {
        row.n = cfg.unit.rot.n;
        row.p = cfg.unit.rot.iterations;
      }
      row.r = r;
      row.trials = spec.trials;
      row.exact_count = exact;
      row.mean_snr_db = (spec.trials - exact) > 0 ? sum / (spec.trials - exact) : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "config_id,approach,N,p,r,trials,mean_snr_db,exact_count\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.10f", row.mean_snr_db);
    os << row.config_id << ',' << row.approach << ',' << row.n << ',' << row.p << ',' << row.r
       << ',' << row.trials << ',' << buf << ',' << row.exact_count << '\n';
  }
}

namespace {

GivensUnitConfig unit_from_json(const nlohmann::json& j) {
  GivensUnitConfig cfg;
  const std::string fmt_name = j.value("format", "single");
  const bool hub = j.value("hub", true);
  if (fmt_name == "half")
    cfg.fmt = FpFormat::half(hub);
  else if (fmt_name == "single")
    cfg.fmt = FpFormat::single(hub);
  else if (fmt_name == "double")
    cfg.fmt = FpFormat::dbl(hub);
  else
    throw std::invalid_argument("manifest: unknown format " + fmt_name);
  cfg = make_unit_config(cfg.fmt);
  if (j.contains("n")) {
    cfg.conv.n = j["n"].get<int>();
    cfg.rot.n = cfg.conv.n;
    cfg.rot.iterations = hub ? cfg.rot.n - 2 : cfg.rot.n - 3;
  }
  if (j.contains("iters")) cfg.rot.iterations = j["iters"].get<int>();
  const std::string round = j.value("round", "trunc");
  if (round == "trunc")
    cfg.conv.input_rounding = RoundShiftMode::kTruncate;
  else if (round == "rne")
    cfg.conv.input_rounding = RoundShiftMode::kRne;
  else
    throw std::invalid_argument("manifest: unknown rounding " + round);
  cfg.conv.hub_unbiased_extension = j.value("unbiased", false);
  cfg.conv.hub_output_unbiased = cfg.conv.hub_unbiased_extension;
  if (j.contains("unbiased_output")) cfg.conv.hub_output_unbiased = j["unbiased_output"].get<bool>();
  cfg.conv.hub_detect_identity = j.value("detect_identity", hub);
  cfg.rot.compensate_scale = j.value("compensate", true);
  cfg.pure_fixed = j.value("pure_fixed", false);
  if (cfg.pure_fixed) {
    cfg.rot.hub = j.value("hub", false);
    cfg.fmt.hub = cfg.rot.hub;
  }
  return cfg;
}

}  // namespace

ExperimentSpec spec_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ExperimentSpec spec;
  spec.rows = j.value("rows", 4);
  spec.cols = j.value("cols", 4);
  spec.trials = j.value("trials", 1000);
  spec.seed = j.value("seed", std::uint64_t{1});
  spec.threads = j.value("threads", 1);
  if (j.contains("r")) {
    const auto& jr = j["r"];
    if (jr.is_array()) {
      for (const auto& v : jr) spec.r_values.push_back(v.get<int>());
    } else {
      const int lo = jr.value("min", 1);
      const int hi = jr.value("max", 20);
      for (int r = lo; r <= hi; ++r) spec.r_values.push_back(r);
    }
  } else {
    for (int r = 1; r <= 20; ++r) spec.r_values.push_back(r);
  }
  if (!j.contains("configs")) throw std::invalid_argument("manifest: missing configs");
  for (const auto& jc : j["configs"]) {
    ExperimentConfig cfg;
    cfg.id = jc.value("id", "");
    const std::string engine = jc.value("engine", "unit");
    if (engine == "unit") {
      cfg.engine = Engine::kUnit;
      cfg.unit = unit_from_json(jc);
    } else if (engine == "ref32") {
      cfg.engine = Engine::kReferenceF32;
    } else if (engine == "ref64") {
      cfg.engine = Engine::kReferenceF64;
    } else {
      throw std::invalid_argument("manifest: unknown engine " + engine);
    }
    if (cfg.id.empty()) cfg.id = approach_name(cfg);
    spec.configs.push_back(std::move(cfg));
  }
  return spec;
}

}  // namespace givens
