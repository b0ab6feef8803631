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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "givens/analysis.hpp"
#include "givens/qrd.hpp"
#include "givens/verify.hpp"

namespace {

using namespace givens;

struct UnitFlags {
  std::string fp = "single";
  bool hub = true;
  int n = 0;      // 0 = derive from format
  int iters = 0;  // 0 = derive
  std::string round = "trunc";
  bool unbiased = false;
  bool detect_identity = true;
  bool compensate = true;
  bool pure_fixed = false;
};

void add_unit_flags(CLI::App* cmd, UnitFlags* f) {
  cmd->add_option("--fp", f->fp, "Floating-point format: half, single, double")
      ->check(CLI::IsMember({"half", "single", "double"}));
  cmd->add_flag("--hub,!--no-hub", f->hub, "Use the HUB flavor of the format (default on)");
  cmd->add_option("--n", f->n, "Internal significand width N (default m+3)");
  cmd->add_option("--iters", f->iters, "CORDIC microrotations p (default N-2 hub, N-3 otherwise)");
  cmd->add_option("--round", f->round, "Input converter rounding: trunc or rne")
      ->check(CLI::IsMember({"trunc", "rne"}));
  cmd->add_flag("--unbiased", f->unbiased, "Unbiased extension in the HUB converters");
  cmd->add_flag("--detect-identity,!--no-detect-identity", f->detect_identity,
                "Exact conversion of +-1.0 inputs in the HUB input converter");
  cmd->add_flag("--compensate,!--no-compensate", f->compensate, "Scale-factor compensation");
  cmd->add_flag("--pure-fixed", f->pure_fixed, "Bypass the converters (fixed-point rotator only)");
}

GivensUnitConfig build_config(const UnitFlags& f) {
  FpFormat fmt;
  if (f.fp == "half")
    fmt = FpFormat::half(f.hub);
  else if (f.fp == "double")
    fmt = FpFormat::dbl(f.hub);
  else
    fmt = FpFormat::single(f.hub);
  GivensUnitConfig cfg = make_unit_config(fmt);
  if (f.n > 0) {
    cfg.conv.n = f.n;
    cfg.rot.n = f.n;
    cfg.rot.iterations = f.hub ? f.n - 2 : f.n - 3;
  }
  if (f.iters > 0) {
    cfg.rot.iterations = f.iters;
    if (f.n == 0 && cfg.rot.n < f.iters + 2) {
      // p microrotations need at least p+2 internal bits
      cfg.rot.n = f.iters + 2;
      cfg.conv.n = cfg.rot.n;
    }
  }
  cfg.conv.input_rounding = f.round == "rne" ? RoundShiftMode::kRne : RoundShiftMode::kTruncate;
  cfg.conv.hub_unbiased_extension = f.unbiased;
  cfg.conv.hub_output_unbiased = f.unbiased;
  cfg.conv.hub_detect_identity = f.detect_identity && f.hub;
  cfg.rot.compensate_scale = f.compensate;
  cfg.pure_fixed = f.pure_fixed;
  validate(cfg);
  return cfg;
}

FpValue parse_operand(const std::string& tok, const FpFormat& fmt) {
  if (tok.rfind("0x", 0) == 0 || tok.rfind("0X", 0) == 0) {
    // raw bit pattern, unless it parses as a hex float (contains '.' or 'p')
    if (tok.find('.') == std::string::npos && tok.find('p') == std::string::npos &&
        tok.find('P') == std::string::npos) {
      return FpValue::unpack(std::stoull(tok, nullptr, 16), fmt);
    }
    return fp_encode(std::strtod(tok.c_str(), nullptr), fmt);
  }
  if (tok.find('|') != std::string::npos) return FpValue::from_bit_string(tok, fmt);
  std::size_t pos = 0;
  const double v = std::stod(tok, &pos);
  if (pos != tok.size()) throw std::invalid_argument("cannot parse operand '" + tok + "'");
  return fp_encode(v, fmt);
}

std::string hex_word(const FixedWord& w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%0*llx", (w.width + 3) / 4,
                static_cast<unsigned long long>(w.raw()));
  return buf;
}

std::string sigma_string(const SigmaVector& s) {
  std::string out;
  for (auto d : s.dirs) out += d > 0 ? '+' : '-';
  return out;
}

SigmaVector parse_sigma(const std::string& s) {
  SigmaVector v;
  for (char c : s) {
    if (c == '+' || c == '1')
      v.dirs.push_back(1);
    else if (c == '-' || c == '0')
      v.dirs.push_back(-1);
    else
      throw std::invalid_argument("sigma string must use + - or 1 0");
  }
  return v;
}

RealMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) row.push_back(std::strtod(tok.c_str(), nullptr));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty matrix in " + path);
  const std::size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw std::runtime_error("ragged matrix in " + path);
  RealMatrix m(static_cast<int>(rows.size()), static_cast<int>(cols));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_matrix_csv(const std::string& path, const RealMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[64];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf << (j + 1 < m.cols() ? "," : "");
    }
    out << '\n';
  }
}

int cmd_convert(const UnitFlags& flags, const std::string& xs, const std::string& ys) {
  const GivensUnitConfig cfg = build_config(flags);
  const FpValue x = parse_operand(xs, cfg.fmt);
  const FpValue y = parse_operand(ys, cfg.fmt);
  const BlockFpPair pair = input_convert(x, y, cfg.conv);
  std::printf("x     = %s  (%.17g)\n", x.bit_string().c_str(), fp_decode_f64(x));
  std::printf("y     = %s  (%.17g)\n", y.bit_string().c_str(), fp_decode_f64(y));
  std::printf("x_fix = %s  (%.17g)\n", hex_word(pair.x_fix).c_str(), pair.x_fix.value_f64());
  std::printf("y_fix = %s  (%.17g)\n", hex_word(pair.y_fix).c_str(), pair.y_fix.value_f64());
  std::printf("m_exp = %u (unbiased %d)\n", pair.m_exp,
              static_cast<int>(pair.m_exp) - cfg.fmt.bias());
  return 0;
}

int cmd_rotate(const UnitFlags& flags, const std::string& xs, const std::string& ys,
               const std::string& mode, const std::string& sigma_str, bool trace) {
  const GivensUnitConfig cfg = build_config(flags);
  const FpValue x = parse_operand(xs, cfg.fmt);
  const FpValue y = parse_operand(ys, cfg.fmt);
  const bool vector_mode = mode != "rotate";
  std::optional<SigmaVector> sigma;
  if (!vector_mode) {
    if (sigma_str.empty()) throw std::invalid_argument("rotate mode needs --sigma");
    sigma = parse_sigma(sigma_str);
  }

  if (trace) {
    if (!vector_mode)
      throw std::invalid_argument(
          "--trace drives a fresh pipeline, whose direction registers are only "
          "loaded by a vectoring pass; use --mode vector");
    // drive the pipeline cycle by cycle and dump every stage register
    const BlockFpPair pair = input_convert(x, y, cfg.conv);
    GivensPipeline pipe(cfg.rot);
    GivensPipeline::Input in{widen_to_datapath(pair.x_fix, cfg.rot.hub),
                             widen_to_datapath(pair.y_fix, cfg.rot.hub), vector_mode, pair.m_exp};
    std::optional<GivensPipeline::Output> out;
    int cycle = 0;
    std::optional<GivensPipeline::Input> feed = in;
    while (!out) {
      out = pipe.step(feed);
      feed.reset();
      std::string sigmas;
      for (const auto s : pipe.stage_sigma()) sigmas += s == 0 ? '.' : (s > 0 ? '+' : '-');
      std::printf("cycle %2d: sigma=%s", cycle++, sigmas.c_str());
      int idx = 0;
      for (const auto& s : pipe.stages()) {
        if (s.valid)
          std::printf("  [stage %d <- x=%s y=%s]", idx, hex_word(s.x).c_str(),
                      hex_word(s.y).c_str());
        ++idx;
      }
      std::printf("\n");
    }
  }

  const GivensPairResult res =
      givens_pair(x, y, vector_mode ? GivensMode::kVector : GivensMode::kRotate,
                  sigma ? &*sigma : nullptr, cfg);
  std::printf("x' = %s  (%.17g)\n", res.x.bit_string().c_str(), fp_decode_f64(res.x));
  std::printf("y' = %s  (%.17g)\n", res.y.bit_string().c_str(), fp_decode_f64(res.y));
  if (vector_mode) std::printf("sigma = %s\n", sigma_string(res.sigma).c_str());
  return 0;
}

int cmd_qrd(const UnitFlags& flags, const std::string& in_path, std::string out_r,
            std::string out_q, bool want_q) {
  const GivensUnitConfig cfg = build_config(flags);
  const RealMatrix a = read_matrix_csv(in_path);
  FpMatrix enc(a.rows(), a.cols(), FpValue::zero(cfg.fmt));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) enc(i, j) = fp_encode(a(i, j), cfg.fmt);
  const QrResult qr = qr_decompose(enc, cfg, want_q);

  RealMatrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = fp_decode_f64(qr.r(i, j));
  if (out_r.empty()) out_r = "R.csv";
  write_matrix_csv(out_r, r);
  if (want_q) {
    RealMatrix q(a.rows(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.rows(); ++j) q(i, j) = fp_decode_f64((*qr.q)(i, j));
    if (out_q.empty()) out_q = "Q.csv";
    write_matrix_csv(out_q, q);
    const SnrSample snr = snr_db(a, mat_mul(q, r));
    if (snr.exact)
      std::printf("snr_db = exact\n");
    else
      std::printf("snr_db = %.4f\n", snr.db);
    std::printf("wrote %s, %s\n", out_r.c_str(), out_q.c_str());
  } else {
    std::printf("wrote %s\n", out_r.c_str());
  }
  return 0;
}

int cmd_cycles(const UnitFlags& flags, int rows, int cols, bool want_q, double freq) {
  const GivensUnitConfig cfg = build_config(flags);
  const CycleReport rep = schedule_cycles(rows, cols, want_q, cfg);
  std::string json = to_json(rep);
  if (freq > 0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, ",\n  \"throughput_mops\": %.4f\n}",
                  throughput_mops(rep, freq));
    json.replace(json.rfind('\n'), std::string::npos, buf);
  }
  std::printf("%s\n", json.c_str());
  return 0;
}

int cmd_sweep(const std::string& manifest_path, const std::string& out_path, const UnitFlags& flags,
              std::uint64_t seed, int trials, int r_min, int r_max, int threads) {
  ExperimentSpec spec;
  if (!manifest_path.empty()) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open " + manifest_path);
    std::stringstream ss;
    ss << in.rdbuf();
    spec = spec_from_json(ss.str());
    if (threads > 0) spec.threads = threads;
  } else {
    spec.trials = trials;
    spec.seed = seed;
    spec.threads = threads;
    for (int r = r_min; r <= r_max; ++r) spec.r_values.push_back(r);
    ExperimentConfig cfg;
    cfg.engine = Engine::kUnit;
    cfg.unit = build_config(flags);
    cfg.id = approach_name(cfg) + "-n" + std::to_string(cfg.unit.rot.n) + "-p" +
             std::to_string(cfg.unit.rot.iterations);
    spec.configs.push_back(cfg);
  }
  const std::vector<SweepRow> rows = run_sweep(spec);
  if (out_path.empty() || out_path == "-") {
    write_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    write_csv(out, rows);
    std::printf("wrote %s (%zu rows)\n", out_path.c_str(), rows.size());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bit-accurate model of a CORDIC floating-point Givens rotation unit"};
  app.require_subcommand(1);

  UnitFlags flags;

  auto* convert = app.add_subcommand("convert", "Run the input converter on one FP pair");
  std::string cx, cy;
  add_unit_flags(convert, &flags);
  convert->add_option("x", cx, "X operand (decimal, 0x bit pattern, or s|e|f)")->required();
  convert->add_option("y", cy, "Y operand")->required();

  auto* rotate = app.add_subcommand("rotate", "Run one Givens pair through the full unit");
  std::string rx, ry, rmode = "vector", rsigma;
  bool rtrace = false;
  add_unit_flags(rotate, &flags);
  rotate->add_option("x", rx)->required();
  rotate->add_option("y", ry)->required();
  rotate->add_option("--mode", rmode)->check(CLI::IsMember({"vector", "rotate"}));
  rotate->add_option("--sigma", rsigma, "Direction string for rotate mode, e.g. +-+-");
  rotate->add_flag("--trace", rtrace, "Dump pipeline stage registers per cycle");

  auto* qrd = app.add_subcommand("qrd", "QR-decompose a CSV matrix with the modeled unit");
  std::string qin, qout_r, qout_q;
  bool qno_q = false;
  add_unit_flags(qrd, &flags);
  qrd->add_option("--in", qin, "Input matrix CSV")->required();
  qrd->add_option("--out-r", qout_r, "Output CSV for R (default R.csv)");
  qrd->add_option("--out-q", qout_q, "Output CSV for Q (default Q.csv)");
  qrd->add_flag("--no-q", qno_q, "Skip the Q computation");

  auto* cycles = app.add_subcommand("cycles", "Print the cycle report as JSON");
  int crows = 4, ccols = 4;
  bool cno_q = false;
  double cfreq = 0.0;
  add_unit_flags(cycles, &flags);
  cycles->add_option("--rows", crows);
  cycles->add_option("--cols", ccols);
  cycles->add_flag("--no-q", cno_q);
  cycles->add_option("--freq", cfreq, "Clock in MHz; adds throughput to the report");

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo SNR sweep, CSV out");
  std::string sin, sout;
  std::uint64_t sseed = 1;
  int strials = 1000, sr_min = 1, sr_max = 20, sthreads = 1;
  add_unit_flags(sweep, &flags);
  sweep->add_option("--in", sin, "JSON experiment manifest (flags are used when absent)");
  sweep->add_option("--out", sout, "Output CSV path (default stdout)");
  sweep->add_option("--seed", sseed);
  sweep->add_option("--trials", strials);
  sweep->add_option("--r-min", sr_min);
  sweep->add_option("--r-max", sr_max);
  sweep->add_option("--threads", sthreads, "0 = hardware concurrency");

  auto* selftest = app.add_subcommand("selftest", "Exhaustive small-width invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (convert->parsed()) return cmd_convert(flags, cx, cy);
    if (rotate->parsed()) return cmd_rotate(flags, rx, ry, rmode, rsigma, rtrace);
    if (qrd->parsed()) return cmd_qrd(flags, qin, qout_r, qout_q, !qno_q);
    if (cycles->parsed()) return cmd_cycles(flags, crows, ccols, !cno_q, cfreq);
    if (sweep->parsed())
      return cmd_sweep(sin, sout, flags, sseed, strials, sr_min, sr_max, sthreads);
    if (selftest->parsed()) return givens::verify::run_all(std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
