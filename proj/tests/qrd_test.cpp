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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "givens/analysis.hpp"
#include "givens/qrd.hpp"
#include "oracles.hpp"

using namespace givens;

namespace {

FpMatrix encode_matrix(const RealMatrix& a, const FpFormat& fmt) {
  FpMatrix m(a.rows(), a.cols(), FpValue::zero(fmt));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = fp_encode(a(i, j), fmt);
  return m;
}

RealMatrix decode_matrix(const FpMatrix& m) {
  RealMatrix a(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) a(i, j) = fp_decode_f64(m(i, j));
  return a;
}

}  // namespace

TEST_CASE("a 3-4-5 vectoring through the full unit") {
  const GivensUnitConfig cfg = make_unit_config(FpFormat::single(true));
  const FpValue x = fp_encode(3.0, cfg.fmt);
  const FpValue y = fp_encode(4.0, cfg.fmt);
  const GivensPairResult r = givens_pair(x, y, GivensMode::kVector, nullptr, cfg);
  CHECK(r.sigma.size() == 24);
  CHECK(fp_decode_f64(r.x) == doctest::Approx(5.0).epsilon(1e-5));
  CHECK(std::fabs(fp_decode_f64(r.y)) <= 5.0 * std::ldexp(1.0, -20));
}

TEST_CASE("vectoring an on-axis pair keeps the value") {
  GivensUnitConfig cfg = make_unit_config(FpFormat::single(true));
  cfg.conv.hub_detect_identity = false;
  const FpValue x = fp_encode(2.71828182, cfg.fmt);
  const GivensPairResult r =
      givens_pair(x, FpValue::zero(cfg.fmt), GivensMode::kVector, nullptr, cfg);
  CHECK(fp_decode_f64(r.x) == doctest::Approx(fp_decode_f64(x)).epsilon(1e-5));
}

TEST_CASE("rotation by the captured directions reproduces the vectoring pair") {
  std::mt19937_64 rng(555);
  for (const bool hub : {false, true}) {
    const GivensUnitConfig cfg = make_unit_config(FpFormat::single(hub));
    for (int t = 0; t < 100; ++t) {
      const FpValue x = testing::random_fp(rng, cfg.fmt, 10);
      const FpValue y = testing::random_fp(rng, cfg.fmt, 10);
      const GivensPairResult v = givens_pair(x, y, GivensMode::kVector, nullptr, cfg);
      const GivensPairResult r = givens_pair(x, y, GivensMode::kRotate, &v.sigma, cfg);
      CHECK(r.x == v.x);
      CHECK(r.y == v.y);
    }
  }
}

TEST_CASE("identity decomposes to exactly identity") {
  const GivensUnitConfig cfg = make_unit_config(FpFormat::single(true));
  RealMatrix eye(4, 4, 0.0);
  for (int i = 0; i < 4; ++i) eye(i, i) = 1.0;
  const QrResult qr = qr_decompose(encode_matrix(eye, cfg.fmt), cfg, true);
  const FpValue one = fp_encode(1.0, cfg.fmt);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) {
        CHECK(qr.r(i, j) == one);
        CHECK((*qr.q)(i, j) == one);
      } else {
        CHECK(qr.r(i, j).is_zero);
        CHECK((*qr.q)(i, j).is_zero);
      }
    }
  }
}

TEST_CASE("a diagonal matrix passes through untouched") {
  const GivensUnitConfig cfg = make_unit_config(FpFormat::single(true));
  RealMatrix d(4, 4, 0.0);
  d(0, 0) = 1.5;
  d(1, 1) = 2.5;
  d(2, 2) = -3.25;
  d(3, 3) = 0.5;
  const FpMatrix enc = encode_matrix(d, cfg.fmt);
  const QrResult qr = qr_decompose(enc, cfg, true);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(qr.r(i, j) == enc(i, j));
      if (i != j) CHECK((*qr.q)(i, j).is_zero);
    }
}

TEST_CASE("r is exactly upper triangular and the factors reproduce the input") {
  std::mt19937_64 rng(9001);
  for (const bool hub : {false, true}) {
    const GivensUnitConfig cfg = make_unit_config(FpFormat::single(hub));
    for (int t = 0; t < 30; ++t) {
      std::mt19937_64 gen(rng());
      const RealMatrix a = gen_matrix(4, 4, 6, gen);
      const QrResult qr = qr_decompose(encode_matrix(a, cfg.fmt), cfg, true);
      for (int i = 1; i < 4; ++i)
        for (int j = 0; j < i; ++j) CHECK(qr.r(i, j).is_zero);
      const SnrSample snr = snr_db(a, mat_mul(decode_matrix(*qr.q), decode_matrix(qr.r)));
      CHECK((snr.exact || snr.db >= 118.0));
    }
  }
}

TEST_CASE("q rows stay orthonormal within the stated bound") {
  std::mt19937_64 rng(77077);
  GivensUnitConfig cfg = make_unit_config(FpFormat::single(true));
  cfg.conv.hub_unbiased_extension = true;
  cfg.conv.hub_output_unbiased = true;
  const double bound = 16.0 * std::ldexp(1.0, -23);
  for (int t = 0; t < 100; ++t) {
    std::mt19937_64 gen(rng());
    const RealMatrix a = gen_matrix(4, 4, 8, gen);
    const QrResult qr = qr_decompose(encode_matrix(a, cfg.fmt), cfg, true);
    const RealMatrix q = decode_matrix(*qr.q);
    const RealMatrix qtq = mat_mul(transpose(q), q);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double want = i == j ? 1.0 : 0.0;
        CHECK(std::fabs(qtq(i, j) - want) <= bound);
      }
  }
}

TEST_CASE("pure fixed-point decomposition against the software oracle") {
  const int n = 32;
  GivensUnitConfig cfg;
  cfg.pure_fixed = true;
  cfg.conv.n = n;
  cfg.rot = RotatorConfig{n, 27, false, true};
  std::mt19937_64 rng(31415);
  for (int t = 0; t < 20; ++t) {
    std::mt19937_64 gen(rng());
    const RealMatrix a = gen_matrix(4, 4, 2, gen);
    // scale so everything fits the s1.30 layout with rotation growth
    FixedMatrix enc(4, 4, FixedWord::make(0, n, n - 2, false));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        enc(i, j) = FixedWord::make(std::llrint(std::ldexp(a(i, j), (n - 2) - 4)), n, n - 2, false);
    const FixedQrResult qr = qr_decompose_fixed(enc, cfg, true);
    RealMatrix q(4, 4), r(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        q(i, j) = (*qr.q)(i, j).value_f64();
        r(i, j) = std::ldexp(qr.r(i, j).value_f64(), 4);
      }
    const SnrSample snr = snr_db(a, mat_mul(q, r));
    CHECK((snr.exact || snr.db >= 120.0));
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < i; ++j) CHECK(qr.r(i, j).bits == 0);
  }
}

TEST_CASE("cycle accounting") {
  GivensUnitConfig dbl = make_unit_config(FpFormat::dbl(true));
  dbl.conv.n = 57;
  dbl.rot.n = 57;
  dbl.rot.iterations = 55;
  const CycleReport rep = schedule_cycles(4, 4, true, dbl);
  CHECK(rep.latency_cycles == 60);
  CHECK(rep.initiation_interval_cycles == 8);
  CHECK(rep.rotations_count == 6);
  CHECK(rep.total_cycles == 60 + 5 * 8);
  CHECK(throughput_mops(rep, 255.8) == doctest::Approx(31.975).epsilon(1e-12));

  GivensUnitConfig fix;
  fix.pure_fixed = true;
  fix.conv.n = 32;
  fix.rot = RotatorConfig{32, 27, false, true};
  const CycleReport fr = schedule_cycles(4, 4, false, fix);
  CHECK(fr.latency_cycles == 27);
  CHECK(fr.initiation_interval_cycles == 4);

  const std::string json = to_json(rep);
  CHECK(json.find("\"latency_cycles\": 60") != std::string::npos);
  CHECK(json.find("\"initiation_interval_cycles\": 8") != std::string::npos);
}

TEST_CASE("configuration validation") {
  GivensUnitConfig cfg = make_unit_config(FpFormat::single(true));
  cfg.rot.n = 27;  // now differs from conv.n
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = make_unit_config(FpFormat::single(true));
  cfg.rot.iterations = 25;  // above n-2
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

  const FpValue x = fp_encode(1.0, FpFormat::single(true));
  CHECK_THROWS_AS((void)givens_pair(x, x, GivensMode::kRotate, nullptr,
                                    make_unit_config(FpFormat::single(true))),
                  std::invalid_argument);
}

TEST_CASE("format mismatch is rejected") {
  const GivensUnitConfig cfg = make_unit_config(FpFormat::single(true));
  FpMatrix m(2, 2, FpValue::zero(FpFormat::half(true)));
  CHECK_THROWS_AS((void)qr_decompose(m, cfg, false), std::invalid_argument);
}

TEST_CASE("the unit works across format presets") {
  for (const FpFormat fmt : {FpFormat::half(false), FpFormat::half(true), FpFormat::dbl(false),
                             FpFormat::dbl(true)}) {
    const GivensUnitConfig cfg = make_unit_config(fmt);
    const FpValue x = fp_encode(3.0, cfg.fmt);
    const FpValue y = fp_encode(4.0, cfg.fmt);
    const GivensPairResult r = givens_pair(x, y, GivensMode::kVector, nullptr, cfg);
    const double tol = fmt.sig_bits >= 23 ? 1e-5 : 2e-2;
    CHECK(fp_decode_f64(r.x) == doctest::Approx(5.0).epsilon(tol));
    CHECK(std::fabs(fp_decode_f64(r.y)) <= 5.0 * std::ldexp(2.0, -cfg.rot.iterations + 1) +
                                               5e2 * std::ldexp(1.0, -(cfg.rot.n - 2)));
    const GivensPairResult rep = givens_pair(x, y, GivensMode::kRotate, &r.sigma, cfg);
    CHECK(rep.x == r.x);
    CHECK(rep.y == r.y);
  }
}

TEST_CASE("narrowing an out-of-range datapath word is an error") {
  const FixedWord wide = FixedWord::make(std::int64_t{3} << 24, 28, 24, false);  // value 3
  CHECK_THROWS_AS((void)narrow_from_datapath(wide), std::overflow_error);
  const FixedWord ok = FixedWord::make((std::int64_t{3} << 24) / 2, 28, 24, false);
  CHECK(narrow_from_datapath(ok).width == 26);
}
