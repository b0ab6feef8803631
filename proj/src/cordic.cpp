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

#include "givens/cordic.hpp"

#include <map>
#include <stdexcept>

namespace givens {

namespace mp = boost::multiprecision;

void validate(const RotatorConfig& cfg) {
  if (cfg.n < 4 || cfg.n > 60) throw std::invalid_argument("RotatorConfig: n out of range");
  if (cfg.iterations < 1 || cfg.iterations > cfg.n - 2)
    throw std::invalid_argument("RotatorConfig: iterations must be in [1, n-2]");
}

FixedWord widen_to_datapath(const FixedWord& w, bool hub) {
  return FixedWord::make(w.bits, w.width + 2, w.frac_bits, hub);
}

FixedWord narrow_from_datapath(const FixedWord& w) {
  const int n = w.width - 2;
  const std::int64_t hi = std::int64_t{1} << (n - 1);
  if (w.bits >= hi || w.bits < -hi)
    throw std::overflow_error("narrow_from_datapath: value exceeds converter range");
  return FixedWord::make(w.bits, n, w.frac_bits, w.hub);
}

namespace {

/// a + sigma-selected shifted operand, hub flavor: the negation is a bitwise
/// inversion of the operand and the carry-in takes the operand bit shifted
/// just below the kept window ((stage-1)th bit); at stage 0 that bit is the
/// ILSB, a constant one.
std::int64_t hub_add_shifted(std::int64_t acc, std::int64_t operand, bool subtract, int stage) {
  const std::int64_t o = subtract ? ~operand : operand;
  const std::int64_t carry = (stage == 0) ? 1 : ((o >> (stage - 1)) & 1);
  return acc + (o >> stage) + carry;
}

std::int64_t check_width(std::int64_t bits, int width) {
  const std::int64_t hi = std::int64_t{1} << (width - 1);
  if (bits >= hi || bits < -hi)
    throw std::overflow_error("microrotate: datapath overflow (input out of contract)");
  return bits;
}

int sigma_from_signs(std::int64_t x_bits, std::int64_t y_bits) {
  // Rotate toward the x axis: the direction is fixed by the two sign bits.
  return ((x_bits < 0) == (y_bits < 0)) ? -1 : +1;
}

}  // namespace

std::pair<FixedWord, FixedWord> microrotate(const FixedWord& x, const FixedWord& y, int stage,
                                            int sigma, bool hub) {
  if (x.width != y.width || x.frac_bits != y.frac_bits)
    throw std::invalid_argument("microrotate: mismatched operand layout");
  if (stage < 0 || stage >= x.width) throw std::invalid_argument("microrotate: bad stage index");
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("microrotate: sigma must be +-1");

  std::int64_t xn;
  std::int64_t yn;
  if (hub) {
    xn = hub_add_shifted(x.bits, y.bits, /*subtract=*/sigma > 0, stage);
    yn = hub_add_shifted(y.bits, x.bits, /*subtract=*/sigma < 0, stage);
  } else {
    const std::int64_t xs = x.bits >> stage;
    const std::int64_t ys = y.bits >> stage;
    xn = x.bits - sigma * ys;
    yn = y.bits + sigma * xs;
  }
  check_width(xn, x.width);
  check_width(yn, y.width);
  return {FixedWord{xn, x.width, x.frac_bits, x.hub}, FixedWord{yn, y.width, y.frac_bits, y.hub}};
}

VectoringResult vectoring(FixedWord x, FixedWord y, const RotatorConfig& cfg) {
  validate(cfg);
  VectoringResult res;
  res.sigma.dirs.reserve(cfg.iterations);
  for (int i = 0; i < cfg.iterations; ++i) {
    const int sigma = sigma_from_signs(x.bits, y.bits);
    res.sigma.dirs.push_back(static_cast<std::int8_t>(sigma));
    std::tie(x, y) = microrotate(x, y, i, sigma, cfg.hub);
  }
  res.x = x;
  res.y = y;
  return res;
}

std::pair<FixedWord, FixedWord> rotate(FixedWord x, FixedWord y, const SigmaVector& sigma,
                                       const RotatorConfig& cfg) {
  validate(cfg);
  if (sigma.size() != static_cast<std::size_t>(cfg.iterations))
    throw std::invalid_argument("rotate: sigma length does not match the iteration count");
  for (int i = 0; i < cfg.iterations; ++i) {
    std::tie(x, y) = microrotate(x, y, i, sigma.dirs[static_cast<std::size_t>(i)], cfg.hub);
  }
  return {x, y};
}

namespace {

/// Product of (4^i + 1) for i < p; K_p^2 = gain_sq_num(p) / 4^(p(p-1)/2).
BigInt gain_sq_num(int p) {
  BigInt acc = 1;
  for (int i = 0; i < p; ++i) acc *= (BigInt(1) << (2 * i)) + 1;
  return acc;
}

}  // namespace

ExactReal scale_factor(int p) {
  if (p < 1) throw std::invalid_argument("scale_factor: p must be positive");
  constexpr int kFracBits = 96;
  const std::int64_t half_denom = std::int64_t{p} * (p - 1) / 2;
  const BigInt root = mp::sqrt(gain_sq_num(p) << (2 * kFracBits));
  return ExactReal::scaled(root, -kFracBits - half_denom);
}

double scale_factor_f64(int p) { return scale_factor(p).to_double(); }

std::int64_t compensation_constant(int p, int width) {
  if (p < 1) throw std::invalid_argument("compensation_constant: p must be positive");
  if (width < 2 || width > 62) throw std::invalid_argument("compensation_constant: bad width");
  // round(2^width / K_p) = round(2^(width + p(p-1)/2) / sqrt(num))
  constexpr unsigned kGuard = 64;
  const std::int64_t half_denom = std::int64_t{p} * (p - 1) / 2;
  const BigInt num = gain_sq_num(p);
  const BigInt s2 = BigInt(1) << static_cast<unsigned>(2 * (width + half_denom) + 2 * kGuard);
  const BigInt quotient = s2 / num;
  const BigInt scaled_root = mp::sqrt(quotient);
  const BigInt rounded = (scaled_root + (BigInt(1) << (kGuard - 1))) >> kGuard;
  return rounded.convert_to<std::int64_t>();
}

FixedWord compensate_scale(const FixedWord& w, const RotatorConfig& cfg) {
  validate(cfg);
  if (w.width != cfg.width()) throw std::invalid_argument("compensate_scale: not a datapath word");

  thread_local std::map<std::pair<int, int>, std::int64_t> cache;
  const auto key = std::make_pair(cfg.iterations, cfg.width());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compensation_constant(key.first, key.second)).first;
  const std::int64_t c = it->second;

  std::int64_t bits;
  if (cfg.hub) {
    const __int128 prod = (static_cast<__int128>(w.bits) * 2 + 1) * c;
    bits = static_cast<std::int64_t>(prod >> (cfg.width() + 1));
  } else {
    const __int128 prod = static_cast<__int128>(w.bits) * c;
    bits = static_cast<std::int64_t>(prod >> cfg.width());
  }
  return FixedWord::make(bits, w.width, w.frac_bits, w.hub);
}

GivensPipeline::GivensPipeline(const RotatorConfig& cfg) : cfg_(cfg) {
  validate(cfg_);
  slots_.resize(static_cast<std::size_t>(cfg_.iterations));
  sigma_.assign(static_cast<std::size_t>(cfg_.iterations), 0);
}

std::optional<GivensPipeline::Output> GivensPipeline::step(const std::optional<Input>& in) {
  const int p = cfg_.iterations;

  // Stage i consumes the datum waiting in slot i; a vectoring datum latches
  // the stage's sigma register, a rotation datum replays it.
  auto apply_stage = [&](int i, StageState& s) {
    const auto idx = static_cast<std::size_t>(i);
    int sigma;
    if (s.vectoring) {
      sigma = sigma_from_signs(s.x.bits, s.y.bits);
      sigma_[idx] = static_cast<std::int8_t>(sigma);
    } else {
      if (sigma_[idx] == 0)
        throw std::logic_error("GivensPipeline: rotation reached a stage with no latched direction");
      sigma = sigma_[idx];
    }
    std::tie(s.x, s.y) = microrotate(s.x, s.y, i, sigma, cfg_.hub);
  };

  std::optional<Output> out;
  {
    StageState last = slots_[static_cast<std::size_t>(p - 1)];
    if (last.valid) {
      apply_stage(p - 1, last);
      out = Output{last.x, last.y, last.vectoring, last.m_exp};
    }
  }
  for (int i = p - 1; i > 0; --i) {
    StageState s = slots_[static_cast<std::size_t>(i - 1)];
    if (s.valid) apply_stage(i - 1, s);
    slots_[static_cast<std::size_t>(i)] = s;
  }
  StageState head{};
  if (in) {
    head.valid = true;
    head.vectoring = in->vectoring;
    head.x = in->x;
    head.y = in->y;
    head.m_exp = in->m_exp;
  }
  slots_[0] = head;
  return out;
}

}  // namespace givens
