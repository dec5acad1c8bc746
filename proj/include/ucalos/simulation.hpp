// SPDX-License-Identifier: Apache-2.0
//
// ucalos: line-of-sight MIMO link simulator for uniform circular arrays
// Copyright (C) 2026 The ucalos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "channel.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "modem.hpp"
#include "rng.hpp"
#include "transform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace ucalos {

// ----- Noise ---------------------------------------------------------------

// n i.i.d. circularly-symmetric complex Gaussian samples of total variance
// omega2 (omega2/2 per real dimension).
template <class Urbg>
CVector sample_noise(std::size_t n, double omega2, Urbg &gen) {
  if (!(omega2 >= 0.0) || !std::isfinite(omega2))
    throw ArgumentError("sample_noise: variance must be finite and >= 0");
  CVector z(n);
  if (omega2 == 0.0)
    return z;
  std::normal_distribution<double> normal(0.0, std::sqrt(omega2 / 2.0));
  for (auto &v : z) {
    const double re = normal(gen);
    const double im = normal(gen);
    v = {re, im};
  }
  return z;
}

// Per-receive-antenna noise variance for a given SNR, SNR = es / omega2
inline double noise_variance_for_snr(double snr_db, double es = 1.0) { return es / std::pow(10.0, snr_db / 10.0); }

// ----- Theoretical BER -----------------------------------------------------

enum class BerForm {
  Coherent, // 1/N sum 1/2 erfc(sqrt(|H_l|^2 es / omega2))
  Literal,  // 1/N sum 1/2 erfc(|H_l|^2 es / (N omega2)), the expression as printed
};

// BPSK error probability averaged over the N diagonalized subchannels
inline double theoretical_ber_bpsk(const SubchannelGains &g, double omega2, double es = 1.0,
                                   BerForm form = BerForm::Coherent) {
  if (!(omega2 > 0.0))
    throw ArgumentError("theoretical_ber_bpsk: noise variance must be > 0");
  if (g.values.empty())
    throw ArgumentError("theoretical_ber_bpsk: no subchannels");
  const double N = static_cast<double>(g.size());
  double acc = 0.0;
  for (const auto &h : g.values) {
    const double arg = form == BerForm::Coherent ? std::sqrt(std::norm(h) * es / omega2) : std::norm(h) * es / (N * omega2);
    acc += 0.5 * std::erfc(arg);
  }
  return acc / N;
}

// ----- Complexity ----------------------------------------------------------

enum class Scheme { BeamformedFast, BeamformedExhaustive, TraditionalExhaustive };

inline std::string_view to_string(Scheme s) noexcept {
  switch (s) {
  case Scheme::BeamformedFast:
    return "beamformed-fast";
  case Scheme::BeamformedExhaustive:
    return "beamformed-exhaustive";
  case Scheme::TraditionalExhaustive:
    return "traditional-exhaustive";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view s) {
  for (Scheme v : {Scheme::BeamformedFast, Scheme::BeamformedExhaustive, Scheme::TraditionalExhaustive})
    if (s == to_string(v))
      return v;
  throw ArgumentError("unknown scheme '" + std::string(s) +
                      "' (expected beamformed-fast, beamformed-exhaustive or traditional-exhaustive)");
}

enum class DetectorKind { FastSymbolWise, TraditionalMl };

inline std::string_view to_string(DetectorKind k) noexcept {
  return k == DetectorKind::FastSymbolWise ? "fast-symbol-wise-ml" : "traditional-ml";
}

struct ComplexityReport {
  DetectorKind detector;
  std::uint64_t N;
  std::uint64_t K;
  std::uint64_t complex_additions;
  std::uint64_t complex_multiplications;

  friend bool operator==(const ComplexityReport &, const ComplexityReport &) = default;
};

namespace detail {
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw CapacityError("operation count overflows 64 bits");
  return r;
}
inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw CapacityError("operation count overflows 64 bits");
  return r;
}
} // namespace detail

// Closed-form per-vector operation counts.
//   fast:        N log2 N + N K additions,  (N/2) log2 N + N K multiplications
//   traditional: N^2 K^N additions,         (N^2 + N) K^N multiplications
inline ComplexityReport complexity_report(DetectorKind kind, std::uint64_t N, std::uint64_t K) {
  using detail::checked_add;
  using detail::checked_mul;
  if (N < 1)
    throw ArgumentError("complexity: N must be >= 1");
  if (K < 2)
    throw ArgumentError("complexity: K must be >= 2");
  ComplexityReport r{kind, N, K, 0, 0};
  if (kind == DetectorKind::FastSymbolWise) {
    if (!is_power_of_two(N))
      throw ArgumentError("complexity: fast symbol-wise count needs a power-of-two N, got " + std::to_string(N));
    const auto log2n = static_cast<std::uint64_t>(std::countr_zero(N));
    const std::uint64_t nk = checked_mul(N, K);
    r.complex_additions = checked_add(checked_mul(N, log2n), nk);
    r.complex_multiplications = checked_add(checked_mul(N / 2, log2n), nk);
  } else {
    std::uint64_t kn = 1;
    for (std::uint64_t i = 0; i < N; ++i)
      kn = checked_mul(kn, K);
    r.complex_additions = checked_mul(checked_mul(N, N), kn);
    r.complex_multiplications = checked_mul(checked_add(checked_mul(N, N), N), kn);
  }
  return r;
}

// ----- Monte Carlo BER -----------------------------------------------------

struct EarlyStop {
  bool enabled = true;
  std::uint64_t min_errors = 500;
  std::uint64_t min_trials = 10'000;
};

struct SimulationConfig {
  UcaGeometry geometry{UcaParams{}};
  std::string constellation = "bpsk";
  std::vector<double> snr_db;
  std::uint64_t trials_per_point = 0; // upper bound when early stopping is on
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::BeamformedFast;
  EarlyStop early_stop;
  unsigned workers = 1;
  std::uint64_t block_trials = 1024; // trials per substream; fixes the work partition
};

struct BerPoint {
  double snr_db;
  double omega2;
  std::uint64_t trials;
  std::uint64_t bits;
  std::uint64_t errors;
  double ber_empirical;
  std::optional<double> ber_theoretical;        // coherent BPSK form, BPSK on square channels only
  std::optional<double> ber_theoretical_literal; // as-printed form, same availability
};

struct BerResult {
  Scheme scheme;
  std::uint64_t seed;
  std::vector<BerPoint> points;
};

// Substream ids below (seed, snr_index, block_index)
inline constexpr std::uint64_t bit_stream_id = 0;
inline constexpr std::uint64_t noise_stream_id = 1;

namespace detail {

struct LinkContext {
  const CMatrix &H;
  const Constellation &c;
  Scheme scheme;
  std::optional<SubchannelGains> gains;
  std::optional<ExhaustiveDetector> exhaustive;
};

struct BlockTally {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
};

inline BlockTally simulate_block(const LinkContext &ctx, std::uint64_t seed, std::uint64_t snr_index,
                                 std::uint64_t block_index, std::uint64_t trials, double omega2) {
  rng::CounterRng bit_rng(rng::substream_key(seed, {snr_index, block_index, bit_stream_id}));
  rng::CounterRng noise_rng(rng::substream_key(seed, {snr_index, block_index, noise_stream_id}));
  const std::size_t N = ctx.H.cols();
  const int b = ctx.c.bits_per_symbol();
  const auto labels = ctx.c.labels();

  std::uint64_t word = 0;
  int word_bits = 0;
  auto next_label = [&]() {
    if (word_bits < b) {
      word = bit_rng();
      word_bits = 64;
    }
    const auto label = static_cast<std::uint32_t>(word & ((1u << b) - 1u));
    word >>= b;
    word_bits -= b;
    return label;
  };

  BlockTally tally;
  std::vector<std::size_t> sent(N);
  SymbolVector s{SymbolRole::Information, CVector(N)};
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (std::size_t n = 0; n < N; ++n) {
      sent[n] = ctx.c.index_of_label(next_label());
      s.values[n] = ctx.c.point(sent[n]);
    }
    const SymbolVector x = ctx.scheme == Scheme::TraditionalExhaustive ? modulate_direct(s) : modulate_beamformed(s);
    const CVector z = sample_noise(ctx.H.rows(), omega2, noise_rng);
    const SymbolVector y = receive(ctx.H, x, z);
    const Detection det = ctx.scheme == Scheme::BeamformedFast ? detect_fast(y, *ctx.gains, ctx.c)
                                                               : ctx.exhaustive->detect(y);
    for (std::size_t n = 0; n < N; ++n)
      tally.errors += static_cast<std::uint64_t>(std::popcount(labels[sent[n]] ^ labels[det.indices[n]]));
    ++tally.trials;
  }
  return tally;
}

} // namespace detail

// Results depend only on (config minus workers): trials are cut into fixed
// blocks, each with its own substreams, and blocks are folded in order.
inline BerResult run_ber(const SimulationConfig &cfg) {
  if (cfg.snr_db.empty())
    throw ArgumentError("run_ber: SNR grid is empty");
  if (cfg.trials_per_point < 1)
    throw ArgumentError("run_ber: trials per point must be >= 1");
  if (cfg.block_trials < 1)
    throw ArgumentError("run_ber: block size must be >= 1");
  const Constellation c = Constellation::by_name(cfg.constellation);
  const ChannelMatrix H = build_channel(cfg.geometry);
  const bool beamformed = cfg.scheme != Scheme::TraditionalExhaustive;
  if (beamformed && !H.square())
    throw ArgumentError("run_ber: beamformed schemes need equal transmit and receive antenna counts");

  detail::LinkContext ctx{H.gains, c, cfg.scheme, std::nullopt, std::nullopt};
  if (H.square())
    ctx.gains = subchannel_gains(H);
  if (cfg.scheme != Scheme::BeamformedFast)
    ctx.exhaustive.emplace(H.gains, c,
                           cfg.scheme == Scheme::BeamformedExhaustive ? TransmitMapping::Beamformed
                                                                      : TransmitMapping::Direct);

  const std::uint64_t bits_per_trial = H.cols() * static_cast<std::uint64_t>(c.bits_per_symbol());
  const std::uint64_t n_blocks = (cfg.trials_per_point + cfg.block_trials - 1) / cfg.block_trials;
  const unsigned workers = std::max(1u, cfg.workers);

  BerResult result{cfg.scheme, cfg.seed, {}};
  for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
    const double omega2 = noise_variance_for_snr(cfg.snr_db[si]);
    detail::BlockTally total;
    bool stop = false;
    for (std::uint64_t first = 0; first < n_blocks && !stop; first += workers) {
      const std::uint64_t wave = std::min<std::uint64_t>(workers, n_blocks - first);
      std::vector<detail::BlockTally> tallies(wave);
      auto run_one = [&](std::uint64_t i) {
        const std::uint64_t block = first + i;
        const std::uint64_t begin = block * cfg.block_trials;
        const std::uint64_t count = std::min(cfg.block_trials, cfg.trials_per_point - begin);
        tallies[i] = detail::simulate_block(ctx, cfg.seed, si, block, count, omega2);
      };
      if (wave == 1) {
        run_one(0);
      } else {
        std::vector<std::jthread> pool;
        pool.reserve(wave);
        for (std::uint64_t i = 0; i < wave; ++i)
          pool.emplace_back(run_one, i);
      }
      for (const auto &t : tallies) {
        total.trials += t.trials;
        total.errors += t.errors;
        if (cfg.early_stop.enabled && total.errors >= cfg.early_stop.min_errors &&
            total.trials >= cfg.early_stop.min_trials) {
          stop = true;
          break;
        }
      }
    }
    BerPoint p{cfg.snr_db[si], omega2, total.trials, total.trials * bits_per_trial, total.errors, 0.0, {}, {}};
    p.ber_empirical = static_cast<double>(p.errors) / static_cast<double>(p.bits);
    if (ctx.gains && c.name() == "bpsk") {
      p.ber_theoretical = theoretical_ber_bpsk(*ctx.gains, omega2, 1.0, BerForm::Coherent);
      p.ber_theoretical_literal = theoretical_ber_bpsk(*ctx.gains, omega2, 1.0, BerForm::Literal);
    }
    result.points.push_back(p);
  }
  return result;
}

// ----- Statistics ----------------------------------------------------------

inline constexpr double z_99 = 2.5758293035489004;
inline constexpr double z_999 = 3.2905267314918945;

struct Interval {
  double lo, hi;
  bool contains(double v) const noexcept { return lo <= v && v <= hi; }
  bool overlaps(const Interval &o) const noexcept { return lo <= o.hi && o.lo <= hi; }
};

// Wilson score interval for a binomial proportion
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = z_99) {
  if (n == 0)
    throw ArgumentError("wilson_interval: no trials");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

} // namespace ucalos
