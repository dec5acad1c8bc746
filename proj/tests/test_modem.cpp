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

#include <catch_amalgamated.hpp>

#include "test_support.hpp"

#include <ucalos/modem.hpp>
#include <ucalos/rng.hpp>
#include <ucalos/simulation.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace ucalos;
using Catch::Approx;

namespace {

SymbolVector info(CVector v) { return {SymbolRole::Information, std::move(v)}; }

SymbolVector random_symbols(std::size_t N, const Constellation &c, std::mt19937_64 &gen) {
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  SymbolVector s{SymbolRole::Information, CVector(N)};
  for (auto &v : s.values)
    v = c.point(pick(gen));
  return s;
}

ChannelMatrix aligned_channel(int N, double r_lambda = 4.0, double d_lambda = 12.0) {
  UcaParams p;
  p.wavelength = 0.1;
  p.tx_radius = p.rx_radius = r_lambda * 0.1;
  p.separation = d_lambda * 0.1;
  p.tx_count = p.rx_count = N;
  return build_channel(UcaGeometry(p));
}

// Joint ML written from scratch: explicit W, explicit candidate list
std::vector<std::size_t> brute_force_ml(const CVector &y, const CMatrix &G, const Constellation &c) {
  const std::size_t N = G.cols();
  std::vector<std::size_t> digits(N, 0), best_digits;
  double best = INFINITY;
  std::size_t total = 1;
  for (std::size_t i = 0; i < N; ++i)
    total *= c.size();
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rem = t;
    for (std::size_t n = N; n-- > 0;) {
      digits[n] = rem % c.size();
      rem /= c.size();
    }
    double metric = 0.0;
    for (std::size_t m = 0; m < G.rows(); ++m) {
      cdouble acc = 0.0;
      for (std::size_t n = 0; n < N; ++n)
        acc += G(m, n) * c.point(digits[n]);
      metric += std::norm(y[m] - acc);
    }
    if (metric < best) {
      best = metric;
      best_digits = digits;
    }
  }
  return best_digits;
}

} // namespace

TEST_CASE("constellations", "[modem]") {
  for (const auto &c : {Constellation::bpsk(), Constellation::qpsk()}) {
    double energy = 0.0;
    for (const auto &p : c.points())
      energy += std::norm(p);
    CHECK(energy / double(c.size()) == Approx(1.0).epsilon(1e-15));
    std::set<std::uint32_t> labels(c.labels().begin(), c.labels().end());
    CHECK(labels.size() == c.size());
    CHECK((std::size_t{1} << c.bits_per_symbol()) == c.size());
  }
  // Gray: nearest neighbours differ in one bit
  const auto q = Constellation::qpsk();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j && std::abs(std::abs(q.point(i) - q.point(j)) - std::sqrt(2.0)) < 1e-12)
        CHECK(std::popcount(q.labels()[i] ^ q.labels()[j]) == 1);
  CHECK_THROWS_AS(Constellation::by_name("16qam"), ArgumentError);
}

TEST_CASE("bits_to_symbols / symbols_to_bits", "[modem]") {
  const auto bpsk = Constellation::bpsk();
  const std::vector<std::uint8_t> zero{0}, one{1};
  CHECK(bits_to_symbols(zero, bpsk).values[0] == cdouble(1.0));
  CHECK(bits_to_symbols(one, bpsk).values[0] == cdouble(-1.0));

  std::mt19937_64 gen(4);
  std::bernoulli_distribution coin;
  for (const auto &c : {Constellation::bpsk(), Constellation::qpsk()}) {
    std::vector<std::uint8_t> bits(64);
    for (auto &b : bits)
      b = coin(gen);
    const auto s = bits_to_symbols(bits, c);
    CHECK(s.size() == 64u / c.bits_per_symbol());
    CHECK(symbols_to_bits(s, c) == bits);
  }
  CHECK_THROWS_AS(bits_to_symbols(std::vector<std::uint8_t>(3), Constellation::qpsk()), ArgumentError);
  CHECK_THROWS_AS(symbols_to_bits(info({cdouble(0.5)}), bpsk), ArgumentError);
}

TEST_CASE("modulate_beamformed", "[modem]") {
  SECTION("single symbol spread over four antennas") {
    const cdouble s1(0.6, -0.8);
    const auto x = modulate_beamformed(info({s1, 0.0, 0.0, 0.0}));
    CHECK(x.role == SymbolRole::Transmitted);
    for (const auto &v : x.values)
      CHECK(std::abs(v - s1 / 2.0) < 1e-15);
  }
  SECTION("two-point BPSK") {
    const auto x = modulate_beamformed(info({1.0, -1.0}));
    CHECK(std::abs(x.values[0]) < 1e-15);
    CHECK(std::abs(x.values[1] - std::sqrt(2.0)) < 1e-15);
  }
  SECTION("power preserved and N symbols per channel use") {
    std::mt19937_64 gen(9);
    for (std::size_t N : {1u, 3u, 4u, 8u, 10u}) {
      const auto s = random_symbols(N, Constellation::bpsk(), gen);
      const auto x = modulate_beamformed(s);
      CHECK(x.size() == N);
      CHECK(norm2(x.values) == Approx(norm2(s.values)).epsilon(1e-14));
    }
  }
  SECTION("role is checked") {
    CHECK_THROWS_AS(modulate_beamformed({SymbolRole::Received, CVector(4)}), ArgumentError);
  }
}

TEST_CASE("receive", "[modem]") {
  const CMatrix I = CMatrix::identity(3);
  const SymbolVector x{SymbolRole::Transmitted, {1.0, cdouble(0, 1), -2.0}};
  const CVector zero(3), z{0.1, cdouble(0.2, -0.3), 0.0};
  CHECK(receive(I, x, zero).values == x.values);
  CHECK(receive(I, {SymbolRole::Transmitted, CVector(3)}, z).values == z);

  const auto H = aligned_channel(3);
  const SymbolVector x2{SymbolRole::Transmitted, {cdouble(0.3, 0.1), -1.0, cdouble(0, 2)}};
  SymbolVector sum{SymbolRole::Transmitted, CVector(3)};
  for (int i = 0; i < 3; ++i)
    sum.values[i] = x.values[i] + x2.values[i];
  const auto a = receive(H, sum, zero), b = receive(H, x, zero), c = receive(H, x2, zero);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(a.values[i] - (b.values[i] + c.values[i])) < 1e-14);

  CHECK_THROWS_AS(receive(I, {SymbolRole::Transmitted, CVector(2)}, zero), ArgumentError);
  CHECK_THROWS_AS(receive(I, x, CVector(4)), ArgumentError);
}

TEST_CASE("detect_fast", "[modem][detection]") {
  const auto bpsk = Constellation::bpsk();

  SECTION("noiseless input is recovered for every BPSK vector, N <= 8") {
    for (int N = 1; N <= 8; ++N) {
      const auto H = aligned_channel(N);
      const auto g = subchannel_gains(H);
      for (std::uint32_t word = 0; word < (1u << N); ++word) {
        SymbolVector s{SymbolRole::Information, CVector(N)};
        for (int n = 0; n < N; ++n)
          s.values[n] = (word >> n) & 1u ? -1.0 : 1.0;
        const auto y = receive(H, modulate_beamformed(s), CVector(N));
        CHECK(detect_fast(y, g, bpsk).symbols(bpsk).values == s.values);
      }
    }
  }

  SECTION("scalar nearest point") {
    const auto det = detect_fast({SymbolRole::Received, {-0.3}}, {{1.0}}, bpsk);
    CHECK(det.symbols(bpsk).values[0] == cdouble(-1.0));
  }

  SECTION("ties go to the lowest constellation index") {
    const auto det = detect_fast({SymbolRole::Received, {0.0, 0.0}}, {{0.0, 0.0}}, bpsk);
    CHECK(det.indices == std::vector<std::size_t>{0, 0});
    CHECK(det.margin == 0.0);
  }

  SECTION("length mismatch") {
    CHECK_THROWS_AS(detect_fast({SymbolRole::Received, CVector(3)}, {CVector(4)}, bpsk), ArgumentError);
  }

  SECTION("permuting subchannels permutes decisions") {
    std::mt19937_64 gen(31);
    std::normal_distribution<double> nd;
    const std::size_t N = 6;
    const auto qpsk = Constellation::qpsk();
    for (int trial = 0; trial < 50; ++trial) {
      SubchannelGains g{CVector(N)};
      CVector yt(N);
      for (std::size_t i = 0; i < N; ++i) {
        g.values[i] = {nd(gen), nd(gen)};
        yt[i] = {nd(gen), nd(gen)};
      }
      std::vector<std::size_t> perm(N);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), gen);
      SubchannelGains gp{CVector(N)};
      CVector ytp(N);
      for (std::size_t i = 0; i < N; ++i) {
        gp.values[i] = g.values[perm[i]];
        ytp[i] = yt[perm[i]];
      }
      const auto d = detect_fast({SymbolRole::Received, apply_idft(yt)}, g, qpsk);
      const auto dp = detect_fast({SymbolRole::Received, apply_idft(ytp)}, gp, qpsk);
      for (std::size_t i = 0; i < N; ++i)
        CHECK(dp.indices[i] == d.indices[perm[i]]);
    }
  }

  SECTION("operation counts match the closed form for power-of-two N") {
    for (std::uint64_t N : {1u, 2u, 4u, 8u, 16u})
      for (const auto &c : {Constellation::bpsk(), Constellation::qpsk()}) {
        const auto det = detect_fast({SymbolRole::Received, CVector(N)}, {CVector(N, 1.0)}, c);
        const auto ref = complexity_report(DetectorKind::FastSymbolWise, N, c.size());
        CHECK(det.ops.additions == ref.complex_additions);
        CHECK(det.ops.multiplications == ref.complex_multiplications);
        CHECK(det.candidates == N * c.size());
      }
  }
}

TEST_CASE("detect_exhaustive", "[modem][detection]") {
  const auto bpsk = Constellation::bpsk();
  std::mt19937_64 gen(17);

  SECTION("noiseless input is recovered in both mappings") {
    for (int N = 1; N <= 5; ++N) {
      const auto H = aligned_channel(N);
      const auto s = random_symbols(N, Constellation::qpsk(), gen);
      const auto yb = receive(H, modulate_beamformed(s), CVector(N));
      const auto yd = receive(H, modulate_direct(s), CVector(N));
      const auto q = Constellation::qpsk();
      CHECK(detect_exhaustive(yb, H, q, TransmitMapping::Beamformed).symbols(q).values == s.values);
      CHECK(detect_exhaustive(yd, H, q, TransmitMapping::Direct).symbols(q).values == s.values);
    }
  }

  SECTION("visits K^N candidates") {
    const auto H = aligned_channel(4);
    const auto det = detect_exhaustive({SymbolRole::Received, CVector(4)}, H, bpsk, TransmitMapping::Beamformed);
    CHECK(det.candidates == 16);
  }

  SECTION("ties go to the lexicographically first candidate") {
    const auto det =
        detect_exhaustive({SymbolRole::Received, CVector(2)}, CMatrix(2, 2), bpsk, TransmitMapping::Direct);
    CHECK(det.indices == std::vector<std::size_t>{0, 0});
  }

  SECTION("matches an independent brute-force search") {
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 200; ++trial) {
      const int N = 2 + trial % 3;
      const auto H = aligned_channel(N);
      const auto s = random_symbols(N, bpsk, gen);
      CVector z(N);
      for (auto &v : z)
        v = {0.2 * nd(gen), 0.2 * nd(gen)};
      const auto y = receive(H, modulate_direct(s), z);
      CHECK(detect_exhaustive(y, H, bpsk, TransmitMapping::Direct).indices == brute_force_ml(y.values, H.gains, bpsk));
    }
  }

  SECTION("enumeration guard") {
    CHECK_THROWS_AS(ExhaustiveDetector(CMatrix::identity(25), bpsk, TransmitMapping::Direct), CapacityError);
    CHECK_THROWS_AS(ExhaustiveDetector(CMatrix::identity(13), Constellation::qpsk(), TransmitMapping::Direct),
                    CapacityError);
    CHECK_NOTHROW(ExhaustiveDetector(CMatrix::identity(12), Constellation::qpsk(), TransmitMapping::Direct));
  }

  SECTION("operation counts match the traditional closed form") {
    for (std::uint64_t N : {1u, 2u, 4u})
      for (const auto &c : {Constellation::bpsk(), Constellation::qpsk()}) {
        const auto det = detect_exhaustive({SymbolRole::Received, CVector(N)}, CMatrix::identity(N), c,
                                           TransmitMapping::Direct);
        const auto ref = complexity_report(DetectorKind::TraditionalMl, N, c.size());
        CHECK(det.ops.additions == ref.complex_additions);
        CHECK(det.ops.multiplications == ref.complex_multiplications);
      }
  }
}

TEST_CASE("fast and beamformed exhaustive detectors agree on noisy input", "[modem][detection][oracle]") {
  const auto bpsk = Constellation::bpsk();
  rng::CounterRng gen(rng::substream_key(77, {1}));
  std::mt19937_64 sym_gen(78);
  int compared = 0;
  for (int N : {2, 3, 4}) {
    const auto H = aligned_channel(N);
    const auto g = subchannel_gains(H);
    const ExhaustiveDetector ex(H.gains, bpsk, TransmitMapping::Beamformed);
    for (double snr_db : {-5.0, 0.0, 5.0, 10.0, 15.0})
      for (int t = 0; t < 500; ++t) {
        const auto s = random_symbols(N, bpsk, sym_gen);
        const auto y = receive(H, modulate_beamformed(s), sample_noise(N, noise_variance_for_snr(snr_db), gen));
        const auto fast = detect_fast(y, g, bpsk);
        const auto full = ex.detect(y);
        if (fast.margin <= 1e-12 || full.margin <= 1e-12)
          continue;
        ++compared;
        CHECK(fast.indices == full.indices);
      }
  }
  CHECK(compared > 7000);
}
