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
#include "matrix.hpp"
#include "transform.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ucalos {

// ----- Constellations ------------------------------------------------------

// Finite unit-average-energy alphabet. labels[i] holds the bit label of
// points[i], most significant bit first on the wire.
class Constellation {
public:
  static Constellation bpsk() { return {"bpsk", {1.0, -1.0}, {0u, 1u}}; }

  // Gray mapped: first bit selects the in-phase sign, second the quadrature sign
  static Constellation qpsk() {
    const double a = 1.0 / std::sqrt(2.0);
    return {"qpsk", {{a, a}, {a, -a}, {-a, a}, {-a, -a}}, {0u, 1u, 2u, 3u}};
  }

  static Constellation by_name(std::string_view name) {
    if (name == "bpsk")
      return bpsk();
    if (name == "qpsk")
      return qpsk();
    throw ArgumentError("unknown constellation '" + std::string(name) + "' (expected bpsk or qpsk)");
  }

  const std::string &name() const noexcept { return name_; }
  std::size_t size() const noexcept { return points_.size(); }
  int bits_per_symbol() const noexcept { return bits_; }
  std::span<const cdouble> points() const noexcept { return points_; }
  std::span<const std::uint32_t> labels() const noexcept { return labels_; }
  const cdouble &point(std::size_t i) const noexcept { return points_[i]; }

  // Index of the point carrying the given label
  std::size_t index_of_label(std::uint32_t label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label)
        return i;
    throw ArgumentError("label " + std::to_string(label) + " not in constellation " + name_);
  }

  // Index of a point that is exactly a constellation member
  std::size_t index_of_point(cdouble p) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (points_[i] == p)
        return i;
    throw ArgumentError("symbol is not a point of constellation " + name_);
  }

private:
  Constellation(std::string name, CVector points, std::vector<std::uint32_t> labels)
      : name_(std::move(name)), points_(std::move(points)), labels_(std::move(labels)),
        bits_(std::countr_zero(points_.size())) {}

  std::string name_;
  CVector points_;
  std::vector<std::uint32_t> labels_;
  int bits_;
};

// ----- Symbol vectors ------------------------------------------------------

enum class SymbolRole { Information, Transmitted, Received };

struct SymbolVector {
  SymbolRole role;
  CVector values;

  std::size_t size() const noexcept { return values.size(); }
};

inline SymbolVector bits_to_symbols(std::span<const std::uint8_t> bits, const Constellation &c) {
  const auto b = static_cast<std::size_t>(c.bits_per_symbol());
  if (bits.size() % b != 0)
    throw ArgumentError("bits_to_symbols: " + std::to_string(bits.size()) + " bits is not a multiple of " +
                        std::to_string(b));
  SymbolVector out{SymbolRole::Information, CVector(bits.size() / b)};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    std::uint32_t label = 0;
    for (std::size_t k = 0; k < b; ++k)
      label = (label << 1) | (bits[i * b + k] & 1u);
    out.values[i] = c.point(c.index_of_label(label));
  }
  return out;
}

inline std::vector<std::uint8_t> symbols_to_bits(const SymbolVector &s, const Constellation &c) {
  const auto b = static_cast<std::size_t>(c.bits_per_symbol());
  std::vector<std::uint8_t> out(s.size() * b);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::uint32_t label = c.labels()[c.index_of_point(s.values[i])];
    for (std::size_t k = 0; k < b; ++k)
      out[i * b + k] = static_cast<std::uint8_t>((label >> (b - 1 - k)) & 1u);
  }
  return out;
}

// ----- Transmit and channel ------------------------------------------------

// x = W s: every information symbol is spread over all N transmit antennas
// with a linear phase progression.
inline SymbolVector modulate_beamformed(const SymbolVector &s) {
  if (s.role != SymbolRole::Information)
    throw ArgumentError("modulate_beamformed: expected an information vector");
  return {SymbolRole::Transmitted, apply_idft(s.values)};
}

// Traditional spatial multiplexing: antenna n sends s_n directly
inline SymbolVector modulate_direct(const SymbolVector &s) {
  if (s.role != SymbolRole::Information)
    throw ArgumentError("modulate_direct: expected an information vector");
  return {SymbolRole::Transmitted, s.values};
}

// y = H x + z
inline SymbolVector receive(const CMatrix &H, const SymbolVector &x, std::span<const cdouble> z) {
  if (x.size() != H.cols())
    throw ArgumentError("receive: channel has " + std::to_string(H.cols()) + " inputs, signal has " +
                        std::to_string(x.size()));
  if (z.size() != H.rows())
    throw ArgumentError("receive: channel has " + std::to_string(H.rows()) + " outputs, noise has " +
                        std::to_string(z.size()));
  SymbolVector y{SymbolRole::Received, H * std::span<const cdouble>(x.values)};
  for (std::size_t m = 0; m < y.values.size(); ++m)
    y.values[m] += z[m];
  return y;
}

inline SymbolVector receive(const ChannelMatrix &H, const SymbolVector &x, std::span<const cdouble> z) {
  return receive(H.gains, x, z);
}

// ----- Detection -----------------------------------------------------------

struct Detection {
  std::vector<std::size_t> indices; // constellation index per information symbol
  double metric = 0.0;              // squared Euclidean distance of the decision
  double margin = 0.0;              // runner-up metric minus winning metric
  std::uint64_t candidates = 0;     // metric evaluations performed
  OpCounter ops;

  SymbolVector symbols(const Constellation &c) const {
    SymbolVector out{SymbolRole::Information, CVector(indices.size())};
    for (std::size_t i = 0; i < indices.size(); ++i)
      out.values[i] = c.point(indices[i]);
    return out;
  }
};

// Symbol-wise ML after the receive-side DFT. Each subchannel is decided on its
// own; equal metrics go to the lowest constellation index.
inline Detection detect_fast(const SymbolVector &y, const SubchannelGains &g, const Constellation &c) {
  const std::size_t N = g.size();
  if (y.size() != N)
    throw ArgumentError("detect_fast: received vector has " + std::to_string(y.size()) + " entries, expected " +
                        std::to_string(N));
  Detection det;
  det.indices.resize(N);
  det.margin = std::numeric_limits<double>::infinity();
  const CVector yt = UnitaryDft(N).apply_dft(y.values, &det.ops);
  const std::size_t K = c.size();
  for (std::size_t l = 0; l < N; ++l) {
    double best = std::numeric_limits<double>::infinity(), second = best;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < K; ++k) {
      const double m = std::norm(yt[l] - g.values[l] * c.point(k));
      if (m < best) {
        second = best;
        best = m;
        arg = k;
      } else if (m < second) {
        second = m;
      }
    }
    det.indices[l] = arg;
    det.metric += best;
    det.margin = std::min(det.margin, second - best);
  }
  det.candidates = N * K;
  det.ops.multiplications += N * K;
  det.ops.additions += N * K;
  return det;
}

enum class TransmitMapping { Beamformed, Direct };

inline constexpr std::uint64_t exhaustive_candidate_limit = std::uint64_t{1} << 24;

// Joint ML over all K^N candidate vectors: minimizes ||y - G s||^2 with
// G = H W (beamformed) or G = H (direct). Equal metrics go to the
// lexicographically first candidate, s_1 being the most significant digit.
class ExhaustiveDetector {
public:
  ExhaustiveDetector(const CMatrix &H, Constellation c, TransmitMapping mapping)
      : c_(std::move(c)), n_(H.cols()), rows_(H.rows()) {
    candidates_ = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      candidates_ *= c_.size();
      if (candidates_ > exhaustive_candidate_limit)
        throw CapacityError("exhaustive ML: " + std::to_string(c_.size()) + "^" + std::to_string(n_) +
                            " candidates exceeds the limit of 2^24");
    }
    G_ = mapping == TransmitMapping::Beamformed ? H * UnitaryDft(n_).matrix() : H;
  }

  std::uint64_t candidate_count() const noexcept { return candidates_; }

  Detection detect(const SymbolVector &y) const {
    if (y.size() != rows_)
      throw ArgumentError("detect_exhaustive: received vector has " + std::to_string(y.size()) +
                          " entries, expected " + std::to_string(rows_));
    const std::size_t K = c_.size();
    std::vector<std::size_t> digits(n_, 0);
    Detection det;
    double best = std::numeric_limits<double>::infinity(), second = best;
    for (std::uint64_t t = 0; t < candidates_; ++t) {
      double metric = 0.0;
      for (std::size_t m = 0; m < rows_; ++m) {
        cdouble acc{};
        for (std::size_t n = 0; n < n_; ++n)
          acc += G_(m, n) * c_.point(digits[n]);
        metric += std::norm(y.values[m] - acc);
      }
      if (metric < best) {
        second = best;
        best = metric;
        det.indices = digits;
      } else if (metric < second) {
        second = metric;
      }
      // odometer increment, last digit fastest
      for (std::size_t n = n_; n-- > 0;) {
        if (++digits[n] < K)
          break;
        digits[n] = 0;
      }
    }
    det.metric = best;
    det.margin = second - best;
    det.candidates = candidates_;
    // per candidate: rows*n products plus rows squared magnitudes,
    // rows*(n-1) accumulations plus rows subtractions
    det.ops.multiplications = candidates_ * (rows_ * n_ + rows_);
    det.ops.additions = candidates_ * (rows_ * n_);
    return det;
  }

private:
  Constellation c_;
  std::size_t n_, rows_;
  std::uint64_t candidates_ = 0;
  CMatrix G_;
};

inline Detection detect_exhaustive(const SymbolVector &y, const CMatrix &H, const Constellation &c,
                                   TransmitMapping mapping) {
  return ExhaustiveDetector(H, c, mapping).detect(y);
}

inline Detection detect_exhaustive(const SymbolVector &y, const ChannelMatrix &H, const Constellation &c,
                                   TransmitMapping mapping) {
  return detect_exhaustive(y, H.gains, c, mapping);
}

} // namespace ucalos
