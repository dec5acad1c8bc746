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

#include "error.hpp"
#include "geometry.hpp"
#include "matrix.hpp"
#include "transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace ucalos {

// Free-space LOS gains between every transmit/receive antenna pair.
// gains(m-1, n-1) is the gain from transmit antenna n to receive antenna m.
struct ChannelMatrix {
  CMatrix gains;
  std::optional<UcaGeometry> geometry; // empty for synthetic matrices

  std::size_t rows() const noexcept { return gains.rows(); }
  std::size_t cols() const noexcept { return gains.cols(); }
  bool square() const noexcept { return gains.square(); }

  // 1-based access matching the antenna numbering
  cdouble h(int m, int n) const { return gains(static_cast<std::size_t>(m - 1), static_cast<std::size_t>(n - 1)); }
};

// Diagonal of the DFT-diagonalized channel: the N-point unnormalized forward
// DFT of the channel's first row.
struct SubchannelGains {
  CVector values;

  std::size_t size() const noexcept { return values.size(); }

  std::vector<double> magnitudes() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto &v : values)
      out.push_back(std::abs(v));
    return out;
  }
};

// Free-space gain beta * lambda * exp(-j*2*pi*dist/lambda) / (4*pi*dist)
inline cdouble free_space_gain(cdouble beta, double wavelength, double dist) {
  const double phase = -two_pi * std::fmod(dist / wavelength, 1.0);
  return beta * wavelength * std::polar(1.0, phase) / (4.0 * std::numbers::pi * dist);
}

inline ChannelMatrix build_channel(const UcaGeometry &geom) {
  const int M = geom.rx_count(), N = geom.tx_count();
  ChannelMatrix H{CMatrix(static_cast<std::size_t>(M), static_cast<std::size_t>(N)), geom};
  for (int m = 1; m <= M; ++m)
    for (int n = 1; n <= N; ++n)
      H.gains(m - 1, n - 1) = free_space_gain(geom.beta(), geom.wavelength(), geom.antenna_distance(m, n));
  return H;
}

inline constexpr double default_circulant_tol = 1e-10;

// max |H(m,n) - H(0, (n-m) mod N)| relative to the largest entry magnitude
inline double circulant_deviation(const CMatrix &H) {
  if (!H.square())
    throw ArgumentError("circulant check: matrix is not square (" + std::to_string(H.rows()) + "x" +
                        std::to_string(H.cols()) + ")");
  const std::size_t N = H.rows();
  const double scale = H.max_abs();
  if (scale == 0.0)
    return 0.0;
  double worst = 0.0;
  for (std::size_t m = 0; m < N; ++m)
    for (std::size_t n = 0; n < N; ++n)
      worst = std::max(worst, std::abs(H(m, n) - H(0, (n + N - m) % N)));
  return worst / scale;
}

inline bool is_circulant(const CMatrix &H, double tol = default_circulant_tol) {
  if (!(tol > 0.0))
    throw ArgumentError("circulant check: tolerance must be > 0");
  return circulant_deviation(H) <= tol;
}

inline bool is_circulant(const ChannelMatrix &H, double tol = default_circulant_tol) { return is_circulant(H.gains, tol); }

inline SubchannelGains subchannel_gains(const CMatrix &H, OpCounter *ops = nullptr) {
  if (!H.square())
    throw ArgumentError("subchannel gains: matrix is not square (" + std::to_string(H.rows()) + "x" +
                        std::to_string(H.cols()) + ")");
  return {dft(H.row(0), DftSign::Forward, ops)};
}

inline SubchannelGains subchannel_gains(const ChannelMatrix &H) { return subchannel_gains(H.gains); }

// Population variance of the subchannel gain magnitudes
inline double gain_variance(const SubchannelGains &g) {
  if (g.values.empty())
    throw ArgumentError("gain variance: no subchannels");
  const auto mags = g.magnitudes();
  double mean = 0.0;
  for (double a : mags)
    mean += a;
  mean /= static_cast<double>(mags.size());
  double acc = 0.0;
  for (double a : mags)
    acc += (a - mean) * (a - mean);
  return acc / static_cast<double>(mags.size());
}

// Result of W^H * H * W for a square channel
struct Diagonalization {
  CMatrix transformed;
  double residual = 0.0;          // largest off-diagonal magnitude / largest diagonal magnitude
  double diagonal_mismatch = 0.0; // max |diag - subchannel gains| / largest diagonal magnitude
};

inline Diagonalization diagonalize(const CMatrix &H) {
  if (!H.square())
    throw ArgumentError("diagonalization: matrix is not square (" + std::to_string(H.rows()) + "x" +
                        std::to_string(H.cols()) + ")");
  const std::size_t N = H.rows();
  const UnitaryDft W(N);
  // Columns of H*W are H times the columns of W, then each column goes through W^H.
  CMatrix HW = H * W.matrix();
  Diagonalization out{CMatrix(N, N)};
  CVector col(N);
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t i = 0; i < N; ++i)
      col[i] = HW(i, j);
    const CVector t = W.apply_dft(col);
    for (std::size_t i = 0; i < N; ++i)
      out.transformed(i, j) = t[i];
  }
  double diag_max = 0.0, off_max = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      double &slot = (i == j) ? diag_max : off_max;
      slot = std::max(slot, std::abs(out.transformed(i, j)));
    }
  const auto gains = subchannel_gains(H);
  double mismatch = 0.0;
  for (std::size_t k = 0; k < N; ++k)
    mismatch = std::max(mismatch, std::abs(out.transformed(k, k) - gains.values[k]));
  if (diag_max > 0.0) {
    out.residual = off_max / diag_max;
    out.diagonal_mismatch = mismatch / diag_max;
  } else {
    out.residual = off_max > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    out.diagonal_mismatch = mismatch;
  }
  return out;
}

// Off-diagonal leakage of W^H*H*W. For circulant H the diagonal also equals
// subchannel_gains(H); see Diagonalization::diagonal_mismatch.
inline double diagonalization_residual(const CMatrix &H) { return diagonalize(H).residual; }

inline double diagonalization_residual(const ChannelMatrix &H) { return diagonalization_residual(H.gains); }

} // namespace ucalos
