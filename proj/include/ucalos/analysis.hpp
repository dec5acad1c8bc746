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

// Radius sweeps over aligned, equal-radius UCA pairs: gain-variance curves
// and the largest antenna count that keeps the variance under a threshold.

#include "channel.hpp"
#include "error.hpp"
#include "geometry.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ucalos {

// Everything about an aligned r == R scene except the radius and antenna count
struct AlignedScene {
  double wavelength = 1.0;
  double separation = 10.0;
  cdouble beta{4.0 * std::numbers::pi, 0.0};
  double tx_rotation = 0.0;
  double rx_rotation = 0.0;
};

inline UcaGeometry aligned_geometry(const AlignedScene &s, double radius, int count) {
  UcaParams p;
  p.tx_radius = p.rx_radius = radius;
  p.separation = s.separation;
  p.tx_rotation = s.tx_rotation;
  p.rx_rotation = s.rx_rotation;
  p.tx_count = p.rx_count = count;
  p.wavelength = s.wavelength;
  p.beta = s.beta;
  return UcaGeometry(p);
}

inline double aligned_gain_variance(const AlignedScene &s, double radius, int count) {
  return gain_variance(subchannel_gains(build_channel(aligned_geometry(s, radius, count))));
}

struct VarianceSample {
  double radius_over_lambda;
  int count;
  double sigma2;
};

// One sample per (count, radius), grouped by count in the given order.
inline std::vector<VarianceSample> variance_sweep(const AlignedScene &s, std::span<const double> radii,
                                                  std::span<const int> counts) {
  if (radii.empty() || counts.empty())
    throw ArgumentError("variance sweep: radius grid and antenna counts must be nonempty");
  std::vector<VarianceSample> out;
  out.reserve(radii.size() * counts.size());
  for (int n : counts)
    for (double R : radii)
      out.push_back({R / s.wavelength, n, aligned_gain_variance(s, R, n)});
  return out;
}

inline constexpr int default_count_cap = 64;

struct SpacingRow {
  double radius_over_lambda;
  int best_count;                            // 1 when no count >= 2 qualifies
  std::optional<double> spacing_over_lambda; // neighbor chord at best_count
  double sigma2;                             // gain variance at best_count
};

// For each radius, the largest N in [2, count_cap] whose aligned channel has
// gain variance strictly below the threshold.
inline std::vector<SpacingRow> spacing_analysis(const AlignedScene &s, std::span<const double> radii,
                                                double sigma2_threshold, int count_cap = default_count_cap) {
  if (radii.empty())
    throw ArgumentError("spacing analysis: radius grid is empty");
  if (!(sigma2_threshold > 0.0))
    throw ArgumentError("spacing analysis: variance threshold must be > 0");
  if (count_cap < 2)
    throw ArgumentError("spacing analysis: count cap must be >= 2");
  std::vector<SpacingRow> out;
  out.reserve(radii.size());
  for (double R : radii) {
    SpacingRow row{R / s.wavelength, 1, std::nullopt, 0.0};
    for (int n = count_cap; n >= 2; --n) {
      const double v = aligned_gain_variance(s, R, n);
      if (v < sigma2_threshold) {
        row.best_count = n;
        row.spacing_over_lambda = neighbor_spacing(R, n) / s.wavelength;
        row.sigma2 = v;
        break;
      }
    }
    out.push_back(row);
  }
  return out;
}

} // namespace ucalos
