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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace ucalos {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Reduce an angle to [0, 2*pi)
inline double wrap_angle(double a) noexcept {
  double w = std::fmod(a, two_pi);
  if (w < 0.0)
    w += two_pi;
  if (w >= two_pi) // fmod of a tiny negative number can round up to 2*pi
    w = 0.0;
  return w;
}

// Raw scene description. All lengths in meters, angles in radians.
struct UcaParams {
  double tx_radius = 0.0;  // r
  double rx_radius = 0.0;  // R
  double separation = 1.0; // d, center to center along the common axis
  double tx_rotation = 0.0;
  double rx_rotation = 0.0;
  int tx_count = 1; // N
  int rx_count = 1; // M
  double wavelength = 1.0;
  std::complex<double> beta{4.0 * std::numbers::pi, 0.0};
};

// Two coaxial, parallel uniform circular arrays. Antenna n of the transmit
// array sits at phase angle 2*pi*(n-1)/N + tx_rotation, antenna m of the
// receive array at 2*pi*(m-1)/M + rx_rotation. Antenna indices are 1-based.
class UcaGeometry {
public:
  explicit UcaGeometry(const UcaParams &p) : p_(p) {
    auto bad = [](const std::string &msg) { throw ArgumentError("UcaGeometry: " + msg); };
    if (!(p.tx_radius >= 0.0) || !std::isfinite(p.tx_radius))
      bad("transmit radius must be finite and >= 0");
    if (!(p.rx_radius >= 0.0) || !std::isfinite(p.rx_radius))
      bad("receive radius must be finite and >= 0");
    if (!(p.separation > 0.0) || !std::isfinite(p.separation))
      bad("separation must be finite and > 0");
    if (!(p.wavelength > 0.0) || !std::isfinite(p.wavelength))
      bad("wavelength must be finite and > 0");
    if (p.tx_count < 1 || p.rx_count < 1)
      bad("antenna counts must be >= 1");
    if (!std::isfinite(p.tx_rotation) || !std::isfinite(p.rx_rotation))
      bad("rotation offsets must be finite");
    if (!std::isfinite(p.beta.real()) || !std::isfinite(p.beta.imag()))
      bad("beta must be finite");
    p_.tx_rotation = wrap_angle(p.tx_rotation);
    p_.rx_rotation = wrap_angle(p.rx_rotation);
  }

  double tx_radius() const noexcept { return p_.tx_radius; }
  double rx_radius() const noexcept { return p_.rx_radius; }
  double separation() const noexcept { return p_.separation; }
  double tx_rotation() const noexcept { return p_.tx_rotation; }
  double rx_rotation() const noexcept { return p_.rx_rotation; }
  int tx_count() const noexcept { return p_.tx_count; }
  int rx_count() const noexcept { return p_.rx_count; }
  double wavelength() const noexcept { return p_.wavelength; }
  std::complex<double> beta() const noexcept { return p_.beta; }
  const UcaParams &params() const noexcept { return p_; }

  bool aligned_square() const noexcept { return p_.tx_count == p_.rx_count; }

  // Angle between the projection of transmit antenna n onto the receive
  // plane and receive antenna m. Not reduced modulo 2*pi.
  double angle_offset(int m, int n) const {
    check_indices(m, n);
    return two_pi * (n - 1) / p_.tx_count - two_pi * (m - 1) / p_.rx_count + p_.tx_rotation - p_.rx_rotation;
  }

  // In-plane distance between receive antenna m and the projection of
  // transmit antenna n.
  double projected_distance(int m, int n) const {
    return std::sqrt(projected_distance_sq(angle_offset(m, n)));
  }

  double antenna_distance(int m, int n) const {
    const double a = angle_offset(m, n);
    return std::sqrt(p_.separation * p_.separation + projected_distance_sq(a));
  }

private:
  void check_indices(int m, int n) const {
    if (m < 1 || m > p_.rx_count)
      throw ArgumentError("receive index " + std::to_string(m) + " outside 1.." + std::to_string(p_.rx_count));
    if (n < 1 || n > p_.tx_count)
      throw ArgumentError("transmit index " + std::to_string(n) + " outside 1.." + std::to_string(p_.tx_count));
  }

  double projected_distance_sq(double alpha) const noexcept {
    const double r = p_.tx_radius, R = p_.rx_radius;
    // clamp: rounding can push r^2 + R^2 - 2rR slightly negative when r == R
    return std::max(0.0, r * r + R * R - 2.0 * r * R * std::cos(alpha));
  }

  UcaParams p_;
};

// Chord length between neighboring antennas on a circle of the given radius.
inline double neighbor_spacing(double radius, int count) {
  if (count < 2)
    throw ArgumentError("neighbor_spacing: count must be >= 2, got " + std::to_string(count));
  if (!(radius > 0.0))
    throw ArgumentError("neighbor_spacing: radius must be > 0");
  return 2.0 * radius * std::sin(std::numbers::pi / count);
}

} // namespace ucalos
