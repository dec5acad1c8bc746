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

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>

namespace ucalos {

// Complex operation tally. Conventions follow the usual detector complexity
// accounting: one butterfly costs one multiplication (twiddle, counted even
// when trivial) and two additions; real scalings and |.|^2 in the symbol-wise
// metric are not counted.
struct OpCounter {
  std::uint64_t additions = 0;
  std::uint64_t multiplications = 0;

  OpCounter &operator+=(const OpCounter &o) noexcept {
    additions += o.additions;
    multiplications += o.multiplications;
    return *this;
  }
  friend bool operator==(const OpCounter &, const OpCounter &) = default;
};

enum class DftSign : int { Forward = -1, Inverse = +1 };

inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && std::has_single_bit(n); }

namespace detail {

// In-place iterative radix-2 FFT, exp(sign * j * 2*pi*n*k / N), unnormalized.
inline void fft_radix2(std::span<cdouble> a, DftSign sign, OpCounter *ops) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1)
      j ^= bit;
    j ^= bit;
    if (i < j)
      std::swap(a[i], a[j]);
  }
  const double s = static_cast<double>(static_cast<int>(sign));
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        // twiddles from the exact angle rather than a running product
        const double ang = s * two_pi * static_cast<double>(k) / static_cast<double>(len);
        const cdouble w(std::cos(ang), std::sin(ang));
        const cdouble u = a[start + k];
        const cdouble v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
  if (ops && n > 1) {
    const auto stages = static_cast<std::uint64_t>(std::countr_zero(n));
    ops->additions += n * stages;
    ops->multiplications += (n / 2) * stages;
  }
}

inline CVector dft_direct(std::span<const cdouble> a, DftSign sign, OpCounter *ops) {
  const std::size_t n = a.size();
  const double s = static_cast<double>(static_cast<int>(sign));
  CVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cdouble acc{};
    for (std::size_t i = 0; i < n; ++i) {
      // reduce the exponent index mod n so large n*k keeps full precision
      const double ang = s * two_pi * static_cast<double>((i * k) % n) / static_cast<double>(n);
      acc += a[i] * cdouble(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  if (ops) {
    ops->multiplications += n * n;
    ops->additions += n * (n - 1);
  }
  return out;
}

} // namespace detail

// Unnormalized N-point transform: out[k] = sum_n in[n] exp(sign*j*2*pi*n*k/N).
// Radix-2 FFT for power-of-two sizes, direct summation otherwise.
inline CVector dft(std::span<const cdouble> in, DftSign sign = DftSign::Forward, OpCounter *ops = nullptr) {
  if (in.empty())
    throw ArgumentError("dft: empty input");
  if (is_power_of_two(in.size())) {
    CVector out(in.begin(), in.end());
    detail::fft_radix2(out, sign, ops);
    return out;
  }
  return detail::dft_direct(in, sign, ops);
}

// Unitary N x N IDFT beamformer W with W(n, l) = exp(+j*2*pi*n*l/N)/sqrt(N)
// (0-based), and its adjoint W*. Applied matrix-free.
class UnitaryDft {
public:
  explicit UnitaryDft(std::size_t n) : n_(n) {
    if (n == 0)
      throw ArgumentError("UnitaryDft: size must be >= 1");
  }

  std::size_t size() const noexcept { return n_; }

  // W * v
  CVector apply_idft(std::span<const cdouble> v, OpCounter *ops = nullptr) const {
    return scaled(v, DftSign::Inverse, ops);
  }

  // W^H * v
  CVector apply_dft(std::span<const cdouble> v, OpCounter *ops = nullptr) const {
    return scaled(v, DftSign::Forward, ops);
  }

  CMatrix matrix() const {
    CMatrix W(n_, n_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (std::size_t n = 0; n < n_; ++n)
      for (std::size_t l = 0; l < n_; ++l) {
        const double ang = two_pi * static_cast<double>((n * l) % n_) / static_cast<double>(n_);
        W(n, l) = scale * cdouble(std::cos(ang), std::sin(ang));
      }
    return W;
  }

private:
  CVector scaled(std::span<const cdouble> v, DftSign sign, OpCounter *ops) const {
    if (v.size() != n_)
      throw ArgumentError("UnitaryDft: expected length " + std::to_string(n_) + ", got " + std::to_string(v.size()));
    CVector out = dft(v, sign, ops);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (auto &x : out)
      x *= scale;
    return out;
  }

  std::size_t n_;
};

inline CVector apply_idft(std::span<const cdouble> v) { return UnitaryDft(v.size()).apply_idft(v); }
inline CVector apply_dft(std::span<const cdouble> v) { return UnitaryDft(v.size()).apply_dft(v); }

} // namespace ucalos
