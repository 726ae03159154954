// Copyright 2026 The cqca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace cqca {

/// Lattice offset / exponent of the formal variable q.
using Exponent = std::int64_t;
/// Residue mod N, always in [0, N-1].
using Coeff = std::uint32_t;

/// Largest supported local dimension is 2^31 - 1, so a product of two
/// residues fits in 62 bits and a residue plus such a product in 63.
inline constexpr std::uint64_t kMaxModulus = (std::uint64_t{1} << 31) - 1;

inline std::uint32_t checked_modulus(std::uint64_t n) {
  if (n < 2 || n > kMaxModulus) {
    throw std::invalid_argument("modulus N must satisfy 2 <= N < 2^31, got " + std::to_string(n));
  }
  return static_cast<std::uint32_t>(n);
}

constexpr Coeff mod_reduce(std::int64_t value, std::uint32_t n) {
  std::int64_t r = value % static_cast<std::int64_t>(n);
  if (r < 0) {
    r += n;
  }
  return static_cast<Coeff>(r);
}

constexpr Coeff mod_add(Coeff a, Coeff b, std::uint32_t n) {
  std::uint64_t s = std::uint64_t{a} + b;
  return static_cast<Coeff>(s >= n ? s - n : s);
}

constexpr Coeff mod_sub(Coeff a, Coeff b, std::uint32_t n) {
  return a >= b ? a - b : static_cast<Coeff>(std::uint64_t{a} + n - b);
}

constexpr Coeff mod_mul(Coeff a, Coeff b, std::uint32_t n) {
  return static_cast<Coeff>((std::uint64_t{a} * b) % n);
}

/// Multiplicative inverse of a mod n, if gcd(a, n) == 1.
inline std::optional<Coeff> mod_inverse(Coeff a, std::uint32_t n) {
  std::int64_t old_r = a % n, r = n;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) {
    return std::nullopt;
  }
  return mod_reduce(old_s, n);
}

}  // namespace cqca
