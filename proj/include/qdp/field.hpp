/*
   Copyright 2026 The qdp Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qdp {

/// An element of a prime field, stored as its least non-negative residue.
using Elem = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// The prime field F_ell. All operations are exact residues mod ell.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t ell) : ell_(ell) {
    if (!is_prime(ell)) throw std::invalid_argument("field characteristic must be prime, got " + std::to_string(ell));
    if (ell >= (1u << 31)) throw std::invalid_argument("field characteristic too large");
  }

  std::uint32_t ell() const noexcept { return ell_; }

  Elem from_int(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(ell_);
    return static_cast<Elem>(r < 0 ? r + ell_ : r);
  }
  Elem from_uint(std::uint64_t v) const noexcept { return static_cast<Elem>(v % ell_); }

  Elem add(Elem a, Elem b) const noexcept {
    Elem s = a + b;
    return s >= ell_ ? s - ell_ : s;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + ell_ - b; }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : ell_ - a; }
  Elem mul(Elem a, Elem b) const noexcept {
    return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % ell_);
  }
  /// a + b * c
  Elem fma(Elem a, Elem b, Elem c) const noexcept {
    return static_cast<Elem>((a + static_cast<std::uint64_t>(b) * c) % ell_);
  }
  Elem pow(Elem base, std::uint64_t e) const noexcept {
    Elem r = 1 % ell_;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
  Elem inv(Elem a) const {
    if (a % ell_ == 0) throw NotInvertible("0 has no inverse in F_" + std::to_string(ell_));
    return pow(a, ell_ - 2);
  }

  bool operator==(const PrimeField& o) const noexcept { return ell_ == o.ell_; }

 private:
  std::uint32_t ell_;
};

using Vec = std::vector<Elem>;

}  // namespace qdp
