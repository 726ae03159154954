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

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cqca/modular.hpp"

namespace cqca {

/// Finitely supported function Z -> Z_N, written as sum_k c_k q^k.
///
/// Stored sparsely as exponent-sorted (exponent, coefficient) terms with
/// every coefficient in [1, N-1]; two polynomials with the same modulus
/// compare equal iff they are the same function.
class LaurentPoly {
 public:
  struct Term {
    Exponent exponent;
    Coeff coeff;
    auto operator<=>(const Term&) const = default;
  };

  explicit LaurentPoly(std::uint64_t modulus) : modulus_(checked_modulus(modulus)) {}

  /// Builds from (exponent, integer coefficient) pairs. Repeated exponents
  /// are summed, coefficients reduced mod N, zeros dropped.
  static LaurentPoly from_terms(std::span<const std::pair<Exponent, std::int64_t>> terms,
                                std::uint64_t modulus) {
    LaurentPoly out(modulus);
    std::map<Exponent, Coeff> acc;
    for (const auto& [e, c] : terms) {
      Coeff& slot = acc[e];
      slot = mod_add(slot, mod_reduce(c, out.modulus_), out.modulus_);
    }
    for (const auto& [e, c] : acc) {
      if (c != 0) {
        out.terms_.push_back({e, c});
      }
    }
    return out;
  }

  static LaurentPoly from_terms(std::initializer_list<std::pair<Exponent, std::int64_t>> terms,
                                std::uint64_t modulus) {
    std::vector<std::pair<Exponent, std::int64_t>> v(terms);
    return from_terms(std::span<const std::pair<Exponent, std::int64_t>>(v), modulus);
  }

  static LaurentPoly monomial(Exponent exponent, std::int64_t coeff, std::uint64_t modulus) {
    return from_terms({{exponent, coeff}}, modulus);
  }

  /// Dense coefficients for exponents lowest, lowest+1, ...; values must
  /// already be reduced.
  static LaurentPoly from_dense(Exponent lowest, std::span<const Coeff> dense,
                                std::uint64_t modulus) {
    LaurentPoly out(modulus);
    for (std::size_t k = 0; k < dense.size(); ++k) {
      if (dense[k] >= out.modulus_) {
        throw std::invalid_argument("dense coefficient not reduced mod N");
      }
      if (dense[k] != 0) {
        out.terms_.push_back({lowest + static_cast<Exponent>(k), dense[k]});
      }
    }
    return out;
  }

  std::uint32_t modulus() const { return modulus_; }
  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Coeff coeff(Exponent e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, Exponent x) { return t.exponent < x; });
    return (it != terms_.end() && it->exponent == e) ? it->coeff : 0;
  }

  std::optional<Exponent> min_exponent() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front().exponent;
  }
  std::optional<Exponent> max_exponent() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.back().exponent;
  }

  /// max |k| over the support; 0 for the zero polynomial.
  Exponent radius() const {
    if (terms_.empty()) return 0;
    return std::max(-terms_.front().exponent, terms_.back().exponent);
  }

  /// q -> q^{-1}.
  LaurentPoly reflected() const {
    LaurentPoly out(modulus_);
    out.terms_.reserve(terms_.size());
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      out.terms_.push_back({-it->exponent, it->coeff});
    }
    return out;
  }

  bool is_palindromic() const { return *this == reflected(); }

  LaurentPoly shifted(Exponent by) const {
    LaurentPoly out = *this;
    for (auto& t : out.terms_) t.exponent += by;
    return out;
  }

  LaurentPoly scaled(std::int64_t factor) const {
    LaurentPoly out(modulus_);
    Coeff f = mod_reduce(factor, modulus_);
    for (const auto& t : terms_) {
      Coeff c = mod_mul(t.coeff, f, modulus_);
      if (c != 0) out.terms_.push_back({t.exponent, c});
    }
    return out;
  }

  /// Same integer representatives reinterpreted mod another N.
  LaurentPoly reduced_to(std::uint64_t modulus) const {
    std::vector<std::pair<Exponent, std::int64_t>> raw;
    raw.reserve(terms_.size());
    for (const auto& t : terms_) raw.emplace_back(t.exponent, t.coeff);
    return from_terms(std::span<const std::pair<Exponent, std::int64_t>>(raw), modulus);
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
      if (!first) os << " + ";
      first = false;
      os << t.coeff;
      if (t.exponent != 0) os << "*q^" << t.exponent;
    }
    return os.str();
  }

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  friend LaurentPoly poly_add(const LaurentPoly&, const LaurentPoly&);
  friend LaurentPoly poly_mul(const LaurentPoly&, const LaurentPoly&);

  std::uint32_t modulus_;
  std::vector<Term> terms_;
};

inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.to_string(); }

namespace detail {
inline void require_same_modulus(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.modulus() != b.modulus()) {
    throw std::invalid_argument("modulus mismatch: " + std::to_string(a.modulus()) + " vs " +
                                std::to_string(b.modulus()));
  }
}
}  // namespace detail

inline LaurentPoly poly_add(const LaurentPoly& a, const LaurentPoly& b) {
  detail::require_same_modulus(a, b);
  const std::uint32_t n = a.modulus();
  LaurentPoly out(n);
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->exponent < ib->exponent)) {
      out.terms_.push_back(*ia++);
    } else if (ia == a.terms_.end() || ib->exponent < ia->exponent) {
      out.terms_.push_back(*ib++);
    } else {
      Coeff c = mod_add(ia->coeff, ib->coeff, n);
      if (c != 0) out.terms_.push_back({ia->exponent, c});
      ++ia;
      ++ib;
    }
  }
  return out;
}

inline LaurentPoly poly_neg(const LaurentPoly& a) { return a.scaled(-1); }

inline LaurentPoly poly_sub(const LaurentPoly& a, const LaurentPoly& b) {
  return poly_add(a, poly_neg(b));
}

inline LaurentPoly poly_mul(const LaurentPoly& a, const LaurentPoly& b) {
  detail::require_same_modulus(a, b);
  const std::uint32_t n = a.modulus();
  LaurentPoly out(n);
  if (a.is_zero() || b.is_zero()) return out;
  const Exponent lo = a.terms_.front().exponent + b.terms_.front().exponent;
  const Exponent hi = a.terms_.back().exponent + b.terms_.back().exponent;
  const std::size_t pairs = a.terms_.size() * b.terms_.size();
  if (static_cast<std::uint64_t>(hi - lo) > 8 * pairs + 1024) {
    // very sparse, wide support
    std::map<Exponent, Coeff> acc;
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        Coeff& slot = acc[ta.exponent + tb.exponent];
        slot = mod_add(slot, mod_mul(ta.coeff, tb.coeff, n), n);
      }
    }
    for (const auto& [e, c] : acc) {
      if (c != 0) out.terms_.push_back({e, c});
    }
    return out;
  }
  std::vector<Coeff> dense(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      Coeff& slot = dense[static_cast<std::size_t>(ta.exponent + tb.exponent - lo)];
      slot = mod_add(slot, mod_mul(ta.coeff, tb.coeff, n), n);
    }
  }
  return LaurentPoly::from_dense(lo, dense, n);
}

inline LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return poly_add(a, b); }
inline LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return poly_sub(a, b); }
inline LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) { return poly_mul(a, b); }

}  // namespace cqca
