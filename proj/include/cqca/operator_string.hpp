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
#include <stdexcept>
#include <utility>

#include "cqca/laurent_poly.hpp"

namespace cqca {

/// A tensor product of generalized Paulis, prod_a Q_a^{i_a} P_a^{j_a}, up to
/// an overall phase. `qpart` holds the i_a and `ppart` the j_a as functions
/// of the lattice site a. Operator multiplication is vector addition.
class OperatorString {
 public:
  explicit OperatorString(std::uint64_t modulus) : qpart_(modulus), ppart_(modulus) {}

  OperatorString(LaurentPoly qpart, LaurentPoly ppart)
      : qpart_(std::move(qpart)), ppart_(std::move(ppart)) {
    if (qpart_.modulus() != ppart_.modulus()) {
      throw std::invalid_argument("OperatorString parts have different moduli");
    }
  }

  /// Q^q_exp P^p_exp placed at `site`.
  static OperatorString single_site(std::int64_t q_exp, std::int64_t p_exp, Exponent site,
                                    std::uint64_t modulus) {
    return OperatorString(LaurentPoly::monomial(site, q_exp, modulus),
                          LaurentPoly::monomial(site, p_exp, modulus));
  }

  const LaurentPoly& qpart() const { return qpart_; }
  const LaurentPoly& ppart() const { return ppart_; }
  std::uint32_t modulus() const { return qpart_.modulus(); }
  bool is_identity() const { return qpart_.is_zero() && ppart_.is_zero(); }

  /// (i_a, j_a) at one site.
  std::pair<Coeff, Coeff> exponents_at(Exponent site) const {
    return {qpart_.coeff(site), ppart_.coeff(site)};
  }

  /// Product of operators (phase dropped).
  OperatorString operator*(const OperatorString& other) const {
    return OperatorString(qpart_ + other.qpart_, ppart_ + other.ppart_);
  }

  friend bool operator==(const OperatorString&, const OperatorString&) = default;

 private:
  LaurentPoly qpart_;
  LaurentPoly ppart_;
};

}  // namespace cqca
