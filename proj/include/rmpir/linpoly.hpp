#pragma once

// Linearized (q-)polynomials f(z) = sum_i f_i z^(q^i) over GF(q^s).

#include <optional>
#include <vector>

#include "rmpir/ff.hpp"

namespace rmpir {

class LinPoly {
 public:
  LinPoly() = default;
  /// coeffs[i] multiplies z^(q^i). Trailing zeros are trimmed.
  explicit LinPoly(std::vector<Element> coeffs);

  /// c * z^(q^e).
  static LinPoly monomial(Element c, std::size_t e);
  /// The identity map z.
  static LinPoly identity() { return monomial(1, 0); }

  /// q-degree; -1 for the zero polynomial.
  long long q_degree() const noexcept {
    return static_cast<long long>(coeffs_.size()) - 1;
  }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Coefficient of z^(q^i), zero beyond the stored range.
  Element coeff(std::size_t i) const noexcept {
    return i < coeffs_.size() ? coeffs_[i] : 0;
  }
  const std::vector<Element>& coeffs() const noexcept { return coeffs_; }

  bool operator==(const LinPoly&) const = default;

 private:
  std::vector<Element> coeffs_;
};

Element lp_eval(const Field& f, const LinPoly& p, Element x);
LinPoly lp_add(const Field& f, const LinPoly& a, const LinPoly& b);
LinPoly lp_sub(const Field& f, const LinPoly& a, const LinPoly& b);
LinPoly lp_scale(const Field& f, Element c, const LinPoly& a);

/// outer(inner(z)): h_k = sum_{i+j=k} outer_i * inner_j^(q^i).
LinPoly lp_compose(const Field& f, const LinPoly& outer, const LinPoly& inner);

/// Solves outer ∘ quotient = dividend for quotient given outer (left division
/// by outer). Returns nullopt if the division leaves a remainder.
std::optional<LinPoly> lp_left_divide(const Field& f, const LinPoly& dividend,
                                      const LinPoly& outer);

}  // namespace rmpir
