#include "rmpir/linpoly.hpp"

#include <algorithm>

namespace rmpir {

namespace {

void trim(std::vector<Element>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

}  // namespace

LinPoly::LinPoly(std::vector<Element> coeffs) : coeffs_(std::move(coeffs)) {
  trim(coeffs_);
}

LinPoly LinPoly::monomial(Element c, std::size_t e) {
  std::vector<Element> v(e + 1, 0);
  v[e] = c;
  return LinPoly(std::move(v));
}

Element lp_eval(const Field& f, const LinPoly& p, Element x) {
  Element acc = 0;
  Element xp = x;  // x^(q^i)
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    acc = f.add(acc, f.mul(p.coeffs()[i], xp));
    xp = f.frobenius(xp, 1);
  }
  return acc;
}

LinPoly lp_add(const Field& f, const LinPoly& a, const LinPoly& b) {
  const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<Element> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f.add(a.coeff(i), b.coeff(i));
  return LinPoly(std::move(out));
}

LinPoly lp_sub(const Field& f, const LinPoly& a, const LinPoly& b) {
  const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<Element> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f.sub(a.coeff(i), b.coeff(i));
  return LinPoly(std::move(out));
}

LinPoly lp_scale(const Field& f, Element c, const LinPoly& a) {
  std::vector<Element> out(a.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.mul(c, a.coeffs()[i]);
  return LinPoly(std::move(out));
}

LinPoly lp_compose(const Field& f, const LinPoly& outer, const LinPoly& inner) {
  if (outer.is_zero() || inner.is_zero()) return LinPoly();
  const std::size_t no = outer.coeffs().size();
  const std::size_t ni = inner.coeffs().size();
  std::vector<Element> out(no + ni - 1, 0);
  for (std::size_t i = 0; i < no; ++i) {
    const Element fi = outer.coeffs()[i];
    if (fi == 0) continue;
    for (std::size_t j = 0; j < ni; ++j) {
      out[i + j] = f.add(out[i + j],
                         f.mul(fi, f.frobenius(inner.coeffs()[j],
                                               static_cast<long long>(i))));
    }
  }
  return LinPoly(std::move(out));
}

std::optional<LinPoly> lp_left_divide(const Field& f, const LinPoly& dividend,
                                      const LinPoly& outer) {
  require(!outer.is_zero(), "left division by the zero polynomial",
          ErrorCode::kDivisionByZero);
  if (dividend.is_zero()) return LinPoly();
  const long long dv = outer.q_degree();
  const long long dn = dividend.q_degree();
  if (dn < dv) return std::nullopt;
  // (outer ∘ g)_m = sum_a outer_a g_{m-a}^(q^a); peel from the top degree.
  std::vector<Element> rem = dividend.coeffs();
  std::vector<Element> quot(static_cast<std::size_t>(dn - dv + 1), 0);
  const Element lead = outer.coeffs()[static_cast<std::size_t>(dv)];
  for (long long b = dn - dv; b >= 0; --b) {
    const Element top = rem[static_cast<std::size_t>(b + dv)];
    if (top == 0) continue;
    // lead * g_b^(q^dv) = top  =>  g_b = (top / lead)^(q^-dv)
    const Element gb = f.frobenius(f.div(top, lead), -dv);
    quot[static_cast<std::size_t>(b)] = gb;
    for (long long a = 0; a <= dv; ++a) {
      const Element oa = outer.coeffs()[static_cast<std::size_t>(a)];
      if (oa == 0) continue;
      auto& slot = rem[static_cast<std::size_t>(a + b)];
      slot = f.sub(slot, f.mul(oa, f.frobenius(gb, a)));
    }
  }
  for (long long m = 0; m < dv; ++m) {
    if (rem[static_cast<std::size_t>(m)] != 0) return std::nullopt;
  }
  return LinPoly(std::move(quot));
}

}  // namespace rmpir
