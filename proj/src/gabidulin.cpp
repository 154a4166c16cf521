#include "rmpir/gabidulin.hpp"

#include <algorithm>

namespace rmpir {

namespace {

std::vector<Element> default_points(const Field& f, std::size_t n) {
  std::vector<Element> pts(n);
  Element x = 1;
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = x;
    x = f.mul(x, f.alpha());
  }
  return pts;
}

std::vector<bool> erased_mask(std::size_t n, std::span<const std::size_t> erased) {
  std::vector<bool> mask(n, false);
  for (std::size_t e : erased) {
    require(e < n, "erased coordinate out of range");
    require(!mask[e], "duplicate erased coordinate");
    mask[e] = true;
  }
  return mask;
}

DecodeResult finish(const GabidulinCode& code, std::vector<Element> message,
                    std::span<const Element> received,
                    std::span<const std::size_t> erased) {
  const Field& f = code.field();
  DecodeResult out;
  out.codeword = code.encode(message);
  out.message = std::move(message);
  out.erased_discrepancy.reserve(erased.size());
  for (std::size_t e : erased) {
    out.erased_discrepancy.push_back(f.sub(received[e], out.codeword[e]));
  }
  return out;
}

}  // namespace

GabidulinCode::GabidulinCode(Field field, std::size_t n, std::size_t k)
    : GabidulinCode(field, default_points(field, n), k) {}

GabidulinCode::GabidulinCode(Field field, std::vector<Element> points,
                             std::size_t k)
    : field_(std::move(field)), points_(std::move(points)), k_(k) {
  require(!points_.empty(), "code length must be positive");
  require(k_ >= 1 && k_ <= points_.size(), "code dimension must be in 1..n");
  require(points_.size() <= field_.s(), "Gabidulin codes require n <= s");
  require(rank_weight(field_, points_) == points_.size(),
          "evaluation points must be GF(q)-linearly independent");
}

Matrix GabidulinCode::generator_matrix() const {
  Matrix g(k_, length());
  for (std::size_t j = 0; j < length(); ++j) {
    Element x = points_[j];
    for (std::size_t i = 0; i < k_; ++i) {
      g(i, j) = x;
      x = field_.frobenius(x, 1);
    }
  }
  return g;
}

std::vector<Element> GabidulinCode::encode(std::span<const Element> message) const {
  require(message.size() == k_, "message length must equal code dimension",
          ErrorCode::kSpecMismatch);
  return evaluate(LinPoly(std::vector<Element>(message.begin(), message.end())));
}

std::vector<Element> GabidulinCode::evaluate(const LinPoly& p) const {
  std::vector<Element> out(length());
  for (std::size_t j = 0; j < length(); ++j) out[j] = lp_eval(field_, p, points_[j]);
  return out;
}

std::optional<std::vector<Element>> GabidulinCode::interpolate(
    std::span<const std::size_t> coords, std::span<const Element> values) const {
  require(coords.size() == values.size(), "interpolate: size mismatch");
  require(coords.size() >= k_, "interpolate: need at least k coordinates");
  // Rows: one equation per coordinate, sum_i m_i pts[c]^(q^i) = value.
  Matrix a(coords.size(), k_);
  for (std::size_t r = 0; r < coords.size(); ++r) {
    require(coords[r] < length(), "interpolate: coordinate out of range");
    Element x = points_[coords[r]];
    for (std::size_t i = 0; i < k_; ++i) {
      a(r, i) = x;
      x = field_.frobenius(x, 1);
    }
  }
  try {
    const auto sol = solve_linear(field_, a, Matrix::column_vector(values));
    return sol.x.column(0);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInconsistentSystem) return std::nullopt;
    throw;
  }
}

std::optional<std::vector<Element>> GabidulinCode::message_of(
    std::span<const Element> word) const {
  require(word.size() == length(), "word length must equal code length",
          ErrorCode::kSpecMismatch);
  std::vector<std::size_t> all(length());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return interpolate(all, word);
}

GabidulinCode star_code(const GabidulinCode& c, const GabidulinCode& d) {
  require(c.field() == d.field(), "star_code: field mismatch",
          ErrorCode::kSpecMismatch);
  require(c.points() == d.points(), "star_code: evaluation points differ",
          ErrorCode::kSpecMismatch);
  const std::size_t k = c.dimension() + d.dimension() - 1;
  require(k <= c.length(), "star_code: dimension k_C + k_D - 1 exceeds n");
  return GabidulinCode(c.field(), c.points(), k);
}

std::optional<DecodeResult> erasure_decode(const GabidulinCode& code,
                                           std::span<const Element> received,
                                           std::span<const std::size_t> erased) {
  const std::size_t n = code.length();
  require(received.size() == n, "received length must equal code length",
          ErrorCode::kSpecMismatch);
  require(erased.size() <= n - code.dimension(),
          "more erasures than n - k");
  const auto mask = erased_mask(n, erased);
  std::vector<std::size_t> coords;
  std::vector<Element> values;
  for (std::size_t j = 0; j < n; ++j) {
    if (mask[j]) continue;
    coords.push_back(j);
    values.push_back(received[j]);
  }
  auto message = code.interpolate(coords, values);
  if (!message) return std::nullopt;
  return finish(code, std::move(*message), received, erased);
}

std::optional<DecodeResult> error_erasure_decode(
    const GabidulinCode& code, std::span<const Element> received,
    std::span<const std::size_t> erased, std::size_t max_errors) {
  const std::size_t n = code.length();
  const std::size_t k = code.dimension();
  require(received.size() == n, "received length must equal code length",
          ErrorCode::kSpecMismatch);
  require(2 * max_errors + erased.size() <= code.min_distance() - 1,
          "error/erasure budget exceeds 2*eps + tau <= d - 1");
  if (max_errors == 0) return erasure_decode(code, received, erased);

  const Field& f = code.field();
  const auto mask = erased_mask(n, erased);
  std::vector<Element> pts, ys;
  for (std::size_t j = 0; j < n; ++j) {
    if (mask[j]) continue;
    pts.push_back(code.points()[j]);
    ys.push_back(received[j]);
  }
  // Welch-Berlekamp key equation on the punctured code:
  //   V(y_j) = N(a_j),  q-deg V <= eps,  q-deg N <= k - 1 + eps,
  // whose solutions satisfy N = V ∘ f for the transmitted message f.
  const std::size_t eps = max_errors;
  const std::size_t nv = eps + 1;
  const std::size_t nn = k + eps;
  Matrix sys(pts.size(), nv + nn);
  for (std::size_t r = 0; r < pts.size(); ++r) {
    Element y = ys[r];
    for (std::size_t a = 0; a < nv; ++a) {
      sys(r, a) = y;
      y = f.frobenius(y, 1);
    }
    Element x = pts[r];
    for (std::size_t b = 0; b < nn; ++b) {
      sys(r, nv + b) = f.neg(x);
      x = f.frobenius(x, 1);
    }
  }
  const Matrix ker = kernel(f, sys);
  for (std::size_t col = 0; col < ker.cols(); ++col) {
    std::vector<Element> v(nv), nvec(nn);
    for (std::size_t a = 0; a < nv; ++a) v[a] = ker(a, col);
    for (std::size_t b = 0; b < nn; ++b) nvec[b] = ker(nv + b, col);
    const LinPoly vp(std::move(v));
    if (vp.is_zero()) continue;
    const auto quotient = lp_left_divide(f, LinPoly(std::move(nvec)), vp);
    if (!quotient || quotient->q_degree() >= static_cast<long long>(k)) continue;
    std::vector<Element> message(k, 0);
    for (std::size_t i = 0; i < k; ++i) message[i] = quotient->coeff(i);
    DecodeResult out = finish(code, std::move(message), received, erased);
    std::vector<Element> diff;
    for (std::size_t j = 0; j < n; ++j) {
      if (!mask[j]) diff.push_back(f.sub(received[j], out.codeword[j]));
    }
    if (rank_weight(f, diff) <= eps) return out;
  }
  return std::nullopt;
}

}  // namespace rmpir
