#include "rmpir/ff.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace rmpir {

namespace {

// Largest field for which log/antilog tables are built.
constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 20;

bool is_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

using Poly = std::vector<unsigned>;  // coefficients over GF(p), low-to-high

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo a monic divisor over GF(p).
Poly poly_mod(Poly a, const Poly& m, unsigned p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const unsigned lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = (a[shift + i] + p - (lead * m[i]) % p) % p;
    }
    trim(a);
  }
  return a;
}

bool is_irreducible(const Poly& modulus, unsigned p) {
  const std::size_t s = modulus.size() - 1;
  if (s <= 1) return true;
  // Trial division by every monic polynomial of degree 1..s/2.
  for (std::size_t deg = 1; deg <= s / 2; ++deg) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < deg; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly d(deg + 1, 0);
      std::uint64_t v = idx;
      for (std::size_t i = 0; i < deg; ++i) {
        d[i] = static_cast<unsigned>(v % p);
        v /= p;
      }
      d[deg] = 1;
      if (poly_mod(modulus, d, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

namespace detail {

struct FieldTables {
  FieldSpec spec;
  std::uint32_t order = 0;
  std::vector<std::uint32_t> exp;  // size 2*(order-1)
  std::vector<std::uint32_t> log;  // log[0] unused
  std::vector<std::uint64_t> p_pow_mod;  // p^i mod (order-1), i < s
  std::vector<std::uint32_t> digit_scale;  // p^i

  Poly to_poly(Element a) const {
    Poly r(spec.s, 0);
    for (unsigned i = 0; i < spec.s; ++i) {
      r[i] = a % spec.p;
      a /= spec.p;
    }
    return r;
  }

  Element from_poly(const Poly& c) const {
    Element r = 0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * spec.p + c[i];
    return r;
  }

  Element slow_mul(Element a, Element b) const {
    const Poly pa = to_poly(a);
    const Poly pb = to_poly(b);
    Poly prod(2 * spec.s, 0);
    for (unsigned i = 0; i < spec.s; ++i) {
      for (unsigned j = 0; j < spec.s; ++j) {
        prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % spec.p;
      }
    }
    Poly m(spec.modulus.begin(), spec.modulus.end());
    Poly r = poly_mod(prod, m, spec.p);
    r.resize(spec.s, 0);
    return from_poly(r);
  }

  Element slow_pow(Element a, std::uint64_t e) const {
    Element r = 1;
    while (e) {
      if (e & 1) r = slow_mul(r, a);
      a = slow_mul(a, a);
      e >>= 1;
    }
    return r;
  }
};

}  // namespace detail

Field::Field(FieldSpec spec) {
  require(is_prime(spec.p), "field characteristic must be prime");
  require(spec.b == 1,
          "only prime base fields (b = 1) are supported; got b = " +
              std::to_string(spec.b));
  require(spec.s >= 1, "extension degree s must be >= 1");
  require(spec.modulus.size() == spec.s + 1,
          "modulus must have s+1 coefficients (low-to-high)");
  require(spec.modulus.back() == 1, "modulus must be monic");
  for (unsigned c : spec.modulus) {
    require(c < spec.p, "modulus coefficient out of range");
  }
  std::uint64_t order = 1;
  for (unsigned i = 0; i < spec.s; ++i) {
    order *= spec.p;
    require(order <= kMaxOrder, "field too large (q^s must be <= 2^20)");
  }
  require(is_irreducible(Poly(spec.modulus.begin(), spec.modulus.end()),
                         spec.p),
          "modulus is reducible over GF(p)");

  auto t = std::make_shared<detail::FieldTables>();
  t->spec = spec;
  t->order = static_cast<std::uint32_t>(order);
  t->digit_scale.resize(spec.s);
  {
    std::uint32_t sc = 1;
    for (unsigned i = 0; i < spec.s; ++i) {
      t->digit_scale[i] = sc;
      sc *= spec.p;
    }
  }

  const std::uint64_t group = order - 1;
  // Prime factors of the multiplicative group order.
  std::vector<std::uint64_t> factors;
  {
    std::uint64_t g = group;
    for (std::uint64_t d = 2; d * d <= g; ++d) {
      if (g % d == 0) {
        factors.push_back(d);
        while (g % d == 0) g /= d;
      }
    }
    if (g > 1) factors.push_back(g);
  }
  Element generator = 0;
  if (group == 1) {
    generator = 1;
  } else {
    for (Element cand = 2; cand < order; ++cand) {
      bool ok = true;
      for (std::uint64_t f : factors) {
        if (t->slow_pow(cand, group / f) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        generator = cand;
        break;
      }
    }
  }
  require(generator != 0, "no primitive element found", ErrorCode::kInternal);

  t->exp.resize(2 * group);
  t->log.assign(order, 0);
  Element x = 1;
  for (std::uint64_t i = 0; i < group; ++i) {
    t->exp[i] = x;
    t->log[x] = static_cast<std::uint32_t>(i);
    x = t->slow_mul(x, generator);
  }
  for (std::uint64_t i = group; i < 2 * group; ++i) t->exp[i] = t->exp[i - group];

  t->p_pow_mod.resize(spec.s);
  {
    std::uint64_t v = 1 % group;
    for (unsigned i = 0; i < spec.s; ++i) {
      t->p_pow_mod[i] = v;
      v = (v * spec.p) % group;
    }
  }
  t_ = std::move(t);
}

Field Field::gf8() { return Field(FieldSpec{2, 1, 3, {1, 1, 0, 1}}); }
Field Field::gf32() { return Field(FieldSpec{2, 1, 5, {1, 0, 1, 0, 0, 1}}); }
Field Field::gf256() {
  return Field(FieldSpec{2, 1, 8, {1, 0, 1, 1, 1, 0, 0, 0, 1}});
}

Field Field::binary(unsigned s) {
  // Primitive trinomials/pentanomials, exponent lists without the leading term.
  static const std::vector<std::vector<unsigned>> kTaps = {
      {},        {0},       {1, 0},    {1, 0},       {1, 0},
      {2, 0},    {1, 0},    {1, 0},    {4, 3, 2, 0}, {4, 0},
      {3, 0},    {2, 0},    {6, 4, 1, 0}, {4, 3, 1, 0}, {5, 3, 1, 0},
      {1, 0},    {5, 3, 2, 0}, {3, 0}, {7, 0},     {5, 2, 1, 0},
      {3, 0}};
  require(s >= 1 && s <= 20, "binary field degree must be in 1..20");
  FieldSpec spec{2, 1, s, std::vector<unsigned>(s + 1, 0)};
  spec.modulus[s] = 1;
  for (unsigned e : kTaps[s]) spec.modulus[e] = 1;
  return Field(std::move(spec));
}

const FieldSpec& Field::spec() const noexcept { return t_->spec; }
unsigned Field::p() const noexcept { return t_->spec.p; }
unsigned Field::s() const noexcept { return t_->spec.s; }
std::uint32_t Field::order() const noexcept { return t_->order; }

Element Field::alpha() const noexcept {
  if (s() == 1) return (p() - t_->spec.modulus[0]) % p();
  return static_cast<Element>(p());
}

Element Field::add(Element a, Element b) const {
  const unsigned p = t_->spec.p;
  if (p == 2) return a ^ b;
  Element r = 0;
  for (unsigned i = 0; i < t_->spec.s; ++i) {
    r += ((a % p + b % p) % p) * t_->digit_scale[i];
    a /= p;
    b /= p;
  }
  return r;
}

Element Field::neg(Element a) const {
  const unsigned p = t_->spec.p;
  if (p == 2) return a;
  Element r = 0;
  for (unsigned i = 0; i < t_->spec.s; ++i) {
    r += ((p - a % p) % p) * t_->digit_scale[i];
    a /= p;
  }
  return r;
}

Element Field::sub(Element a, Element b) const {
  return t_->spec.p == 2 ? (a ^ b) : add(a, neg(b));
}

Element Field::mul(Element a, Element b) const {
  if (a == 0 || b == 0) return 0;
  return t_->exp[t_->log[a] + t_->log[b]];
}

Element Field::inv(Element a) const {
  if (a == 0) fail(ErrorCode::kDivisionByZero, "inverse of zero");
  const std::uint32_t group = t_->order - 1;
  return t_->exp[(group - t_->log[a]) % group];
}

Element Field::pow(Element a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t group = t_->order - 1;
  return t_->exp[(static_cast<std::uint64_t>(t_->log[a]) * (e % group)) % group];
}

Element Field::frobenius(Element a, long long i) const {
  if (a == 0) return 0;
  const long long s = t_->spec.s;
  const long long r = ((i % s) + s) % s;
  const std::uint64_t group = t_->order - 1;
  return t_->exp[(static_cast<std::uint64_t>(t_->log[a]) * t_->p_pow_mod[r]) %
                 group];
}

std::vector<unsigned> Field::coefficients(Element a) const {
  return t_->to_poly(a);
}

Element Field::from_coefficients(std::span<const unsigned> coeffs) const {
  require(coeffs.size() <= s(), "too many coefficients for field");
  Poly c(coeffs.begin(), coeffs.end());
  for (unsigned& v : c) v %= p();
  return t_->from_poly(c);
}

std::string Field::to_string(Element a) const {
  if (a == 0) return "0";
  const Poly c = t_->to_poly(a);
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (c[i] != 1 || i == 0) os << c[i];
    if (i >= 1) os << "a";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

bool Field::operator==(const Field& other) const {
  return t_ == other.t_ || t_->spec == other.t_->spec;
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Element> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(data_.size() == rows * cols, "matrix data size mismatch");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::row_vector(std::span<const Element> v) {
  return Matrix(1, v.size(), std::vector<Element>(v.begin(), v.end()));
}

Matrix Matrix::column_vector(std::span<const Element> v) {
  return Matrix(v.size(), 1, std::vector<Element>(v.begin(), v.end()));
}

std::vector<Element> Matrix::column(std::size_t c) const {
  std::vector<Element> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](Element e) { return e == 0; });
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                     std::size_t nc) const {
  require(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
  Matrix out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
  }
  return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& src) {
  require(r0 + src.rows() <= rows_ && c0 + src.cols() <= cols_,
          "set_block out of range");
  for (std::size_t r = 0; r < src.rows(); ++r) {
    for (std::size_t c = 0; c < src.cols(); ++c) {
      (*this)(r0 + r, c0 + c) = src(r, c);
    }
  }
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  }
  return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "hconcat row mismatch");
  Matrix out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

Matrix vconcat(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "vconcat column mismatch");
  Matrix out(a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

Matrix block_diagonal(std::span<const Matrix> blocks) {
  std::size_t rows = 0, cols = 0;
  for (const Matrix& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out(rows, cols);
  std::size_t r = 0, c = 0;
  for (const Matrix& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Matrix add(const Field& f, const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "add shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = f.add(a(r, c), b(r, c));
  }
  return out;
}

Matrix sub(const Field& f, const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "sub shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = f.sub(a(r, c), b(r, c));
  }
  return out;
}

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "multiply shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Element x = a(i, l);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) = f.add(out(i, j), f.mul(x, b(l, j)));
      }
    }
  }
  return out;
}

Matrix scale(const Field& f, Element c, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(r, j) = f.mul(c, a(r, j));
  }
  return out;
}

Matrix expand(const Field& f, const Matrix& m) {
  const std::size_t s = f.s();
  Matrix out(m.rows() * s, m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto c = f.coefficients(m(i, j));
      for (std::size_t b = 0; b < s; ++b) out(i * s + b, j) = c[b];
    }
  }
  return out;
}

Matrix compress(const Field& f, const Matrix& m) {
  const std::size_t s = f.s();
  require(m.rows() % s == 0, "compress: rows must be a multiple of s");
  Matrix out(m.rows() / s, m.cols());
  std::vector<unsigned> c(s);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      for (std::size_t b = 0; b < s; ++b) {
        require(f.in_base(m(i * s + b, j)), "compress: entry not in GF(q)");
        c[b] = m(i * s + b, j);
      }
      out(i, j) = f.from_coefficients(c);
    }
  }
  return out;
}

std::vector<std::size_t> row_reduce(const Field& f, Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    }
    const Element inv = f.inv(m(row, col));
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) = f.mul(m(row, c), inv);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row) continue;
      const Element factor = m(r, col);
      if (factor == 0) continue;
      for (std::size_t c = col; c < m.cols(); ++c) {
        m(r, c) = f.sub(m(r, c), f.mul(factor, m(row, c)));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank_ext(const Field& f, const Matrix& m) {
  Matrix tmp = m;
  return row_reduce(f, tmp).size();
}

std::size_t rank_base(const Field& f, const Matrix& m) {
  // Row operations restricted to GF(q) scalars keep entries in GF(q), so the
  // generic eliminator computes the GF(q) rank of the expansion.
  return rank_ext(f, expand(f, m));
}

std::size_t rank_weight(const Field& f, std::span<const Element> v) {
  return rank_base(f, Matrix::row_vector(v));
}

LinearSolution solve_linear(const Field& f, const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "solve_linear: shape mismatch");
  Matrix aug = hconcat(a, b);
  const auto pivots = row_reduce(f, aug);
  LinearSolution sol;
  sol.x = Matrix(a.cols(), b.cols());
  std::size_t rank = 0;
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] >= a.cols()) {
      fail(ErrorCode::kInconsistentSystem, "linear system is inconsistent");
    }
    ++rank;
    for (std::size_t j = 0; j < b.cols(); ++j) {
      sol.x(pivots[i], j) = aug(i, a.cols() + j);
    }
  }
  sol.kernel_dim = a.cols() - rank;
  return sol;
}

Matrix kernel(const Field& f, const Matrix& a) {
  Matrix r = a;
  const auto pivots = row_reduce(f, r);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  Matrix basis(a.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t fc = free_cols[k];
    basis(fc, k) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      basis(pivots[i], k) = f.neg(r(i, fc));
    }
  }
  return basis;
}

std::optional<Matrix> inverse(const Field& f, const Matrix& a) {
  require(a.rows() == a.cols(), "inverse of non-square matrix");
  const std::size_t n = a.rows();
  Matrix aug = hconcat(a, Matrix::identity(n));
  const auto pivots = row_reduce(f, aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  return aug.block(0, n, n, n);
}

std::optional<std::vector<Element>> solve_left(const Field& f, const Matrix& a,
                                               std::span<const Element> target) {
  require(target.size() == a.cols(), "solve_left: shape mismatch");
  try {
    const auto sol = solve_linear(f, a.transpose(), Matrix::column_vector(target));
    return sol.x.column(0);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInconsistentSystem) return std::nullopt;
    throw;
  }
}

Matrix random_matrix(const Field& f, Rng& rng, std::size_t rows,
                     std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = f.random(rng);
  }
  return m;
}

Matrix random_base_matrix(const Field& f, Rng& rng, std::size_t rows,
                          std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = f.random_base(rng);
  }
  return m;
}

Matrix random_matrix_of_rank(const Field& f, Rng& rng, std::size_t rows,
                             std::size_t cols, std::size_t r) {
  require(r <= std::min(rows, cols), "requested rank exceeds matrix shape");
  if (r == 0) return Matrix(rows, cols);
  for (;;) {
    Matrix left = random_matrix(f, rng, rows, r);
    if (rank_ext(f, left) != r) continue;
    Matrix right = random_matrix(f, rng, r, cols);
    if (rank_ext(f, right) != r) continue;
    Matrix m = multiply(f, left, right);
    if (rank_ext(f, m) == r) return m;
  }
}

}  // namespace rmpir
