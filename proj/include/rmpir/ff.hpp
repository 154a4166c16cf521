#pragma once

// Finite-field tower GF(q) ⊂ GF(q^s) and dense linear algebra over it.
//
// Elements of GF(q^s) are stored in polynomial basis: an Element is the
// integer sum_i c_i * p^i where c_i is the coefficient of z^i. For p = 2 this
// is the familiar bit-vector encoding. The base field GF(q) is the set of
// elements with only a constant term, so base-field matrices use the same
// Matrix type with entries < p.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmpir/error.hpp"
#include "rmpir/rng.hpp"

namespace rmpir {

using Element = std::uint32_t;

/// Description of GF(q^s) as GF(q)[z] / (modulus). Only prime q is supported
/// (b = 1); the modulus is listed low-to-high and must be monic of degree s.
struct FieldSpec {
  unsigned p = 2;
  unsigned b = 1;
  unsigned s = 1;
  std::vector<unsigned> modulus;

  bool operator==(const FieldSpec&) const = default;
};

namespace detail {
struct FieldTables;
}

/// GF(q^s) with q = p. Cheap to copy; arithmetic tables are shared.
class Field {
 public:
  explicit Field(FieldSpec spec);

  /// GF(2^3) mod z^3+z+1, GF(2^5) mod z^5+z^2+1, GF(2^8) mod
  /// z^8+z^4+z^3+z^2+1.
  static Field gf8();
  static Field gf32();
  static Field gf256();
  /// Binary field GF(2^s) with a built-in primitive modulus (s in 1..20).
  static Field binary(unsigned s);

  const FieldSpec& spec() const noexcept;
  unsigned p() const noexcept;
  unsigned q() const noexcept { return p(); }
  unsigned s() const noexcept;
  /// Number of elements q^s.
  std::uint32_t order() const noexcept;

  Element zero() const noexcept { return 0; }
  Element one() const noexcept { return 1; }
  /// The class of z, a root of the modulus.
  Element alpha() const noexcept;

  bool contains(Element a) const noexcept { return a < order(); }
  bool in_base(Element a) const noexcept { return a < p(); }

  Element add(Element a, Element b) const;
  Element sub(Element a, Element b) const;
  Element neg(Element a) const;
  Element mul(Element a, Element b) const;
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, std::uint64_t e) const;
  /// a^(q^i); i is reduced modulo s.
  Element frobenius(Element a, long long i) const;

  std::vector<unsigned> coefficients(Element a) const;
  Element from_coefficients(std::span<const unsigned> coeffs) const;
  Element from_coefficients(std::initializer_list<unsigned> coeffs) const {
    return from_coefficients(std::span<const unsigned>(coeffs.begin(), coeffs.size()));
  }

  /// Human-readable polynomial in alpha, e.g. "a^3 + a^2 + 1".
  std::string to_string(Element a) const;

  Element random(Rng& rng) const {
    return static_cast<Element>(rng.below(order()));
  }
  Element random_nonzero(Rng& rng) const {
    return static_cast<Element>(1 + rng.below(order() - 1));
  }
  Element random_base(Rng& rng) const {
    return static_cast<Element>(rng.below(p()));
  }

  bool operator==(const Field& other) const;

 private:
  std::shared_ptr<const detail::FieldTables> t_;
};

/// Row-major dense matrix of field elements.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Element> data);

  static Matrix identity(std::size_t n);
  static Matrix row_vector(std::span<const Element> v);
  static Matrix column_vector(std::span<const Element> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Element& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  Element operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<Element> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const Element> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<Element> column(std::size_t c) const;
  std::vector<Element> row_copy(std::size_t r) const {
    const auto v = row(r);
    return {v.begin(), v.end()};
  }

  const std::vector<Element>& data() const noexcept { return data_; }

  bool is_zero() const;

  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr,
               std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& src);
  Matrix transpose() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

/// Horizontal concatenation (A | B).
Matrix hconcat(const Matrix& a, const Matrix& b);
/// Vertical concatenation (A ; B).
Matrix vconcat(const Matrix& a, const Matrix& b);
/// Block-diagonal assembly.
Matrix block_diagonal(std::span<const Matrix> blocks);

Matrix add(const Field& f, const Matrix& a, const Matrix& b);
Matrix sub(const Field& f, const Matrix& a, const Matrix& b);
Matrix multiply(const Field& f, const Matrix& a, const Matrix& b);
Matrix scale(const Field& f, Element c, const Matrix& a);

/// Each GF(q^s) entry (i,j) becomes base rows i*s .. i*s+s-1 of column j,
/// coefficients low-to-high.
Matrix expand(const Field& f, const Matrix& m);
/// Inverse of expand; rows must be a multiple of s and entries in GF(q).
Matrix compress(const Field& f, const Matrix& m);

/// Rank over GF(q^s).
std::size_t rank_ext(const Field& f, const Matrix& m);
/// Rank over GF(q) of expand(m). For a single row this is the rank weight.
std::size_t rank_base(const Field& f, const Matrix& m);
/// Rank weight of a vector over GF(q^s).
std::size_t rank_weight(const Field& f, std::span<const Element> v);

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(const Field& f, Matrix& m);

struct LinearSolution {
  /// One solution x (cols(A) x cols(b)).
  Matrix x;
  /// Dimension of the right kernel of A.
  std::size_t kernel_dim = 0;
};

/// Solves A x = b. Throws Error(kInconsistentSystem) when b is outside the
/// column space of A.
LinearSolution solve_linear(const Field& f, const Matrix& a, const Matrix& b);

/// Basis of the right kernel {x : A x = 0}, one basis vector per column.
Matrix kernel(const Field& f, const Matrix& a);

/// Inverse of a square matrix, or nullopt if singular.
std::optional<Matrix> inverse(const Field& f, const Matrix& a);

/// Solves x A = target for a row vector x, or nullopt if target is not in
/// the row space of A.
std::optional<std::vector<Element>> solve_left(const Field& f, const Matrix& a,
                                               std::span<const Element> target);

Matrix random_matrix(const Field& f, Rng& rng, std::size_t rows,
                     std::size_t cols);
/// Uniform entries from the base field GF(q).
Matrix random_base_matrix(const Field& f, Rng& rng, std::size_t rows,
                          std::size_t cols);
/// L * R with L rows x r of full column rank and R r x cols of full row rank.
Matrix random_matrix_of_rank(const Field& f, Rng& rng, std::size_t rows,
                             std::size_t cols, std::size_t r);

}  // namespace rmpir
