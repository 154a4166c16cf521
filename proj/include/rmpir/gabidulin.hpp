#pragma once

// Gabidulin codes G(n, k) over GF(q^s): encoding through the Moore matrix,
// star-product code formation, and rank-metric erasure / error-erasure
// decoding.

#include <optional>
#include <span>
#include <vector>

#include "rmpir/ff.hpp"
#include "rmpir/linpoly.hpp"

namespace rmpir {

class GabidulinCode {
 public:
  /// Code on the default points (1, a, a^2, ..., a^(n-1)).
  GabidulinCode(Field field, std::size_t n, std::size_t k);
  /// Code on explicit points; they must be GF(q)-linearly independent.
  GabidulinCode(Field field, std::vector<Element> points, std::size_t k);

  const Field& field() const noexcept { return field_; }
  std::size_t length() const noexcept { return points_.size(); }
  std::size_t dimension() const noexcept { return k_; }
  std::size_t min_distance() const noexcept { return length() - k_ + 1; }
  const std::vector<Element>& points() const noexcept { return points_; }

  /// k x n Moore matrix, entry (i, j) = points[j]^(q^i).
  Matrix generator_matrix() const;

  std::vector<Element> encode(std::span<const Element> message) const;
  /// Evaluation of an arbitrary q-polynomial at the code points.
  std::vector<Element> evaluate(const LinPoly& p) const;

  /// Message whose codeword matches word, or nullopt if word is not a codeword.
  std::optional<std::vector<Element>> message_of(
      std::span<const Element> word) const;
  bool contains(std::span<const Element> word) const {
    return message_of(word).has_value();
  }

  /// Message interpolated from the given k (or more) coordinates; the
  /// coordinates must be distinct. Returns nullopt if the values over-determine
  /// an inconsistent system.
  std::optional<std::vector<Element>> interpolate(
      std::span<const std::size_t> coords,
      std::span<const Element> values) const;

  bool operator==(const GabidulinCode& other) const {
    return field_ == other.field_ && k_ == other.k_ && points_ == other.points_;
  }

 private:
  Field field_;
  std::vector<Element> points_;
  std::size_t k_;
};

/// Code whose codewords are (outer(inner(a_j)))_j for outer in c, inner in d:
/// a G(n, k_c + k_d - 1) code on the same points.
GabidulinCode star_code(const GabidulinCode& c, const GabidulinCode& d);

struct DecodeResult {
  std::vector<Element> message;
  std::vector<Element> codeword;
  /// received - codeword at each erased coordinate, in the order given.
  std::vector<Element> erased_discrepancy;
};

/// Unique codeword agreeing with received outside the erased coordinates.
/// Requires |erased| <= n - k; nullopt if the surviving coordinates are not
/// consistent with any codeword.
std::optional<DecodeResult> erasure_decode(const GabidulinCode& code,
                                           std::span<const Element> received,
                                           std::span<const std::size_t> erased);

/// Corrects rank errors of rank <= max_errors on the non-erased coordinates.
/// Requires 2 * max_errors + |erased| <= d - 1. nullopt on decoding failure.
std::optional<DecodeResult> error_erasure_decode(
    const GabidulinCode& code, std::span<const Element> received,
    std::span<const std::size_t> erased, std::size_t max_errors);

}  // namespace rmpir
