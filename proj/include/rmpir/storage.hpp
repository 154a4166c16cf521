#pragma once

// Distributed storage: m files of beta stripes each, encoded row-wise with a
// G(n, k) code and split column-wise over l servers of rho sub-servers.
//
// Indexing is 0-based throughout: file f in [0, m), stripe delta in
// [0, beta), coordinate (sub-server) c in [0, n), server j in [0, l).

#include <iosfwd>
#include <string>
#include <vector>

#include "rmpir/gabidulin.hpp"

namespace rmpir {

enum class Variant { kErrorFree, kErrored };

struct SystemParams {
  std::size_t m = 1;  // files
  std::size_t l = 1;  // servers
  std::size_t n = 1;  // storage code length (sub-servers)
  std::size_t k = 1;  // storage code dimension
  std::size_t t = 1;  // colluding servers
  Variant variant = Variant::kErrorFree;
  std::size_t epsilon = 0;  // designed rank-error budget (errored variant)
  std::size_t tau = 0;      // designed erasure budget (errored variant)

  std::size_t rho() const { return n / l; }
  /// Stripes per file: n - k - t*rho + 1, minus 2*epsilon + tau when errored.
  /// Zero if the parameters leave no room.
  std::size_t beta() const;
  /// Dimension of the query code: t * rho.
  std::size_t query_dim() const { return t * rho(); }
  /// Dimension of the code seen by the user in one round.
  std::size_t answer_dim() const;

  /// Throws Error(kConfig) when the parameters violate a structural invariant
  /// for the given field.
  void validate(const Field& field) const;

  bool operator==(const SystemParams&) const = default;
};

const char* variant_name(Variant v);
Variant parse_variant(const std::string& name);

/// m files, each a beta x k matrix over GF(q^s) whose rows are the stripes.
class FileSet {
 public:
  FileSet() = default;
  FileSet(std::size_t beta, std::size_t k, std::vector<Matrix> files);

  static FileSet random(const Field& field, Rng& rng, std::size_t m,
                        std::size_t beta, std::size_t k);

  std::size_t files() const noexcept { return files_.size(); }
  std::size_t beta() const noexcept { return beta_; }
  std::size_t k() const noexcept { return k_; }
  const Matrix& file(std::size_t f) const { return files_.at(f); }
  std::vector<Element> stripe(std::size_t f, std::size_t delta) const {
    return file(f).row_copy(delta);
  }

  bool operator==(const FileSet&) const = default;

 private:
  std::size_t beta_ = 0;
  std::size_t k_ = 0;
  std::vector<Matrix> files_;
};

/// Row index of stripe delta of file f in the striped matrix.
inline std::size_t stripe_row(std::size_t beta, std::size_t f, std::size_t delta) {
  return beta * f + delta;
}

/// mβ x k matrix X with file f's stripes on rows beta*f .. beta*f + beta - 1.
Matrix stripe_files(const FileSet& files);
FileSet unstripe(const Matrix& x, std::size_t beta);

class EncodedStorage {
 public:
  EncodedStorage(GabidulinCode code, std::size_t servers, Matrix x);

  const GabidulinCode& code() const noexcept { return code_; }
  std::size_t servers() const noexcept { return servers_; }
  std::size_t rho() const noexcept { return code_.length() / servers_; }
  /// Message rows X (each row is the coefficient vector of a stripe map).
  const Matrix& messages() const noexcept { return x_; }
  /// Y = X * G, mβ x n.
  const Matrix& codewords() const noexcept { return y_; }
  /// Y_j: columns j*rho .. j*rho + rho - 1.
  Matrix block(std::size_t j) const;
  /// Column c of Y.
  std::vector<Element> sub_server_view(std::size_t c) const;
  /// The q-polynomial whose evaluations form row r of Y.
  LinPoly stripe_map(std::size_t row) const {
    return LinPoly(x_.row_copy(row));
  }

 private:
  GabidulinCode code_;
  std::size_t servers_;
  Matrix x_;
  Matrix y_;
};

EncodedStorage encode_storage(const FileSet& files, const GabidulinCode& code,
                              std::size_t servers);

/// Binary file-set blob: "RMPF", then little-endian uint32 p, s, m, beta, k,
/// then for every file, stripe and entry the s base-field coefficients of the
/// symbol (low to high), one byte each.
void write_fileset(std::ostream& out, const Field& field, const FileSet& files);
FileSet read_fileset(std::istream& in, const Field& field);
void save_fileset(const std::string& path, const Field& field,
                  const FileSet& files);
FileSet load_fileset(const std::string& path, const Field& field);

}  // namespace rmpir
