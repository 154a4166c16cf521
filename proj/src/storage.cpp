#include "rmpir/storage.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

namespace rmpir {

std::size_t SystemParams::beta() const {
  if (l == 0 || n % l != 0) return 0;
  std::size_t used = k + t * rho();
  if (variant == Variant::kErrored) used += 2 * epsilon + tau;
  return used > n + 1 ? 0 : n + 1 - used;
}

std::size_t SystemParams::answer_dim() const {
  const std::size_t base = k + query_dim() - 1;
  return variant == Variant::kErrored ? base + beta() : base;
}

void SystemParams::validate(const Field& field) const {
  auto check = [](bool ok, const std::string& what) {
    require(ok, "invalid parameters: " + what, ErrorCode::kConfig);
  };
  check(m >= 1, "m must be at least 1");
  check(l >= 1 && n >= 1 && k >= 1 && t >= 1, "l, n, k, t must be positive");
  check(n % l == 0, "l must divide n");
  check(n <= field.s(), "n must not exceed the extension degree s");
  check(t <= l, "t must not exceed l");
  check(k + query_dim() - 1 < n, "k + t*rho - 1 must be below n");
  if (variant == Variant::kErrorFree) {
    check(epsilon == 0 && tau == 0, "epsilon and tau apply to the errored variant");
  }
  check(beta() >= 1, "beta = n - k - t*rho" +
                         std::string(variant == Variant::kErrored
                                         ? " - 2*epsilon - tau"
                                         : "") +
                         " + 1 must be at least 1");
}

const char* variant_name(Variant v) {
  return v == Variant::kErrorFree ? "errorfree" : "errored";
}

Variant parse_variant(const std::string& name) {
  if (name == "errorfree" || name == "error-free") return Variant::kErrorFree;
  if (name == "errored") return Variant::kErrored;
  fail(ErrorCode::kConfig, "unknown variant '" + name + "'");
}

FileSet::FileSet(std::size_t beta, std::size_t k, std::vector<Matrix> files)
    : beta_(beta), k_(k), files_(std::move(files)) {
  for (const Matrix& f : files_) {
    require(f.rows() == beta_ && f.cols() == k_,
            "every file must be a beta x k matrix", ErrorCode::kSpecMismatch);
  }
}

FileSet FileSet::random(const Field& field, Rng& rng, std::size_t m,
                        std::size_t beta, std::size_t k) {
  std::vector<Matrix> files;
  files.reserve(m);
  for (std::size_t f = 0; f < m; ++f) files.push_back(random_matrix(field, rng, beta, k));
  return FileSet(beta, k, std::move(files));
}

Matrix stripe_files(const FileSet& files) {
  Matrix x(files.files() * files.beta(), files.k());
  for (std::size_t f = 0; f < files.files(); ++f) {
    x.set_block(stripe_row(files.beta(), f, 0), 0, files.file(f));
  }
  return x;
}

FileSet unstripe(const Matrix& x, std::size_t beta) {
  require(beta >= 1 && x.rows() % beta == 0,
          "striped matrix rows must be a multiple of beta",
          ErrorCode::kSpecMismatch);
  std::vector<Matrix> files;
  for (std::size_t r = 0; r < x.rows(); r += beta) {
    files.push_back(x.block(r, 0, beta, x.cols()));
  }
  return FileSet(beta, x.cols(), std::move(files));
}

EncodedStorage::EncodedStorage(GabidulinCode code, std::size_t servers, Matrix x)
    : code_(std::move(code)), servers_(servers), x_(std::move(x)) {
  require(servers_ >= 1 && code_.length() % servers_ == 0,
          "server count must divide the code length");
  require(x_.cols() == code_.dimension(), "message rows must have length k",
          ErrorCode::kSpecMismatch);
  y_ = multiply(code_.field(), x_, code_.generator_matrix());
}

Matrix EncodedStorage::block(std::size_t j) const {
  require(j < servers_, "server index out of range");
  return y_.block(0, j * rho(), y_.rows(), rho());
}

std::vector<Element> EncodedStorage::sub_server_view(std::size_t c) const {
  require(c < code_.length(), "coordinate out of range");
  return y_.column(c);
}

EncodedStorage encode_storage(const FileSet& files, const GabidulinCode& code,
                              std::size_t servers) {
  require(files.k() == code.dimension(), "stripe length must equal k",
          ErrorCode::kSpecMismatch);
  return EncodedStorage(code, servers, stripe_files(files));
}

namespace {

constexpr std::array<char, 4> kMagic{'R', 'M', 'P', 'F'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v),
                              static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  require(in.good(), "truncated file-set header", ErrorCode::kIo);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_fileset(std::ostream& out, const Field& field, const FileSet& files) {
  require(field.p() <= 256, "blob format stores base symbols in one byte",
          ErrorCode::kIo);
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, field.p());
  put_u32(out, field.s());
  put_u32(out, static_cast<std::uint32_t>(files.files()));
  put_u32(out, static_cast<std::uint32_t>(files.beta()));
  put_u32(out, static_cast<std::uint32_t>(files.k()));
  for (std::size_t f = 0; f < files.files(); ++f) {
    for (Element e : files.file(f).data()) {
      for (unsigned c : field.coefficients(e)) out.put(static_cast<char>(c));
    }
  }
  require(out.good(), "failed writing file-set blob", ErrorCode::kIo);
}

FileSet read_fileset(std::istream& in, const Field& field) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  require(in.good() && magic == kMagic, "not a file-set blob (bad magic)",
          ErrorCode::kIo);
  const std::uint32_t p = get_u32(in), s = get_u32(in);
  require(p == field.p() && s == field.s(),
          "file-set blob was written for a different field", ErrorCode::kIo);
  const std::uint32_t m = get_u32(in), beta = get_u32(in), k = get_u32(in);
  std::vector<Matrix> files;
  std::vector<unsigned> coeffs(s);
  for (std::uint32_t f = 0; f < m; ++f) {
    Matrix file(beta, k);
    for (std::size_t r = 0; r < beta; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        for (auto& x : coeffs) {
          const int ch = in.get();
          require(ch != std::char_traits<char>::eof(), "truncated file-set blob",
                  ErrorCode::kIo);
          x = static_cast<unsigned>(ch);
          require(x < p, "symbol outside the base field", ErrorCode::kIo);
        }
        file(r, c) = field.from_coefficients(coeffs);
      }
    }
    files.push_back(std::move(file));
  }
  return FileSet(beta, k, std::move(files));
}

void save_fileset(const std::string& path, const Field& field,
                  const FileSet& files) {
  std::ofstream out(path, std::ios::binary);
  require(out.is_open(), "cannot open " + path + " for writing", ErrorCode::kIo);
  write_fileset(out, field, files);
}

FileSet load_fileset(const std::string& path, const Field& field) {
  std::ifstream in(path, std::ios::binary);
  require(in.is_open(), "cannot open " + path, ErrorCode::kIo);
  return read_fileset(in, field);
}

}  // namespace rmpir
