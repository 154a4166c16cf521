#include <sstream>

#include "doctest.h"
#include "rmpir/storage.hpp"

using namespace rmpir;

TEST_CASE("parameter derivation and validation") {
  const Field f8 = Field::gf8();
  SystemParams small{.m = 2, .l = 3, .n = 3, .k = 2, .t = 1};
  CHECK(small.rho() == 1);
  CHECK(small.beta() == 1);
  CHECK(small.answer_dim() == 2);
  CHECK_NOTHROW(small.validate(f8));

  SystemParams medium{.m = 2, .l = 4, .n = 8, .k = 3, .t = 1};
  CHECK(medium.rho() == 2);
  CHECK(medium.beta() == 4);
  CHECK(medium.answer_dim() == 4);
  CHECK_NOTHROW(medium.validate(Field::gf256()));
  CHECK_THROWS_AS(medium.validate(f8), Error);  // n > s

  SystemParams bad = medium;
  bad.l = 3;
  CHECK_THROWS_AS(bad.validate(Field::gf256()), Error);
  bad = medium;
  bad.t = 3;  // k + t*rho - 1 = 8
  CHECK_THROWS_AS(bad.validate(Field::gf256()), Error);

  SystemParams err{.m = 2, .l = 8, .n = 8, .k = 2, .t = 1,
                   .variant = Variant::kErrored, .epsilon = 2, .tau = 0};
  CHECK(err.beta() == 2);
  CHECK(err.answer_dim() == 4);
  CHECK_NOTHROW(err.validate(Field::gf256()));
  err.epsilon = 4;
  CHECK(err.beta() == 0);
  CHECK_THROWS_AS(err.validate(Field::gf256()), Error);
  try {
    err.validate(Field::gf256());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
  }
}

TEST_CASE("striping layout") {
  const Field f = Field::gf32();
  Rng rng(1);
  const FileSet one = FileSet::random(f, rng, 1, 1, 3);
  CHECK(stripe_files(one) == one.file(0));

  const FileSet files = FileSet::random(f, rng, 3, 2, 4);
  const Matrix x = stripe_files(files);
  CHECK(x.rows() == 6);
  for (std::size_t file = 0; file < 3; ++file) {
    for (std::size_t d = 0; d < 2; ++d) {
      CHECK(x.row_copy(stripe_row(2, file, d)) == files.stripe(file, d));
    }
  }
  for (int i = 0; i < 20; ++i) {
    const FileSet r = FileSet::random(f, rng, 1 + rng.below(4), 1 + rng.below(3), 3);
    CHECK(unstripe(stripe_files(r), r.beta()) == r);
  }
}

TEST_CASE("encoding and partition") {
  const Field f = Field::gf256();
  const GabidulinCode code(f, 8, 3);
  Rng rng(2);
  const FileSet zero(4, 3, {Matrix(4, 3), Matrix(4, 3)});
  CHECK(encode_storage(zero, code, 4).codewords().is_zero());

  const FileSet files = FileSet::random(f, rng, 2, 4, 3);
  const EncodedStorage st = encode_storage(files, code, 4);
  CHECK(st.rho() == 2);
  CHECK(st.codewords().rows() == 8);
  CHECK(st.codewords().cols() == 8);
  // overhead n/k in symbols
  CHECK(st.codewords().data().size() * 3 == stripe_files(files).data().size() * 8);

  Matrix reassembled = st.block(0);
  for (std::size_t j = 1; j < 4; ++j) reassembled = hconcat(reassembled, st.block(j));
  CHECK(reassembled == st.codewords());
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(st.block(j).column(0) == st.sub_server_view(2 * j));
    CHECK(st.block(j).column(1) == st.sub_server_view(2 * j + 1));
  }
  for (std::size_t r = 0; r < 8; ++r) {
    CHECK(code.evaluate(st.stripe_map(r)) == st.codewords().row_copy(r));
    // any k views determine the stripe; erase n - k random coordinates
    std::vector<std::size_t> erased;
    for (std::size_t c = 0; c < 8 && erased.size() < 5; ++c) {
      if (rng.below(2) == 0 || 8 - c == 5 - erased.size()) erased.push_back(c);
    }
    const auto dec = erasure_decode(code, st.codewords().row_copy(r), erased);
    REQUIRE(dec);
    CHECK(dec->message == stripe_files(files).row_copy(r));
  }

  // Three-server layout: three servers, one column each
  const GabidulinCode gc(Field::gf8(), 3, 2);
  const EncodedStorage small =
      encode_storage(FileSet::random(Field::gf8(), rng, 2, 1, 2), gc, 3);
  for (std::size_t j = 0; j < 3; ++j) CHECK(small.block(j).cols() == 1);
}

TEST_CASE("file-set blob round trip") {
  const Field f = Field::gf256();
  Rng rng(3);
  const FileSet files = FileSet::random(f, rng, 3, 2, 5);
  std::stringstream buf;
  write_fileset(buf, f, files);
  CHECK(buf.str().size() == 4 + 20 + 3 * 2 * 5 * 8);
  CHECK(read_fileset(buf, f) == files);

  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_fileset(bad, f), Error);
  std::stringstream other;
  write_fileset(other, Field::gf8(), FileSet::random(Field::gf8(), rng, 1, 1, 1));
  CHECK_THROWS_AS(read_fileset(other, f), Error);
  std::string truncated = buf.str().substr(0, 30);
  std::stringstream tr(truncated);
  CHECK_THROWS_AS(read_fileset(tr, f), Error);
}
