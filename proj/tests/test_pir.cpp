#include <map>
#include <set>

#include "doctest.h"
#include "rmpir/pir.hpp"

using namespace rmpir;

namespace {

const SystemParams kSmall{.m = 2, .l = 3, .n = 3, .k = 2, .t = 1};
const SystemParams kMedium{.m = 2, .l = 4, .n = 8, .k = 3, .t = 2};
const SystemParams kErr{.m = 2, .l = 8, .n = 8, .k = 2, .t = 1,
                        .variant = Variant::kErrored, .epsilon = 2, .tau = 0};

struct Fixture {
  Scheme scheme;
  FileSet files;
  EncodedStorage storage;

  Fixture(const Field& f, const SystemParams& p, std::uint64_t seed)
      : scheme(f, p), files(make_files(f, p, seed)),
        storage(encode_storage(files, scheme.storage_code(), p.l)) {}

  static FileSet make_files(const Field& f, const SystemParams& p, std::uint64_t seed) {
    Rng rng(seed);
    return FileSet::random(f, rng, p.m, p.beta(), p.k);
  }
};

std::vector<std::optional<Matrix>> respond_all(const Fixture& fx, const Matrix& d_q,
                                               const LinkRealization& links) {
  const Field& f = fx.scheme.field();
  const auto queries = lift_query(d_q, fx.scheme.params().l);
  std::vector<std::optional<Matrix>> out(queries.size());
  for (std::size_t j = 0; j < queries.size(); ++j) {
    if (auto r = server_respond(f, fx.storage, j, transmit_uplink(f, j, queries[j], links))) {
      out[j] = transmit_downlink(f, j, *r, links);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("random part rows are query codewords") {
  const Fixture fx(Field::gf256(), kMedium, 1);
  const std::size_t rows = kMedium.m * kMedium.beta();
  CHECK(random_part_from(fx.scheme, Matrix(rows, 4)).is_zero());
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Matrix d = build_random_part(fx.scheme, rng);
    REQUIRE(d.rows() == rows);
    for (std::size_t r = 0; r < rows; ++r) REQUIRE(fx.scheme.query_code().contains(d.row(r)));
  }
  CHECK_THROWS_AS(random_part_from(fx.scheme, Matrix(rows, 3)), Error);
}

TEST_CASE("error-free selectors") {
  {
    const Fixture fx(Field::gf8(), kSmall, 1);
    // round 1, file 1: (e^1 ; 0)
    Matrix expect(3, 2);
    expect(0, 0) = 1;
    CHECK(errorfree_selector(fx.scheme, 0, errorfree_band(kSmall, 0)) == expect);
  }
  const Fixture fx(Field::gf256(), kMedium, 1);
  const Matrix e = errorfree_selector(fx.scheme, 0, errorfree_band(kMedium, 0));
  CHECK(e.rows() == 8);
  CHECK(e.cols() == 4);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK((e(r, c) != 0) == (r < 2 && r == c));
    }
  }
  CHECK(e(0, 0) == 1);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto band = errorfree_band(kMedium, i);
    CHECK(band == std::vector<BandEntry>{{0, i}, {1, i + 1}});
    const Matrix sel = errorfree_selector(fx.scheme, 1, band);
    for (std::size_t r = 0; r < 8; ++r) {
      const bool in_band = r >= i && r < i + 2;
      CHECK((sel.row_copy(r) != std::vector<Element>(4, 0)) == in_band);
    }
  }
  CHECK_THROWS_AS(errorfree_selector(fx.scheme, 0, {{0, 1}, {1, 1}}), Error);
  CHECK_THROWS_AS(errorfree_selector(fx.scheme, 2, {}), Error);
}

TEST_CASE("lifting") {
  const Field f = Field::gf256();
  Rng rng(3);
  const Matrix d_q = random_matrix(f, rng, 8, 4);
  const auto lifted = lift_query(d_q, 4);
  REQUIRE(lifted.size() == 4);
  Matrix stacked(0, 4);
  for (const Matrix& q : lifted) {
    CHECK(q.block(0, 0, 2, 2) == Matrix::identity(2));
    stacked = vconcat(stacked, q.block(0, 2, 2, 4));
  }
  CHECK(stacked == d_q);
  const auto single = lift_query(random_matrix(f, rng, 3, 2), 3);
  CHECK(single[1](0, 0) == 1);
  CHECK(single[1].cols() == 3);
}

TEST_CASE("server responses") {
  const Field f = Field::gf256();
  const Fixture fx(f, kMedium, 4);
  Rng rng(5);
  const Matrix d_q = random_matrix(f, rng, 8, 4);
  const auto queries = lift_query(d_q, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    const auto r = server_respond(f, fx.storage, j, queries[j]);
    REQUIRE(r);
    CHECK(r->block(0, 0, 2, 4) == hconcat(Matrix::identity(2), Matrix::identity(2)));
    for (std::size_t i = 0; i < 2; ++i) {
      Element expect = 0;
      for (std::size_t w = 0; w < 4; ++w) {
        expect = f.add(expect, lp_eval(f, fx.storage.stripe_map(w), d_q(2 * j + i, w)));
      }
      CHECK((*r)(i, 4) == expect);
    }
  }
  CHECK_FALSE(server_respond(f, fx.storage, 0, Matrix(2, 6)).has_value());

  const FileSet zeros(2, 3, {Matrix(2, 3), Matrix(2, 3)});
  const EncodedStorage empty = encode_storage(zeros, fx.scheme.storage_code(), 4);
  const auto r = server_respond(f, empty, 2, queries[2]);
  REQUIRE(r);
  CHECK(r->column(4) == std::vector<Element>{0, 0});
}

TEST_CASE("aggregation flags missing and singular blocks") {
  const Field f = Field::gf256();
  const Fixture fx(f, kMedium, 6);
  Rng rng(7);
  const Matrix d_q = random_matrix(f, rng, 8, 4);
  LinkRealization links = sample_links(f, rng, ChannelConfig{}, kMedium);
  auto received = respond_all(fx, d_q, links);
  const RoundObservation all = aggregate(f, 2, received);
  CHECK(all.unavailable().empty());
  CHECK(all.downloaded == 8);

  received[1].reset();
  const RoundObservation missing = aggregate(f, 2, received);
  CHECK(missing.unavailable() == std::vector<std::size_t>{2, 3});
  CHECK(missing.downloaded == 6);

  // Small system: a'_2 = 0 leaves an all-zero row and an erased coordinate
  const Fixture small(Field::gf8(), kSmall, 8);
  LinkRealization l2 = sample_links(Field::gf8(), rng, ChannelConfig{}, kSmall);
  l2.a_prime[1] = Matrix(1, 1);
  const auto rec2 = respond_all(small, random_matrix(Field::gf8(), rng, 3, 2), l2);
  REQUIRE(rec2[1]);
  CHECK(rec2[1]->is_zero());
  CHECK(aggregate(Field::gf8(), 1, rec2).unavailable() == std::vector<std::size_t>{1});

  // a_2 = 0: the server receives nothing usable and stays silent
  LinkRealization l3 = sample_links(Field::gf8(), rng, ChannelConfig{}, kSmall);
  l3.a[2] = Matrix(1, 1);
  const auto rec3 = respond_all(small, random_matrix(Field::gf8(), rng, 3, 2), l3);
  CHECK_FALSE(rec3[2].has_value());
}

TEST_CASE("dense invertible channels are undone exactly") {
  const Field f = Field::gf256();
  const Fixture fx(f, kMedium, 9);
  Rng rng(10);
  const ChannelConfig cfg{.mode = TransferMode::kFullRank};
  for (int i = 0; i < 50; ++i) {
    const Matrix d_q = random_matrix(f, rng, 8, 4);
    const auto ident = aggregate(f, 2, respond_all(fx, d_q, sample_links(f, rng, {}, kMedium)));
    const auto dense = aggregate(f, 2, respond_all(fx, d_q, sample_links(f, rng, cfg, kMedium)));
    CHECK(ident.values == dense.values);
  }
}

TEST_CASE("error-free round retrieval") {
  const Field f = Field::gf256();
  const Fixture fx(f, kMedium, 11);
  Rng rng(12);
  const Matrix& y = fx.storage.codewords();
  for (std::size_t file = 0; file < 2; ++file) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto band = errorfree_band(kMedium, i);
      const Matrix d_q = add(f, build_random_part(fx.scheme, rng).transpose(),
                             errorfree_selector(fx.scheme, file, band));
      const ChannelConfig cfg{.mode = TransferMode::kFullRank};
      const auto obs = aggregate(f, 2, respond_all(fx, d_q, sample_links(f, rng, cfg, kMedium)));
      const RoundOutcome out = retrieve_errorfree_round(fx.scheme, obs, band);
      REQUIRE(out.decoded);
      REQUIRE(out.symbols.size() == 2);
      for (const auto& [entry, value] : out.symbols) {
        CHECK(value == y(stripe_row(2, file, entry.stripe), entry.coord));
      }
    }
  }

  // one band coordinate lost: one of the two stripes still comes back
  {
    const auto band = errorfree_band(kMedium, 1);
    const Matrix d_q = add(f, build_random_part(fx.scheme, rng).transpose(),
                           errorfree_selector(fx.scheme, 0, band));
    auto obs = aggregate(f, 2, respond_all(fx, d_q, sample_links(f, rng, {}, kMedium)));
    obs.values[2].reset();
    const RoundOutcome out = retrieve_errorfree_round(fx.scheme, obs, band);
    REQUIRE(out.decoded);
    REQUIRE(out.symbols.size() == 1);
    CHECK(out.symbols[0].first == BandEntry{0, 1});
    CHECK(out.symbols[0].second == y(0, 1));
  }
  // Small system: losing a coordinate outside the band exceeds the budget
  {
    const Fixture small(Field::gf8(), kSmall, 13);
    const auto band = errorfree_band(kSmall, 0);
    const Matrix d_q = add(Field::gf8(), build_random_part(small.scheme, rng).transpose(),
                           errorfree_selector(small.scheme, 0, band));
    auto obs = aggregate(Field::gf8(), 1,
                         respond_all(small, d_q, sample_links(Field::gf8(), rng, {}, kSmall)));
    obs.values[2].reset();
    const RoundOutcome out = retrieve_errorfree_round(small.scheme, obs, band);
    CHECK_FALSE(out.decoded);
    CHECK(out.symbols.empty());
  }
}

TEST_CASE("GF(8) three-server system end to end") {
  const Fixture fx(Field::gf8(), kSmall, 14);
  for (std::size_t file = 0; file < 2; ++file) {
    Rng rng(15 + file);
    const ProtocolResult res = run_protocol(fx.scheme, fx.storage, {}, file, rng);
    REQUIRE(res.success);
    CHECK(*res.file == fx.files.file(file));
    CHECK(res.rounds.size() == 2);
    CHECK(res.stages == 1);
    CHECK(res.retrieved * 3 == res.downloaded);  // rate 1/3
    CHECK(res.first_stage_complete());
  }
  CHECK(closed_form_rate(fx.scheme) == doctest::Approx(1.0 / 3));
}

TEST_CASE("GF(256) four-server system end to end") {
  const Fixture fx(Field::gf256(), kMedium, 16);
  Rng rng(17);
  const ProtocolResult res = run_protocol(fx.scheme, fx.storage, {}, 1, rng);
  REQUIRE(res.success);
  CHECK(*res.file == fx.files.file(1));
  CHECK(res.rounds.size() == 3);
  CHECK(res.downloaded == 24);
  CHECK(res.retrieved == 6);
  CHECK(res.rate() == doctest::Approx(0.25));
  CHECK(closed_form_rate(fx.scheme) == doctest::Approx(0.25));
}

TEST_CASE("random invertible channels always recover the file") {
  for (int seed = 0; seed < 100; ++seed) {
    const Fixture fx(Field::gf256(), kMedium, 100 + seed);
    Rng rng(200 + seed);
    const ChannelConfig cfg{.mode = TransferMode::kFullRank};
    const ProtocolResult res = run_protocol(fx.scheme, fx.storage, cfg, seed % 2, rng);
    REQUIRE(res.success);
    REQUIRE(*res.file == fx.files.file(seed % 2));
  }
  for (int seed = 0; seed < 100; ++seed) {
    const Fixture fx(Field::gf256(), kErr, 300 + seed);
    Rng rng(400 + seed);
    const ChannelConfig cfg{.mode = TransferMode::kFullRank};
    const ProtocolResult res = run_protocol(fx.scheme, fx.storage, cfg, seed % 2, rng);
    REQUIRE(res.success);
    REQUIRE(*res.file == fx.files.file(seed % 2));
    CHECK(res.rate() == doctest::Approx(2.0 / 8));
  }
}

TEST_CASE("staged retrieval fills in lost symbols without repeats") {
  const Fixture fx(Field::gf256(), kMedium, 18);
  const ChannelConfig cfg{.mode = TransferMode::kUniformDiagonal};
  int staged = 0, ok = 0;
  for (int seed = 0; seed < 300; ++seed) {
    Rng rng(500 + seed);
    const ProtocolResult res = run_protocol(fx.scheme, fx.storage, cfg, 0, rng);
    if (!res.success) {
      CHECK(res.stages == 4);
      continue;
    }
    ++ok;
    CHECK(*res.file == fx.files.file(0));
    if (res.stages > 1) ++staged;
    // each (stripe, coordinate) pair is held at most once
    std::set<std::pair<std::size_t, std::size_t>> held;
    for (const RoundRecord& r : res.rounds) {
      CHECK(r.requested.size() <= 2);
      CHECK(r.recovered.size() == r.retrieved);
      for (const BandEntry& b : r.recovered) {
        CHECK(held.insert({b.stripe, b.coord}).second);
      }
    }
  }
  CHECK(staged > 0);
  CHECK(ok >= 295);

  // a forced erasure in every round outside the band defeats a single stage
  const ChannelConfig always{.mode = TransferMode::kFullRank, .erasures = 1};
  ProtocolOptions one{.max_stages = 1};
  Rng rng(600);
  const ProtocolResult res = run_protocol(fx.scheme, fx.storage, always, 0, rng, one);
  CHECK(res.stages == 1);
  CHECK_FALSE(res.success);
}

TEST_CASE("errored schedule admissibility") {
  CHECK(check_errored_schedule(kErr, 8).admissible);
  SystemParams p = kErr;  // k = 3, beta = 2: k does not divide beta
  p.k = 3;
  p.epsilon = 1;
  p.tau = 1;
  REQUIRE(p.beta() == 2);
  const ScheduleCheck c = check_errored_schedule(p, 8);
  CHECK_FALSE(c.admissible);
  CHECK(c.reason.find("below the window") != std::string::npos);
  CHECK_THROWS_AS(Scheme(Field::gf256(), p), Error);

  p.tau = 0;
  p.epsilon = 1;
  p.k = 3;
  p.n = 8;
  REQUIRE(p.beta() == 3);
  CHECK(check_errored_schedule(p, 12).admissible);
  const ScheduleCheck wrap = check_errored_schedule(p, 8);
  CHECK_FALSE(wrap.admissible);
  CHECK(wrap.reason.find("q-degree s") != std::string::npos);

  // round terms follow i*beta - delta*k + k + t*rho - 1
  const auto t1 = errored_terms(kErr, 0);
  REQUIRE(t1.size() == 1);
  CHECK(t1[0].exponent == 2 - 2 + 2 + 1 - 1);
  const auto t2 = errored_terms(kErr, 1);
  REQUIRE(t2.size() == 2);
  CHECK(t2[0].exponent == 4);
  CHECK(t2[1].exponent == 2);
}

TEST_CASE("errored selector rows are G(n,1) codewords") {
  const Fixture fx(Field::gf256(), kErr, 19);
  const GabidulinCode g1(Field::gf256(), 8, 1);
  for (std::size_t i = 0; i < 2; ++i) {
    const Matrix e = errored_selector(fx.scheme, 1, i);
    for (const SelectorTerm& t : errored_terms(kErr, i)) {
      const auto col = e.column(stripe_row(2, 1, t.stripe));
      CHECK(col == fx.scheme.storage_code().evaluate(LinPoly::monomial(1, t.exponent)));
    }
    for (std::size_t c = 0; c < 2; ++c) CHECK(e.column(c) == std::vector<Element>(8, 0));
  }
}

TEST_CASE("errored variant corrects injected errors and erasures") {
  const Fixture fx(Field::gf256(), kErr, 20);
  const std::vector<ChannelConfig> cells{
      {.mode = TransferMode::kFullRank, .uplink_errors = 2},
      {.mode = TransferMode::kFullRank, .uplink_errors = 1, .downlink_errors = 1},
      {.mode = TransferMode::kFullRank, .downlink_errors = 2},
      {.mode = TransferMode::kFullRank, .erasures = 2, .uplink_errors = 1},
      {.mode = TransferMode::kFullRank, .erasures = 4},
  };
  for (const ChannelConfig& cfg : cells) {
    for (int seed = 0; seed < 50; ++seed) {
      Rng rng(700 + seed);
      const ProtocolResult res = run_protocol(fx.scheme, fx.storage, cfg, 1, rng);
      REQUIRE(res.success);
      REQUIRE(*res.file == fx.files.file(1));
      for (const RoundRecord& r : res.rounds) {
        CHECK(r.error_rank <= cfg.uplink_errors + cfg.downlink_errors);
        CHECK(r.erased.size() == cfg.erasures);
      }
    }
  }
}

TEST_CASE("colluders' view does not depend on the requested file") {
  // q = 2, s = 2, m = 2, beta = 1, n = 2, k = 1, t = 1, rho = 1
  const Field f = Field::binary(2);
  const SystemParams p{.m = 2, .l = 2, .n = 2, .k = 1, .t = 1};
  const Scheme scheme(f, p);
  REQUIRE(scheme.beta() == 1);
  for (std::size_t server = 0; server < 2; ++server) {
    std::map<std::vector<Element>, int> hist[2];
    for (std::size_t file = 0; file < 2; ++file) {
      const Matrix sel = errorfree_selector(scheme, file, errorfree_band(p, 0));
      for (Element u0 = 0; u0 < 4; ++u0) {
        for (Element u1 = 0; u1 < 4; ++u1) {
          const Matrix u(2, 1, {u0, u1});
          const Matrix d_q = add(f, random_part_from(scheme, u).transpose(), sel);
          ++hist[file][colluder_view(d_q, 1, {server})];
        }
      }
    }
    CHECK(hist[0] == hist[1]);
    CHECK(hist[0].size() == 16);
  }
  CHECK(colluder_view(Matrix(2, 2), 1, {}).empty());
}
