#include <cmath>

#include "doctest.h"
#include "rmpir/channel.hpp"

using namespace rmpir;

namespace {

const SystemParams kMedium{.m = 2, .l = 4, .n = 8, .k = 3, .t = 2};

}  // namespace

TEST_CASE("mode names round trip") {
  for (TransferMode m : {TransferMode::kIdentity, TransferMode::kUniformDiagonal,
                         TransferMode::kUniformDense, TransferMode::kFullRank,
                         TransferMode::kRankProfile}) {
    CHECK(parse_transfer_mode(transfer_mode_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_transfer_mode("bogus"), Error);
}

TEST_CASE("identity mode is the identity map") {
  const Field f = Field::gf256();
  Rng rng(1);
  const LinkRealization links = sample_links(f, rng, ChannelConfig{}, kMedium);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(links.a[j] == Matrix::identity(2));
    CHECK(links.a_prime[j] == Matrix::identity(2));
    const Matrix q = hconcat(Matrix::identity(2), random_matrix(f, rng, 2, 4));
    CHECK(transmit_uplink(f, j, q, links) == q);
    const Matrix r = random_matrix(f, rng, 2, 5);
    CHECK(transmit_downlink(f, j, r, links) == r);
  }
}

TEST_CASE("lifted query arrives as (A | A D)") {
  const Field f = Field::gf256();
  Rng rng(2);
  const ChannelConfig cfg{.mode = TransferMode::kUniformDense};
  const LinkRealization links = sample_links(f, rng, cfg, kMedium);
  const Matrix d = random_matrix(f, rng, 2, 4);
  const Matrix rec = transmit_uplink(f, 1, hconcat(Matrix::identity(2), d), links);
  CHECK(rec.block(0, 0, 2, 2) == links.a[1]);
  CHECK(rec.block(0, 2, 2, 4) == multiply(f, links.a[1], d));
}

TEST_CASE("rank-profile mode") {
  const Field f = Field::gf256();
  Rng rng(3);
  ChannelConfig cfg{.mode = TransferMode::kRankProfile,
                    .uplink_ranks = {2, 1, 2, 2},
                    .downlink_ranks = {2, 2, 2, 0}};
  CHECK_NOTHROW(cfg.validate(kMedium));
  for (int i = 0; i < 20; ++i) {
    const LinkRealization links = sample_links(f, rng, cfg, kMedium);
    CHECK(links.uplink_rank(f) == 7);
    CHECK(links.downlink_rank(f) == 6);
  }
  cfg.uplink_ranks = {3, 2, 2, 2};
  CHECK_THROWS_AS(cfg.validate(kMedium), Error);
  cfg.uplink_ranks = {2, 2};
  CHECK_THROWS_AS(cfg.validate(kMedium), Error);
}

TEST_CASE("forced erasures zero a column of the downlink block") {
  const Field f = Field::gf256();
  Rng rng(4);
  const ChannelConfig cfg{.mode = TransferMode::kFullRank, .erasures = 3};
  for (int i = 0; i < 50; ++i) {
    const LinkRealization links = sample_links(f, rng, cfg, kMedium);
    REQUIRE(links.forced_erasures.size() == 3);
    for (std::size_t c : links.forced_erasures) {
      CHECK(links.a_prime[c / 2].column(c % 2) == std::vector<Element>{0, 0});
    }
    CHECK(links.downlink_rank(f) == 5);
  }
}

TEST_CASE("zero downlink block gives an all-zero received block") {
  const Field f = Field::gf8();
  const SystemParams small{.m = 2, .l = 3, .n = 3, .k = 2, .t = 1};
  Rng rng(5);
  LinkRealization links = sample_links(f, rng, ChannelConfig{}, small);
  links.a_prime[1] = Matrix(1, 1);
  CHECK(transmit_downlink(f, 1, random_matrix(f, rng, 1, 3), links).is_zero());
}

TEST_CASE("error injections") {
  const Field f = Field::gf256();
  SystemParams p{.m = 2, .l = 8, .n = 8, .k = 2, .t = 1,
                 .variant = Variant::kErrored, .epsilon = 2, .tau = 0};
  ChannelConfig cfg{.uplink_errors = 1, .downlink_errors = 1};
  CHECK_NOTHROW(cfg.validate(p));
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const LinkRealization links = sample_links(f, rng, cfg, p);
    REQUIRE(links.uplink_noise.size() == 1);
    REQUIRE(links.downlink_noise.size() == 1);
    const auto& up = links.uplink_noise[0];
    const auto& down = links.downlink_noise[0];
    CHECK(up.server != down.server);  // distinct coordinates (rho = 1)
    const Matrix q = hconcat(Matrix::identity(1), random_matrix(f, rng, 1, 4));
    const Matrix rec = transmit_uplink(f, up.server, q, links);
    CHECK(rec(0, 0) == 1);  // lift block untouched
    CHECK(rank_ext(f, sub(f, rec, q)) == 1);
    const Matrix r = random_matrix(f, rng, 1, 3);
    const Matrix rr = transmit_downlink(f, down.server, r, links);
    const Matrix diff = sub(f, rr, r);
    CHECK(diff(0, 0) == 0);
    CHECK(diff(0, 1) == 0);
    CHECK(diff(0, 2) != 0);
  }
  cfg.uplink_errors = 2;
  CHECK_THROWS_AS(cfg.validate(p), Error);
  cfg = ChannelConfig{.erasures = 2, .uplink_errors = 1};
  CHECK_NOTHROW(cfg.validate(p));
  cfg.erasures = 3;
  CHECK_THROWS_AS(cfg.validate(p), Error);
  CHECK_THROWS_AS((ChannelConfig{.downlink_errors = 1}.validate(kMedium)), Error);
}

TEST_CASE("same seed gives the same realization sequence") {
  const Field f = Field::gf256();
  const ChannelConfig cfg{.mode = TransferMode::kUniformDense, .erasures = 1};
  Rng a(77), b(77);
  for (int i = 0; i < 5; ++i) {
    const auto la = sample_links(f, a, cfg, kMedium);
    const auto lb = sample_links(f, b, cfg, kMedium);
    CHECK(la.a == lb.a);
    CHECK(la.a_prime == lb.a_prime);
    CHECK(la.forced_erasures == lb.forced_erasures);
  }
}

TEST_CASE("uniform diagonal mode: all 16 entries nonzero with probability (1-1/256)^16") {
  const Field f = Field::gf256();
  const ChannelConfig cfg{.mode = TransferMode::kUniformDiagonal};
  Rng rng(8);
  const int trials = 100000;
  int full = 0;
  for (int t = 0; t < trials; ++t) {
    const auto links = sample_links(f, rng, cfg, kMedium);
    if (links.uplink_rank(f) == 8 && links.downlink_rank(f) == 8) ++full;
  }
  const double p2 = std::pow(255.0 / 256.0, 16);
  const double sigma = std::sqrt(p2 * (1 - p2) / trials);
  CHECK(std::abs(static_cast<double>(full) / trials - p2) <= 3 * sigma);
}
