#include "rmpir/channel.hpp"

#include <algorithm>
#include <numeric>

namespace rmpir {

const char* transfer_mode_name(TransferMode m) {
  switch (m) {
    case TransferMode::kIdentity: return "identity";
    case TransferMode::kUniformDiagonal: return "uniform-diagonal";
    case TransferMode::kUniformDense: return "uniform-dense";
    case TransferMode::kFullRank: return "full-rank";
    case TransferMode::kRankProfile: return "rank-profile";
  }
  return "?";
}

TransferMode parse_transfer_mode(const std::string& name) {
  for (TransferMode m : {TransferMode::kIdentity, TransferMode::kUniformDiagonal,
                         TransferMode::kUniformDense, TransferMode::kFullRank,
                         TransferMode::kRankProfile}) {
    if (name == transfer_mode_name(m)) return m;
  }
  if (name == "uniform") return TransferMode::kUniformDiagonal;
  fail(ErrorCode::kConfig, "unknown channel mode '" + name + "'");
}

void ChannelConfig::validate(const SystemParams& params) const {
  auto check = [](bool ok, const std::string& what) {
    require(ok, "invalid channel: " + what, ErrorCode::kConfig);
  };
  const std::size_t rho = params.rho();
  for (const auto* ranks : {&uplink_ranks, &downlink_ranks}) {
    if (ranks->empty()) continue;
    check(mode == TransferMode::kRankProfile,
          "rank lists are only used in rank-profile mode");
    check(ranks->size() == params.l, "rank lists need one entry per server");
    for (std::size_t r : *ranks) check(r <= rho, "block rank exceeds rho");
  }
  const std::size_t errors = uplink_errors + downlink_errors;
  check(erasures + errors <= params.n, "more impaired coordinates than n");
  if (params.variant == Variant::kErrorFree) {
    check(errors == 0, "error injection requires the errored variant");
  } else {
    check(errors <= params.epsilon,
          "uplink_errors + downlink_errors exceeds epsilon");
    check(2 * errors + erasures <= 2 * params.epsilon + params.tau,
          "2*(errors) + erasures exceeds the designed 2*epsilon + tau");
  }
}

std::size_t LinkRealization::uplink_rank(const Field& f) const {
  return rank_ext(f, block_diagonal(a));
}

std::size_t LinkRealization::downlink_rank(const Field& f) const {
  return rank_ext(f, block_diagonal(a_prime));
}

namespace {

Matrix sample_block(const Field& f, Rng& rng, TransferMode mode, std::size_t rho,
                    std::size_t rank) {
  switch (mode) {
    case TransferMode::kIdentity:
      return Matrix::identity(rho);
    case TransferMode::kUniformDiagonal: {
      Matrix m(rho, rho);
      for (std::size_t i = 0; i < rho; ++i) m(i, i) = f.random(rng);
      return m;
    }
    case TransferMode::kUniformDense:
      return random_matrix(f, rng, rho, rho);
    case TransferMode::kFullRank:
      while (true) {
        Matrix m = random_matrix(f, rng, rho, rho);
        if (rank_ext(f, m) == rho) return m;
      }
    case TransferMode::kRankProfile:
      return random_matrix_of_rank(f, rng, rho, rho, rank);
  }
  fail(ErrorCode::kInternal, "unhandled transfer mode");
}

std::vector<Element> random_nonzero_vector(const Field& f, Rng& rng,
                                           std::size_t len) {
  std::vector<Element> v(len);
  do {
    for (auto& x : v) x = f.random(rng);
  } while (std::all_of(v.begin(), v.end(), [](Element e) { return e == 0; }));
  return v;
}

}  // namespace

LinkRealization sample_links(const Field& field, Rng& rng,
                             const ChannelConfig& config,
                             const SystemParams& params) {
  const std::size_t rho = params.rho();
  LinkRealization out;
  for (std::size_t j = 0; j < params.l; ++j) {
    const std::size_t ru = config.uplink_ranks.empty() ? rho : config.uplink_ranks[j];
    const std::size_t rd =
        config.downlink_ranks.empty() ? rho : config.downlink_ranks[j];
    out.a.push_back(sample_block(field, rng, config.mode, rho, ru));
    out.a_prime.push_back(sample_block(field, rng, config.mode, rho, rd));
  }

  // Distinct coordinates for erasures, uplink errors and downlink errors.
  const std::size_t impaired =
      config.erasures + config.uplink_errors + config.downlink_errors;
  std::vector<std::size_t> coords(params.n);
  std::iota(coords.begin(), coords.end(), 0);
  for (std::size_t i = 0; i < impaired; ++i) {
    std::swap(coords[i], coords[i + rng.below(params.n - i)]);
  }
  std::size_t next = 0;
  for (std::size_t e = 0; e < config.erasures; ++e, ++next) {
    const std::size_t c = coords[next];
    // Zeroing column c of A'_j removes row c of the response from everything
    // the user receives from server j.
    Matrix& ap = out.a_prime[c / rho];
    for (std::size_t r = 0; r < rho; ++r) ap(r, c % rho) = 0;
    out.forced_erasures.push_back(c);
  }
  const std::size_t width = params.m * params.beta();
  for (std::size_t e = 0; e < config.uplink_errors; ++e, ++next) {
    const std::size_t c = coords[next];
    out.uplink_noise.push_back({c / rho, c % rho, random_nonzero_vector(field, rng, width)});
  }
  for (std::size_t e = 0; e < config.downlink_errors; ++e, ++next) {
    const std::size_t c = coords[next];
    out.downlink_noise.push_back({c / rho, c % rho, {field.random_nonzero(rng)}});
  }
  return out;
}

Matrix transmit_uplink(const Field& field, std::size_t server,
                       const Matrix& query, const LinkRealization& links) {
  Matrix out = multiply(field, links.a.at(server), query);
  const std::size_t rho = links.a.at(server).rows();
  for (const Injection& inj : links.uplink_noise) {
    if (inj.server != server) continue;
    require(inj.row.size() + rho == query.cols(), "uplink noise width mismatch",
            ErrorCode::kSpecMismatch);
    for (std::size_t w = 0; w < inj.row.size(); ++w) {
      Element& x = out(inj.local_row, rho + w);
      x = field.add(x, inj.row[w]);
    }
  }
  return out;
}

Matrix transmit_downlink(const Field& field, std::size_t server,
                         const Matrix& response, const LinkRealization& links) {
  Matrix out = multiply(field, links.a_prime.at(server), response);
  for (const Injection& inj : links.downlink_noise) {
    if (inj.server != server) continue;
    Element& x = out(inj.local_row, out.cols() - 1);
    x = field.add(x, inj.row.at(0));
  }
  return out;
}

}  // namespace rmpir
