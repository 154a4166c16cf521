#pragma once

// Random linear network channels between the user and each server.
//
// Every server j sees a rho x rho uplink transfer matrix A_j and a downlink
// transfer matrix A'_j, drawn fresh each round. On top of that the channel can
// force rank erasures at chosen sub-server coordinates and inject additive
// rank errors on the uplink (into the query payload) and the downlink (into
// the response payload).

#include <string>
#include <vector>

#include "rmpir/storage.hpp"

namespace rmpir {

enum class TransferMode {
  kIdentity,
  /// Diagonal blocks with independent uniform GF(q^s) diagonal entries; a
  /// zero entry erases that coordinate.
  kUniformDiagonal,
  /// Dense blocks with independent uniform GF(q^s) entries.
  kUniformDense,
  /// Uniform among invertible dense blocks.
  kFullRank,
  /// Dense blocks of prescribed rank per server.
  kRankProfile,
};

const char* transfer_mode_name(TransferMode m);
TransferMode parse_transfer_mode(const std::string& name);

struct ChannelConfig {
  TransferMode mode = TransferMode::kIdentity;
  /// Rank of A_j / A'_j per server in rank-profile mode; empty means rho.
  std::vector<std::size_t> uplink_ranks;
  std::vector<std::size_t> downlink_ranks;
  /// Coordinates erased per round on top of what the transfer mode does.
  std::size_t erasures = 0;
  /// Rank-1 error injections per round, each at its own coordinate.
  std::size_t uplink_errors = 0;
  std::size_t downlink_errors = 0;

  /// Throws Error(kConfig) if the budgets or rank profiles do not fit params.
  void validate(const SystemParams& params) const;

  bool operator==(const ChannelConfig&) const = default;
};

/// One rank-1 additive error: `row` is added to the given local row of the
/// server's block.
struct Injection {
  std::size_t server = 0;
  std::size_t local_row = 0;
  std::vector<Element> row;
};

struct LinkRealization {
  std::vector<Matrix> a;        // A_j, rho x rho
  std::vector<Matrix> a_prime;  // A'_j, rho x rho
  /// Added to the payload block (A_j D_Qj) of the received query.
  std::vector<Injection> uplink_noise;
  /// Added to the payload column of the received response.
  std::vector<Injection> downlink_noise;
  /// Coordinates erased by construction (forced erasures).
  std::vector<std::size_t> forced_erasures;

  /// Rank of the assembled block-diagonal A and A'.
  std::size_t uplink_rank(const Field& f) const;
  std::size_t downlink_rank(const Field& f) const;
};

/// Draws a fresh realization. query_width is the number of payload columns of
/// every lifted query (m * beta).
LinkRealization sample_links(const Field& field, Rng& rng,
                             const ChannelConfig& config,
                             const SystemParams& params);

/// (A_j | A_j D_Qj) plus uplink noise, for a lifted query (I | D_Qj).
Matrix transmit_uplink(const Field& field, std::size_t server,
                       const Matrix& query, const LinkRealization& links);

/// A'_j R_j plus downlink noise on the last column.
Matrix transmit_downlink(const Field& field, std::size_t server,
                         const Matrix& response, const LinkRealization& links);

}  // namespace rmpir
