#pragma once

// The PIR protocol over coded storage and random linear network channels.
//
// A round's query is D_Q = D^T + E (n x mβ over GF(q^s)). D's rows are
// codewords of the query code G(n, t*rho) and hide the selector E from any t
// colluding servers. Sub-server c answers with sum_w f_w(D_Q[c, w]), where f_w
// is the q-polynomial of stored row w. Because composition maps
// G(n, k) x G(n, t*rho) into G(n, k + t*rho - 1), the answers form a codeword
// of that code plus whatever E contributes at a few coordinates.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rmpir/channel.hpp"

namespace rmpir {

/// Field, parameters and the three codes a run needs.
class Scheme {
 public:
  Scheme(Field field, SystemParams params);

  const Field& field() const noexcept { return field_; }
  const SystemParams& params() const noexcept { return params_; }
  std::size_t beta() const noexcept { return beta_; }
  /// Storage code C = G(n, k).
  const GabidulinCode& storage_code() const noexcept { return storage_; }
  /// Query code G(n, t*rho).
  const GabidulinCode& query_code() const noexcept { return query_; }
  /// Code of one round's answers: G(n, k + t*rho - 1) error-free,
  /// G(n, k + t*rho + beta - 1) errored.
  const GabidulinCode& answer_code() const noexcept { return answer_; }

 private:
  Field field_;
  SystemParams params_;
  std::size_t beta_;
  GabidulinCode storage_;
  GabidulinCode query_;
  GabidulinCode answer_;
};

/// One requested storage symbol: stripe `stripe` of the file at sub-server
/// `coord`.
struct BandEntry {
  std::size_t stripe = 0;
  std::size_t coord = 0;
  bool operator==(const BandEntry&) const = default;
};

/// Stage-one band of round i: stripe delta at coordinate i + delta.
std::vector<BandEntry> errorfree_band(const SystemParams& params, std::size_t round);

/// D = U * G_query for U in GF(q^s)^{mβ x t*rho}; each row is a query codeword.
Matrix random_part_from(const Scheme& scheme, const Matrix& u);
Matrix build_random_part(const Scheme& scheme, Rng& rng);

/// Error-free selector (n x mβ): entry (c, beta*f + delta) = alpha_c for each
/// band entry, i.e. the identity map evaluated at that coordinate, so the
/// sub-server's answer picks up f_w(alpha_c) = Y[w, c].
Matrix errorfree_selector(const Scheme& scheme, std::size_t file,
                          const std::vector<BandEntry>& entries);

/// Term of the errored selector: stripe delta carried by z^(q^exponent).
struct SelectorTerm {
  std::size_t stripe = 0;
  std::size_t exponent = 0;
};

/// Active terms of round i (0-based) of the errored variant: stripes delta
/// (1-based) up to ceil((i+1) * beta / k), exponent
/// (i+1)*beta - delta*k + k + t*rho - 1.
std::vector<SelectorTerm> errored_terms(const SystemParams& params, std::size_t round);
Matrix errored_selector(const Scheme& scheme, std::size_t file, std::size_t round);

struct ScheduleCheck {
  bool admissible = true;
  std::string reason;
};
/// Simulates the errored schedule symbolically. Every coefficient of every
/// stripe must land alone, unknown, in some round's top-beta window, never
/// below the window (where it would mix with the query interference) and never
/// above it while still unknown, nor past q-degree s - 1 where z^(q^s) = z.
ScheduleCheck check_errored_schedule(const SystemParams& params, std::size_t s);

/// Q_j = (I_rho | rows j*rho .. j*rho + rho - 1 of D_Q).
std::vector<Matrix> lift_query(const Matrix& d_q, std::size_t servers);

/// Server j's answer to the query it received, (I | Â | p) with p the column
/// of per-sub-server payloads, or nullopt when the received query is all zero.
/// For local row r the server recovers the intended query row as x * M with
/// x Â = e_r; when e_r is outside the row space of Â the payload is zero.
std::optional<Matrix> server_respond(const Field& field,
                                     const EncodedStorage& storage,
                                     std::size_t server, const Matrix& received);

/// Per-coordinate payloads the user could unscramble from one round.
struct RoundObservation {
  std::vector<std::optional<Element>> values;
  /// Payload symbols received (rho per responding server).
  std::size_t downloaded = 0;
  std::vector<std::size_t> unavailable() const;
};

/// Combines the received responses (nullopt = nothing arrived). Coordinate r
/// of server j is available when e_r lies in the row spaces of both A'_j and
/// A'_j Â_j; its payload is then x * y with x A'_j = e_r.
RoundObservation aggregate(const Field& field, std::size_t rho,
                           const std::vector<std::optional<Matrix>>& received);

struct RoundOutcome {
  bool decoded = false;
  /// Erased coordinates handed to the decoder.
  std::vector<std::size_t> erased;
  /// Error-free: recovered band entries with their storage symbols.
  std::vector<std::pair<BandEntry, Element>> symbols;
  /// Errored: recovered (stripe, coefficient index) -> coefficient.
  std::map<std::pair<std::size_t, std::size_t>, Element> coefficients;
};

/// Erasure-decodes an error-free round: the band coordinates and the
/// unavailable ones are erased, the band discrepancies are the requested
/// symbols. Fails outright when more than n - (k + t*rho - 1) coordinates are
/// erased.
RoundOutcome retrieve_errorfree_round(const Scheme& scheme,
                                      const RoundObservation& obs,
                                      const std::vector<BandEntry>& entries);

/// Error-erasure decodes an errored round after removing the terms whose
/// coefficients are already known, then reads the new coefficients off the
/// top-beta window.
RoundOutcome retrieve_errored_round(
    const Scheme& scheme, const RoundObservation& obs, std::size_t round,
    const std::map<std::pair<std::size_t, std::size_t>, Element>& known);

struct ProtocolOptions {
  /// Stages of queries allowed, the first included.
  std::size_t max_stages = 4;
};

struct RoundRecord {
  std::size_t stage = 0;
  std::size_t round = 0;
  std::vector<BandEntry> requested;  // error-free only
  std::vector<BandEntry> recovered;  // error-free only
  std::vector<std::size_t> erased;
  std::size_t uplink_rank = 0;
  std::size_t downlink_rank = 0;
  std::size_t downloaded = 0;
  std::size_t retrieved = 0;
  bool decoded = false;
  /// Rank weight of the answer perturbation on available coordinates.
  std::size_t error_rank = 0;
};

struct ProtocolResult {
  bool success = false;
  /// beta x k; set when success.
  std::optional<Matrix> file;
  std::vector<RoundRecord> rounds;
  std::size_t stages = 0;
  std::size_t downloaded = 0;
  /// Storage symbols (error-free) or coefficients (errored) retrieved.
  std::size_t retrieved = 0;

  /// retrieved / downloaded.
  double rate() const {
    return downloaded == 0 ? 0.0 : static_cast<double>(retrieved) / downloaded;
  }
  /// True when every first-stage round decoded every requested symbol.
  bool first_stage_complete() const;
};

ProtocolResult run_protocol(const Scheme& scheme, const EncodedStorage& storage,
                            const ChannelConfig& channel, std::size_t file,
                            Rng& rng, const ProtocolOptions& options = {});

/// Closed-form rate: beta / n for both variants.
double closed_form_rate(const Scheme& scheme);

/// Rows of D_Q delivered to the given whole servers, concatenated in the given
/// order. The lift block is the constant I_rho and carries nothing.
std::vector<Element> colluder_view(const Matrix& d_q, std::size_t rho,
                                   const std::vector<std::size_t>& servers);

}  // namespace rmpir
