#pragma once

// Experiment driver: configuration, closed-form probabilities, Monte-Carlo
// estimation, privacy tests, the decoder-region scan and result output.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rmpir/pir.hpp"

namespace rmpir {

struct ExperimentConfig {
  FieldSpec field{2, 1, 8, {}};
  SystemParams params;
  ChannelConfig channel;
  /// roundtrip | success-probability | rate-sweep | privacy-test |
  /// decoder-region
  std::string kind = "roundtrip";
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  /// 0-based; the config file counts files from 1.
  std::size_t requested_file = 0;
  std::size_t max_stages = 4;
  /// Optional file-set blob; random files from the seed otherwise.
  std::string files_path;
  /// Extension degrees of the binary fields visited by rate-sweep.
  std::vector<unsigned> field_sizes{3, 6, 8};
  /// Worker threads for Monte-Carlo loops; 0 picks the hardware count.
  unsigned threads = 0;

  Field make_field() const;
  /// Throws Error(kConfig) when the configuration cannot run.
  void validate() const;
  /// Canonical JSON text of the whole configuration.
  std::string to_json() const;
  /// 16 hex digits identifying the canonical configuration.
  std::string digest() const;
};

const std::vector<std::string>& experiment_kinds();

/// Parses the JSON sections {field, params, channel, experiment}. Missing
/// keys take defaults; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  std::string experiment;
  std::string metric;
  std::size_t trials = 0;
  double measured = 0;
  /// Binomial or sample standard error; absent for exact quantities.
  std::optional<double> stderr_;
  std::optional<double> closed_form;
  std::string closed_form_label;
  /// Whether the row takes part in acceptance checking, and its verdict.
  bool checked = false;
  bool pass = true;
  double runtime_s = 0;
  std::string digest;
};

struct OutputOptions {
  /// Wall-clock runtimes make output files differ between identical runs, so
  /// they are written only on request.
  bool include_runtime = false;
};

/// Every closed form for the scheme, labelled with its origin. q_N = q^s.
std::vector<ResultRow> closed_forms(const Scheme& scheme);

/// Probability that a round under the uniform-diagonal channel recovers
/// exactly delta of the beta band symbols (delta >= 1): every non-band
/// coordinate survives and exactly beta - delta band coordinates are lost.
double round_partial_probability(const Scheme& scheme, std::size_t delta);
/// Sum over delta >= 1 of P_delta * delta / n.
double average_round_rate(const Scheme& scheme);

struct MonteCarloSummary {
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t first_stage_complete = 0;
  /// First-stage rounds, bucketed by recovered symbol count (0..beta).
  std::vector<std::size_t> rounds_by_recovered;
  /// Sums of the recovered count and its square over first-stage rounds.
  std::size_t recovered_sum = 0;
  std::size_t recovered_sq_sum = 0;
  std::size_t downloaded = 0;
  std::size_t retrieved = 0;
  std::size_t wrong_files = 0;
  std::size_t max_error_rank = 0;
  std::size_t stages_sum = 0;
  /// Successful single-stage runs whose counted rate differs from beta / n.
  std::size_t rate_mismatches = 0;

  std::size_t rounds() const;
};

/// Runs the protocol `trials` times with per-trial seeds mix(seed, i) and
/// fresh random files drawn from the trial seed, or the given fixed files.
/// Deterministic for a given seed regardless of the thread count.
MonteCarloSummary monte_carlo(const Scheme& scheme, const ChannelConfig& channel,
                              std::size_t file, std::size_t trials,
                              std::uint64_t seed, std::size_t max_stages,
                              unsigned threads, const FileSet* fixed_files = nullptr);

struct ExhaustivePrivacy {
  bool identical = true;
  std::size_t views = 0;  // distinct views for the first file
  std::size_t enumerated = 0;
};

/// Enumerates every U for every round and every set of t whole servers and
/// compares the colluders' view distribution for file 0 against every other
/// file. Requires (q^s)^(m*beta*t*rho) <= 2^20.
ExhaustivePrivacy exhaustive_privacy(const Scheme& scheme);

struct ChiSquareResult {
  double statistic = 0;  // largest per-position statistic
  double min_p_value = 1;
  std::size_t tests = 0;
  bool rejected = false;  // at alpha / tests (Bonferroni)
};

/// Two-sample chi-square homogeneity test, per view position, between
/// colluder views of file 0 and file 1 over `samples` random queries each.
ChiSquareResult chi_square_privacy(const Scheme& scheme,
                                   const std::vector<std::size_t>& servers,
                                   std::size_t samples, std::uint64_t seed,
                                   double alpha = 0.01);

/// Runs the experiment named by config.kind.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// The numbers of the worked examples and the star-product generator matrix,
/// as rows checked against reference values. `text` receives a
/// human-readable report.
std::vector<ResultRow> examples_report(std::string& text);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows,
               const OutputOptions& options = {});
void write_json(std::ostream& out, const std::vector<ResultRow>& rows,
                const OutputOptions& options = {});

/// Runs trial 0 of a roundtrip configuration and returns its transcript.
std::string roundtrip_transcript(const ExperimentConfig& config);

/// One JSON object per round.
std::string transcript_jsonl(const ProtocolResult& result, std::uint64_t seed,
                             const std::string& digest);

}  // namespace rmpir
