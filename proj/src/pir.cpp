#include "rmpir/pir.hpp"

#include <algorithm>
#include <set>

namespace rmpir {

namespace {

using CoeffKey = std::pair<std::size_t, std::size_t>;  // (stripe, coefficient)

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Sum over the stored rows w of f_w(q[w]), with f_w given by row w of X.
Element evaluate_maps(const Field& f, const Matrix& x, std::span<const Element> q) {
  Element acc = 0;
  for (std::size_t w = 0; w < x.rows(); ++w) {
    Element z = q[w];
    if (z == 0) continue;
    for (std::size_t a = 0; a < x.cols(); ++a) {
      acc = f.add(acc, f.mul(x(w, a), z));
      z = f.frobenius(z, 1);
    }
  }
  return acc;
}

std::vector<Element> unit(std::size_t n, std::size_t i) {
  std::vector<Element> e(n, 0);
  e[i] = 1;
  return e;
}

}  // namespace

Scheme::Scheme(Field field, SystemParams params)
    : field_(std::move(field)),
      params_(params),
      beta_((params_.validate(field_), params_.beta())),
      storage_(field_, params_.n, params_.k),
      query_(field_, params_.n, params_.query_dim()),
      answer_(field_, params_.n, params_.answer_dim()) {
  if (params_.variant == Variant::kErrored) {
    const ScheduleCheck check = check_errored_schedule(params_, field_.s());
    require(check.admissible,
            "errored-variant schedule not admissible: " + check.reason,
            ErrorCode::kConfig);
  }
}

std::vector<BandEntry> errorfree_band(const SystemParams& params, std::size_t round) {
  std::vector<BandEntry> band;
  for (std::size_t d = 0; d < params.beta(); ++d) band.push_back({d, round + d});
  return band;
}

Matrix random_part_from(const Scheme& scheme, const Matrix& u) {
  const SystemParams& p = scheme.params();
  require(u.rows() == p.m * scheme.beta() && u.cols() == p.query_dim(),
          "U must be (m*beta) x (t*rho)", ErrorCode::kSpecMismatch);
  return multiply(scheme.field(), u, scheme.query_code().generator_matrix());
}

Matrix build_random_part(const Scheme& scheme, Rng& rng) {
  const SystemParams& p = scheme.params();
  return random_part_from(
      scheme, random_matrix(scheme.field(), rng, p.m * scheme.beta(), p.query_dim()));
}

Matrix errorfree_selector(const Scheme& scheme, std::size_t file,
                          const std::vector<BandEntry>& entries) {
  const SystemParams& p = scheme.params();
  const std::size_t beta = scheme.beta();
  require(file < p.m, "file index out of range");
  Matrix e(p.n, p.m * beta);
  std::set<std::size_t> coords;
  for (const BandEntry& b : entries) {
    require(b.stripe < beta && b.coord < p.n, "band entry out of range");
    require(coords.insert(b.coord).second, "band coordinates must be distinct");
    e(b.coord, stripe_row(beta, file, b.stripe)) = scheme.storage_code().points()[b.coord];
  }
  return e;
}

std::vector<SelectorTerm> errored_terms(const SystemParams& params, std::size_t round) {
  const std::size_t beta = params.beta();
  const std::size_t i = round + 1;
  const std::size_t active = std::min(beta, ceil_div(i * beta, params.k));
  std::vector<SelectorTerm> terms;
  for (std::size_t delta = 1; delta <= active; ++delta) {
    // delta*k < i*beta + k, so the exponent is at least t*rho.
    const long long e = static_cast<long long>(i * beta + params.k + params.query_dim()) -
                        1 - static_cast<long long>(delta * params.k);
    terms.push_back({delta - 1, static_cast<std::size_t>(e)});
  }
  return terms;
}

Matrix errored_selector(const Scheme& scheme, std::size_t file, std::size_t round) {
  const SystemParams& p = scheme.params();
  const Field& f = scheme.field();
  require(file < p.m, "file index out of range");
  Matrix e(p.n, p.m * scheme.beta());
  for (const SelectorTerm& term : errored_terms(p, round)) {
    const std::size_t col = stripe_row(scheme.beta(), file, term.stripe);
    for (std::size_t c = 0; c < p.n; ++c) {
      e(c, col) = f.frobenius(scheme.storage_code().points()[c],
                              static_cast<long long>(term.exponent));
    }
  }
  return e;
}

ScheduleCheck check_errored_schedule(const SystemParams& params, std::size_t s) {
  const std::size_t beta = params.beta();
  const std::size_t lo = params.k + params.query_dim() - 1;  // window start
  const std::size_t hi = lo + beta;                          // window end
  std::set<CoeffKey> known;
  auto reject = [](std::string why) { return ScheduleCheck{false, std::move(why)}; };
  for (std::size_t round = 0; round < params.k; ++round) {
    std::map<std::size_t, CoeffKey> slots;
    for (const SelectorTerm& term : errored_terms(params, round)) {
      for (std::size_t a = 0; a < params.k; ++a) {
        const std::size_t deg = term.exponent + a;
        const std::string where = "round " + std::to_string(round + 1) +
                                  ", stripe " + std::to_string(term.stripe + 1) +
                                  ", coefficient " + std::to_string(a) +
                                  " at q-degree " + std::to_string(deg);
        if (deg < lo) return reject(where + " falls below the window");
        if (deg >= s) return reject(where + " reaches q-degree s");
        const bool is_known = known.count({term.stripe, a}) > 0;
        if (deg >= hi) {
          if (!is_known) return reject(where + " is above the window and unknown");
          continue;
        }
        if (is_known) continue;
        if (!slots.emplace(deg, CoeffKey{term.stripe, a}).second) {
          return reject(where + " shares its slot with another unknown");
        }
      }
    }
    for (const auto& [deg, key] : slots) known.insert(key);
  }
  if (known.size() != beta * params.k) {
    return reject("only " + std::to_string(known.size()) + " of " +
                  std::to_string(beta * params.k) + " coefficients are ever exposed");
  }
  return {};
}

std::vector<Matrix> lift_query(const Matrix& d_q, std::size_t servers) {
  require(servers >= 1 && d_q.rows() % servers == 0,
          "server count must divide the number of query rows");
  const std::size_t rho = d_q.rows() / servers;
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < servers; ++j) {
    out.push_back(hconcat(Matrix::identity(rho), d_q.block(j * rho, 0, rho, d_q.cols())));
  }
  return out;
}

std::optional<Matrix> server_respond(const Field& field,
                                     const EncodedStorage& storage,
                                     std::size_t server, const Matrix& received) {
  const std::size_t rho = storage.rho();
  require(server < storage.servers(), "server index out of range");
  require(received.rows() == rho && received.cols() == rho + storage.messages().rows(),
          "received query has the wrong shape", ErrorCode::kSpecMismatch);
  if (received.is_zero()) return std::nullopt;
  const Matrix a_hat = received.block(0, 0, rho, rho);
  const Matrix payload = received.block(0, rho, rho, received.cols() - rho);
  Matrix out(rho, 2 * rho + 1);
  out.set_block(0, 0, Matrix::identity(rho));
  out.set_block(0, rho, a_hat);
  for (std::size_t r = 0; r < rho; ++r) {
    const auto x = solve_left(field, a_hat, unit(rho, r));
    if (!x) continue;
    const Matrix q = multiply(field, Matrix::row_vector(*x), payload);
    out(r, 2 * rho) = evaluate_maps(field, storage.messages(), q.row(0));
  }
  return out;
}

std::vector<std::size_t> RoundObservation::unavailable() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (!values[c]) out.push_back(c);
  }
  return out;
}

RoundObservation aggregate(const Field& field, std::size_t rho,
                           const std::vector<std::optional<Matrix>>& received) {
  RoundObservation obs;
  obs.values.resize(received.size() * rho);
  for (std::size_t j = 0; j < received.size(); ++j) {
    if (!received[j]) continue;
    const Matrix& r = *received[j];
    require(r.rows() == rho && r.cols() == 2 * rho + 1,
            "received response has the wrong shape", ErrorCode::kSpecMismatch);
    obs.downloaded += rho;
    const Matrix a_prime = r.block(0, 0, rho, rho);
    const Matrix composite = r.block(0, rho, rho, rho);
    for (std::size_t i = 0; i < rho; ++i) {
      const auto e = unit(rho, i);
      const auto x = solve_left(field, a_prime, e);
      if (!x || !solve_left(field, composite, e)) continue;
      Element v = 0;
      for (std::size_t u = 0; u < rho; ++u) {
        v = field.add(v, field.mul((*x)[u], r(u, 2 * rho)));
      }
      obs.values[j * rho + i] = v;
    }
  }
  return obs;
}

RoundOutcome retrieve_errorfree_round(const Scheme& scheme,
                                      const RoundObservation& obs,
                                      const std::vector<BandEntry>& entries) {
  const GabidulinCode& code = scheme.answer_code();
  const std::size_t n = code.length();
  require(obs.values.size() == n, "observation length must equal n",
          ErrorCode::kSpecMismatch);
  RoundOutcome out;
  std::set<std::size_t> erased;
  for (const BandEntry& b : entries) erased.insert(b.coord);
  for (std::size_t c : obs.unavailable()) erased.insert(c);
  out.erased.assign(erased.begin(), erased.end());
  if (out.erased.size() > n - code.dimension()) return out;

  std::vector<Element> word(n, 0);
  for (std::size_t c = 0; c < n; ++c) word[c] = obs.values[c].value_or(0);
  const auto dec = erasure_decode(code, word, out.erased);
  if (!dec) return out;
  out.decoded = true;
  for (const BandEntry& b : entries) {
    if (!obs.values[b.coord]) continue;
    const auto it = std::lower_bound(out.erased.begin(), out.erased.end(), b.coord);
    out.symbols.emplace_back(b, dec->erased_discrepancy[it - out.erased.begin()]);
  }
  return out;
}

RoundOutcome retrieve_errored_round(const Scheme& scheme,
                                    const RoundObservation& obs, std::size_t round,
                                    const std::map<CoeffKey, Element>& known) {
  const Field& f = scheme.field();
  const SystemParams& p = scheme.params();
  const GabidulinCode& code = scheme.answer_code();
  const std::size_t n = code.length();
  require(obs.values.size() == n, "observation length must equal n",
          ErrorCode::kSpecMismatch);
  RoundOutcome out;
  out.erased = obs.unavailable();
  const std::size_t budget = n - code.dimension();  // d - 1
  if (out.erased.size() > budget) return out;

  // Strip the contributions of coefficients recovered in earlier rounds.
  const auto terms = errored_terms(p, round);
  std::vector<Element> word(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    if (!obs.values[c]) continue;
    Element v = *obs.values[c];
    for (const SelectorTerm& term : terms) {
      for (std::size_t a = 0; a < p.k; ++a) {
        const auto it = known.find({term.stripe, a});
        if (it == known.end()) continue;
        const Element basis = f.frobenius(code.points()[c],
                                          static_cast<long long>(term.exponent + a));
        v = f.sub(v, f.mul(it->second, basis));
      }
    }
    word[c] = v;
  }
  const std::size_t max_errors = (budget - out.erased.size()) / 2;
  const auto dec = error_erasure_decode(code, word, out.erased, max_errors);
  if (!dec) return out;
  out.decoded = true;
  const std::size_t lo = p.k + p.query_dim() - 1;
  for (const SelectorTerm& term : terms) {
    for (std::size_t a = 0; a < p.k; ++a) {
      const std::size_t deg = term.exponent + a;
      if (deg < lo || deg >= lo + scheme.beta()) continue;
      if (known.count({term.stripe, a})) continue;
      out.coefficients[{term.stripe, a}] = dec->message[deg];
    }
  }
  return out;
}

bool ProtocolResult::first_stage_complete() const {
  for (const RoundRecord& r : rounds) {
    if (r.stage != 0) continue;
    if (!r.decoded) return false;
    if (!r.requested.empty() && r.retrieved != r.requested.size()) return false;
  }
  return true;
}

namespace {

struct RoundRun {
  RoundObservation obs;
  RoundRecord record;
};

// Sends one round of queries with the given selector and collects what the
// user can unscramble.
RoundRun exchange(const Scheme& scheme, const EncodedStorage& storage,
                  const ChannelConfig& channel, const Matrix& selector, Rng& rng) {
  const Field& f = scheme.field();
  const SystemParams& p = scheme.params();
  const Matrix d_q = add(f, build_random_part(scheme, rng).transpose(), selector);
  const std::vector<Matrix> queries = lift_query(d_q, p.l);
  const LinkRealization links = sample_links(f, rng, channel, p);

  std::vector<std::optional<Matrix>> received(p.l);
  for (std::size_t j = 0; j < p.l; ++j) {
    const Matrix rec = transmit_uplink(f, j, queries[j], links);
    if (auto resp = server_respond(f, storage, j, rec)) {
      received[j] = transmit_downlink(f, j, *resp, links);
    }
  }
  RoundRun run;
  run.obs = aggregate(f, p.rho(), received);
  run.record.uplink_rank = links.uplink_rank(f);
  run.record.downlink_rank = links.downlink_rank(f);
  run.record.downloaded = run.obs.downloaded;

  // The simulator knows the noise-free answers; measure how far off the
  // unscrambled ones are.
  std::vector<Element> diff;
  for (std::size_t c = 0; c < p.n; ++c) {
    if (!run.obs.values[c]) continue;
    const Element clean = evaluate_maps(f, storage.messages(), d_q.row(c));
    diff.push_back(f.sub(*run.obs.values[c], clean));
  }
  run.record.error_rank = rank_weight(f, diff);
  return run;
}

// Greedy plan of rounds for the missing (stripe, coordinate) pairs: at most
// beta entries per round, distinct coordinates within a round, and never a
// coordinate already held for that stripe.
std::vector<std::vector<BandEntry>> plan_stage(
    const std::vector<std::map<std::size_t, Element>>& held, std::size_t n,
    std::size_t k, std::size_t beta) {
  std::vector<std::size_t> need(held.size());
  std::vector<std::set<std::size_t>> planned(held.size());
  for (std::size_t d = 0; d < held.size(); ++d) {
    need[d] = held[d].size() >= k ? 0 : k - held[d].size();
  }
  std::vector<std::vector<BandEntry>> rounds;
  while (std::any_of(need.begin(), need.end(), [](std::size_t x) { return x > 0; })) {
    std::vector<BandEntry> round;
    std::set<std::size_t> used;
    bool progress = true;
    while (round.size() < beta && progress) {
      progress = false;
      for (std::size_t d = 0; d < held.size() && round.size() < beta; ++d) {
        if (need[d] == 0) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (used.count(c) || held[d].count(c) || planned[d].count(c)) continue;
          round.push_back({d, c});
          used.insert(c);
          planned[d].insert(c);
          --need[d];
          progress = true;
          break;
        }
      }
    }
    require(!round.empty(), "stage planning made no progress", ErrorCode::kInternal);
    rounds.push_back(std::move(round));
  }
  return rounds;
}

ProtocolResult run_errorfree(const Scheme& scheme, const EncodedStorage& storage,
                             const ChannelConfig& channel, std::size_t file,
                             Rng& rng, const ProtocolOptions& options) {
  const SystemParams& p = scheme.params();
  const std::size_t beta = scheme.beta();
  ProtocolResult result;
  std::vector<std::map<std::size_t, Element>> held(beta);

  std::vector<std::vector<BandEntry>> plan;
  for (std::size_t i = 0; i < p.k; ++i) plan.push_back(errorfree_band(p, i));

  for (std::size_t stage = 0; stage < options.max_stages && !plan.empty(); ++stage) {
    result.stages = stage + 1;
    for (std::size_t i = 0; i < plan.size(); ++i) {
      RoundRun run = exchange(scheme, storage, channel,
                              errorfree_selector(scheme, file, plan[i]), rng);
      const RoundOutcome out = retrieve_errorfree_round(scheme, run.obs, plan[i]);
      RoundRecord& rec = run.record;
      rec.stage = stage;
      rec.round = i;
      rec.requested = plan[i];
      rec.erased = out.erased;
      rec.decoded = out.decoded;
      rec.retrieved = out.symbols.size();
      for (const auto& [entry, value] : out.symbols) {
        rec.recovered.push_back(entry);
        require(held[entry.stripe].emplace(entry.coord, value).second,
                "a (stripe, coordinate) pair was retrieved twice", ErrorCode::kInternal);
      }
      result.downloaded += rec.downloaded;
      result.retrieved += rec.retrieved;
      result.rounds.push_back(std::move(rec));
    }
    plan = plan_stage(held, p.n, p.k, beta);
  }
  if (!plan.empty()) return result;

  Matrix x(beta, p.k);
  for (std::size_t d = 0; d < beta; ++d) {
    std::vector<std::size_t> coords;
    std::vector<Element> values;
    for (const auto& [c, v] : held[d]) {
      coords.push_back(c);
      values.push_back(v);
    }
    const auto msg = scheme.storage_code().interpolate(coords, values);
    if (!msg) return result;
    for (std::size_t a = 0; a < p.k; ++a) x(d, a) = (*msg)[a];
  }
  result.success = true;
  result.file = std::move(x);
  return result;
}

ProtocolResult run_errored(const Scheme& scheme, const EncodedStorage& storage,
                           const ChannelConfig& channel, std::size_t file, Rng& rng) {
  const SystemParams& p = scheme.params();
  ProtocolResult result;
  result.stages = 1;
  std::map<CoeffKey, Element> known;
  for (std::size_t i = 0; i < p.k; ++i) {
    RoundRun run = exchange(scheme, storage, channel, errored_selector(scheme, file, i), rng);
    const RoundOutcome out = retrieve_errored_round(scheme, run.obs, i, known);
    RoundRecord& rec = run.record;
    rec.round = i;
    rec.erased = out.erased;
    rec.decoded = out.decoded;
    rec.retrieved = out.coefficients.size();
    known.insert(out.coefficients.begin(), out.coefficients.end());
    result.downloaded += rec.downloaded;
    result.retrieved += rec.retrieved;
    result.rounds.push_back(std::move(rec));
    if (!out.decoded) return result;
  }
  if (known.size() != scheme.beta() * p.k) return result;
  Matrix x(scheme.beta(), p.k);
  for (const auto& [key, v] : known) x(key.first, key.second) = v;
  result.success = true;
  result.file = std::move(x);
  return result;
}

}  // namespace

ProtocolResult run_protocol(const Scheme& scheme, const EncodedStorage& storage,
                            const ChannelConfig& channel, std::size_t file,
                            Rng& rng, const ProtocolOptions& options) {
  const SystemParams& p = scheme.params();
  require(storage.code() == scheme.storage_code() && storage.servers() == p.l,
          "storage does not match the scheme", ErrorCode::kSpecMismatch);
  require(storage.messages().rows() == p.m * scheme.beta(),
          "storage holds a different number of stripes", ErrorCode::kSpecMismatch);
  require(file < p.m, "requested file out of range");
  require(options.max_stages >= 1, "at least one stage is required");
  channel.validate(p);
  if (p.variant == Variant::kErrored) {
    return run_errored(scheme, storage, channel, file, rng);
  }
  return run_errorfree(scheme, storage, channel, file, rng, options);
}

double closed_form_rate(const Scheme& scheme) {
  return static_cast<double>(scheme.beta()) / scheme.params().n;
}

std::vector<Element> colluder_view(const Matrix& d_q, std::size_t rho,
                                   const std::vector<std::size_t>& servers) {
  std::vector<Element> view;
  for (std::size_t j : servers) {
    require((j + 1) * rho <= d_q.rows(), "server index out of range");
    for (std::size_t r = j * rho; r < (j + 1) * rho; ++r) {
      const auto row = d_q.row(r);
      view.insert(view.end(), row.begin(), row.end());
    }
  }
  return view;
}

}  // namespace rmpir
