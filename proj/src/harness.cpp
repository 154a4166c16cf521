#include "rmpir/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace rmpir {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& section) {
  require(obj.is_object(), "config section '" + section + "' must be an object",
          ErrorCode::kConfig);
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return item.key() == a; });
    require(known, "unknown key '" + section + "." + item.key() + "'",
            ErrorCode::kConfig);
  }
}

template <typename T>
void read_key(const json& obj, const char* key, T& out, const std::string& section) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::kConfig, "config key '" + section + "." + key + "' has the wrong type");
  }
}

// Unsigned keys reject negative numbers instead of letting them wrap.
void read_count(const json& obj, const char* key, std::size_t& out,
                const std::string& section) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  require(v.is_number_integer() && v.get<long long>() >= 0,
          "config key '" + section + "." + key + "' must be a non-negative integer",
          ErrorCode::kConfig);
  out = v.get<std::size_t>();
}

std::size_t default_trials(const std::string& kind) {
  if (kind == "success-probability" || kind == "rate-sweep" || kind == "privacy-test")
    return 100000;
  if (kind == "decoder-region") return 1000;
  return 100;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{
      "roundtrip", "success-probability", "rate-sweep", "privacy-test",
      "decoder-region"};
  return kinds;
}

Field ExperimentConfig::make_field() const {
  if (field.modulus.empty()) {
    require(field.p == 2 && field.b == 1,
            "field.modulus is required unless p = 2", ErrorCode::kConfig);
    return Field::binary(field.s);
  }
  try {
    return Field(field);
  } catch (const Error& e) {
    fail(ErrorCode::kConfig, std::string("invalid field: ") + e.what());
  }
}

void ExperimentConfig::validate() const {
  const auto& kinds = experiment_kinds();
  require(std::find(kinds.begin(), kinds.end(), kind) != kinds.end(),
          "unknown experiment kind '" + kind + "'", ErrorCode::kConfig);
  require(trials >= 1, "trials must be at least 1", ErrorCode::kConfig);
  require(max_stages >= 1, "max_stages must be at least 1", ErrorCode::kConfig);
  const Field f = make_field();
  try {
    Scheme scheme(f, params);
  } catch (const Error& e) {
    fail(ErrorCode::kConfig, e.what());
  }
  channel.validate(params);
  require(requested_file < params.m, "requested_file is out of range",
          ErrorCode::kConfig);
  if (kind == "decoder-region") {
    require(params.variant == Variant::kErrored,
            "decoder-region needs the errored variant", ErrorCode::kConfig);
  }
  if (kind == "rate-sweep") {
    require(!field_sizes.empty(), "rate-sweep needs field_sizes", ErrorCode::kConfig);
  }
  if (kind == "privacy-test") {
    require(params.m >= 2, "privacy-test needs at least two files", ErrorCode::kConfig);
  }
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["field"] = {{"p", field.p}, {"b", field.b}, {"s", field.s},
                {"modulus", make_field().spec().modulus}};
  j["params"] = {{"m", params.m},       {"l", params.l},
                 {"n", params.n},       {"k", params.k},
                 {"t", params.t},       {"variant", variant_name(params.variant)},
                 {"epsilon", params.epsilon}, {"tau", params.tau}};
  j["channel"] = {{"mode", transfer_mode_name(channel.mode)},
                  {"erasures", channel.erasures},
                  {"uplink_errors", channel.uplink_errors},
                  {"downlink_errors", channel.downlink_errors},
                  {"uplink_ranks", channel.uplink_ranks},
                  {"downlink_ranks", channel.downlink_ranks}};
  j["experiment"] = {{"kind", kind},
                     {"trials", trials},
                     {"seed", seed},
                     {"requested_file", requested_file + 1},
                     {"max_stages", max_stages},
                     {"files", files_path},
                     {"field_sizes", field_sizes}};
  return j.dump();
}

std::string ExperimentConfig::digest() const {
  // FNV-1a, 64 bit. The thread count is left out of the canonical form since
  // it does not change results.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, {"field", "params", "channel", "experiment"}, "config");

  ExperimentConfig c;
  const json empty = json::object();
  const json& jf = root.contains("field") ? root["field"] : empty;
  check_keys(jf, {"p", "b", "s", "modulus"}, "field");
  read_key(jf, "p", c.field.p, "field");
  read_key(jf, "b", c.field.b, "field");
  read_key(jf, "s", c.field.s, "field");
  read_key(jf, "modulus", c.field.modulus, "field");

  const json& jp = root.contains("params") ? root["params"] : empty;
  check_keys(jp, {"m", "l", "n", "k", "t", "variant", "epsilon", "tau"}, "params");
  read_count(jp, "m", c.params.m, "params");
  read_count(jp, "l", c.params.l, "params");
  read_count(jp, "n", c.params.n, "params");
  read_count(jp, "k", c.params.k, "params");
  read_count(jp, "t", c.params.t, "params");
  read_count(jp, "epsilon", c.params.epsilon, "params");
  read_count(jp, "tau", c.params.tau, "params");
  if (jp.contains("variant")) {
    std::string v;
    read_key(jp, "variant", v, "params");
    c.params.variant = parse_variant(v);
  }

  const json& jc = root.contains("channel") ? root["channel"] : empty;
  check_keys(jc, {"mode", "erasures", "uplink_errors", "downlink_errors",
                  "uplink_ranks", "downlink_ranks"},
             "channel");
  if (jc.contains("mode")) {
    std::string m;
    read_key(jc, "mode", m, "channel");
    c.channel.mode = parse_transfer_mode(m);
  }
  read_count(jc, "erasures", c.channel.erasures, "channel");
  read_count(jc, "uplink_errors", c.channel.uplink_errors, "channel");
  read_count(jc, "downlink_errors", c.channel.downlink_errors, "channel");
  read_key(jc, "uplink_ranks", c.channel.uplink_ranks, "channel");
  read_key(jc, "downlink_ranks", c.channel.downlink_ranks, "channel");

  const json& je = root.contains("experiment") ? root["experiment"] : empty;
  check_keys(je, {"kind", "trials", "seed", "requested_file", "max_stages", "files",
                  "field_sizes", "threads"},
             "experiment");
  read_key(je, "kind", c.kind, "experiment");
  c.trials = default_trials(c.kind);
  read_count(je, "trials", c.trials, "experiment");
  read_key(je, "seed", c.seed, "experiment");
  std::size_t requested = 1;
  read_count(je, "requested_file", requested, "experiment");
  require(requested >= 1, "experiment.requested_file counts from 1", ErrorCode::kConfig);
  c.requested_file = requested - 1;
  read_count(je, "max_stages", c.max_stages, "experiment");
  read_key(je, "files", c.files_path, "experiment");
  read_key(je, "field_sizes", c.field_sizes, "experiment");
  read_key(je, "threads", c.threads, "experiment");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open config '" + path + "'", ErrorCode::kConfig);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

double round_partial_probability(const Scheme& scheme, std::size_t delta) {
  const SystemParams& prm = scheme.params();
  const std::size_t beta = scheme.beta();
  require(delta >= 1 && delta <= beta, "delta must lie in 1..beta");
  const double p = 1.0 / static_cast<double>(scheme.field().order());
  const std::size_t lost = beta - delta;
  const double lose = 2 * p - p * p;
  double choose = 1;
  for (std::size_t i = 0; i < lost; ++i) choose = choose * (beta - i) / (i + 1);
  return choose * std::pow(lose, static_cast<double>(lost)) *
         std::pow(1 - p, 2.0 * static_cast<double>(prm.n - lost));
}

double average_round_rate(const Scheme& scheme) {
  double sum = 0;
  for (std::size_t d = 1; d <= scheme.beta(); ++d) {
    sum += round_partial_probability(scheme, d) * static_cast<double>(d);
  }
  return sum / static_cast<double>(scheme.params().n);
}

std::vector<ResultRow> closed_forms(const Scheme& scheme) {
  const SystemParams& prm = scheme.params();
  const double q = scheme.field().q();
  const double p = 1.0 / static_cast<double>(scheme.field().order());
  const double n = static_cast<double>(prm.n);
  const double k = static_cast<double>(prm.k);
  std::vector<ResultRow> rows;
  auto add = [&](std::string metric, double value, std::string label) {
    ResultRow r;
    r.experiment = "closed-form";
    r.metric = std::move(metric);
    r.measured = value;
    r.closed_form = value;
    r.closed_form_label = std::move(label);
    rows.push_back(std::move(r));
  };
  add("full_rank_bound_block", std::pow(1 - 1 / q, static_cast<double>(prm.rho())),
      "(1-1/q)^kappa, kappa = rho");
  add("full_rank_bound_network", std::pow(1 - 1 / q, n), "(1-1/q)^kappa, kappa = n");
  add("failure_exponent_2n_plus_k", 1 - std::pow(1 - p, 2 * n + k),
      "1-(1-1/q^s)^(2n+k), alternative exponent");
  add("failure_exponent_2nk", 1 - std::pow(1 - p, 2 * n * k),
      "1-(1-1/q^s)^(2nk), 2n links per round over k rounds");
  for (std::size_t d = scheme.beta(); d >= 1; --d) {
    add("round_P_" + std::to_string(d), round_partial_probability(scheme, d),
        d == scheme.beta() ? "(1-1/q^s)^(2n)"
                           : "C(beta,beta-delta)(2p-p^2)^(beta-delta)(1-p)^(2(n-beta+delta))");
  }
  add("average_round_rate", average_round_rate(scheme), "sum_delta P_delta delta / n");
  add("rate_band", closed_form_rate(scheme), "beta / n");
  add("rate_code", 1 - static_cast<double>(prm.k + prm.query_dim() - 1) / n,
      "1 - (k + t rho - 1) / n");
  return rows;
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows,
               const OutputOptions& options) {
  out << "experiment,metric,trials,measured,stderr,closed_form,closed_form_label,"
         "checked,pass,digest";
  if (options.include_runtime) out << ",runtime_s";
  out << "\n";
  for (const ResultRow& r : rows) {
    out << csv_field(r.experiment) << ',' << csv_field(r.metric) << ',' << r.trials
        << ',' << format_double(r.measured) << ','
        << (r.stderr_ ? format_double(*r.stderr_) : "") << ','
        << (r.closed_form ? format_double(*r.closed_form) : "") << ','
        << csv_field(r.closed_form_label) << ',' << (r.checked ? "true" : "false")
        << ',' << (r.pass ? "true" : "false") << ',' << r.digest;
    if (options.include_runtime) out << ',' << format_double(r.runtime_s);
    out << "\n";
  }
}

void write_json(std::ostream& out, const std::vector<ResultRow>& rows,
                const OutputOptions& options) {
  json arr = json::array();
  for (const ResultRow& r : rows) {
    json o;
    o["experiment"] = r.experiment;
    o["metric"] = r.metric;
    o["trials"] = r.trials;
    o["measured"] = r.measured;
    o["stderr"] = r.stderr_ ? json(*r.stderr_) : json(nullptr);
    o["closed_form"] = r.closed_form ? json(*r.closed_form) : json(nullptr);
    o["closed_form_label"] = r.closed_form_label;
    o["checked"] = r.checked;
    o["pass"] = r.pass;
    o["digest"] = r.digest;
    if (options.include_runtime) o["runtime_s"] = r.runtime_s;
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << "\n";
}

std::string transcript_jsonl(const ProtocolResult& result, std::uint64_t seed,
                             const std::string& digest) {
  std::string out;
  auto entries = [](const std::vector<BandEntry>& v) {
    json a = json::array();
    for (const BandEntry& e : v) a.push_back({e.stripe + 1, e.coord + 1});
    return a;
  };
  for (const RoundRecord& r : result.rounds) {
    json o;
    o["digest"] = digest;
    o["seed"] = seed;
    o["stage"] = r.stage + 1;
    o["round"] = r.round + 1;
    o["uplink_rank"] = r.uplink_rank;
    o["downlink_rank"] = r.downlink_rank;
    json erased = json::array();
    for (std::size_t c : r.erased) erased.push_back(c + 1);
    o["erased"] = erased;
    o["downloaded"] = r.downloaded;
    o["retrieved"] = r.retrieved;
    o["requested"] = entries(r.requested);
    o["recovered"] = entries(r.recovered);
    o["decoded"] = r.decoded;
    o["error_rank"] = r.error_rank;
    out += o.dump() + "\n";
  }
  json summary;
  summary["digest"] = digest;
  summary["seed"] = seed;
  summary["success"] = result.success;
  summary["stages"] = result.stages;
  summary["downloaded"] = result.downloaded;
  summary["retrieved"] = result.retrieved;
  summary["rate"] = result.rate();
  out += summary.dump() + "\n";
  return out;
}

}  // namespace rmpir
