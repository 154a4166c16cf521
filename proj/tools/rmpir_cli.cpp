// Command-line front end. Talks to the library only through the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rmpir/rmpir.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCheck = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> threads;
  std::string out;
  std::string format = "csv";
  std::string variant;
  std::string transcript;
  bool check = false;
  bool timing = false;
};

struct StringDeleter {
  void operator()(char* s) const { rmpir_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ExperimentDeleter {
  void operator()(rmpir_experiment* e) const { rmpir_experiment_destroy(e); }
};

int report_failure(int status) {
  std::cerr << "error: " << rmpir_strerror(status);
  const std::string detail = rmpir_last_error();
  if (!detail.empty()) std::cerr << ": " << detail;
  std::cerr << "\n";
  return kExitConfig;
}

bool emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

int format_code(const std::string& name) {
  return name == "json" ? RMPIR_FORMAT_JSON : RMPIR_FORMAT_CSV;
}

int run_kind(const char* kind, const Options& o) {
  rmpir_experiment* raw = nullptr;
  if (int st = rmpir_experiment_load(o.config.c_str(), &raw); st != RMPIR_OK) {
    return report_failure(st);
  }
  std::unique_ptr<rmpir_experiment, ExperimentDeleter> exp(raw);
  int st = rmpir_experiment_set_kind(exp.get(), kind);
  if (st == RMPIR_OK && o.seed) st = rmpir_experiment_set_seed(exp.get(), *o.seed);
  if (st == RMPIR_OK && o.trials) st = rmpir_experiment_set_trials(exp.get(), *o.trials);
  if (st == RMPIR_OK && o.threads) st = rmpir_experiment_set_threads(exp.get(), *o.threads);
  if (st == RMPIR_OK && !o.variant.empty()) {
    st = rmpir_experiment_set_variant(exp.get(), o.variant.c_str());
  }
  if (st == RMPIR_OK) st = rmpir_experiment_validate(exp.get());
  if (st != RMPIR_OK) return report_failure(st);

  if (!o.transcript.empty()) {
    char* t = nullptr;
    if ((st = rmpir_experiment_transcript(exp.get(), &t)) != RMPIR_OK) {
      return report_failure(st);
    }
    OwnedString owned(t);
    if (!emit(o.transcript, t)) return kExitConfig;
  }

  char* table = nullptr;
  int pass = 0;
  st = rmpir_experiment_run(exp.get(), format_code(o.format), o.timing ? 1 : 0, &table,
                            &pass);
  if (st != RMPIR_OK) return report_failure(st);
  OwnedString owned(table);
  if (!emit(o.out, table)) return kExitConfig;
  if (o.check && !pass) {
    std::cerr << "check failed: at least one checked row is outside its band\n";
    return kExitCheck;
  }
  return kExitOk;
}

int run_examples(const Options& o) {
  char* table = nullptr;
  char* text = nullptr;
  int pass = 0;
  const int st = rmpir_examples_report(format_code(o.format), &table, &text, &pass);
  if (st != RMPIR_OK) return report_failure(st);
  OwnedString owned_table(table);
  OwnedString owned_text(text);
  std::cout << text << "\n";
  if (o.out.empty()) std::cout << table;
  else if (!emit(o.out, table)) return kExitConfig;
  if (o.check && !pass) {
    std::cerr << "check failed: a reference value does not match\n";
    return kExitCheck;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private information retrieval over coded storage and random linear networks"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* cfg = sub->add_option("--config", o.config, "experiment configuration (JSON)");
    if (needs_config) cfg->required();
    sub->add_option("--seed", o.seed, "override the configured seed");
    sub->add_option("--trials", o.trials, "override the configured trial count");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    sub->add_option("--out", o.out, "write result rows here instead of stdout");
    sub->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--variant", o.variant, "errorfree or errored")
        ->check(CLI::IsMember({"errorfree", "error-free", "errored"}));
    sub->add_flag("--check", o.check, "exit 2 if a checked row fails");
    sub->add_flag("--timing", o.timing, "include wall-clock runtime in the output");
  };

  struct Kind {
    const char* command;
    const char* kind;
    const char* help;
  };
  const Kind kinds[] = {
      {"roundtrip", "roundtrip", "run the protocol end to end"},
      {"prob", "success-probability", "Monte-Carlo success and partial-round frequencies"},
      {"privacy", "privacy-test", "colluder view distributions"},
      {"region", "decoder-region", "errored variant over the (epsilon, tau) region"},
      {"rate", "rate-sweep", "download rate across field sizes"},
  };
  std::string selected;
  for (const Kind& k : kinds) {
    CLI::App* sub = app.add_subcommand(k.command, k.help);
    common(sub, true);
    if (std::string(k.command) == "roundtrip") {
      sub->add_option("--transcript", o.transcript, "write the first trial's rounds (JSONL)");
    }
    sub->callback([&selected, &k] { selected = k.kind; });
  }
  CLI::App* ex = app.add_subcommand("examples", "reference numbers and star-product matrix");
  common(ex, false);
  ex->callback([&selected] { selected = "examples"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (selected == "examples") return run_examples(o);
  return run_kind(selected.c_str(), o);
}
