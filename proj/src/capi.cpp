#include "rmpir/rmpir.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>

#include "rmpir/harness.hpp"

struct rmpir_field {
  rmpir::Field field;
};

struct rmpir_code {
  rmpir::GabidulinCode code;
};

struct rmpir_experiment {
  rmpir::ExperimentConfig config;
};

namespace {

thread_local std::string last_error;

int record(rmpir::ErrorCode code, const std::string& what) {
  last_error = what;
  return static_cast<int>(code);
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return RMPIR_OK;
  } catch (const rmpir::Error& e) {
    return record(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return record(rmpir::ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return record(rmpir::ErrorCode::kInternal, e.what());
  }
}

void need(const void* p, const char* name) {
  rmpir::require(p != nullptr, std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string render(const std::vector<rmpir::ResultRow>& rows, int format,
                   bool include_runtime) {
  rmpir::require(format == RMPIR_FORMAT_CSV || format == RMPIR_FORMAT_JSON,
                 "unknown output format");
  std::ostringstream os;
  const rmpir::OutputOptions opts{include_runtime};
  if (format == RMPIR_FORMAT_CSV) rmpir::write_csv(os, rows, opts);
  else rmpir::write_json(os, rows, opts);
  return os.str();
}

bool all_checked_pass(const std::vector<rmpir::ResultRow>& rows) {
  for (const auto& r : rows) {
    if (r.checked && !r.pass) return false;
  }
  return true;
}

}  // namespace

extern "C" {

const char* rmpir_version(void) { return "0.1.0"; }

const char* rmpir_strerror(int status) {
  switch (status) {
    case RMPIR_OK: return "ok";
    case RMPIR_INVALID_ARGUMENT: return "invalid argument";
    case RMPIR_SPEC_MISMATCH: return "dimension or field mismatch";
    case RMPIR_DIVISION_BY_ZERO: return "division by zero";
    case RMPIR_INCONSISTENT_SYSTEM: return "inconsistent linear system";
    case RMPIR_DECODING_FAILURE: return "decoding failure";
    case RMPIR_CONFIG: return "configuration error";
    case RMPIR_IO: return "i/o error";
    case RMPIR_CHECK_MISMATCH: return "check mismatch";
    case RMPIR_INTERNAL: return "internal error";
    default: return "unknown status";
  }
}

const char* rmpir_last_error(void) { return last_error.c_str(); }

void rmpir_string_free(char* s) { std::free(s); }

int rmpir_field_create(unsigned p, unsigned s, const unsigned* modulus,
                       size_t modulus_len, rmpir_field** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    if (modulus == nullptr) {
      rmpir::require(p == 2, "a modulus is required unless p = 2");
      *out = new rmpir_field{rmpir::Field::binary(s)};
    } else {
      rmpir::FieldSpec spec{p, 1, s, std::vector<unsigned>(modulus, modulus + modulus_len)};
      *out = new rmpir_field{rmpir::Field(spec)};
    }
  });
}

void rmpir_field_destroy(rmpir_field* field) { delete field; }

uint32_t rmpir_field_order(const rmpir_field* field) {
  return field ? field->field.order() : 0;
}

int rmpir_field_add(const rmpir_field* field, uint32_t a, uint32_t b, uint32_t* out) {
  return guarded([&] {
    need(field, "field");
    need(out, "out");
    *out = field->field.add(a, b);
  });
}

int rmpir_field_mul(const rmpir_field* field, uint32_t a, uint32_t b, uint32_t* out) {
  return guarded([&] {
    need(field, "field");
    need(out, "out");
    *out = field->field.mul(a, b);
  });
}

int rmpir_field_inv(const rmpir_field* field, uint32_t a, uint32_t* out) {
  return guarded([&] {
    need(field, "field");
    need(out, "out");
    *out = field->field.inv(a);
  });
}

int rmpir_code_create(const rmpir_field* field, size_t n, size_t k, rmpir_code** out) {
  return guarded([&] {
    need(field, "field");
    need(out, "out");
    *out = nullptr;
    *out = new rmpir_code{rmpir::GabidulinCode(field->field, n, k)};
  });
}

void rmpir_code_destroy(rmpir_code* code) { delete code; }

int rmpir_code_encode(const rmpir_code* code, const uint32_t* message, size_t k,
                      uint32_t* codeword, size_t n) {
  return guarded([&] {
    need(code, "code");
    need(message, "message");
    need(codeword, "codeword");
    rmpir::require(k == code->code.dimension() && n == code->code.length(),
                   "buffer sizes do not match the code", rmpir::ErrorCode::kSpecMismatch);
    const auto word = code->code.encode(std::span<const uint32_t>(message, k));
    std::copy(word.begin(), word.end(), codeword);
  });
}

int rmpir_code_decode(const rmpir_code* code, const uint32_t* received, size_t n,
                      const size_t* erased, size_t erased_len, size_t max_errors,
                      uint32_t* message, size_t k) {
  return guarded([&] {
    need(code, "code");
    need(received, "received");
    need(message, "message");
    if (erased_len > 0) need(erased, "erased");
    rmpir::require(k == code->code.dimension() && n == code->code.length(),
                   "buffer sizes do not match the code", rmpir::ErrorCode::kSpecMismatch);
    const auto res = rmpir::error_erasure_decode(
        code->code, std::span<const uint32_t>(received, n),
        std::span<const std::size_t>(erased, erased_len), max_errors);
    if (!res) rmpir::fail(rmpir::ErrorCode::kDecodingFailure, "no codeword within radius");
    std::copy(res->message.begin(), res->message.end(), message);
  });
}

int rmpir_experiment_create(const char* json, rmpir_experiment** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = nullptr;
    *out = new rmpir_experiment{rmpir::parse_config(json)};
  });
}

int rmpir_experiment_load(const char* path, rmpir_experiment** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new rmpir_experiment{rmpir::load_config(path)};
  });
}

void rmpir_experiment_destroy(rmpir_experiment* exp) { delete exp; }

int rmpir_experiment_set_kind(rmpir_experiment* exp, const char* kind) {
  return guarded([&] {
    need(exp, "experiment");
    need(kind, "kind");
    exp->config.kind = kind;
  });
}

int rmpir_experiment_set_seed(rmpir_experiment* exp, uint64_t seed) {
  return guarded([&] {
    need(exp, "experiment");
    exp->config.seed = seed;
  });
}

int rmpir_experiment_set_trials(rmpir_experiment* exp, uint64_t trials) {
  return guarded([&] {
    need(exp, "experiment");
    rmpir::require(trials >= 1, "trials must be at least 1", rmpir::ErrorCode::kConfig);
    exp->config.trials = trials;
  });
}

int rmpir_experiment_set_variant(rmpir_experiment* exp, const char* variant) {
  return guarded([&] {
    need(exp, "experiment");
    need(variant, "variant");
    exp->config.params.variant = rmpir::parse_variant(variant);
  });
}

int rmpir_experiment_set_threads(rmpir_experiment* exp, unsigned threads) {
  return guarded([&] {
    need(exp, "experiment");
    exp->config.threads = threads;
  });
}

int rmpir_experiment_validate(const rmpir_experiment* exp) {
  return guarded([&] {
    need(exp, "experiment");
    exp->config.validate();
  });
}

int rmpir_experiment_digest(const rmpir_experiment* exp, char** out) {
  return guarded([&] {
    need(exp, "experiment");
    need(out, "out");
    *out = dup_string(exp->config.digest());
  });
}

int rmpir_experiment_run(const rmpir_experiment* exp, int format, int include_runtime,
                         char** out, int* all_pass) {
  return guarded([&] {
    need(exp, "experiment");
    need(out, "out");
    *out = nullptr;
    const auto rows = rmpir::run_experiment(exp->config);
    *out = dup_string(render(rows, format, include_runtime != 0));
    if (all_pass) *all_pass = all_checked_pass(rows) ? 1 : 0;
  });
}

int rmpir_experiment_transcript(const rmpir_experiment* exp, char** out) {
  return guarded([&] {
    need(exp, "experiment");
    need(out, "out");
    *out = dup_string(rmpir::roundtrip_transcript(exp->config));
  });
}

int rmpir_examples_report(int format, char** table, char** text, int* all_pass) {
  return guarded([&] {
    std::string report;
    const auto rows = rmpir::examples_report(report);
    if (table) *table = dup_string(render(rows, format, false));
    if (text) *text = dup_string(report);
    if (all_pass) *all_pass = all_checked_pass(rows) ? 1 : 0;
  });
}

}  // extern "C"
