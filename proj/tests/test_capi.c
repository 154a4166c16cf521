#include <stdio.h>
#include <string.h>

#include "rmpir/rmpir.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);  \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void field_and_code(void) {
  rmpir_field* f = NULL;
  EXPECT(rmpir_field_create(2, 8, NULL, 0, &f) == RMPIR_OK);
  EXPECT(rmpir_field_order(f) == 256);
  uint32_t x = 0;
  EXPECT(rmpir_field_inv(f, 0, &x) == RMPIR_DIVISION_BY_ZERO);
  EXPECT(strlen(rmpir_last_error()) > 0);
  EXPECT(rmpir_field_inv(f, 7, &x) == RMPIR_OK);
  uint32_t one = 0;
  EXPECT(rmpir_field_mul(f, 7, x, &one) == RMPIR_OK && one == 1);

  const unsigned bad[] = {1, 1, 1};  /* z^2 + z + 1 is not monic of degree 3 */
  rmpir_field* g = NULL;
  EXPECT(rmpir_field_create(2, 3, bad, 3, &g) != RMPIR_OK);
  EXPECT(g == NULL);

  rmpir_code* c = NULL;
  EXPECT(rmpir_code_create(f, 8, 3, &c) == RMPIR_OK);
  const uint32_t msg[3] = {5, 77, 200};
  uint32_t word[8];
  EXPECT(rmpir_code_encode(c, msg, 3, word, 8) == RMPIR_OK);
  word[2] ^= 19;  /* one rank error */
  const size_t erased[2] = {5, 6};
  uint32_t back[3] = {0, 0, 0};
  EXPECT(rmpir_code_decode(c, word, 8, erased, 2, 1, back, 3) == RMPIR_OK);
  EXPECT(back[0] == 5 && back[1] == 77 && back[2] == 200);
  EXPECT(rmpir_code_encode(c, msg, 2, word, 8) == RMPIR_SPEC_MISMATCH);
  rmpir_code_destroy(c);
  rmpir_field_destroy(f);
}

static void experiment(void) {
  rmpir_experiment* e = NULL;
  EXPECT(rmpir_experiment_create("{\"bogus\": 1}", &e) == RMPIR_CONFIG);
  EXPECT(e == NULL);
  const char* cfg =
      "{\"field\": {\"p\": 2, \"s\": 3},"
      " \"params\": {\"m\": 2, \"l\": 3, \"n\": 3, \"k\": 2, \"t\": 1},"
      " \"experiment\": {\"kind\": \"roundtrip\", \"trials\": 5}}";
  EXPECT(rmpir_experiment_create(cfg, &e) == RMPIR_OK);
  EXPECT(rmpir_experiment_set_trials(e, 0) == RMPIR_CONFIG);
  EXPECT(rmpir_experiment_set_seed(e, 42) == RMPIR_OK);
  EXPECT(rmpir_experiment_validate(e) == RMPIR_OK);

  char* digest = NULL;
  EXPECT(rmpir_experiment_digest(e, &digest) == RMPIR_OK && strlen(digest) == 16);
  char* out = NULL;
  int pass = 0;
  EXPECT(rmpir_experiment_run(e, RMPIR_FORMAT_JSON, 0, &out, &pass) == RMPIR_OK);
  EXPECT(pass == 1);
  EXPECT(out != NULL && strstr(out, digest) != NULL);
  rmpir_string_free(out);
  rmpir_string_free(digest);

  char* transcript = NULL;
  EXPECT(rmpir_experiment_transcript(e, &transcript) == RMPIR_OK);
  EXPECT(transcript != NULL && strstr(transcript, "\"round\":2") != NULL);
  rmpir_string_free(transcript);

  EXPECT(rmpir_experiment_set_kind(e, "nonsense") == RMPIR_OK);
  EXPECT(rmpir_experiment_validate(e) == RMPIR_CONFIG);
  rmpir_experiment_destroy(e);
  EXPECT(rmpir_experiment_load("/nonexistent.json", &e) == RMPIR_CONFIG);
}

static void examples(void) {
  char* table = NULL;
  char* text = NULL;
  int pass = 0;
  EXPECT(rmpir_examples_report(RMPIR_FORMAT_CSV, &table, &text, &pass) == RMPIR_OK);
  EXPECT(pass == 1);
  EXPECT(strstr(text, "a^4 + a^3 + a + 1") != NULL);
  rmpir_string_free(table);
  rmpir_string_free(text);
  EXPECT(strcmp(rmpir_strerror(RMPIR_CONFIG), "configuration error") == 0);
}

int main(void) {
  field_and_code();
  experiment();
  examples();
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("C API checks passed\n");
  return failures ? 1 : 0;
}
