#include <cmath>
#include <iomanip>
#include <sstream>

#include "rmpir/harness.hpp"

namespace rmpir {

namespace {

// Star-product generator matrix over GF(32) = GF(2)[z]/(z^5 + z^2 + 1), points
// 1, a, a^2, a^3, a^4. Each entry lists the powers of a with coefficient 1.
const std::vector<std::vector<std::vector<unsigned>>> kStarGenerator{
    {{0}, {1}, {2}, {3}, {4}},
    {{0}, {2}, {4}, {1, 3}, {0, 2, 3}},
    {{0}, {4}, {0, 2, 3}, {1, 2, 3}, {0, 1, 3, 4}},
    {{0}, {0, 2, 3}, {0, 1, 3, 4}, {1, 2, 3, 4}, {1}},
};

Element from_powers(const Field& f, const std::vector<unsigned>& powers) {
  std::vector<unsigned> coeffs(f.s(), 0);
  for (unsigned p : powers) coeffs[p] = 1;
  return f.from_coefficients(coeffs);
}

ResultRow exact_row(const std::string& metric, double measured, double expected,
                    const std::string& label, bool pass) {
  ResultRow r;
  r.experiment = "examples";
  r.metric = metric;
  r.trials = 1;
  r.measured = measured;
  r.closed_form = expected;
  r.closed_form_label = label;
  r.checked = true;
  r.pass = pass;
  return r;
}

ResultRow reference_row(const std::string& metric, double value, double reference,
                        double tolerance) {
  return exact_row(metric, value, reference, "reference value",
                   std::abs(value - reference) <= tolerance);
}

ProtocolResult identity_run(const Scheme& scheme, std::uint64_t seed, FileSet& files) {
  Rng rng(seed);
  files = FileSet::random(scheme.field(), rng, scheme.params().m, scheme.beta(),
                          scheme.params().k);
  const EncodedStorage storage =
      encode_storage(files, scheme.storage_code(), scheme.params().l);
  return run_protocol(scheme, storage, ChannelConfig{}, 1, rng);
}

}  // namespace

std::vector<ResultRow> examples_report(std::string& text) {
  std::ostringstream os;
  std::vector<ResultRow> rows;

  {
    const Field f = Field::gf32();
    const GabidulinCode star = star_code(GabidulinCode(f, 5, 3), GabidulinCode(f, 5, 2));
    const Matrix g = star.generator_matrix();
    std::size_t matches = 0;
    std::size_t total = 0;
    os << "Star product G(5,3) * G(5,2) over GF(32), z^5 + z^2 + 1\n";
    for (std::size_t r = 0; r < g.rows(); ++r) {
      for (std::size_t c = 0; c < g.cols(); ++c) {
        if (r < kStarGenerator.size() && g(r, c) == from_powers(f, kStarGenerator[r][c])) {
          ++matches;
        }
        ++total;
        os << (c ? " | " : "  ") << f.to_string(g(r, c));
      }
      os << "\n";
    }
    const bool shape = g.rows() == 4 && g.cols() == 5;
    rows.push_back(exact_row("star_generator_matrix_matches", static_cast<double>(matches),
                             20, "20 reference entries", shape && matches == 20));
    rows.push_back(exact_row("star_code_dimension", static_cast<double>(star.dimension()),
                             4, "k_C + k_D - 1", star.dimension() == 4));
    os << "  dimension " << star.dimension() << ", " << matches << "/" << total
       << " entries match\n\n";
  }

  {
    const Scheme scheme(Field::gf8(), SystemParams{.m = 2, .l = 3, .n = 3, .k = 2, .t = 1});
    FileSet files;
    const ProtocolResult res = identity_run(scheme, 2, files);
    const bool ok = res.success && *res.file == files.file(1) && res.rounds.size() == 2;
    rows.push_back(exact_row("gf8_n3_identity_rate", res.rate(), 1.0 / 3,
                             "beta / n", ok && res.retrieved * 3 == res.downloaded));
    const double fail_2nk = 1 - std::pow(7.0 / 8, 12);
    const double fail_alt = 1 - std::pow(7.0 / 8, 2 * 3 + 2);
    rows.push_back(reference_row("gf8_n3_failure_2nk", fail_2nk, 0.798582762, 5e-10));
    ResultRow alt = exact_row("gf8_n3_failure_2n_plus_k", fail_alt, fail_alt,
                                  "1-(1-1/q^s)^(2n+k), alternative exponent", true);
    alt.checked = false;
    rows.push_back(alt);
    os << "GF(8) system: n = 3, k = 2, l = 3, t = 1\n"
       << "  identity channels: recovered " << (ok ? "yes" : "NO") << " in "
       << res.rounds.size() << " rounds, rate " << res.retrieved << "/" << res.downloaded
       << "\n"
       << "  failure 1-(7/8)^12 = " << std::setprecision(9) << fail_2nk << "\n"
       << "  failure with exponent 2n+k: 1-(7/8)^8 = " << fail_alt << "\n\n";
  }

  {
    const Scheme scheme(Field::gf256(),
                        SystemParams{.m = 2, .l = 4, .n = 8, .k = 3, .t = 2});
    FileSet files;
    const ProtocolResult res = identity_run(scheme, 3, files);
    const bool ok = res.success && *res.file == files.file(1) && res.rounds.size() == 3 &&
                    res.downloaded == 24 && res.retrieved == 6;
    rows.push_back(exact_row("gf256_n8_identity_rate", res.rate(), 0.25, "beta / n", ok));
    const double p2 = round_partial_probability(scheme, 2);
    const double p1 = round_partial_probability(scheme, 1);
    const double avg = average_round_rate(scheme);
    const double code_rate = 1 - (3.0 + 4 - 1) / 8;
    rows.push_back(reference_row("gf256_n8_P_2", p2, 0.94, 5e-3));
    rows.push_back(reference_row("gf256_n8_P_1", p1, 0.015, 5e-4));
    rows.push_back(reference_row("gf256_n8_average_rate", avg, 0.24, 5e-3));
    rows.push_back(exact_row("gf256_n8_code_rate", code_rate, 0.25,
                             "1 - (k + t rho - 1) / n", code_rate == 0.25));
    os << "GF(256) system: n = 8, k = 3, l = 4, t = 2, rho = 2\n"
       << "  identity channels: recovered " << (ok ? "yes" : "NO") << " in "
       << res.rounds.size() << " rounds, rate " << res.retrieved << "/" << res.downloaded
       << "\n"
       << "  P_2 = (255/256)^16 = " << p2 << "\n"
       << "  P_1 = " << p1 << "\n"
       << "  average rate P_2 * 2/8 + P_1 * 1/8 = " << avg << "\n"
       << "  rate 1 - (k + t rho - 1)/n = " << code_rate << "\n";
  }

  for (ResultRow& r : rows) r.digest = "examples";
  text = os.str();
  return rows;
}

}  // namespace rmpir
