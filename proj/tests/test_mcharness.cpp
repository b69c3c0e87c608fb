// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uavnoma/mcharness.hpp"

#include <cmath>
#include <cstdlib>

using namespace uavnoma;

TEST_CASE("Wilson interval known values") {
  const Proportion half = wilson(5, 10);
  CHECK(half.value == 0.5);
  CHECK(half.ci_low == doctest::Approx(0.236593).epsilon(1e-5));
  CHECK(half.ci_high == doctest::Approx(0.763407).epsilon(1e-5));

  const Proportion none = wilson(0, 10);
  CHECK(none.ci_low == 0.0);
  CHECK(none.ci_high == doctest::Approx(0.277533).epsilon(1e-5));

  const Proportion all = wilson(10, 10);
  CHECK(all.ci_low == doctest::Approx(0.722467).epsilon(1e-5));
  CHECK(all.ci_high == 1.0);

  const Proportion empty = wilson(0, 0);
  CHECK(empty.trials == 0);
  CHECK(empty.ci_low == 0.0);
  CHECK(empty.ci_high == 1.0);
}

TEST_CASE("worker count honours the environment") {
  ::setenv("UAVNOMA_WORKERS", "3", 1);
  CHECK(worker_count() == 3);
  ::setenv("UAVNOMA_WORKERS", "zero", 1);
  CHECK(worker_count() >= 1);
  ::unsetenv("UAVNOMA_WORKERS");
}

TEST_CASE("results do not depend on the number of workers") {
  NetworkConfig c;
  const std::vector<double> T = {0.1, 1.0, 3.0};
  ::setenv("UAVNOMA_WORKERS", "1", 1);
  const SampleSet a = simulate(c, {Scheme::CompNoma, Scheme::OmaOnly}, 600, 9);
  ::setenv("UAVNOMA_WORKERS", "5", 1);
  const SampleSet b = simulate(c, {Scheme::CompNoma, Scheme::OmaOnly}, 600, 9);
  ::unsetenv("UAVNOMA_WORKERS");
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t i = 0; i < 600; ++i) {
      CHECK(a.samples[s][i].sir_au == b.samples[s][i].sir_au);
      CHECK(a.samples[s][i].sir_tu == b.samples[s][i].sir_tu);
      CHECK(a.samples[s][i].au_class.kind == b.samples[s][i].au_class.kind);
    }
  const RateResult ra = rate_from_samples(a, 0);
  const RateResult rb = rate_from_samples(b, 0);
  CHECK(ra.R_total.value == rb.R_total.value);
}

TEST_CASE("coverage estimates are consistent") {
  NetworkConfig c;
  const std::vector<double> T = {0.1, 1.0, 3.0, 20.0};
  const CoverageResult r = estimate_coverage(c, Scheme::CompNoma, T, 2000, 3);
  CHECK(r.iterations + r.degenerate == 2000);
  std::uint64_t in_cases = 0;
  for (const Proportion& p : r.assoc_freq) in_cases += p.successes;
  CHECK(in_cases == r.iterations);
  for (std::size_t t = 1; t < T.size(); ++t) {
    CHECK(r.overall[t].value <= r.overall[t - 1].value);
    CHECK(r.tu[t].value <= r.tu[t - 1].value);
  }
  // Above 2 rho_u / rho_t = 18 no AU is covered.
  CHECK(r.overall[3].successes == 0);
  // Pooled coverage is the association-weighted sum of the conditional ones.
  for (std::size_t t = 0; t < T.size(); ++t) {
    std::uint64_t hits = 0;
    for (std::size_t k = 0; k < kCaseCount; ++k) hits += r.conditional[k][t].successes;
    CHECK(hits == r.overall[t].successes);
  }
}

TEST_CASE("rate decomposition") {
  NetworkConfig c;
  const RateResult r = estimate_rate(c, Scheme::CompNoma, 1500, 4);
  CHECK(r.R_total.value == doctest::Approx(r.R_u_noncomp.value + r.R_u_comp.value + r.R_t.value).epsilon(1e-14));
  CHECK(r.R_u_total.value == doctest::Approx(r.R_u_noncomp.value + r.R_u_comp.value).epsilon(1e-12));
  CHECK(r.R_u_noncomp.ci_half > 0.0);
  // Each NOMA AU rate is below log2(1 + 2 rho_u / rho_t).
  CHECK(r.R_u_total.value < std::log2(19.0));
}

TEST_CASE("argument checks") {
  NetworkConfig c;
  CHECK_THROWS_AS(estimate_coverage(c, Scheme::CompNoma, {1.0}, 50, 1), ModelError);
  CHECK_THROWS_AS(estimate_coverage(c, Scheme::CompNoma, {2.0, 1.0}, 200, 1), ModelError);
  CHECK_THROWS_AS(simulate(c, {}, 200, 1), ModelError);
}

TEST_CASE("association frequencies match those of the full simulation") {
  NetworkConfig c;
  const auto freq = estimate_assoc_freq(c, 800, 12);
  const CoverageResult cov = estimate_coverage(c, Scheme::CompNoma, {1.0}, 800, 12);
  for (std::size_t k = 0; k < kCaseCount; ++k) CHECK(freq[k].successes == cov.assoc_freq[k].successes);
}
