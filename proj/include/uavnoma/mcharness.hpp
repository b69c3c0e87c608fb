// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo estimation of coverage, association frequencies and ergodic
// rates. Realization i always draws from stream_seed(master_seed, i), and
// reductions run in index order, so results do not depend on worker count.

#pragma once

#include "uavnoma/assoc.hpp"
#include "uavnoma/sirlab.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace uavnoma {

/// Worker threads for parallel loops; UAVNOMA_WORKERS overrides the default.
unsigned worker_count();

/// A binomial proportion with its Wilson 95% interval.
struct Proportion {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;

  double half_width() const { return 0.5 * (ci_high - ci_low); }
};

Proportion wilson(std::uint64_t successes, std::uint64_t trials);

/// A sample mean with a normal-approximation 95% half-width.
struct MeanEstimate {
  double value = 0.0;
  double ci_half = 0.0;
  std::uint64_t samples = 0;
};

struct CoverageResult {
  Scheme scheme = Scheme::CompNoma;
  std::vector<double> thresholds;                            // linear
  std::array<std::vector<Proportion>, kCaseCount> conditional;  // [case][threshold]
  std::array<Proportion, kCaseCount> assoc_freq;
  std::vector<Proportion> overall;  // AU coverage, all cases pooled
  std::vector<Proportion> tu;
  std::uint64_t iterations = 0;
  std::uint64_t degenerate = 0;  // realizations without any BS, excluded
};

struct RateResult {
  Scheme scheme = Scheme::CompNoma;
  MeanEstimate R_u_noncomp;  // E[rate * 1{Non-CoMP}]
  MeanEstimate R_u_comp;     // E[rate * 1{CoMP}]
  MeanEstimate R_u_total;
  MeanEstimate R_t;
  MeanEstimate R_total;
  std::uint64_t iterations = 0;
  std::uint64_t unbounded_au = 0;  // interference-free realizations left out
  std::uint64_t unbounded_tu = 0;
  std::uint64_t degenerate = 0;
};

/// Per-realization SIR samples for several schemes on common random numbers.
struct SampleSet {
  std::vector<Scheme> schemes;
  std::vector<std::vector<SirSample>> samples;  // [scheme][realization]
  std::vector<std::uint8_t> degenerate;         // [realization]
};

SampleSet simulate(const NetworkConfig& cfg, const std::vector<Scheme>& schemes, std::uint64_t n,
                   std::uint64_t master_seed);

CoverageResult coverage_from_samples(const SampleSet& set, std::size_t scheme_slot,
                                     const std::vector<double>& thresholds);
RateResult rate_from_samples(const SampleSet& set, std::size_t scheme_slot);

CoverageResult estimate_coverage(const NetworkConfig& cfg, Scheme scheme, const std::vector<double>& thresholds,
                                 std::uint64_t n, std::uint64_t master_seed);
RateResult estimate_rate(const NetworkConfig& cfg, Scheme scheme, std::uint64_t n, std::uint64_t master_seed);
std::array<Proportion, kCaseCount> estimate_assoc_freq(const NetworkConfig& cfg, std::uint64_t n,
                                                       std::uint64_t master_seed);

}  // namespace uavnoma
