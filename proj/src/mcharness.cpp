// SPDX-License-Identifier: Apache-2.0

#include "uavnoma/mcharness.hpp"

#include "parallel.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

namespace uavnoma {

unsigned worker_count() {
  if (const char* env = std::getenv("UAVNOMA_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Proportion wilson(std::uint64_t successes, std::uint64_t trials) {
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  if (trials == 0) return p;
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (phat + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;
  p.value = phat;
  p.ci_low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  p.ci_high = successes == trials ? 1.0 : std::min(1.0, center + half);
  return p;
}

namespace {

// Neumaier-compensated running sum and sum of squares.
class Accumulator {
public:
  void add(double x) {
    sum(s_, c_, x);
    sum(q_, cq_, x * x);
    ++n_;
  }
  MeanEstimate estimate() const {
    MeanEstimate e;
    e.samples = n_;
    if (n_ == 0) return e;
    const double n = static_cast<double>(n_);
    const double mean = (s_ + c_) / n;
    const double var = std::max(0.0, (q_ + cq_) / n - mean * mean);
    e.value = mean;
    e.ci_half = n_ > 1 ? 1.959963984540054 * std::sqrt(var * n / (n - 1.0) / n) : 0.0;
    return e;
  }

private:
  static void sum(double& s, double& c, double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double s_ = 0.0, c_ = 0.0, q_ = 0.0, cq_ = 0.0;
  std::uint64_t n_ = 0;
};

std::uint64_t tu_stream(std::uint64_t master_seed, std::uint64_t i) {
  return stream_seed(master_seed ^ 0x5bd1e9955bd1e995ULL, i);
}

}  // namespace

SampleSet simulate(const NetworkConfig& cfg, const std::vector<Scheme>& schemes, std::uint64_t n,
                   std::uint64_t master_seed) {
  cfg.validate();
  if (schemes.empty()) throw ModelError("simulate: no scheme requested");
  SampleSet set;
  set.schemes = schemes;
  set.samples.assign(schemes.size(), std::vector<SirSample>(n));
  set.degenerate.assign(n, 0);
  detail::parallel_for(n, worker_count(), [&](std::uint64_t i) {
    const Realization real = sample_realization(cfg, stream_seed(master_seed, i));
    const TuRealization tu = sample_tu_realization(cfg, tu_stream(master_seed, i));
    if (real.bs_points.empty()) {
      set.degenerate[i] = 1;
      return;
    }
    for (std::size_t s = 0; s < schemes.size(); ++s) set.samples[s][i] = evaluate_sir(real, tu, cfg, schemes[s]);
  });
  return set;
}

CoverageResult coverage_from_samples(const SampleSet& set, std::size_t slot, const std::vector<double>& thresholds) {
  CoverageResult out;
  out.scheme = set.schemes.at(slot);
  out.thresholds = thresholds;
  const auto& samples = set.samples[slot];
  const std::size_t nt = thresholds.size();

  std::array<std::uint64_t, kCaseCount> in_case{};
  std::array<std::vector<std::uint64_t>, kCaseCount> hits;
  for (auto& h : hits) h.assign(nt, 0);
  std::vector<std::uint64_t> hits_all(nt, 0), hits_tu(nt, 0);
  std::uint64_t valid = 0;

  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (set.degenerate[i]) {
      ++out.degenerate;
      continue;
    }
    ++valid;
    const SirSample& s = samples[i];
    const std::size_t c = index_of(s.au_class.kind);
    ++in_case[c];
    for (std::size_t t = 0; t < nt; ++t) {
      if (s.sir_au > thresholds[t]) {
        ++hits[c][t];
        ++hits_all[t];
      }
      if (s.sir_tu > thresholds[t]) ++hits_tu[t];
    }
  }
  out.iterations = valid;
  for (std::size_t c = 0; c < kCaseCount; ++c) {
    out.assoc_freq[c] = wilson(in_case[c], valid);
    out.conditional[c].resize(nt);
    for (std::size_t t = 0; t < nt; ++t) out.conditional[c][t] = wilson(hits[c][t], in_case[c]);
  }
  out.overall.resize(nt);
  out.tu.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    out.overall[t] = wilson(hits_all[t], valid);
    out.tu[t] = wilson(hits_tu[t], valid);
  }
  return out;
}

RateResult rate_from_samples(const SampleSet& set, std::size_t slot) {
  RateResult out;
  const Scheme scheme = set.schemes.at(slot);
  out.scheme = scheme;
  const double share = resource_fraction(scheme);
  Accumulator nc, co, au, tu, total;
  for (std::size_t i = 0; i < set.samples[slot].size(); ++i) {
    if (set.degenerate[i]) {
      ++out.degenerate;
      continue;
    }
    ++out.iterations;
    const SirSample& s = set.samples[slot][i];
    const bool au_ok = std::isfinite(s.sir_au);
    const bool tu_ok = std::isfinite(s.sir_tu);
    if (!au_ok) ++out.unbounded_au;
    if (!tu_ok) ++out.unbounded_tu;
    const double ru = au_ok ? share * std::log2(1.0 + s.sir_au) : 0.0;
    const double rt = tu_ok ? share * std::log2(1.0 + s.sir_tu) : 0.0;
    if (au_ok) {
      const bool comp = is_comp(s.au_class.kind);
      nc.add(comp ? 0.0 : ru);
      co.add(comp ? ru : 0.0);
      au.add(ru);
    }
    if (tu_ok) tu.add(rt);
    if (au_ok && tu_ok) total.add(ru + rt);
  }
  out.R_u_noncomp = nc.estimate();
  out.R_u_comp = co.estimate();
  out.R_u_total = au.estimate();
  out.R_t = tu.estimate();
  // Reported total keeps the additive decomposition exact.
  out.R_total = total.estimate();
  out.R_total.value = out.R_u_noncomp.value + out.R_u_comp.value + out.R_t.value;
  return out;
}

CoverageResult estimate_coverage(const NetworkConfig& cfg, Scheme scheme, const std::vector<double>& thresholds,
                                 std::uint64_t n, std::uint64_t master_seed) {
  if (n < 100) throw ModelError("estimate_coverage: need at least 100 iterations");
  for (std::size_t t = 1; t < thresholds.size(); ++t)
    if (thresholds[t] < thresholds[t - 1]) throw ModelError("estimate_coverage: thresholds must be ascending");
  const SampleSet set = simulate(cfg, {scheme}, n, master_seed);
  return coverage_from_samples(set, 0, thresholds);
}

RateResult estimate_rate(const NetworkConfig& cfg, Scheme scheme, std::uint64_t n, std::uint64_t master_seed) {
  if (n < 100) throw ModelError("estimate_rate: need at least 100 iterations");
  const SampleSet set = simulate(cfg, {scheme}, n, master_seed);
  return rate_from_samples(set, 0);
}

std::array<Proportion, kCaseCount> estimate_assoc_freq(const NetworkConfig& cfg, std::uint64_t n,
                                                       std::uint64_t master_seed) {
  cfg.validate();
  std::vector<std::uint8_t> kind(n, 0xff);
  detail::parallel_for(n, worker_count(), [&](std::uint64_t i) {
    const Realization real = sample_realization(cfg, stream_seed(master_seed, i));
    if (real.bs_points.empty()) return;
    kind[i] = static_cast<std::uint8_t>(index_of(classify_au(neighbor_summary(real), cfg).kind));
  });
  std::array<std::uint64_t, kCaseCount> counts{};
  std::uint64_t valid = 0;
  for (auto k : kind)
    if (k != 0xff) {
      ++counts[k];
      ++valid;
    }
  std::array<Proportion, kCaseCount> out;
  for (std::size_t c = 0; c < kCaseCount; ++c) out[c] = wilson(counts[c], valid);
  return out;
}

}  // namespace uavnoma
