// SPDX-License-Identifier: Apache-2.0

#include "uavnoma/pointfield.hpp"

#include <cmath>
#include <numbers>

namespace uavnoma {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Poisson number of points uniform on the disc; calls emit(z) for each.
template <class Emit>
void sample_disc(const NetworkConfig& cfg, Rng& rng, Emit&& emit) {
  const double mean = cfg.lambda_b * std::numbers::pi * cfg.sim_radius * cfg.sim_radius;
  if (!(mean > 0.0)) return;
  std::poisson_distribution<std::uint64_t> count(mean);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::uint64_t n = count(rng);
  for (std::uint64_t i = 0; i < n; ++i) emit(cfg.sim_radius * std::sqrt(unit(rng)));
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double sample_fading_power(LinkType link, const NetworkConfig& cfg, Rng& rng) {
  const double m = cfg.fading_order(link);
  std::gamma_distribution<double> g(m, 1.0 / m);
  double v = g(rng);
  while (!(v > 0.0)) v = g(rng);
  return v;
}

Realization sample_realization(const NetworkConfig& cfg, std::uint64_t seed) {
  Realization out;
  out.rng_stream_id = seed;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double dh = cfg.dh_u();
  sample_disc(cfg, rng, [&](double z) {
    BsPoint p{};
    p.z = z;
    p.r = std::sqrt(z * z + dh * dh);
    p.link = unit(rng) < los_probability(z, cfg) ? LinkType::LoS : LinkType::NLoS;
    p.fading_power_au = sample_fading_power(p.link, cfg, rng);
    out.bs_points.push_back(p);
  });
  return out;
}

TuRealization sample_tu_realization(const NetworkConfig& cfg, std::uint64_t seed) {
  TuRealization out;
  Rng rng(seed);
  std::exponential_distribution<double> rayleigh(1.0);
  const double dh = cfg.dh_t();
  sample_disc(cfg, rng, [&](double z) {
    out.r.push_back(std::sqrt(z * z + dh * dh));
    out.fading_power.push_back(rayleigh(rng));
  });
  return out;
}

NeighborSummary neighbor_summary(const Realization& real) {
  NeighborSummary s;
  auto offer = [](std::optional<Neighbor>& first, std::optional<Neighbor>& second, Neighbor n) {
    if (!first || n.r < first->r) {
      second = first;
      first = n;
    } else if (!second || n.r < second->r) {
      second = n;
    }
  };
  for (std::size_t i = 0; i < real.bs_points.size(); ++i) {
    const auto& p = real.bs_points[i];
    if (p.link == LinkType::LoS)
      offer(s.L0, s.L1, {p.r, i});
    else
      offer(s.N0, s.N1, {p.r, i});
  }
  return s;
}

}  // namespace uavnoma
