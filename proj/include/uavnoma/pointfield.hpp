// SPDX-License-Identifier: Apache-2.0
//
// Sampling of one BS field around the typical user.

#pragma once

#include "uavnoma/netmodel.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace uavnoma {

using Rng = std::mt19937_64;

/// Seeds realization `index` of a run independently of scheduling order.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index);

struct BsPoint {
  double z;              // horizontal distance, m
  double r;              // 3D distance to the AU, m
  LinkType link;
  double fading_power_au;
};

/// BSs inside the simulation disc, seen from the typical AU at the origin.
struct Realization {
  std::vector<BsPoint> bs_points;
  std::uint64_t rng_stream_id = 0;
};

/// Ground-level view of a BS field, seen from the typical TU.
struct TuRealization {
  std::vector<double> r;             // 3D distances, m
  std::vector<double> fading_power;  // Exp(1)
};

Realization sample_realization(const NetworkConfig& cfg, std::uint64_t seed);
TuRealization sample_tu_realization(const NetworkConfig& cfg, std::uint64_t seed);

/// Gamma(m_v, 1/m_v) channel power gain.
double sample_fading_power(LinkType link, const NetworkConfig& cfg, Rng& rng);

struct Neighbor {
  double r;
  std::size_t index;  // position in Realization::bs_points
};

struct NeighborSummary {
  std::optional<Neighbor> L0, L1, N0, N1;

  bool empty() const { return !L0 && !N0; }
};

NeighborSummary neighbor_summary(const Realization& real);

}  // namespace uavnoma
