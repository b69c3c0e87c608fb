// SPDX-License-Identifier: Apache-2.0
//
// Strongest-average-RSS association and the six-way AU classification.

#pragma once

#include "uavnoma/netmodel.hpp"
#include "uavnoma/pointfield.hpp"

#include <array>
#include <cstddef>
#include <string_view>

namespace uavnoma {

enum class AuCase { NonCompL, NonCompN, CompLL, CompNN, CompLN, CompNL };

inline constexpr std::array<AuCase, 6> kAllCases = {AuCase::NonCompL, AuCase::NonCompN, AuCase::CompLL,
                                                    AuCase::CompNN,   AuCase::CompLN,   AuCase::CompNL};
inline constexpr std::size_t kCaseCount = kAllCases.size();

inline constexpr std::size_t index_of(AuCase c) { return static_cast<std::size_t>(c); }
inline constexpr bool is_comp(AuCase c) { return index_of(c) >= 2; }

std::string_view to_string(AuCase c);

/// Link types of the serving BSs, strongest first. Non-CoMP cases only use `first`.
struct CaseLinks {
  LinkType first;
  LinkType second;
};
CaseLinks case_links(AuCase c);

struct ServingBs {
  double r;
  LinkType link;
  std::size_t index;  // into Realization::bs_points
};

/// One or two serving BSs, strongest average RSS first.
struct ServingSet {
  std::array<ServingBs, 2> bs{};
  std::size_t size = 0;
};

/// The classified AU: its case and the serving distances (strongest first).
struct AuClass {
  AuCase kind = AuCase::NonCompL;
  ServingSet serving;

  double r0() const { return serving.bs[0].r; }
  double r1() const { return serving.bs[1].r; }
};

class DegenerateRealization : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Applies the cooperation threshold `cfg.theta` to the top two average RSS
/// values among the nearest/second-nearest LoS and NLoS BSs. Ties go to the
/// LoS BS, then to the nearer one.
AuClass classify_au(const NeighborSummary& nbrs, const NetworkConfig& cfg);

/// Nearest-BS distance of the typical TU, drawn by inverse CDF.
double tu_serving_distance(const NetworkConfig& cfg, Rng& rng);

}  // namespace uavnoma
