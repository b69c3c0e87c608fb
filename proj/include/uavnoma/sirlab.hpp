// SPDX-License-Identifier: Apache-2.0
//
// Exact per-realization SIR of the typical AU and TU under the four access
// schemes. Transmit power cancels everywhere and is not applied.

#pragma once

#include "uavnoma/assoc.hpp"
#include "uavnoma/netmodel.hpp"
#include "uavnoma/pointfield.hpp"

#include <array>
#include <string_view>

namespace uavnoma {

enum class Scheme { CompNoma, CompOma, NomaOnly, OmaOnly };

inline constexpr std::array<Scheme, 4> kAllSchemes = {Scheme::CompNoma, Scheme::CompOma, Scheme::NomaOnly,
                                                      Scheme::OmaOnly};

std::string_view to_string(Scheme s);
/// Accepts comp_noma, comp_oma, noma_only, oma_only (case-insensitive, '-' or '_').
Scheme parse_scheme(std::string_view name);

inline bool is_noma(Scheme s) { return s == Scheme::CompNoma || s == Scheme::NomaOnly; }
inline bool uses_comp(Scheme s) { return s == Scheme::CompNoma || s == Scheme::CompOma; }
/// Share of the time-frequency resource a user gets: 1/2 under OMA.
inline double resource_fraction(Scheme s) { return is_noma(s) ? 1.0 : 0.5; }

/// Configuration the scheme actually runs with: non-CoMP schemes use theta = 1.
NetworkConfig effective_config(const NetworkConfig& cfg, Scheme s);

struct SirSample {
  double sir_au = 0.0;
  double sir_tu = 0.0;
  AuClass au_class;
};

/// +inf when the realization holds no interferer.
double sir_au_noncomp(const Realization& real, const ServingBs& serving, const NetworkConfig& cfg, Scheme scheme);
double sir_au_comp(const Realization& real, const ServingSet& serving, const NetworkConfig& cfg, Scheme scheme);
/// TU served by its nearest BS, Rayleigh fading on every link, perfect SIC.
double sir_tu(const TuRealization& real, const NetworkConfig& cfg, Scheme scheme);

/// Classifies the AU under the scheme's threshold and evaluates both SIRs.
SirSample evaluate_sir(const Realization& real, const TuRealization& tu, const NetworkConfig& cfg, Scheme scheme);

}  // namespace uavnoma
