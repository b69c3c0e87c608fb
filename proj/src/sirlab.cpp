// SPDX-License-Identifier: Apache-2.0

#include "uavnoma/sirlab.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

namespace uavnoma {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::CompNoma: return "comp_noma";
    case Scheme::CompOma: return "comp_oma";
    case Scheme::NomaOnly: return "noma_only";
    case Scheme::OmaOnly: return "oma_only";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  std::string key;
  for (char c : name) key.push_back(c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (Scheme s : kAllSchemes)
    if (to_string(s) == key) return s;
  throw ModelError("unknown scheme '" + std::string(name) + "'");
}

NetworkConfig effective_config(const NetworkConfig& cfg, Scheme s) {
  NetworkConfig out = cfg;
  if (!uses_comp(s)) out.theta = 1.0;
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double received(const BsPoint& p, const NetworkConfig& cfg) {
  return cfg.eta(p.link) * std::pow(p.r, -cfg.alpha(p.link)) * p.fading_power_au;
}

double interference(const Realization& real, const NetworkConfig& cfg, std::size_t skip0, std::size_t skip1) {
  double sum = 0.0;
  for (std::size_t i = 0; i < real.bs_points.size(); ++i)
    if (i != skip0 && i != skip1) sum += received(real.bs_points[i], cfg);
  return sum;
}

}  // namespace

double sir_au_noncomp(const Realization& real, const ServingBs& serving, const NetworkConfig& cfg, Scheme scheme) {
  const double signal = received(real.bs_points.at(serving.index), cfg);
  const double interf = interference(real, cfg, serving.index, serving.index);
  if (is_noma(scheme)) return cfg.rho_u * signal / (cfg.rho_t * signal + interf);
  return interf > 0.0 ? signal / interf : kInf;
}

double sir_au_comp(const Realization& real, const ServingSet& serving, const NetworkConfig& cfg, Scheme scheme) {
  if (serving.size != 2) throw ModelError("sir_au_comp needs exactly two serving BSs");
  const auto& p0 = real.bs_points.at(serving.bs[0].index);
  const auto& p1 = real.bs_points.at(serving.bs[1].index);
  // MRT aligns phases, so the amplitudes add coherently.
  const double a0 = std::sqrt(received(p0, cfg));
  const double a1 = std::sqrt(received(p1, cfg));
  const double coherent = (a0 + a1) * (a0 + a1);
  const double interf = interference(real, cfg, serving.bs[0].index, serving.bs[1].index);
  if (is_noma(scheme)) return cfg.rho_u * coherent / (cfg.rho_t * (a0 * a0 + a1 * a1) + interf);
  return interf > 0.0 ? coherent / interf : kInf;
}

double sir_tu(const TuRealization& real, const NetworkConfig& cfg, Scheme scheme) {
  if (real.r.empty()) return 0.0;
  const auto nearest = static_cast<std::size_t>(std::min_element(real.r.begin(), real.r.end()) - real.r.begin());
  double signal = 0.0;
  double interf = 0.0;
  for (std::size_t i = 0; i < real.r.size(); ++i) {
    const double p = cfg.eta_t * std::pow(real.r[i], -cfg.alpha_t) * real.fading_power[i];
    (i == nearest ? signal : interf) += p;
  }
  const double share = is_noma(scheme) ? cfg.rho_t : 1.0;
  return interf > 0.0 ? share * signal / interf : kInf;
}

SirSample evaluate_sir(const Realization& real, const TuRealization& tu, const NetworkConfig& cfg, Scheme scheme) {
  const NetworkConfig eff = effective_config(cfg, scheme);
  SirSample out;
  out.au_class = classify_au(neighbor_summary(real), eff);
  out.sir_au = out.au_class.serving.size == 1 ? sir_au_noncomp(real, out.au_class.serving.bs[0], eff, scheme)
                                              : sir_au_comp(real, out.au_class.serving, eff, scheme);
  out.sir_tu = sir_tu(tu, eff, scheme);
  return out;
}

}  // namespace uavnoma
