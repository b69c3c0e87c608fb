// SPDX-License-Identifier: Apache-2.0

#include "uavnoma/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uavnoma {

std::string_view to_string(AuCase c) {
  switch (c) {
    case AuCase::NonCompL: return "NonCompL";
    case AuCase::NonCompN: return "NonCompN";
    case AuCase::CompLL: return "CompLL";
    case AuCase::CompNN: return "CompNN";
    case AuCase::CompLN: return "CompLN";
    case AuCase::CompNL: return "CompNL";
  }
  return "?";
}

CaseLinks case_links(AuCase c) {
  using enum LinkType;
  switch (c) {
    case AuCase::NonCompL: return {LoS, LoS};
    case AuCase::NonCompN: return {NLoS, NLoS};
    case AuCase::CompLL: return {LoS, LoS};
    case AuCase::CompNN: return {NLoS, NLoS};
    case AuCase::CompLN: return {LoS, NLoS};
    case AuCase::CompNL: return {NLoS, LoS};
  }
  return {LoS, LoS};
}

namespace {

struct Candidate {
  double rss;
  double r;
  LinkType link;
  std::size_t index;
};

bool stronger(const Candidate& a, const Candidate& b) {
  if (a.rss != b.rss) return a.rss > b.rss;
  if (a.link != b.link) return a.link == LinkType::LoS;
  return a.r < b.r;
}

}  // namespace

AuClass classify_au(const NeighborSummary& nbrs, const NetworkConfig& cfg) {
  if (nbrs.empty()) throw DegenerateRealization("no BS in the simulation window");

  std::array<Candidate, 4> cand{};
  std::size_t n = 0;
  auto push = [&](const std::optional<Neighbor>& nb, LinkType link) {
    if (nb) cand[n++] = {cfg.eta(link) * std::pow(nb->r, -cfg.alpha(link)), nb->r, link, nb->index};
  };
  push(nbrs.L0, LinkType::LoS);
  push(nbrs.L1, LinkType::LoS);
  push(nbrs.N0, LinkType::NLoS);
  push(nbrs.N1, LinkType::NLoS);
  std::sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(n), stronger);

  AuClass out;
  const Candidate& b0 = cand[0];
  out.serving.bs[0] = {b0.r, b0.link, b0.index};
  if (n == 1 || b0.rss / cand[1].rss >= cfg.theta) {
    out.kind = b0.link == LinkType::LoS ? AuCase::NonCompL : AuCase::NonCompN;
    out.serving.size = 1;
    return out;
  }
  const Candidate& b1 = cand[1];
  out.serving.bs[1] = {b1.r, b1.link, b1.index};
  out.serving.size = 2;
  using enum LinkType;
  if (b0.link == LoS)
    out.kind = b1.link == LoS ? AuCase::CompLL : AuCase::CompLN;
  else
    out.kind = b1.link == NLoS ? AuCase::CompNN : AuCase::CompNL;
  return out;
}

double tu_serving_distance(const NetworkConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double dh = cfg.dh_t();
  const double u = unit(rng);
  return std::sqrt(dh * dh - std::log1p(-u) / (std::numbers::pi * cfg.lambda_b));
}

}  // namespace uavnoma
