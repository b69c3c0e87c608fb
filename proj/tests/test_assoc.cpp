// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uavnoma/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace uavnoma;

namespace {

Realization field(std::initializer_list<std::pair<double, LinkType>> pts) {
  Realization r;
  for (auto [dist, link] : pts) r.bs_points.push_back({0.0, dist, link, 1.0});
  return r;
}

AuClass classify(const Realization& r, const NetworkConfig& c) { return classify_au(neighbor_summary(r), c); }

// Ranks every BS of the realization by average RSS.
AuCase brute_force_case(const Realization& real, const NetworkConfig& c) {
  std::vector<std::pair<double, LinkType>> rss;
  for (const BsPoint& p : real.bs_points) rss.push_back({c.eta(p.link) * std::pow(p.r, -c.alpha(p.link)), p.link});
  std::sort(rss.begin(), rss.end(), [](auto& a, auto& b) { return a.first > b.first; });
  const bool los0 = rss[0].second == LinkType::LoS;
  if (rss.size() == 1 || rss[0].first / rss[1].first >= c.theta) return los0 ? AuCase::NonCompL : AuCase::NonCompN;
  const bool los1 = rss[1].second == LinkType::LoS;
  if (los0) return los1 ? AuCase::CompLL : AuCase::CompLN;
  return los1 ? AuCase::CompNL : AuCase::CompNN;
}

}  // namespace

TEST_CASE("case names and link types") {
  CHECK(to_string(AuCase::CompNL) == "CompNL");
  CHECK(case_links(AuCase::CompNL).first == LinkType::NLoS);
  CHECK(case_links(AuCase::CompNL).second == LinkType::LoS);
  CHECK(is_comp(AuCase::CompLL));
  CHECK_FALSE(is_comp(AuCase::NonCompN));
}

TEST_CASE("hand-built classifications") {
  NetworkConfig c;  // theta = 4 dB
  const BoundaryMaps bm = boundary_maps(c);
  const double thL = std::pow(c.theta, 1.0 / c.alpha_L);
  using enum LinkType;

  SUBCASE("lone LoS BS") { CHECK(classify(field({{100.0, LoS}}), c).kind == AuCase::NonCompL); }
  SUBCASE("two LoS BSs within the threshold cooperate") {
    const AuClass a = classify(field({{100.0, LoS}, {100.0 * thL * 0.99, LoS}}), c);
    CHECK(a.kind == AuCase::CompLL);
    CHECK(a.r0() == 100.0);
    CHECK(a.serving.size == 2);
  }
  SUBCASE("second LoS BS just outside the threshold") {
    CHECK(classify(field({{100.0, LoS}, {100.0 * thL * 1.01, LoS}}), c).kind == AuCase::NonCompL);
  }
  SUBCASE("NLoS BS stronger than a far LoS BS") {
    const double rN = 70.0;
    const AuClass a = classify(field({{bm.d_NL(rN) * 1.05, LoS}, {rN, NLoS}}), c);
    CHECK(a.kind == AuCase::CompNL);
    CHECK(a.serving.bs[0].link == NLoS);
  }
  SUBCASE("LoS BS slightly stronger than an NLoS BS") {
    const double rL = 200.0;
    CHECK(classify(field({{rL, LoS}, {bm.d_LN(rL) * 1.02, NLoS}}), c).kind == AuCase::CompLN);
  }
  SUBCASE("theta of one never cooperates") {
    NetworkConfig one = c;
    one.theta = 1.0;
    CHECK(classify(field({{100.0, LoS}, {100.0, LoS}}), one).kind == AuCase::NonCompL);
  }
  SUBCASE("an empty field is degenerate") { CHECK_THROWS_AS(classify(Realization{}, c), DegenerateRealization); }
}

TEST_CASE("classification agrees with a full RSS ranking") {
  for (double theta_db : {0.0, 4.0, 12.0}) {
    NetworkConfig c;
    c.theta = std::pow(10.0, theta_db / 10.0);
    for (std::uint64_t i = 0; i < 400; ++i) {
      const Realization real = sample_realization(c, stream_seed(21, i));
      if (real.bs_points.empty()) continue;
      CHECK(classify(real, c).kind == brute_force_case(real, c));
    }
  }
}

TEST_CASE("TU serving distance follows the nearest-neighbor law") {
  NetworkConfig c;
  Rng rng(17);
  std::vector<double> xs(20000);
  for (double& x : xs) x = tu_serving_distance(c, rng);
  std::sort(xs.begin(), xs.end());
  const double dh = c.dh_t();
  double d = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = 1.0 - std::exp(-std::numbers::pi * c.lambda_b * (xs[i] * xs[i] - dh * dh));
    d = std::max({d, std::abs(F - i / n), std::abs((i + 1) / n - F)});
  }
  CHECK(d < 0.012);
  CHECK(xs.front() >= dh);
}
