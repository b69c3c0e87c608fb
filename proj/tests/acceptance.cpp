// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, preceded by the
// numbers it was judged on. Exit status is the number of failed criteria.

#include "uavnoma/analytic.hpp"
#include "uavnoma/expcli.hpp"
#include "uavnoma/mcharness.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

using namespace uavnoma;

namespace {

constexpr std::uint64_t kSeed = 20240601;
const std::vector<double> kThresholdsDb = {-10.0, -5.0, 0.0, 5.0};

std::vector<double> linear(const std::vector<double>& db) {
  std::vector<double> out;
  for (double d : db) out.push_back(db_to_linear(d));
  return out;
}

int failures = 0;

void detail(const char* fmt, auto... args) {
  std::printf("      ");
  std::printf(fmt, args...);
  std::printf("\n");
}

void verdict(int id, bool ok, const std::string& what, double seconds) {
  std::printf("%s criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

void run(int id, const std::string& what, const std::function<bool()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body();
  } catch (const std::exception& e) {
    detail("exception: %s", e.what());
  }
  verdict(id, ok, what, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

template <class F>
double quad(F f, double a, double b, std::vector<double> cuts = {}, double tol = 1e-10) {
  double total = 0.0;
  double lo = a;
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts) {
    if (c <= lo || c >= b) continue;
    total += GK::integrate(f, lo, c, 12, tol);
    lo = c;
  }
  return total + GK::integrate(f, lo, b, 12, tol);
}

bool unimodal(const std::vector<double>& v) {
  std::size_t i = 1;
  while (i < v.size() && v[i] >= v[i - 1]) ++i;
  while (i < v.size() && v[i] <= v[i - 1]) ++i;
  return i == v.size();
}

// ---------------------------------------------------------------------------

bool cross_path_agreement() {
  const NetworkConfig cfg;
  const AnalyticModel model(cfg);
  const std::uint64_t n = 100000;
  const SampleSet set = simulate(cfg, {Scheme::CompNoma}, n, kSeed);
  const std::vector<double> T = linear(kThresholdsDb);
  const CoverageResult mc = coverage_from_samples(set, 0, T);
  bool ok = true;

  const auto assoc = model.assoc_probs();
  for (AuCase c : kAllCases) {
    const double a = assoc[index_of(c)].value;
    const double f = mc.assoc_freq[index_of(c)].value;
    const bool good = std::abs(a - f) <= 0.02;
    ok &= good;
    detail("assoc %-8s analytic %.4f  mc %.4f  |diff| %.4f  %s", std::string(to_string(c)).c_str(), a, f,
           std::abs(a - f), good ? "ok" : "OUT");
  }
  for (std::size_t t = 0; t < T.size(); ++t) {
    const AuCoverage au = model.coverage_au(T[t]);
    const double tu = model.coverage_tu(T[t]).value;
    const bool good_au = std::abs(au.total.value - mc.overall[t].value) <= 0.03;
    const bool good_tu = std::abs(tu - mc.tu[t].value) <= 0.03;
    ok &= good_au && good_tu;
    detail("T=%+5.1f dB  AU analytic %.4f mc %.4f %s   TU analytic %.4f mc %.4f %s", kThresholdsDb[t],
           au.total.value, mc.overall[t].value, good_au ? "ok" : "OUT", tu, mc.tu[t].value, good_tu ? "ok" : "OUT");
    for (AuCase c : {AuCase::CompLN, AuCase::CompNL}) {
      const double a = au.per_case[index_of(c)].value;
      const Proportion& p = mc.conditional[index_of(c)][t];
      const bool good = std::abs(a - p.value) <= 0.06;
      ok &= good;
      detail("            %-6s analytic %.4f mc %.4f [%.4f, %.4f] |diff| %.4f %s", std::string(to_string(c)).c_str(),
             a, p.value, p.ci_low, p.ci_high, std::abs(a - p.value), good ? "ok" : "OUT");
    }
  }
  detail("MC: %llu realizations, 4 km window", static_cast<unsigned long long>(mc.iterations));
  return ok;
}

bool exact_ceilings() {
  const NetworkConfig cfg;
  const double nc = cfg.rho_u / cfg.rho_t;
  const double co = 2.0 * nc;
  bool ok = true;
  const SampleSet set = simulate(cfg, {Scheme::CompNoma, Scheme::NomaOnly}, 10000, kSeed + 1);

  double max_comp = 0.0, max_nc = 0.0, max_only = 0.0;
  for (std::size_t i = 0; i < set.samples[0].size(); ++i) {
    if (set.degenerate[i]) continue;
    const SirSample& s = set.samples[0][i];
    (is_comp(s.au_class.kind) ? max_comp : max_nc) = std::max(is_comp(s.au_class.kind) ? max_comp : max_nc, s.sir_au);
    max_only = std::max(max_only, set.samples[1][i].sir_au);
  }
  ok &= max_comp < co && max_nc < nc && max_only < nc;
  detail("max MC SIR: CoMP-NOMA CoMP AUs %.4f (< %.1f), non-CoMP AUs %.4f, NOMA-only %.4f (< %.1f)", max_comp, co,
         max_nc, max_only, nc);

  const std::vector<double> T = {nc, db_to_linear(9.6), db_to_linear(12.0)};
  const CoverageResult only = coverage_from_samples(set, 1, T);
  const CoverageResult comp = coverage_from_samples(set, 0, T);
  const AnalyticModel a_only(cfg, Scheme::NomaOnly);
  const AnalyticModel a_comp(cfg, Scheme::CompNoma);
  for (std::size_t t = 0; t < T.size(); ++t) {
    const double mc_only = only.overall[t].value;
    const double mc_nc = comp.conditional[0][t].value + comp.conditional[1][t].value;
    const double an_only = a_only.coverage_au(T[t]).total.value;
    const double an_l = a_comp.coverage_case(AuCase::NonCompL, T[t]).value;
    const double an_n = a_comp.coverage_case(AuCase::NonCompN, T[t]).value;
    const bool good = mc_only == 0.0 && mc_nc == 0.0 && an_only == 0.0 && an_l == 0.0 && an_n == 0.0;
    ok &= good;
    detail("T=%.3f dB: NOMA-only mc %g analytic %g; CoMP-NOMA non-CoMP mc %g analytic %g/%g %s", linear_to_db(T[t]),
           mc_only, an_only, mc_nc, an_l, an_n, good ? "ok" : "OUT");
  }
  for (double t : {co, co * 1.001, 30.0}) {
    double worst = 0.0;
    for (AuCase c : {AuCase::CompLL, AuCase::CompNN, AuCase::CompLN, AuCase::CompNL})
      worst = std::max(worst, a_comp.coverage_case(c, t).value);
    ok &= worst == 0.0;
    detail("T=%.3f dB: CoMP-NOMA analytic CoMP coverage max over cases %g", linear_to_db(t), worst);
  }
  const double below = a_comp.coverage_case(AuCase::CompLL, co * 0.95).value;
  detail("just below the CoMP ceiling (T=%.3f dB) CompLL analytic %.4g", linear_to_db(co * 0.95), below);
  return ok && below > 0.0;
}

bool scheme_ordering() {
  const NetworkConfig cfg;
  NetworkConfig one = cfg;
  one.theta = 1.0;
  const std::vector<double> db = {-10.0, -5.0, 0.0, 5.0, 10.0};
  const std::vector<double> T = linear(db);
  bool ok = true;

  const SampleSet set = simulate(cfg, {Scheme::CompOma, Scheme::CompNoma, Scheme::NomaOnly}, 10000, kSeed + 2);
  const SampleSet ref = simulate(one, {Scheme::CompNoma}, 10000, kSeed + 2);
  const CoverageResult oma = coverage_from_samples(set, 0, T);
  const CoverageResult noma = coverage_from_samples(set, 1, T);
  const CoverageResult only = coverage_from_samples(set, 2, T);

  const AnalyticModel a_oma(cfg, Scheme::CompOma), a_noma(cfg, Scheme::CompNoma), a_only(cfg, Scheme::NomaOnly);
  const AnalyticModel a_ref(one, Scheme::CompNoma);
  for (std::size_t t = 0; t < T.size(); ++t) {
    const double x = oma.overall[t].value, y = noma.overall[t].value, z = only.overall[t].value;
    const double ax = a_oma.coverage_au(T[t]).total.value;
    const double ay = a_noma.coverage_au(T[t]).total.value;
    const double az = a_only.coverage_au(T[t]).total.value;
    const double ar = a_ref.coverage_au(T[t]).total.value;
    const bool good = x >= y && y >= z && ax >= ay && ay >= az && az == ar;
    ok &= good;
    detail("T=%+5.1f dB  mc %.4f >= %.4f >= %.4f   analytic %.4f >= %.4f >= %.4f (theta=1: %.17g vs %.17g) %s", db[t],
           x, y, z, ax, ay, az, az, ar, good ? "ok" : "OUT");
  }
  std::uint64_t mismatched = 0;
  for (std::size_t i = 0; i < set.samples[2].size(); ++i) {
    const SirSample& a = set.samples[2][i];
    const SirSample& b = ref.samples[0][i];
    if (a.sir_au != b.sir_au || a.sir_tu != b.sir_tu || a.au_class.kind != b.au_class.kind) ++mismatched;
  }
  detail("NOMA-only vs CoMP-NOMA(theta=0 dB): %llu of %zu MC samples differ",
         static_cast<unsigned long long>(mismatched), set.samples[2].size());
  return ok && mismatched == 0;
}

bool power_split_behaviour() {
  NetworkConfig hi;
  NetworkConfig lo;
  lo.rho_u = 0.7;
  lo.rho_t = 0.3;
  const std::vector<double> T = linear(kThresholdsDb);
  const CoverageResult mh = estimate_coverage(hi, Scheme::CompNoma, T, 10000, kSeed + 3);
  const CoverageResult ml = estimate_coverage(lo, Scheme::CompNoma, T, 10000, kSeed + 3);
  const AnalyticModel ah(hi), al(lo);
  bool ok = true;
  for (std::size_t t = 0; t < T.size(); ++t) {
    const double ah_au = ah.coverage_au(T[t]).total.value, al_au = al.coverage_au(T[t]).total.value;
    const double ah_tu = ah.coverage_tu(T[t]).value, al_tu = al.coverage_tu(T[t]).value;
    const bool good = mh.overall[t].value > ml.overall[t].value && mh.tu[t].value < ml.tu[t].value &&
                      ah_au > al_au && ah_tu < al_tu;
    ok &= good;
    detail("T=%+5.1f dB  AU 0.9/0.7: mc %.4f/%.4f analytic %.4f/%.4f   TU 0.9/0.7: mc %.4f/%.4f analytic %.4f/%.4f %s",
           kThresholdsDb[t], mh.overall[t].value, ml.overall[t].value, ah_au, al_au, mh.tu[t].value, ml.tu[t].value,
           ah_tu, al_tu, good ? "ok" : "OUT");
  }
  return ok;
}

bool altitude_behaviour() {
  const std::vector<double> heights = {50.0, 75.0, 100.0, 150.0};
  std::vector<double> a_ll, mc_ll, cov, rate, mc_rt, mc_rt_half, an_rt;
  for (double h : heights) {
    NetworkConfig cfg;
    cfg.h_u = h;
    const AnalyticModel m(cfg);
    a_ll.push_back(m.assoc_prob(AuCase::CompLL).value);
    cov.push_back(m.coverage_au(1.0).total.value);
    const RateTotals r = m.rate_totals();
    rate.push_back(r.R_u_noncomp.value + r.R_u_comp.value);
    an_rt.push_back(r.R_t.value);
    const SampleSet set = simulate(cfg, {Scheme::CompNoma}, 10000, kSeed + 4);
    mc_ll.push_back(coverage_from_samples(set, 0, {1.0}).assoc_freq[index_of(AuCase::CompLL)].value);
    const RateResult mr = rate_from_samples(set, 0);
    mc_rt.push_back(mr.R_t.value);
    mc_rt_half.push_back(mr.R_t.ci_half);
    detail("h_u=%5.0f  A_LL analytic %.4f mc %.4f  AU coverage(0 dB) %.4f  AU rate %.4f  R_t analytic %.5f mc %.4f+-%.4f",
           h, a_ll.back(), mc_ll.back(), cov.back(), rate.back(), an_rt.back(), mc_rt.back(), mc_rt_half.back());
  }
  bool mono = true;
  for (std::size_t i = 1; i < heights.size(); ++i) mono &= a_ll[i] >= a_ll[i - 1];
  bool tu_flat = true;
  for (std::size_t i = 1; i < heights.size(); ++i) {
    tu_flat &= std::abs(mc_rt[i] - mc_rt[0]) <= mc_rt_half[0];
    tu_flat &= std::abs(an_rt[i] - an_rt[0]) <= 1e-12 * an_rt[0];
  }
  detail("A_LL non-decreasing: %s; coverage unimodal: %s; AU rate unimodal: %s; R_t constant: %s", mono ? "yes" : "no",
         unimodal(cov) ? "yes" : "no", unimodal(rate) ? "yes" : "no", tu_flat ? "yes" : "no");
  return mono && unimodal(cov) && unimodal(rate) && tu_flat;
}

bool cooperation_threshold() {
  const std::vector<double> db = {1.0, 2.0, 4.0, 8.0, 16.0, 18.0};
  std::vector<RateTotals> r;
  for (double d : db) {
    NetworkConfig cfg;
    cfg.theta = db_to_linear(d);
    r.push_back(AnalyticModel(cfg).rate_totals());
    detail("theta=%4.0f dB  R_u_NC %.4f  R_u_C %.4f  R_t %.4f  total %.4f", d, r.back().R_u_noncomp.value,
           r.back().R_u_comp.value, r.back().R_t.value, r.back().R_total.value);
  }
  bool ok = true;
  for (std::size_t i = 1; i + 1 < db.size(); ++i) {
    ok &= r[i].R_u_comp.value >= r[i - 1].R_u_comp.value;
    ok &= r[i].R_u_noncomp.value <= r[i - 1].R_u_noncomp.value;
    ok &= r[i].R_total.value >= r[i - 1].R_total.value;
  }
  const double last = r[5].R_total.value, prev = r[4].R_total.value;
  const double change = std::abs(last - prev) / prev;
  detail("monotone over 1..16 dB: %s; relative change 16 -> 18 dB: %.4f", ok ? "yes" : "no", change);
  return ok && last >= prev && change < 0.02;
}

bool kernel_correctness() {
  NetworkConfig cfg;
  const AnalyticModel m(cfg);
  bool ok = true;
  const double r0 = 150.0;
  const double zeta = cfg.eta_L * std::pow(r0, -cfg.alpha_L);
  const Exclusion ex = m.exclusion(AuCase::NonCompL, r0);

  double worst_fd = 0.0;
  for (double s : {0.2 / zeta, 1.0 / zeta, 5.0 / zeta}) {
    const double h = 1e-3 * s;
    const LaplaceKernel up = m.laplace_kernel(s + h, ex, 6), dn = m.laplace_kernel(s - h, ex, 6),
                        at = m.laplace_kernel(s, ex, 6);
    for (int j = 1; j <= 5; ++j) {
      const double fd = (up.mu_derivs[j - 1] - dn.mu_derivs[j - 1]) / (2.0 * h);
      worst_fd = std::max(worst_fd, std::abs(at.mu_derivs[j] - fd) / std::abs(fd));
    }
  }
  ok &= worst_fd < 1e-4;
  detail("derivative orders 1-5 vs central differences: worst relative error %.2e", worst_fd);

  NetworkConfig wide = cfg;
  wide.sim_radius = 8000.0;
  const double tail = window_tail_interference(wide).au;
  double worst_mc = 0.0;
  for (double s : {0.5 / zeta, 2.0 / zeta, 8.0 / zeta}) {
    double acc = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const Realization real = sample_realization(wide, stream_seed(kSeed + 5, i));
      double I = 0.0;
      for (const BsPoint& p : real.bs_points)
        if (p.r > (p.link == LinkType::LoS ? ex.los : ex.nlos))
          I += cfg.eta(p.link) * std::pow(p.r, -cfg.alpha(p.link)) * p.fading_power_au;
      acc += std::exp(-s * I);
    }
    const double mc = acc / n * std::exp(-s * tail);
    const double an = m.laplace_kernel(s, ex, 1).laplace();
    worst_mc = std::max(worst_mc, std::abs(mc - an));
    detail("s*zeta=%.1f  L(s) analytic %.4f  mc %.4f (8 km window, first-order tail factor %.4f)", s * zeta, an, mc,
           std::exp(-s * tail));
  }
  ok &= worst_mc <= 0.01;

  double worst_moment = 0.0;
  for (auto [z0, m0, z1, m1] : {std::tuple{1.0, 3, 1.0, 3}, std::tuple{2.0, 3, 1.0, 1}, std::tuple{0.3, 1, 5.0, 3},
                                std::tuple{1e-9, 3, 4e-10, 1}}) {
    const GammaSurrogate g = gamma_match(z0, m0, z1, m1);
    const double mean = z0 + z1, var = z0 * z0 / m0 + z1 * z1 / m1;
    worst_moment = std::max({worst_moment, std::abs(g.K_exact * g.Theta - mean) / mean,
                             std::abs(g.K_exact * g.Theta * g.Theta - var) / var});
  }
  ok &= worst_moment <= 1e-12;
  detail("gamma_match moment identities: worst relative error %.2e", worst_moment);

  bool exact = true;
  for (double s : {0.0, 1.0 / zeta, 10.0 / zeta}) {
    const LaplaceKernel k = m.laplace_kernel(s, ex, 3);
    exact &= coverage_sum(k, s, 1) == std::exp(k.mu_derivs[0]);
  }
  ok &= exact;
  detail("coverage_sum(K=1) == exp(mu(s)) bit-exactly: %s", exact ? "yes" : "no");
  return ok;
}

bool distribution_correctness() {
  const NetworkConfig cfg;
  const AnalyticModel m(cfg);
  const double dh = cfg.dh_u();
  const double top = 20000.0;
  bool ok = true;

  std::vector<double> los, nlos;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const NeighborSummary s = neighbor_summary(sample_realization(cfg, stream_seed(kSeed + 6, i)));
    if (s.L0) los.push_back(s.L0->r);
    if (s.N0) nlos.push_back(s.N0->r);
  }
  for (LinkType v : {LinkType::LoS, LinkType::NLoS}) {
    std::vector<double>& xs = v == LinkType::LoS ? los : nlos;
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double F = 1.0 - std::exp(-m.measure().mass(v, xs[i]));
      d = std::max({d, std::abs(F - i / n), std::abs((i + 1) / n - F)});
    }
    ok &= d <= 0.02;
    detail("KS nearest %s distance: %.4f over %zu samples", to_string(v), d, xs.size());
  }

  const std::vector<double> cuts = {100.0, 300.0, 1000.0, 3000.0};
  auto report = [&](const char* name, double v) {
    const bool good = std::abs(v - 1.0) <= 5e-3;
    ok &= good;
    detail("%-36s %.6f %s", name, v, good ? "ok" : "OUT");
  };
  report("nearest LoS density", quad([&](double r) { return m.nearest_pdf(LinkType::LoS, r); }, dh, top, cuts));
  report("nearest NLoS density", quad([&](double r) { return m.nearest_pdf(LinkType::NLoS, r); }, dh, top, cuts));
  for (AuCase c : {AuCase::CompLL, AuCase::CompNN}) {
    const double v = quad(
        [&](double r0) { return quad([&](double r1) { return m.joint_pdf(c, r0, r1); }, r0, top, cuts); }, dh, top,
        cuts);
    report(c == AuCase::CompLL ? "joint two nearest LoS" : "joint two nearest NLoS", v);
  }
  const BoundaryMaps& bm = m.maps();
  const double mixed =
      quad([&](double rL) {
        return quad([&](double rN) { return m.joint_pdf(AuCase::CompLN, rL, rN); }, std::max(dh, bm.d_LN(rL)), top,
                    cuts);
      }, dh, top, cuts) +
      quad([&](double rN) {
        return quad([&](double rL) { return m.joint_pdf(AuCase::CompNL, rN, rL); }, std::max(dh, bm.d_NL(rN)), top,
                    cuts);
      }, dh, top, cuts);
  report("joint nearest LoS/NLoS (both orders)", mixed);

  const double thL = std::pow(cfg.theta, 1.0 / cfg.alpha_L), thN = std::pow(cfg.theta, 1.0 / cfg.alpha_N);
  for (AuCase c : kAllCases) {
    double v = 0.0;
    switch (c) {
      case AuCase::NonCompL:
      case AuCase::NonCompN:
        v = quad([&](double r) { return m.conditional_pdf(c, r); }, dh, top, cuts);
        break;
      case AuCase::CompLL:
      case AuCase::CompNN: {
        const double th = c == AuCase::CompLL ? thL : thN;
        v = quad([&](double r0) { return quad([&](double r1) { return m.conditional_pdf(c, r0, r1); }, r0, th * r0); },
                 dh, top, cuts);
        break;
      }
      case AuCase::CompLN:
        v = quad([&](double rL) {
          const double e = bm.d_LN(rL);
          return e * thN <= dh ? 0.0
                               : quad([&](double rN) { return m.conditional_pdf(c, rL, rN); }, std::max(dh, e), thN * e);
        }, dh, top, cuts);
        break;
      case AuCase::CompNL:
        v = quad([&](double rN) {
          const double e = bm.d_NL(rN);
          return e * thL <= dh ? 0.0
                               : quad([&](double rL) { return m.conditional_pdf(c, rN, rL); }, std::max(dh, e), thL * e);
        }, dh, top, cuts);
        break;
    }
    report(("conditional density " + std::string(to_string(c))).c_str(), v);
  }

  double sum = 0.0;
  for (const Estimate& e : m.assoc_probs()) sum += e.value;
  report("sum of association probabilities", sum);
  return ok;
}

bool reproducibility() {
  ExperimentSpec spec = parse_config(
      "iterations = 3000\nvalues = -5, 0, 5\nschemes = comp_noma, oma_only\nmetrics = assoc, coverage\nseed = 99\n");
  std::vector<std::string> csv;
  for (const char* workers : {"1", "2", "4", "7"}) {
    ::setenv("UAVNOMA_WORKERS", workers, 1);
    csv.push_back(to_csv(run_experiment(spec)));
  }
  ::unsetenv("UAVNOMA_WORKERS");
  csv.push_back(to_csv(run_experiment(spec)));
  bool same = true;
  for (const std::string& c : csv) same &= c == csv.front();
  detail("%zu runs (workers 1, 2, 4, 7, default), %zu bytes each: %s", csv.size(), csv.front().size(),
         same ? "byte-identical" : "DIFFERENT");
  spec.master_seed = 100;
  const bool differs = to_csv(run_experiment(spec)) != csv.front();
  detail("a different master seed changes the CSV: %s", differs ? "yes" : "no");
  return same && differs;
}

}  // namespace

int main() {
  std::printf("uavnoma acceptance suite (workers: %u)\n", worker_count());
  run(1, "cross-path agreement at defaults", cross_path_agreement);
  run(2, "exact NOMA coverage ceilings", exact_ceilings);
  run(3, "scheme ordering and NOMA-only equals CoMP-NOMA at theta = 0 dB", scheme_ordering);
  run(4, "power split trades AU against TU coverage", power_split_behaviour);
  run(5, "altitude behaviour", altitude_behaviour);
  run(6, "cooperation threshold behaviour", cooperation_threshold);
  run(7, "numerical kernel correctness", kernel_correctness);
  run(8, "distribution correctness", distribution_correctness);
  run(9, "reproducibility across worker counts", reproducibility);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
