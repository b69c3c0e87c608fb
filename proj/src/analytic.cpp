// SPDX-License-Identifier: Apache-2.0

#include "uavnoma/analytic.hpp"

#include "uavnoma/mcharness.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

namespace uavnoma {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Geometric grid for the Laplace exponent, in horizontal metres.
constexpr double kZFirst = 0.05;  // first inner edge, as a fraction of dh_u
constexpr double kZRatio = 1.5;
constexpr double kZEnd = 1e9;
// Below this s*g the kernel integrand is replaced by its second-order expansion.
constexpr double kLinearized = 1e-6;

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double rising(int m, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= m + i;
  return r;
}

std::string describe(AuCase c, double T) {
  std::ostringstream os;
  os << to_string(c) << " at T = " << T;
  return os.str();
}

template <std::size_t N>
void require_converged(const QuadResult<N>& r, const std::string& what) {
  if (!r.converged) throw QuadratureError("integral did not converge: " + what);
}

// Integrates over [a, b] split at the given breakpoints; b = +inf maps the
// last piece with x = p + scale * (u^-1 - 1).
template <std::size_t N, class F>
QuadResult<N> integrate_pieces(F&& f, double a, double b, std::vector<double> breaks, const QuadratureSpec& spec,
                               std::size_t controlled, double scale) {
  QuadResult<N> out;
  if (!(b > a)) return out;
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > pts.back() && x < b) pts.push_back(x);
  auto absorb = [&](const QuadResult<N>& r) {
    for (std::size_t i = 0; i < N; ++i) {
      out.value[i] += r.value[i];
      out.error[i] += r.error[i];
    }
    out.converged = out.converged && r.converged;
    out.evaluations += r.evaluations;
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) absorb(integrate<N>(f, pts[i], pts[i + 1], spec, controlled));
  if (std::isinf(b))
    absorb(integrate_to_infinity<N>(f, pts.back(), scale, 1.0, spec, controlled));
  else
    absorb(integrate<N>(f, pts.back(), b, spec, controlled));
  return out;
}

// Integration domain of a case's event density: the outer distance runs over
// [a, inf); CoMP cases add an inner distance over inner_range(r0).
struct CaseGeometry {
  bool two_dim = false;
  double a = 0.0;
  std::vector<double> outer_breaks;
  std::function<std::pair<double, double>(double)> inner_range;
  std::vector<double> inner_breaks;
  double scale = 1.0;
};

template <std::size_t M, class F>
QuadResult<M> integrate_case(const CaseGeometry& geo, F&& f, const QuadratureSpec& spec, const std::string& what) {
  if (!geo.two_dim) {
    auto g = [&](double r) { return f(r, 0.0); };
    auto res = integrate_pieces<M>(g, geo.a, kInf, geo.outer_breaks, spec, M, geo.scale);
    require_converged(res, what);
    return res;
  }
  QuadratureSpec inner = spec;
  inner.rel_tol *= 0.1;
  bool inner_ok = true;
  auto outer = [&](double r0) {
    std::array<double, 2 * M> v{};
    const auto [lo, hi] = geo.inner_range(r0);
    if (!(hi > lo)) return v;
    auto g = [&](double r1) { return f(r0, r1); };
    const auto res = integrate_pieces<M>(g, lo, hi, geo.inner_breaks, inner, M, 1.0);
    if (!res.converged) inner_ok = false;
    for (std::size_t i = 0; i < M; ++i) {
      v[i] = res.value[i];
      v[M + i] = res.error[i];
    }
    return v;
  };
  const auto res = integrate_pieces<2 * M>(outer, geo.a, kInf, geo.outer_breaks, spec, M, geo.scale);
  QuadResult<M> out;
  out.converged = res.converged && inner_ok;
  out.evaluations = res.evaluations;
  for (std::size_t i = 0; i < M; ++i) {
    out.value[i] = res.value[i];
    out.error[i] = res.error[i] + std::abs(res.value[M + i]);
  }
  require_converged(out, what);
  return out;
}

}  // namespace

GammaSurrogate gamma_match(double zeta0, int m0, double zeta1, int m1) {
  if (!(zeta0 > 0.0 && zeta1 > 0.0)) throw ModelError("gamma_match: gains must be positive");
  if (m0 < 1 || m1 < 1) throw ModelError("gamma_match: fading orders must be positive");
  const double mean = zeta0 + zeta1;
  const double var = zeta0 * zeta0 / m0 + zeta1 * zeta1 / m1;
  GammaSurrogate g;
  g.K_exact = mean * mean / var;
  g.Theta = var / mean;
  g.K_shape = m0 + m1;
  return g;
}

double coverage_sum(const LaplaceKernel& kernel, double s, int K, bool* clamped) {
  if (K < 1) throw ModelError("coverage_sum: K must be at least 1");
  if (K > kernel.K) throw ModelError("coverage_sum: kernel carries fewer derivative orders than requested");
  if (s != kernel.s) throw ModelError("coverage_sum: kernel was evaluated at a different s");
  std::array<double, kMaxLaplaceOrder> t{};
  t[0] = std::exp(kernel.scaled[0]);
  double total = t[0];
  for (int k = 1; k < K; ++k) {
    double acc = 0.0;
    for (int j = 0; j < k; ++j) acc += (k - j) * kernel.scaled[k - j] * t[j];
    t[k] = acc / k;
    total += t[k];
  }
  const bool out = total > 1.0 + 1e-12 || total < 0.0;
  if (clamped) *clamped = out;
  return std::clamp(total, 0.0, 1.0);
}

double PowerSplit::noncomp_ceiling() const { return au_residual > 0.0 ? au_signal / au_residual : kInf; }
double PowerSplit::comp_ceiling() const { return au_residual > 0.0 ? 2.0 * au_signal / au_residual : kInf; }

PowerSplit power_split(const NetworkConfig& cfg, Scheme scheme) {
  PowerSplit p;
  if (is_noma(scheme)) {
    p.au_signal = cfg.rho_u;
    p.au_residual = cfg.rho_t;
    p.tu_signal = cfg.rho_t;
    p.rate_share = 1.0;
  } else {
    p.au_signal = 1.0;
    p.au_residual = 0.0;
    p.tu_signal = 1.0;
    p.rate_share = resource_fraction(scheme);
  }
  return p;
}

AnalyticModel::AnalyticModel(const NetworkConfig& cfg, Scheme scheme, QuadratureSpec spec)
    : cfg_((cfg.validate(), effective_config(cfg, scheme))),
      scheme_(scheme),
      split_(power_split(cfg, scheme)),
      spec_(spec),
      measure_(cfg_),
      maps_(boundary_maps(cfg_)),
      th_L_(std::pow(cfg_.theta, 1.0 / cfg_.alpha_L)),
      th_N_(std::pow(cfg_.theta, 1.0 / cfg_.alpha_N)),
      rule_L_(build_rule(LinkType::LoS)),
      rule_N_(build_rule(LinkType::NLoS)) {
  if (!(spec.rel_tol > 0.0 && spec.abs_tol > 0.0)) throw ModelError("quadrature tolerances must be positive");
}

// ---------------------------------------------------------------------------
// Distance densities

double AnalyticModel::nearest_pdf(LinkType link, double r) const {
  if (r < maps_.dh_u) return 0.0;
  return measure_.density(link, r) * std::exp(-measure_.mass(link, r));
}

double AnalyticModel::joint_pdf(AuCase c, double r0, double r1) const {
  const double dh = maps_.dh_u;
  if (r0 < dh || r1 < dh) return 0.0;
  switch (c) {
    case AuCase::CompLL:
    case AuCase::CompNN: {
      if (!(r1 > r0)) return 0.0;
      const LinkType v = c == AuCase::CompLL ? LinkType::LoS : LinkType::NLoS;
      return measure_.density(v, r0) * measure_.density(v, r1) * std::exp(-measure_.mass(v, r1));
    }
    case AuCase::CompLN:
      if (!(r1 > maps_.d_LN(r0))) return 0.0;
      return nearest_pdf(LinkType::LoS, r0) * nearest_pdf(LinkType::NLoS, r1);
    case AuCase::CompNL:
      if (!(r1 > maps_.d_NL(r0))) return 0.0;
      return nearest_pdf(LinkType::NLoS, r0) * nearest_pdf(LinkType::LoS, r1);
    default:
      throw ModelError("joint_pdf is defined for CoMP cases only");
  }
}

double AnalyticModel::event_density(AuCase c, double r0, double r1) const {
  const double dh = maps_.dh_u;
  const auto L = LinkType::LoS;
  const auto N = LinkType::NLoS;
  if (r0 < dh) return 0.0;
  switch (c) {
    case AuCase::NonCompL:
      return measure_.density(L, r0) *
             std::exp(-measure_.mass(L, th_L_ * r0) - measure_.mass(N, th_N_ * maps_.d_LN(r0)));
    case AuCase::NonCompN:
      return measure_.density(N, r0) *
             std::exp(-measure_.mass(N, th_N_ * r0) - measure_.mass(L, th_L_ * maps_.d_NL(r0)));
    case AuCase::CompLL:
      if (!(r1 > r0 && r1 < th_L_ * r0)) return 0.0;
      return measure_.density(L, r0) * measure_.density(L, r1) *
             std::exp(-measure_.mass(L, r1) - measure_.mass(N, maps_.d_LN(r1)));
    case AuCase::CompNN:
      if (!(r1 > r0 && r1 < th_N_ * r0)) return 0.0;
      return measure_.density(N, r0) * measure_.density(N, r1) *
             std::exp(-measure_.mass(N, r1) - measure_.mass(L, maps_.d_NL(r1)));
    case AuCase::CompLN: {
      const double edge = maps_.d_LN(r0);
      if (!(r1 >= dh && r1 > edge && r1 < th_N_ * edge)) return 0.0;
      return measure_.density(L, r0) * measure_.density(N, r1) *
             std::exp(-measure_.mass(L, maps_.d_NL(r1)) - measure_.mass(N, r1));
    }
    case AuCase::CompNL: {
      const double edge = maps_.d_NL(r0);
      if (!(r1 >= dh && r1 > edge && r1 < th_L_ * edge)) return 0.0;
      return measure_.density(N, r0) * measure_.density(L, r1) *
             std::exp(-measure_.mass(N, maps_.d_LN(r1)) - measure_.mass(L, r1));
    }
  }
  return 0.0;
}

double AnalyticModel::conditional_pdf(AuCase c, double r0, double r1) const {
  const double a = assoc_prob(c).value;
  if (!(a > 0.0)) throw ModelError("conditioning event " + std::string(to_string(c)) + " has zero probability");
  return event_density(c, r0, r1) / a;
}

namespace {

CaseGeometry geometry(AuCase c, const BoundaryMaps& bm, double th_L, double th_N, double lambda_b) {
  const double dh = bm.dh_u;
  const double l_LN = bm.d_NL(dh);  // LoS distance matching an NLoS BS straight below
  const double x_NL = bm.d_LN(dh);  // NLoS distance matching a LoS BS straight below
  CaseGeometry g;
  g.scale = 0.5 / std::sqrt(lambda_b);
  g.a = dh;
  switch (c) {
    case AuCase::NonCompL:
      g.outer_breaks = {bm.d_NL(dh / th_N)};
      break;
    case AuCase::NonCompN:
      g.outer_breaks = {bm.d_LN(dh / th_L)};
      break;
    case AuCase::CompLL:
      g.two_dim = true;
      g.outer_breaks = {l_LN / th_L, l_LN};
      g.inner_range = [th_L](double r0) { return std::pair{r0, th_L * r0}; };
      g.inner_breaks = {l_LN};
      break;
    case AuCase::CompNN:
      g.two_dim = true;
      g.outer_breaks = {x_NL / th_N, x_NL};
      g.inner_range = [th_N](double r0) { return std::pair{r0, th_N * r0}; };
      g.inner_breaks = {x_NL};
      break;
    case AuCase::CompLN:
      g.two_dim = true;
      g.a = std::max(dh, bm.d_NL(dh / th_N));
      g.outer_breaks = {l_LN, bm.d_NL(x_NL / th_N)};
      g.inner_range = [bm, th_N, dh](double rL) {
        const double e = bm.d_LN(rL);
        return std::pair{std::max(dh, e), th_N * e};
      };
      g.inner_breaks = {x_NL};
      break;
    case AuCase::CompNL:
      g.two_dim = true;
      g.a = std::max(dh, bm.d_LN(dh / th_L));
      g.outer_breaks = {x_NL, bm.d_LN(l_LN / th_L)};
      g.inner_range = [bm, th_L, dh](double rN) {
        const double e = bm.d_NL(rN);
        return std::pair{std::max(dh, e), th_L * e};
      };
      g.inner_breaks = {l_LN};
      break;
  }
  return g;
}

}  // namespace

void AnalyticModel::compute_assoc() const {
  detail::parallel_for(kCaseCount, worker_count(), [&](std::uint64_t i) {
    const AuCase c = kAllCases[i];
    const CaseGeometry geo = geometry(c, maps_, th_L_, th_N_, cfg_.lambda_b);
    auto f = [&](double r0, double r1) { return std::array<double, 1>{event_density(c, r0, r1)}; };
    const auto res = integrate_case<1>(geo, f, spec_, "association probability of " + std::string(to_string(c)));
    assoc_[i] = {res.value[0], res.error[0]};
  });
}

Estimate AnalyticModel::assoc_prob(AuCase c) const {
  std::call_once(assoc_once_, [this] { compute_assoc(); });
  return assoc_[index_of(c)];
}

std::array<Estimate, kCaseCount> AnalyticModel::assoc_probs() const {
  std::call_once(assoc_once_, [this] { compute_assoc(); });
  return assoc_;
}

// ---------------------------------------------------------------------------
// Laplace kernel

Exclusion AnalyticModel::exclusion(AuCase c, double r0, double r1) const {
  switch (c) {
    case AuCase::NonCompL: return {th_L_ * r0, th_N_ * maps_.d_LN(r0)};
    case AuCase::NonCompN: return {th_L_ * maps_.d_NL(r0), th_N_ * r0};
    case AuCase::CompLL: return {r1, maps_.d_LN(r1)};
    case AuCase::CompNN: return {maps_.d_NL(r1), r1};
    case AuCase::CompLN: return {maps_.d_NL(r1), r1};
    case AuCase::CompNL: return {r1, maps_.d_LN(r1)};
  }
  return {};
}

void AnalyticModel::fill_cell(LinkType link, double a, double b, ZNode* out) const {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double dh = cfg_.dh_u();
  const double eta = cfg_.eta(link);
  const double alpha = cfg_.alpha(link);
  const double c2pl = 2.0 * kPi * cfg_.lambda_b;
  auto node = [&](double z, double wk, double wg) {
    const double p = link == LinkType::LoS ? los_probability(z, cfg_) : nlos_probability(z, cfg_);
    const double base = c2pl * z * p * half;
    return ZNode{eta * std::pow(z * z + dh * dh, -0.5 * alpha), wk * base, wg * base};
  };
  std::size_t n = 0;
  for (std::size_t j = 0; j < 10; ++j) {
    const double wg = j % 2 == 1 ? detail::kWg[j / 2] : 0.0;
    out[n++] = node(center - half * detail::kXgk[j], detail::kWgk[j], wg);
    out[n++] = node(center + half * detail::kXgk[j], detail::kWgk[j], wg);
  }
  out[n] = node(center, detail::kWgk[10], 0.0);
}

AnalyticModel::ZRule AnalyticModel::build_rule(LinkType link) const {
  ZRule rule;
  rule.m = cfg_.fading_order(link);
  const double dh = cfg_.dh_u();
  rule.edges.push_back(0.0);
  for (double e = kZFirst * dh; e < kZEnd; e *= kZRatio) rule.edges.push_back(e);
  rule.edges.push_back(kZEnd);
  const std::size_t cells = rule.edges.size() - 1;
  rule.nodes.resize(21 * cells);
  rule.g_max.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    fill_cell(link, rule.edges[c], rule.edges[c + 1], &rule.nodes[21 * c]);
    const double a = rule.edges[c];
    rule.g_max[c] = cfg_.eta(link) * std::pow(a * a + dh * dh, -0.5 * cfg_.alpha(link));
  }
  rule.sum_g1.assign(cells + 1, 0.0);
  rule.sum_g2.assign(cells + 1, 0.0);
  for (std::size_t c = cells; c-- > 0;) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < 21; ++j) {
      const ZNode& n = rule.nodes[21 * c + j];
      s1 += n.wk * n.g;
      s2 += n.wk * n.g * n.g;
    }
    rule.sum_g1[c] = rule.sum_g1[c + 1] + s1;
    rule.sum_g2[c] = rule.sum_g2[c + 1] + s2;
  }
  const double p_end = link == LinkType::LoS ? los_probability(kZEnd, cfg_) : nlos_probability(kZEnd, cfg_);
  const double alpha = cfg_.alpha(link);
  rule.tail_base = 2.0 * kPi * cfg_.lambda_b * p_end * cfg_.eta(link) * std::pow(kZEnd, 2.0 - alpha) / (alpha - 2.0);
  return rule;
}

void AnalyticModel::add_link_terms(LinkType link, double s, double zmin, int K, bool want_raw,
                                   KernelTerms& t) const {
  const ZRule& rule = link == LinkType::LoS ? rule_L_ : rule_N_;
  const int m = rule.m;
  std::array<double, kMaxLaplaceOrder> bin{};
  std::array<double, kMaxLaplaceOrder> rise{};
  for (int i = 0; i < K; ++i) {
    bin[i] = binomial(m + i - 1, i);
    rise[i] = (i % 2 == 0 ? 1.0 : -1.0) * rising(m, i);
  }

  auto cell = [&](const ZNode* nodes) {
    double ck = 0.0, cg = 0.0;
    for (std::size_t j = 0; j < 21; ++j) {
      const ZNode& n = nodes[j];
      const double x = s * n.g;
      const double om = m / (m + x);
      const double u = x / (m + x);
      const double om_m = ipow(om, m);
      const double c0 = x < 1e-3 ? -std::expm1(m * std::log1p(-u)) : 1.0 - om_m;
      ck += n.wk * c0;
      cg += n.wg * c0;
      double ui = 1.0;
      for (int i = 1; i < K; ++i) {
        ui *= u;
        t.scaled[i] += n.wk * bin[i] * ui * om_m;
      }
      if (want_raw) {
        const double q = n.g / (m + x);
        double qj = 1.0;
        for (int j2 = 1; j2 < K; ++j2) {
          qj *= q;
          t.raw[j2] += n.wk * rise[j2] * om_m * qj;
        }
      }
    }
    t.scaled[0] += ck;
    if (want_raw) t.raw[0] -= ck;
    t.error += std::abs(ck - cg);
  };

  const std::size_t cells = rule.edges.size() - 1;
  if (zmin < kZEnd) {
    std::size_t c = static_cast<std::size_t>(std::upper_bound(rule.edges.begin(), rule.edges.end(), zmin) -
                                             rule.edges.begin()) - 1;
    if (zmin > rule.edges[c]) {
      std::array<ZNode, 21> partial;
      fill_cell(link, zmin, rule.edges[c + 1], partial.data());
      cell(partial.data());
      ++c;
    }
    for (; c < cells; ++c) {
      if (!want_raw && s * rule.g_max[c] < kLinearized) {
        // 1 - (1+x/m)^-m = x - (m+1)/(2m) x^2 + O(x^3), and likewise for the
        // first two scaled derivatives.
        const double s1 = s * rule.sum_g1[c];
        const double s2 = s * s * rule.sum_g2[c];
        t.scaled[0] += s1 - (m + 1.0) / (2.0 * m) * s2;
        if (K > 1) t.scaled[1] += s1 - (1.0 + 1.0 / m) * s2;
        if (K > 2) t.scaled[2] += (m + 1.0) / (2.0 * m) * s2;
        break;
      }
      cell(&rule.nodes[21 * c]);
    }
  }
  // First-order tail beyond the grid, where p^v is constant and s*g is negligible.
  const double alpha = cfg_.alpha(link);
  const double base = zmin > kZEnd ? rule.tail_base * std::pow(zmin / kZEnd, 2.0 - alpha) : rule.tail_base;
  t.scaled[0] += s * base;
  if (K > 1) t.scaled[1] += s * base;
  if (want_raw) {
    t.raw[0] -= s * base;
    if (K > 1) t.raw[1] -= base;
  }
}

namespace {

double horizontal(double r, double dh) { return r > dh ? std::sqrt(r * r - dh * dh) : 0.0; }

}  // namespace

LaplaceKernel AnalyticModel::laplace_kernel(double s, const Exclusion& ex, int K) const {
  if (!(s >= 0.0) || !std::isfinite(s)) throw ModelError("laplace_kernel: s must be finite and non-negative");
  if (K < 1 || K > kMaxLaplaceOrder) throw ModelError("laplace_kernel: derivative order out of range");
  KernelTerms t;
  const double dh = maps_.dh_u;
  add_link_terms(LinkType::LoS, s, horizontal(ex.los, dh), K, true, t);
  add_link_terms(LinkType::NLoS, s, horizontal(ex.nlos, dh), K, true, t);
  LaplaceKernel k;
  k.s = s;
  k.exclusion = ex;
  k.K = K;
  k.error = t.error;
  k.mu_derivs.assign(t.raw.begin(), t.raw.begin() + K);
  k.scaled.assign(t.scaled.begin(), t.scaled.begin() + K);
  k.scaled[0] = -t.scaled[0];
  return k;
}

double AnalyticModel::kernel_sum(double s, const Exclusion& ex, int K) const {
  KernelTerms t;
  const double dh = maps_.dh_u;
  add_link_terms(LinkType::LoS, s, horizontal(ex.los, dh), K, false, t);
  add_link_terms(LinkType::NLoS, s, horizontal(ex.nlos, dh), K, false, t);
  LaplaceKernel k;
  k.s = s;
  k.K = K;
  k.scaled.assign(t.scaled.begin(), t.scaled.begin() + K);
  k.scaled[0] = -t.scaled[0];
  bool clamped = false;
  const double v = coverage_sum(k, s, K, &clamped);
  if (clamped) clamps_.fetch_add(1);
  return v;
}

// ---------------------------------------------------------------------------
// Coverage

Estimate AnalyticModel::conditional_coverage(AuCase c, double T, const QuadratureSpec& spec) const {
  const Estimate a = assoc_prob(c);
  if (!(a.value > 0.0)) throw ModelError("conditioning event " + std::string(to_string(c)) + " has zero probability");
  if (!(T > 0.0)) return {1.0, 0.0};
  if (std::isinf(T)) return {0.0, 0.0};
  const bool comp = is_comp(c);
  if (T >= (comp ? split_.comp_ceiling() : split_.noncomp_ceiling())) return {0.0, 0.0};

  const CaseLinks links = case_links(c);
  const LinkType v0 = links.first;
  const LinkType v1 = links.second;
  const int m0 = cfg_.fading_order(v0);
  const int m1 = cfg_.fading_order(v1);
  auto f = [&](double r0, double r1) -> std::array<double, 2> {
    const double dens = event_density(c, r0, r1);
    if (!(dens > 0.0)) return {0.0, 0.0};
    const double zeta0 = cfg_.eta(v0) * std::pow(r0, -cfg_.alpha(v0));
    double s = 0.0;
    int K = m0;
    if (!comp) {
      s = m0 * T / ((split_.au_signal - split_.au_residual * T) * zeta0);
    } else {
      const double zeta1 = cfg_.eta(v1) * std::pow(r1, -cfg_.alpha(v1));
      const GammaSurrogate g = gamma_match(zeta0, m0, zeta1, m1);
      s = T / ((2.0 * split_.au_signal - split_.au_residual * T) * g.Theta);
      K = g.K_shape;
    }
    return {dens, dens * kernel_sum(s, exclusion(c, r0, r1), K)};
  };
  const CaseGeometry geo = geometry(c, maps_, th_L_, th_N_, cfg_.lambda_b);
  const auto res = integrate_case<2>(geo, f, spec, "coverage of " + describe(c, T));
  const double den = res.value[0];
  if (!(den > 0.0)) throw ModelError("conditioning event " + std::string(to_string(c)) + " has zero probability");
  const double value = std::clamp(res.value[1] / den, 0.0, 1.0);
  return {value, (res.error[1] + value * res.error[0]) / den};
}

Estimate AnalyticModel::coverage_noncomp(AuCase c, double T) const {
  if (is_comp(c)) throw ModelError("coverage_noncomp: " + std::string(to_string(c)) + " is a CoMP case");
  return conditional_coverage(c, T, spec_);
}

Estimate AnalyticModel::coverage_comp(AuCase c, double T) const {
  if (!is_comp(c)) throw ModelError("coverage_comp: " + std::string(to_string(c)) + " is not a CoMP case");
  return conditional_coverage(c, T, spec_);
}

Estimate AnalyticModel::coverage_case(AuCase c, double T) const { return conditional_coverage(c, T, spec_); }

AuCoverage AnalyticModel::coverage_au(double T) const {
  const auto probs = assoc_probs();
  AuCoverage out;
  detail::parallel_for(kCaseCount, worker_count(), [&](std::uint64_t i) {
    if (probs[i].value > 0.0) out.per_case[i] = conditional_coverage(kAllCases[i], T, spec_);
  });
  for (std::size_t i = 0; i < kCaseCount; ++i) {
    if (!(probs[i].value > 0.0)) continue;
    const Estimate& c = out.per_case[i];
    out.total.value += probs[i].value * c.value;
    out.total.error += probs[i].value * c.error + c.value * probs[i].error;
  }
  out.total.value = std::clamp(out.total.value, 0.0, 1.0);
  return out;
}

Estimate AnalyticModel::tu_coverage(double T, const QuadratureSpec& spec) const {
  if (!(T > 0.0)) return {1.0, 0.0};
  if (std::isinf(T)) return {0.0, 0.0};
  const double lam = cfg_.lambda_b;
  const double dh = cfg_.dh_t();
  const double alpha = cfg_.alpha_t;
  const double c = split_.tu_signal / T;
  const double k = std::clamp(2.0 / (alpha - 2.0), 1.0, 4.0);
  QuadratureSpec inner = spec;
  inner.rel_tol *= 0.1;
  bool inner_ok = true;
  auto f = [&](double r) -> std::array<double, 2> {
    auto g = [&](double x) { return std::array<double, 1>{x / (1.0 + c * std::pow(x / r, alpha))}; };
    const auto interf = integrate_to_infinity<1>(g, r, r * std::max(1.0, std::pow(c, -1.0 / alpha)), k, inner);
    if (!interf.converged) inner_ok = false;
    const double w = 2.0 * kPi * lam * r * std::exp(-2.0 * kPi * lam * interf.value[0] - kPi * lam * (r * r - dh * dh));
    return {w, w * 2.0 * kPi * lam * interf.error[0]};
  };
  const auto res = integrate_to_infinity<2>(f, dh, 1.0 / std::sqrt(kPi * lam), 1.0, spec, 1);
  if (!res.converged || !inner_ok) {
    std::ostringstream os;
    os << "TU coverage at T = " << T;
    throw QuadratureError("integral did not converge: " + os.str());
  }
  return {std::clamp(res.value[0], 0.0, 1.0), res.error[0] + res.value[1]};
}

Estimate AnalyticModel::coverage_tu(double T) const { return tu_coverage(T, spec_); }

WindowTail window_tail_interference(const NetworkConfig& cfg) {
  cfg.validate();
  const double R = cfg.sim_radius;
  const double dh = cfg.dh_u();
  const QuadratureSpec spec{1e-8, 1e-30, 40, 2000};
  WindowTail w;
  for (LinkType v : {LinkType::LoS, LinkType::NLoS}) {
    const double alpha = cfg.alpha(v);
    auto f = [&](double z) {
      const double p = v == LinkType::LoS ? los_probability(z, cfg) : nlos_probability(z, cfg);
      return cfg.eta(v) * std::pow(z * z + dh * dh, -0.5 * alpha) * z * p;
    };
    const Estimate e = integrate_scalar_to_infinity(f, R, R, 1.0 / (alpha - 2.0), spec);
    w.au += 2.0 * kPi * cfg.lambda_b * e.value;
  }
  const double dt = cfg.dh_t();
  w.tu = 2.0 * kPi * cfg.lambda_b * cfg.eta_t * std::pow(R * R + dt * dt, 1.0 - 0.5 * cfg.alpha_t) /
         (cfg.alpha_t - 2.0);
  return w;
}

// ---------------------------------------------------------------------------
// Rates

namespace {

// int_0^tau_max P(2^tau - 1) dtau; tau_max = +inf integrates the whole axis.
template <class P>
Estimate rate_integral(P&& coverage, double ceiling, const QuadratureSpec& spec, const std::string& what) {
  auto f = [&](double tau) {
    // Coverage decays at least polynomially in T, so nothing is lost past 2^200.
    if (tau > 200.0) return std::array<double, 2>{0.0, 0.0};
    const Estimate e = coverage(std::exp2(tau) - 1.0);
    return std::array<double, 2>{e.value, e.error};
  };
  const double tau_max = std::isinf(ceiling) ? kInf : std::log2(1.0 + ceiling);
  const auto res = integrate_pieces<2>(f, 0.0, tau_max, {}, spec, 1, 2.0);
  require_converged(res, "rate of " + what);
  return {res.value[0], res.error[0] + res.value[1]};
}

}  // namespace

Estimate AnalyticModel::rate_case(AuCase c) const {
  if (!(assoc_prob(c).value > 0.0)) return {0.0, 0.0};
  QuadratureSpec outer = spec_;
  outer.rel_tol = std::max(spec_.rel_tol, 1e-5);
  const double ceiling = is_comp(c) ? split_.comp_ceiling() : split_.noncomp_ceiling();
  return rate_integral([&](double T) { return conditional_coverage(c, T, spec_); }, ceiling, outer,
                       std::string(to_string(c)));
}

RateTotals AnalyticModel::rate_totals() const {
  const auto probs = assoc_probs();
  RateTotals out;
  QuadratureSpec outer = spec_;
  outer.rel_tol = std::max(spec_.rel_tol, 1e-5);
  detail::parallel_for(kCaseCount + 1, worker_count(), [&](std::uint64_t i) {
    if (i < kCaseCount) {
      out.per_case[i] = rate_case(kAllCases[i]);
    } else {
      out.R_t = rate_integral([&](double T) { return tu_coverage(T, spec_); }, kInf, outer, "TU");
    }
  });
  const double share = split_.rate_share;
  for (std::size_t i = 0; i < kCaseCount; ++i) {
    Estimate& acc = is_comp(kAllCases[i]) ? out.R_u_comp : out.R_u_noncomp;
    acc.value += share * probs[i].value * out.per_case[i].value;
    acc.error += share * (probs[i].value * out.per_case[i].error + out.per_case[i].value * probs[i].error);
  }
  out.R_t.value *= share;
  out.R_t.error *= share;
  out.R_total.value = out.R_u_noncomp.value + out.R_u_comp.value + out.R_t.value;
  out.R_total.error = out.R_u_noncomp.error + out.R_u_comp.error + out.R_t.error;
  return out;
}

}  // namespace uavnoma
