// SPDX-License-Identifier: Apache-2.0
//
// Numerical evaluation of the analytical framework: distance densities,
// association probabilities, Laplace-transform coverage and ergodic rates.
//
// Distances are 3D. Every semi-infinite integral over an outer distance uses
// x = a + scale * (u^-1 - 1); the Laplace exponent is integrated over the
// horizontal offset on a fixed geometric Gauss-Kronrod grid reaching 1e9 m,
// beyond which a first-order tail term is added.

#pragma once

#include "uavnoma/assoc.hpp"
#include "uavnoma/netmodel.hpp"
#include "uavnoma/quadrature.hpp"
#include "uavnoma/sirlab.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <vector>

namespace uavnoma {

/// Largest number of derivative orders a Laplace kernel carries.
inline constexpr int kMaxLaplaceOrder = 16;

/// Interference-free zone: 3D radii inside which no interferer of each type lies.
struct Exclusion {
  double los = 0.0;
  double nlos = 0.0;
};

struct LaplaceKernel {
  double s = 0.0;
  Exclusion exclusion;
  int K = 1;
  std::vector<double> mu_derivs;  // mu^(j)(s), j = 0..K-1; L(s) = exp(mu(s))
  std::vector<double> scaled;     // (-s)^j mu^(j)(s) / j!, all >= 0 for j >= 1
  double error = 0.0;             // absolute error estimate on mu(s)

  double laplace() const { return std::exp(mu_derivs.at(0)); }
};

/// Second-order moment match of zeta0*h0 + zeta1*h1, h_k ~ Gamma(m_k, 1/m_k).
struct GammaSurrogate {
  double K_exact = 0.0;
  int K_shape = 0;  // m0 + m1, the bound the shape is rounded to
  double Theta = 0.0;
};

GammaSurrogate gamma_match(double zeta0, int m0, double zeta1, int m1);
inline GammaSurrogate gamma_match(double zeta0, double zeta1, int m) { return gamma_match(zeta0, m, zeta1, m); }

/// sum_{k<K} (-s)^k/k! L^(k)(s), clamped to [0, 1]. `clamped` is set when the
/// raw value fell outside by more than rounding.
double coverage_sum(const LaplaceKernel& kernel, double s, int K, bool* clamped = nullptr);

/// How a scheme spends power on the AU and TU streams, and its rate share.
struct PowerSplit {
  double au_signal = 0.9;    // power fraction carrying the AU message
  double au_residual = 0.1;  // same-BS power the AU must treat as noise
  double tu_signal = 0.1;    // power fraction left to the TU after SIC
  double rate_share = 1.0;

  /// AU coverage is zero from this threshold on (+inf without a ceiling).
  double noncomp_ceiling() const;
  double comp_ceiling() const;
};

PowerSplit power_split(const NetworkConfig& cfg, Scheme scheme);

/// Conditional coverage of every case plus the association-weighted total.
/// Cases with zero probability keep value 0 and are left out of the total.
struct AuCoverage {
  std::array<Estimate, kCaseCount> per_case;
  Estimate total;
};

/// Mean interference power (unit transmit power) from BSs outside the
/// simulation disc, seen by the typical AU and TU. Bounds what a finite
/// Monte Carlo window leaves out.
struct WindowTail {
  double au = 0.0;
  double tu = 0.0;
};

WindowTail window_tail_interference(const NetworkConfig& cfg);

struct RateTotals {
  std::array<Estimate, kCaseCount> per_case;  // conditional rate of each case
  Estimate R_u_noncomp;                       // association-weighted, times rate share
  Estimate R_u_comp;
  Estimate R_t;
  Estimate R_total;
};

/// Analytical evaluator for one configuration and access scheme. All methods
/// are const and thread-safe; association probabilities are computed once.
class AnalyticModel {
public:
  explicit AnalyticModel(const NetworkConfig& cfg, Scheme scheme = Scheme::CompNoma,
                         QuadratureSpec spec = default_spec());

  static QuadratureSpec default_spec() { return QuadratureSpec{1e-6, 1e-12, 40, 4000}; }

  const NetworkConfig& config() const { return cfg_; }
  Scheme scheme() const { return scheme_; }
  const PowerSplit& split() const { return split_; }
  const LosMeasure& measure() const { return measure_; }
  const BoundaryMaps& maps() const { return maps_; }

  /// Density of the distance to the nearest type-`link` BS; 0 below dh_u.
  double nearest_pdf(LinkType link, double r) const;
  /// Joint density of the two distances named by a CoMP case. Same-type
  /// cases give the nearest two BSs of that type (r0 < r1). Mixed cases give
  /// the nearest LoS and NLoS distances on the region where the first-named
  /// type has the stronger average RSS. Zero outside the support.
  double joint_pdf(AuCase c, double r0, double r1) const;
  /// Unnormalized density of the serving distances jointly with the case
  /// event; it integrates to assoc_prob(c). r1 is ignored for non-CoMP cases.
  double event_density(AuCase c, double r0, double r1 = 0.0) const;
  double conditional_pdf(AuCase c, double r0, double r1 = 0.0) const;

  Estimate assoc_prob(AuCase c) const;
  std::array<Estimate, kCaseCount> assoc_probs() const;

  /// Interference-free zone implied by case `c` with serving distances r0, r1.
  Exclusion exclusion(AuCase c, double r0, double r1 = 0.0) const;
  LaplaceKernel laplace_kernel(double s, const Exclusion& ex, int K) const;

  /// Conditional AU coverage given the case. Throws ModelError when the case
  /// has zero probability and QuadratureError on non-convergence.
  Estimate coverage_noncomp(AuCase c, double T) const;
  Estimate coverage_comp(AuCase c, double T) const;
  Estimate coverage_case(AuCase c, double T) const;
  AuCoverage coverage_au(double T) const;
  Estimate coverage_total_au(double T) const { return coverage_au(T).total; }
  Estimate coverage_tu(double T) const;

  /// Conditional ergodic rate of case c (without the rate share).
  Estimate rate_case(AuCase c) const;
  RateTotals rate_totals() const;

  /// Number of coverage sums clamped back into [0, 1] so far.
  std::uint64_t clamp_events() const { return clamps_.load(); }

private:
  struct ZNode {
    double g;   // eta * (z^2 + dh^2)^(-alpha/2)
    double wk;  // Kronrod weight * 2 pi lambda * z * p(z)
    double wg;  // Gauss weight * 2 pi lambda * z * p(z), zero off the Gauss nodes
  };
  struct ZRule {
    int m = 1;
    std::vector<double> edges;   // cell boundaries; cell c holds nodes [21c, 21c + 21)
    std::vector<ZNode> nodes;
    std::vector<double> g_max;   // g at the inner edge of each cell
    std::vector<double> sum_g1;  // suffix sums over cells of wk * g
    std::vector<double> sum_g2;  // suffix sums over cells of wk * g^2
    double tail_base = 0.0;      // 2 pi lambda p eta Z^(2 - alpha) / (alpha - 2) beyond the last edge
  };
  struct KernelTerms {
    std::array<double, kMaxLaplaceOrder> scaled{};  // scaled[0] holds -mu
    std::array<double, kMaxLaplaceOrder> raw{};
    double error = 0.0;
  };

  ZRule build_rule(LinkType link) const;
  void fill_cell(LinkType link, double a, double b, ZNode* out) const;
  void add_link_terms(LinkType link, double s, double zmin, int K, bool want_raw, KernelTerms& t) const;
  double kernel_sum(double s, const Exclusion& ex, int K) const;
  Estimate conditional_coverage(AuCase c, double T, const QuadratureSpec& spec) const;
  Estimate tu_coverage(double T, const QuadratureSpec& spec) const;
  void compute_assoc() const;

  NetworkConfig cfg_;
  Scheme scheme_;
  PowerSplit split_;
  QuadratureSpec spec_;
  LosMeasure measure_;
  BoundaryMaps maps_;
  double th_L_;  // theta^(1/alpha_L)
  double th_N_;  // theta^(1/alpha_N)
  ZRule rule_L_;
  ZRule rule_N_;

  mutable std::once_flag assoc_once_;
  mutable std::array<Estimate, kCaseCount> assoc_{};
  mutable std::atomic<std::uint64_t> clamps_{0};
};

}  // namespace uavnoma
