// SPDX-License-Identifier: Apache-2.0

#include "uavnoma/netmodel.hpp"

#include "uavnoma/quadrature.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace uavnoma {

const char* to_string(LinkType link) { return link == LinkType::LoS ? "LoS" : "NLoS"; }

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ModelError(what);
}

}  // namespace

void NetworkConfig::validate() const {
  require(lambda_b > 0.0 && std::isfinite(lambda_b), "lambda_b must be a positive density");
  require(lambda_t > 0.0 && std::isfinite(lambda_t), "lambda_t must be a positive density");
  require(lambda_u > 0.0 && std::isfinite(lambda_u), "lambda_u must be a positive density");
  require(alpha_L > 2.0, "alpha_L must exceed 2");
  require(alpha_N > 2.0, "alpha_N must exceed 2");
  require(alpha_t > 2.0, "alpha_t must exceed 2");
  require(eta_L > 0.0 && eta_N > 0.0 && eta_t > 0.0, "link gain constants must be positive");
  require(m_L >= 1 && m_N >= 1, "Nakagami orders must be positive integers");
  require(m_L > m_N, "m_L must exceed m_N");
  require(m_L <= 8, "m_L must not exceed 8");
  require(p_tx > 0.0, "p_tx must be positive");
  require(std::abs(rho_u + rho_t - 1.0) <= 1e-12, "rho_u + rho_t must equal 1");
  require(rho_u > rho_t && rho_t > 0.0, "rho_u must exceed rho_t and both must be positive");
  require(theta >= 1.0 && std::isfinite(theta), "theta must be at least 1 (0 dB)");
  require(dh_u() > 0.0, "h_u must differ from h_b");
  require(h_u > h_b, "AU must fly above the BS height");
  require(B_slope > 0.0 && C_offset > 0.0, "A2G constants B and C must be positive");
  require(sim_radius > 0.0, "sim_radius must be positive");
  require(iterations >= 1, "iterations must be positive");
}

NetworkConfig default_config() { return NetworkConfig{}; }

double los_probability(double z, const NetworkConfig& cfg) {
  constexpr double kDeg = 180.0 / std::numbers::pi;
  const double angle = kDeg * std::atan2(cfg.dh_u(), std::max(z, 0.0));
  return 1.0 / (1.0 + cfg.C_offset * std::exp(-cfg.B_slope * (angle - cfg.C_offset)));
}

double nlos_probability(double z, const NetworkConfig& cfg) { return 1.0 - los_probability(z, cfg); }

double los_probability_3d(double r, const NetworkConfig& cfg) {
  const double dh = cfg.dh_u();
  if (r < dh) {
    std::ostringstream os;
    os << "3D distance " << r << " m is below the height difference " << dh << " m";
    throw ModelError(os.str());
  }
  return los_probability(std::sqrt(r * r - dh * dh), cfg);
}

double link_gain(double r, LinkType link, const NetworkConfig& cfg) {
  if (!(r >= 1.0)) throw ModelError("link_gain: distance below the 1 m reference");
  return cfg.eta(link) * std::pow(r, -cfg.alpha(link));
}

double ground_gain(double r, const NetworkConfig& cfg) {
  if (!(r >= 1.0)) throw ModelError("ground_gain: distance below the 1 m reference");
  return cfg.eta_t * std::pow(r, -cfg.alpha_t);
}

double BoundaryMaps::l_of(double r) const {
  if (r < dh_u) throw ModelError("l_of: distance below the height difference");
  return std::sqrt(r * r - dh_u * dh_u);
}

BoundaryMaps boundary_maps(const NetworkConfig& cfg) {
  BoundaryMaps m{};
  m.dh_u = cfg.dh_u();
  m.k_LN = std::pow(cfg.eta_N / cfg.eta_L, 1.0 / cfg.alpha_N);
  m.e_LN = cfg.alpha_L / cfg.alpha_N;
  m.k_NL = std::pow(cfg.eta_L / cfg.eta_N, 1.0 / cfg.alpha_L);
  m.e_NL = cfg.alpha_N / cfg.alpha_L;
  m.l_LN = m.k_NL * std::pow(m.dh_u, m.e_NL);
  return m;
}

// ---------------------------------------------------------------------------

namespace {
constexpr double kGridRatio = 1.004;
constexpr double kGridFirst = 0.05;
constexpr double kGridLast = 2e7;
}  // namespace

LosMeasure::LosMeasure(const NetworkConfig& cfg) : cfg_(cfg) {
  ratio_log_ = std::log(kGridRatio);
  z_first_ = kGridFirst;
  const auto n = static_cast<std::size_t>(std::ceil(std::log(kGridLast / kGridFirst) / ratio_log_)) + 1;
  z_.resize(n);
  f_.resize(n);
  QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  spec.abs_tol = 1e-300;
  auto integrand = [&](double w) { return w * los_probability(w, cfg_); };
  z_[0] = z_first_;
  f_[0] = integrate_scalar(integrand, 0.0, z_first_, spec).value;
  for (std::size_t i = 1; i < n; ++i) {
    z_[i] = z_first_ * std::exp(ratio_log_ * static_cast<double>(i));
    f_[i] = f_[i - 1] + integrate_scalar(integrand, z_[i - 1], z_[i], spec).value;
  }
}

double LosMeasure::los_moment(double z) const {
  if (z <= 0.0) return 0.0;
  if (z <= z_first_) {
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    return integrate_scalar([&](double w) { return w * los_probability(w, cfg_); }, 0.0, z, spec).value;
  }
  if (z >= z_.back()) {
    // Elevation is ~0 here; p^L is constant to many digits.
    const double p_inf = los_probability(z_.back(), cfg_);
    return f_.back() + 0.5 * p_inf * (z * z - z_.back() * z_.back());
  }
  auto i = static_cast<std::size_t>(std::log(z / z_first_) / ratio_log_);
  i = std::min(i, z_.size() - 2);
  while (i > 0 && z_[i] > z) --i;
  while (i + 2 < z_.size() && z_[i + 1] < z) ++i;
  const double z0 = z_[i];
  const double z1 = z_[i + 1];
  const double h = z1 - z0;
  const double t = (z - z0) / h;
  const double d0 = z0 * los_probability(z0, cfg_);
  const double d1 = z1 * los_probability(z1, cfg_);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * f_[i] + h10 * h * d0 + h01 * f_[i + 1] + h11 * h * d1;
}

double LosMeasure::mass(LinkType link, double r) const {
  const double dh = cfg_.dh_u();
  if (r <= dh) return 0.0;
  const double z = std::sqrt(r * r - dh * dh);
  const double m = link == LinkType::LoS ? los_moment(z) : nlos_moment(z);
  return 2.0 * std::numbers::pi * cfg_.lambda_b * m;
}

double LosMeasure::density(LinkType link, double r) const {
  const double dh = cfg_.dh_u();
  if (r < dh) return 0.0;
  const double z = std::sqrt(r * r - dh * dh);
  const double p = los_probability(z, cfg_);
  return 2.0 * std::numbers::pi * cfg_.lambda_b * r * (link == LinkType::LoS ? p : 1.0 - p);
}

}  // namespace uavnoma
