// SPDX-License-Identifier: Apache-2.0
//
// Network configuration and the deterministic channel/geometry primitives
// shared by the simulator and the analytical evaluator.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavnoma {

/// Raised for invalid parameters and inputs outside a model's domain.
class ModelError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class LinkType { LoS, NLoS };

const char* to_string(LinkType link);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// All physical and statistical parameters of the network. Values are in
/// linear scale and SI units (m, m^-2); dB conversion happens at parse time.
struct NetworkConfig {
  double lambda_b = 1e-5;  // BS density, m^-2
  double lambda_t = 1e-3;  // TU density, m^-2
  double lambda_u = 1e-4;  // AU density, m^-2

  double h_b = 19.0;
  double h_t = 1.5;
  double h_u = 75.0;

  // Air-to-ground LoS model: 1 / (1 + C exp(-B [angle_deg - C])).
  double B_slope = 0.16;
  double C_offset = 9.61;

  double alpha_L = 2.6;
  double alpha_N = 3.0;
  double alpha_t = 3.0;

  // Path-loss constant times antenna gain at the 1 m reference distance.
  double eta_L = std::pow(10.0, -3.5);
  double eta_N = std::pow(10.0, -4.0);
  double eta_t = std::pow(10.0, -2.84);

  int m_L = 3;
  int m_N = 1;

  double p_tx = std::pow(10.0, 2.6);

  double rho_u = 0.9;
  double rho_t = 0.1;

  double theta = std::pow(10.0, 0.4);

  double sim_radius = 4000.0;
  std::uint64_t iterations = 10000;

  double dh_u() const { return std::abs(h_u - h_b); }
  double dh_t() const { return std::abs(h_t - h_b); }

  double eta(LinkType v) const { return v == LinkType::LoS ? eta_L : eta_N; }
  double alpha(LinkType v) const { return v == LinkType::LoS ? alpha_L : alpha_N; }
  int fading_order(LinkType v) const { return v == LinkType::LoS ? m_L : m_N; }

  /// Throws ModelError naming the first violated constraint.
  void validate() const;
};

/// Table II defaults.
NetworkConfig default_config();

double los_probability(double z, const NetworkConfig& cfg);
double nlos_probability(double z, const NetworkConfig& cfg);
double los_probability_3d(double r, const NetworkConfig& cfg);

double link_gain(double r, LinkType link, const NetworkConfig& cfg);
double ground_gain(double r, const NetworkConfig& cfg);

/// Distance maps between equal-average-RSS LoS and NLoS links.
struct BoundaryMaps {
  double dh_u;
  double l_LN;  // LoS distance whose RSS equals an NLoS BS straight below
  double k_LN;  // (eta_N/eta_L)^(1/alpha_N)
  double e_LN;  // alpha_L/alpha_N
  double k_NL;  // (eta_L/eta_N)^(1/alpha_L)
  double e_NL;  // alpha_N/alpha_L

  /// Horizontal offset of a 3D distance; requires r >= dh_u.
  double l_of(double r) const;
  /// NLoS distance with the same average RSS as a LoS BS at r.
  double d_LN(double r) const { return k_LN * std::pow(r, e_LN); }
  /// LoS distance with the same average RSS as an NLoS BS at r.
  double d_NL(double r) const { return k_NL * std::pow(r, e_NL); }
  /// Same-RSS distance of the other link type.
  double equivalent(LinkType from, double r) const {
    return from == LinkType::LoS ? d_LN(r) : d_NL(r);
  }
};

BoundaryMaps boundary_maps(const NetworkConfig& cfg);

/// Mean number of type-`link` BSs within 3D distance r of the typical AU,
/// 2 pi lambda_b * int_0^{l(r)} z p^v(z) dz. Zero below dh_u.
///
/// The LoS antiderivative is tabulated once on a geometric grid with cubic
/// Hermite interpolation (its derivative is known exactly), which keeps the
/// nested analytic integrals cheap.
class LosMeasure {
public:
  explicit LosMeasure(const NetworkConfig& cfg);

  /// int_0^z w p^L(w) dw
  double los_moment(double z) const;
  /// int_0^z w p^N(w) dw
  double nlos_moment(double z) const { return 0.5 * z * z - los_moment(z); }

  /// Intensity measure of the type-`link` BSs inside 3D radius r.
  double mass(LinkType link, double r) const;
  /// d/dr of mass(): 2 pi lambda_b r p^v(r).
  double density(LinkType link, double r) const;

  const NetworkConfig& config() const { return cfg_; }

private:
  NetworkConfig cfg_;
  std::vector<double> z_;
  std::vector<double> f_;
  double ratio_log_ = 0.0;
  double z_first_ = 0.0;
};

}  // namespace uavnoma
