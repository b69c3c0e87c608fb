// SPDX-License-Identifier: Apache-2.0

#include "uavnoma/expcli.hpp"

#include "uavnoma/analytic.hpp"
#include "uavnoma/mcharness.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <unistd.h>

namespace uavnoma {

// ---------------------------------------------------------------------------
// Enum names

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::ThresholdDb: return "threshold_dB";
    case SweepAxis::LambdaB: return "lambda_b";
    case SweepAxis::HU: return "h_u";
    case SweepAxis::ThetaDb: return "theta_dB";
    case SweepAxis::RhoU: return "rho_u";
  }
  return "?";
}

std::string_view to_string(PathSelection p) {
  switch (p) {
    case PathSelection::Mc: return "mc";
    case PathSelection::Analytic: return "analytic";
    case PathSelection::Both: return "both";
  }
  return "?";
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Assoc: return "assoc";
    case Metric::Coverage: return "coverage";
    case Metric::Rate: return "rate";
  }
  return "?";
}

SweepAxis parse_axis(std::string_view s) {
  for (SweepAxis a : {SweepAxis::ThresholdDb, SweepAxis::LambdaB, SweepAxis::HU, SweepAxis::ThetaDb, SweepAxis::RhoU})
    if (to_string(a) == s) return a;
  throw ConfigError("sweep: unknown axis '" + std::string(s) +
                    "' (expected threshold_dB, lambda_b, h_u, theta_dB or rho_u)");
}

PathSelection parse_paths(std::string_view s) {
  for (PathSelection p : {PathSelection::Mc, PathSelection::Analytic, PathSelection::Both})
    if (to_string(p) == s) return p;
  throw ConfigError("paths: expected mc, analytic or both, got '" + std::string(s) + "'");
}

Metric parse_metric(std::string_view s) {
  for (Metric m : {Metric::Assoc, Metric::Coverage, Metric::Rate})
    if (to_string(m) == s) return m;
  throw ConfigError("metrics: unknown metric '" + std::string(s) + "' (expected assoc, coverage or rate)");
}

// ---------------------------------------------------------------------------
// Spec

bool ExperimentSpec::wants(Metric m) const { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); }

NetworkConfig ExperimentSpec::config_at(double v) const {
  NetworkConfig cfg = base;
  switch (axis) {
    case SweepAxis::ThresholdDb: break;
    case SweepAxis::LambdaB: cfg.lambda_b = v; break;
    case SweepAxis::HU: cfg.h_u = v; break;
    case SweepAxis::ThetaDb: cfg.theta = db_to_linear(v); break;
    case SweepAxis::RhoU:
      cfg.rho_u = v;
      cfg.rho_t = 1.0 - v;
      break;
  }
  return cfg;
}

std::vector<double> ExperimentSpec::thresholds_at(double v) const {
  if (axis == SweepAxis::ThresholdDb) return {db_to_linear(v)};
  std::vector<double> out;
  for (double db : thresholds_db) out.push_back(db_to_linear(db));
  return out;
}

void ExperimentSpec::validate() const {
  try {
    base.validate();
  } catch (const ModelError& e) {
    throw ConfigError(e.what());
  }
  if (values.empty()) throw ConfigError("values: the sweep needs at least one value");
  if (schemes.empty()) throw ConfigError("schemes: at least one scheme is required");
  if (metrics.empty()) throw ConfigError("metrics: at least one metric is required");
  if (output.empty()) throw ConfigError("output: path must not be empty");
  if (wants_mc() && base.iterations < 100) throw ConfigError("iterations: Monte Carlo needs at least 100");
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("values: sweep values must be finite");
    try {
      config_at(v).validate();
    } catch (const ModelError& e) {
      throw ConfigError("values: " + std::string(to_string(axis)) + " = " + format_number(v) + ": " + e.what());
    }
  }
  for (double t : thresholds_db)
    if (!std::isfinite(t)) throw ConfigError("thresholds_dB: thresholds must be finite");
  if (axis != SweepAxis::ThresholdDb && wants(Metric::Coverage) && thresholds_db.empty())
    throw ConfigError("thresholds_dB: coverage needs at least one threshold");
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& key, const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key + ": empty list element");
    out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite number, got '" + t + "'");
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + t + "'");
  return v;
}

int parse_order(const std::string& key, const std::string& text) {
  const std::uint64_t v = parse_count(key, text);
  if (v < 1 || v > 64) throw ConfigError(key + ": Nakagami order must be an integer in [1, 64]");
  return static_cast<int>(v);
}

double positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError(key + ": must be positive");
  return v;
}

using Setter = std::function<void(ExperimentSpec&, const std::string& key, const std::string& value)>;

Setter real(double NetworkConfig::*field) {
  return [field](ExperimentSpec& s, const std::string& k, const std::string& v) { s.base.*field = parse_double(k, v); };
}

Setter real_positive(double NetworkConfig::*field) {
  return [field](ExperimentSpec& s, const std::string& k, const std::string& v) {
    s.base.*field = positive(k, parse_double(k, v));
  };
}

Setter decibel(double NetworkConfig::*field) {
  return [field](ExperimentSpec& s, const std::string& k, const std::string& v) {
    s.base.*field = db_to_linear(parse_double(k, v));
  };
}

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["lambda_b"] = real_positive(&NetworkConfig::lambda_b);
    t["lambda_t"] = real_positive(&NetworkConfig::lambda_t);
    t["lambda_u"] = real_positive(&NetworkConfig::lambda_u);
    t["h_b"] = real(&NetworkConfig::h_b);
    t["h_t"] = real(&NetworkConfig::h_t);
    t["h_u"] = real(&NetworkConfig::h_u);
    t["B_slope"] = real_positive(&NetworkConfig::B_slope);
    t["C_offset"] = real_positive(&NetworkConfig::C_offset);
    t["alpha_L"] = real(&NetworkConfig::alpha_L);
    t["alpha_N"] = real(&NetworkConfig::alpha_N);
    t["alpha_t"] = real(&NetworkConfig::alpha_t);
    t["eta_L"] = real_positive(&NetworkConfig::eta_L);
    t["eta_N"] = real_positive(&NetworkConfig::eta_N);
    t["eta_t"] = real_positive(&NetworkConfig::eta_t);
    t["eta_L_dB"] = decibel(&NetworkConfig::eta_L);
    t["eta_N_dB"] = decibel(&NetworkConfig::eta_N);
    t["eta_t_dB"] = decibel(&NetworkConfig::eta_t);
    t["p_tx"] = real_positive(&NetworkConfig::p_tx);
    t["p_tx_dB"] = decibel(&NetworkConfig::p_tx);
    t["theta"] = real(&NetworkConfig::theta);
    t["theta_dB"] = decibel(&NetworkConfig::theta);
    t["rho_u"] = real(&NetworkConfig::rho_u);
    t["rho_t"] = real(&NetworkConfig::rho_t);
    t["sim_radius"] = real_positive(&NetworkConfig::sim_radius);
    t["m_L"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) { s.base.m_L = parse_order(k, v); };
    t["m_N"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) { s.base.m_N = parse_order(k, v); };
    t["iterations"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      s.base.iterations = parse_count(k, v);
    };
    t["sweep"] = [](ExperimentSpec& s, const std::string&, const std::string& v) { s.axis = parse_axis(trim(v)); };
    t["values"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      s.values.clear();
      for (const auto& item : split_list(k, v)) s.values.push_back(parse_double(k, item));
    };
    t["schemes"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      s.schemes.clear();
      for (const auto& item : split_list(k, v)) {
        try {
          const Scheme sc = parse_scheme(item);
          if (std::find(s.schemes.begin(), s.schemes.end(), sc) != s.schemes.end())
            throw ConfigError(k + ": scheme '" + item + "' listed twice");
          s.schemes.push_back(sc);
        } catch (const ModelError& e) {
          throw ConfigError(k + ": " + e.what());
        }
      }
    };
    t["paths"] = [](ExperimentSpec& s, const std::string&, const std::string& v) { s.paths = parse_paths(trim(v)); };
    t["metrics"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      s.metrics.clear();
      for (const auto& item : split_list(k, v)) {
        const Metric m = parse_metric(item);
        if (!s.wants(m)) s.metrics.push_back(m);
      }
    };
    t["thresholds_dB"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      s.thresholds_db.clear();
      for (const auto& item : split_list(k, v)) s.thresholds_db.push_back(parse_double(k, item));
    };
    t["output"] = [](ExperimentSpec& s, const std::string&, const std::string& v) { s.output = trim(v); };
    t["seed"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) { s.master_seed = parse_count(k, v); };
    return t;
  }();
  return table;
}

}  // namespace

ExperimentSpec parse_config(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::string msg = e.message();
    if (msg.find("duplicate") != std::string::npos) {
      std::istringstream in{std::string(text)};
      std::string line;
      for (unsigned long n = 0; n < e.line() && std::getline(in, line); ++n) {
      }
      const std::string key = trim(line.substr(0, line.find('=')));
      if (!key.empty()) msg = key + ": given more than once";
    }
    throw ConfigError("config error at line " + std::to_string(e.line()) + ": " + msg);
  }

  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  auto take = [&](const std::string& key, const std::string& value) {
    if (!seen.insert(key).second) throw ConfigError(key + ": given more than once");
    entries.emplace_back(key, value);
  };
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      take(name, node.data());
      continue;
    }
    if (name != "network" && name != "experiment") throw ConfigError("unknown section [" + name + "]");
    for (const auto& [key, leaf] : node) take(key, leaf.data());
  }

  const auto& table = key_table();
  for (const auto& [key, value] : entries)
    if (table.find(key) == table.end()) throw ConfigError("unknown key '" + key + "'");
  for (const char* pair : {"theta", "eta_L", "eta_N", "eta_t", "p_tx"}) {
    const std::string lin(pair);
    if (seen.count(lin) && seen.count(lin + "_dB")) throw ConfigError(lin + ": given both linear and _dB forms");
  }

  ExperimentSpec spec;
  for (const auto& [key, value] : entries) table.at(key)(spec, key, value);

  const bool has_u = seen.count("rho_u") > 0;
  const bool has_t = seen.count("rho_t") > 0;
  if (has_u && !has_t) spec.base.rho_t = 1.0 - spec.base.rho_u;
  if (has_t && !has_u) spec.base.rho_u = 1.0 - spec.base.rho_t;
  spec.validate();
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentSpec& spec) {
  const NetworkConfig& c = spec.base;
  std::ostringstream os;
  auto kv = [&](const char* key, double v) { os << key << " = " << format_number(v) << '\n'; };
  auto list = [&](const char* key, const std::vector<std::string>& items) {
    os << key << " =";
    for (std::size_t i = 0; i < items.size(); ++i) os << (i ? ", " : " ") << items[i];
    os << '\n';
  };
  os << "[network]\n";
  kv("lambda_b", c.lambda_b);
  kv("lambda_t", c.lambda_t);
  kv("lambda_u", c.lambda_u);
  kv("h_b", c.h_b);
  kv("h_t", c.h_t);
  kv("h_u", c.h_u);
  kv("B_slope", c.B_slope);
  kv("C_offset", c.C_offset);
  kv("alpha_L", c.alpha_L);
  kv("alpha_N", c.alpha_N);
  kv("alpha_t", c.alpha_t);
  kv("eta_L", c.eta_L);
  kv("eta_N", c.eta_N);
  kv("eta_t", c.eta_t);
  os << "m_L = " << c.m_L << '\n' << "m_N = " << c.m_N << '\n';
  kv("p_tx", c.p_tx);
  kv("rho_u", c.rho_u);
  kv("rho_t", c.rho_t);
  kv("theta", c.theta);
  kv("sim_radius", c.sim_radius);
  os << "iterations = " << c.iterations << '\n';
  os << "\n[experiment]\n";
  os << "sweep = " << to_string(spec.axis) << '\n';
  std::vector<std::string> items;
  for (double v : spec.values) items.push_back(format_number(v));
  list("values", items);
  items.clear();
  for (Scheme s : spec.schemes) items.emplace_back(to_string(s));
  list("schemes", items);
  os << "paths = " << to_string(spec.paths) << '\n';
  items.clear();
  for (Metric m : spec.metrics) items.emplace_back(to_string(m));
  list("metrics", items);
  items.clear();
  for (double t : spec.thresholds_db) items.push_back(format_number(t));
  if (!items.empty()) list("thresholds_dB", items);
  os << "output = " << spec.output << '\n';
  os << "seed = " << spec.master_seed << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Running

namespace {

// Rows of one (sweep value, scheme, path) block before the sweep columns are filled in.
struct Emitter {
  std::vector<CsvRow>& rows;
  std::string scheme;
  std::string path;
  std::string axis;
  double sweep_value;

  CsvRow& add(const std::string& metric, const std::string& case_name, double value) {
    CsvRow r;
    r.scheme = scheme;
    r.path = path;
    r.sweep_axis = axis;
    r.sweep_value = sweep_value;
    r.metric = metric;
    r.case_name = case_name;
    r.value = value;
    rows.push_back(std::move(r));
    return rows.back();
  }
  void proportion(const std::string& metric, const std::string& case_name, const Proportion& p) {
    CsvRow& r = add(metric, case_name, p.value);
    r.ci_low = p.ci_low;
    r.ci_high = p.ci_high;
    r.samples = p.trials;
  }
  void mean(const std::string& metric, const std::string& case_name, const MeanEstimate& m) {
    CsvRow& r = add(metric, case_name, m.value);
    r.ci_low = m.value - m.ci_half;
    r.ci_high = m.value + m.ci_half;
    r.samples = m.samples;
  }
  void estimate(const std::string& metric, const std::string& case_name, const Estimate& e) {
    add(metric, case_name, e.value).quadrature_error = e.error;
  }
};

void set_threshold(CsvRow& r, double T) {
  r.threshold_linear = T;
  r.threshold_db = linear_to_db(T);
}

struct Point {
  NetworkConfig cfg;
  std::vector<double> thresholds;   // linear
  std::vector<double> row_values;   // sweep value reported on rows of threshold index i
};

void emit_mc(const ExperimentSpec& spec, const Point& pt, const SampleSet& set, std::size_t slot,
             const WindowTail& tail, std::vector<CsvRow>& rows, std::size_t t_index) {
  const std::string axis(to_string(spec.axis));
  Emitter em{rows, std::string(to_string(set.schemes[slot])), "mc", axis, pt.row_values[t_index]};
  const bool t_axis = spec.axis == SweepAxis::ThresholdDb;
  const CoverageResult cov = coverage_from_samples(set, slot, pt.thresholds);
  if (spec.wants(Metric::Assoc))
    for (AuCase c : kAllCases) em.proportion("assoc_prob", std::string(to_string(c)), cov.assoc_freq[index_of(c)]);
  if (spec.wants(Metric::Coverage)) {
    for (std::size_t t = 0; t < pt.thresholds.size(); ++t) {
      if (t_axis && t != t_index) continue;
      const double T = pt.thresholds[t];
      em.proportion("coverage_au", "all", cov.overall[t]);
      set_threshold(rows.back(), T);
      for (AuCase c : kAllCases) {
        const Proportion& p = cov.conditional[index_of(c)][t];
        if (p.trials == 0) continue;
        em.proportion("coverage_au", std::string(to_string(c)), p);
        set_threshold(rows.back(), T);
      }
      em.proportion("coverage_tu", "tu", cov.tu[t]);
      set_threshold(rows.back(), T);
    }
  }
  if (spec.wants(Metric::Rate)) {
    const RateResult r = rate_from_samples(set, slot);
    em.mean("rate_au", "noncomp", r.R_u_noncomp);
    em.mean("rate_au", "comp", r.R_u_comp);
    em.mean("rate_au", "all", r.R_u_total);
    em.mean("rate_tu", "tu", r.R_t);
    em.mean("rate_total", "all", r.R_total);
  }
  em.add("window_tail_interference", "au", tail.au).samples = cov.iterations;
  em.add("window_tail_interference", "tu", tail.tu).samples = cov.iterations;
}

struct AnalyticPoint {
  std::array<Estimate, kCaseCount> assoc{};
  std::vector<AuCoverage> au;
  std::vector<Estimate> tu;
  std::optional<RateTotals> rates;
};

AnalyticPoint evaluate_analytic(const ExperimentSpec& spec, const Point& pt, Scheme scheme) {
  AnalyticModel model(pt.cfg, scheme);
  AnalyticPoint out;
  out.assoc = model.assoc_probs();
  if (spec.wants(Metric::Coverage))
    for (double T : pt.thresholds) {
      out.au.push_back(model.coverage_au(T));
      out.tu.push_back(model.coverage_tu(T));
    }
  if (spec.wants(Metric::Rate)) out.rates = model.rate_totals();
  return out;
}

void emit_analytic(const ExperimentSpec& spec, const Point& pt, Scheme scheme, const AnalyticPoint& a,
                   std::vector<CsvRow>& rows, std::size_t t_index) {
  Emitter em{rows, std::string(to_string(scheme)), "analytic", std::string(to_string(spec.axis)),
             pt.row_values[t_index]};
  const bool t_axis = spec.axis == SweepAxis::ThresholdDb;
  if (spec.wants(Metric::Assoc))
    for (AuCase c : kAllCases) em.estimate("assoc_prob", std::string(to_string(c)), a.assoc[index_of(c)]);
  if (spec.wants(Metric::Coverage)) {
    for (std::size_t t = 0; t < pt.thresholds.size(); ++t) {
      if (t_axis && t != t_index) continue;
      const double T = pt.thresholds[t];
      em.estimate("coverage_au", "all", a.au[t].total);
      set_threshold(rows.back(), T);
      for (AuCase c : kAllCases) {
        if (!(a.assoc[index_of(c)].value > 0.0)) continue;
        em.estimate("coverage_au", std::string(to_string(c)), a.au[t].per_case[index_of(c)]);
        set_threshold(rows.back(), T);
      }
      em.estimate("coverage_tu", "tu", a.tu[t]);
      set_threshold(rows.back(), T);
    }
  }
  if (a.rates) {
    const RateTotals& r = *a.rates;
    em.estimate("rate_au", "noncomp", r.R_u_noncomp);
    em.estimate("rate_au", "comp", r.R_u_comp);
    em.estimate("rate_au", "all", {r.R_u_noncomp.value + r.R_u_comp.value, r.R_u_noncomp.error + r.R_u_comp.error});
    for (AuCase c : kAllCases)
      if (a.assoc[index_of(c)].value > 0.0) em.estimate("rate_au", std::string(to_string(c)), r.per_case[index_of(c)]);
    em.estimate("rate_tu", "tu", r.R_t);
    em.estimate("rate_total", "all", r.R_total);
  }
}

}  // namespace

std::vector<CsvRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<Point> points;
  if (spec.axis == SweepAxis::ThresholdDb) {
    Point p{spec.base, {}, spec.values};
    for (double v : spec.values) p.thresholds.push_back(db_to_linear(v));
    points.push_back(std::move(p));
  } else {
    for (double v : spec.values) points.push_back(Point{spec.config_at(v), spec.thresholds_at(v), {v}});
  }

  std::vector<CsvRow> rows;
  for (const Point& pt : points) {
    std::optional<SampleSet> set;
    WindowTail tail;
    if (spec.wants_mc()) {
      set = simulate(pt.cfg, spec.schemes, pt.cfg.iterations, spec.master_seed);
      tail = window_tail_interference(pt.cfg);
    }
    std::vector<AnalyticPoint> analytic;
    if (spec.wants_analytic())
      for (Scheme s : spec.schemes) analytic.push_back(evaluate_analytic(spec, pt, s));

    for (std::size_t k = 0; k < pt.row_values.size(); ++k)
      for (std::size_t i = 0; i < spec.schemes.size(); ++i) {
        if (set) emit_mc(spec, pt, *set, i, tail, rows, k);
        if (!analytic.empty()) emit_analytic(spec, pt, spec.schemes[i], analytic[i], rows, k);
      }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, ptr);
}

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::string out(kCsvHeader);
  out += "\r\n";
  for (const CsvRow& r : rows) {
    const std::string fields[] = {quote(r.scheme),
                                  quote(r.path),
                                  quote(r.sweep_axis),
                                  format_number(r.sweep_value),
                                  quote(r.metric),
                                  quote(r.case_name),
                                  opt(r.threshold_db),
                                  opt(r.threshold_linear),
                                  format_number(r.value),
                                  opt(r.ci_low),
                                  opt(r.ci_high),
                                  opt(r.quadrature_error),
                                  r.samples ? std::to_string(*r.samples) : std::string()};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += "\r\n";
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move output into place at '" + path + "': " + ec.message());
  }
}

}  // namespace uavnoma
