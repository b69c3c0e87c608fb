// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration, sweep orchestration and CSV export.
//
// Config files are INI text (';' comments, optional [network] and
// [experiment] sections). Keys ending in _dB are converted to linear scale;
// giving both forms of a key is an error.

#pragma once

#include "uavnoma/netmodel.hpp"
#include "uavnoma/sirlab.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uavnoma {

/// Raised for malformed or inconsistent experiment configurations.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class SweepAxis { ThresholdDb, LambdaB, HU, ThetaDb, RhoU };
enum class PathSelection { Mc, Analytic, Both };
enum class Metric { Assoc, Coverage, Rate };

std::string_view to_string(SweepAxis a);
std::string_view to_string(PathSelection p);
std::string_view to_string(Metric m);
SweepAxis parse_axis(std::string_view s);
PathSelection parse_paths(std::string_view s);
Metric parse_metric(std::string_view s);

struct ExperimentSpec {
  NetworkConfig base;
  SweepAxis axis = SweepAxis::ThresholdDb;
  std::vector<double> values = {-10.0, -5.0, 0.0, 5.0, 10.0};
  std::vector<Scheme> schemes = {Scheme::CompNoma};
  PathSelection paths = PathSelection::Both;
  std::vector<Metric> metrics = {Metric::Assoc, Metric::Coverage};
  std::vector<double> thresholds_db = {0.0};  // coverage thresholds when the sweep is not over T
  std::string output = "results.csv";
  std::uint64_t master_seed = 1;

  bool wants_mc() const { return paths != PathSelection::Analytic; }
  bool wants_analytic() const { return paths != PathSelection::Mc; }
  bool wants(Metric m) const;
  /// Configuration at one sweep value.
  NetworkConfig config_at(double sweep_value) const;
  /// Linear coverage thresholds at one sweep value.
  std::vector<double> thresholds_at(double sweep_value) const;
  /// Throws ConfigError naming the first problem.
  void validate() const;
};

ExperimentSpec parse_config(std::string_view text);
ExperimentSpec load_config(const std::string& path);
/// Renders a spec in the config format; parse_config reads it back.
std::string format_config(const ExperimentSpec& spec);

/// One output record. Unset optionals print as empty CSV cells.
struct CsvRow {
  std::string scheme;
  std::string path;  // mc | analytic
  std::string sweep_axis;
  double sweep_value = 0.0;
  std::string metric;
  std::string case_name;
  std::optional<double> threshold_db;
  std::optional<double> threshold_linear;
  double value = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::optional<double> quadrature_error;
  std::optional<std::uint64_t> samples;
};

inline constexpr std::string_view kCsvHeader =
    "scheme,path,sweep_axis,sweep_value,metric,case,threshold_dB,threshold_linear,value,ci_low,ci_high,"
    "quadrature_error,samples";

std::vector<CsvRow> run_experiment(const ExperimentSpec& spec);
std::string to_csv(const std::vector<CsvRow>& rows);
/// Shortest round-trip decimal form, independent of locale.
std::string format_number(double x);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace uavnoma
