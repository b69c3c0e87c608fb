// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end over the C interface.
//
//   uavnoma run <config> [--seed N] [--iterations N] [--out FILE] [--path mc|analytic|both]
//   uavnoma validate <config>
//   uavnoma defaults
//
// Exit codes: 0 success, 1 internal error, 2 usage or configuration error,
// 3 numerical failure, 4 i/o error. UAVNOMA_WORKERS sets the thread count.

#include "uavnoma.h"

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <optional>
#include <string>

namespace {

int exit_code(uavnoma_status s) {
  switch (s) {
    case UAVNOMA_OK: return 0;
    case UAVNOMA_INVALID_ARGUMENT:
    case UAVNOMA_CONFIG: return 2;
    case UAVNOMA_NUMERICAL: return 3;
    case UAVNOMA_IO: return 4;
    default: return 1;
  }
}

int report(uavnoma_status s) {
  std::fprintf(stderr, "uavnoma: %s: %s\n", uavnoma_status_name(s), uavnoma_last_error());
  return exit_code(s);
}

// Owns an experiment handle.
struct Experiment {
  uavnoma_experiment* h = nullptr;
  ~Experiment() { uavnoma_experiment_free(h); }
};

struct Result {
  uavnoma_result* h = nullptr;
  ~Result() { uavnoma_result_free(h); }
};

int print_config(const uavnoma_experiment* exp) {
  char* text = nullptr;
  if (uavnoma_status s = uavnoma_experiment_format(exp, &text); s != UAVNOMA_OK) return report(s);
  std::fputs(text, stdout);
  uavnoma_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo and analytical evaluator for CoMP-NOMA UAV downlinks"};
  app.set_version_flag("--version", std::string(uavnoma_version()));
  app.require_subcommand(1);

  std::string run_config;
  std::optional<std::uint64_t> seed, iterations;
  std::optional<std::string> out;
  std::optional<std::string> path;
  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a config file and write CSV");
  run->add_option("config", run_config, "Config file")->required();
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--iterations", iterations, "Monte Carlo realizations per sweep value")
      ->check(CLI::Range(std::uint64_t{100}, std::uint64_t{1} << 40));
  run->add_option("--out", out, "Output CSV path");
  run->add_option("--path", path, "Computation path")->check(CLI::IsMember({"mc", "analytic", "both"}));

  std::string validate_config;
  CLI::App* validate = app.add_subcommand("validate", "Check a config file and print the resolved settings");
  validate->add_option("config", validate_config, "Config file")->required();

  CLI::App* defaults = app.add_subcommand("defaults", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Experiment exp;
  if (*defaults) {
    if (uavnoma_status s = uavnoma_experiment_defaults(&exp.h); s != UAVNOMA_OK) return report(s);
    return print_config(exp.h);
  }
  if (*validate) {
    if (uavnoma_status s = uavnoma_experiment_from_file(validate_config.c_str(), &exp.h); s != UAVNOMA_OK)
      return report(s);
    return print_config(exp.h);
  }

  if (uavnoma_status s = uavnoma_experiment_from_file(run_config.c_str(), &exp.h); s != UAVNOMA_OK) return report(s);
  uavnoma_status s = UAVNOMA_OK;
  if (seed) s = uavnoma_experiment_set_seed(exp.h, *seed);
  if (s == UAVNOMA_OK && iterations) s = uavnoma_experiment_set_iterations(exp.h, *iterations);
  if (s == UAVNOMA_OK && out) s = uavnoma_experiment_set_output(exp.h, out->c_str());
  if (s == UAVNOMA_OK && path) {
    static const std::map<std::string, uavnoma_paths> names = {
        {"mc", UAVNOMA_PATHS_MC}, {"analytic", UAVNOMA_PATHS_ANALYTIC}, {"both", UAVNOMA_PATHS_BOTH}};
    s = uavnoma_experiment_set_paths(exp.h, names.at(*path));
  }
  if (s != UAVNOMA_OK) return report(s);

  Result res;
  if (s = uavnoma_experiment_run(exp.h, &res.h); s != UAVNOMA_OK) return report(s);
  const std::string target = uavnoma_experiment_output(exp.h);
  if (s = uavnoma_result_write(res.h, target.c_str()); s != UAVNOMA_OK) return report(s);
  std::fprintf(stderr, "uavnoma: wrote %zu rows to %s\n", uavnoma_result_rows(res.h), target.c_str());
  return 0;
}
