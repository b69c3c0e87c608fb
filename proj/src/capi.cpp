// SPDX-License-Identifier: Apache-2.0

#include "uavnoma.h"

#include "uavnoma/analytic.hpp"
#include "uavnoma/expcli.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

struct uavnoma_experiment {
  uavnoma::ExperimentSpec spec;
};

struct uavnoma_result {
  std::vector<uavnoma::CsvRow> rows;
};

struct uavnoma_model {
  std::unique_ptr<uavnoma::AnalyticModel> model;
};

namespace {

thread_local std::string g_last_error;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

uavnoma_status fail(uavnoma_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs `body`, mapping exceptions onto status codes.
template <class F>
uavnoma_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return UAVNOMA_OK;
  } catch (const uavnoma::ConfigError& e) {
    return fail(UAVNOMA_CONFIG, e.what());
  } catch (const uavnoma::ModelError& e) {
    return fail(UAVNOMA_INVALID_ARGUMENT, e.what());
  } catch (const uavnoma::QuadratureError& e) {
    return fail(UAVNOMA_NUMERICAL, e.what());
  } catch (const IoError& e) {
    return fail(UAVNOMA_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(UAVNOMA_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(UAVNOMA_INTERNAL, e.what());
  } catch (...) {
    return fail(UAVNOMA_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class T>
void require_arg(const T* p, const char* what) {
  if (!p) throw uavnoma::ModelError(std::string(what) + " must not be NULL");
}

uavnoma::AuCase to_case(uavnoma_case c) {
  if (c < UAVNOMA_NONCOMP_L || c > UAVNOMA_COMP_NL) throw uavnoma::ModelError("unknown association case");
  return uavnoma::kAllCases[static_cast<std::size_t>(c)];
}

}  // namespace

extern "C" {

const char* uavnoma_version(void) { return "0.1.0"; }

const char* uavnoma_last_error(void) { return g_last_error.c_str(); }

const char* uavnoma_status_name(uavnoma_status status) {
  switch (status) {
    case UAVNOMA_OK: return "ok";
    case UAVNOMA_INVALID_ARGUMENT: return "invalid argument";
    case UAVNOMA_CONFIG: return "configuration error";
    case UAVNOMA_NUMERICAL: return "numerical failure";
    case UAVNOMA_IO: return "i/o error";
    case UAVNOMA_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void uavnoma_string_free(char* s) { std::free(s); }

uavnoma_status uavnoma_experiment_defaults(uavnoma_experiment** out) {
  return guarded([&] {
    require_arg(out, "out");
    *out = new uavnoma_experiment{};
  });
}

uavnoma_status uavnoma_experiment_from_text(const char* text, uavnoma_experiment** out) {
  return guarded([&] {
    require_arg(out, "out");
    require_arg(text, "text");
    *out = nullptr;
    auto exp = std::make_unique<uavnoma_experiment>();
    exp->spec = uavnoma::parse_config(text);
    *out = exp.release();
  });
}

uavnoma_status uavnoma_experiment_from_file(const char* path, uavnoma_experiment** out) {
  return guarded([&] {
    require_arg(out, "out");
    require_arg(path, "path");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open config file '") + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    auto exp = std::make_unique<uavnoma_experiment>();
    exp->spec = uavnoma::parse_config(ss.str());
    *out = exp.release();
  });
}

void uavnoma_experiment_free(uavnoma_experiment* exp) { delete exp; }

uavnoma_status uavnoma_experiment_set_seed(uavnoma_experiment* exp, uint64_t seed) {
  return guarded([&] {
    require_arg(exp, "experiment");
    exp->spec.master_seed = seed;
  });
}

uavnoma_status uavnoma_experiment_set_iterations(uavnoma_experiment* exp, uint64_t iterations) {
  return guarded([&] {
    require_arg(exp, "experiment");
    if (iterations < 100) throw uavnoma::ConfigError("iterations: Monte Carlo needs at least 100");
    exp->spec.base.iterations = iterations;
  });
}

uavnoma_status uavnoma_experiment_set_output(uavnoma_experiment* exp, const char* path) {
  return guarded([&] {
    require_arg(exp, "experiment");
    require_arg(path, "path");
    if (!*path) throw uavnoma::ConfigError("output: path must not be empty");
    exp->spec.output = path;
  });
}

uavnoma_status uavnoma_experiment_set_paths(uavnoma_experiment* exp, uavnoma_paths paths) {
  return guarded([&] {
    require_arg(exp, "experiment");
    switch (paths) {
      case UAVNOMA_PATHS_MC: exp->spec.paths = uavnoma::PathSelection::Mc; break;
      case UAVNOMA_PATHS_ANALYTIC: exp->spec.paths = uavnoma::PathSelection::Analytic; break;
      case UAVNOMA_PATHS_BOTH: exp->spec.paths = uavnoma::PathSelection::Both; break;
      default: throw uavnoma::ModelError("unknown path selection");
    }
  });
}

const char* uavnoma_experiment_output(const uavnoma_experiment* exp) { return exp ? exp->spec.output.c_str() : ""; }

uavnoma_status uavnoma_experiment_format(const uavnoma_experiment* exp, char** out) {
  return guarded([&] {
    require_arg(exp, "experiment");
    require_arg(out, "out");
    *out = dup_string(uavnoma::format_config(exp->spec));
  });
}

uavnoma_status uavnoma_experiment_run(const uavnoma_experiment* exp, uavnoma_result** out) {
  return guarded([&] {
    require_arg(exp, "experiment");
    require_arg(out, "out");
    *out = nullptr;
    auto res = std::make_unique<uavnoma_result>();
    res->rows = uavnoma::run_experiment(exp->spec);
    *out = res.release();
  });
}

void uavnoma_result_free(uavnoma_result* res) { delete res; }

size_t uavnoma_result_rows(const uavnoma_result* res) { return res ? res->rows.size() : 0; }

uavnoma_status uavnoma_result_csv(const uavnoma_result* res, char** out) {
  return guarded([&] {
    require_arg(res, "result");
    require_arg(out, "out");
    *out = dup_string(uavnoma::to_csv(res->rows));
  });
}

uavnoma_status uavnoma_result_write(const uavnoma_result* res, const char* path) {
  return guarded([&] {
    require_arg(res, "result");
    require_arg(path, "path");
    const std::string csv = uavnoma::to_csv(res->rows);
    try {
      uavnoma::write_file_atomic(path, csv);
    } catch (const std::exception& e) {
      throw IoError(e.what());
    }
  });
}

uavnoma_status uavnoma_model_create(const uavnoma_experiment* exp, const char* scheme, uavnoma_model** out) {
  return guarded([&] {
    require_arg(exp, "experiment");
    require_arg(scheme, "scheme");
    require_arg(out, "out");
    *out = nullptr;
    auto m = std::make_unique<uavnoma_model>();
    m->model = std::make_unique<uavnoma::AnalyticModel>(exp->spec.base, uavnoma::parse_scheme(scheme));
    *out = m.release();
  });
}

void uavnoma_model_free(uavnoma_model* model) { delete model; }

uavnoma_status uavnoma_model_assoc_prob(const uavnoma_model* model, uavnoma_case c, double* value) {
  return guarded([&] {
    require_arg(model, "model");
    require_arg(value, "value");
    *value = model->model->assoc_prob(to_case(c)).value;
  });
}

uavnoma_status uavnoma_model_coverage_case(const uavnoma_model* model, uavnoma_case c, double threshold,
                                           double* value) {
  return guarded([&] {
    require_arg(model, "model");
    require_arg(value, "value");
    *value = model->model->coverage_case(to_case(c), threshold).value;
  });
}

uavnoma_status uavnoma_model_coverage_au(const uavnoma_model* model, double threshold, double* value) {
  return guarded([&] {
    require_arg(model, "model");
    require_arg(value, "value");
    *value = model->model->coverage_total_au(threshold).value;
  });
}

uavnoma_status uavnoma_model_coverage_tu(const uavnoma_model* model, double threshold, double* value) {
  return guarded([&] {
    require_arg(model, "model");
    require_arg(value, "value");
    *value = model->model->coverage_tu(threshold).value;
  });
}

uavnoma_status uavnoma_model_rates(const uavnoma_model* model, double* au_noncomp, double* au_comp, double* tu,
                                   double* total) {
  return guarded([&] {
    require_arg(model, "model");
    const uavnoma::RateTotals r = model->model->rate_totals();
    if (au_noncomp) *au_noncomp = r.R_u_noncomp.value;
    if (au_comp) *au_comp = r.R_u_comp.value;
    if (tu) *tu = r.R_t.value;
    if (total) *total = r.R_total.value;
  });
}

}  // extern "C"
