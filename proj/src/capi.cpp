#include "spcecon.h"

#include <cstring>
#include <new>
#include <string>

#include "cost.hpp"
#include "design.hpp"
#include "io.hpp"

struct spcecon_instance {
  spcecon::Instance v;
};

namespace {

thread_local std::string g_last_error;

spcecon_status to_status(spcecon::Errc code) {
  using spcecon::Errc;
  switch (code) {
    case Errc::invalid_argument: return SPCECON_ERROR_INVALID_ARGUMENT;
    case Errc::unknown_instance: return SPCECON_ERROR_UNKNOWN_INSTANCE;
    case Errc::singular_matrix: return SPCECON_ERROR_SINGULAR_MATRIX;
    case Errc::run_cap_exceeded: return SPCECON_ERROR_RUN_CAP_EXCEEDED;
    case Errc::io_failure: return SPCECON_ERROR_IO;
    case Errc::bad_json: return SPCECON_ERROR_BAD_JSON;
  }
  return SPCECON_ERROR_INTERNAL;
}

template <class Fn>
spcecon_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SPCECON_OK;
  } catch (const spcecon::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPCECON_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SPCECON_ERROR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

spcecon_status require_c(bool cond, const char* msg) {
  if (cond) return SPCECON_OK;
  g_last_error = msg;
  return SPCECON_ERROR_INVALID_ARGUMENT;
}

spcecon::SimConfig sim_config(uint64_t seed, int workers) {
  spcecon::SimConfig cfg;
  cfg.seed = seed;
  cfg.workers = workers;
  return cfg;
}

}  // namespace

extern "C" {

const char* spcecon_version(void) { return "0.1.0"; }

const char* spcecon_last_error(void) { return g_last_error.c_str(); }

void spcecon_string_free(char* s) { delete[] s; }

spcecon_status spcecon_instance_load(const char* id, spcecon_instance** out) {
  if (auto rc = require_c(id && out, "id and out must be non-null")) return rc;
  return guarded([&] { *out = new spcecon_instance{spcecon::load_instance(id)}; });
}

spcecon_status spcecon_instance_from_json(const char* json_text, spcecon_instance** out) {
  if (auto rc = require_c(json_text && out, "json_text and out must be non-null"))
    return rc;
  return guarded([&] {
    auto parsed = spcecon::parse_instances(json_text);
    spcecon::require(parsed.size() == 1, spcecon::Errc::bad_json,
                     "expected exactly one instance object");
    *out = new spcecon_instance{std::move(parsed.front())};
  });
}

spcecon_status spcecon_instance_to_json(const spcecon_instance* inst, char** out_json) {
  if (auto rc = require_c(inst && out_json, "inst and out_json must be non-null"))
    return rc;
  return guarded([&] { *out_json = dup_string(spcecon::instance_to_json_text(inst->v)); });
}

spcecon_status spcecon_catalog_json(char** out_json) {
  if (auto rc = require_c(out_json != nullptr, "out_json must be non-null")) return rc;
  return guarded([&] { *out_json = dup_string(spcecon::catalog_to_json_text()); });
}

void spcecon_instance_free(spcecon_instance* inst) { delete inst; }

spcecon_status spcecon_estimate_cost(const spcecon_instance* inst, double r,
                                     uint64_t n_cycles, uint64_t seed, int workers,
                                     spcecon_estimate* out) {
  if (auto rc = require_c(inst && out, "inst and out must be non-null")) return rc;
  return guarded([&] {
    const auto d = spcecon::design_with_weight(inst->v.design, r);
    const auto e = spcecon::estimate_f(d, inst->v.process, inst->v.costs, n_cycles,
                                       sim_config(seed, workers));
    *out = {e.value, e.std_error, e.n_runs};
  });
}

spcecon_status spcecon_estimate_arl0(const spcecon_instance* inst, double r,
                                     uint64_t n_runs, uint64_t seed, int workers,
                                     spcecon_estimate* out) {
  if (auto rc = require_c(inst && out, "inst and out must be non-null")) return rc;
  return guarded([&] {
    const auto d = spcecon::design_with_weight(inst->v.design, r);
    const auto e =
        spcecon::estimate_arl0(d, inst->v.process, n_runs, sim_config(seed, workers));
    *out = {e.value, e.std_error, e.n_runs};
  });
}

spcecon_status spcecon_estimate_arl1(const spcecon_instance* inst, double r,
                                     uint64_t warmup_m, uint64_t n_runs, uint64_t seed,
                                     int workers, spcecon_estimate* out) {
  if (auto rc = require_c(inst && out, "inst and out must be non-null")) return rc;
  return guarded([&] {
    const auto d = spcecon::design_with_weight(inst->v.design, r);
    const auto e = spcecon::estimate_arl1_conditional(d, inst->v.process, warmup_m,
                                                      n_runs, sim_config(seed, workers));
    *out = {e.value, e.std_error, e.n_runs};
  });
}

spcecon_status spcecon_estimate_anfa(const spcecon_instance* inst, double r,
                                     uint64_t n_runs, uint64_t seed, int workers,
                                     spcecon_estimate* out) {
  if (auto rc = require_c(inst && out, "inst and out must be non-null")) return rc;
  return guarded([&] {
    const auto d = spcecon::design_with_weight(inst->v.design, r);
    const auto e = spcecon::estimate_anfa(d, inst->v.process, inst->v.process.lambda,
                                          n_runs, sim_config(seed, workers));
    *out = {e.value, e.std_error, e.n_runs};
  });
}

spcecon_status spcecon_cost_formula_arl(const spcecon_instance* inst, double r,
                                        double arl0, double arl1, double* out) {
  if (auto rc = require_c(inst && out, "inst and out must be non-null")) return rc;
  return guarded([&] {
    const auto d = spcecon::design_with_weight(inst->v.design, r);
    *out = spcecon::lv_cost_arl(arl0, arl1, inst->v.costs, d, inst->v.process.lambda);
  });
}

spcecon_status spcecon_cost_formula_corrected(const spcecon_instance* inst, double r,
                                              double anfa, double aarl1, double arl0,
                                              double* out) {
  if (auto rc = require_c(inst && out, "inst and out must be non-null")) return rc;
  return guarded([&] {
    const auto d = spcecon::design_with_weight(inst->v.design, r);
    *out = spcecon::modified_cost(anfa, aarl1, arl0, inst->v.costs, d,
                                  inst->v.process.lambda);
  });
}

spcecon_status spcecon_cost_formula_exact_shewhart(const spcecon_instance* inst,
                                                   double* out) {
  if (auto rc = require_c(inst && out, "inst and out must be non-null")) return rc;
  return guarded([&] {
    const auto d = spcecon::design_with_weight(inst->v.design, 1.0);
    const auto rates =
        spcecon::analytic_rates_r1(inst->v.process.q, d.ul, inst->v.delta);
    *out = spcecon::lv_cost_independent(rates, inst->v.costs, d, inst->v.process.lambda);
  });
}

spcecon_status spcecon_arl_profile(const spcecon_instance* inst, double r,
                                   double epsilon, uint64_t runs_per_m, uint64_t seed,
                                   int workers, char** out_json) {
  if (auto rc = require_c(inst && out_json, "inst and out_json must be non-null"))
    return rc;
  return guarded([&] {
    const auto d = spcecon::design_with_weight(inst->v.design, r);
    const auto profile =
        spcecon::estimate_aarl1(d, inst->v.process, inst->v.process.lambda, epsilon,
                                runs_per_m, sim_config(seed, workers));
    *out_json = dup_string(spcecon::to_json(profile).dump());
  });
}

spcecon_status spcecon_compare(const spcecon_instance* inst, const double* r_values,
                               size_t n_r, uint64_t n_small, uint64_t n_large,
                               uint64_t arl_runs, uint64_t seed, int workers,
                               char** out_json) {
  if (auto rc = require_c(inst && r_values && n_r > 0 && out_json,
                          "inst, r_values, and out_json must be non-null"))
    return rc;
  return guarded([&] {
    spcecon::DesignConfig cfg;
    cfg.n_small = n_small;
    cfg.n_large = n_large;
    cfg.arl_runs = arl_runs;
    cfg.seed = seed;
    cfg.workers = workers;
    const auto rows =
        spcecon::compare_methods(inst->v, std::span<const double>(r_values, n_r), cfg);
    spcecon::json arr = spcecon::json::array();
    for (const auto& row : rows) arr.push_back(spcecon::to_json(row));
    *out_json = dup_string(arr.dump());
  });
}

spcecon_status spcecon_bench(const spcecon_instance* const* instances, size_t n_instances,
                             const double* r_values, size_t n_r, uint64_t n_small,
                             uint64_t n_large, uint64_t arl_runs, uint64_t seed,
                             int workers, char** out_json) {
  if (auto rc = require_c(instances && n_instances > 0 && r_values && n_r > 0 && out_json,
                          "instances, r_values, and out_json must be non-null"))
    return rc;
  return guarded([&] {
    std::vector<spcecon::Instance> insts;
    insts.reserve(n_instances);
    for (size_t i = 0; i < n_instances; ++i) {
      spcecon::require(instances[i] != nullptr, spcecon::Errc::invalid_argument,
                       "null instance handle");
      insts.push_back(instances[i]->v);
    }
    spcecon::DesignConfig cfg;
    cfg.n_small = n_small;
    cfg.n_large = n_large;
    cfg.arl_runs = arl_runs;
    cfg.seed = seed;
    cfg.workers = workers;
    const auto rows = spcecon::bench(insts, std::span<const double>(r_values, n_r), cfg);
    spcecon::json arr = spcecon::json::array();
    for (const auto& row : rows) arr.push_back(spcecon::to_json(row));
    *out_json = dup_string(arr.dump());
  });
}

spcecon_status spcecon_optimize(const spcecon_instance* inst, const char* method,
                                const double* grid, size_t n_grid, uint64_t budget,
                                uint64_t seed, int workers, char** out_json) {
  if (auto rc = require_c(inst && method && grid && n_grid > 0 && out_json,
                          "inst, method, grid, and out_json must be non-null"))
    return rc;
  return guarded([&] {
    const auto objective = spcecon::objective_from_name(method);
    spcecon::require(objective.has_value(), spcecon::Errc::invalid_argument,
                     "method must be simulation, lorenzen-vance, or modified");
    spcecon::DesignConfig cfg;
    cfg.seed = seed;
    cfg.workers = workers;
    const auto result = spcecon::grid_search_r(
        inst->v, *objective, std::span<const double>(grid, n_grid), budget, cfg);
    *out_json = dup_string(spcecon::to_json(result).dump());
  });
}

spcecon_status spcecon_optimize_report(const spcecon_instance* inst, const double* grid,
                                       size_t n_grid, uint64_t sim_budget,
                                       uint64_t arl_runs, uint64_t profile_runs,
                                       double epsilon, int with_modified, uint64_t seed,
                                       int workers, char** out_json) {
  if (auto rc = require_c(inst && grid && n_grid > 0 && out_json,
                          "inst, grid, and out_json must be non-null"))
    return rc;
  return guarded([&] {
    spcecon::DesignConfig cfg;
    cfg.arl_runs = arl_runs;
    cfg.profile_runs = profile_runs;
    cfg.epsilon = epsilon;
    cfg.seed = seed;
    cfg.workers = workers;
    const auto report =
        spcecon::optimize_report(inst->v, std::span<const double>(grid, n_grid),
                                 sim_budget, cfg, with_modified != 0);
    *out_json = dup_string(spcecon::to_json(report).dump());
  });
}

spcecon_status spcecon_error_vs_exact(const spcecon_instance* inst, uint64_t n_cycles,
                                      uint64_t arl_runs, uint64_t seed, int workers,
                                      double* out_err_formula, double* out_err_sim) {
  if (auto rc = require_c(inst && out_err_formula && out_err_sim,
                          "inst and output pointers must be non-null"))
    return rc;
  return guarded([&] {
    spcecon::DesignConfig cfg;
    cfg.n_large = n_cycles;
    cfg.arl_runs = arl_runs;
    cfg.seed = seed;
    cfg.workers = workers;
    const auto [err1, err2] = spcecon::error_vs_exact_r1(inst->v, cfg);
    *out_err_formula = err1;
    *out_err_sim = err2;
  });
}

}  // extern "C"
