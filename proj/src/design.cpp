#include "design.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "cost.hpp"

namespace spcecon {

namespace {

std::string format_key(const char* kind, const ChartDesign& d, const ProcessModel& p,
                       bool with_delta) {
  char buf[160];
  double delta = with_delta ? noncentrality(p, d.n) : 0.0;
  std::snprintf(buf, sizeof buf, "%s:q=%zu:r=%.9g:ul=%.9g:n=%ld:d=%.9g", kind, p.q,
                d.weights.front(), d.ul, d.n, delta);
  return buf;
}

double pct_between(double value, double reference) {
  return std::fabs(value - reference) / reference * 100.0;
}

}  // namespace

DesignConfig paper_preset() { return DesignConfig{}; }

DesignConfig ci_preset() {
  DesignConfig cfg;
  cfg.n_small = 2'000;
  cfg.n_large = 20'000;
  cfg.arl_runs = 20'000;
  cfg.profile_runs = 2'000;
  return cfg;
}

ArlCache::ArlCache(std::uint64_t master_seed, std::uint64_t n_runs, int workers)
    : master_seed_(master_seed), n_runs_(n_runs), workers_(workers) {}

Estimate ArlCache::arl0(const ChartDesign& d, const ProcessModel& p) {
  require(has_equal_weights(d), Errc::invalid_argument,
          "the run-length cache is valid only for equal weights");
  const std::string key = format_key("arl0", d, p, false);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  SimConfig cfg;
  cfg.seed = derive_seed(master_seed_, key);
  cfg.workers = workers_;
  Estimate est = estimate_arl0(d, p, n_runs_, cfg);
  cache_.emplace(key, est);
  return est;
}

Estimate ArlCache::arl1(const ChartDesign& d, const ProcessModel& p) {
  require(has_equal_weights(d), Errc::invalid_argument,
          "the run-length cache is valid only for equal weights");
  const std::string key = format_key("arl1", d, p, true);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  SimConfig cfg;
  cfg.seed = derive_seed(master_seed_, key);
  cfg.workers = workers_;
  Estimate est = estimate_arl1_conditional(d, p, 0, n_runs_, cfg);
  cache_.emplace(key, est);
  return est;
}

std::string objective_name(Objective o) {
  switch (o) {
    case Objective::simulation: return "simulation";
    case Objective::lorenzen_vance: return "lorenzen-vance";
    case Objective::modified: return "modified";
  }
  return "simulation";
}

std::optional<Objective> objective_from_name(const std::string& name) {
  if (name == "simulation" || name == "sim") return Objective::simulation;
  if (name == "lorenzen-vance" || name == "lv") return Objective::lorenzen_vance;
  if (name == "modified" || name == "corrected") return Objective::modified;
  return std::nullopt;
}

namespace {

std::vector<ComparisonRow> compare_with_cache(const Instance& inst,
                                              std::span<const double> r_values,
                                              const DesignConfig& cfg, ArlCache& arls,
                                              std::vector<double>* wall_ms) {
  validate(inst);
  require(!r_values.empty(), Errc::invalid_argument, "at least one weight value");
  std::vector<ComparisonRow> rows;
  rows.reserve(r_values.size());
  for (double r : r_values) {
    const auto start = std::chrono::steady_clock::now();
    const ChartDesign d = design_with_weight(inst.design, r);
    char rkey[64];
    std::snprintf(rkey, sizeof rkey, "%.9g", r);

    SimConfig sim;
    sim.workers = cfg.workers;
    sim.seed = derive_seed(cfg.seed, inst.id + ":f_small:" + rkey);
    ComparisonRow row;
    row.instance_id = inst.id;
    row.r = r;
    row.f_sim_small = estimate_f(d, inst.process, inst.costs, cfg.n_small, sim);
    sim.seed = derive_seed(cfg.seed, inst.id + ":f_large:" + rkey);
    row.f_sim_large = estimate_f(d, inst.process, inst.costs, cfg.n_large, sim);

    const Estimate arl0 = arls.arl0(d, inst.process);
    const Estimate arl1 = arls.arl1(d, inst.process);
    row.f_lv = lv_cost_arl(arl0.value, arl1.value, inst.costs, d, inst.process.lambda);
    row.pct_dif = pct_between(row.f_lv, row.f_sim_large.value);
    rows.push_back(row);
    if (wall_ms) {
      wall_ms->push_back(
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count());
    }
  }
  return rows;
}

}  // namespace

std::vector<ComparisonRow> compare_methods(const Instance& inst,
                                           std::span<const double> r_values,
                                           const DesignConfig& cfg) {
  ArlCache arls(cfg.seed, cfg.arl_runs, cfg.workers);
  return compare_with_cache(inst, r_values, cfg, arls, nullptr);
}

OptimizationResult grid_search_r(const Instance& inst, Objective method,
                                 std::span<const double> grid, std::uint64_t sim_budget,
                                 const DesignConfig& cfg) {
  validate(inst);
  require(!grid.empty(), Errc::invalid_argument, "grid must be nonempty");
  for (double r : grid)
    require(r > 0.0 && r <= 1.0, Errc::invalid_argument, "grid weights must lie in (0, 1]");
  require(sim_budget >= 1, Errc::invalid_argument, "budget must be >= 1");

  OptimizationResult out;
  out.instance_id = inst.id;
  out.method = method;
  out.grid.reserve(grid.size());

  ArlCache arls(derive_seed(cfg.seed, inst.id + ":grid_arl"), sim_budget, cfg.workers);
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const ChartDesign d = design_with_weight(inst.design, r);
    const std::string point_tag = cfg.common_random_numbers
                                      ? inst.id + ":grid"
                                      : inst.id + ":grid:" + std::to_string(i);
    SimConfig sim;
    sim.workers = cfg.workers;
    sim.seed = derive_seed(cfg.seed, point_tag);

    Estimate f;
    switch (method) {
      case Objective::simulation:
        f = estimate_f(d, inst.process, inst.costs, sim_budget, sim);
        break;
      case Objective::lorenzen_vance: {
        const Estimate arl0 = arls.arl0(d, inst.process);
        const Estimate arl1 = arls.arl1(d, inst.process);
        f.value = lv_cost_arl(arl0.value, arl1.value, inst.costs, d, inst.process.lambda);
        f.n_runs = sim_budget;
        break;
      }
      case Objective::modified: {
        const ArlProfile profile = estimate_aarl1(d, inst.process, inst.process.lambda,
                                                  cfg.epsilon, sim_budget, sim, cfg.base);
        f.value = modified_cost(profile.anfa.value, profile.aarl1.value,
                                profile.arl0.value, inst.costs, d, inst.process.lambda);
        f.n_runs = sim_budget;
        break;
      }
    }
    out.grid.push_back(GridPoint{r, f});
    if (f.value < out.grid[best].f.value) best = i;
  }
  // Values within a hair of the minimum count as tied, and the smallest
  // weight wins; exact float ties cannot be produced by the estimators.
  const double f_min = out.grid[best].f.value;
  const double tie_tol = 1e-9 * std::max(std::fabs(f_min), 1.0);
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    if (out.grid[i].f.value <= f_min + tie_tol && out.grid[i].r < out.grid[best].r)
      best = i;
  }
  out.r_star = out.grid[best].r;
  out.f_at_r_star = out.grid[best].f;
  return out;
}

double cost_increment(const Instance& inst, std::span<const double> grid,
                      std::uint64_t sim_budget, const DesignConfig& cfg) {
  const OptimizationResult sim_opt =
      grid_search_r(inst, Objective::simulation, grid, sim_budget, cfg);
  DesignConfig lv_cfg = cfg;
  lv_cfg.seed = derive_seed(cfg.seed, inst.id + ":lv_search");
  const OptimizationResult lv_opt =
      grid_search_r(inst, Objective::lorenzen_vance, grid, cfg.arl_runs, lv_cfg);

  SimConfig eval;
  eval.workers = cfg.workers;
  eval.seed = derive_seed(cfg.seed, inst.id + ":increment:sim");
  const Estimate at_sim = estimate_f(design_with_weight(inst.design, sim_opt.r_star),
                                     inst.process, inst.costs, sim_budget, eval);
  eval.seed = derive_seed(cfg.seed, inst.id + ":increment:lv");
  const Estimate at_lv = estimate_f(design_with_weight(inst.design, lv_opt.r_star),
                                    inst.process, inst.costs, sim_budget, eval);
  return 100.0 * (at_lv.value - at_sim.value) / at_sim.value;
}

std::pair<double, double> error_vs_exact_r1(const Instance& inst, const DesignConfig& cfg) {
  validate(inst);
  const ChartDesign d = design_with_weight(inst.design, 1.0);
  const ErrorRates rates = analytic_rates_r1(inst.process.q, d.ul, inst.delta);
  const double exact = lv_cost_independent(rates, inst.costs, d, inst.process.lambda);

  ArlCache arls(cfg.seed, cfg.arl_runs, cfg.workers);
  const Estimate arl0 = arls.arl0(d, inst.process);
  const Estimate arl1 = arls.arl1(d, inst.process);
  const double f_lv = lv_cost_arl(arl0.value, arl1.value, inst.costs, d, inst.process.lambda);

  SimConfig sim;
  sim.workers = cfg.workers;
  sim.seed = derive_seed(cfg.seed, inst.id + ":f_large:1");
  const Estimate f_sim = estimate_f(d, inst.process, inst.costs, cfg.n_large, sim);

  return {pct_between(f_lv, exact), pct_between(f_sim.value, exact)};
}

std::vector<BenchRow> bench(std::span<const Instance> instances,
                            std::span<const double> r_values, const DesignConfig& cfg) {
  require(!instances.empty(), Errc::invalid_argument, "at least one instance");
  require(!r_values.empty(), Errc::invalid_argument, "at least one weight value");
  ArlCache arls(cfg.seed, cfg.arl_runs, cfg.workers);
  std::vector<BenchRow> rows;
  rows.reserve(instances.size() * r_values.size());
  for (const Instance& inst : instances) {
    std::vector<double> wall_ms;
    const auto comparison = compare_with_cache(inst, r_values, cfg, arls, &wall_ms);
    for (std::size_t i = 0; i < comparison.size(); ++i) {
      const ComparisonRow& c = comparison[i];
      BenchRow row;
      row.instance_id = c.instance_id;
      row.r = c.r;
      row.f_quick = c.f_sim_small;
      row.f_ref = c.f_sim_large;
      row.f_lv = c.f_lv;
      row.pct_dif = c.pct_dif;
      row.wall_ms = wall_ms[i];
      if (c.r == 1.0) {
        const ErrorRates rates =
            analytic_rates_r1(inst.process.q, inst.design.ul, inst.delta);
        const double exact =
            lv_cost_independent(rates, inst.costs, design_with_weight(inst.design, 1.0),
                                inst.process.lambda);
        row.pct_error1 = pct_between(c.f_lv, exact);
        row.pct_error2 = pct_between(c.f_sim_large.value, exact);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

OptimizeReport optimize_report(const Instance& inst, std::span<const double> grid,
                               std::uint64_t sim_budget, const DesignConfig& cfg,
                               bool with_modified) {
  OptimizeReport report;
  report.instance_id = inst.id;
  report.sim = grid_search_r(inst, Objective::simulation, grid, sim_budget, cfg);
  DesignConfig lv_cfg = cfg;
  lv_cfg.seed = derive_seed(cfg.seed, inst.id + ":lv_search");
  report.lv = grid_search_r(inst, Objective::lorenzen_vance, grid, cfg.arl_runs, lv_cfg);
  if (with_modified) {
    DesignConfig mod_cfg = cfg;
    mod_cfg.seed = derive_seed(cfg.seed, inst.id + ":modified_search");
    report.modified =
        grid_search_r(inst, Objective::modified, grid, cfg.profile_runs, mod_cfg);
  }

  SimConfig eval;
  eval.workers = cfg.workers;
  eval.seed = derive_seed(cfg.seed, inst.id + ":increment:sim");
  report.f_sim_at_sim_star = estimate_f(design_with_weight(inst.design, report.sim.r_star),
                                        inst.process, inst.costs, sim_budget, eval);
  eval.seed = derive_seed(cfg.seed, inst.id + ":increment:lv");
  report.f_sim_at_lv_star = estimate_f(design_with_weight(inst.design, report.lv.r_star),
                                       inst.process, inst.costs, sim_budget, eval);
  report.increment_pct = 100.0 *
                         (report.f_sim_at_lv_star.value - report.f_sim_at_sim_star.value) /
                         report.f_sim_at_sim_star.value;
  return report;
}

}  // namespace spcecon
