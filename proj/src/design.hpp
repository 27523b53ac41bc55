#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcsim.hpp"

namespace spcecon {

// Budgets and seeds for the comparison and optimization machinery.
struct DesignConfig {
  std::uint64_t n_small = 10'000;      // quick simulation estimate
  std::uint64_t n_large = 100'000;     // reference simulation estimate
  std::uint64_t arl_runs = 100'000;    // runs per ARL estimate
  std::uint64_t profile_runs = 10'000; // runs per conditional ARL index
  double epsilon = 1e-10;
  std::uint64_t seed = 1;
  int workers = 0;
  bool common_random_numbers = false;  // share one seed across grid points
  ShiftIndexBase base = ShiftIndexBase::from_zero;
};

DesignConfig paper_preset();
DesignConfig ci_preset();

// Cache of run-length estimates keyed by the chart configuration. With equal
// weights the run-length law depends on the process only through (q, delta),
// so instances sharing those values share estimates. Seeds derive from the
// key, never from the instance, which keeps cached and fresh results equal.
class ArlCache {
public:
  ArlCache(std::uint64_t master_seed, std::uint64_t n_runs, int workers);
  Estimate arl0(const ChartDesign& d, const ProcessModel& p);
  Estimate arl1(const ChartDesign& d, const ProcessModel& p);  // zero-state

private:
  std::uint64_t master_seed_;
  std::uint64_t n_runs_;
  int workers_;
  std::map<std::string, Estimate> cache_;
};

struct ComparisonRow {
  std::string instance_id;
  double r = 0.0;
  Estimate f_sim_small;
  Estimate f_sim_large;
  double f_lv = 0.0;    // run-length form of the cost formula, estimated ARLs
  double pct_dif = 0.0; // |f_lv - f_sim_large| / f_sim_large * 100
};

std::vector<ComparisonRow> compare_methods(const Instance& inst,
                                           std::span<const double> r_values,
                                           const DesignConfig& cfg);

enum class Objective { simulation, lorenzen_vance, modified };

std::string objective_name(Objective o);
std::optional<Objective> objective_from_name(const std::string& name);

struct GridPoint {
  double r = 0.0;
  Estimate f;
};

struct OptimizationResult {
  std::string instance_id;
  Objective method = Objective::simulation;
  double r_star = 0.0;
  Estimate f_at_r_star;
  std::vector<GridPoint> grid;
};

// Direct search over the weight grid; ties break toward the smaller weight.
// The budget is the per-point run count for whatever the objective needs
// (cycles for the simulation objective, runs per estimate otherwise).
OptimizationResult grid_search_r(const Instance& inst, Objective method,
                                 std::span<const double> grid, std::uint64_t sim_budget,
                                 const DesignConfig& cfg);

// Extra simulated cost, in percent, of running at the run-length-formula
// optimum instead of the simulation optimum.
double cost_increment(const Instance& inst, std::span<const double> grid,
                      std::uint64_t sim_budget, const DesignConfig& cfg);

// Relative errors (percent) of the run-length cost formula with estimated
// ARLs and of the simulation estimate against the exact independent-statistics
// value at r = 1.
std::pair<double, double> error_vs_exact_r1(const Instance& inst, const DesignConfig& cfg);

// One row of the benchmark table.
struct BenchRow {
  std::string instance_id;
  double r = 0.0;
  Estimate f_quick;
  Estimate f_ref;
  double f_lv = 0.0;
  double pct_dif = 0.0;
  std::optional<double> pct_error1;  // r = 1 only
  std::optional<double> pct_error2;  // r = 1 only
  double wall_ms = 0.0;
};

// Full comparison sweep over instances x weights with ARL estimates shared
// through the cache.
std::vector<BenchRow> bench(std::span<const Instance> instances,
                            std::span<const double> r_values, const DesignConfig& cfg);

// Combined optimization report: per-method optima plus the cost increment,
// reusing the grid-search results.
struct OptimizeReport {
  std::string instance_id;
  OptimizationResult sim;
  OptimizationResult lv;
  std::optional<OptimizationResult> modified;
  Estimate f_sim_at_lv_star;   // simulated cost at the formula optimum
  Estimate f_sim_at_sim_star;  // simulated cost at the simulation optimum
  double increment_pct = 0.0;
};

OptimizeReport optimize_report(const Instance& inst, std::span<const double> grid,
                               std::uint64_t sim_budget, const DesignConfig& cfg,
                               bool with_modified);

}  // namespace spcecon
