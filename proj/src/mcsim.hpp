#pragma once

#include <cstdint>
#include <vector>

#include "chart.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace spcecon {

enum class SeMethod { delta_method, batch_means };

struct SimConfig {
  std::uint64_t seed = 1;
  int workers = 0;                     // <= 0 picks the hardware default
  std::uint64_t run_cap = 10'000'000;  // samples per run before a hard error
  SeMethod se_method = SeMethod::delta_method;
  CovMode cov_mode = CovMode::exact;
};

// One simulated quality-control cycle.
struct CycleOutcome {
  double ct = 0.0;  // cycle time
  double cc = 0.0;  // cycle cost
  std::uint64_t n_false_alarms = 0;
  std::uint64_t n_samples = 0;
  double shift_time = 0.0;               // production-time epoch of the cause
  std::uint64_t signal_epoch_index = 0;  // sample index of the true alarm
};

// One draw of the sample mean from N(mu, Sigma/n).
Vec sample_mean(const ProcessModel& p, long n, bool in_control, Rng& rng);

// Time and cost of a cycle given its realized events. The timeline: samples
// at production epochs h, 2h, ...; the failure clock runs in production time
// and pauses, along with production, during false-alarm searches when
// gamma1 = 0; sampling is instantaneous at the epochs with the charting time
// n*ts appended once after the signaling sample.
CycleOutcome assemble_cycle(double shift_time, std::uint64_t signal_index,
                            std::uint64_t n_false_alarms, const ChartDesign& d,
                            const CostParams& c);

CycleOutcome simulate_cycle(const ChartDesign& d, const ProcessModel& p,
                            const CostParams& c, Rng& rng);

// Ratio-of-sums estimate of the long-run expected average cost.
Estimate estimate_f(const ChartDesign& d, const ProcessModel& p, const CostParams& c,
                    std::uint64_t n_cycles, const SimConfig& cfg);

// Zero-state in-control average run length.
Estimate estimate_arl0(const ChartDesign& d, const ProcessModel& p,
                       std::uint64_t n_runs, const SimConfig& cfg);

// Out-of-control average run length after warmup_m in-control samples have
// passed through the chart; warm-up signals do not stop the run (false alarms
// never reset the chart).
Estimate estimate_arl1_conditional(const ChartDesign& d, const ProcessModel& p,
                                   std::uint64_t warmup_m, std::uint64_t n_runs,
                                   const SimConfig& cfg);

// Average number of false alarms over one cycle's monitoring phase.
Estimate estimate_anfa(const ChartDesign& d, const ProcessModel& p, double lambda,
                       std::uint64_t n_runs, const SimConfig& cfg);

// First retained shift interval: from_zero keeps the interval before the
// first sample (weights then telescope to one), from_one matches the
// published summation start.
enum class ShiftIndexBase { from_zero, from_one };

struct ArlProfile {
  Estimate arl0;
  std::vector<std::uint64_t> m_index;  // retained warm-up lengths, base..k
  std::vector<Estimate> arl1_m;
  std::vector<double> weights;  // raw shift-interval probabilities Pr(A_m)
  Estimate aarl1;
  Estimate anfa;
  std::uint64_t k = 0;
  double epsilon = 0.0;
  ShiftIndexBase base = ShiftIndexBase::from_zero;
};

// Conditional out-of-control run lengths for every retained warm-up length,
// their probability-weighted average (over renormalized weights), plus the
// matching ARL0 and ANFA estimates from derived seeds.
ArlProfile estimate_aarl1(const ChartDesign& d, const ProcessModel& p, double lambda,
                          double epsilon, std::uint64_t n_runs_per_m,
                          const SimConfig& cfg,
                          ShiftIndexBase base = ShiftIndexBase::from_zero);

}  // namespace spcecon
