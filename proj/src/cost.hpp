#pragma once

#include <cstdint>

#include "model.hpp"

namespace spcecon {

// s = expected number of samples drawn before the failure epoch factor,
// tau = expected time between the failure and the preceding sample epoch.
struct CycleConstants {
  double s = 0.0;
  double tau = 0.0;
};

struct ErrorRates {
  double alpha = 0.0;  // P(signal | in control), per sample
  double beta = 0.0;   // P(no signal | out of control), per sample
};

CycleConstants cycle_constants(double lambda, double h);

// P(first failure falls in the interval (m h, (m+1) h])
double pr_shift_interval(std::uint64_t m, double lambda, double h);

// Smallest k with k >= -ln(epsilon) / (lambda h).
std::uint64_t truncation_k(double epsilon, double lambda, double h);

// Long-run expected average cost for charts whose per-sample statistics are
// independent, written with per-sample error rates.
double lv_cost_independent(const ErrorRates& rates, const CostParams& costs,
                           const ChartDesign& design, double lambda);

// Same cost written with average run lengths (the Lorenzen-Vance form).
double lv_cost_arl(double arl0, double arl1, const CostParams& costs,
                   const ChartDesign& design, double lambda);

// How the false-alarm search time enters the corrected formula's denominator.
enum class SearchTimeMode {
  arl0_rate,      // keep s TF / ARL0, matching the published corrected formula
  observed_anfa,  // use ANFA TF, consistent with the corrected numerator
};

// Corrected cost for memory-type charts: the false-alarm count is replaced by
// ANFA and the out-of-control run length by the shift-interval average AARL1.
double modified_cost(double anfa, double aarl1, double arl0, const CostParams& costs,
                     const ChartDesign& design, double lambda,
                     SearchTimeMode mode = SearchTimeMode::arl0_rate);

// Per-sample error rates of the memoryless (r = 1) chart: alpha from the
// central chi-square tail, beta from the noncentral chi-square CDF. For q = 1
// these reduce to normal tails.
ErrorRates analytic_rates_r1(std::size_t q, double ul, double delta);

}  // namespace spcecon
