#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace spcecon {

// The monitored process: q characteristics, in/out-of-control means,
// covariance, and the exponential failure rate.
struct ProcessModel {
  std::size_t q = 0;
  Vec mu0;
  Vec mu1;
  Mat sigma;
  double lambda = 0.0;  // per time unit
};

void validate(const ProcessModel& p);

// Economic parameters of a quality-control cycle.
struct CostParams {
  double c0 = 0.0;   // production cost per time unit, in control
  double c1 = 0.0;   // production cost per time unit, out of control
  double cf = 0.0;   // cost per false alarm
  double clr = 0.0;  // cost of locating and repairing the cause
  double a = 0.0;    // fixed sampling cost
  double b = 0.0;    // variable sampling cost per unit
  double ts = 0.0;   // time to sample and chart one item
  double tl = 0.0;   // time to locate the cause
  double tr = 0.0;   // time to repair
  double tf = 0.0;   // search time per false alarm
  int gamma1 = 0;    // 1 if production continues during the search
  int gamma2 = 0;    // 1 if production continues during the repair
};

void validate(const CostParams& c);

// Designable chart parameters.
struct ChartDesign {
  long n = 1;        // sample size
  double h = 1.0;    // sampling interval
  double ul = 1.0;   // control limit
  Vec weights;       // exponential weights, one per characteristic, each in (0,1]
};

void validate(const ChartDesign& d);
bool has_equal_weights(const ChartDesign& d);

struct Instance {
  std::string id;
  ProcessModel process;
  CostParams costs;
  ChartDesign design;
  double delta = 0.0;  // non-centrality implied by process and design.n
};

void validate(const Instance& inst);

// delta = sqrt(n * (mu1 - mu0)' Sigma^{-1} (mu1 - mu0))
double noncentrality(const ProcessModel& p, long n);

// mu1 = mu0 + c * direction with c >= 0 chosen so the non-centrality equals delta.
Vec shift_for_delta(const ProcessModel& p, double delta, long n, const Vec& direction);

// Built-in benchmark catalog (U1..U18 univariate, M1..M18 trivariate).
std::vector<std::string> catalog_ids();
Instance load_instance(const std::string& id);

// Copy of an instance with every exponential weight set to r.
Instance with_weight(const Instance& inst, double r);
ChartDesign design_with_weight(const ChartDesign& d, double r);

}  // namespace spcecon
