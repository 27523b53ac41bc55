#include "model.hpp"

#include <cmath>
#include <sstream>

namespace spcecon {

void validate(const ProcessModel& p) {
  require(p.q >= 1, Errc::invalid_argument, "process dimension must be >= 1");
  require(p.mu0.size() == p.q && p.mu1.size() == p.q, Errc::invalid_argument,
          "mean vectors must have length q");
  require(p.sigma.rows() == p.q && p.sigma.cols() == p.q, Errc::invalid_argument,
          "covariance must be q x q");
  require(is_symmetric(p.sigma), Errc::invalid_argument, "covariance must be symmetric");
  require(p.lambda > 0.0, Errc::invalid_argument, "failure rate lambda must be positive");
  Cholesky check(p.sigma);  // throws if not positive definite
}

void validate(const CostParams& c) {
  const double fields[] = {c.c0, c.c1, c.cf, c.clr, c.a, c.b, c.ts, c.tl, c.tr, c.tf};
  for (double f : fields)
    require(f >= 0.0, Errc::invalid_argument, "cost and time parameters must be non-negative");
  require(c.gamma1 == 0 || c.gamma1 == 1, Errc::invalid_argument, "gamma1 must be 0 or 1");
  require(c.gamma2 == 0 || c.gamma2 == 1, Errc::invalid_argument, "gamma2 must be 0 or 1");
}

void validate(const ChartDesign& d) {
  require(d.n >= 1, Errc::invalid_argument, "sample size must be >= 1");
  require(d.h > 0.0, Errc::invalid_argument, "sampling interval must be positive");
  require(d.ul > 0.0, Errc::invalid_argument, "control limit must be positive");
  require(!d.weights.empty(), Errc::invalid_argument, "at least one exponential weight");
  for (double r : d.weights)
    require(r > 0.0 && r <= 1.0, Errc::invalid_argument, "weights must lie in (0, 1]");
}

bool has_equal_weights(const ChartDesign& d) {
  for (double r : d.weights)
    if (r != d.weights.front()) return false;
  return true;
}

void validate(const Instance& inst) {
  validate(inst.process);
  validate(inst.costs);
  validate(inst.design);
  require(inst.process.q == inst.design.weights.size(), Errc::invalid_argument,
          "design weights must match the process dimension");
  require(inst.delta > 0.0, Errc::invalid_argument, "delta must be positive");
  const double implied = noncentrality(inst.process, inst.design.n);
  require(std::fabs(implied - inst.delta) <= 1e-9 * std::fabs(inst.delta),
          Errc::invalid_argument, "delta is inconsistent with process and sample size");
}

double noncentrality(const ProcessModel& p, long n) {
  require(n >= 1, Errc::invalid_argument, "sample size must be >= 1");
  Vec diff(p.q);
  for (std::size_t i = 0; i < p.q; ++i) diff[i] = p.mu1[i] - p.mu0[i];
  Cholesky chol(p.sigma);
  return std::sqrt(double(n) * chol.quad_inv(diff));
}

Vec shift_for_delta(const ProcessModel& p, double delta, long n, const Vec& direction) {
  require(delta >= 0.0, Errc::invalid_argument, "delta must be non-negative");
  require(direction.size() == p.q, Errc::invalid_argument, "direction must have length q");
  double norm2 = 0.0;
  for (double d : direction) norm2 += d * d;
  require(norm2 > 0.0, Errc::invalid_argument, "shift direction must be nonzero");
  Cholesky chol(p.sigma);
  const double quad = chol.quad_inv(direction);  // direction' Sigma^{-1} direction
  const double c = delta / std::sqrt(double(n) * quad);
  Vec mu1(p.q);
  for (std::size_t i = 0; i < p.q; ++i) mu1[i] = p.mu0[i] + c * direction[i];
  return mu1;
}

namespace {

struct Scenario {
  double a, b, cf, clr, c0, c1, ts, tl_plus_tr, lambda, delta;
};

// Benchmark scenarios 1..18; scenario i backs instances Ui and Mi.
constexpr Scenario kScenarios[18] = {
    {0.5, 0.1, 50, 25, 100, 250, 0.05, 2, 0.01, 0.5},
    {0.5, 0.1, 50, 25, 200, 500, 0.5, 20, 0.05, 0.5},
    {0.5, 0.1, 500, 250, 100, 250, 0.5, 20, 0.01, 2},
    {0.5, 0.1, 500, 250, 200, 500, 0.05, 2, 0.05, 2},
    {0.5, 1, 50, 25, 100, 250, 0.5, 2, 0.05, 2},
    {0.5, 1, 50, 25, 200, 500, 0.05, 20, 0.01, 2},
    {0.5, 1, 500, 250, 100, 250, 0.05, 20, 0.05, 0.5},
    {0.5, 1, 500, 250, 200, 500, 0.5, 2, 0.01, 0.5},
    {5, 0.1, 50, 25, 100, 250, 0.05, 20, 0.05, 2},
    {5, 0.1, 50, 25, 200, 500, 0.5, 2, 0.01, 2},
    {5, 0.1, 500, 250, 100, 250, 0.5, 2, 0.05, 0.5},
    {5, 0.1, 500, 250, 200, 500, 0.05, 20, 0.01, 0.5},
    {5, 1, 50, 25, 100, 250, 0.5, 20, 0.01, 0.5},
    {5, 1, 50, 25, 200, 500, 0.05, 2, 0.05, 0.5},
    {5, 1, 500, 250, 100, 250, 0.05, 2, 0.01, 2},
    {5, 1, 500, 250, 200, 500, 0.5, 20, 0.05, 2},
    {0.5, 0.1, 50, 25, 10, 100, 0.05, 4, 0.01, 0.5},
    {0.5, 0.1, 50, 25, 10, 100, 0.05, 4, 0.01, 2},
};

constexpr double kDefaultWeight = 0.1;

Mat trivariate_sigma() {
  Mat s(3, 3);
  s(0, 0) = 2;
  s(0, 1) = 1;
  s(0, 2) = 1;
  s(1, 0) = 1;
  s(1, 1) = 3;
  s(1, 2) = 1;
  s(2, 0) = 1;
  s(2, 1) = 1;
  s(2, 2) = 3;
  return s;
}

Instance build_instance(const std::string& id, bool multivariate, int index) {
  const Scenario& sc = kScenarios[index];
  Instance inst;
  inst.id = id;
  inst.delta = sc.delta;

  ProcessModel& p = inst.process;
  p.lambda = sc.lambda;
  if (multivariate) {
    p.q = 3;
    p.mu0 = Vec(3, 0.0);
    p.sigma = trivariate_sigma();
    p.mu1 = shift_for_delta(p, sc.delta, 1, Vec{1.0, 1.0, 1.0});
  } else {
    p.q = 1;
    p.mu0 = Vec{0.0};
    p.sigma = Mat(1, 1, 1.0);
    p.mu1 = Vec{sc.delta};
  }

  CostParams& c = inst.costs;
  c.a = sc.a;
  c.b = sc.b;
  c.cf = sc.cf;
  c.clr = sc.clr;
  c.c0 = sc.c0;
  c.c1 = sc.c1;
  c.ts = sc.ts;
  // Only the sum of the locate and repair times is specified; with
  // gamma1 = gamma2 = 0 the split never enters any formula, so the whole
  // sum is carried as the locate time.
  c.tl = sc.tl_plus_tr;
  c.tr = 0.0;
  c.tf = 0.0;
  c.gamma1 = 0;
  c.gamma2 = 0;

  ChartDesign& d = inst.design;
  d.n = 1;
  d.h = 1.5;
  d.ul = std::sqrt(10.5);
  d.weights = Vec(p.q, kDefaultWeight);

  return inst;
}

}  // namespace

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  ids.reserve(36);
  for (int i = 1; i <= 18; ++i) ids.push_back("U" + std::to_string(i));
  for (int i = 1; i <= 18; ++i) ids.push_back("M" + std::to_string(i));
  return ids;
}

Instance load_instance(const std::string& id) {
  bool multivariate = false;
  if (!id.empty() && (id[0] == 'U' || id[0] == 'M')) {
    multivariate = id[0] == 'M';
    int index = 0;
    std::istringstream in(id.substr(1));
    if (in >> index && in.eof() && index >= 1 && index <= 18) {
      return build_instance(id, multivariate, index - 1);
    }
  }
  fail(Errc::unknown_instance,
       "unknown instance id '" + id + "' (valid ids: U1..U18, M1..M18)");
}

ChartDesign design_with_weight(const ChartDesign& d, double r) {
  ChartDesign out = d;
  out.weights.assign(d.weights.size(), r);
  return out;
}

Instance with_weight(const Instance& inst, double r) {
  Instance out = inst;
  out.design = design_with_weight(inst.design, r);
  return out;
}

}  // namespace spcecon
