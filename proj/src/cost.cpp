#include "cost.hpp"

#include <cmath>

#include "dist.hpp"

namespace spcecon {

CycleConstants cycle_constants(double lambda, double h) {
  require(lambda > 0.0, Errc::invalid_argument, "lambda must be positive");
  require(h > 0.0, Errc::invalid_argument, "h must be positive");
  const double x = lambda * h;
  const double em = std::exp(-x);
  const double om = -std::expm1(-x);  // 1 - e^{-x}, stable for small x
  CycleConstants cc;
  cc.s = em / om;
  cc.tau = (om - x * em) / (lambda * om);
  return cc;
}

double pr_shift_interval(std::uint64_t m, double lambda, double h) {
  require(lambda > 0.0 && h > 0.0, Errc::invalid_argument, "lambda and h must be positive");
  const double x = lambda * h;
  // e^{-mx} - e^{-(m+1)x} = e^{-mx} (1 - e^{-x})
  return std::exp(-double(m) * x) * (-std::expm1(-x));
}

std::uint64_t truncation_k(double epsilon, double lambda, double h) {
  require(epsilon > 0.0 && epsilon < 1.0, Errc::invalid_argument,
          "epsilon must lie in (0, 1)");
  require(lambda > 0.0 && h > 0.0, Errc::invalid_argument, "lambda and h must be positive");
  const double bound = -std::log(epsilon) / (lambda * h);
  auto k = std::uint64_t(std::ceil(bound));
  if (double(k) < bound) ++k;  // guard against ceil rounding down at representation edges
  return k;
}

double lv_cost_independent(const ErrorRates& rates, const CostParams& costs,
                           const ChartDesign& design, double lambda) {
  require(rates.alpha > 0.0 && rates.alpha < 1.0, Errc::invalid_argument,
          "alpha must lie in (0, 1)");
  require(rates.beta >= 0.0 && rates.beta < 1.0, Errc::invalid_argument,
          "beta must lie in [0, 1)");
  const auto [s, tau] = cycle_constants(lambda, design.h);
  const double n = double(design.n);
  const double h = design.h;
  const double occupancy = h / (1.0 - rates.beta);

  const double num = costs.c0 / lambda +
                     costs.c1 * (-tau + n * costs.ts + occupancy +
                                 costs.gamma1 * costs.tl + costs.gamma2 * costs.tr) +
                     costs.cf * s * rates.alpha + costs.clr +
                     ((costs.a + costs.b * n) / h) *
                         (1.0 / lambda - tau + n * costs.ts + occupancy +
                          costs.gamma1 * costs.tl + costs.gamma2 * costs.tr);
  const double den = 1.0 / lambda + (1.0 - costs.gamma1) * s * rates.alpha * costs.tf -
                     tau + n * costs.ts + occupancy + costs.tl + costs.tr;
  return num / den;
}

double lv_cost_arl(double arl0, double arl1, const CostParams& costs,
                   const ChartDesign& design, double lambda) {
  require(arl0 > 1.0, Errc::invalid_argument, "arl0 must exceed 1");
  require(arl1 >= 1.0, Errc::invalid_argument, "arl1 must be >= 1");
  const auto [s, tau] = cycle_constants(lambda, design.h);
  const double n = double(design.n);
  const double h = design.h;
  const double occupancy = h * arl1;

  const double num = costs.c0 / lambda +
                     costs.c1 * (-tau + n * costs.ts + occupancy +
                                 costs.gamma1 * costs.tl + costs.gamma2 * costs.tr) +
                     costs.cf * s / arl0 + costs.clr +
                     ((costs.a + costs.b * n) / h) *
                         (1.0 / lambda - tau + n * costs.ts + occupancy +
                          costs.gamma1 * costs.tl + costs.gamma2 * costs.tr);
  const double den = 1.0 / lambda + (1.0 - costs.gamma1) * s * costs.tf / arl0 - tau +
                     n * costs.ts + occupancy + costs.tl + costs.tr;
  return num / den;
}

double modified_cost(double anfa, double aarl1, double arl0, const CostParams& costs,
                     const ChartDesign& design, double lambda, SearchTimeMode mode) {
  require(anfa >= 0.0, Errc::invalid_argument, "anfa must be non-negative");
  require(aarl1 >= 1.0, Errc::invalid_argument, "aarl1 must be >= 1");
  require(arl0 > 1.0, Errc::invalid_argument, "arl0 must exceed 1");
  const auto [s, tau] = cycle_constants(lambda, design.h);
  const double n = double(design.n);
  const double h = design.h;
  const double occupancy = h * aarl1;

  const double num = costs.c0 / lambda +
                     costs.c1 * (-tau + n * costs.ts + occupancy +
                                 costs.gamma1 * costs.tl + costs.gamma2 * costs.tr) +
                     costs.cf * anfa + costs.clr +
                     ((costs.a + costs.b * n) / h) *
                         (1.0 / lambda - tau + n * costs.ts + occupancy +
                          costs.gamma1 * costs.tl + costs.gamma2 * costs.tr);
  const double false_alarm_time = mode == SearchTimeMode::arl0_rate
                                      ? (1.0 - costs.gamma1) * s * costs.tf / arl0
                                      : (1.0 - costs.gamma1) * anfa * costs.tf;
  const double den = 1.0 / lambda + false_alarm_time - tau + n * costs.ts + occupancy +
                     costs.tl + costs.tr;
  return num / den;
}

ErrorRates analytic_rates_r1(std::size_t q, double ul, double delta) {
  require(q >= 1, Errc::invalid_argument, "dimension must be >= 1");
  require(ul > 0.0, Errc::invalid_argument, "control limit must be positive");
  require(delta >= 0.0, Errc::invalid_argument, "delta must be non-negative");
  ErrorRates rates;
  if (q == 1) {
    rates.alpha = 2.0 * normal_sf(ul);
    rates.beta = normal_cdf(ul - delta) - normal_cdf(-ul - delta);
  } else {
    rates.alpha = chi2_sf(double(q), ul * ul);
    rates.beta = noncentral_chi2_cdf(double(q), delta * delta, ul * ul);
  }
  return rates;
}

}  // namespace spcecon
