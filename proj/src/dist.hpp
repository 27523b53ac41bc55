#pragma once

#include <cstddef>

namespace spcecon {

double normal_cdf(double x);
double normal_sf(double x);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Central chi-square with dof degrees of freedom.
double chi2_cdf(double dof, double x);
double chi2_sf(double dof, double x);

// Noncentral chi-square CDF via the Poisson mixture of central laws.
double noncentral_chi2_cdf(double dof, double noncentrality, double x);

}  // namespace spcecon
