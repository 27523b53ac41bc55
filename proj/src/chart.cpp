#include "chart.hpp"

#include <cmath>

namespace spcecon {

ChartState init_state(std::size_t q) {
  require(q >= 1, Errc::invalid_argument, "chart dimension must be >= 1");
  return ChartState{0, Vec(q, 0.0)};
}

ChartState update(const ChartState& state, const Vec& xbar, const Vec& mu0,
                  const Vec& weights) {
  const std::size_t q = state.z.size();
  require(xbar.size() == q && mu0.size() == q && weights.size() == q,
          Errc::invalid_argument, "chart update dimension mismatch");
  ChartState next;
  next.m = state.m + 1;
  next.z.resize(q);
  for (std::size_t i = 0; i < q; ++i) {
    const double r = weights[i];
    next.z[i] = r * (xbar[i] - mu0[i]) + (1.0 - r) * state.z[i];
  }
  return next;
}

Mat cov_z(const Vec& weights, std::uint64_t m, long n, const Mat& sigma) {
  require(m >= 1, Errc::invalid_argument, "chart covariance needs m >= 1");
  require(n >= 1, Errc::invalid_argument, "sample size must be >= 1");
  require(sigma.square() && sigma.rows() == weights.size(), Errc::invalid_argument,
          "covariance dimension mismatch");

  bool equal = true;
  for (double r : weights)
    if (r != weights.front()) equal = false;

  if (equal) {
    const double r = weights.front();
    const double factor =
        r * (1.0 - std::pow((1.0 - r) * (1.0 - r), double(m))) / (double(n) * (2.0 - r));
    return scaled(sigma, factor);
  }

  const std::size_t q = weights.size();
  const Mat sigma_xbar = scaled(sigma, 1.0 / double(n));
  Mat cov(q, q);
  for (std::uint64_t step = 1; step <= m; ++step) {
    Mat next(q, q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j)
        next(i, j) = weights[i] * sigma_xbar(i, j) * weights[j] +
                     (1.0 - weights[i]) * cov(i, j) * (1.0 - weights[j]);
    cov = next;
  }
  return cov;
}

double statistic(const ChartState& state, const Mat& cov) {
  require(state.m >= 1, Errc::invalid_argument, "statistic needs m >= 1");
  Cholesky chol(cov);
  return std::sqrt(chol.quad_inv(state.z));
}

ChartKernel::ChartKernel(const ProcessModel& p, const ChartDesign& d, CovMode mode)
    : mode_(mode), sigma_chol_(p.sigma) {
  validate(p);
  validate(d);
  require(d.weights.size() == p.q, Errc::invalid_argument,
          "design weights must match the process dimension");
  equal_ = has_equal_weights(d);
  n_ = d.n;
  ul2_ = d.ul * d.ul;
  z_.assign(p.q, 0.0);
  scratch_.assign(p.q, 0.0);
  weights_ = d.weights;
  if (equal_) {
    r_ = d.weights.front();
    omr_ = 1.0 - r_;
    omr2_ = omr_ * omr_;
    inv_base_ = double(n_) * (2.0 - r_) / r_;
  } else {
    sigma_over_n_ = scaled(p.sigma, 1.0 / double(n_));
    cov_ = Mat(p.q, p.q);
  }
  reset();
}

void ChartKernel::reset() {
  m_ = 0;
  p2m_ = 1.0;
  last_y2_ = 0.0;
  z_.assign(z_.size(), 0.0);
  if (!equal_) cov_ = Mat(z_.size(), z_.size());
}

bool ChartKernel::step(const Vec& deviation) {
  ++m_;
  const std::size_t q = z_.size();
  if (equal_) {
    for (std::size_t i = 0; i < q; ++i) z_[i] = r_ * deviation[i] + omr_ * z_[i];
    p2m_ *= omr2_;
    scratch_ = z_;
    sigma_chol_.solve_lower_inplace(scratch_);
    const double quad = dot(scratch_, scratch_);
    const double shrink = mode_ == CovMode::exact ? 1.0 - p2m_ : 1.0;
    last_y2_ = quad * inv_base_ / shrink;
  } else {
    for (std::size_t i = 0; i < q; ++i)
      z_[i] = weights_[i] * deviation[i] + (1.0 - weights_[i]) * z_[i];
    Mat next(q, q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j)
        next(i, j) = weights_[i] * sigma_over_n_(i, j) * weights_[j] +
                     (1.0 - weights_[i]) * cov_(i, j) * (1.0 - weights_[j]);
    cov_ = next;
    Cholesky chol(cov_);
    last_y2_ = chol.quad_inv(z_);
  }
  return last_y2_ > ul2_;
}

double ChartKernel::last_statistic() const { return std::sqrt(last_y2_); }

void ChartKernel::save(Snapshot& out) const {
  out.m = m_;
  out.p2m = p2m_;
  out.z = z_;
  if (!equal_) out.cov = cov_;
}

void ChartKernel::restore(const Snapshot& snap) {
  m_ = snap.m;
  p2m_ = snap.p2m;
  z_ = snap.z;
  if (!equal_) cov_ = snap.cov;
}

}  // namespace spcecon
