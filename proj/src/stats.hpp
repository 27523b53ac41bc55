#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace spcecon {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_runs = 0;
};

// Mergeable running mean/variance (Welford with Chan's combine step).
// Merging in a fixed block order keeps parallel reductions bit-stable.
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / double(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double d = o.mean - mean;
    const std::uint64_t nn = n + o.n;
    m2 += o.m2 + d * d * (double(n) * double(o.n) / double(nn));
    mean += d * double(o.n) / double(nn);
    n = nn;
  }

  double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
  double std_error_of_mean() const { return n > 1 ? std::sqrt(variance() / double(n)) : 0.0; }
};

// Paired accumulator for (cost, time) cycles; tracks the covariance needed
// by the delta-method standard error of the ratio estimator.
struct BiMoments {
  std::uint64_t n = 0;
  double mean_x = 0.0, mean_y = 0.0;
  double m2x = 0.0, m2y = 0.0, cxy = 0.0;

  void add(double x, double y) {
    ++n;
    const double dx = x - mean_x;
    const double dy = y - mean_y;
    mean_x += dx / double(n);
    mean_y += dy / double(n);
    m2x += dx * (x - mean_x);
    m2y += dy * (y - mean_y);
    cxy += dx * (y - mean_y);
  }

  void merge(const BiMoments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double dx = o.mean_x - mean_x;
    const double dy = o.mean_y - mean_y;
    const std::uint64_t nn = n + o.n;
    const double w = double(n) * double(o.n) / double(nn);
    m2x += o.m2x + dx * dx * w;
    m2y += o.m2y + dy * dy * w;
    cxy += o.cxy + dx * dy * w;
    mean_x += dx * double(o.n) / double(nn);
    mean_y += dy * double(o.n) / double(nn);
    n = nn;
  }

  double var_x() const { return n > 1 ? m2x / double(n - 1) : 0.0; }
  double var_y() const { return n > 1 ? m2y / double(n - 1) : 0.0; }
  double cov_xy() const { return n > 1 ? cxy / double(n - 1) : 0.0; }
  double sum_x() const { return mean_x * double(n); }
  double sum_y() const { return mean_y * double(n); }
};

inline Estimate mean_estimate(const Moments& m) {
  return Estimate{m.mean, m.std_error_of_mean(), m.n};
}

// Ratio sum(x)/sum(y) with a delta-method standard error.
inline Estimate ratio_estimate(const BiMoments& b) {
  Estimate e;
  e.n_runs = b.n;
  if (b.n == 0) return e;
  const double f = b.sum_x() / b.sum_y();
  e.value = f;
  if (b.n > 1) {
    const double var =
        (b.var_x() - 2.0 * f * b.cov_xy() + f * f * b.var_y()) / (b.mean_y * b.mean_y);
    e.std_error = var > 0.0 ? std::sqrt(var / double(b.n)) : 0.0;
  }
  return e;
}

// Batch-means cross-check: one ratio per block, spread of the block ratios.
inline Estimate ratio_estimate_batch(const std::vector<BiMoments>& blocks) {
  BiMoments all;
  Moments per_block;
  for (const auto& b : blocks) {
    all.merge(b);
    if (b.n > 0) per_block.add(b.sum_x() / b.sum_y());
  }
  Estimate e;
  e.n_runs = all.n;
  if (all.n == 0) return e;
  e.value = all.sum_x() / all.sum_y();
  e.std_error = per_block.n > 1 ? per_block.std_error_of_mean() : 0.0;
  return e;
}

}  // namespace spcecon
