#pragma once

#include <cstdint>

#include "model.hpp"

namespace spcecon {

// Exponentially weighted state of the chart after m samples.
struct ChartState {
  std::uint64_t m = 0;
  Vec z;
};

ChartState init_state(std::size_t q);

// One recursion step in deviation form: z' = R (xbar - mu0) + (I - R) z.
ChartState update(const ChartState& state, const Vec& xbar, const Vec& mu0,
                  const Vec& weights);

// Covariance of the chart vector after m >= 1 samples. With equal weights this
// is the closed form {r [1 - (1-r)^{2m}] / (n (2-r))} Sigma; with unequal
// weights the exact recursion R (Sigma/n) R + (I-R) Cov_{m-1} (I-R).
Mat cov_z(const Vec& weights, std::uint64_t m, long n, const Mat& sigma);

// Y = sqrt(z' cov^{-1} z)
double statistic(const ChartState& state, const Mat& cov);

// Strict exceedance test.
inline bool signals(double y, double ul) { return y > ul; }

enum class CovMode {
  exact,       // m-dependent covariance
  asymptotic,  // steady-state covariance, exposed for sensitivity studies only
};

// Streaming chart evaluator bound to one (process, design) pair. Consumes
// deviation vectors (xbar - mu0) and answers the signal test per sample.
// The simulation loops depend only on reset()/step()/index(), so a different
// chart family can slot in behind the same calls.
class ChartKernel {
public:
  ChartKernel(const ProcessModel& p, const ChartDesign& d, CovMode mode = CovMode::exact);

  void reset();

  // Advance one sample; returns true when the statistic exceeds the limit.
  bool step(const Vec& deviation);

  std::uint64_t index() const { return m_; }
  double last_statistic() const;
  const Vec& z() const { return z_; }
  std::size_t dim() const { return z_.size(); }

  // Saved monitoring position, used to branch run continuations off a shared
  // warm-up trajectory.
  struct Snapshot {
    std::uint64_t m = 0;
    double p2m = 1.0;
    Vec z;
    Mat cov;  // unequal-weight path only
  };
  void save(Snapshot& out) const;
  void restore(const Snapshot& snap);

private:
  bool equal_ = true;
  CovMode mode_ = CovMode::exact;
  long n_ = 1;
  double r_ = 1.0;
  double omr_ = 0.0;        // 1 - r
  double omr2_ = 0.0;       // (1 - r)^2
  double inv_base_ = 1.0;   // n (2 - r) / r
  double ul2_ = 0.0;
  double p2m_ = 1.0;        // (1 - r)^{2m}
  double last_y2_ = 0.0;
  std::uint64_t m_ = 0;
  Vec z_;
  Vec scratch_;
  Cholesky sigma_chol_;
  // unequal-weight path
  Vec weights_;
  Mat sigma_over_n_;
  Mat cov_;
};

}  // namespace spcecon
