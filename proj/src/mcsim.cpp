#include "mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "cost.hpp"

namespace spcecon {

namespace {

// Runs are grouped into fixed-size blocks that do not depend on the worker
// count; block partials are merged in block order, so the reduction is
// bit-identical for any scheduling.
constexpr std::uint64_t kBlockSize = 1024;

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

template <class Acc, class Worker>
std::vector<Acc> run_blocked(std::uint64_t n_runs, std::uint64_t seed, int workers,
                             const Worker& prototype) {
  const std::uint64_t n_blocks = (n_runs + kBlockSize - 1) / kBlockSize;
  std::vector<Acc> blocks(n_blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto body = [&](Worker wk) {
    try {
      for (;;) {
        const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= n_blocks) break;
        Acc acc = wk.make_acc();
        const std::uint64_t lo = b * kBlockSize;
        const std::uint64_t hi = std::min(n_runs, lo + kBlockSize);
        for (std::uint64_t run = lo; run < hi; ++run) {
          Rng rng(seed, run);
          wk.run(rng, acc);
        }
        blocks[b] = std::move(acc);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  const int w = int(std::min<std::uint64_t>(std::uint64_t(resolve_workers(workers)),
                                            std::max<std::uint64_t>(n_blocks, 1)));
  if (w <= 1) {
    body(prototype);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(std::size_t(w));
    for (int i = 0; i < w; ++i) threads.emplace_back(body, prototype);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return blocks;
}

// Draws deviation vectors (xbar - mu0) through the Cholesky factor of
// Sigma/n; the shift is added for out-of-control samples.
struct DeviationSampler {
  std::size_t q = 0;
  Mat l;      // chol(Sigma) lower, scaled by 1/sqrt(n)
  Vec shift;  // mu1 - mu0

  DeviationSampler(const ProcessModel& p, long n) : q(p.q), shift(p.q) {
    Cholesky chol(p.sigma);
    l = chol.lower();
    const double inv_sqrt_n = 1.0 / std::sqrt(double(n));
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j <= i; ++j) l(i, j) *= inv_sqrt_n;
    for (std::size_t i = 0; i < q; ++i) shift[i] = p.mu1[i] - p.mu0[i];
  }

  void draw(bool in_control, Rng& rng, Vec& eps, Vec& out) const {
    for (std::size_t i = 0; i < q; ++i) eps[i] = rng.normal();
    for (std::size_t i = 0; i < q; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= i; ++j) s += l(i, j) * eps[j];
      out[i] = in_control ? s : s + shift[i];
    }
  }
};

struct CycleEvents {
  double shift_time = 0.0;
  std::uint64_t signal_index = 0;
  std::uint64_t n_false_alarms = 0;
};

// Monitoring phase: fresh chart, failure epoch from Exponential(lambda),
// samples until the first signal at an out-of-control epoch. In-control
// signals count as false alarms and the chart keeps its memory.
CycleEvents run_monitoring(ChartKernel& kernel, const DeviationSampler& sampler,
                           double lambda, double h, std::uint64_t run_cap, Rng& rng,
                           Vec& eps, Vec& dev) {
  kernel.reset();
  const double shift_time = rng.exponential(lambda);
  std::uint64_t n_fa = 0;
  for (;;) {
    const std::uint64_t m = kernel.index() + 1;
    const bool in_control = double(m) * h < shift_time;
    sampler.draw(in_control, rng, eps, dev);
    if (kernel.step(dev)) {
      if (in_control) {
        ++n_fa;
      } else {
        return CycleEvents{shift_time, m, n_fa};
      }
    }
    if (m >= run_cap) {
      fail(Errc::run_cap_exceeded,
           "monitoring run exceeded the sample cap; check the control limit "
           "against the shift magnitude");
    }
  }
}

struct CycleWorker {
  ChartKernel kernel;
  DeviationSampler sampler;
  ChartDesign design;
  CostParams costs;
  double lambda;
  std::uint64_t run_cap;
  Vec eps, dev;

  BiMoments make_acc() const { return {}; }

  void run(Rng& rng, BiMoments& acc) {
    const CycleEvents ev =
        run_monitoring(kernel, sampler, lambda, design.h, run_cap, rng, eps, dev);
    const CycleOutcome oc =
        assemble_cycle(ev.shift_time, ev.signal_index, ev.n_false_alarms, design, costs);
    acc.add(oc.cc, oc.ct);
  }
};

struct Arl0Worker {
  ChartKernel kernel;
  DeviationSampler sampler;
  std::uint64_t run_cap;
  Vec eps, dev;

  Moments make_acc() const { return {}; }

  void run(Rng& rng, Moments& acc) {
    kernel.reset();
    for (;;) {
      sampler.draw(true, rng, eps, dev);
      if (kernel.step(dev)) break;
      if (kernel.index() >= run_cap)
        fail(Errc::run_cap_exceeded, "in-control run exceeded the sample cap");
    }
    acc.add(double(kernel.index()));
  }
};

struct Arl1Worker {
  ChartKernel kernel;
  DeviationSampler sampler;
  std::uint64_t warmup_m;
  std::uint64_t run_cap;
  Vec eps, dev;

  Moments make_acc() const { return {}; }

  void run(Rng& rng, Moments& acc) {
    kernel.reset();
    for (std::uint64_t j = 0; j < warmup_m; ++j) {
      sampler.draw(true, rng, eps, dev);
      kernel.step(dev);  // warm-up signals are ignored, consistent with no reset
    }
    for (;;) {
      sampler.draw(false, rng, eps, dev);
      if (kernel.step(dev)) break;
      if (kernel.index() - warmup_m >= run_cap)
        fail(Errc::run_cap_exceeded, "out-of-control run exceeded the sample cap");
    }
    acc.add(double(kernel.index() - warmup_m));
  }
};

struct AnfaWorker {
  ChartKernel kernel;
  DeviationSampler sampler;
  double lambda;
  double h;
  std::uint64_t run_cap;
  Vec eps, dev;

  Moments make_acc() const { return {}; }

  void run(Rng& rng, Moments& acc) {
    const CycleEvents ev = run_monitoring(kernel, sampler, lambda, h, run_cap, rng, eps, dev);
    acc.add(double(ev.n_false_alarms));
  }
};

struct ProfileAcc {
  std::vector<Moments> per_m;
  Moments weighted;

  void merge(const ProfileAcc& o) {
    if (o.per_m.empty()) return;
    if (per_m.empty()) {
      *this = o;
      return;
    }
    for (std::size_t i = 0; i < per_m.size(); ++i) per_m[i].merge(o.per_m[i]);
    weighted.merge(o.weighted);
  }
};

// One run shares a single in-control warm-up trajectory across every retained
// warm-up length m: the chart position after m samples is saved, and each m
// branches its own out-of-control continuation. Estimates per m stay unbiased
// with independent runs, and the weighted-average standard error is taken
// across per-run weighted sums, which absorbs the within-run correlation.
struct ProfileWorker {
  ChartKernel kernel;
  DeviationSampler sampler;
  std::uint64_t k;
  std::uint64_t first_m;
  std::vector<double> norm_weights;
  std::uint64_t run_cap;
  Vec eps, dev;
  std::vector<ChartKernel::Snapshot> states;

  ProfileAcc make_acc() const {
    ProfileAcc acc;
    acc.per_m.resize(norm_weights.size());
    return acc;
  }

  void run(Rng& rng, ProfileAcc& acc) {
    kernel.reset();
    kernel.save(states[0]);
    for (std::uint64_t j = 1; j <= k; ++j) {
      sampler.draw(true, rng, eps, dev);
      kernel.step(dev);  // warm-up signals are ignored
      kernel.save(states[j]);
    }
    std::uint64_t total = k;
    double weighted_sum = 0.0;
    for (std::size_t mi = 0; mi < norm_weights.size(); ++mi) {
      kernel.restore(states[first_m + mi]);
      std::uint64_t rl = 0;
      for (;;) {
        sampler.draw(false, rng, eps, dev);
        ++rl;
        ++total;
        if (kernel.step(dev)) break;
        if (total >= run_cap)
          fail(Errc::run_cap_exceeded, "profile run exceeded the sample cap");
      }
      acc.per_m[mi].add(double(rl));
      weighted_sum += norm_weights[mi] * double(rl);
    }
    acc.weighted.add(weighted_sum);
  }
};

void check_pair(const ChartDesign& d, const ProcessModel& p) {
  validate(p);
  validate(d);
  require(d.weights.size() == p.q, Errc::invalid_argument,
          "design weights must match the process dimension");
}

}  // namespace

Vec sample_mean(const ProcessModel& p, long n, bool in_control, Rng& rng) {
  validate(p);
  require(n >= 1, Errc::invalid_argument, "sample size must be >= 1");
  DeviationSampler sampler(p, n);
  Vec eps(p.q), dev(p.q);
  sampler.draw(in_control, rng, eps, dev);
  // the sampler draws xbar - mu0, with the shift folded in for out-of-control
  Vec out(p.q);
  for (std::size_t i = 0; i < p.q; ++i) out[i] = p.mu0[i] + dev[i];
  return out;
}

CycleOutcome assemble_cycle(double shift_time, std::uint64_t signal_index,
                            std::uint64_t n_false_alarms, const ChartDesign& d,
                            const CostParams& c) {
  require(double(signal_index) * d.h >= shift_time, Errc::invalid_argument,
          "signal epoch precedes the failure epoch");
  const double mh = double(signal_index) * d.h;
  const double n = double(d.n);
  CycleOutcome oc;
  oc.shift_time = shift_time;
  oc.signal_epoch_index = signal_index;
  oc.n_false_alarms = n_false_alarms;
  oc.n_samples = signal_index;
  oc.ct = mh + n * c.ts + (1.0 - c.gamma1) * double(n_false_alarms) * c.tf + c.tl + c.tr;
  oc.cc = c.c0 * shift_time +
          c.c1 * (mh - shift_time + n * c.ts + c.gamma1 * c.tl + c.gamma2 * c.tr) +
          c.cf * double(n_false_alarms) + c.clr +
          (c.a + c.b * n) *
              (double(signal_index) + (c.gamma1 * c.tl + c.gamma2 * c.tr) / d.h);
  return oc;
}

CycleOutcome simulate_cycle(const ChartDesign& d, const ProcessModel& p,
                            const CostParams& c, Rng& rng) {
  check_pair(d, p);
  validate(c);
  ChartKernel kernel(p, d);
  DeviationSampler sampler(p, d.n);
  Vec eps(p.q), dev(p.q);
  const CycleEvents ev =
      run_monitoring(kernel, sampler, p.lambda, d.h, 10'000'000, rng, eps, dev);
  return assemble_cycle(ev.shift_time, ev.signal_index, ev.n_false_alarms, d, c);
}

Estimate estimate_f(const ChartDesign& d, const ProcessModel& p, const CostParams& c,
                    std::uint64_t n_cycles, const SimConfig& cfg) {
  check_pair(d, p);
  validate(c);
  require(n_cycles >= 1, Errc::invalid_argument, "cycle budget must be >= 1");
  CycleWorker proto{ChartKernel(p, d, cfg.cov_mode), DeviationSampler(p, d.n),
                    d,       c,
                    p.lambda, cfg.run_cap,
                    Vec(p.q), Vec(p.q)};
  auto blocks = run_blocked<BiMoments>(n_cycles, cfg.seed, cfg.workers, proto);
  if (cfg.se_method == SeMethod::batch_means) return ratio_estimate_batch(blocks);
  BiMoments all;
  for (const auto& b : blocks) all.merge(b);
  return ratio_estimate(all);
}

Estimate estimate_arl0(const ChartDesign& d, const ProcessModel& p,
                       std::uint64_t n_runs, const SimConfig& cfg) {
  check_pair(d, p);
  require(n_runs >= 1, Errc::invalid_argument, "run budget must be >= 1");
  Arl0Worker proto{ChartKernel(p, d, cfg.cov_mode), DeviationSampler(p, d.n),
                   cfg.run_cap, Vec(p.q), Vec(p.q)};
  auto blocks = run_blocked<Moments>(n_runs, cfg.seed, cfg.workers, proto);
  Moments all;
  for (const auto& b : blocks) all.merge(b);
  return mean_estimate(all);
}

Estimate estimate_arl1_conditional(const ChartDesign& d, const ProcessModel& p,
                                   std::uint64_t warmup_m, std::uint64_t n_runs,
                                   const SimConfig& cfg) {
  check_pair(d, p);
  require(n_runs >= 1, Errc::invalid_argument, "run budget must be >= 1");
  Arl1Worker proto{ChartKernel(p, d, cfg.cov_mode), DeviationSampler(p, d.n),
                   warmup_m, cfg.run_cap, Vec(p.q), Vec(p.q)};
  auto blocks = run_blocked<Moments>(n_runs, cfg.seed, cfg.workers, proto);
  Moments all;
  for (const auto& b : blocks) all.merge(b);
  return mean_estimate(all);
}

Estimate estimate_anfa(const ChartDesign& d, const ProcessModel& p, double lambda,
                       std::uint64_t n_runs, const SimConfig& cfg) {
  check_pair(d, p);
  require(lambda > 0.0, Errc::invalid_argument, "lambda must be positive");
  require(n_runs >= 1, Errc::invalid_argument, "run budget must be >= 1");
  AnfaWorker proto{ChartKernel(p, d, cfg.cov_mode), DeviationSampler(p, d.n),
                   lambda, d.h, cfg.run_cap, Vec(p.q), Vec(p.q)};
  auto blocks = run_blocked<Moments>(n_runs, cfg.seed, cfg.workers, proto);
  Moments all;
  for (const auto& b : blocks) all.merge(b);
  return mean_estimate(all);
}

ArlProfile estimate_aarl1(const ChartDesign& d, const ProcessModel& p, double lambda,
                          double epsilon, std::uint64_t n_runs_per_m,
                          const SimConfig& cfg, ShiftIndexBase base) {
  check_pair(d, p);
  require(lambda > 0.0, Errc::invalid_argument, "lambda must be positive");
  require(epsilon > 0.0 && epsilon < 1.0, Errc::invalid_argument,
          "epsilon must lie in (0, 1)");
  require(n_runs_per_m >= 1, Errc::invalid_argument, "run budget must be >= 1");

  ArlProfile profile;
  profile.epsilon = epsilon;
  profile.base = base;
  profile.k = truncation_k(epsilon, lambda, d.h);
  const std::uint64_t first_m = base == ShiftIndexBase::from_zero ? 0 : 1;
  require(profile.k >= first_m, Errc::invalid_argument, "truncation produced no terms");

  double total_weight = 0.0;
  for (std::uint64_t m = first_m; m <= profile.k; ++m) {
    const double w = pr_shift_interval(m, lambda, d.h);
    profile.m_index.push_back(m);
    profile.weights.push_back(w);
    total_weight += w;
  }
  std::vector<double> norm_weights = profile.weights;
  for (double& w : norm_weights) w /= total_weight;

  ProfileWorker proto{ChartKernel(p, d, cfg.cov_mode),
                      DeviationSampler(p, d.n),
                      profile.k,
                      first_m,
                      std::move(norm_weights),
                      cfg.run_cap,
                      Vec(p.q),
                      Vec(p.q),
                      std::vector<ChartKernel::Snapshot>(profile.k + 1)};
  auto blocks = run_blocked<ProfileAcc>(n_runs_per_m, cfg.seed, cfg.workers, proto);
  ProfileAcc all;
  for (const auto& b : blocks) all.merge(b);

  profile.arl1_m.reserve(all.per_m.size());
  for (const auto& m : all.per_m) profile.arl1_m.push_back(mean_estimate(m));
  profile.aarl1 = mean_estimate(all.weighted);

  SimConfig sub = cfg;
  sub.seed = derive_seed(cfg.seed, "profile:arl0");
  profile.arl0 = estimate_arl0(d, p, n_runs_per_m, sub);
  sub.seed = derive_seed(cfg.seed, "profile:anfa");
  profile.anfa = estimate_anfa(d, p, lambda, n_runs_per_m, sub);
  return profile;
}

}  // namespace spcecon
