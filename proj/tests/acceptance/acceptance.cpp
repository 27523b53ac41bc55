// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "cost.hpp"
#include "design.hpp"
#include "io.hpp"

using namespace spcecon;

namespace {

using steady = std::chrono::steady_clock;

double seconds_since(steady::time_point t0) {
  return std::chrono::duration<double>(steady::now() - t0).count();
}

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void note(const std::string& text) {
  std::printf("       %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

struct Shared {
  std::uint64_t seed = 20250808;
  int workers = 0;
  std::vector<Instance> catalog;
  std::map<std::string, double> exact;                          // id -> exact value at r=1
  std::map<std::string, std::map<double, Estimate>> f_large;    // id -> r -> 1e5-cycle cost
  std::map<std::string, Estimate> f_small_r005;                 // id -> 1e4-cycle cost at r=0.05
  std::map<std::string, std::map<double, double>> f_lv;         // id -> r -> formula value
  std::map<std::string, std::map<double, double>> pct_dif;      // id -> r -> percent
  std::map<std::string, std::map<double, double>> pct_dif_se;   // propagated standard error
  double r1_wall_seconds = 0.0;
};

SimConfig sim_cfg(const Shared& sh, const std::string& tag) {
  SimConfig cfg;
  cfg.seed = derive_seed(sh.seed, tag);
  cfg.workers = sh.workers;
  return cfg;
}

void compute_shared(Shared& sh) {
  for (const auto& id : catalog_ids()) sh.catalog.push_back(load_instance(id));

  // reference simulation estimates at the three weights the criteria compare
  const double r_values[] = {0.05, 0.4, 1.0};
  const auto t_r1 = steady::now();
  for (const auto& inst : sh.catalog) {
    const ChartDesign d1 = design_with_weight(inst.design, 1.0);
    const ErrorRates rates = analytic_rates_r1(inst.process.q, d1.ul, inst.delta);
    sh.exact[inst.id] = lv_cost_independent(rates, inst.costs, d1, inst.process.lambda);
    sh.f_large[inst.id][1.0] =
        estimate_f(d1, inst.process, inst.costs, 100000,
                   sim_cfg(sh, inst.id + ":f:1"));
  }
  sh.r1_wall_seconds = seconds_since(t_r1);

  for (const auto& inst : sh.catalog) {
    for (double r : {0.05, 0.4}) {
      const ChartDesign d = design_with_weight(inst.design, r);
      sh.f_large[inst.id][r] =
          estimate_f(d, inst.process, inst.costs, 100000,
                     sim_cfg(sh, inst.id + ":f:" + std::to_string(r)));
    }
    sh.f_small_r005[inst.id] =
        estimate_f(design_with_weight(inst.design, 0.05), inst.process, inst.costs,
                   10000, sim_cfg(sh, inst.id + ":f10:0.05"));
  }

  // run-length estimates shared by chart configuration (q, r, delta)
  ArlCache arls(sh.seed, 100000, sh.workers);
  for (const auto& inst : sh.catalog) {
    for (double r : r_values) {
      const ChartDesign d = design_with_weight(inst.design, r);
      const Estimate arl0 = arls.arl0(d, inst.process);
      const Estimate arl1 = arls.arl1(d, inst.process);
      const double value =
          lv_cost_arl(arl0.value, arl1.value, inst.costs, d, inst.process.lambda);
      const Estimate& f_ref = sh.f_large[inst.id][r];
      sh.f_lv[inst.id][r] = value;
      sh.pct_dif[inst.id][r] =
          std::fabs(value - f_ref.value) / f_ref.value * 100.0;
      // propagate the run-length and simulation noise into the percentage
      const double d0 = (lv_cost_arl(arl0.value + arl0.std_error, arl1.value,
                                     inst.costs, d, inst.process.lambda) -
                         lv_cost_arl(arl0.value - arl0.std_error, arl1.value,
                                     inst.costs, d, inst.process.lambda)) /
                        2.0;
      const double d1 = (lv_cost_arl(arl0.value, arl1.value + arl1.std_error,
                                     inst.costs, d, inst.process.lambda) -
                         lv_cost_arl(arl0.value, arl1.value - arl1.std_error,
                                     inst.costs, d, inst.process.lambda)) /
                        2.0;
      const double sigma_lv = std::hypot(d0, d1);
      sh.pct_dif_se[inst.id][r] =
          100.0 / f_ref.value *
          std::hypot(sigma_lv, value / f_ref.value * f_ref.std_error);
    }
  }
}

// 1. r = 1 cross-validation against the exact independent-statistics value.
void criterion_1(const Shared& sh) {
  double worst = 0.0;
  std::string worst_id;
  for (const auto& inst : sh.catalog) {
    const double err = std::fabs(sh.f_large.at(inst.id).at(1.0).value -
                                 sh.exact.at(inst.id)) /
                       sh.exact.at(inst.id) * 100.0;
    if (err > worst) {
      worst = err;
      worst_id = inst.id;
    }
  }
  const bool pass = worst <= 0.5 && sh.r1_wall_seconds < 600.0;
  report(1, "exact-formula cross-validation at r=1", pass,
         fmt("max error %.3f%% (%s ; limit 0.5%%), catalog wall %.1fs (limit 600s)",
             worst, worst_id.c_str(), sh.r1_wall_seconds));
}

// 2. Fallacy reproduction: U18/M18 differences at r=0.05, near-zero at r=1.
void criterion_2(const Shared& sh) {
  const double u18 = sh.pct_dif.at("U18").at(0.05);
  const double m18 = sh.pct_dif.at("M18").at(0.05);
  double worst_r1 = 0.0;
  std::string worst_id;
  for (const auto& inst : sh.catalog) {
    const double d = sh.pct_dif.at(inst.id).at(1.0);
    if (d > worst_r1) {
      worst_r1 = d;
      worst_id = inst.id;
    }
  }
  const bool pass =
      u18 >= 15.0 && u18 <= 24.0 && m18 >= 16.0 && m18 <= 25.0 && worst_r1 <= 1.0;
  report(2, "fallacy reproduction (pct dif bands)", pass,
         fmt("U18 %.2f%% (band 15-24), M18 %.2f%% (band 16-25), max at r=1 %.2f%% "
             "(%s ; limit 1%%)",
             u18, m18, worst_r1, worst_id.c_str()));
}

// 3. The difference shrinks as the weight grows, up to 3 violations.
void criterion_3(const Shared& sh) {
  int violations = 0;
  int significant = 0;  // ordering broken by more than twice the combined noise
  std::string examples;
  for (const auto& inst : sh.catalog) {
    const double at005 = sh.pct_dif.at(inst.id).at(0.05);
    const double at04 = sh.pct_dif.at(inst.id).at(0.4);
    const double at1 = sh.pct_dif.at(inst.id).at(1.0);
    if (!(at005 > at04 && at04 > at1)) {
      ++violations;
      if (!examples.empty()) examples += " ";
      examples += inst.id;
      const double se005 = sh.pct_dif_se.at(inst.id).at(0.05);
      const double se04 = sh.pct_dif_se.at(inst.id).at(0.4);
      const double se1 = sh.pct_dif_se.at(inst.id).at(1.0);
      const bool left_broken = at04 - at005 > 2.0 * std::hypot(se005, se04);
      const bool right_broken = at1 - at04 > 2.0 * std::hypot(se04, se1);
      if (left_broken || right_broken) ++significant;
    }
  }
  report(3, "monotone-in-r difference pattern", violations <= 3,
         fmt("%d strict violations of 36 (allowed 3)%s%s; %d exceed twice the "
             "combined noise",
             violations, violations ? " : " : "", examples.c_str(), significant));
}

// 4. Published conditional-ARL profile, univariate chart as named, plus a
//    trivariate diagnostic when the quoted steady state is missed.
void criterion_4(const Shared& sh) {
  ProcessModel p;
  p.q = 1;
  p.mu0 = Vec{0.0};
  p.mu1 = Vec{2.0};
  p.sigma = Mat(1, 1, 1.0);
  p.lambda = 0.05;
  ChartDesign d;
  d.n = 1;
  d.h = 1.5;
  d.ul = std::sqrt(10.5);
  d.weights = Vec{0.05};

  const ArlProfile profile =
      estimate_aarl1(d, p, 0.05, 1e-10, 10000, sim_cfg(sh, "criterion4:q1"));
  const std::size_t n = profile.arl1_m.size();
  double tail = 0.0, prior = 0.0;
  for (std::size_t i = n - 50; i < n; ++i) tail += profile.arl1_m[i].value;
  for (std::size_t i = n - 100; i < n - 50; ++i) prior += profile.arl1_m[i].value;
  tail /= 50.0;
  prior /= 50.0;

  const bool converges = std::fabs(tail - prior) / prior <= 0.02;
  const double tail_dev = std::fabs(tail - 5.69) / 5.69 * 100.0;
  const bool tail_ok = tail_dev <= 2.0;
  const double gap = profile.aarl1.value - profile.arl1_m.front().value;
  const double gap_se =
      std::hypot(profile.aarl1.std_error, profile.arl1_m.front().std_error);
  const bool averaged_exceeds = gap > 3.0 * gap_se;

  report(4, "published run-length profile reproduction (univariate)",
         converges && tail_ok && averaged_exceeds,
         fmt("tail mean %.3f vs 5.69 (dev %.1f%%, limit 2%%), converged=%s, "
             "AARL1-ARL1^0 = %.2f (%.0f combined se)",
             tail, tail_dev, converges ? "yes" : "no", gap, gap / gap_se));
  if (!tail_ok) {
    // cross-check: the published 5.69 matches the trivariate benchmark process
    const Instance m4 = load_instance("M4");
    const ChartDesign d3 = design_with_weight(m4.design, 0.05);
    const ArlProfile tri = estimate_aarl1(d3, m4.process, 0.05, 1e-10, 10000,
                                          sim_cfg(sh, "criterion4:q3"));
    double tri_tail = 0.0;
    for (std::size_t i = tri.arl1_m.size() - 50; i < tri.arl1_m.size(); ++i)
      tri_tail += tri.arl1_m[i].value;
    tri_tail /= 50.0;
    note(fmt("diagnostic: the same protocol on the trivariate benchmark process "
             "gives tail %.3f (dev %.1f%% from 5.69); the published value matches "
             "the trivariate chart, see the decisions ledger",
             tri_tail, std::fabs(tri_tail - 5.69) / 5.69 * 100.0));
  }
}

// 5. Corrected formula tracks the simulation where the classical one fails.
void criterion_5(const Shared& sh) {
  const char* ids[] = {"M4", "M5", "M9", "M16", "M18"};
  bool pass = true;
  std::string detail;
  for (const char* id : ids) {
    const Instance inst = load_instance(id);
    for (double r : {0.05, 0.1}) {
      const ChartDesign d = design_with_weight(inst.design, r);
      const ArlProfile profile =
          estimate_aarl1(d, inst.process, inst.process.lambda, 1e-10, 10000,
                         sim_cfg(sh, std::string("criterion5:") + id + ":" +
                                         std::to_string(r)));
      const double corrected =
          modified_cost(profile.anfa.value, profile.aarl1.value, profile.arl0.value,
                        inst.costs, d, inst.process.lambda);
      Estimate f_ref;
      if (r == 0.05) {
        f_ref = sh.f_large.at(id).at(0.05);
      } else {
        f_ref = estimate_f(d, inst.process, inst.costs, 100000,
                           sim_cfg(sh, std::string("criterion5:f:") + id));
      }
      const double dev = std::fabs(corrected - f_ref.value) / f_ref.value * 100.0;
      if (dev > 3.0) {
        pass = false;
        detail += fmt("%s corrected dev %.2f%% at r=%.2f; ", id, dev, r);
      }
      if (r == 0.05) {
        const double lv_dev = sh.pct_dif.at(id).at(0.05);
        if (lv_dev <= 7.0) {
          pass = false;
          detail += fmt("%s classical dev only %.2f%%; ", id, lv_dev);
        }
      }
    }
  }
  if (detail.empty()) detail = "corrected within 3% on all ten cases, classical off by >7% on all five";
  report(5, "corrected-formula validation", pass, detail);
}

// 6. Simulation self-consistency between the two budgets.
void criterion_6(const Shared& sh) {
  double worst = 0.0, sum = 0.0;
  std::string worst_id;
  for (const auto& inst : sh.catalog) {
    const double small = sh.f_small_r005.at(inst.id).value;
    const double large = sh.f_large.at(inst.id).at(0.05).value;
    const double gap = std::fabs(small - large) / large * 100.0;
    sum += gap;
    if (gap > worst) {
      worst = gap;
      worst_id = inst.id;
    }
  }
  const double mean = sum / double(sh.catalog.size());
  report(6, "simulation self-consistency across budgets",
         worst <= 2.5 && mean <= 0.5,
         fmt("max gap %.2f%% (%s ; limit 2.5%%), mean %.3f%% (limit 0.5%%)", worst,
             worst_id.c_str(), mean));
}

// 7. Property suite.
void criterion_7(const Shared& sh) {
  bool pass = true;
  std::string detail;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += what + "; ";
    }
  };

  // substitution identities on random parameter sets
  {
    Rng rng(4242, 0);
    bool ok = true;
    for (int trial = 0; trial < 100 && ok; ++trial) {
      CostParams c;
      c.c0 = 500.0 * rng.uniform();
      c.c1 = c.c0 + 500.0 * rng.uniform();
      c.cf = 800.0 * rng.uniform();
      c.clr = 400.0 * rng.uniform();
      c.a = 10.0 * rng.uniform();
      c.b = 2.0 * rng.uniform();
      c.ts = 0.2 * rng.uniform();
      c.tl = 5.0 * rng.uniform();
      c.tr = 5.0 * rng.uniform();
      c.tf = 2.0 * rng.uniform();
      c.gamma1 = rng.uniform() < 0.5 ? 0 : 1;
      c.gamma2 = rng.uniform() < 0.5 ? 0 : 1;
      ChartDesign d;
      d.n = 1 + long(rng.next_u64() % 8);
      d.h = 0.25 + 4.0 * rng.uniform();
      d.ul = 3.0;
      d.weights = Vec{1.0};
      const double lambda = 0.002 + 0.2 * rng.uniform();
      const double alpha = 1e-5 + 0.4 * rng.uniform();
      const double beta = 0.98 * rng.uniform();
      const double f3 = lv_cost_independent(ErrorRates{alpha, beta}, c, d, lambda);
      const double f4 = lv_cost_arl(1.0 / alpha, 1.0 / (1.0 - beta), c, d, lambda);
      const auto [s, tau] = cycle_constants(lambda, d.h);
      const double f11 = modified_cost(s * alpha, 1.0 / (1.0 - beta), 1.0 / alpha, c,
                                       d, lambda);
      ok = std::fabs(f4 - f3) <= 1e-12 * std::fabs(f3) &&
           std::fabs(f11 - f4) <= 1e-12 * std::fabs(f4);
    }
    expect(ok, "substitution identities");
  }

  // shift-interval probabilities telescope to one
  {
    double total = 0.0;
    for (std::uint64_t m = 0; m < 4000; ++m) total += pr_shift_interval(m, 0.05, 1.5);
    expect(std::fabs(total - 1.0) <= 1e-12, "telescoping weights");
  }

  // truncation criterion satisfaction
  {
    bool ok = true;
    for (double eps : {1e-3, 1e-6, 1e-10}) {
      const auto k = truncation_k(eps, 0.01, 1.5);
      double total = 0.0;
      for (std::uint64_t m = 0; m <= k; ++m) total += pr_shift_interval(m, 0.01, 1.5);
      ok = ok && total >= 1.0 - eps;
    }
    expect(ok, "truncation criterion");
  }

  // equal-weight covariance closed form vs recursion
  {
    const Instance m1 = load_instance("M1");
    bool ok = true;
    for (double r : {0.05, 0.5, 1.0}) {
      Mat acc(3, 3);
      const Mat sigma_xbar = scaled(m1.process.sigma, 1.0);
      for (std::uint64_t m = 1; m <= 200 && ok; ++m) {
        Mat next(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j)
            next(i, j) =
                r * sigma_xbar(i, j) * r + (1 - r) * acc(i, j) * (1 - r);
        acc = next;
        const Mat closed = cov_z(Vec{r, r, r}, m, 1, m1.process.sigma);
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j)
            if (std::fabs(closed(i, j) - acc(i, j)) >
                1e-12 * std::max(1.0, std::fabs(acc(i, j))))
              ok = false;
      }
    }
    expect(ok, "covariance closed form");
  }

  // noncentrality round trip
  {
    const Instance m1 = load_instance("M1");
    Rng rng(777, 0);
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
      Vec dir{rng.normal(), rng.normal(), rng.normal()};
      if (dot(dir, dir) < 1e-12) continue;
      const double delta = 0.05 + 4.0 * rng.uniform();
      ProcessModel p = m1.process;
      p.mu1 = shift_for_delta(p, delta, 1, dir);
      ok = std::fabs(noncentrality(p, 1) - delta) <= 1e-9 * delta;
    }
    expect(ok, "delta round trip");
  }

  // memoryless chart: warm-up cannot matter (3 combined se)
  {
    const Instance u18 = load_instance("U18");
    const ChartDesign d = design_with_weight(u18.design, 1.0);
    const Estimate at0 = estimate_arl1_conditional(d, u18.process, 0, 20000,
                                                   sim_cfg(sh, "prop:warm0"));
    const Estimate at50 = estimate_arl1_conditional(d, u18.process, 50, 20000,
                                                    sim_cfg(sh, "prop:warm50"));
    expect(std::fabs(at0.value - at50.value) <=
               3.0 * std::hypot(at0.std_error, at50.std_error),
           "r=1 warm-up independence");
  }

  // direction invariance at equal delta (3 combined se)
  {
    const Instance m4 = load_instance("M4");
    const ChartDesign d = design_with_weight(m4.design, 0.1);
    ProcessModel axis = m4.process;
    axis.mu1 = shift_for_delta(axis, m4.delta, d.n, Vec{1.0, 0.0, 0.0});
    const Estimate a = estimate_arl1_conditional(d, m4.process, 0, 20000,
                                                 sim_cfg(sh, "prop:dirA"));
    const Estimate b =
        estimate_arl1_conditional(d, axis, 0, 20000, sim_cfg(sh, "prop:dirB"));
    expect(std::fabs(a.value - b.value) <= 3.0 * std::hypot(a.std_error, b.std_error),
           "shift-direction invariance");
  }

  // bit-exact determinism under worker-count changes
  {
    const Instance u17 = load_instance("U17");
    const ChartDesign d = design_with_weight(u17.design, 0.1);
    SimConfig one = sim_cfg(sh, "prop:workers");
    one.workers = 1;
    SimConfig four = one;
    four.workers = 4;
    const Estimate a = estimate_f(d, u17.process, u17.costs, 5000, one);
    const Estimate b = estimate_f(d, u17.process, u17.costs, 5000, four);
    bool ok = a.value == b.value && a.std_error == b.std_error;
    const ArlProfile pa =
        estimate_aarl1(d, u17.process, u17.process.lambda, 1e-4, 500, one);
    const ArlProfile pb =
        estimate_aarl1(d, u17.process, u17.process.lambda, 1e-4, 500, four);
    ok = ok && pa.aarl1.value == pb.aarl1.value && pa.anfa.value == pb.anfa.value;
    for (std::size_t i = 0; i < pa.arl1_m.size() && ok; ++i)
      ok = pa.arl1_m[i].value == pb.arl1_m[i].value;
    expect(ok, "worker-count determinism");
  }

  if (detail.empty()) detail = "all eight property groups hold";
  report(7, "property suite", pass, detail);
}

// 8. Performance: one instance, one weight, 1e5 cycles within a minute.
void criterion_8(const Shared& sh) {
  const Instance u1 = load_instance("U1");
  const ChartDesign d = design_with_weight(u1.design, 0.05);
  const auto t0 = steady::now();
  const Estimate f =
      estimate_f(d, u1.process, u1.costs, 100000, sim_cfg(sh, "criterion8"));
  const double wall = seconds_since(t0);
  report(8, "single-configuration performance", wall <= 60.0,
         fmt("1e5 cycles in %.2fs (limit 60s), value %.2f +- %.3f", wall, f.value,
             f.std_error));
}

}  // namespace

int main(int argc, char** argv) {
  Shared sh;
  if (argc > 1) sh.workers = std::atoi(argv[1]);

  std::printf("spcecon acceptance suite (seed %llu, workers %d)\n",
              (unsigned long long)sh.seed, sh.workers);
  const auto t0 = steady::now();
  compute_shared(sh);
  std::printf("shared estimates ready after %.1fs\n", seconds_since(t0));
  std::fflush(stdout);

  criterion_1(sh);
  criterion_2(sh);
  criterion_3(sh);
  criterion_4(sh);
  criterion_5(sh);
  criterion_6(sh);
  criterion_7(sh);
  criterion_8(sh);

  std::printf("%d of 8 criteria failed; total wall %.1fs\n", g_failures,
              seconds_since(t0));
  return g_failures;
}
