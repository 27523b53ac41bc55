// spcecon command-line tool: evaluate costs, run-length profiles,
// optimization, and benchmark sweeps over the built-in or user-supplied
// instances. Talks to the core exclusively through the C API in spcecon.h.

#include <spcecon.h>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

using json = nlohmann::json;

namespace {

struct InstanceDeleter {
  void operator()(spcecon_instance* p) const { spcecon_instance_free(p); }
};
using InstancePtr = std::unique_ptr<spcecon_instance, InstanceDeleter>;

struct StringDeleter {
  void operator()(char* p) const { spcecon_string_free(p); }
};
using CStr = std::unique_ptr<char, StringDeleter>;

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "spcecon: " << msg << "\n";
  std::exit(2);
}

void check(spcecon_status rc, const std::string& what) {
  if (rc != SPCECON_OK) die(what + ": " + spcecon_last_error());
}

// deterministic per-task seed derivation on the CLI side
std::uint64_t mix_seed(std::uint64_t master, const std::string& tag) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  std::uint64_t z = master ^ h;
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommonOpts {
  std::vector<std::string> instances;
  std::string instance_file;
  std::vector<double> r_values;
  std::string r_grid;
  std::uint64_t n_cycles = 100000;
  std::uint64_t arl_runs = 100000;
  std::uint64_t profile_runs = 10000;
  double epsilon = 1e-10;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 0;
  std::string out;
  std::string format = "csv";
  std::string preset;
};

void add_common(CLI::App* cmd, CommonOpts& opt, bool with_budgets = true) {
  cmd->add_option("--instance", opt.instances,
                  "Instance ids (U1..U18, M1..M18), or the groups 'U', 'M', 'all'");
  cmd->add_option("--instance-file", opt.instance_file,
                  "JSON file with instance definitions (see 'instances --export')");
  if (with_budgets) {
    cmd->add_option("--n-cycles", opt.n_cycles, "Simulated cycles per cost estimate")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--arl-runs", opt.arl_runs, "Runs per average-run-length estimate")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--profile-runs", opt.profile_runs,
                    "Runs per conditional run-length index")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", opt.epsilon, "Shift-interval truncation tolerance")
        ->check(CLI::Range(1e-300, 0.999999));
  }
  auto* seed_opt = cmd->add_option("--seed", opt.seed, "Master seed (omitted: generated)");
  cmd->callback([&opt, seed_opt] { opt.seed_given = seed_opt->count() > 0; });
  cmd->add_option("--workers", opt.workers, "Worker threads (<= 0: hardware default)")
      ->envname("SPCECON_WORKERS");
  cmd->add_option("--out", opt.out, "Output file (default: stdout)");
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--preset", opt.preset, "Budget preset")
      ->check(CLI::IsMember({"ci", "paper"}));
}

void apply_preset(CLI::App* cmd, CommonOpts& opt) {
  if (opt.preset.empty()) return;
  const bool ci = opt.preset == "ci";
  if (!cmd->count("--n-cycles")) opt.n_cycles = ci ? 20000 : 100000;
  if (!cmd->count("--arl-runs")) opt.arl_runs = ci ? 20000 : 100000;
  if (!cmd->count("--profile-runs")) opt.profile_runs = ci ? 2000 : 10000;
}

std::uint64_t resolve_seed(CommonOpts& opt) {
  if (!opt.seed_given) {
    std::random_device rd;
    opt.seed = (std::uint64_t(rd()) << 32) ^ rd();
  }
  return opt.seed;
}

std::vector<std::string> expand_selectors(const std::vector<std::string>& tokens) {
  std::vector<std::string> ids;
  auto push_group = [&](const char* prefix) {
    for (int i = 1; i <= 18; ++i) ids.push_back(prefix + std::to_string(i));
  };
  for (const auto& t : tokens) {
    if (t == "all") {
      push_group("U");
      push_group("M");
    } else if (t == "U") {
      push_group("U");
    } else if (t == "M") {
      push_group("M");
    } else {
      ids.push_back(t);
    }
  }
  return ids;
}

// Loads the requested instances either from the catalog or from a JSON file.
std::vector<std::pair<std::string, InstancePtr>> load_instances(const CommonOpts& opt,
                                                                bool default_all) {
  std::vector<std::string> ids = expand_selectors(opt.instances);
  std::vector<std::pair<std::string, InstancePtr>> out;

  if (!opt.instance_file.empty()) {
    std::ifstream in(opt.instance_file);
    if (!in) die("cannot open instance file '" + opt.instance_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
      doc = json::parse(buf.str());
    } catch (const json::exception& e) {
      die("invalid JSON in '" + opt.instance_file + "': " + std::string(e.what()));
    }
    if (doc.is_object() && doc.contains("instances")) doc = doc["instances"];
    if (!doc.is_array()) doc = json::array({doc});
    for (const auto& item : doc) {
      const std::string id = item.value("id", "");
      if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
      spcecon_instance* handle = nullptr;
      check(spcecon_instance_from_json(item.dump().c_str(), &handle),
            "instance '" + id + "'");
      out.emplace_back(id, InstancePtr(handle));
    }
    if (out.empty()) die("no matching instances in '" + opt.instance_file + "'");
    return out;
  }

  if (ids.empty()) {
    if (!default_all) die("no instances selected; pass --instance");
    ids = expand_selectors({"all"});
  }
  for (const auto& id : ids) {
    spcecon_instance* handle = nullptr;
    check(spcecon_instance_load(id.c_str(), &handle), "instance '" + id + "'");
    out.emplace_back(id, InstancePtr(handle));
  }
  return out;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
  // either "start:step:stop" or a comma list
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    double start = 0, step = 0, stop = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &step, &stop) != 3 || step <= 0)
      die("bad --r-grid '" + spec + "' (want start:step:stop)");
    const long count = long(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
      double r = start + double(i) * step;
      if (r > 1.0 && r - 1.0 < 1e-9) r = 1.0;  // accumulation guard at the top end
      grid.push_back(r);
    }
  } else {
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) grid.push_back(std::stod(tok));
    }
  }
  if (grid.empty()) die("empty --r-grid");
  return grid;
}

std::vector<double> resolve_r(const CommonOpts& opt, std::vector<double> fallback) {
  if (!opt.r_grid.empty()) return parse_grid_spec(opt.r_grid);
  if (!opt.r_values.empty()) return opt.r_values;
  if (fallback.empty()) die("no weights selected; pass --r or --r-grid");
  return fallback;
}

void write_output(const CommonOpts& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) die("cannot write '" + opt.out + "'");
  out << text;
  if (!out) die("error writing '" + opt.out + "'");
}

std::string csv_header_comment(const std::string& command, const CommonOpts& opt) {
  std::ostringstream os;
  os << "# spcecon " << command << " seed=" << opt.seed << " version="
     << spcecon_version() << "\n";
  return os.str();
}

json estimate_json(const spcecon_estimate& e) {
  return json{{"value", e.value}, {"std_error", e.std_error}, {"n_runs", e.n_runs}};
}

struct FailureList {
  std::vector<std::string> ids;
  void note(const std::string& id) { ids.push_back(id); }
  int finish() const {
    if (ids.empty()) return 0;
    std::cerr << "spcecon: failed instances:";
    for (const auto& id : ids) std::cerr << ' ' << id;
    std::cerr << "\n";
    return 1;
  }
};

// ---- evaluate ---------------------------------------------------------------

int cmd_evaluate(CLI::App* cmd, CommonOpts& opt) {
  apply_preset(cmd, opt);
  resolve_seed(opt);
  const auto instances = load_instances(opt, false);
  const auto r_values = resolve_r(opt, {});

  json rows = json::array();
  FailureList failures;
  for (const auto& [id, inst] : instances) {
    for (double r : r_values) {
      const std::string tag = id + ":" + fmt(r);
      spcecon_estimate f{}, arl0{}, arl1{};
      double f_lv = 0, f_corrected = 0;
      char* raw = nullptr;
      const bool ok =
          spcecon_estimate_cost(inst.get(), r, opt.n_cycles,
                                mix_seed(opt.seed, tag + ":f"), opt.workers,
                                &f) == SPCECON_OK &&
          spcecon_estimate_arl0(inst.get(), r, opt.arl_runs,
                                mix_seed(opt.seed, tag + ":arl0"), opt.workers,
                                &arl0) == SPCECON_OK &&
          spcecon_estimate_arl1(inst.get(), r, 0, opt.arl_runs,
                                mix_seed(opt.seed, tag + ":arl1"), opt.workers,
                                &arl1) == SPCECON_OK &&
          spcecon_arl_profile(inst.get(), r, opt.epsilon, opt.profile_runs,
                              mix_seed(opt.seed, tag + ":profile"), opt.workers,
                              &raw) == SPCECON_OK;
      CStr profile_json(raw);
      if (!ok) {
        std::cerr << "spcecon: " << id << " r=" << r << ": " << spcecon_last_error()
                  << "\n";
        failures.note(id);
        continue;
      }
      const json profile = json::parse(profile_json.get());
      const double anfa = profile["anfa"]["value"].get<double>();
      const double aarl1 = profile["aarl1"]["value"].get<double>();
      const double arl0_for_profile = profile["arl0"]["value"].get<double>();
      if (spcecon_cost_formula_arl(inst.get(), r, arl0.value, arl1.value, &f_lv) !=
              SPCECON_OK ||
          spcecon_cost_formula_corrected(inst.get(), r, anfa, aarl1, arl0_for_profile,
                                         &f_corrected) != SPCECON_OK) {
        std::cerr << "spcecon: " << id << ": " << spcecon_last_error() << "\n";
        failures.note(id);
        continue;
      }
      const double pct_dif = std::abs(f_lv - f.value) / f.value * 100.0;
      rows.push_back(json{{"instance", id},
                          {"r", r},
                          {"f_sim", estimate_json(f)},
                          {"f_lv", f_lv},
                          {"f_corrected", f_corrected},
                          {"pct_dif", pct_dif}});
    }
  }

  if (opt.format == "json") {
    json doc{{"command", "evaluate"}, {"seed", opt.seed}, {"rows", rows}};
    write_output(opt, doc.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << csv_header_comment("evaluate", opt);
    os << "instance,r,f_sim,f_sim_se,n_cycles,f_lv,f_corrected,pct_dif\n";
    for (const auto& row : rows) {
      os << row["instance"].get<std::string>() << ',' << fmt(row["r"].get<double>())
         << ',' << fmt(row["f_sim"]["value"].get<double>()) << ','
         << fmt(row["f_sim"]["std_error"].get<double>()) << ','
         << row["f_sim"]["n_runs"].get<std::uint64_t>() << ','
         << fmt(row["f_lv"].get<double>()) << ','
         << fmt(row["f_corrected"].get<double>()) << ','
         << fmt(row["pct_dif"].get<double>()) << "\n";
    }
    write_output(opt, os.str());
  }
  return failures.finish();
}

// ---- arl --------------------------------------------------------------------

int cmd_arl(CLI::App* cmd, CommonOpts& opt) {
  apply_preset(cmd, opt);
  resolve_seed(opt);
  const auto instances = load_instances(opt, false);
  const auto r_values = resolve_r(opt, {});

  json result = json::array();
  FailureList failures;
  for (const auto& [id, inst] : instances) {
    for (double r : r_values) {
      char* raw = nullptr;
      if (spcecon_arl_profile(inst.get(), r, opt.epsilon, opt.profile_runs,
                              mix_seed(opt.seed, id + ":" + fmt(r) + ":profile"),
                              opt.workers, &raw) != SPCECON_OK) {
        std::cerr << "spcecon: " << id << ": " << spcecon_last_error() << "\n";
        failures.note(id);
        continue;
      }
      CStr profile_json(raw);
      json profile = json::parse(profile_json.get());
      profile["instance"] = id;
      profile["r"] = r;
      result.push_back(std::move(profile));
    }
  }

  if (opt.format == "json") {
    json doc{{"command", "arl"}, {"seed", opt.seed}, {"profiles", result}};
    write_output(opt, doc.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << csv_header_comment("arl", opt);
    for (const auto& profile : result) {
      os << "# instance=" << profile["instance"].get<std::string>()
         << " r=" << fmt(profile["r"].get<double>())
         << " arl0=" << fmt(profile["arl0"]["value"].get<double>())
         << " anfa=" << fmt(profile["anfa"]["value"].get<double>())
         << " aarl1=" << fmt(profile["aarl1"]["value"].get<double>())
         << " aarl1_se=" << fmt(profile["aarl1"]["std_error"].get<double>())
         << " epsilon=" << fmt(profile["epsilon"].get<double>()) << "\n";
    }
    os << "instance,r,m,arl1,arl1_se,pr,k\n";
    for (const auto& profile : result) {
      const std::string id = profile["instance"].get<std::string>();
      const double r = profile["r"].get<double>();
      const std::uint64_t k = profile["k"].get<std::uint64_t>();
      for (const auto& point : profile["series"]) {
        os << id << ',' << fmt(r) << ',' << point["m"].get<std::uint64_t>() << ','
           << fmt(point["arl1"]["value"].get<double>()) << ','
           << fmt(point["arl1"]["std_error"].get<double>()) << ','
           << fmt(point["pr"].get<double>()) << ',' << k << "\n";
      }
    }
    write_output(opt, os.str());
  }
  return failures.finish();
}

// ---- optimize -----------------------------------------------------------------

int cmd_optimize(CLI::App* cmd, CommonOpts& opt, bool with_modified) {
  apply_preset(cmd, opt);
  resolve_seed(opt);
  const auto instances = load_instances(opt, false);
  std::vector<double> fallback;
  for (int i = 1; i <= 100; ++i) fallback.push_back(i / 100.0);
  const auto grid = resolve_r(opt, fallback);

  json reports = json::array();
  FailureList failures;
  for (const auto& [id, inst] : instances) {
    char* raw = nullptr;
    if (spcecon_optimize_report(inst.get(), grid.data(), grid.size(), opt.n_cycles,
                                opt.arl_runs, opt.profile_runs, opt.epsilon,
                                with_modified ? 1 : 0,
                                mix_seed(opt.seed, id + ":optimize"), opt.workers,
                                &raw) != SPCECON_OK) {
      std::cerr << "spcecon: " << id << ": " << spcecon_last_error() << "\n";
      failures.note(id);
      continue;
    }
    CStr report_json(raw);
    reports.push_back(json::parse(report_json.get()));
  }

  if (opt.format == "json") {
    json doc{{"command", "optimize"}, {"seed", opt.seed}, {"reports", reports}};
    write_output(opt, doc.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << csv_header_comment("optimize", opt);
    os << "instance,r_star_sim,f_sim_at_sim_star,f_sim_at_sim_star_se,r_star_lv,"
          "f_sim_at_lv_star,f_sim_at_lv_star_se,increment_pct";
    if (with_modified) os << ",r_star_modified,f_modified_at_star";
    os << "\n";
    for (const auto& rep : reports) {
      os << rep["instance"].get<std::string>() << ','
         << fmt(rep["simulation"]["r_star"].get<double>()) << ','
         << fmt(rep["f_sim_at_sim_star"]["value"].get<double>()) << ','
         << fmt(rep["f_sim_at_sim_star"]["std_error"].get<double>()) << ','
         << fmt(rep["lorenzen_vance"]["r_star"].get<double>()) << ','
         << fmt(rep["f_sim_at_lv_star"]["value"].get<double>()) << ','
         << fmt(rep["f_sim_at_lv_star"]["std_error"].get<double>()) << ','
         << fmt(rep["increment_pct"].get<double>());
      if (with_modified) {
        os << ',' << fmt(rep["modified"]["r_star"].get<double>()) << ','
           << fmt(rep["modified"]["f_at_r_star"]["value"].get<double>());
      }
      os << "\n";
    }
    write_output(opt, os.str());
  }
  return failures.finish();
}

// ---- bench --------------------------------------------------------------------

int cmd_bench(CLI::App* cmd, CommonOpts& opt, std::uint64_t n_small) {
  apply_preset(cmd, opt);
  if (opt.preset == "ci" && !cmd->count("--n-small")) n_small = 2000;
  resolve_seed(opt);
  const auto instances = load_instances(opt, true);
  const auto r_values = resolve_r(opt, {0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0});

  std::vector<const spcecon_instance*> handles;
  handles.reserve(instances.size());
  for (const auto& [id, inst] : instances) handles.push_back(inst.get());

  char* raw = nullptr;
  check(spcecon_bench(handles.data(), handles.size(), r_values.data(), r_values.size(),
                      n_small, opt.n_cycles, opt.arl_runs, opt.seed, opt.workers, &raw),
        "bench");
  CStr rows_json(raw);
  const json rows = json::parse(rows_json.get());

  if (opt.format == "json") {
    json doc{{"command", "bench"}, {"seed", opt.seed}, {"rows", rows}};
    write_output(opt, doc.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << csv_header_comment("bench", opt);
    os << "instance,r,f_quick,f_quick_se,f_ref,f_ref_se,f_lv,pct_dif,pct_error1,"
          "pct_error2,wall_ms\n";
    for (const auto& row : rows) {
      os << row["instance"].get<std::string>() << ',' << fmt(row["r"].get<double>())
         << ',' << fmt(row["f_quick"]["value"].get<double>()) << ','
         << fmt(row["f_quick"]["std_error"].get<double>()) << ','
         << fmt(row["f_ref"]["value"].get<double>()) << ','
         << fmt(row["f_ref"]["std_error"].get<double>()) << ','
         << fmt(row["f_lv"].get<double>()) << ',' << fmt(row["pct_dif"].get<double>())
         << ',';
      if (row.contains("pct_error1")) os << fmt(row["pct_error1"].get<double>());
      os << ',';
      if (row.contains("pct_error2")) os << fmt(row["pct_error2"].get<double>());
      os << ',' << fmt(row["wall_ms"].get<double>()) << "\n";
    }
    write_output(opt, os.str());
  }
  return 0;
}

// ---- instances ------------------------------------------------------------------

int cmd_instances(CommonOpts& opt, bool export_catalog) {
  char* raw = nullptr;
  check(spcecon_catalog_json(&raw), "catalog");
  CStr catalog_json(raw);
  json catalog = json::parse(catalog_json.get());

  const auto wanted = expand_selectors(opt.instances);
  if (!wanted.empty()) {
    json filtered = json::array();
    for (const auto& item : catalog) {
      if (std::find(wanted.begin(), wanted.end(), item["id"].get<std::string>()) !=
          wanted.end())
        filtered.push_back(item);
    }
    catalog = std::move(filtered);
  }

  if (export_catalog || opt.format == "json") {
    write_output(opt, catalog.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "id,q,lambda,delta,n,h,ul\n";
  for (const auto& item : catalog) {
    os << item["id"].get<std::string>() << ',' << item["process"]["q"].get<int>() << ','
       << fmt(item["process"]["lambda"].get<double>()) << ','
       << fmt(item["delta"].get<double>()) << ',' << item["design"]["n"].get<long>()
       << ',' << fmt(item["design"]["h"].get<double>()) << ','
       << fmt(item["design"]["ul"].get<double>()) << "\n";
  }
  write_output(opt, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Economic design toolkit for memory-type (EWMA/MEWMA) control charts"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Configuration file (TOML, sections per subcommand)");

  CommonOpts evaluate_opt, arl_opt, optimize_opt, bench_opt, instances_opt;
  bool with_modified = false;
  bool export_catalog = false;
  std::uint64_t bench_n_small = 10000;

  auto* evaluate = app.add_subcommand(
      "evaluate", "Simulated cost, formula costs, and their difference");
  add_common(evaluate, evaluate_opt);
  evaluate->add_option("--r", evaluate_opt.r_values, "Exponential weight(s)")
      ->check(CLI::Range(1e-9, 1.0));
  evaluate->add_option("--r-grid", evaluate_opt.r_grid,
                       "Weight grid: start:step:stop or comma list");

  auto* arl = app.add_subcommand(
      "arl", "Conditional run-length profile with AARL1, ANFA, ARL0");
  add_common(arl, arl_opt);
  arl->add_option("--r", arl_opt.r_values, "Exponential weight(s)")
      ->check(CLI::Range(1e-9, 1.0));
  arl->add_option("--r-grid", arl_opt.r_grid, "Weight grid");

  auto* optimize = app.add_subcommand(
      "optimize", "Direct search for the economically optimal weight");
  add_common(optimize, optimize_opt);
  optimize->add_option("--r-grid", optimize_opt.r_grid,
                       "Search grid (default 0.01:0.01:1)");
  optimize->add_flag("--with-modified", with_modified,
                     "Also search with the corrected cost formula");

  auto* bench = app.add_subcommand(
      "bench", "Benchmark sweep: simulation vs formula across instances");
  add_common(bench, bench_opt);
  bench->add_option("--r", bench_opt.r_values, "Weights (default benchmark set)")
      ->check(CLI::Range(1e-9, 1.0));
  bench->add_option("--r-grid", bench_opt.r_grid, "Weight grid");
  bench->add_option("--n-small", bench_n_small, "Quick-estimate cycle budget")
      ->check(CLI::PositiveNumber);

  auto* instances = app.add_subcommand("instances", "List or export the catalog");
  add_common(instances, instances_opt, false);
  instances->add_flag("--export", export_catalog, "Emit full instance JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (evaluate->parsed()) return cmd_evaluate(evaluate, evaluate_opt);
    if (arl->parsed()) return cmd_arl(arl, arl_opt);
    if (optimize->parsed()) return cmd_optimize(optimize, optimize_opt, with_modified);
    if (bench->parsed()) return cmd_bench(bench, bench_opt, bench_n_small);
    if (instances->parsed()) return cmd_instances(instances_opt, export_catalog);
  } catch (const std::exception& e) {
    die(e.what());
  }
  return 0;
}
