#include "io.hpp"

namespace spcecon {

namespace {

Mat mat_from_json(const json& j) {
  require(j.is_array() && !j.empty(), Errc::bad_json, "matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  require(cols > 0, Errc::bad_json, "matrix rows must be arrays");
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(j[i].is_array() && j[i].size() == cols, Errc::bad_json,
            "matrix rows must have equal length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

template <class T>
T field(const json& j, const char* name) {
  require(j.contains(name), Errc::bad_json, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    fail(Errc::bad_json, std::string("field '") + name + "' has the wrong type");
  }
}

}  // namespace

json to_json(const ProcessModel& p) {
  return json{{"q", p.q},
              {"mu0", p.mu0},
              {"mu1", p.mu1},
              {"sigma", mat_to_json(p.sigma)},
              {"lambda", p.lambda}};
}

json to_json(const CostParams& c) {
  return json{{"c0", c.c0},   {"c1", c.c1}, {"cf", c.cf}, {"clr", c.clr},
              {"a", c.a},     {"b", c.b},   {"ts", c.ts}, {"tl", c.tl},
              {"tr", c.tr},   {"tf", c.tf}, {"gamma1", c.gamma1},
              {"gamma2", c.gamma2}};
}

json to_json(const ChartDesign& d) {
  return json{{"n", d.n}, {"h", d.h}, {"ul", d.ul}, {"weights", d.weights}};
}

json to_json(const Instance& inst) {
  return json{{"id", inst.id},
              {"process", to_json(inst.process)},
              {"costs", to_json(inst.costs)},
              {"design", to_json(inst.design)},
              {"delta", inst.delta}};
}

json to_json(const Estimate& e) {
  return json{{"value", e.value}, {"std_error", e.std_error}, {"n_runs", e.n_runs}};
}

json to_json(const ArlProfile& profile) {
  json series = json::array();
  for (std::size_t i = 0; i < profile.m_index.size(); ++i) {
    series.push_back(json{{"m", profile.m_index[i]},
                          {"arl1", to_json(profile.arl1_m[i])},
                          {"pr", profile.weights[i]}});
  }
  return json{{"arl0", to_json(profile.arl0)},
              {"anfa", to_json(profile.anfa)},
              {"aarl1", to_json(profile.aarl1)},
              {"k", profile.k},
              {"epsilon", profile.epsilon},
              {"first_interval",
               profile.base == ShiftIndexBase::from_zero ? 0 : 1},
              {"series", series}};
}

json to_json(const ComparisonRow& row) {
  return json{{"instance", row.instance_id},
              {"r", row.r},
              {"f_sim_small", to_json(row.f_sim_small)},
              {"f_sim_large", to_json(row.f_sim_large)},
              {"f_lv", row.f_lv},
              {"pct_dif", row.pct_dif}};
}

json to_json(const BenchRow& row) {
  json j{{"instance", row.instance_id},
         {"r", row.r},
         {"f_quick", to_json(row.f_quick)},
         {"f_ref", to_json(row.f_ref)},
         {"f_lv", row.f_lv},
         {"pct_dif", row.pct_dif},
         {"wall_ms", row.wall_ms}};
  if (row.pct_error1) j["pct_error1"] = *row.pct_error1;
  if (row.pct_error2) j["pct_error2"] = *row.pct_error2;
  return j;
}

json to_json(const OptimizationResult& result) {
  json grid = json::array();
  for (const auto& point : result.grid)
    grid.push_back(json{{"r", point.r}, {"f", to_json(point.f)}});
  return json{{"instance", result.instance_id},
              {"method", objective_name(result.method)},
              {"r_star", result.r_star},
              {"f_at_r_star", to_json(result.f_at_r_star)},
              {"grid", grid}};
}

json to_json(const OptimizeReport& report) {
  json j{{"instance", report.instance_id},
         {"simulation", to_json(report.sim)},
         {"lorenzen_vance", to_json(report.lv)},
         {"f_sim_at_sim_star", to_json(report.f_sim_at_sim_star)},
         {"f_sim_at_lv_star", to_json(report.f_sim_at_lv_star)},
         {"increment_pct", report.increment_pct}};
  if (report.modified) j["modified"] = to_json(*report.modified);
  return j;
}

Instance instance_from_json(const json& j) {
  require(j.is_object(), Errc::bad_json, "instance must be a JSON object");
  Instance inst;
  inst.id = field<std::string>(j, "id");
  require(j.contains("process") && j.at("process").is_object(), Errc::bad_json,
          "missing 'process' object");
  const json& pj = j.at("process");
  inst.process.q = field<std::size_t>(pj, "q");
  inst.process.mu0 = field<Vec>(pj, "mu0");
  inst.process.mu1 = field<Vec>(pj, "mu1");
  require(pj.contains("sigma"), Errc::bad_json, "missing field 'sigma'");
  inst.process.sigma = mat_from_json(pj.at("sigma"));
  inst.process.lambda = field<double>(pj, "lambda");

  require(j.contains("costs") && j.at("costs").is_object(), Errc::bad_json,
          "missing 'costs' object");
  const json& cj = j.at("costs");
  inst.costs.c0 = field<double>(cj, "c0");
  inst.costs.c1 = field<double>(cj, "c1");
  inst.costs.cf = field<double>(cj, "cf");
  inst.costs.clr = field<double>(cj, "clr");
  inst.costs.a = field<double>(cj, "a");
  inst.costs.b = field<double>(cj, "b");
  inst.costs.ts = field<double>(cj, "ts");
  inst.costs.tl = field<double>(cj, "tl");
  inst.costs.tr = field<double>(cj, "tr");
  inst.costs.tf = field<double>(cj, "tf");
  inst.costs.gamma1 = field<int>(cj, "gamma1");
  inst.costs.gamma2 = field<int>(cj, "gamma2");

  require(j.contains("design") && j.at("design").is_object(), Errc::bad_json,
          "missing 'design' object");
  const json& dj = j.at("design");
  inst.design.n = field<long>(dj, "n");
  inst.design.h = field<double>(dj, "h");
  inst.design.ul = field<double>(dj, "ul");
  inst.design.weights = field<Vec>(dj, "weights");

  inst.delta = field<double>(j, "delta");
  validate(inst);
  return inst;
}

std::vector<Instance> parse_instances(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::bad_json, std::string("invalid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("instances")) j = j.at("instances");
  std::vector<Instance> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(instance_from_json(item));
  } else {
    out.push_back(instance_from_json(j));
  }
  return out;
}

std::string catalog_to_json_text() {
  json arr = json::array();
  for (const auto& id : catalog_ids()) arr.push_back(to_json(load_instance(id)));
  return arr.dump(2);
}

std::string instance_to_json_text(const Instance& inst) { return to_json(inst).dump(2); }

}  // namespace spcecon
