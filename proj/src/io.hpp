#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "design.hpp"

namespace spcecon {

using json = nlohmann::json;

json to_json(const ProcessModel& p);
json to_json(const CostParams& c);
json to_json(const ChartDesign& d);
json to_json(const Instance& inst);
json to_json(const Estimate& e);
json to_json(const ArlProfile& profile);
json to_json(const ComparisonRow& row);
json to_json(const BenchRow& row);
json to_json(const OptimizationResult& result);
json to_json(const OptimizeReport& report);

Instance instance_from_json(const json& j);

// Accepts a single instance object, an array of them, or {"instances": [...]}.
std::vector<Instance> parse_instances(const std::string& text);

std::string catalog_to_json_text();
std::string instance_to_json_text(const Instance& inst);

}  // namespace spcecon
