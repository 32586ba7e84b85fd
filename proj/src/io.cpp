#include "sap/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sap {

using ordered_json = nlohmann::ordered_json;

std::string instance_to_json(const SapInstance& instance) {
  ordered_json j;
  j["capacities"] = instance.capacities();
  j["tasks"] = ordered_json::array();
  for (const Task& t : instance.tasks()) {
    ordered_json jt;
    jt["id"] = t.id;
    jt["s"] = t.s;
    jt["t"] = t.t;
    jt["d"] = t.d;
    jt["w"] = t.w;
    j["tasks"].push_back(std::move(jt));
  }
  return j.dump();
}

SapInstance instance_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  std::vector<long long> caps = j.at("capacities").get<std::vector<long long>>();
  std::vector<Task> tasks;
  for (const auto& jt : j.at("tasks")) {
    Task t;
    t.id = jt.at("id").get<std::string>();
    t.s = jt.at("s").get<int>();
    t.t = jt.at("t").get<int>();
    t.d = jt.at("d").get<long long>();
    t.w = jt.at("w").get<long long>();
    tasks.push_back(std::move(t));
  }
  return SapInstance(std::move(caps), std::move(tasks));
}

std::string placement_to_json(const Placement& placement) {
  ordered_json j;
  j["heights"] = ordered_json::object();
  for (const auto& [id, h] : placement.heights) j["heights"][id] = h;
  return j.dump();
}

Placement placement_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  Placement p;
  for (auto it = j.at("heights").begin(); it != j.at("heights").end(); ++it) {
    p.heights[it.key()] = it.value().get<long long>();
  }
  return p;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sap
