#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "coflow/instance.hpp"

namespace coflow {

/// Thrown on malformed instance documents; semantic problems are left to
/// validate().
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown_fields(const nlohmann::json& j, std::set<std::string> allowed,
                                  const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ParseError("unknown field '" + it.key() + "' in " + where);
}

template <typename T>
T require(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ParseError("missing field '" + key + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad value for '" + key + "' in " + where + ": " + e.what());
  }
}

}  // namespace detail

inline Instance read_instance(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance document: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("instance document must be an object");
  detail::reject_unknown_fields(j, {"num_ports", "num_cores", "mode", "coflows", "jobs"},
                                "instance");

  Instance inst;
  inst.num_ports = detail::require<int>(j, "num_ports", "instance");
  inst.num_cores = detail::require<int>(j, "num_cores", "instance");
  auto mode_str = detail::require<std::string>(j, "mode", "instance");
  auto mode = mode_from_string(mode_str);
  if (!mode) throw ParseError("unknown mode '" + mode_str + "'");
  inst.mode = *mode;

  auto coflows = detail::require<json>(j, "coflows", "instance");
  if (!coflows.is_array()) throw ParseError("'coflows' must be an array");
  for (const auto& cj : coflows) {
    const std::string where = "coflow entry";
    detail::reject_unknown_fields(cj, {"id", "weight", "release", "predecessors", "flows"},
                                  where);
    CoflowSpec c;
    c.id = detail::require<std::int64_t>(cj, "id", where);
    c.weight = detail::require<double>(cj, "weight", where);
    c.release = detail::require<std::int64_t>(cj, "release", where);
    c.predecessors = detail::require<std::vector<std::int64_t>>(cj, "predecessors", where);
    auto flows = detail::require<json>(cj, "flows", where);
    if (!flows.is_array()) throw ParseError("'flows' must be an array in " + where);
    for (const auto& fj : flows) {
      detail::reject_unknown_fields(fj, {"src", "dst", "size"}, "flow entry");
      FlowSpec f;
      f.src = detail::require<int>(fj, "src", "flow entry");
      f.dst = detail::require<int>(fj, "dst", "flow entry");
      f.size = detail::require<std::int64_t>(fj, "size", "flow entry");
      c.flows.push_back(f);
    }
    inst.coflows.push_back(std::move(c));
  }

  if (j.contains("jobs")) {
    const auto& jobs = j.at("jobs");
    if (!jobs.is_array()) throw ParseError("'jobs' must be an array");
    for (const auto& tj : jobs) {
      detail::reject_unknown_fields(tj, {"id", "weight", "coflows"}, "job entry");
      JobSpec t;
      t.id = detail::require<std::int64_t>(tj, "id", "job entry");
      t.weight = detail::require<double>(tj, "weight", "job entry");
      t.coflows = detail::require<std::vector<std::int64_t>>(tj, "coflows", "job entry");
      inst.jobs.push_back(std::move(t));
    }
  }
  return inst;
}

/// Canonical writer: fixed key order, 2-space indent.
inline std::string write_instance(const Instance& inst) {
  using json = nlohmann::ordered_json;
  json j;
  j["num_ports"] = inst.num_ports;
  j["num_cores"] = inst.num_cores;
  j["mode"] = to_string(inst.mode);
  j["coflows"] = json::array();
  for (const auto& c : inst.coflows) {
    json cj;
    cj["id"] = c.id;
    cj["weight"] = c.weight;
    cj["release"] = c.release;
    cj["predecessors"] = c.predecessors;
    cj["flows"] = json::array();
    for (const auto& f : c.flows)
      cj["flows"].push_back({{"src", f.src}, {"dst", f.dst}, {"size", f.size}});
    j["coflows"].push_back(std::move(cj));
  }
  if (!inst.jobs.empty()) {
    j["jobs"] = json::array();
    for (const auto& t : inst.jobs)
      j["jobs"].push_back({{"id", t.id}, {"weight", t.weight}, {"coflows", t.coflows}});
  }
  return j.dump(2) + "\n";
}

}  // namespace coflow
