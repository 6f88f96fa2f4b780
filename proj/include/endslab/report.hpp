#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "endslab/classifiers.hpp"
#include "endslab/ends.hpp"
#include "endslab/gl_partition.hpp"
#include "endslab/group_spec.hpp"

namespace endslab {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a, 64 bit, as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline nlohmann::json to_json(const EndsEstimate& e) {
  nlohmann::json stable = nlohmann::json::array();
  for (const auto& s : e.stable) stable.push_back(s ? nlohmann::json(*s) : nlohmann::json(nullptr));
  return {{"r_max", e.r_max},
          {"schedule", e.schedule},
          {"counts", e.counts},
          {"stable", stable},
          {"complete_group", e.complete_group},
          {"classification", to_string(e.classification)}};
}

inline nlohmann::json to_json(const EndDepthValue& v) {
  return {{"r", v.r},
          {"V0", v.value},
          {"certified", v.certified},
          {"truncation", v.truncation},
          {"bounded_components", v.bounded_components},
          {"touching_components", v.touching_components}};
}

inline nlohmann::json to_json(const LinearEndDepthReport& r) {
  return {{"bound", "V0(r) <= 4r"}, {"max_ratio", r.max_ratio}, {"worst_r", r.worst_r},
          {"entries_used", r.entries_used}, {"heuristic", r.heuristic}, {"pass", r.pass}};
}

inline nlohmann::json to_json(const EndDepthProfile& p) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& v : p.values) values.push_back(to_json(v));
  nlohmann::json j = {{"values", values},
                      {"table_radius", p.table_radius},
                      {"table_size", p.table_size},
                      {"one_ended_asserted", p.one_ended_asserted},
                      {"not_one_ended", p.not_one_ended}};
  if (p.ends) j["ends_estimate"] = to_json(*p.ends);
  if (p.not_one_ended) j["warning"] = "NotOneEnded: V0 is only defined for one-ended groups";
  return j;
}

inline nlohmann::json to_json(const ObssItemReport& r) {
  return {{"core_diameter", r.core_diameter},
          {"core_diameter_ok", r.core_diameter_ok},
          {"neighborhood_components", r.neighborhood_components},
          {"a_nonempty", r.a_nonempty},
          {"b_nonempty", r.b_nonempty},
          {"disjoint", r.disjoint},
          {"a_in_one_component", r.a_in_one_component},
          {"b_in_one_component", r.b_in_one_component},
          {"different_components", r.different_components},
          {"two_components_ok", r.two_components_ok()},
          {"diam_a", r.diam_a},
          {"diam_b", r.diam_b},
          {"diameters_exact", r.diameters_exact}};
}

inline nlohmann::json to_json(const WitnessReport& w) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& i : w.items) items.push_back(to_json(i));
  return {{"items", items},
          {"small_cores", w.small_cores()},
          {"separated_sides", w.separated_sides()},
          {"radii_increasing", w.radii_increasing},
          {"diam_a_increasing", w.diam_a_increasing},
          {"diam_b_increasing", w.diam_b_increasing},
          {"passed", w.passed()},
          {"caveat", WitnessReport::caveat}};
}

inline nlohmann::json to_json(const Verdict& v) {
  return {{"kind", to_string(v.kind)}, {"details", v.details}, {"numbers", v.numbers}};
}

inline nlohmann::json to_json(const DemoReport& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps) steps.push_back({{"name", s.name}, {"passed", s.passed}, {"detail", s.detail}});
  return {{"a", r.a},
          {"n", r.n},
          {"rho", r.rho},
          {"sphere_size", r.sphere_size},
          {"hypothesis_met", r.hypothesis_met},
          {"D", r.D},
          {"sphere_centers", {r.m_first, r.m_last}},
          {"cover_radius", r.cover_radius},
          {"index_bound", r.index_bound},
          {"ball_vertices", r.ball_vertices},
          {"spheres", r.spheres},
          {"table_radius", r.table_radius},
          {"steps", steps},
          {"all_passed", r.all_passed()},
          {"note", DemoReport::note}};
}

struct RunManifest {
  std::string command;
  std::optional<GroupSpec> group;
  nlohmann::json parameters = nlohmann::json::object();
  std::size_t budget = 0;
  std::size_t budget_used = 0;
  std::optional<double> wall_time_s;  // opt-in; breaks byte identity across runs
};

// Report = {"manifest": ..., "result": payload}; the digest covers the
// compact dump of the payload.
inline nlohmann::json make_report(const RunManifest& m, const nlohmann::json& payload) {
  nlohmann::json man = {{"command", m.command},
                        {"group", m.group ? to_json(*m.group) : nlohmann::json(nullptr)},
                        {"parameters", m.parameters},
                        {"tool_version", kToolVersion},
                        {"budget", {{"limit", m.budget}, {"used", m.budget_used}}},
                        {"output_digest", fnv1a_hex(payload.dump())}};
  if (m.wall_time_s) man["wall_time_s"] = *m.wall_time_s;
  return {{"manifest", man}, {"result", payload}};
}

}  // namespace endslab
