#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "endslab/cayley.hpp"
#include "endslab/errors.hpp"
#include "endslab/union_find.hpp"

namespace endslab {

// One connected component of B(R) \ B(r).
struct Component {
  std::vector<VertexId> vertices;  // ascending
  bool boundary_touching = false;  // contains a vertex at distance exactly R
  int max_distance = 0;
};

struct ComponentDecomposition {
  int inner_radius = 0;
  int truncation = 0;
  std::vector<Component> components;  // ordered by smallest vertex id

  std::size_t touching_count() const {
    return static_cast<std::size_t>(std::count_if(
        components.begin(), components.end(), [](const Component& c) { return c.boundary_touching; }));
  }
  std::size_t bounded_count() const { return components.size() - touching_count(); }

  // U_r candidates.
  std::vector<const Component*> touching() const {
    std::vector<const Component*> out;
    for (const auto& c : components) {
      if (c.boundary_touching) out.push_back(&c);
    }
    return out;
  }

  // Union of the components that stay inside the truncation (B_r).
  std::vector<VertexId> bounded_union() const {
    std::vector<VertexId> out;
    for (const auto& c : components) {
      if (!c.boundary_touching) out.insert(out.end(), c.vertices.begin(), c.vertices.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

// Connected components of the annulus {v : r < d(v) <= truncation}. The
// truncation defaults to the table radius; a smaller one reads the exact
// B(truncation) out of a larger table.
inline ComponentDecomposition complement_components(const BallTable& table, int r,
                                                    std::optional<int> truncation = {}) {
  const int R = truncation.value_or(table.radius());
  if (R > table.radius()) throw InvalidParameter("truncation exceeds the table radius");
  if (r < 0 || r >= R) throw InvalidParameter("inner radius must satisfy 0 <= r < R");

  ComponentDecomposition out;
  out.inner_radius = r;
  out.truncation = R;
  const VertexId base = static_cast<VertexId>(table.ball_size(r));
  const VertexId end = static_cast<VertexId>(table.ball_size(R));
  DisjointSets<VertexId> sets(end - base);
  for (VertexId v = base; v < end; ++v) {
    for (auto w : table.neighbors(v)) {
      if (w != kNoVertex && w > v && w < end) sets.unite(v - base, w - base);
    }
  }
  std::vector<std::uint32_t> slot(end - base, UINT32_MAX);
  for (VertexId v = base; v < end; ++v) {
    auto root = sets.find(v - base);
    if (slot[root] == UINT32_MAX) {
      slot[root] = static_cast<std::uint32_t>(out.components.size());
      out.components.emplace_back();
    }
    auto& c = out.components[slot[root]];
    c.vertices.push_back(v);
    const int d = table.distance(v);
    c.max_distance = std::max(c.max_distance, d);
    c.boundary_touching = c.boundary_touching || d == R;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ends

enum class EndsClass { zero, one, two, infinite, inconclusive };

inline const char* to_string(EndsClass c) {
  switch (c) {
    case EndsClass::zero: return "zero";
    case EndsClass::one: return "one";
    case EndsClass::two: return "two";
    case EndsClass::infinite: return "infinite";
    case EndsClass::inconclusive: return "inconclusive";
  }
  return "?";
}

struct EndsEstimate {
  int r_max = 0;
  std::vector<int> schedule;
  // counts[r-1][s]: boundary-touching components of B(schedule[s]) \ B(r)
  std::vector<std::vector<std::size_t>> counts;
  // e(r): the count when the last two truncations agree
  std::vector<std::optional<std::size_t>> stable;
  bool complete_group = false;
  EndsClass classification = EndsClass::inconclusive;
};

namespace detail {

inline EndsClass classify_ends(const EndsEstimate& e) {
  if (e.complete_group) return EndsClass::zero;
  const int r_max = e.r_max;
  const int tail = (r_max + 1) / 2;
  auto tail_constant = [&](std::size_t value) {
    for (int r = r_max - tail + 1; r <= r_max; ++r) {
      const auto& s = e.stable[static_cast<std::size_t>(r - 1)];
      if (!s || *s != value) return false;
    }
    return true;
  };
  if (tail_constant(1)) return EndsClass::one;
  if (tail_constant(2)) return EndsClass::two;
  bool nondecreasing = true;
  for (int r = 1; r <= r_max; ++r) {
    const auto& s = e.stable[static_cast<std::size_t>(r - 1)];
    if (!s) return EndsClass::inconclusive;
    if (r > 1 && *s < *e.stable[static_cast<std::size_t>(r - 2)]) nondecreasing = false;
  }
  // Hopf: finitely generated groups have 0, 1, 2 or infinitely many ends.
  if (nondecreasing && *e.stable.back() >= 3) return EndsClass::infinite;
  return EndsClass::inconclusive;
}

}  // namespace detail

inline EndsEstimate end_count_estimate(const BallTable& table, int r_max, std::span<const int> schedule) {
  if (r_max < 1) throw InvalidParameter("r_max must be >= 1");
  if (schedule.size() < 2) throw InvalidParameter("ends schedule needs at least two truncations");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0 && schedule[i] <= schedule[i - 1]) {
      throw InvalidParameter("ends schedule must be strictly increasing");
    }
  }
  if (schedule.front() <= r_max) throw InvalidParameter("every truncation must exceed r_max");
  if (schedule.back() > table.radius()) throw InvalidParameter("schedule exceeds the table radius");

  EndsEstimate e;
  e.r_max = r_max;
  e.schedule.assign(schedule.begin(), schedule.end());
  e.complete_group = table.complete_group();
  for (int r = 1; r <= r_max; ++r) {
    std::vector<std::size_t> row;
    for (int T : schedule) row.push_back(complement_components(table, r, T).touching_count());
    const auto n = row.size();
    e.stable.push_back(row[n - 1] == row[n - 2] ? std::optional<std::size_t>(row[n - 1]) : std::nullopt);
    e.counts.push_back(std::move(row));
  }
  e.classification = detail::classify_ends(e);
  return e;
}

inline EndsEstimate end_count_estimate(const GroupOracle& oracle, int r_max, std::span<const int> schedule,
                                       std::size_t budget = kDefaultNodeBudget) {
  if (schedule.empty()) throw InvalidParameter("ends schedule needs at least two truncations");
  auto table = explore(oracle, schedule.back(), budget);
  return end_count_estimate(table, r_max, schedule);
}

// Two truncations between r_max and the table radius, the larger being the
// radius itself; empty when the table is too shallow for two.
inline std::vector<int> default_ends_schedule(int r_max, int radius) {
  const int low = std::min(2 * r_max + 2, radius - 1);
  if (low <= r_max) return {};
  return {low, radius};
}

// ---------------------------------------------------------------------------
// End depth

struct EndDepthValue {
  int r = 0;
  int value = 0;  // V_0(r)
  bool certified = false;
  int truncation = 0;
  std::size_t bounded_components = 0;
  std::size_t touching_components = 0;
};

struct EndDepthOptions {
  std::optional<int> truncation;        // default 4r + 2
  std::optional<bool> assume_one_ended;  // caller's assertion; estimated when absent
  std::size_t budget = kDefaultNodeBudget;
};

struct EndDepthProfile {
  std::vector<EndDepthValue> values;  // r = 1..r_max
  int table_radius = 0;
  std::size_t table_size = 0;
  bool one_ended_asserted = false;
  std::optional<EndsEstimate> ends;  // present when one-endedness was estimated
  bool not_one_ended = false;        // warning: V_0 is only defined for one-ended groups
};

inline int certification_radius(int r) { return 4 * r + 2; }

// V_0(r) = max distance over the bounded components of X \ B(r), or r when
// there are none. A component of B(R) \ B(r) that misses S(R) has all of its
// X-neighbors inside B(R), so it is a genuinely bounded component; bounded
// components of a one-ended group lie in B(4r), so R >= 4r + 2 sees them all.
inline EndDepthValue end_depth_from_table(const BallTable& table, int r, int truncation, bool one_ended) {
  if (r < 1) throw InvalidParameter("end depth needs r >= 1");
  auto dec = complement_components(table, r, truncation);
  EndDepthValue v;
  v.r = r;
  v.value = r;
  v.truncation = truncation;
  for (const auto& c : dec.components) {
    if (!c.boundary_touching) v.value = std::max(v.value, c.max_distance);
  }
  v.bounded_components = dec.bounded_count();
  v.touching_components = dec.touching_count();
  v.certified = one_ended && truncation >= certification_radius(r);
  return v;
}

inline EndDepthProfile end_depth_profile(const GroupOracle& oracle, int r_max, const EndDepthOptions& opt = {}) {
  if (r_max < 1) throw InvalidParameter("r_max must be >= 1");
  if (opt.truncation && *opt.truncation <= r_max) {
    throw InvalidParameter("truncation must exceed every inner radius");
  }
  const int radius = opt.truncation.value_or(certification_radius(r_max));
  auto table = explore(oracle, radius, opt.budget);

  EndDepthProfile p;
  p.table_radius = radius;
  p.table_size = table.size();
  bool one_ended = false;
  if (opt.assume_one_ended) {
    p.one_ended_asserted = *opt.assume_one_ended;
    one_ended = *opt.assume_one_ended;
  } else {
    auto schedule = default_ends_schedule(r_max, radius);
    if (!schedule.empty()) {
      p.ends = end_count_estimate(table, r_max, schedule);
      one_ended = p.ends->classification == EndsClass::one;
    }
  }
  p.not_one_ended = !one_ended;
  for (int r = 1; r <= r_max; ++r) {
    const int T = opt.truncation.value_or(certification_radius(r));
    p.values.push_back(end_depth_from_table(table, r, T, one_ended));
  }
  return p;
}

struct EndDepthResult {
  EndDepthValue value;
  bool not_one_ended = false;
};

inline EndDepthResult end_depth(const GroupOracle& oracle, int r, const EndDepthOptions& opt = {}) {
  if (r < 1) throw InvalidParameter("end depth needs r >= 1");
  auto profile_opt = opt;
  profile_opt.truncation = opt.truncation.value_or(certification_radius(r));
  if (*profile_opt.truncation <= r) throw InvalidParameter("truncation must exceed r");
  auto table = explore(oracle, *profile_opt.truncation, opt.budget);
  bool one_ended = false;
  if (opt.assume_one_ended) {
    one_ended = *opt.assume_one_ended;
  } else {
    auto schedule = default_ends_schedule(r, table.radius());
    one_ended = !schedule.empty() &&
                end_count_estimate(table, r, schedule).classification == EndsClass::one;
  }
  return {end_depth_from_table(table, r, table.radius(), one_ended), !one_ended};
}

// ---------------------------------------------------------------------------
// Witnesses for "two far-apart sides around a small set"

struct ObssItem {
  std::vector<VertexId> core;  // K_i
  int radius = 1;              // r_i
  std::vector<VertexId> side_a, side_b;
};

struct ObssWitness {
  int n = 1;
  std::vector<ObssItem> items;
};

struct ObssItemReport {
  int core_diameter = 0;
  bool core_diameter_ok = false;  // diam(K_i) < n
  std::size_t neighborhood_components = 0;
  bool a_nonempty = false, b_nonempty = false, disjoint = false;
  bool a_in_one_component = false, b_in_one_component = false, different_components = false;
  int diam_a = 0, diam_b = 0;
  bool diameters_exact = false;

  bool two_components_ok() const {
    return neighborhood_components >= 2 && a_nonempty && b_nonempty && disjoint &&
           a_in_one_component && b_in_one_component && different_components;
  }
};

struct WitnessReport {
  std::vector<ObssItemReport> items;
  bool radii_increasing = false;
  bool diam_a_increasing = false;
  bool diam_b_increasing = false;

  bool small_cores() const {
    return std::all_of(items.begin(), items.end(), [](const auto& i) { return i.core_diameter_ok; });
  }
  bool separated_sides() const {
    return std::all_of(items.begin(), items.end(), [](const auto& i) { return i.two_components_ok(); });
  }
  bool growing() const { return radii_increasing && diam_a_increasing && diam_b_increasing; }
  bool passed() const { return small_cores() && separated_sides() && growing(); }

  static constexpr const char* caveat =
      "finite evidence only: divergence is replaced by strict growth over the supplied items, and the "
      "criterion is specific to Cayley graphs (the half-line [0,inf) satisfies all conditions yet has one end)";
};

namespace detail {

inline int max_distance(const BallTable& t, std::span<const VertexId> set) {
  int m = 0;
  for (auto v : set) m = std::max(m, t.distance(v));
  return m;
}

// Diameter in the metric of the truncated graph.
inline int set_diameter(LocalBfs& bfs, std::span<const VertexId> set) {
  int diam = 0;
  for (auto v : set) {
    bfs.run(v, -1);
    for (auto w : set) {
      const int d = bfs.distance(w);
      if (d < 0) return -1;
      diam = std::max(diam, d);
    }
  }
  return diam;
}

}  // namespace detail

// Checks each item: N(K,r) = {y : d(y,K) < r} is computed by multi-source
// BFS, which is exact while max d(e,K) + r <= R.
inline WitnessReport check_obss_witness(const BallTable& table, const ObssWitness& witness) {
  if (witness.n < 1) throw InvalidParameter("witness n must be positive");
  LocalBfs bfs(table);
  WitnessReport report;
  for (const auto& item : witness.items) {
    if (item.core.empty()) throw InvalidParameter("witness core K_i must be nonempty");
    if (item.radius < 1) throw InvalidParameter("witness radius r_i must be positive");
    for (const auto* set : {&item.core, &item.side_a, &item.side_b}) {
      for (auto v : *set) {
        if (v >= table.size()) throw InvalidParameter("witness vertex outside the table");
      }
    }
    const int reach = detail::max_distance(table, item.core) + item.radius;
    if (reach > table.radius()) {
      throw TruncationTooSmall("N(K_i, r_i) reaches distance " + std::to_string(reach) +
                               " beyond truncation " + std::to_string(table.radius()));
    }

    ObssItemReport ir;
    ir.core_diameter = detail::set_diameter(bfs, item.core);
    ir.core_diameter_ok = ir.core_diameter >= 0 && ir.core_diameter < witness.n;

    std::set<VertexId> core(item.core.begin(), item.core.end());
    bfs.run(item.core, item.radius - 1);
    std::vector<VertexId> shell;
    for (auto v : bfs.visited()) {
      if (!core.contains(v)) shell.push_back(v);
    }
    std::sort(shell.begin(), shell.end());
    auto local = [&shell](VertexId v) -> std::optional<std::size_t> {
      auto it = std::lower_bound(shell.begin(), shell.end(), v);
      if (it == shell.end() || *it != v) return std::nullopt;
      return static_cast<std::size_t>(it - shell.begin());
    };
    DisjointSets<std::size_t> sets(shell.size());
    std::size_t merges = 0;
    for (std::size_t i = 0; i < shell.size(); ++i) {
      for (auto w : table.neighbors(shell[i])) {
        if (w == kNoVertex) continue;
        if (auto j = local(w); j && sets.unite(i, *j)) ++merges;
      }
    }
    ir.neighborhood_components = shell.size() - merges;

    auto component_of = [&](const std::vector<VertexId>& side) -> std::optional<std::size_t> {
      std::optional<std::size_t> root;
      for (auto v : side) {
        auto j = local(v);
        if (!j) return std::nullopt;
        auto r = sets.find(*j);
        if (root && *root != r) return std::nullopt;
        root = r;
      }
      return root;
    };
    ir.a_nonempty = !item.side_a.empty();
    ir.b_nonempty = !item.side_b.empty();
    std::set<VertexId> a(item.side_a.begin(), item.side_a.end());
    ir.disjoint = std::none_of(item.side_b.begin(), item.side_b.end(), [&a](VertexId v) { return a.contains(v); });
    auto ca = ir.a_nonempty ? component_of(item.side_a) : std::nullopt;
    auto cb = ir.b_nonempty ? component_of(item.side_b) : std::nullopt;
    ir.a_in_one_component = ca.has_value();
    ir.b_in_one_component = cb.has_value();
    ir.different_components = ca && cb && *ca != *cb;

    ir.diam_a = detail::set_diameter(bfs, item.side_a);
    ir.diam_b = detail::set_diameter(bfs, item.side_b);
    auto exact = [&](std::span<const VertexId> s, int diam) {
      return diam >= 0 && diam <= table.radius() - detail::max_distance(table, s);
    };
    ir.diameters_exact = exact(item.core, ir.core_diameter) && exact(item.side_a, ir.diam_a) &&
                         exact(item.side_b, ir.diam_b);
    report.items.push_back(ir);
  }

  report.radii_increasing = report.diam_a_increasing = report.diam_b_increasing = true;
  for (std::size_t i = 1; i < witness.items.size(); ++i) {
    report.radii_increasing &= witness.items[i].radius > witness.items[i - 1].radius;
    report.diam_a_increasing &= report.items[i].diam_a > report.items[i - 1].diam_a;
    report.diam_b_increasing &= report.items[i].diam_b > report.items[i - 1].diam_b;
  }
  return report;
}

}  // namespace endslab
