#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "endslab/cayley.hpp"
#include "endslab/ends.hpp"
#include "endslab/errors.hpp"
#include "endslab/gl_partition.hpp"

namespace endslab {

// ---------------------------------------------------------------------------
// Growth comparison

// f(x) sampled on the contiguous range [first, first + values.size()).
class GrowthSamples {
 public:
  GrowthSamples(int first, std::vector<double> values) : first_(first), values_(std::move(values)) {
    if (first_ < 1) throw InvalidParameter("growth samples start at x >= 1");
    if (values_.empty()) throw InvalidParameter("growth samples must be nonempty");
    for (double v : values_) {
      if (!(v >= 0) || !std::isfinite(v)) throw InvalidParameter("growth samples must be finite and >= 0");
    }
  }

  template <class F>
  static GrowthSamples from_function(int first, int last, F f) {
    std::vector<double> v;
    for (int x = first; x <= last; ++x) v.push_back(static_cast<double>(f(x)));
    return GrowthSamples(first, std::move(v));
  }

  int first() const { return first_; }
  int last() const { return first_ + static_cast<int>(values_.size()) - 1; }
  bool contains(int x) const { return x >= first() && x <= last(); }
  double operator()(int x) const { return values_.at(static_cast<std::size_t>(x - first_)); }
  double max() const { return *std::max_element(values_.begin(), values_.end()); }

 private:
  int first_;
  std::vector<double> values_;
};

struct DominationBounds {
  int a1_max = 8;
  int a2_max = 8;
  std::optional<std::int64_t> a3_max;  // default: 2 * max g
};

// f(x) <= a1 * g(a2 * x) + a3 on every sampled x.
struct DominationWitness {
  int a1 = 1;
  int a2 = 1;
  std::int64_t a3 = 0;
  int range_first = 0, range_last = 0;

  bool operator==(const DominationWitness&) const = default;
};

// Lexicographically smallest (a1, a2, a3) on the integer grid. Only scales
// a2 for which g is sampled at a2 * x for every sampled x are considered.
// nullopt means no witness within bounds, which is not a disproof.
inline std::optional<DominationWitness> growth_dominates(const GrowthSamples& f, const GrowthSamples& g,
                                                         const DominationBounds& bounds = {}) {
  const auto a3_max = bounds.a3_max.value_or(static_cast<std::int64_t>(std::ceil(2 * g.max())));
  for (int a1 = 1; a1 <= bounds.a1_max; ++a1) {
    for (int a2 = 1; a2 <= bounds.a2_max; ++a2) {
      if (!g.contains(a2 * f.first()) || !g.contains(a2 * f.last())) continue;
      double need = 0;
      for (int x = f.first(); x <= f.last(); ++x) need = std::max(need, f(x) - a1 * g(a2 * x));
      auto a3 = static_cast<std::int64_t>(std::ceil(need - 1e-9));
      if (a3 <= a3_max) return DominationWitness{a1, a2, std::max<std::int64_t>(a3, 0), f.first(), f.last()};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Linear end depth

struct LinearEndDepthReport {
  double max_ratio = 0;
  int worst_r = 0;
  std::size_t entries_used = 0;
  bool heuristic = false;  // no certified entries; ratio taken over all entries
  bool pass = false;       // max V_0(r) / r <= 4

  static constexpr double kBound = 4.0;
};

inline LinearEndDepthReport linear_end_depth_check(std::span<const EndDepthValue> values) {
  LinearEndDepthReport rep;
  const bool any_certified = std::any_of(values.begin(), values.end(), [](const auto& v) { return v.certified; });
  rep.heuristic = !any_certified;
  for (const auto& v : values) {
    if (any_certified && !v.certified) continue;
    ++rep.entries_used;
    const double ratio = static_cast<double>(v.value) / v.r;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_r = v.r;
    }
  }
  rep.pass = rep.entries_used > 0 && rep.max_ratio <= LinearEndDepthReport::kBound;
  return rep;
}

// ---------------------------------------------------------------------------
// Virtual cyclicity

enum class VerdictKind { virtually_cyclic_evidence, infeasible, no_evidence, demonstration_only };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::virtually_cyclic_evidence: return "virtually_cyclic_evidence";
    case VerdictKind::infeasible: return "infeasible";
    case VerdictKind::no_evidence: return "no_evidence";
    case VerdictKind::demonstration_only: return "demonstration_only";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind = VerdictKind::no_evidence;
  std::string details;
  std::map<std::string, std::int64_t> numbers;
};

inline constexpr int kDetectorMinRadius = 20;
inline constexpr int kSphereTheoremMinA = 100;

inline constexpr const char* kTwoEndsNote =
    "two ends <=> virtually Z <=> quasi-isometric to Z (Stallings; cited, not re-derived)";

// `sizes[r]` = |S(r)| for r = 0..r_max. Fires when one value occupies at
// least half of the last ceil(r_max / 2) radii.
inline Verdict bounded_sphere_detector(std::span<const std::uint64_t> sizes) {
  if (sizes.size() < static_cast<std::size_t>(kDetectorMinRadius) + 1) {
    throw InvalidParameter("bounded sphere detector needs sizes up to r >= 20");
  }
  const int r_max = static_cast<int>(sizes.size()) - 1;
  const int window = (r_max + 1) / 2;
  std::map<std::uint64_t, int> freq;
  for (int r = r_max - window + 1; r <= r_max; ++r) ++freq[sizes[static_cast<std::size_t>(r)]];
  auto best = std::max_element(freq.begin(), freq.end(),
                               [](const auto& x, const auto& y) { return x.second < y.second; });
  Verdict v;
  v.numbers = {{"r_max", r_max}, {"window", window}, {"repeat_count", best->second},
               {"repeated_size", static_cast<std::int64_t>(best->first)}};
  const std::string scope = "finite evidence over r <= " + std::to_string(r_max) +
                            " (a bounded subsequence of sphere sizes is approximated by a value repeating on at "
                            "least half of the last " + std::to_string(window) + " radii); not a proof";
  if (2 * best->second >= window) {
    v.kind = VerdictKind::virtually_cyclic_evidence;
    v.details = "sphere size " + std::to_string(best->first) + " repeats " + std::to_string(best->second) +
                " times; " + scope + "; " + kTwoEndsNote;
  } else {
    v.kind = VerdictKind::no_evidence;
    v.details = "no sphere size repeats on half of the tail window; " + scope;
  }
  return v;
}

namespace detail {

// (2a+1)^(n+2), or nullopt beyond 2^62.
inline std::optional<std::int64_t> sphere_theorem_radius(int a, int n) {
  std::int64_t rho = 1;
  for (int i = 0; i < n + 2; ++i) {
    if (rho > (std::int64_t{1} << 62) / (2 * a + 1)) return std::nullopt;
    rho *= 2 * a + 1;
  }
  return rho;
}

}  // namespace detail

// Checks |S(rho)| <= n at rho = (2a+1)^(n+2). A radius beyond the node
// budget is infeasible outright for infinite groups, since B(rho) holds more
// than rho elements.
inline Verdict sphere_bound_criterion(const GroupOracle& oracle, int a, int n,
                                      std::size_t budget = kDefaultNodeBudget) {
  if (a < 3) throw InvalidParameter("criterion needs a >= 3");
  if (n < 2) throw InvalidParameter("criterion needs n >= 2");
  Verdict v;
  v.numbers = {{"a", a}, {"n", n}};
  const auto rho = detail::sphere_theorem_radius(a, n);
  if (!rho) {
    v.kind = VerdictKind::infeasible;
    v.details = "required radius (2a+1)^(n+2) exceeds 2^62";
    return v;
  }
  v.numbers["required_radius"] = *rho;
  if (!oracle.is_finite() && *rho > static_cast<std::int64_t>(budget)) {
    v.kind = VerdictKind::infeasible;
    v.details = "required radius " + std::to_string(*rho) + " exceeds the node budget " + std::to_string(budget);
    return v;
  }
  StreamedGrowth growth;
  try {
    growth = stream_sphere_sizes(oracle, static_cast<int>(*rho), budget);
  } catch (const BudgetExceeded& e) {
    v.kind = VerdictKind::infeasible;
    v.numbers["radius_reached"] = e.radius_reached();
    v.details = "node budget exhausted at radius " + std::to_string(e.radius_reached()) + " of required " +
                std::to_string(*rho);
    return v;
  }
  const auto size = growth.size_at(static_cast<int>(*rho));
  v.numbers["sphere_size"] = static_cast<std::int64_t>(size);
  if (size > static_cast<std::uint64_t>(n)) {
    v.kind = VerdictKind::no_evidence;
    v.details = "|S(" + std::to_string(*rho) + ")| = " + std::to_string(size) + " > n = " + std::to_string(n);
  } else if (a >= kSphereTheoremMinA) {
    v.kind = VerdictKind::virtually_cyclic_evidence;
    v.details = "|S(" + std::to_string(*rho) + ")| = " + std::to_string(size) + " <= n with a >= 100; " +
                kTwoEndsNote;
  } else {
    v.kind = VerdictKind::demonstration_only;
    v.details = "|S(" + std::to_string(*rho) + ")| = " + std::to_string(size) +
                " <= n, but hypothesis violated: a < 100 (the theorem requires a >= 100); demonstration only";
  }
  return v;
}

// ---------------------------------------------------------------------------
// Sphere covering demonstration

struct DemoStep {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct DemoReport {
  int a = 0, n = 0;
  std::int64_t rho = 0;
  std::uint64_t sphere_size = 0;
  bool hypothesis_met = false;  // |S(rho)| <= n
  int D = 0;
  std::int64_t m_first = 0, m_last = 0;  // sphere centers gamma_m checked
  int cover_radius = 0;                  // 39D
  int index_bound = 0;                   // 40D
  std::size_t ball_vertices = 0;
  std::size_t spheres = 0;
  int table_radius = 0;
  std::vector<DemoStep> steps;

  bool all_passed() const {
    return hypothesis_met && !steps.empty() &&
           std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.passed; });
  }

  static constexpr const char* note =
      "small-parameter walk-through of the covering argument; a < 100 is outside the theorem's hypothesis, "
      "so this is a demonstration, not a certification";
};

// Walks the covering argument on a thin group: every sphere S(gamma_m, rho)
// is gl-partitioned, the partitions are compared, and each x in
// B(gamma_0, 39D) is traced to the block around gamma_{rho+m} and to the
// union of the spheres S(gamma_i, D), |i| <= 40D.
inline DemoReport sphere_cover_demo(const GroupOracle& oracle, int a, int n,
                                    std::size_t budget = kDefaultNodeBudget) {
  if (a < 3) throw InvalidParameter("demo needs a >= 3");
  if (n < 2) throw InvalidParameter("demo needs n >= 2");
  DemoReport rep;
  rep.a = a;
  rep.n = n;
  const auto rho_opt = detail::sphere_theorem_radius(a, n);
  if (!rho_opt || *rho_opt > static_cast<std::int64_t>(budget) || *rho_opt > (1 << 28)) {
    throw Infeasible("sphere radius (2a+1)^(n+2) is beyond the node budget");
  }
  const int rho = static_cast<int>(*rho_opt);
  rep.rho = rho;

  StreamedGrowth growth;
  try {
    growth = stream_sphere_sizes(oracle, rho, budget);
  } catch (const BudgetExceeded& e) {
    throw Infeasible(std::string("cannot reach the sphere radius: ") + e.what());
  }
  rep.sphere_size = growth.size_at(rho);
  rep.hypothesis_met = rep.sphere_size <= static_cast<std::uint64_t>(n);
  rep.steps.push_back({"sphere_size_at_most_n", rep.hypothesis_met,
                       "|S(" + std::to_string(rho) + ")| = " + std::to_string(rep.sphere_size)});
  if (!rep.hypothesis_met) return rep;
  if (!oracle.axis_word()) throw NoAxis(describe(oracle.spec()) + " has no designated geodesic axis");

  auto explore_or_infeasible = [&](int R) {
    try {
      return explore(oracle, R, budget);
    } catch (const BudgetExceeded& e) {
      throw Infeasible(std::string("demo table does not fit: ") + e.what());
    }
  };

  // D from the sphere at the identity sizes the final table.
  int D0 = 0;
  {
    auto table = explore_or_infeasible(3 * rho);
    auto space = sphere_as_metric_space(table, VertexId{0}, rho);
    auto p = build_gl_partition(space, a);
    if (p.trivial) throw TrivialPartition("gl-partition of S(gamma_0, rho) is trivial");
    D0 = static_cast<int>(std::ceil(p.D));
  }

  const int R = 4 * rho + 40 * D0;
  auto table = explore_or_infeasible(R);
  rep.table_radius = R;
  const auto axis = build_axis(table, rho + 40 * D0);
  rep.steps.push_back({"axis_geodesic", true, "gamma_i verified for |i| <= " + std::to_string(rho + 40 * D0)});

  rep.m_first = -40 * D0 - rho;
  rep.m_last = 40 * D0 - rho;
  struct SphereData {
    int m;
    FiniteMetricSpace space;
    GlPartition partition;
    std::vector<VertexId> points;
  };
  std::vector<SphereData> spheres;
  std::vector<int> centers;
  for (int m = static_cast<int>(rep.m_first); m <= rep.m_last; ++m) centers.push_back(m);
  bool certificates_ok = true;
  double D_max = 1;
  for (int m : centers) {
    auto points = sphere_vertices(table, axis.id_at(m), rho);
    auto space = sphere_as_metric_space(table, axis.id_at(m), rho);
    auto p = build_gl_partition(space, a);
    if (p.trivial) throw TrivialPartition("gl-partition of S(gamma_" + std::to_string(m) + ", rho) is trivial");
    certificates_ok = certificates_ok && verify_gl_partition(space, p.block_labels(space), a).valid();
    D_max = std::max(D_max, p.D);
    spheres.push_back({m, std::move(space), std::move(p), std::move(points)});
  }
  rep.spheres = spheres.size();
  rep.steps.push_back({"partitions_nontrivial", true, std::to_string(spheres.size()) + " spheres partitioned"});
  rep.steps.push_back({"partition_certificates", certificates_ok, "separation > a*D re-checked for every block"});

  bool similar = true;
  for (std::size_t i = 0; i < spheres.size() && similar; ++i) {
    for (std::size_t j = i + 1; j < spheres.size() && similar; ++j) {
      similar = similar_partitions(spheres[i].partition, spheres[i].space, spheres[j].partition, spheres[j].space);
    }
  }
  rep.steps.push_back({"partitions_pairwise_similar", similar, "all pairs compared"});
  const bool consistent = std::all_of(spheres.begin(), spheres.end(), [&](const auto& s) { return s.partition.D == D_max; }) &&
                          static_cast<int>(D_max) == D0;
  rep.steps.push_back({"common_D", consistent, "D = " + std::to_string(D0)});
  rep.D = D0;
  rep.steps.push_back({"rho_exceeds_aD", rho > a * D0,
                       std::to_string(rho) + " > " + std::to_string(a * D0)});
  if (!similar || !consistent) return rep;

  const int D = D0;
  rep.cover_radius = 39 * D;
  rep.index_bound = 40 * D;
  auto sphere_at = [&](int m) -> const SphereData& {
    return spheres.at(static_cast<std::size_t>(m - rep.m_first));
  };

  LocalBfs bfs(table);
  bool on_sphere = true, in_block = true, near_axis = true, covered = true;
  std::string first_failure;
  std::vector<LocalBfs> near;
  for (int i = -40 * D; i <= 40 * D; ++i) {
    near.emplace_back(table);
    near.back().run(axis.id_at(i), D);
  }
  const auto ball = table.ball_size(39 * D);
  rep.ball_vertices = ball;
  for (VertexId x = 0; x < ball; ++x) {
    bfs.run(x, rho);
    std::optional<int> m_hit;
    for (auto m = rep.m_first; m <= rep.m_last && !m_hit; ++m) {
      if (bfs.distance(axis.id_at(static_cast<int>(m))) == rho) m_hit = static_cast<int>(m);
    }
    if (!m_hit) {
      on_sphere = false;
      if (first_failure.empty()) first_failure = oracle.to_string(table.element(x)) + " lies on no S(gamma_m, rho)";
      continue;
    }
    const auto& s = sphere_at(*m_hit);
    auto pos_x = std::lower_bound(s.points.begin(), s.points.end(), x);
    auto pos_g = std::lower_bound(s.points.begin(), s.points.end(), axis.id_at(*m_hit + rho));
    auto bx = s.partition.block_of(static_cast<std::size_t>(pos_x - s.points.begin()));
    auto bg = s.partition.block_of(static_cast<std::size_t>(pos_g - s.points.begin()));
    if (!bx || !bg || *bx != *bg) {
      in_block = false;
      if (first_failure.empty()) first_failure = oracle.to_string(table.element(x)) + " is not in A_m";
    }
    const int d_axis = bfs.distance(axis.id_at(*m_hit + rho));
    if (d_axis < 0 || d_axis > D) near_axis = false;

    bool hit = false;
    for (auto& nb : near) hit = hit || nb.distance(x) == D;
    if (!hit) {
      covered = false;
      if (first_failure.empty()) first_failure = oracle.to_string(table.element(x)) + " is uncovered";
    }
  }
  rep.steps.push_back({"every_point_on_some_sphere", on_sphere,
                       "m ranges over [" + std::to_string(rep.m_first) + ", " + std::to_string(rep.m_last) + "]"});
  rep.steps.push_back({"point_in_axis_block", in_block,
                       first_failure.empty() ? "x in the block of S(gamma_m, rho) holding gamma_{rho+m}" : first_failure});
  rep.steps.push_back({"point_within_D_of_axis", near_axis, "d(x, gamma_{rho+m}) <= D"});
  rep.steps.push_back({"ball_covered_by_spheres", covered,
                       "B(gamma_0, " + std::to_string(39 * D) + ") inside union of S(gamma_i, " + std::to_string(D) +
                           "), |i| <= " + std::to_string(40 * D)});
  return rep;
}

}  // namespace endslab
