#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "endslab/cayley.hpp"
#include "endslab/errors.hpp"

namespace endslab {

inline constexpr double kMetricTolerance = 1e-9;

// n labelled points with a full distance matrix (row-major). The constructor
// rejects anything that is not a metric within kMetricTolerance.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> distances)
      : labels_(std::move(labels)), dist_(std::move(distances)) {
    validate();
  }

  static FiniteMetricSpace from_rows(std::vector<std::string> labels,
                                     const std::vector<std::vector<double>>& rows) {
    std::vector<double> flat;
    for (const auto& row : rows) {
      if (row.size() != rows.size()) throw InvalidParameter("distance matrix must be square");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return FiniteMetricSpace(std::move(labels), std::move(flat));
  }

  // Points on the real line, labelled by their coordinate.
  static FiniteMetricSpace on_line(const std::vector<double>& xs) {
    std::vector<std::string> labels;
    std::vector<double> flat;
    for (double x : xs) {
      std::ostringstream os;
      os << x;
      labels.push_back(os.str());
      for (double y : xs) flat.push_back(std::abs(x - y));
    }
    return FiniteMetricSpace(std::move(labels), std::move(flat));
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  double diameter() const { return *std::max_element(dist_.begin(), dist_.end()); }

  template <class Range>
  double diameter_of(const Range& idx) const {
    double d = 0;
    for (auto i : idx) {
      for (auto j : idx) d = std::max(d, (*this)(i, j));
    }
    return d;
  }

 private:
  void validate() const {
    const auto n = labels_.size();
    if (n == 0) throw InvalidParameter("metric space must have at least one point");
    if (dist_.size() != n * n) throw InvalidParameter("distance matrix must be n x n");
    if (std::set<std::string>(labels_.begin(), labels_.end()).size() != n) {
      throw InvalidParameter("point labels must be distinct");
    }
    auto d = [&](std::size_t i, std::size_t j) { return dist_[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
      if (d(i, i) != 0) throw InvalidParameter("diagonal distances must be zero");
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(d(i, j))) throw InvalidParameter("distances must be finite");
        if (i != j && !(d(i, j) > 0)) throw InvalidParameter("distinct points must have positive distance");
        if (std::abs(d(i, j) - d(j, i)) > kMetricTolerance) throw InvalidParameter("distances must be symmetric");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (d(i, k) > d(i, j) + d(j, k) + kMetricTolerance) {
            throw InvalidParameter("triangle inequality fails at (" + labels_[i] + ", " + labels_[j] + ", " +
                                   labels_[k] + ")");
          }
        }
      }
    }
  }

  std::vector<std::string> labels_;
  std::vector<double> dist_;
};

inline nlohmann::json to_json(const FiniteMetricSpace& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < s.size(); ++j) row.push_back(s(i, j));
    rows.push_back(row);
  }
  return {{"points", s.labels()}, {"distances", rows}};
}

inline FiniteMetricSpace metric_space_from_json(const nlohmann::json& j) {
  try {
    return FiniteMetricSpace::from_rows(j.at("points").get<std::vector<std::string>>(),
                                        j.at("distances").get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed metric space JSON: ") + e.what());
  }
}

struct GlPartition {
  int a = 3;
  std::vector<std::vector<std::size_t>> blocks;  // distinct blocks, each ascending, ordered by first index
  std::vector<std::size_t> multiplicity;         // how many seeds ended in each block
  double D = 1;                                  // max(diam(block), 1)
  int k = 0;                                     // first m with A_m(i) = A_{m+1}(i) for all i
  bool trivial = false;                          // some block is the whole space
  std::vector<double> d_trace;                   // d_0 .. d_k

  std::vector<std::vector<std::string>> block_labels(const FiniteMetricSpace& s) const {
    std::vector<std::vector<std::string>> out;
    for (const auto& b : blocks) {
      auto& labels = out.emplace_back();
      for (auto i : b) labels.push_back(s.label(i));
    }
    return out;
  }

  std::optional<std::size_t> block_of(std::size_t point) const {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (std::binary_search(blocks[b].begin(), blocks[b].end(), point)) return b;
    }
    return std::nullopt;
  }
};

namespace detail {

inline double checked_power(int base, int exp) {
  double p = 1;
  for (int i = 0; i < exp; ++i) p *= base;
  return p;
}

}  // namespace detail

// Starts from singletons with d_0 = 1 and repeats
//   A_m(i) = {y : d(y, A_{m-1}(i)) <= a * d_{m-1}},  d_m = max_j max(diam A_m(j), 1)
// until no set changes. The fixed point satisfies d(A_i, Y \ A_i) > a * D.
inline GlPartition build_gl_partition(const FiniteMetricSpace& space, int a) {
  if (a < 3) throw InvalidParameter("gl-partition parameter a must be an integer >= 3");
  const auto n = space.size();
  GlPartition out;
  out.a = a;

  std::vector<std::vector<char>> cur(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) cur[i][i] = 1;
  double d = 1;
  out.d_trace.push_back(d);
  int m = 0;
  std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
  while (true) {
    const double reach = a * d;
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t y = 0; y < n; ++y) {
        char in = 0;
        for (std::size_t x = 0; x < n && !in; ++x) in = cur[i][x] && space(x, y) <= reach;
        next[i][y] = in;
      }
      changed = changed || next[i] != cur[i];
    }
    if (!changed) break;
    cur.swap(next);
    ++m;
    d = 1;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> members;
      for (std::size_t y = 0; y < n; ++y) {
        if (cur[i][y]) members.push_back(y);
      }
      d = std::max(d, space.diameter_of(members));
    }
    out.d_trace.push_back(d);
    if (d > detail::checked_power(2 * a + 1, m) * (1 + kMetricTolerance)) {
      throw std::logic_error("gl-partition growth bound d_m <= (2a+1)^m violated");
    }
    if (static_cast<std::size_t>(m) > n + 1) throw std::logic_error("gl-partition took more than n + 1 steps");
  }
  out.k = m;
  out.D = d;

  std::map<std::vector<std::size_t>, std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> block;
    for (std::size_t y = 0; y < n; ++y) {
      if (cur[i][y]) block.push_back(y);
    }
    auto [it, fresh] = seen.emplace(block, out.blocks.size());
    if (fresh) {
      out.blocks.push_back(std::move(block));
      out.multiplicity.push_back(1);
    } else {
      ++out.multiplicity[it->second];
    }
  }
  out.trivial = std::any_of(out.blocks.begin(), out.blocks.end(), [n](const auto& b) { return b.size() == n; });
  return out;
}

struct VerificationReport {
  bool labels_valid = true;
  bool equal_or_disjoint = true;  // condition 1
  bool covers = true;             // condition 2
  bool separated = true;          // condition 3
  bool nontrivial = true;         // no block is the whole space
  double D = 1;
  double min_separation = std::numeric_limits<double>::infinity();
  std::vector<std::string> failures;

  bool valid() const { return labels_valid && equal_or_disjoint && covers && separated; }
};

// Re-checks the partition from raw distances only.
inline VerificationReport verify_gl_partition(const FiniteMetricSpace& space,
                                              const std::vector<std::vector<std::string>>& blocks, int a) {
  VerificationReport rep;
  const auto n = space.size();
  auto name = [](const std::vector<std::string>& b) {
    std::string s = "{";
    for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + b[i];
    return s + "}";
  };

  std::vector<std::set<std::size_t>> sets;
  for (const auto& b : blocks) {
    std::set<std::size_t> s;
    for (const auto& label : b) {
      auto i = space.index_of(label);
      if (!i) {
        rep.labels_valid = false;
        rep.failures.push_back("unknown label '" + label + "' in block " + name(b));
      } else {
        s.insert(*i);
      }
    }
    if (s.empty()) {
      rep.equal_or_disjoint = false;
      rep.failures.push_back("condition 1: empty block");
    }
    sets.push_back(std::move(s));
  }

  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (sets[i] == sets[j]) continue;
      bool meet = std::any_of(sets[i].begin(), sets[i].end(), [&](auto x) { return sets[j].contains(x); });
      if (meet) {
        rep.equal_or_disjoint = false;
        rep.failures.push_back("condition 1: blocks " + name(blocks[i]) + " and " + name(blocks[j]) +
                               " overlap without being equal");
      }
    }
  }

  std::set<std::size_t> covered;
  for (const auto& s : sets) covered.insert(s.begin(), s.end());
  if (covered.size() != n) {
    rep.covers = false;
    rep.failures.push_back("condition 2: blocks cover " + std::to_string(covered.size()) + " of " +
                           std::to_string(n) + " points");
  }

  for (const auto& s : sets) rep.D = std::max(rep.D, space.diameter_of(s));
  for (std::size_t b = 0; b < sets.size(); ++b) {
    const auto& s = sets[b];
    if (s.size() == n) rep.nontrivial = false;
    double sep = std::numeric_limits<double>::infinity();
    for (auto x : s) {
      for (std::size_t y = 0; y < n; ++y) {
        if (!s.contains(y)) sep = std::min(sep, space(x, y));
      }
    }
    rep.min_separation = std::min(rep.min_separation, sep);
    if (!(sep > a * rep.D)) {
      rep.separated = false;
      std::ostringstream os;
      os << "condition 3: d(" << name(blocks[b]) << ", rest) = " << sep << " <= a*D = " << a * rep.D;
      rep.failures.push_back(os.str());
    }
  }
  return rep;
}

inline nlohmann::json to_json(const GlPartition& p, const FiniteMetricSpace& space) {
  auto number = [](double x) -> nlohmann::json {
    if (std::floor(x) == x && std::abs(x) < 9e15) return static_cast<long long>(x);
    return x;
  };
  nlohmann::json trace = nlohmann::json::array();
  for (double d : p.d_trace) trace.push_back(number(d));
  return {{"a", p.a},           {"blocks", p.block_labels(space)}, {"D", number(p.D)},
          {"k", p.k},           {"trivial", p.trivial},            {"multiplicity", p.multiplicity},
          {"d_trace", trace}};
}

// ---------------------------------------------------------------------------
// Spheres of the Cayley graph as metric spaces

// Vertices of S(center, r), ascending by id.
inline std::vector<VertexId> sphere_vertices(const BallTable& table, VertexId center, int r) {
  if (r < 0) throw InvalidParameter("sphere radius must be >= 0");
  if (table.distance(center) + 3 * r > table.radius()) {
    throw TruncationTooSmall("sphere of radius " + std::to_string(r) + " around a vertex at distance " +
                             std::to_string(table.distance(center)) + " needs truncation " +
                             std::to_string(table.distance(center) + 3 * r));
  }
  LocalBfs bfs(table);
  bfs.run(center, r);
  std::vector<VertexId> out;
  for (auto v : bfs.visited()) {
    if (bfs.distance(v) == r) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// S(center, r) with its word-metric distances. Exact because geodesics
// between its points stay within d(e, center) + 3r of the identity.
inline FiniteMetricSpace sphere_as_metric_space(const BallTable& table, VertexId center, int r) {
  const auto points = sphere_vertices(table, center, r);
  const auto& oracle = table.oracle();
  std::vector<std::string> labels;
  std::vector<double> dist;
  LocalBfs bfs(table);
  for (auto v : points) {
    labels.push_back(oracle.to_string(table.element(v)));
    bfs.run(v, 2 * r);
    for (auto w : points) dist.push_back(bfs.distance(w));
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

inline FiniteMetricSpace sphere_as_metric_space(const BallTable& table, const Element& center, int r) {
  auto id = table.find(center);
  if (!id) throw TruncationTooSmall("sphere center lies outside the table");
  return sphere_as_metric_space(table, *id, r);
}

// ---------------------------------------------------------------------------
// Similarity

inline constexpr std::size_t kMaxIsometryBlock = 16;

namespace detail {

inline bool isometric(const FiniteMetricSpace& s1, const std::vector<std::size_t>& b1,
                      const FiniteMetricSpace& s2, const std::vector<std::size_t>& b2) {
  if (b1.size() != b2.size()) return false;
  auto multiset = [](const FiniteMetricSpace& s, const std::vector<std::size_t>& b) {
    std::vector<double> out;
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = i + 1; j < b.size(); ++j) out.push_back(s(b[i], b[j]));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto m1 = multiset(s1, b1), m2 = multiset(s2, b2);
  for (std::size_t i = 0; i < m1.size(); ++i) {
    if (std::abs(m1[i] - m2[i]) > kMetricTolerance) return false;
  }
  // Backtracking bijection b1[i] -> b2[image[i]].
  std::vector<std::size_t> image(b1.size());
  std::vector<char> used(b2.size(), 0);
  auto extend = [&](auto&& self, std::size_t i) -> bool {
    if (i == b1.size()) return true;
    for (std::size_t c = 0; c < b2.size(); ++c) {
      if (used[c]) continue;
      bool ok = true;
      for (std::size_t p = 0; p < i && ok; ++p) {
        ok = std::abs(s1(b1[i], b1[p]) - s2(b2[c], b2[image[p]])) <= kMetricTolerance;
      }
      if (!ok) continue;
      used[c] = 1;
      image[i] = c;
      if (self(self, i + 1)) return true;
      used[c] = 0;
    }
    return false;
  };
  return extend(extend, 0);
}

}  // namespace detail

// Same a, same number of distinct blocks, and a block matching under which
// matched blocks are isometric.
inline bool similar_partitions(const GlPartition& p1, const FiniteMetricSpace& s1, const GlPartition& p2,
                               const FiniteMetricSpace& s2) {
  if (p1.trivial || p2.trivial) throw InvalidParameter("similarity is defined for non-trivial partitions");
  for (const auto* p : {&p1, &p2}) {
    for (const auto& b : p->blocks) {
      if (b.size() > kMaxIsometryBlock) {
        throw Infeasible("block of " + std::to_string(b.size()) + " points exceeds the isometry search bound of " +
                         std::to_string(kMaxIsometryBlock));
      }
    }
  }
  if (p1.a != p2.a || p1.blocks.size() != p2.blocks.size()) return false;
  const auto m = p1.blocks.size();
  std::vector<std::vector<char>> iso(m, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) iso[i][j] = detail::isometric(s1, p1.blocks[i], s2, p2.blocks[j]);
  }
  std::vector<char> used(m, 0);
  auto match = [&](auto&& self, std::size_t i) -> bool {
    if (i == m) return true;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j] || !iso[i][j]) continue;
      used[j] = 1;
      if (self(self, i + 1)) return true;
      used[j] = 0;
    }
    return false;
  };
  return match(match, 0);
}

}  // namespace endslab
