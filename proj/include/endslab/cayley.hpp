#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <ranges>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "endslab/errors.hpp"
#include "endslab/group.hpp"

namespace endslab {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr std::size_t kDefaultNodeBudget = 5'000'000;

// B(R) of the Cayley graph with exact word-metric distances from the
// identity. Vertex ids are assigned in BFS order, so each sphere S(r) is a
// contiguous id range and the identity is vertex 0.
//
// Move-only: the key index stores pointers into its own hash map nodes.
class BallTable {
 public:
  BallTable(BallTable&&) noexcept = default;
  BallTable& operator=(BallTable&&) noexcept = default;
  BallTable(const BallTable&) = delete;
  BallTable& operator=(const BallTable&) = delete;

  const GroupOracle& oracle() const { return oracle_; }
  int radius() const { return radius_; }
  // Every generator-neighbor of every vertex lies in the table, i.e. the
  // table is the whole (finite) group.
  bool complete_group() const { return complete_; }
  std::size_t size() const { return dist_.size(); }
  std::size_t degree() const { return oracle_.degree(); }

  int distance(VertexId v) const { return dist_.at(v); }
  const std::string& key(VertexId v) const { return *keys_.at(v); }
  Element element(VertexId v) const { return oracle_.decode_key(key(v)); }

  std::optional<VertexId> find(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<VertexId> find(const Element& g) const {
    return find(oracle_.canonical_key(g));
  }

  // Vertices of S(r); empty when r is outside [0, radius].
  std::ranges::iota_view<VertexId, VertexId> layer(int r) const {
    if (r < 0 || r + 1 >= static_cast<int>(offsets_.size())) return {0, 0};
    return {offsets_[static_cast<std::size_t>(r)], offsets_[static_cast<std::size_t>(r) + 1]};
  }
  // |B(r)| for r <= radius.
  std::size_t ball_size(int r) const {
    if (r < 0) return 0;
    auto i = std::min<std::size_t>(static_cast<std::size_t>(r) + 1, offsets_.size() - 1);
    return offsets_[i];
  }

  // Neighbor v*s_j for each generator j, kNoVertex when outside B(R).
  std::span<const VertexId> neighbors(VertexId v) const {
    return std::span<const VertexId>(adjacency_).subspan(std::size_t{v} * degree(), degree());
  }

 private:
  friend BallTable explore(const GroupOracle&, int, std::size_t);
  BallTable() = default;

  GroupOracle oracle_;
  int radius_ = 0;
  bool complete_ = false;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<const std::string*> keys_;
  std::vector<int> dist_;
  std::vector<VertexId> offsets_;  // offsets_[r] = |B(r-1)|
  std::vector<VertexId> adjacency_;
};

// Breadth-first materialization of B(R). Throws BudgetExceeded when the
// table would hold more than `budget` elements.
inline BallTable explore(const GroupOracle& oracle, int R, std::size_t budget = kDefaultNodeBudget) {
  if (R < 0) throw InvalidParameter("exploration radius must be >= 0");
  if (budget == 0) throw BudgetExceeded(-1, budget);
  BallTable t;
  t.oracle_ = oracle;
  t.radius_ = R;
  const auto deg = oracle.degree();
  const auto gens = oracle.generators();

  auto insert = [&t](std::string key, int d) {
    auto [it, fresh] = t.index_.emplace(std::move(key), static_cast<VertexId>(t.dist_.size()));
    if (fresh) {
      t.keys_.push_back(&it->first);
      t.dist_.push_back(d);
    }
    return std::pair{it->second, fresh};
  };

  insert(oracle.canonical_key(oracle.identity()), 0);
  t.offsets_ = {0, 1};
  t.adjacency_.assign(deg, kNoVertex);

  for (int r = 0; r < R; ++r) {
    const VertexId first = t.offsets_[static_cast<std::size_t>(r)];
    const VertexId last = t.offsets_[static_cast<std::size_t>(r) + 1];
    for (VertexId v = first; v < last; ++v) {
      const Element g = t.element(v);
      for (std::size_t j = 0; j < deg; ++j) {
        auto [w, fresh] = insert(oracle.canonical_key(oracle.multiply(g, gens[j])), r + 1);
        if (fresh && t.dist_.size() > budget) throw BudgetExceeded(r, budget);
        t.adjacency_[std::size_t{v} * deg + j] = w;
      }
      t.adjacency_.resize(t.dist_.size() * deg, kNoVertex);
    }
    t.offsets_.push_back(static_cast<VertexId>(t.dist_.size()));
  }

  // Outermost sphere: edges back into the table only.
  const VertexId first = t.offsets_[static_cast<std::size_t>(R)];
  const VertexId last = t.offsets_[static_cast<std::size_t>(R) + 1];
  for (VertexId v = first; v < last; ++v) {
    const Element g = t.element(v);
    for (std::size_t j = 0; j < deg; ++j) {
      auto w = t.find(oracle.canonical_key(oracle.multiply(g, gens[j])));
      t.adjacency_[std::size_t{v} * deg + j] = w.value_or(kNoVertex);
    }
  }
  t.complete_ = std::find(t.adjacency_.begin(), t.adjacency_.end(), kNoVertex) ==
                t.adjacency_.end();
  return t;
}

// |S(r)| for r = 0..R.
inline std::vector<std::uint64_t> sphere_sizes(const BallTable& table) {
  std::vector<std::uint64_t> out;
  for (int r = 0; r <= table.radius(); ++r) out.push_back(table.layer(r).size());
  return out;
}

struct StreamedGrowth {
  // |S(r)| for r = 0..R, cut short after the first empty sphere when the
  // group is exhausted.
  std::vector<std::uint64_t> sizes;
  bool complete_group = false;
  std::uint64_t visited = 0;
  std::size_t peak_resident = 0;

  std::uint64_t size_at(int r) const {
    return static_cast<std::size_t>(r) < sizes.size() ? sizes[static_cast<std::size_t>(r)] : 0;
  }
};

// Sphere sizes without materializing the ball: BFS neighbors of S(r) lie in
// S(r-1), S(r) or S(r+1), so three layers of keys suffice. The budget bounds
// the number of keys held at once.
inline StreamedGrowth stream_sphere_sizes(const GroupOracle& oracle, int R,
                                          std::size_t resident_budget = kDefaultNodeBudget) {
  if (R < 0) throw InvalidParameter("radius must be >= 0");
  StreamedGrowth out;
  std::unordered_set<std::string> prev, cur, next;
  cur.insert(oracle.canonical_key(oracle.identity()));
  out.sizes.push_back(1);
  out.visited = 1;
  out.peak_resident = 1;
  const auto gens = oracle.generators();
  for (int r = 1; r <= R; ++r) {
    next.clear();
    for (const auto& key : cur) {
      const Element g = oracle.decode_key(key);
      for (const auto& s : gens) {
        auto k = oracle.canonical_key(oracle.multiply(g, s));
        if (prev.contains(k) || cur.contains(k)) continue;
        if (next.insert(std::move(k)).second) {
          const auto resident = prev.size() + cur.size() + next.size();
          if (resident > resident_budget) throw BudgetExceeded(r - 1, resident_budget);
          out.peak_resident = std::max(out.peak_resident, resident);
        }
      }
    }
    out.sizes.push_back(next.size());
    out.visited += next.size();
    if (next.empty()) {
      out.complete_group = true;
      break;
    }
    prev.swap(cur);
    cur.swap(next);
  }
  return out;
}

// Reusable breadth-first search over the table's induced subgraph. Reset is
// proportional to the number of vertices touched, not the table size.
class LocalBfs {
 public:
  explicit LocalBfs(const BallTable& table)
      : table_(&table), dist_(table.size(), -1) {}

  // BFS from `sources` up to `max_depth` (negative = unbounded), through
  // vertices accepted by `allow`. Sources are always entered.
  template <class Allow>
  void run(std::span<const VertexId> sources, int max_depth, Allow allow) {
    for (auto v : order_) dist_[v] = -1;
    order_.clear();
    for (auto s : sources) {
      if (dist_[s] < 0) {
        dist_[s] = 0;
        order_.push_back(s);
      }
    }
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const auto v = order_[head];
      const int d = dist_[v];
      if (max_depth >= 0 && d >= max_depth) continue;
      for (auto w : table_->neighbors(v)) {
        if (w == kNoVertex || dist_[w] >= 0 || !allow(w)) continue;
        dist_[w] = d + 1;
        order_.push_back(w);
      }
    }
  }

  void run(std::span<const VertexId> sources, int max_depth) {
    run(sources, max_depth, [](VertexId) { return true; });
  }

  void run(VertexId source, int max_depth) {
    run(std::span<const VertexId>(&source, 1), max_depth);
  }

  // Distance from the last run's sources, -1 when not reached.
  int distance(VertexId v) const { return dist_[v]; }
  // Reached vertices in BFS order.
  std::span<const VertexId> visited() const { return order_; }

 private:
  const BallTable* table_;
  std::vector<int> dist_;
  std::vector<VertexId> order_;
};

// gamma_i for i in [-L, L]: gamma_i is the length-|i| prefix of w^infinity
// (of (w^-1)^infinity for negative i).
struct GeodesicAxis {
  std::vector<std::size_t> base_word;
  int extent = 0;
  std::vector<Element> vertices;  // gamma_{i} at index i + extent
  std::vector<VertexId> ids;

  const Element& at(int i) const { return vertices.at(static_cast<std::size_t>(i + extent)); }
  VertexId id_at(int i) const { return ids.at(static_cast<std::size_t>(i + extent)); }
};

inline GeodesicAxis build_axis(const BallTable& table, int L) {
  const auto& oracle = table.oracle();
  if (!oracle.axis_word()) {
    throw NoAxis(describe(oracle.spec()) + " has no designated geodesic axis");
  }
  if (L < 0 || L > table.radius()) {
    throw InvalidParameter("axis extent must lie in [0, R]");
  }
  GeodesicAxis axis;
  axis.base_word = *oracle.axis_word();
  axis.extent = L;
  std::vector<std::size_t> inverse_word;
  for (auto it = axis.base_word.rbegin(); it != axis.base_word.rend(); ++it) {
    inverse_word.push_back(oracle.inverse_generator(*it));
  }
  std::vector<Element> forward{oracle.identity()}, backward{oracle.identity()};
  const auto gens = oracle.generators();
  for (int i = 1; i <= L; ++i) {
    auto step = static_cast<std::size_t>(i - 1);
    forward.push_back(oracle.multiply(forward.back(), gens[axis.base_word[step % axis.base_word.size()]]));
    backward.push_back(oracle.multiply(backward.back(), gens[inverse_word[step % inverse_word.size()]]));
  }
  for (int i = -L; i <= L; ++i) {
    auto& g = i < 0 ? backward[static_cast<std::size_t>(-i)] : forward[static_cast<std::size_t>(i)];
    auto id = table.find(g);
    if (!id || table.distance(*id) != std::abs(i)) {
      throw NotGeodesic("axis vertex gamma_" + std::to_string(i) + " = " + oracle.to_string(g) +
                        " is not at distance " + std::to_string(std::abs(i)));
    }
    axis.ids.push_back(*id);
    axis.vertices.push_back(std::move(g));
  }
  return axis;
}

// Debug dump: hex key, element, distance, neighbors inside the table.
inline void write_table_csv(std::ostream& os, const BallTable& table) {
  os << "key,element,distance,neighbors\n";
  for (VertexId v = 0; v < table.size(); ++v) {
    std::ostringstream hex;
    for (unsigned char c : table.key(v)) {
      hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(c);
    }
    std::size_t inside = 0;
    for (auto w : table.neighbors(v)) inside += (w != kNoVertex);
    os << hex.str() << ",\"" << table.oracle().to_string(table.element(v)) << "\","
       << table.distance(v) << "," << inside << "\n";
  }
}

}  // namespace endslab
