#pragma once

// Test-side reference models. Each family is re-modelled from the action of
// its named generators on a plain state (integer vectors, lamp maps, letter
// stacks, affine maps of the line), independently of the library's element
// algebra. Brute-force BFS over these states gives sphere sizes, distances
// and annulus components to compare against.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "endslab/group.hpp"

namespace reftest {

using endslab::Family;
using endslab::GroupSpec;

struct State {
  std::vector<std::int64_t> v;                 // lattice, residues, affine (sign, shift), cursor
  std::map<std::int64_t, std::int64_t> lamps;  // nonzero only
  std::string word;                            // reduced free word, letters 'a'+i / 'A'+i
  std::vector<State> kids;                     // product factors

  std::string key() const {
    std::ostringstream os;
    os << '[';
    for (auto x : v) os << x << ',';
    os << '|';
    for (auto [p, x] : lamps) os << p << ':' << x << ',';
    os << '|' << word;
    for (const auto& k : kids) os << k.key();
    os << ']';
    return os.str();
  }
};

inline std::int64_t mod(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

inline State initial(const GroupSpec& s) {
  State st;
  switch (s.family) {
    case Family::trivial: break;
    case Family::cyclic_finite: st.v = {0}; break;
    case Family::z: st.v = {0}; break;
    case Family::z_pow: st.v.assign(static_cast<std::size_t>(s.param), 0); break;
    case Family::free: break;
    case Family::dihedral_inf: st.v = {1, 0}; break;  // x -> sign * x + shift
    case Family::z_cross_cyclic: st.v = {0, 0}; break;
    case Family::lamplighter: st.v = {0}; break;
    case Family::product: st.kids = {initial(s.factors[0]), initial(s.factors[1])}; break;
  }
  return st;
}

// Right multiplication by the generator called `name`.
inline void apply(const GroupSpec& s, State& st, const std::string& name) {
  const char c = name.empty() ? '?' : name[0];
  const bool upper = c >= 'A' && c <= 'Z';
  const int sign = upper ? -1 : 1;
  switch (s.family) {
    case Family::trivial: return;
    case Family::cyclic_finite: st.v[0] = mod(st.v[0] + sign, s.param); return;
    case Family::z: st.v[0] += sign; return;
    case Family::z_pow: st.v[static_cast<std::size_t>(std::stoi(name.substr(1)) - 1)] += sign; return;
    case Family::free: {
      const int i = std::stoi(name.substr(1)) - 1;
      const char letter = static_cast<char>((upper ? 'A' : 'a') + i);
      const char inverse = static_cast<char>((upper ? 'a' : 'A') + i);
      if (!st.word.empty() && st.word.back() == inverse) {
        st.word.pop_back();
      } else {
        st.word.push_back(letter);
      }
      return;
    }
    case Family::dihedral_inf: {
      // s: x -> -x, t: x -> 1 - x; the element is the composite map, and
      // right multiplication precomposes.
      const std::int64_t a = st.v[0], b = st.v[1];
      if (name == "s") {
        st.v = {-a, b};
      } else {
        st.v = {-a, a + b};
      }
      return;
    }
    case Family::z_cross_cyclic:
      if (c == 't' || c == 'T') {
        st.v[0] += sign;
      } else {
        st.v[1] = mod(st.v[1] + sign, s.param);
      }
      return;
    case Family::lamplighter:
      if (c == 't' || c == 'T') {
        st.v[0] += sign;
      } else {
        auto& lamp = st.lamps[st.v[0]];
        lamp = mod(lamp + sign, s.param);
        if (lamp == 0) st.lamps.erase(st.v[0]);
      }
      return;
    case Family::product:
      if (name.rfind("L.", 0) == 0) {
        apply(s.factors[0], st.kids[0], name.substr(2));
      } else {
        apply(s.factors[1], st.kids[1], name.substr(2));
      }
      return;
  }
}

inline std::string evaluate(const GroupSpec& s, const std::vector<std::string>& names) {
  State st = initial(s);
  for (const auto& n : names) apply(s, st, n);
  return st.key();
}

// Brute-force ball: states keyed by string, distances, adjacency by
// generator name.
struct RefBall {
  std::vector<std::string> keys;
  std::vector<int> dist;
  std::vector<std::vector<int>> adj;  // -1 outside the ball
  std::unordered_map<std::string, int> index;

  std::vector<std::uint64_t> sphere_sizes(int R) const {
    std::vector<std::uint64_t> out(static_cast<std::size_t>(R) + 1, 0);
    for (int d : dist) ++out[static_cast<std::size_t>(d)];
    return out;
  }
};

inline RefBall ref_ball(const GroupSpec& s, const std::vector<std::string>& gens, int R) {
  RefBall b;
  std::vector<State> states;
  auto add = [&](State st, int d) {
    auto k = st.key();
    auto [it, fresh] = b.index.emplace(k, static_cast<int>(b.keys.size()));
    if (fresh) {
      b.keys.push_back(k);
      b.dist.push_back(d);
      states.push_back(std::move(st));
    }
    return it->second;
  };
  add(initial(s), 0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (b.dist[i] >= R) continue;
    for (const auto& g : gens) {
      State next = states[i];
      apply(s, next, g);
      add(std::move(next), b.dist[i] + 1);
    }
  }
  b.adj.resize(b.keys.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (const auto& g : gens) {
      State next = states[i];
      apply(s, next, g);
      auto it = b.index.find(next.key());
      b.adj[i].push_back(it == b.index.end() ? -1 : it->second);
    }
  }
  return b;
}

struct RefComponent {
  std::size_t size = 0;
  bool touching = false;
  int max_distance = 0;
};

// Components of {r < d <= R} by iterative DFS.
inline std::vector<RefComponent> ref_components(const RefBall& b, int r, int R) {
  std::vector<RefComponent> out;
  std::vector<char> seen(b.keys.size(), 0);
  for (std::size_t s = 0; s < b.keys.size(); ++s) {
    if (seen[s] || b.dist[s] <= r || b.dist[s] > R) continue;
    RefComponent c;
    std::vector<std::size_t> stack = {s};
    seen[s] = 1;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      ++c.size;
      c.touching = c.touching || b.dist[v] == R;
      c.max_distance = std::max(c.max_distance, b.dist[v]);
      for (int w : b.adj[v]) {
        if (w < 0) continue;
        auto u = static_cast<std::size_t>(w);
        if (seen[u] || b.dist[u] <= r || b.dist[u] > R) continue;
        seen[u] = 1;
        stack.push_back(u);
      }
    }
    out.push_back(c);
  }
  return out;
}

inline std::vector<std::string> generator_names(const endslab::GroupOracle& o) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < o.degree(); ++j) out.push_back(o.generator_name(j));
  return out;
}

inline std::vector<std::size_t> random_word(std::mt19937_64& rng, std::size_t degree, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> letter(0, degree - 1);
  std::vector<std::size_t> w(static_cast<std::size_t>(len(rng)));
  for (auto& x : w) x = letter(rng);
  return w;
}

inline std::vector<GroupSpec> sample_families() {
  return {GroupSpec::trivial(),
          GroupSpec::cyclic(5),
          GroupSpec::integers(),
          GroupSpec::lattice(2),
          GroupSpec::lattice(3),
          GroupSpec::free_group(2),
          GroupSpec::free_group(3),
          GroupSpec::infinite_dihedral(),
          GroupSpec::z_cross_cyclic(3),
          GroupSpec::lamplighter(2),
          GroupSpec::lamplighter(3),
          GroupSpec::product(GroupSpec::integers(), GroupSpec::cyclic(2)),
          GroupSpec::product(GroupSpec::free_group(2), GroupSpec::integers()),
          GroupSpec::product(GroupSpec::lamplighter(2),
                             GroupSpec::product(GroupSpec::infinite_dihedral(), GroupSpec::cyclic(3)))};
}

}  // namespace reftest
