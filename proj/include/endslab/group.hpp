#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "endslab/detail/varint.hpp"
#include "endslab/errors.hpp"
#include "endslab/group_spec.hpp"

namespace endslab {

// Residue mod m in [0, m). The trivial group uses modulus 1.
struct Residue {
  std::int64_t value = 0;
  bool operator==(const Residue&) const = default;
};

struct LatticePoint {
  std::vector<std::int64_t> coords;
  bool operator==(const LatticePoint&) const = default;
};

// Freely reduced word; letter +i is x_i, -i is x_i^{-1}.
struct ReducedWord {
  std::vector<std::int32_t> letters;
  bool operator==(const ReducedWord&) const = default;
};

// (st)^shift s^reflect
struct DihedralElement {
  std::int64_t shift = 0;
  bool reflect = false;
  bool operator==(const DihedralElement&) const = default;
};

// Finitely supported lamp map (sorted by position, values in [1, m)) and a
// cursor position.
struct LampConfiguration {
  std::vector<std::pair<std::int64_t, std::int64_t>> lamps;
  std::int64_t cursor = 0;
  bool operator==(const LampConfiguration&) const = default;
};

using Factor =
    std::variant<Residue, LatticePoint, ReducedWord, DihedralElement, LampConfiguration>;

// A group element is the tuple of its atomic factors, in the left-to-right
// order of the factors of the group spec. Non-product groups have one
// factor, except z_cross_cyclic which is stored as (z, z/m).
struct Element {
  std::vector<Factor> factors;
  bool operator==(const Element&) const = default;
};

namespace detail {

enum class AtomKind { residue, lattice, word, dihedral, lamps };

struct Atom {
  AtomKind kind;
  std::int64_t param;  // modulus, rank, or lamp modulus
};

inline std::int64_t mod(std::int64_t v, std::int64_t m) {
  auto r = v % m;
  return r < 0 ? r + m : r;
}

inline Factor atom_identity(const Atom& a) {
  switch (a.kind) {
    case AtomKind::residue: return Residue{0};
    case AtomKind::lattice:
      return LatticePoint{std::vector<std::int64_t>(static_cast<std::size_t>(a.param), 0)};
    case AtomKind::word: return ReducedWord{};
    case AtomKind::dihedral: return DihedralElement{};
    case AtomKind::lamps: return LampConfiguration{};
  }
  return Residue{0};
}

inline Factor atom_multiply(const Atom& a, const Factor& x, const Factor& y) {
  switch (a.kind) {
    case AtomKind::residue:
      return Residue{mod(std::get<Residue>(x).value + std::get<Residue>(y).value, a.param)};
    case AtomKind::lattice: {
      auto out = std::get<LatticePoint>(x);
      const auto& rhs = std::get<LatticePoint>(y).coords;
      for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += rhs[i];
      return out;
    }
    case AtomKind::word: {
      auto out = std::get<ReducedWord>(x);
      for (auto letter : std::get<ReducedWord>(y).letters) {
        if (!out.letters.empty() && out.letters.back() == -letter) {
          out.letters.pop_back();
        } else {
          out.letters.push_back(letter);
        }
      }
      return out;
    }
    case AtomKind::dihedral: {
      const auto& g = std::get<DihedralElement>(x);
      const auto& h = std::get<DihedralElement>(y);
      // s u^q s = u^{-q} with u = st
      return DihedralElement{g.shift + (g.reflect ? -h.shift : h.shift),
                             g.reflect != h.reflect};
    }
    case AtomKind::lamps: {
      // (f1, k1)(f2, k2) = (f1 + f2(. - k1), k1 + k2)
      const auto& g = std::get<LampConfiguration>(x);
      const auto& h = std::get<LampConfiguration>(y);
      LampConfiguration out;
      out.cursor = g.cursor + h.cursor;
      out.lamps.reserve(g.lamps.size() + h.lamps.size());
      std::size_t i = 0, j = 0;
      while (i < g.lamps.size() || j < h.lamps.size()) {
        if (j == h.lamps.size() ||
            (i < g.lamps.size() && g.lamps[i].first < h.lamps[j].first + g.cursor)) {
          out.lamps.push_back(g.lamps[i++]);
        } else if (i == g.lamps.size() ||
                   h.lamps[j].first + g.cursor < g.lamps[i].first) {
          out.lamps.emplace_back(h.lamps[j].first + g.cursor, h.lamps[j].second);
          ++j;
        } else {
          auto v = mod(g.lamps[i].second + h.lamps[j].second, a.param);
          if (v != 0) out.lamps.emplace_back(g.lamps[i].first, v);
          ++i;
          ++j;
        }
      }
      return out;
    }
  }
  return x;
}

inline Factor atom_invert(const Atom& a, const Factor& x) {
  switch (a.kind) {
    case AtomKind::residue:
      return Residue{mod(-std::get<Residue>(x).value, a.param)};
    case AtomKind::lattice: {
      auto out = std::get<LatticePoint>(x);
      for (auto& c : out.coords) c = -c;
      return out;
    }
    case AtomKind::word: {
      const auto& w = std::get<ReducedWord>(x).letters;
      ReducedWord out;
      out.letters.assign(w.rbegin(), w.rend());
      for (auto& l : out.letters) l = -l;
      return out;
    }
    case AtomKind::dihedral: {
      const auto& g = std::get<DihedralElement>(x);
      return g.reflect ? g : DihedralElement{-g.shift, false};
    }
    case AtomKind::lamps: {
      // (f, k)^{-1} = (-f(. + k), -k)
      const auto& g = std::get<LampConfiguration>(x);
      LampConfiguration out;
      out.cursor = -g.cursor;
      out.lamps.reserve(g.lamps.size());
      for (const auto& [pos, val] : g.lamps) {
        out.lamps.emplace_back(pos - g.cursor, mod(-val, a.param));
      }
      return out;
    }
  }
  return x;
}

inline void atom_encode(const Atom& a, const Factor& x, std::string& out) {
  switch (a.kind) {
    case AtomKind::residue:
      put_unsigned(out, static_cast<std::uint64_t>(std::get<Residue>(x).value));
      break;
    case AtomKind::lattice:
      for (auto c : std::get<LatticePoint>(x).coords) put_signed(out, c);
      break;
    case AtomKind::word: {
      const auto& w = std::get<ReducedWord>(x).letters;
      put_unsigned(out, w.size());
      for (auto l : w) put_signed(out, l);
      break;
    }
    case AtomKind::dihedral: {
      const auto& d = std::get<DihedralElement>(x);
      put_signed(out, d.shift);
      out.push_back(d.reflect ? 1 : 0);
      break;
    }
    case AtomKind::lamps: {
      const auto& l = std::get<LampConfiguration>(x);
      put_signed(out, l.cursor);
      put_unsigned(out, l.lamps.size());
      std::int64_t prev = 0;
      for (const auto& [pos, val] : l.lamps) {
        put_signed(out, pos - prev);
        put_unsigned(out, static_cast<std::uint64_t>(val));
        prev = pos;
      }
      break;
    }
  }
}

inline Factor atom_decode(const Atom& a, KeyReader& in) {
  switch (a.kind) {
    case AtomKind::residue:
      return Residue{static_cast<std::int64_t>(in.get_unsigned())};
    case AtomKind::lattice: {
      LatticePoint p;
      p.coords.resize(static_cast<std::size_t>(a.param));
      for (auto& c : p.coords) c = in.get_signed();
      return p;
    }
    case AtomKind::word: {
      ReducedWord w;
      auto n = in.get_unsigned();
      w.letters.resize(n);
      for (auto& l : w.letters) l = static_cast<std::int32_t>(in.get_signed());
      return w;
    }
    case AtomKind::dihedral: {
      DihedralElement d;
      d.shift = in.get_signed();
      d.reflect = in.get_unsigned() != 0;
      return d;
    }
    case AtomKind::lamps: {
      LampConfiguration l;
      l.cursor = in.get_signed();
      auto n = in.get_unsigned();
      l.lamps.reserve(n);
      std::int64_t prev = 0;
      for (std::uint64_t i = 0; i < n; ++i) {
        prev += in.get_signed();
        l.lamps.emplace_back(prev, static_cast<std::int64_t>(in.get_unsigned()));
      }
      return l;
    }
  }
  return Residue{0};
}

inline bool atom_is_canonical(const Atom& a, const Factor& x) {
  switch (a.kind) {
    case AtomKind::residue: {
      const auto* r = std::get_if<Residue>(&x);
      return r && r->value >= 0 && r->value < a.param;
    }
    case AtomKind::lattice: {
      const auto* p = std::get_if<LatticePoint>(&x);
      return p && static_cast<std::int64_t>(p->coords.size()) == a.param;
    }
    case AtomKind::word: {
      const auto* w = std::get_if<ReducedWord>(&x);
      if (!w) return false;
      for (std::size_t i = 0; i < w->letters.size(); ++i) {
        auto l = w->letters[i];
        if (l == 0 || std::abs(l) > a.param) return false;
        if (i > 0 && w->letters[i - 1] == -l) return false;
      }
      return true;
    }
    case AtomKind::dihedral:
      return std::holds_alternative<DihedralElement>(x);
    case AtomKind::lamps: {
      const auto* l = std::get_if<LampConfiguration>(&x);
      if (!l) return false;
      for (std::size_t i = 0; i < l->lamps.size(); ++i) {
        const auto& [pos, val] = l->lamps[i];
        if (val <= 0 || val >= a.param) return false;
        if (i > 0 && l->lamps[i - 1].first >= pos) return false;
      }
      return true;
    }
  }
  return false;
}

inline std::string atom_to_string(const Atom& a, const Factor& x) {
  switch (a.kind) {
    case AtomKind::residue:
      return std::to_string(std::get<Residue>(x).value);
    case AtomKind::lattice: {
      std::string s = "(";
      const auto& c = std::get<LatticePoint>(x).coords;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
      }
      return s + ")";
    }
    case AtomKind::word: {
      const auto& w = std::get<ReducedWord>(x).letters;
      if (w.empty()) return "e";
      std::string s;
      for (auto l : w) s += (l > 0 ? "x" : "X") + std::to_string(std::abs(l));
      return s;
    }
    case AtomKind::dihedral: {
      const auto& d = std::get<DihedralElement>(x);
      std::string s = d.shift == 0 ? "" : "(st)^" + std::to_string(d.shift);
      if (d.reflect) s += s.empty() ? "s" : " s";
      return s.empty() ? "e" : s;
    }
    case AtomKind::lamps: {
      const auto& l = std::get<LampConfiguration>(x);
      std::string s = "[";
      for (std::size_t i = 0; i < l.lamps.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(l.lamps[i].first) + ":" + std::to_string(l.lamps[i].second);
      }
      return s + "]@" + std::to_string(l.cursor);
    }
  }
  return "?";
}

inline nlohmann::json atom_to_json(const Atom& a, const Factor& x) {
  switch (a.kind) {
    case AtomKind::residue: return std::get<Residue>(x).value;
    case AtomKind::lattice: return std::get<LatticePoint>(x).coords;
    case AtomKind::word: return std::get<ReducedWord>(x).letters;
    case AtomKind::dihedral: {
      const auto& d = std::get<DihedralElement>(x);
      return {{"shift", d.shift}, {"reflect", d.reflect}};
    }
    case AtomKind::lamps: {
      const auto& l = std::get<LampConfiguration>(x);
      nlohmann::json lamps = nlohmann::json::array();
      for (const auto& [pos, val] : l.lamps) lamps.push_back({pos, val});
      return {{"lamps", lamps}, {"cursor", l.cursor}};
    }
  }
  return nullptr;
}

inline Factor atom_from_json(const Atom& a, const nlohmann::json& j) {
  try {
    switch (a.kind) {
      case AtomKind::residue: return Residue{j.get<std::int64_t>()};
      case AtomKind::lattice:
        if (j.is_number_integer()) return LatticePoint{{j.get<std::int64_t>()}};
        return LatticePoint{j.get<std::vector<std::int64_t>>()};
      case AtomKind::word: return ReducedWord{j.get<std::vector<std::int32_t>>()};
      case AtomKind::dihedral:
        return DihedralElement{j.at("shift").get<std::int64_t>(),
                               j.value("reflect", false)};
      case AtomKind::lamps: {
        LampConfiguration l;
        l.cursor = j.at("cursor").get<std::int64_t>();
        for (const auto& p : j.at("lamps")) {
          l.lamps.emplace_back(p.at(0).get<std::int64_t>(), p.at(1).get<std::int64_t>());
        }
        return l;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed element JSON: ") + e.what());
  }
  return Residue{0};
}

inline std::size_t atom_count(const GroupSpec& s) {
  switch (s.family) {
    case Family::z_cross_cyclic: return 2;
    case Family::product: return atom_count(s.factors[0]) + atom_count(s.factors[1]);
    default: return 1;
  }
}

inline void flatten_atoms(const GroupSpec& s, std::vector<Atom>& out) {
  switch (s.family) {
    case Family::trivial: out.push_back({AtomKind::residue, 1}); break;
    case Family::cyclic_finite: out.push_back({AtomKind::residue, s.param}); break;
    case Family::z: out.push_back({AtomKind::lattice, 1}); break;
    case Family::z_pow: out.push_back({AtomKind::lattice, s.param}); break;
    case Family::free: out.push_back({AtomKind::word, s.param}); break;
    case Family::dihedral_inf: out.push_back({AtomKind::dihedral, 0}); break;
    case Family::z_cross_cyclic:
      out.push_back({AtomKind::lattice, 1});
      out.push_back({AtomKind::residue, s.param});
      break;
    case Family::lamplighter: out.push_back({AtomKind::lamps, s.param}); break;
    case Family::product:
      flatten_atoms(s.factors[0], out);
      flatten_atoms(s.factors[1], out);
      break;
  }
}

// Generator of one spec node, as factors of that node only.
struct NodeGenerator {
  std::string name;
  std::vector<Factor> factors;
};

struct NodeGenerators {
  std::vector<NodeGenerator> gens;
  std::vector<std::string> axis;  // names of the axis base word
};

inline NodeGenerators node_generators(const GroupSpec& s) {
  NodeGenerators out;
  auto add = [&out](std::string name, Factor f) {
    out.gens.push_back({std::move(name), {std::move(f)}});
  };
  switch (s.family) {
    case Family::trivial:
      break;
    case Family::cyclic_finite:
      add("c", Residue{1});
      add("C", Residue{s.param - 1});
      break;
    case Family::z:
      add("t", LatticePoint{{1}});
      add("T", LatticePoint{{-1}});
      out.axis = {"t"};
      break;
    case Family::z_pow:
      for (int i = 0; i < s.param; ++i) {
        std::vector<std::int64_t> v(static_cast<std::size_t>(s.param), 0);
        v[static_cast<std::size_t>(i)] = 1;
        add("e" + std::to_string(i + 1), LatticePoint{v});
        v[static_cast<std::size_t>(i)] = -1;
        add("E" + std::to_string(i + 1), LatticePoint{v});
      }
      out.axis = {"e1"};
      break;
    case Family::free:
      for (int i = 1; i <= s.param; ++i) {
        add("x" + std::to_string(i), ReducedWord{{i}});
        add("X" + std::to_string(i), ReducedWord{{-i}});
      }
      out.axis = {"x1"};
      break;
    case Family::dihedral_inf:
      add("s", DihedralElement{0, true});
      add("t", DihedralElement{-1, true});  // t = s(st) = (st)^{-1} s
      out.axis = {"s", "t"};
      break;
    case Family::z_cross_cyclic:
      out.gens.push_back({"t", {LatticePoint{{1}}, Residue{0}}});
      out.gens.push_back({"T", {LatticePoint{{-1}}, Residue{0}}});
      out.gens.push_back({"c", {LatticePoint{{0}}, Residue{1}}});
      out.gens.push_back({"C", {LatticePoint{{0}}, Residue{s.param - 1}}});
      out.axis = {"t"};
      break;
    case Family::lamplighter:
      add("t", LampConfiguration{{}, 1});
      add("T", LampConfiguration{{}, -1});
      add("a", LampConfiguration{{{0, 1}}, 0});
      add("A", LampConfiguration{{{0, s.param - 1}}, 0});
      out.axis = {"t"};
      break;
    case Family::product: {
      std::vector<Atom> left_atoms, right_atoms;
      flatten_atoms(s.factors[0], left_atoms);
      flatten_atoms(s.factors[1], right_atoms);
      auto left = node_generators(s.factors[0]);
      auto right = node_generators(s.factors[1]);
      for (auto& g : left.gens) {
        for (const auto& a : right_atoms) g.factors.push_back(atom_identity(a));
        out.gens.push_back({"L." + g.name, std::move(g.factors)});
      }
      for (auto& g : right.gens) {
        std::vector<Factor> f;
        for (const auto& a : left_atoms) f.push_back(atom_identity(a));
        for (auto& x : g.factors) f.push_back(std::move(x));
        out.gens.push_back({"R." + g.name, std::move(f)});
      }
      const auto& chosen = !left.axis.empty() ? left.axis : right.axis;
      const char* prefix = !left.axis.empty() ? "L." : "R.";
      for (const auto& n : chosen) out.axis.push_back(prefix + n);
      break;
    }
  }
  return out;
}

inline bool spec_is_finite(const GroupSpec& s) {
  switch (s.family) {
    case Family::trivial:
    case Family::cyclic_finite:
      return true;
    case Family::product:
      return spec_is_finite(s.factors[0]) && spec_is_finite(s.factors[1]);
    default:
      return false;
  }
}

}  // namespace detail

// Element algebra plus symmetric generating set for one built-in group.
// Immutable after make_group; all members are const and reentrant.
class GroupOracle {
 public:
  const GroupSpec& spec() const { return spec_; }
  std::span<const Element> generators() const { return generators_; }
  std::size_t degree() const { return generators_.size(); }
  const std::string& generator_name(std::size_t j) const { return names_.at(j); }
  // Index of the inverse of generator j.
  std::size_t inverse_generator(std::size_t j) const { return inverse_.at(j); }
  // Base word of the designated geodesic axis, as generator indices.
  const std::optional<std::vector<std::size_t>>& axis_word() const { return axis_; }
  bool is_finite() const { return detail::spec_is_finite(spec_); }

  Element identity() const {
    Element e;
    e.factors.reserve(atoms_.size());
    for (const auto& a : atoms_) e.factors.push_back(detail::atom_identity(a));
    return e;
  }

  Element multiply(const Element& g, const Element& h) const {
    Element out;
    out.factors.reserve(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      out.factors.push_back(detail::atom_multiply(atoms_[i], g.factors[i], h.factors[i]));
    }
    return out;
  }

  Element invert(const Element& g) const {
    Element out;
    out.factors.reserve(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      out.factors.push_back(detail::atom_invert(atoms_[i], g.factors[i]));
    }
    return out;
  }

  // Injective byte encoding of a canonical element.
  std::string canonical_key(const Element& g) const {
    std::string out;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      detail::atom_encode(atoms_[i], g.factors[i], out);
    }
    return out;
  }

  Element decode_key(std::string_view key) const {
    detail::KeyReader in(key);
    Element out;
    out.factors.reserve(atoms_.size());
    for (const auto& a : atoms_) out.factors.push_back(detail::atom_decode(a, in));
    if (!in.done()) throw InvalidParameter("trailing bytes in canonical key");
    return out;
  }

  bool is_canonical(const Element& g) const {
    if (g.factors.size() != atoms_.size()) return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!detail::atom_is_canonical(atoms_[i], g.factors[i])) return false;
    }
    return true;
  }

  // Readable, injective label.
  std::string to_string(const Element& g) const {
    std::size_t pos = 0;
    return node_to_string(spec_, g, pos);
  }

  nlohmann::json to_json(const Element& g) const {
    std::size_t pos = 0;
    return node_to_json(spec_, g, pos);
  }

  // Parses the JSON layout produced by to_json; rejects non-canonical input.
  Element from_json(const nlohmann::json& j) const {
    Element out;
    node_from_json(spec_, j, out);
    if (!is_canonical(out)) {
      throw InvalidParameter("element is not in canonical form: " + j.dump());
    }
    return out;
  }

  // Product of the generators named by indices, left to right.
  Element word(std::span<const std::size_t> letters) const {
    Element g = identity();
    for (auto j : letters) g = multiply(g, generators_.at(j));
    return g;
  }

  std::optional<std::size_t> generator_index(std::string_view name) const {
    for (std::size_t j = 0; j < names_.size(); ++j) {
      if (names_[j] == name) return j;
    }
    return std::nullopt;
  }

 private:
  friend GroupOracle make_group(const GroupSpec& spec);

  std::string node_to_string(const GroupSpec& s, const Element& g, std::size_t& pos) const {
    switch (s.family) {
      case Family::product: {
        auto l = node_to_string(s.factors[0], g, pos);
        auto r = node_to_string(s.factors[1], g, pos);
        return "<" + l + "; " + r + ">";
      }
      case Family::z_cross_cyclic: {
        auto l = detail::atom_to_string(atoms_[pos], g.factors[pos]);
        ++pos;
        auto r = detail::atom_to_string(atoms_[pos], g.factors[pos]);
        ++pos;
        return "<" + l + "; " + r + ">";
      }
      default: {
        auto out = detail::atom_to_string(atoms_[pos], g.factors[pos]);
        ++pos;
        return out;
      }
    }
  }

  nlohmann::json node_to_json(const GroupSpec& s, const Element& g, std::size_t& pos) const {
    switch (s.family) {
      case Family::product: {
        nlohmann::json j;
        j["left"] = node_to_json(s.factors[0], g, pos);
        j["right"] = node_to_json(s.factors[1], g, pos);
        return j;
      }
      case Family::z_cross_cyclic: {
        auto x = std::get<LatticePoint>(g.factors[pos]).coords.at(0);
        auto c = std::get<Residue>(g.factors[pos + 1]).value;
        pos += 2;
        return nlohmann::json::array({x, c});
      }
      case Family::z: {
        auto x = std::get<LatticePoint>(g.factors[pos]).coords.at(0);
        ++pos;
        return x;
      }
      default: {
        auto out = detail::atom_to_json(atoms_[pos], g.factors[pos]);
        ++pos;
        return out;
      }
    }
  }

  void node_from_json(const GroupSpec& s, const nlohmann::json& j, Element& out) const {
    const auto pos = out.factors.size();
    switch (s.family) {
      case Family::product:
        if (!j.is_object() || !j.contains("left") || !j.contains("right")) {
          throw InvalidParameter("product element needs 'left' and 'right'");
        }
        node_from_json(s.factors[0], j.at("left"), out);
        node_from_json(s.factors[1], j.at("right"), out);
        break;
      case Family::z_cross_cyclic:
        if (!j.is_array() || j.size() != 2) {
          throw InvalidParameter("z_cross_cyclic element must be [x, c]");
        }
        out.factors.push_back(detail::atom_from_json(atoms_[pos], j.at(0)));
        out.factors.push_back(detail::atom_from_json(atoms_[pos + 1], j.at(1)));
        break;
      default:
        out.factors.push_back(detail::atom_from_json(atoms_[pos], j));
        break;
    }
  }

  GroupSpec spec_;
  std::vector<detail::Atom> atoms_;
  std::vector<Element> generators_;
  std::vector<std::string> names_;
  std::vector<std::size_t> inverse_;
  std::optional<std::vector<std::size_t>> axis_;
};

inline GroupOracle make_group(const GroupSpec& spec) {
  spec.validate();
  GroupOracle o;
  o.spec_ = spec;
  detail::flatten_atoms(spec, o.atoms_);

  auto node = detail::node_generators(spec);
  const auto identity_key = o.canonical_key(o.identity());
  std::unordered_map<std::string, std::size_t> seen;
  for (auto& g : node.gens) {
    Element e{std::move(g.factors)};
    auto key = o.canonical_key(e);
    if (key == identity_key || seen.contains(key)) continue;
    seen.emplace(std::move(key), o.generators_.size());
    o.generators_.push_back(std::move(e));
    o.names_.push_back(std::move(g.name));
  }
  for (const auto& g : o.generators_) {
    auto it = seen.find(o.canonical_key(o.invert(g)));
    if (it == seen.end()) {
      throw InvalidParameter("generating set is not closed under inversion");
    }
    o.inverse_.push_back(it->second);
  }
  if (!node.axis.empty() && !o.is_finite()) {
    std::vector<std::size_t> word;
    for (const auto& name : node.axis) word.push_back(*o.generator_index(name));
    o.axis_ = std::move(word);
  }
  return o;
}

}  // namespace endslab
