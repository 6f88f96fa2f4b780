#pragma once

// Line witnesses on the Z axis: K_i = {gamma_i, gamma_{i+1}}, r_i = i,
// A_i = gamma_1 .. gamma_{i-1}, B_i = gamma_{i+2} .. gamma_{2i}, for
// i = 2..6, with n = 2. Also random clustered metric spaces.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "endslab/cayley.hpp"
#include "endslab/ends.hpp"
#include "endslab/gl_partition.hpp"

namespace fixtures {

using namespace endslab;

inline constexpr int kFirstItem = 2;
inline constexpr int kLastItem = 6;
inline constexpr int kLineWitnessRadius = 3 * 2 * kLastItem;

inline std::vector<VertexId> axis_range(const GeodesicAxis& axis, int from, int to) {
  std::vector<VertexId> out;
  for (int i = from; i <= to; ++i) out.push_back(axis.id_at(i));
  return out;
}

inline ObssWitness line_witness(const BallTable& table) {
  const auto axis = build_axis(table, table.radius());
  ObssWitness w;
  w.n = 2;
  for (int i = kFirstItem; i <= kLastItem; ++i) {
    w.items.push_back({axis_range(axis, i, i + 1), i, axis_range(axis, 1, i - 1), axis_range(axis, i + 2, 2 * i)});
  }
  return w;
}

// A_1 = B_1.
inline ObssWitness same_sides(const BallTable& table) {
  auto w = line_witness(table);
  w.items.front().side_b = w.items.front().side_a;
  return w;
}

// r_i = 7 for every item; sides unchanged.
inline ObssWitness constant_radii(const BallTable& table) {
  auto w = line_witness(table);
  for (auto& item : w.items) item.radius = 7;
  return w;
}

// K_4 widened to three points (diameter 2 = n), sides moved outward.
inline ObssWitness wide_core(const BallTable& table) {
  const auto axis = build_axis(table, table.radius());
  auto w = line_witness(table);
  auto& item = w.items[4 - kFirstItem];
  item.core = axis_range(axis, 4, 6);
  item.side_a = axis_range(axis, 1, 3);
  item.side_b = axis_range(axis, 7, 9);
  return w;
}

// Clusters of points in the plane: cluster centers spread over `scale`,
// members within `spread` of their center.
inline FiniteMetricSpace clustered_instance(std::mt19937_64& rng, std::size_t n, double scale, double spread) {
  std::uniform_int_distribution<std::size_t> clusters_dist(1, std::max<std::size_t>(1, n / 2));
  const auto clusters = clusters_dist(rng);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::pair<double, double>> centers, pts;
  for (std::size_t c = 0; c < clusters; ++c) centers.emplace_back(scale * unit(rng), scale * unit(rng));
  std::uniform_int_distribution<std::size_t> pick(0, clusters - 1);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    auto [cx, cy] = centers[pick(rng)];
    pts.emplace_back(cx + spread * unit(rng), cy + spread * unit(rng));
    labels.push_back("p" + std::to_string(i));
  }
  std::vector<double> flat;
  for (auto [x1, y1] : pts) {
    for (auto [x2, y2] : pts) flat.push_back(std::hypot(x1 - x2, y1 - y2));
  }
  // Coincident points are nudged apart by re-drawing.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && flat[i * n + j] < 1e-6) return clustered_instance(rng, n, scale, spread);
    }
  }
  return FiniteMetricSpace(labels, flat);
}

}  // namespace fixtures
