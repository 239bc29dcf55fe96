#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kh/diagram.hpp"

namespace kh {

// A vertex of the cube {0,1}^n, indexed by crossing order.
struct Smoothing {
  std::vector<uint8_t> bits;

  int r() const {
    int s = 0;
    for (uint8_t b : bits) s += b;
    return s;
  }

  static Smoothing from_mask(uint32_t mask, int n) {
    Smoothing s;
    s.bits.resize(n);
    for (int i = 0; i < n; ++i) s.bits[i] = (mask >> i) & 1u;
    return s;
  }
};

// Circles of a smoothed diagram.  Circles are numbered by their minimal edge
// id so the labeling is reproducible.
struct CirclePartition {
  int circle_count = 0;
  std::map<int, int> assignment;  // edge id -> circle index
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Circle structure of a full smoothing, on dense edge indices.  At each
// crossing the 0-smoothing joins slots (0,1) and (2,3); the 1-smoothing
// joins (0,3) and (1,2).
inline std::vector<int> circle_of_edge(const LinkDiagram& d, uint32_t mask,
                                       int* count_out) {
  const int ne = d.edge_count();
  UnionFind uf(ne);
  for (int x = 0; x < d.n(); ++x) {
    const auto& e = d.crossings()[x].e;
    if ((mask >> x) & 1u) {
      uf.unite(d.edge_index(e[0]), d.edge_index(e[3]));
      uf.unite(d.edge_index(e[1]), d.edge_index(e[2]));
    } else {
      uf.unite(d.edge_index(e[0]), d.edge_index(e[1]));
      uf.unite(d.edge_index(e[2]), d.edge_index(e[3]));
    }
  }
  std::vector<int> circle(ne, -1);
  int count = 0;
  for (int i = 0; i < ne; ++i)
    if (uf.find(i) == i) circle[i] = count++;
  for (int i = 0; i < ne; ++i) circle[i] = circle[uf.find(i)];
  if (count_out) *count_out = count;
  return circle;
}

}  // namespace detail

inline CirclePartition resolve(const LinkDiagram& d, const Smoothing& s) {
  if (static_cast<int>(s.bits.size()) != d.n())
    throw std::invalid_argument("smoothing length does not match crossing count");
  uint32_t mask = 0;
  for (int i = 0; i < d.n(); ++i)
    if (s.bits[i]) mask |= 1u << i;
  CirclePartition p;
  std::vector<int> circle = detail::circle_of_edge(d, mask, &p.circle_count);
  for (int i = 0; i < d.edge_count(); ++i)
    p.assignment[d.edge_ids()[i]] = circle[i];
  return p;
}

}  // namespace kh
