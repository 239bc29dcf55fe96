#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "kh/diagram.hpp"
#include "kh/frobenius.hpp"
#include "kh/smoothing.hpp"
#include "kh/sparse_matrix.hpp"

namespace kh {

struct ComputeOptions {
  int cube_limit = 24;
  int threads = 1;
};

// Cube-of-resolutions chain complex of a diagram for a rank-two Frobenius
// algebra.  States are enhanced smoothings (mask, labels): bit c of `mask` is
// the smoothing of crossing c, bit z of `labels` marks circle z of that
// smoothing with x.  Circles are numbered by minimal edge id; states are
// ordered by (mask, labels) so every basis and matrix is reproducible.
//
// Unnormalized gradings: homological r = popcount(mask), quantum
// qdeg = r + sum of label degrees.  Normalized: i = r - n_minus,
// j = qdeg + n_plus - 2*n_minus.
//
// The differential flips one 0-bit to 1 with sign (-1)^(number of 1s below
// the flipped bit) and applies the algebra's merge or split on the circles.
// For a graded algebra it preserves qdeg, so the complex splits into exact
// qdeg blocks; for a filtered one it splits modulo the algebra's period.
class CubeComplex {
 public:
  struct State {
    uint32_t mask = 0;
    uint32_t labels = 0;
    friend auto operator<=>(const State&, const State&) = default;
  };

  CubeComplex(const LinkDiagram& d, FrobeniusAlgebra algebra,
              int cube_limit = 24)
      : diagram_(d), algebra_(std::move(algebra)) {
    if (d.n() > cube_limit)
      throw std::invalid_argument("crossing count exceeds cube limit");
    n_ = d.n();
    period_ = algebra_.qdeg_period();
    const uint32_t total = 1u << n_;
    const int ne = diagram_.edge_count();
    circles_.resize(total);
    pack_parts_ = n_ <= 20;  // partition cache: 2^n * edge_count bytes
    if (pack_parts_) part_data_.resize(static_cast<std::size_t>(total) * ne);
    for (uint32_t mask = 0; mask < total; ++mask) {
      int k = 0;
      std::vector<int> part = detail::circle_of_edge(d, mask, &k);
      circles_[mask] = static_cast<uint8_t>(k);
      if (pack_parts_)
        for (int e = 0; e < ne; ++e)
          part_data_[static_cast<std::size_t>(mask) * ne + e] =
              static_cast<int8_t>(part[e]);
    }
  }

  const LinkDiagram& diagram() const { return diagram_; }
  const FrobeniusAlgebra& algebra() const { return algebra_; }
  int n() const { return n_; }
  bool graded() const { return period_ == 0; }

  int circle_count(uint32_t mask) const { return circles_[mask]; }

  long long total_dimension() const {
    long long t = 0;
    for (uint32_t mask = 0; mask < (1u << n_); ++mask)
      t += 1ll << circles_[mask];
    return t;
  }

  int qdeg(const State& s) const {
    int r = std::popcount(s.mask);
    int k = circles_[s.mask];
    int x = std::popcount(s.labels);
    return r + (k - x) - x;
  }

  int homological_i(int r) const { return r - diagram_.n_minus(); }
  int normalized_j(int q) const {
    return q + diagram_.n_plus() - 2 * diagram_.n_minus();
  }

  // Block key: exact qdeg for a graded algebra, qdeg residue otherwise.
  int key_of_qdeg(int q) const {
    if (period_ == 0) return q;
    return ((q % period_) + period_) % period_;
  }

  std::vector<int> block_keys() const {
    std::vector<int> keys;
    for (uint32_t mask = 0; mask < (1u << n_); ++mask) {
      int r = std::popcount(mask);
      int k = circles_[mask];
      for (int x = 0; x <= k; ++x) {
        int q = r + k - 2 * x;
        keys.push_back(key_of_qdeg(q));
      }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
  }

  // Ordered basis of the (r, key) block.
  std::vector<State> block_states(int r, int key) const {
    std::vector<State> out;
    for (uint32_t mask = 0; mask < (1u << n_); ++mask) {
      if (std::popcount(mask) != r) continue;
      int k = circles_[mask];
      for (uint32_t labels = 0; labels < (1u << k); ++labels) {
        int q = r + k - 2 * std::popcount(labels);
        if (key_of_qdeg(q) == key) out.push_back({mask, labels});
      }
    }
    return out;
  }

  // Ordered basis of all of degree r.
  std::vector<State> states(int r) const {
    std::vector<State> out;
    for (uint32_t mask = 0; mask < (1u << n_); ++mask) {
      if (std::popcount(mask) != r) continue;
      for (uint32_t labels = 0; labels < (1u << circles_[mask]); ++labels)
        out.push_back({mask, labels});
    }
    return out;
  }

  // Differential entries from the `from` basis into the `to` basis (both
  // sorted).  Targets must land inside `to`; this holds for full degrees and
  // for key-compatible blocks.
  std::vector<std::tuple<int, int, int>> entries_between(
      const std::vector<State>& from, const std::vector<State>& to) const {
    std::vector<std::tuple<int, int, int>> trips;
    std::optional<uint32_t> cached_mask;
    std::vector<Transition> trans;
    for (std::size_t col = 0; col < from.size(); ++col) {
      const State& s = from[col];
      if (!cached_mask || *cached_mask != s.mask) {
        cached_mask = s.mask;
        trans = transitions(s.mask);
      }
      for (const Transition& t : trans) {
        if (t.merge) {
          int la = (s.labels >> t.a) & 1u;
          int lb = (s.labels >> t.b) & 1u;
          for (const auto& [lc, coeff] : algebra_.mult[la][lb]) {
            uint32_t out_labels = relabel(s.labels, t);
            if (lc) out_labels |= 1u << t.target;
            push_entry(trips, to, {t.new_mask, out_labels},
                       static_cast<int>(col), t.sign * coeff);
          }
        } else {
          int la = (s.labels >> t.a) & 1u;
          for (const auto& [l1, l2, coeff] : algebra_.comult[la]) {
            uint32_t out_labels = relabel(s.labels, t);
            if (l1) out_labels |= 1u << t.target;
            if (l2) out_labels |= 1u << t.target2;
            push_entry(trips, to, {t.new_mask, out_labels},
                       static_cast<int>(col), t.sign * coeff);
          }
        }
      }
    }
    return trips;
  }

  // Full differential C_r -> C_{r+1} as an exact sparse matrix.
  SparseMat differential(int r) const {
    auto from = states(r);
    auto to = states(r + 1);
    SparseMat m(static_cast<int>(to.size()), static_cast<int>(from.size()));
    for (const auto& [row, col, v] : entries_between(from, to))
      m.add(row, col, v);
    return m;
  }

  bool d_squared_is_zero() const {
    for (int r = 0; r + 2 <= n_; ++r) {
      SparseMat a = differential(r);
      SparseMat b = differential(r + 1);
      if ((b * a).nnz() != 0) return false;
    }
    return true;
  }

 private:
  struct Transition {
    uint32_t new_mask = 0;
    int sign = 1;
    bool merge = false;
    int a = 0, b = 0;        // source circles (merge) or split circle in `a`
    int target = 0;          // merged circle, or first split circle
    int target2 = 0;         // second split circle
    std::vector<int> img;    // circle map, -1 on the split circle
  };

  // Per-edge circle index of a smoothing, via the cache when packed.
  std::vector<int> partition_of(uint32_t mask) const {
    const int ne = diagram_.edge_count();
    if (pack_parts_) {
      std::vector<int> part(ne);
      for (int e = 0; e < ne; ++e)
        part[e] = part_data_[static_cast<std::size_t>(mask) * ne + e];
      return part;
    }
    return detail::circle_of_edge(diagram_, mask, nullptr);
  }

  // Circle maps for every 0 -> 1 bit flip out of `mask`.  The flip either
  // merges two circles or splits one; which happens is read off by scanning
  // every edge's circle in the two smoothings.
  std::vector<Transition> transitions(uint32_t mask) const {
    std::vector<Transition> out;
    const int kc = circles_[mask];
    std::vector<int> part = partition_of(mask);
    for (int c = 0; c < n_; ++c) {
      if ((mask >> c) & 1u) continue;
      Transition t;
      t.new_mask = mask | (1u << c);
      t.sign = (std::popcount(mask & ((1u << c) - 1u)) & 1) ? -1 : 1;
      const int kn = circles_[t.new_mask];
      std::vector<int> next = partition_of(t.new_mask);

      t.img.assign(kc, -1);
      int split_circle = -1;
      int split_t1 = -1, split_t2 = -1;
      for (std::size_t e = 0; e < part.size(); ++e) {
        int cr = part[e], cs = next[e];
        if (t.img[cr] == -1) {
          t.img[cr] = cs;
        } else if (t.img[cr] != cs && split_circle < 0) {
          split_circle = cr;
          split_t1 = t.img[cr];
          split_t2 = cs;
        }
      }
      if (split_circle >= 0) {
        t.merge = false;
        t.a = split_circle;
        t.target = std::min(split_t1, split_t2);
        t.target2 = std::max(split_t1, split_t2);
        t.img[split_circle] = -1;
      } else {
        // Two circles share an image.
        std::vector<int> seen(kn, -1);
        t.merge = true;
        for (int ci = 0; ci < kc; ++ci) {
          int cs = t.img[ci];
          if (seen[cs] >= 0) {
            t.a = seen[cs];
            t.b = ci;
            t.target = cs;
          } else {
            seen[cs] = ci;
          }
        }
      }
      out.push_back(std::move(t));
    }
    return out;
  }

  uint32_t relabel(uint32_t labels, const Transition& t) const {
    uint32_t out = 0;
    for (std::size_t ci = 0; ci < t.img.size(); ++ci) {
      if (t.img[ci] < 0) continue;
      if (t.merge && (static_cast<int>(ci) == t.a || static_cast<int>(ci) == t.b))
        continue;  // merged labels set by the algebra
      if ((labels >> ci) & 1u) out |= 1u << t.img[ci];
    }
    return out;
  }

  void push_entry(std::vector<std::tuple<int, int, int>>& trips,
                  const std::vector<State>& to, const State& target, int col,
                  int coeff) const {
    if (coeff == 0) return;
    auto it = std::lower_bound(to.begin(), to.end(), target);
    if (it == to.end() || !(*it == target))
      throw std::runtime_error("differential target missing from block basis");
    trips.emplace_back(static_cast<int>(it - to.begin()), col, coeff);
  }

  LinkDiagram diagram_;
  FrobeniusAlgebra algebra_;
  int n_ = 0;
  int period_ = 0;
  bool pack_parts_ = false;
  std::vector<uint8_t> circles_;
  std::vector<int8_t> part_data_;
};

}  // namespace kh
