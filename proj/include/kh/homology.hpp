#pragma once

#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kh/complex.hpp"
#include "kh/laurent.hpp"
#include "kh/parallel.hpp"

namespace kh {

// Bigraded dimension table (homological degree i, quantum degree j).
class KhTable {
 public:
  void add(int i, int j, long long dim) {
    if (dim == 0) return;
    auto key = std::make_pair(i, j);
    auto it = dims_.find(key);
    if (it == dims_.end())
      dims_.emplace(key, dim);
    else {
      it->second += dim;
      if (it->second == 0) dims_.erase(it);
    }
  }

  long long dim(int i, int j) const {
    auto it = dims_.find({i, j});
    return it == dims_.end() ? 0 : it->second;
  }

  const std::map<std::pair<int, int>, long long>& entries() const {
    return dims_;
  }

  long long total_dimension() const {
    long long t = 0;
    for (const auto& [ij, d] : dims_) t += d;
    return t;
  }

  bool operator==(const KhTable& o) const { return dims_ == o.dims_; }

  // The table of the mirror link: (i, j) -> (-i, -j).
  KhTable mirrored() const {
    KhTable t;
    for (const auto& [ij, d] : dims_) t.add(-ij.first, -ij.second, d);
    return t;
  }

  LaurentPoly graded_euler() const {
    LaurentPoly p;
    for (const auto& [ij, d] : dims_) {
      long v = static_cast<long>(ij.first % 2 != 0 ? -d : d);
      p.add_term(ij.second, Int(v));
    }
    return p;
  }

  // Dimensions summed per homological degree.
  std::map<int, long long> column_sums() const {
    std::map<int, long long> out;
    for (const auto& [ij, d] : dims_) out[ij.first] += d;
    return out;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    // Sorted by (j, i) to match the report ordering.
    std::map<std::pair<int, int>, long long> byj;
    for (const auto& [ij, d] : dims_) byj[{ij.second, ij.first}] = d;
    for (const auto& [ji, d] : byj) {
      if (!first) os << ", ";
      first = false;
      os << "(" << ji.second << "," << ji.first << "):" << d;
    }
    return os.str();
  }

 private:
  std::map<std::pair<int, int>, long long> dims_;
};

// Singly graded table for the filtered theory.
using LeeTable = std::map<int, long long>;

namespace detail {

// Block dimensions and differential ranks of the complex, for every
// (degree r, block key).  Jobs are independent rank computations, so the
// parallel grain is one (key, r) pair.
struct BlockRanks {
  std::vector<int> keys;
  // dims[key_index][r], ranks[key_index][r] = rank of d: (r,key) -> (r+1,key)
  std::vector<std::vector<long long>> dims;
  std::vector<std::vector<int>> ranks;
};

inline BlockRanks block_ranks(const CubeComplex& cx, const ComputeOptions& opts) {
  BlockRanks out;
  out.keys = cx.block_keys();
  const int nk = static_cast<int>(out.keys.size());
  const int nr = cx.n() + 1;
  out.dims.assign(nk, std::vector<long long>(nr + 1, 0));
  out.ranks.assign(nk, std::vector<int>(nr + 1, 0));
  // Large eliminations can fill in heavily; run them one at a time so peak
  // memory stays bounded while small blocks proceed in parallel.
  std::mutex big_mu;
  const std::size_t big_threshold = 30000;
  parallel_for(nk * nr, opts.threads, [&](int job) {
    int ki = job / nr, r = job % nr;
    auto cur = cx.block_states(r, out.keys[ki]);
    out.dims[ki][r] = static_cast<long long>(cur.size());
    if (cur.empty() || r >= cx.n()) return;
    auto next = cx.block_states(r + 1, out.keys[ki]);
    if (next.empty()) return;
    auto trips = cx.entries_between(cur, next);
    bool big = cur.size() + next.size() > big_threshold;
    std::unique_lock<std::mutex> lock(big_mu, std::defer_lock);
    if (big) lock.lock();
    out.ranks[ki][r] = triplet_rank(static_cast<int>(next.size()),
                                    static_cast<int>(cur.size()), trips);
  });
  return out;
}

}  // namespace detail

// dim Kh^{i,j} per block: dim C - rank(d out) - rank(d in), all within the
// j block of the graded complex.
inline KhTable khovanov_table(const CubeComplex& cx,
                              const ComputeOptions& opts = {}) {
  if (!cx.graded())
    throw std::invalid_argument("khovanov_table requires a graded algebra");
  detail::BlockRanks br = detail::block_ranks(cx, opts);
  KhTable out;
  for (std::size_t ki = 0; ki < br.keys.size(); ++ki)
    for (int r = 0; r <= cx.n(); ++r) {
      long long dim = br.dims[ki][r] - br.ranks[ki][r] -
                      (r > 0 ? br.ranks[ki][r - 1] : 0);
      if (dim != 0)
        out.add(cx.homological_i(r), cx.normalized_j(br.keys[ki]), dim);
    }
  return out;
}

inline KhTable khovanov_homology(const LinkDiagram& d,
                                 const ComputeOptions& opts = {}) {
  CubeComplex cx(d, FrobeniusAlgebra::khovanov(), opts.cube_limit);
  return khovanov_table(cx, opts);
}

// Lee homology per homological degree.  The filtered complex splits modulo
// the algebra's quantum period, so each residue class is handled separately
// and the degreewise dimensions are summed.
inline LeeTable lee_homology(const LinkDiagram& d,
                             const ComputeOptions& opts = {}) {
  CubeComplex cx(d, FrobeniusAlgebra::lee(), opts.cube_limit);
  detail::BlockRanks br = detail::block_ranks(cx, opts);
  LeeTable out;
  for (std::size_t ki = 0; ki < br.keys.size(); ++ki)
    for (int r = 0; r <= cx.n(); ++r) {
      long long dim = br.dims[ki][r] - br.ranks[ki][r] -
                      (r > 0 ? br.ranks[ki][r - 1] : 0);
      if (dim != 0) out[cx.homological_i(r)] += dim;
    }
  std::erase_if(out, [](const auto& e) { return e.second == 0; });

  long long total = 0;
  for (const auto& [i, dim] : out) total += dim;
  long long expect = 1ll << d.component_count();
  if (total != expect)
    throw std::runtime_error("lee homology dimension is not 2^components");
  return out;
}

// Degrees in which the filtered theory must have generators: one per subset
// E of components, in degree 2 * sum_{l in E, m not in E} lk(l, m), computed
// from the linking matrix of the original orientation.
inline std::map<int, long long> expected_lee_degrees(const LinkDiagram& d) {
  int k = d.component_count();
  const auto& lk = d.linking_matrix();
  std::map<int, long long> out;
  for (uint32_t e = 0; e < (1u << k); ++e) {
    int sum = 0;
    for (int l = 0; l < k; ++l)
      for (int m = 0; m < k; ++m)
        if (((e >> l) & 1u) && !((e >> m) & 1u)) sum += lk[l][m];
    out[2 * sum] += 1;
  }
  return out;
}

// Kauffman state sum: sum over smoothings of (-q)^{r} (q + 1/q)^{circles},
// normalized by (-1)^{n^-} q^{n^+ - 2 n^-}.  Independent of the homology
// pipeline; equals the graded Euler characteristic of the Khovanov table.
inline LaurentPoly kauffman_jones(const LinkDiagram& d, int cube_limit = 24) {
  if (d.n() > cube_limit)
    throw std::invalid_argument("crossing count exceeds cube limit");
  // Group smoothings by (r, k): the polynomial work is then one pass.
  std::map<std::pair<int, int>, long long> count;
  for (uint32_t mask = 0; mask < (1u << d.n()); ++mask) {
    int k = 0;
    detail::circle_of_edge(d, mask, &k);
    count[{std::popcount(mask), k}] += 1;
  }
  LaurentPoly total;
  LaurentPoly circle = LaurentPoly::circle();
  std::map<int, LaurentPoly> circle_pow;
  for (const auto& [rk, c] : count) {
    auto [r, k] = rk;
    auto it = circle_pow.find(k);
    if (it == circle_pow.end())
      it = circle_pow.emplace(k, circle.pow(k)).first;
    LaurentPoly term = it->second.shifted(r);
    if (r % 2 != 0) term = -term;
    LaurentPoly scaled;
    for (const auto& [e, co] : term.coefficients())
      scaled.add_term(e, co * Int(static_cast<long>(c)));
    total = total + scaled;
  }
  LaurentPoly shifted = total.shifted(d.n_plus() - 2 * d.n_minus());
  return (d.n_minus() % 2 != 0) ? -shifted : shifted;
}

inline LaurentPoly graded_euler(const KhTable& t) { return t.graded_euler(); }

}  // namespace kh
