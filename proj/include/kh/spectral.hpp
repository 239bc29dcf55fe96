#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kh/complex.hpp"
#include "kh/homology.hpp"
#include "kh/partial.hpp"

namespace kh {

// Shift constants of the resolution filtration.  Vectors are indexed by the
// step k = 1..m (entry 0 unused); A and B carry the prefix sums with
// A_0 = B_0 = 0 and B_k = 3 A_k + k.
struct SSConstants {
  int m = 0;
  std::vector<int> a, a_tilde, b, b_tilde;
  std::vector<int> A, B;
};

// The sign of the k-th resolved crossing decides which diagram inherits the
// orientation: the open one for a positive crossing, the closed one for a
// negative.  From that sign the shift constants follow, and four identities
// tie them to the normalization shifts of the three diagrams involved.
inline SSConstants ss_constants(const PartialSequence& parts) {
  const int m = static_cast<int>(parts.open.size());
  SSConstants c;
  c.m = m;
  c.a.assign(m + 1, 0);
  c.a_tilde.assign(m + 1, 0);
  c.b.assign(m + 1, 0);
  c.b_tilde.assign(m + 1, 0);
  c.A.assign(m + 1, 0);
  c.B.assign(m + 1, 0);
  for (int k = 1; k <= m; ++k) {
    const auto& prev = parts.closed[k - 1];
    const auto& closed = parts.closed[k];
    const auto& open = parts.open[k - 1];
    const bool positive = open.inherited;
    if (positive) {
      c.a[k] = prev.n_minus - closed.n_minus - 1;
      c.a_tilde[k] = 0;
    } else {
      c.a[k] = 0;
      c.a_tilde[k] = prev.n_minus - open.n_minus;
    }
    c.b[k] = 3 * c.a[k] + 1;
    c.b_tilde[k] = 3 * c.a_tilde[k] - 1;
    c.A[k] = c.A[k - 1] + c.a[k];
    c.B[k] = c.B[k - 1] + c.b[k];

    // Shift identities from the normalized short exact sequence.
    bool ok = (-prev.n_minus + 1 == -closed.n_minus - c.a[k]) &&
              (-prev.n_minus == -open.n_minus - c.a_tilde[k]) &&
              (prev.n_plus - 2 * prev.n_minus + 1 ==
               closed.n_plus - 2 * closed.n_minus - c.b[k]) &&
              (prev.n_plus - 2 * prev.n_minus ==
               open.n_plus - 2 * open.n_minus - c.b_tilde[k]);
    if (!ok || c.B[k] != 3 * c.A[k] + k)
      throw std::runtime_error("inconsistent crossing counts in filtration step");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Short exact sequence checks.

struct SesReport {
  bool dims_ok = false;        // unnormalized splitting per bidegree
  bool closure_ok = false;     // sub-object closed under the differential
  bool normalized_ok = false;  // shifted splitting of normalized complexes
  std::string detail;
  bool ok() const { return dims_ok && closure_ok && normalized_ok; }
};

namespace detail {

// Unnormalized chain dimensions per (r, qdeg): a smoothing with k circles
// contributes binomial(k, z) states in qdeg r + k - 2z.
inline std::map<std::pair<int, int>, long long> chain_dims(const LinkDiagram& d) {
  std::map<std::pair<int, int>, long long> out;
  std::vector<std::vector<long long>> binom(33, std::vector<long long>(33, 0));
  for (int i = 0; i < 33; ++i) {
    binom[i][0] = 1;
    for (int j = 1; j <= i; ++j)
      binom[i][j] = binom[i - 1][j - 1] + (j < i ? binom[i - 1][j] : 0);
  }
  for (uint32_t mask = 0; mask < (1u << d.n()); ++mask) {
    int k = 0;
    circle_of_edge(d, mask, &k);
    int r = std::popcount(mask);
    for (int z = 0; z <= k; ++z) out[{r, r + k - 2 * z}] += binom[k][z];
  }
  return out;
}

}  // namespace detail

// Verifies the module decomposition behind filtration step k: splitting off
// the states whose k-th selected crossing is 1-smoothed leaves the open
// diagram's complex, the split part is a subcomplex, and the same identity
// holds for normalized complexes with the shift constants applied.
inline SesReport verify_ses(const LinkDiagram& d,
                            const std::vector<int>& selected, int k,
                            const OrientationChooser& choose = nullptr) {
  const int m = static_cast<int>(selected.size());
  if (k < 1 || k > m) throw std::invalid_argument("k out of range");
  PartialSequence parts = partial_diagrams(d, selected, choose);
  SSConstants cons = ss_constants(parts);

  const LinkDiagram& prev = parts.closed[k - 1].diagram;
  const LinkDiagram& closed = parts.closed[k].diagram;
  const LinkDiagram& open = parts.open[k - 1].diagram;

  SesReport rep;
  std::ostringstream detail;

  auto prev_dims = detail::chain_dims(prev);
  auto closed_dims = detail::chain_dims(closed);
  auto open_dims = detail::chain_dims(open);

  // Index of the k-th selected crossing inside prev (its crossings are the
  // unresolved ones of d in original order).
  std::vector<int> remaining;
  std::set<int> resolved(selected.begin(), selected.begin() + (k - 1));
  for (int x = 0; x < d.n(); ++x)
    if (!resolved.count(x)) remaining.push_back(x);
  int cx_in_prev = static_cast<int>(
      std::lower_bound(remaining.begin(), remaining.end(), selected[k - 1]) -
      remaining.begin());

  rep.dims_ok = true;
  std::set<std::pair<int, int>> bidegrees;
  for (const auto& [rq, dim] : prev_dims) bidegrees.insert(rq);
  for (const auto& [rq, dim] : open_dims) bidegrees.insert(rq);
  for (const auto& [rq, dim] : closed_dims)
    bidegrees.insert({rq.first + 1, rq.second + 1});
  for (const auto& [r, q] : bidegrees) {
    long long lhs = 0, rhs = 0;
    if (auto it = prev_dims.find({r, q}); it != prev_dims.end()) lhs = it->second;
    if (auto it = open_dims.find({r, q}); it != open_dims.end()) rhs += it->second;
    if (auto it = closed_dims.find({r - 1, q - 1}); it != closed_dims.end())
      rhs += it->second;
    if (lhs != rhs) {
      rep.dims_ok = false;
      detail << "chain dims differ at r=" << r << " q=" << q << " (" << lhs
             << " vs " << rhs << "); ";
      break;
    }
  }

  // Sub-object closure: no differential entry may leave the 1-smoothed part.
  rep.closure_ok = true;
  CubeComplex cube(prev, FrobeniusAlgebra::khovanov());
  for (int r = 0; r < prev.n() && rep.closure_ok; ++r) {
    auto from = cube.states(r);
    auto to = cube.states(r + 1);
    for (const auto& [row, col, v] : cube.entries_between(from, to)) {
      bool col_sub = (from[col].mask >> cx_in_prev) & 1u;
      bool row_sub = (to[row].mask >> cx_in_prev) & 1u;
      if (col_sub && !row_sub) {
        rep.closure_ok = false;
        detail << "differential leaves the subcomplex at r=" << r << "; ";
        break;
      }
    }
  }

  // Normalized identity with the shifts of the proposition.
  auto norm = [](const LinkDiagram& dia,
                 const std::map<std::pair<int, int>, long long>& dims) {
    std::map<std::pair<int, int>, long long> out;
    for (const auto& [rq, dim] : dims)
      out[{rq.first - dia.n_minus(),
           rq.second + dia.n_plus() - 2 * dia.n_minus()}] += dim;
    return out;
  };
  auto prev_n = norm(prev, prev_dims);
  auto closed_n = norm(closed, closed_dims);
  auto open_n = norm(open, open_dims);
  rep.normalized_ok = true;
  std::set<std::pair<int, int>> norm_bidegrees;
  for (const auto& [ij, dim] : prev_n) norm_bidegrees.insert(ij);
  for (const auto& [ij, dim] : closed_n)
    norm_bidegrees.insert({ij.first - cons.a[k], ij.second - cons.b[k]});
  for (const auto& [ij, dim] : open_n)
    norm_bidegrees.insert({ij.first - cons.a_tilde[k], ij.second - cons.b_tilde[k]});
  for (const auto& [i, j] : norm_bidegrees) {
    long long lhs = 0, rhs = 0;
    if (auto it = prev_n.find({i, j}); it != prev_n.end()) lhs = it->second;
    if (auto it = closed_n.find({i + cons.a[k], j + cons.b[k]});
        it != closed_n.end())
      rhs += it->second;
    if (auto it = open_n.find({i + cons.a_tilde[k], j + cons.b_tilde[k]});
        it != open_n.end())
      rhs += it->second;
    if (lhs != rhs) {
      rep.normalized_ok = false;
      detail << "normalized dims differ at i=" << i << " j=" << j << " ("
             << lhs << " vs " << rhs << "); ";
      break;
    }
  }

  rep.detail = detail.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Pages of the spectral sequence.

// One page at a fixed quantum degree j: dims[(s,t)] with s the filtration
// column.  Entries vanish outside 0 <= s <= m.
struct SSPage {
  int r = 1;
  int j = 0;
  std::map<std::pair<int, int>, long long> dims;
  bool operator==(const SSPage& o) const { return r == o.r && j == o.j && dims == o.dims; }
};

struct SSReport {
  int j = 0;
  std::vector<SSPage> pages;           // pages r = 1, 2, ...
  std::map<int, long long> kh_column;  // i -> dim Kh^{i,j}(D)
  int stable_r = 0;                    // index of the stable page
  bool converged = false;
  int collapse_r = 0;  // first r with page r equal to the stable page

  const SSPage& stable() const { return pages.at(stable_r - 1); }
};

// Shared machinery for one (diagram, selected crossings) pair: partial
// diagrams, constants, homology of the pieces, and rank computions on the
// filtered complex of the full diagram.
class SpectralEngine {
 public:
  SpectralEngine(const LinkDiagram& d, std::vector<int> selected,
                 const ComputeOptions& opts = {},
                 const OrientationChooser& choose = nullptr)
      : d_(d),
        selected_(std::move(selected)),
        opts_(opts),
        parts_(partial_diagrams(d, selected_, choose)),
        constants_(ss_constants(parts_)),
        cube_(d, FrobeniusAlgebra::khovanov(), opts.cube_limit),
        full_table_(khovanov_table(cube_, opts)) {
    for (const auto& open : parts_.open)
      open_tables_.push_back(khovanov_homology(open.diagram, opts_));
    closed_table_ = khovanov_homology(parts_.closed.back().diagram, opts_);
  }

  const PartialSequence& parts() const { return parts_; }
  const SSConstants& constants() const { return constants_; }
  const KhTable& full_table() const { return full_table_; }
  int m() const { return constants_.m; }

  // Quantum degrees with a nonzero chain group in the full complex.
  std::vector<int> nonzero_js() const {
    std::set<int> js;
    for (int q : cube_.block_keys()) js.insert(cube_.normalized_j(q));
    return {js.begin(), js.end()};
  }

  // First page assembled from the homology of the partial diagrams with the
  // index shifts of the filtration.
  SSPage e1_page(int j) const {
    SSPage page;
    page.r = 1;
    page.j = j;
    const int mm = m();
    for (int s = 0; s < mm; ++s) {
      int ish = constants_.A[s] + constants_.a_tilde[s + 1];
      int jsh = constants_.B[s] + constants_.b_tilde[s + 1];
      for (const auto& [ij, dim] : open_tables_[s].entries())
        if (ij.second == j + jsh) {
          int t = ij.first - ish - s;
          page.dims[{s, t}] += dim;
        }
    }
    for (const auto& [ij, dim] : closed_table_.entries())
      if (ij.second == j + constants_.B[mm]) {
        int t = ij.first - constants_.A[mm] - mm;
        page.dims[{mm, t}] += dim;
      }
    return page;
  }

  // Pages computed on the filtered complex itself, by ranks of staircase
  // submatrices of the differential at fixed quantum degree.  Stabilizes at
  // r = m+1; a later change is a hard error.
  SSReport compute_pages(int j, int r_max = 0) {
    SSReport rep;
    rep.j = j;
    const int mm = m();
    const int r_stop = std::max(r_max, mm + 2);

    JSlice slice = build_slice(j);

    for (int r = 1; r <= r_stop; ++r) {
      SSPage page;
      page.r = r;
      page.j = j;
      for (int s = 0; s <= mm; ++s) {
        for (const auto& [i, group] : slice.grades) {
          long long g = group.p_count[s];
          long long dim = g - rank_of(slice, i, s, s + r) +
                          rank_of(slice, i, s + 1, s + r) +
                          rank_of(slice, i - 1, s - r + 1, s) -
                          rank_of(slice, i - 1, s - r + 1, s + 1);
          if (dim != 0) page.dims[{s, i - s}] += dim;
        }
      }
      rep.pages.push_back(std::move(page));
    }

    rep.stable_r = mm + 1;
    if (rep.pages[mm].dims != rep.pages[mm + 1].dims)
      throw std::runtime_error("spectral sequence failed to stabilize at m+1");
    for (int r = static_cast<int>(rep.pages.size()); r >= 1; --r) {
      if (rep.pages[r - 1].dims == rep.pages[rep.stable_r - 1].dims)
        rep.collapse_r = r;
      else
        break;
    }

    for (const auto& [ij, dim] : full_table_.entries())
      if (ij.second == j) rep.kh_column[ij.first] = dim;
    std::map<int, long long> stable_sums;
    for (const auto& [st, dim] : rep.stable().dims)
      stable_sums[st.first + st.second] += dim;
    std::erase_if(stable_sums, [](const auto& e) { return e.second == 0; });
    rep.converged = stable_sums == rep.kh_column;
    return rep;
  }

 private:
  struct Grade {
    std::vector<CubeComplex::State> states;
    std::vector<int> p;            // filtration level per state
    std::vector<long long> p_count;  // states with p == s, indexed by s
  };
  struct JSlice {
    int qdeg = 0;
    std::map<int, Grade> grades;  // homological degree i -> basis
    // triplets of d_i in this slice, keyed by i
    std::map<int, std::vector<std::tuple<int, int, int>>> trips;
    std::map<std::tuple<int, int, int>, int> rank_cache;  // (i, u, v)
  };

  int filtration_level(uint32_t mask) const {
    int p = 0;
    for (int idx : selected_) {
      if ((mask >> idx) & 1u)
        ++p;
      else
        break;
    }
    return p;
  }

  JSlice build_slice(int j) {
    JSlice slice;
    slice.qdeg = j - d_.n_plus() + 2 * d_.n_minus();
    const int mm = m();
    for (int r = 0; r <= d_.n(); ++r) {
      Grade g;
      g.states = cube_.block_states(r, slice.qdeg);
      if (g.states.empty()) continue;
      g.p.reserve(g.states.size());
      g.p_count.assign(mm + 1, 0);
      for (const auto& st : g.states) {
        int p = filtration_level(st.mask);
        g.p.push_back(p);
        g.p_count[p] += 1;
      }
      slice.grades.emplace(cube_.homological_i(r), std::move(g));
    }
    for (auto& [i, g] : slice.grades) {
      auto next = slice.grades.find(i + 1);
      if (next == slice.grades.end()) continue;
      slice.trips[i] = cube_.entries_between(g.states, next->second.states);
    }
    return slice;
  }

  // Rank of the submatrix of d_i with columns of filtration >= u and rows
  // of filtration < v.
  int rank_of(JSlice& slice, int i, int u, int v) {
    const int mm = m();
    u = std::max(u, 0);
    v = std::min(v, mm + 1);
    if (u > mm || v <= 0) return 0;
    auto key = std::make_tuple(i, u, v);
    if (auto it = slice.rank_cache.find(key); it != slice.rank_cache.end())
      return it->second;

    int rank = 0;
    auto from_it = slice.grades.find(i);
    auto to_it = slice.grades.find(i + 1);
    auto trips_it = slice.trips.find(i);
    if (from_it == slice.grades.end() || to_it == slice.grades.end() ||
        trips_it == slice.trips.end()) {
      slice.rank_cache.emplace(key, 0);
      return 0;
    }
    const Grade& from = from_it->second;
    const Grade& to = to_it->second;

    std::vector<int> col_map(from.states.size(), -1);
    int ncols = 0;
    for (std::size_t c = 0; c < from.states.size(); ++c)
      if (from.p[c] >= u) col_map[c] = ncols++;
    std::vector<int> row_map(to.states.size(), -1);
    int nrows = 0;
    for (std::size_t r = 0; r < to.states.size(); ++r)
      if (to.p[r] < v) row_map[r] = nrows++;
    if (ncols > 0 && nrows > 0) {
      std::vector<std::tuple<int, int, int>> sub;
      for (const auto& [row, col, val] : trips_it->second)
        if (row_map[row] >= 0 && col_map[col] >= 0)
          sub.emplace_back(row_map[row], col_map[col], val);
      rank = triplet_rank(nrows, ncols, sub);
    }
    slice.rank_cache.emplace(key, rank);
    return rank;
  }

  LinkDiagram d_;
  std::vector<int> selected_;
  ComputeOptions opts_;
  PartialSequence parts_;
  SSConstants constants_;
  CubeComplex cube_;
  KhTable full_table_;
  std::vector<KhTable> open_tables_;
  KhTable closed_table_;
};

inline SSPage e1_page(const LinkDiagram& d, const std::vector<int>& selected,
                      int j, const ComputeOptions& opts = {},
                      const OrientationChooser& choose = nullptr) {
  return SpectralEngine(d, selected, opts, choose).e1_page(j);
}

inline SSReport compute_pages(const LinkDiagram& d,
                              const std::vector<int>& selected, int j,
                              int r_max = 0, const ComputeOptions& opts = {},
                              const OrientationChooser& choose = nullptr) {
  return SpectralEngine(d, selected, opts, choose).compute_pages(j, r_max);
}

// ---------------------------------------------------------------------------
// Long exact sequence bookkeeping for a single crossing.

struct LesReport {
  bool bound_ok = false;   // dim Kh(D) <= sum of shifted neighbor dims
  bool euler_ok = false;   // Euler characteristic additivity, via state sums
  std::string detail;
  bool ok() const { return bound_ok && euler_ok; }
};

inline LesReport skein_les_check(const LinkDiagram& d, int crossing,
                                 const ComputeOptions& opts = {}) {
  PartialSequence parts = partial_diagrams(d, {crossing});
  SSConstants cons = ss_constants(parts);
  const LinkDiagram& closed = parts.closed[1].diagram;
  const LinkDiagram& open = parts.open[0].diagram;

  LesReport rep;
  std::ostringstream detail;

  KhTable t = khovanov_homology(d, opts);
  KhTable tc = khovanov_homology(closed, opts);
  KhTable to = khovanov_homology(open, opts);

  rep.bound_ok = true;
  for (const auto& [ij, dim] : t.entries()) {
    long long lim = tc.dim(ij.first + cons.a[1], ij.second + cons.b[1]) +
                    to.dim(ij.first + cons.a_tilde[1], ij.second + cons.b_tilde[1]);
    if (dim > lim) {
      rep.bound_ok = false;
      detail << "middle dim exceeds neighbors at i=" << ij.first
             << " j=" << ij.second << "; ";
      break;
    }
  }

  // chi(D) = (-1)^a q^{-b} chi(closed) + (-1)^a~ q^{-b~} chi(open), with the
  // three sides computed by the independent state-sum oracle.
  LaurentPoly lhs = kauffman_jones(d, opts.cube_limit);
  LaurentPoly rc = kauffman_jones(closed, opts.cube_limit).shifted(-cons.b[1]);
  if (cons.a[1] % 2 != 0) rc = -rc;
  LaurentPoly ro = kauffman_jones(open, opts.cube_limit).shifted(-cons.b_tilde[1]);
  if (cons.a_tilde[1] % 2 != 0) ro = -ro;
  rep.euler_ok = lhs == rc + ro;
  if (!rep.euler_ok) detail << "euler additivity fails; ";

  rep.detail = detail.str();
  return rep;
}

}  // namespace kh
