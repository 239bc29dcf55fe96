#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kh/rational.hpp"

namespace kh {

namespace detail {

struct Overflow {};

// Value traits for the elimination engine: exact big integers, and a machine
// path that detects overflow and defers to the big-integer rerun.
struct BigOps {
  using Val = Int;
  static bool is_zero(const Val& v) { return v == 0; }
  static Val abs_val(const Val& v) { return abs(v); }
  static bool abs_less(const Val& a, const Val& b) { return abs(a) < abs(b); }
  static Val combine(const Val& p, const Val& x, const Val& a, const Val& y) {
    return p * x - a * y;  // p*row - a*pivot_row entrywise
  }
  static void strip_content(std::vector<std::pair<int, Val>>& row) {
    if (row.empty()) return;
    Int g = 0;
    for (const auto& [c, v] : row) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      if (g == 1) return;
    }
    if (g > 1)
      for (auto& [c, v] : row)
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }
};

struct FastOps {
  using Val = int64_t;
  static constexpr int64_t kLimit = int64_t(1) << 62;
  static bool is_zero(Val v) { return v == 0; }
  static Val abs_val(Val v) { return v < 0 ? -v : v; }
  static bool abs_less(Val a, Val b) { return abs_val(a) < abs_val(b); }
  static Val combine(Val p, Val x, Val a, Val y) {
    __int128 r = static_cast<__int128>(p) * x - static_cast<__int128>(a) * y;
    if (r >= kLimit || r <= -kLimit) throw Overflow{};
    return static_cast<Val>(r);
  }
  static void strip_content(std::vector<std::pair<int, Val>>& row) {
    if (row.empty()) return;
    int64_t g = 0;
    for (const auto& [c, v] : row) {
      g = std::gcd(g, v);
      if (g == 1) return;
    }
    if (g > 1)
      for (auto& [c, v] : row) v /= g;
  }
};

// Rank over Q by fraction-free elimination.  Pivots are chosen by the
// Markowitz fill estimate (nnz_row-1)*(nnz_col-1) among the sparsest live
// rows, ties broken by smallest magnitude and then position.  Updated rows
// are combined integrally (p*row - a*pivot_row) and reduced by their content,
// which keeps entry growth under control without rational arithmetic.
template <typename Ops>
int eliminate_rank(std::vector<std::vector<std::pair<int, typename Ops::Val>>>& rows,
                   int ncols) {
  using Val = typename Ops::Val;
  const int nr = static_cast<int>(rows.size());
  std::vector<char> row_live(nr, 1);
  std::vector<int> col_nnz(ncols, 0);
  std::vector<std::vector<int>> col_rows(ncols);  // lazy, may hold stale rows
  for (int r = 0; r < nr; ++r)
    for (const auto& [c, v] : rows[r]) {
      col_rows[c].push_back(r);
      ++col_nnz[c];
    }

  auto row_nnz = [&](int r) { return static_cast<int>(rows[r].size()); };

  // nnz buckets over live rows keep the pivot search away from full scans.
  const int kMaxBucket = 48;
  std::vector<std::set<int>> bucket(kMaxBucket + 1);
  auto bucket_of = [&](int n) { return std::min(n, kMaxBucket); };
  for (int r = 0; r < nr; ++r)
    if (row_nnz(r) > 0) bucket[bucket_of(row_nnz(r))].insert(r);

  int rank = 0;
  while (true) {
    int pr = -1, pc = -1;
    long long best_cost = -1;
    Val best_abs{};
    int examined = 0;
    for (int b = 1; b <= kMaxBucket; ++b) {
      for (int r : bucket[b]) {
        for (const auto& [c, v] : rows[r]) {
          long long cost =
              static_cast<long long>(row_nnz(r) - 1) * (col_nnz[c] - 1);
          Val a = Ops::abs_val(v);
          bool better = false;
          if (pr < 0 || cost < best_cost)
            better = true;
          else if (cost == best_cost) {
            if (Ops::abs_less(a, best_abs))
              better = true;
            else if (!Ops::abs_less(best_abs, a) &&
                     std::make_pair(r, c) < std::make_pair(pr, pc))
              better = true;
          }
          if (better) {
            pr = r;
            pc = c;
            best_cost = cost;
            best_abs = a;
          }
        }
        if (++examined >= 48) break;
      }
      if (examined >= 48 || (pr >= 0 && examined >= 16)) break;
    }
    if (pr < 0) break;

    ++rank;
    Val pval{};
    for (const auto& [c, v] : rows[pr])
      if (c == pc) pval = v;

    std::vector<int> targets;
    targets.swap(col_rows[pc]);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (int r : targets) {
      if (r == pr || !row_live[r]) continue;
      Val a{};
      bool has = false;
      for (const auto& [c, v] : rows[r])
        if (c == pc) {
          a = v;
          has = true;
        }
      if (!has) continue;  // stale index entry

      int old_n = row_nnz(r);
      std::vector<std::pair<int, Val>> merged;
      merged.reserve(rows[r].size() + rows[pr].size());
      auto it1 = rows[r].begin(), e1 = rows[r].end();
      auto it2 = rows[pr].begin(), e2 = rows[pr].end();
      while (it1 != e1 || it2 != e2) {
        if (it2 == e2 || (it1 != e1 && it1->first < it2->first)) {
          merged.emplace_back(it1->first, Ops::combine(pval, it1->second, a, Val{}));
          ++it1;
        } else if (it1 == e1 || it2->first < it1->first) {
          merged.emplace_back(it2->first, Ops::combine(pval, Val{}, a, it2->second));
          ++it2;
        } else {
          Val v = Ops::combine(pval, it1->second, a, it2->second);
          if (!Ops::is_zero(v)) merged.emplace_back(it1->first, std::move(v));
          ++it1;
          ++it2;
        }
      }
      Ops::strip_content(merged);

      // Column bookkeeping: counts are exact, the index is lazy (stale rows
      // are filtered by the containment check above).
      for (const auto& [c, v] : rows[r]) --col_nnz[c];
      rows[r] = std::move(merged);
      for (const auto& [c, v] : rows[r]) {
        ++col_nnz[c];
        col_rows[c].push_back(r);
      }

      if (row_live[r]) {
        if (old_n > 0) bucket[bucket_of(old_n)].erase(r);
        if (row_nnz(r) > 0) bucket[bucket_of(row_nnz(r))].insert(r);
      }
    }

    bucket[bucket_of(row_nnz(pr))].erase(pr);
    for (const auto& [c, v] : rows[pr]) --col_nnz[c];
    rows[pr].clear();
    rows[pr].shrink_to_fit();
    row_live[pr] = 0;
  }
  return rank;
}

}  // namespace detail

// Sparse matrix over the rationals.  Entries are stored in a sorted map and
// zeros are never kept, so equality and iteration are deterministic.
class SparseMat {
 public:
  SparseMat() = default;
  SparseMat(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative dimension");
  }

  static SparseMat identity(int n) {
    SparseMat m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void set(int r, int c, const Rational& v) {
    check_index(r, c);
    if (v == 0)
      entries_.erase({r, c});
    else
      entries_[{r, c}] = v;
  }

  void add(int r, int c, const Rational& v) {
    check_index(r, c);
    auto it = entries_.find({r, c});
    if (it == entries_.end()) {
      if (v != 0) entries_.emplace(std::make_pair(r, c), v);
    } else {
      it->second += v;
      if (it->second == 0) entries_.erase(it);
    }
  }

  Rational at(int r, int c) const {
    check_index(r, c);
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Rational(0) : it->second;
  }

  std::size_t nnz() const { return entries_.size(); }
  const std::map<std::pair<int, int>, Rational>& entries() const {
    return entries_;
  }

  SparseMat transpose() const {
    SparseMat t(cols_, rows_);
    for (const auto& [rc, v] : entries_) t.entries_[{rc.second, rc.first}] = v;
    return t;
  }

  SparseMat operator*(const SparseMat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("shape mismatch");
    SparseMat p(rows_, o.cols_);
    std::vector<std::vector<std::pair<int, Rational>>> rhs(o.rows_);
    for (const auto& [rc, v] : o.entries_) rhs[rc.first].emplace_back(rc.second, v);
    for (const auto& [rc, v] : entries_)
      for (const auto& [c2, v2] : rhs[rc.second]) p.add(rc.first, c2, v * v2);
    return p;
  }

  bool operator==(const SparseMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

  // Rank over Q.  Denominators are cleared row by row (row scaling does not
  // change rank), then the integer elimination engine does the rest.
  int rank() const {
    std::vector<std::vector<std::pair<int, Int>>> m(rows_);
    int cur_row = -1;
    Int lcm = 1;
    std::vector<std::pair<int, Rational>> pending;
    auto flush = [&]() {
      if (cur_row < 0) return;
      for (auto& [c, v] : pending)
        m[cur_row].emplace_back(c, Int(v.get_num() * (lcm / v.get_den())));
      pending.clear();
    };
    for (const auto& [rc, v] : entries_) {
      if (rc.first != cur_row) {
        flush();
        cur_row = rc.first;
        lcm = 1;
      }
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den().get_mpz_t());
      pending.emplace_back(rc.second, v);
    }
    flush();

    // Machine-integer pass first; big-integer rerun if entries outgrow it.
    bool fits = true;
    std::vector<std::vector<std::pair<int, int64_t>>> fast(rows_);
    for (int r = 0; r < rows_ && fits; ++r) {
      fast[r].reserve(m[r].size());
      for (const auto& [c, v] : m[r]) {
        if (!v.fits_slong_p()) {
          fits = false;
          break;
        }
        fast[r].emplace_back(c, v.get_si());
      }
    }
    if (fits) {
      try {
        return detail::eliminate_rank<detail::FastOps>(fast, cols_);
      } catch (const detail::Overflow&) {
      }
    }
    return detail::eliminate_rank<detail::BigOps>(m, cols_);
  }

  int kernel_dim() const { return cols_ - rank(); }

 private:
  void check_index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
      throw std::out_of_range("matrix index out of range");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::map<std::pair<int, int>, Rational> entries_;
};

// Rank of an integer triplet list, the fast path used when assembling
// differential blocks (entries there are small machine integers).
inline int triplet_rank(int rows, int cols,
                        const std::vector<std::tuple<int, int, int>>& trips) {
  std::vector<std::vector<std::pair<int, int64_t>>> fast(rows);
  for (const auto& [r, c, v] : trips)
    if (v != 0) fast[r].emplace_back(c, v);
  for (auto& row : fast) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, int64_t>> out;
    for (auto& [c, v] : row) {
      if (!out.empty() && out.back().first == c)
        out.back().second += v;
      else
        out.emplace_back(c, v);
    }
    std::erase_if(out, [](const auto& e) { return e.second == 0; });
    row = std::move(out);
  }
  try {
    return detail::eliminate_rank<detail::FastOps>(fast, cols);
  } catch (const detail::Overflow&) {
  }
  std::vector<std::vector<std::pair<int, Int>>> big(rows);
  for (const auto& [r, c, v] : trips)
    if (v != 0) big[r].emplace_back(c, Int(v));
  for (auto& row : big) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, Int>> out;
    for (auto& [c, v] : row) {
      if (!out.empty() && out.back().first == c)
        out.back().second += v;
      else
        out.emplace_back(c, std::move(v));
    }
    std::erase_if(out, [](const auto& e) { return e.second == 0; });
    row = std::move(out);
  }
  return detail::eliminate_rank<detail::BigOps>(big, cols);
}

}  // namespace kh
