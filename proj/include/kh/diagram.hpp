#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kh/braid.hpp"

namespace kh {

// One crossing in PD convention: the four edge identifiers are listed
// counterclockwise starting from the incoming under-strand.  The under
// strand runs e[0] -> e[2]; the over strand occupies e[1] and e[3] with its
// direction determined globally.  A crossing is positive exactly when the
// over strand enters at e[3], which makes the 0-smoothing (joining e0-e1 and
// e2-e3) the oriented resolution.
struct Crossing {
  std::array<int, 4> e{};
  bool operator==(const Crossing&) const = default;
};

// An oriented link diagram: PD crossings plus explicit crossingless circles
// (PD codes cannot express a closed curve that meets no crossing).
class LinkDiagram {
 public:
  LinkDiagram() = default;

  // Builds a diagram, deriving edge directions from the records: under
  // strands are forced, over strands are propagated for consistency.
  static LinkDiagram build(std::vector<Crossing> crossings,
                           std::vector<int> circles) {
    LinkDiagram d;
    d.crossings_ = std::move(crossings);
    d.circles_ = std::move(circles);
    d.finalize(nullptr);
    return d;
  }

  // Builds with explicitly supplied over-strand directions: over_in[x] is
  // true when the over strand of crossing x enters at slot 1 (and leaves at
  // slot 3).  Used when a resolved diagram inherits its orientation.
  static LinkDiagram build_oriented(std::vector<Crossing> crossings,
                                    std::vector<int> circles,
                                    const std::vector<bool>& over_in_at_1) {
    LinkDiagram d;
    d.crossings_ = std::move(crossings);
    d.circles_ = std::move(circles);
    d.finalize(&over_in_at_1);
    return d;
  }

  int n() const { return static_cast<int>(crossings_.size()); }
  const std::vector<Crossing>& crossings() const { return crossings_; }
  const std::vector<int>& circles() const { return circles_; }

  int n_plus() const { return n_plus_; }
  int n_minus() const { return n_minus_; }
  int writhe() const { return n_plus_ - n_minus_; }
  int sign(int crossing) const { return sign_.at(crossing); }

  // True when the over strand of the crossing enters at slot 1.
  bool over_enters_first(int crossing) const { return over_in1_.at(crossing); }

  int edge_count() const { return static_cast<int>(edge_ids_.size()); }
  const std::vector<int>& edge_ids() const { return edge_ids_; }
  int edge_index(int edge_id) const {
    auto it = std::lower_bound(edge_ids_.begin(), edge_ids_.end(), edge_id);
    if (it == edge_ids_.end() || *it != edge_id)
      throw std::invalid_argument("unknown edge id");
    return static_cast<int>(it - edge_ids_.begin());
  }

  int component_count() const { return comp_count_; }
  int component_of_edge(int edge_id) const { return comp_of_[edge_index(edge_id)]; }

  // Components as sorted edge-id lists, ordered by their minimal edge id.
  std::vector<std::vector<int>> components() const {
    std::vector<std::vector<int>> out(comp_count_);
    for (std::size_t i = 0; i < edge_ids_.size(); ++i)
      out[comp_of_[i]].push_back(edge_ids_[i]);
    return out;
  }

  // lk(l,m) = half the signed count of crossings between components l != m.
  const std::vector<std::vector<int>>& linking_matrix() const { return lk_; }
  int linking(int l, int m) const { return lk_.at(l).at(m); }

  // Switches over/under at every crossing; every sign negates.  The record
  // is re-rooted at the old over-strand's incoming slot, and the new over
  // strand (the old under one) keeps its direction explicitly.
  LinkDiagram mirror() const {
    std::vector<Crossing> out;
    std::vector<bool> flags;
    out.reserve(crossings_.size());
    flags.reserve(crossings_.size());
    for (int x = 0; x < n(); ++x) {
      const auto& e = crossings_[x].e;
      if (sign_[x] > 0)
        out.push_back({{e[3], e[0], e[1], e[2]}});
      else
        out.push_back({{e[1], e[2], e[3], e[0]}});
      flags.push_back(sign_[x] > 0);
    }
    return build_oriented(std::move(out), circles_, flags);
  }

  bool operator==(const LinkDiagram& o) const {
    return crossings_ == o.crossings_ && circles_ == o.circles_ &&
           over_in1_ == o.over_in1_;
  }

  // Direction flags: whether the edge occurrence at (crossing, slot) points
  // into the crossing.  Slot 0 is always in, slot 2 always out.
  bool slot_incoming(int crossing, int slot) const {
    switch (slot) {
      case 0: return true;
      case 2: return false;
      case 1: return over_in1_[crossing];
      default: return !over_in1_[crossing];
    }
  }

  // The two occurrences of a crossing edge, lexicographic (crossing, slot).
  const std::vector<std::array<int, 2>>& occurrences(int edge_id) const {
    return occ_[edge_index(edge_id)];
  }

  bool edge_is_circle(int edge_id) const { return occ_[edge_index(edge_id)].empty(); }

 private:
  void finalize(const std::vector<bool>* forced_over_in1);

  std::vector<Crossing> crossings_;
  std::vector<int> circles_;

  std::vector<int> edge_ids_;                       // sorted distinct ids
  std::vector<std::vector<std::array<int, 2>>> occ_;  // per edge: (crossing, slot)
  std::vector<bool> over_in1_;                      // per crossing
  std::vector<int> sign_;
  int n_plus_ = 0, n_minus_ = 0;
  std::vector<int> comp_of_;
  int comp_count_ = 0;
  std::vector<std::vector<int>> lk_;
};

inline void LinkDiagram::finalize(const std::vector<bool>* forced_over_in1) {
  const int nx = n();

  // Collect edge ids and their occurrences.
  std::map<int, std::vector<std::array<int, 2>>> occ_map;
  for (int x = 0; x < nx; ++x)
    for (int s = 0; s < 4; ++s) occ_map[crossings_[x].e[s]].push_back({x, s});
  for (int c : circles_) {
    if (occ_map.count(c))
      throw std::invalid_argument("circle edge id also used at a crossing");
    occ_map[c];  // empty occurrence list
  }
  {
    std::map<int, int> circle_mult;
    for (int c : circles_)
      if (++circle_mult[c] > 1)
        throw std::invalid_argument("duplicate circle edge id");
  }
  for (const auto& [id, occs] : occ_map) {
    if (id < 0) throw std::invalid_argument("negative edge id");
    if (!occs.empty() && occs.size() != 2) {
      std::ostringstream os;
      os << "edge " << id << " occurs " << occs.size() << " times (expected 2)";
      throw std::invalid_argument(os.str());
    }
  }

  edge_ids_.clear();
  occ_.clear();
  for (auto& [id, occs] : occ_map) {
    edge_ids_.push_back(id);
    occ_.push_back(occs);
  }

  // Resolve edge directions.  Slot states: -1 unknown, 1 incoming, 0 outgoing.
  // Constraints: slot0 in, slot2 out; slots 1 and 3 of a crossing opposite;
  // the two occurrences of an edge opposite.
  std::vector<std::array<int8_t, 4>> st(nx, {-1, -1, -1, -1});
  std::deque<std::array<int, 2>> queue;
  auto assign = [&](int x, int s, int v) {
    if (st[x][s] == v) return;
    if (st[x][s] != -1)
      throw std::invalid_argument("inconsistent orientation in diagram");
    st[x][s] = static_cast<int8_t>(v);
    queue.push_back({x, s});
  };
  for (int x = 0; x < nx; ++x) {
    assign(x, 0, 1);
    assign(x, 2, 0);
    if (forced_over_in1) {
      assign(x, 1, (*forced_over_in1)[x] ? 1 : 0);
      assign(x, 3, (*forced_over_in1)[x] ? 0 : 1);
    }
  }

  auto propagate = [&]() {
    while (!queue.empty()) {
      auto [x, s] = queue.front();
      queue.pop_front();
      int v = st[x][s];
      if (s == 1 || s == 3) assign(x, s ^ 2, v ^ 1);
      // Partner occurrence of the same edge.
      for (const auto& o : occ_[edge_index(crossings_[x].e[s])])
        if (o[0] != x || o[1] != s) assign(o[0], o[1], v ^ 1);
    }
  };
  propagate();

  // Components never forced by an under-pass (closed curves lying entirely
  // over the rest of the diagram) get a deterministic direction: the lowest
  // unresolved edge id is declared outgoing at its first occurrence.
  for (std::size_t i = 0; i < edge_ids_.size(); ++i) {
    if (occ_[i].empty()) continue;
    auto [x, s] = occ_[i].front();
    if (st[x][s] == -1) {
      assign(x, s, 0);
      propagate();
    }
  }

  over_in1_.assign(nx, false);
  sign_.assign(nx, 0);
  n_plus_ = n_minus_ = 0;
  for (int x = 0; x < nx; ++x) {
    for (int s = 0; s < 4; ++s)
      if (st[x][s] == -1)
        throw std::invalid_argument("undetermined orientation in diagram");
    over_in1_[x] = st[x][1] == 1;
    sign_[x] = st[x][3] == 1 ? +1 : -1;
    (sign_[x] > 0 ? n_plus_ : n_minus_)++;
  }

  // Strand components: at each crossing the under strand continues 0 -> 2
  // and the over strand in -> out.
  const int ne = static_cast<int>(edge_ids_.size());
  std::vector<int> succ(ne, -1);
  auto eidx = [&](int id) { return edge_index(id); };
  for (int x = 0; x < nx; ++x) {
    const auto& e = crossings_[x].e;
    succ[eidx(e[0])] = eidx(e[2]);
    if (over_in1_[x])
      succ[eidx(e[1])] = eidx(e[3]);
    else
      succ[eidx(e[3])] = eidx(e[1]);
  }
  comp_of_.assign(ne, -1);
  comp_count_ = 0;
  for (int i = 0; i < ne; ++i) {
    if (comp_of_[i] != -1) continue;
    if (succ[i] == -1) {  // crossingless circle
      comp_of_[i] = comp_count_++;
      continue;
    }
    int c = comp_count_++;
    for (int j = i; comp_of_[j] == -1; j = succ[j]) comp_of_[j] = c;
  }

  lk_.assign(comp_count_, std::vector<int>(comp_count_, 0));
  std::vector<std::vector<int>> twice(comp_count_,
                                      std::vector<int>(comp_count_, 0));
  for (int x = 0; x < nx; ++x) {
    int cu = comp_of_[eidx(crossings_[x].e[0])];
    int co = comp_of_[eidx(crossings_[x].e[1])];
    if (cu != co) {
      twice[cu][co] += sign_[x];
      twice[co][cu] += sign_[x];
    }
  }
  for (int l = 0; l < comp_count_; ++l)
    for (int m = 0; m < comp_count_; ++m) {
      if (twice[l][m] % 2 != 0)
        throw std::runtime_error("odd signed crossing count between components");
      lk_[l][m] = twice[l][m] / 2;
    }
}

// Crossing signs of the diagram, as a (positive, negative) pair.
inline std::pair<int, int> crossing_signs(const LinkDiagram& d) {
  return {d.n_plus(), d.n_minus()};
}

// Closure of a braid word, strands oriented downward.  Crossing records are
// emitted in letter order, so crossing k corresponds to letter k and carries
// that letter's sign.
inline LinkDiagram from_braid(const BraidWord& b) {
  b.validate();
  std::vector<int> cur(b.width);
  std::iota(cur.begin(), cur.end(), 0);
  int next_id = b.width;
  std::vector<Crossing> crossings;
  std::vector<bool> flags;
  for (int l : b.letters) {
    if (l == 0 || std::abs(l) >= b.width)
      throw std::invalid_argument("braid letter exceeds width-1");
    int i = std::abs(l) - 1;
    int u = cur[i], v = cur[i + 1];
    int x = next_id++, y = next_id++;
    if (l > 0)
      crossings.push_back({{u, x, y, v}});  // over strand enters at slot 3
    else
      crossings.push_back({{v, u, x, y}});  // over strand enters at slot 1
    flags.push_back(l < 0);
    cur[i] = x;
    cur[i + 1] = y;
  }

  // Close up: bottom edge of each strand position is the top edge.
  std::vector<int> rep(next_id);
  std::iota(rep.begin(), rep.end(), 0);
  std::vector<int> circles;
  for (int p = 0; p < b.width; ++p) {
    if (cur[p] == p)
      circles.push_back(p);  // strand met no crossing
    else
      rep[cur[p]] = p;
  }
  auto find = [&](int e) {
    while (rep[e] != e) e = rep[e];
    return e;
  };
  for (auto& c : crossings)
    for (int s = 0; s < 4; ++s) c.e[s] = find(c.e[s]);
  return LinkDiagram::build_oriented(std::move(crossings), std::move(circles),
                                     flags);
}

// PD text: "X e1 e2 e3 e4" per crossing, "O e" per crossingless circle,
// whitespace separated, '#' starts a comment.  A single "B width l1 l2 ..."
// line gives a braid closure instead.
inline LinkDiagram parse_diagram_text(const std::string& text) {
  std::vector<Crossing> crossings;
  std::vector<int> circles;
  std::optional<BraidWord> braid;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_pd = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    auto fail = [&](const std::string& what) {
      std::ostringstream os;
      os << "line " << lineno << ": " << what;
      throw std::invalid_argument(os.str());
    };
    if (tag == "X") {
      Crossing c;
      for (int s = 0; s < 4; ++s)
        if (!(ls >> c.e[s]) || c.e[s] < 0) fail("malformed crossing record");
      int extra;
      if (ls >> extra) fail("trailing tokens after crossing record");
      crossings.push_back(c);
      saw_pd = true;
    } else if (tag == "O") {
      int e;
      if (!(ls >> e) || e < 0) fail("malformed circle record");
      circles.push_back(e);
      saw_pd = true;
    } else if (tag == "B") {
      if (braid) fail("multiple braid records");
      BraidWord b;
      if (!(ls >> b.width)) fail("malformed braid record");
      int l;
      while (ls >> l) b.letters.push_back(l);
      braid = b;
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (braid) {
    if (saw_pd)
      throw std::invalid_argument("braid record cannot be mixed with X/O records");
    return from_braid(*braid);
  }
  if (!saw_pd)
    throw std::invalid_argument("no crossings or circles in input");
  return LinkDiagram::build(std::move(crossings), std::move(circles));
}

inline LinkDiagram parse_pd(const std::string& text) {
  return parse_diagram_text(text);
}

}  // namespace kh
