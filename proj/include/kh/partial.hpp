#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "kh/diagram.hpp"
#include "kh/smoothing.hpp"

namespace kh {

enum class PartialKind { Closed, Open };  // fully 1-smoothed vs final 0-smoothing

struct PartialResolution {
  LinkDiagram diagram;
  PartialKind kind = PartialKind::Closed;
  int k = 0;             // selected crossings consumed
  bool inherited = true; // orientation inherited from the previous diagram
  int n_plus = 0;
  int n_minus = 0;
};

// Decides, per component and in order of the component's minimal edge id,
// whether a freshly chosen orientation is reversed relative to the anchor
// direction (the minimal edge keeps its previous direction).  A null chooser
// never reverses.  Any choice yields valid data; the spectral-sequence
// constants absorb the difference.
using OrientationChooser = std::function<bool(int anchor_edge_id)>;

namespace detail {

struct SmoothResult {
  LinkDiagram diagram;
  bool inherited = false;
  std::vector<int> crossing_map;  // old index -> new index, -1 for resolved
};

// Resolves one crossing of d to the given smoothing (bit 0 or 1).  When the
// smoothing is the oriented resolution, every edge keeps its direction and
// the result inherits the orientation.  Otherwise a new orientation is
// chosen per component via the chooser.
inline SmoothResult smooth_crossing(const LinkDiagram& d, int crossing, int bit,
                                    const OrientationChooser& choose) {
  if (crossing < 0 || crossing >= d.n())
    throw std::invalid_argument("crossing index out of range");
  const auto& ex = d.crossings()[crossing].e;
  const bool oriented =
      (bit == 0 && d.sign(crossing) > 0) || (bit == 1 && d.sign(crossing) < 0);

  // Fuse the two arc pairs.  Representative of a fused class is its minimal
  // edge id, so anchors stay meaningful across resolutions.
  std::map<int, int> rep;
  for (int id : d.edge_ids()) rep[id] = id;
  std::function<int(int)> find = [&](int a) {
    while (rep[a] != a) a = rep[a] = rep[rep[a]];
    return a;
  };
  std::vector<int> new_circles = d.circles();
  auto join = [&](int p, int q) {
    int rp = find(p), rq = find(q);
    if (rp == rq)
      new_circles.push_back(rp);  // the arc closed up
    else
      rep[std::max(rp, rq)] = std::min(rp, rq);
  };
  if (bit == 0) {
    join(ex[0], ex[1]);
    join(ex[2], ex[3]);
  } else {
    join(ex[0], ex[3]);
    join(ex[1], ex[2]);
  }

  SmoothResult out;
  out.inherited = oriented;
  out.crossing_map.assign(d.n(), -1);
  std::vector<Crossing> new_crossings;
  std::vector<int> old_of_new;
  for (int x = 0; x < d.n(); ++x) {
    if (x == crossing) continue;
    Crossing c = d.crossings()[x];
    for (int s = 0; s < 4; ++s) c.e[s] = find(c.e[s]);
    out.crossing_map[x] = static_cast<int>(new_crossings.size());
    old_of_new.push_back(x);
    new_crossings.push_back(c);
  }

  if (oriented) {
    std::vector<bool> flags;
    flags.reserve(new_crossings.size());
    for (int x : old_of_new) flags.push_back(d.over_enters_first(x));
    out.diagram = LinkDiagram::build_oriented(std::move(new_crossings),
                                              std::move(new_circles), flags);
    return out;
  }

  // Fresh orientation.  Walk the strand cycles of the new diagram, seed each
  // at the anchor edge with its previous direction, optionally reverse.
  const int nn = static_cast<int>(new_crossings.size());

  // Occurrences of each new edge among the remaining crossings.
  std::map<int, std::vector<std::array<int, 2>>> occ;
  for (int x = 0; x < nn; ++x)
    for (int s = 0; s < 4; ++s) occ[new_crossings[x].e[s]].push_back({x, s});

  // Previous direction of a new (possibly fused) edge: among its member old
  // edges in increasing id order, take the first surviving occurrence and
  // carry over whether that occurrence was incoming.
  std::map<int, std::vector<int>> members;  // rep -> old ids
  for (int id : d.edge_ids()) members[find(id)].push_back(id);
  auto seed_direction = [&](int new_edge, int* sx, int* ss, int* sin) {
    for (int old_id : members[new_edge]) {
      for (const auto& o : d.occurrences(old_id)) {
        if (o[0] == crossing) continue;
        *sx = out.crossing_map[o[0]];
        *ss = o[1];
        *sin = d.slot_incoming(o[0], o[1]) ? 1 : 0;
        return true;
      }
      // keep scanning: this member's ends were both consumed
    }
    return false;
  };

  std::vector<std::array<int8_t, 4>> st(nn, {-1, -1, -1, -1});
  auto bfs_assign = [&](int x0, int s0, int v0) {
    std::vector<std::array<int, 3>> stack{{x0, s0, v0}};
    while (!stack.empty()) {
      auto [x, s, v] = stack.back();
      stack.pop_back();
      if (st[x][s] != -1) continue;
      st[x][s] = static_cast<int8_t>(v);
      // strand partner inside the crossing
      if (st[x][s ^ 2] == -1) stack.push_back({x, s ^ 2, v ^ 1});
      // other occurrence of the same edge
      for (const auto& o : occ[new_crossings[x].e[s]])
        if (!(o[0] == x && o[1] == s) && st[o[0]][o[1]] == -1)
          stack.push_back({o[0], o[1], v ^ 1});
    }
  };

  // Components in increasing anchor order; edges in occ are already sorted.
  for (const auto& [edge, occs] : occ) {
    auto [x0, s0] = occs.front();
    if (st[x0][s0] != -1) continue;
    int sx, ss, sin;
    if (!seed_direction(edge, &sx, &ss, &sin)) {
      sx = x0;
      ss = s0;
      sin = 0;
    }
    if (choose && choose(edge)) sin ^= 1;
    bfs_assign(sx, ss, sin);
  }

  // Re-root records whose under strand reversed, then rebuild.
  std::vector<Crossing> rooted;
  std::vector<bool> flags;
  rooted.reserve(nn);
  flags.reserve(nn);
  for (int x = 0; x < nn; ++x) {
    const auto& e = new_crossings[x].e;
    if (st[x][0] == 1) {
      rooted.push_back({{e[0], e[1], e[2], e[3]}});
      flags.push_back(st[x][1] == 1);
    } else {
      rooted.push_back({{e[2], e[3], e[0], e[1]}});
      flags.push_back(st[x][3] == 1);
    }
  }
  out.diagram = LinkDiagram::build_oriented(std::move(rooted),
                                            std::move(new_circles), flags);
  return out;
}

}  // namespace detail

struct PartialSequence {
  std::vector<int> selected;
  std::vector<PartialResolution> closed;  // closed[k] holds D_k, k = 0..m
  std::vector<PartialResolution> open;    // open[k-1] holds the open diagram at step k
};

// Resolves the selected crossings in order: step k produces the closed
// diagram (crossings 1..k all 1-smoothed) and the open one (crossing k
// 0-smoothed instead).  Exactly one of the two inherits the orientation of
// step k-1; the other is reoriented via the chooser.
inline PartialSequence partial_diagrams(const LinkDiagram& d,
                                        const std::vector<int>& selected,
                                        const OrientationChooser& choose = nullptr) {
  const int m = static_cast<int>(selected.size());
  {
    std::set<int> seen;
    for (int c : selected) {
      if (c < 0 || c >= d.n())
        throw std::invalid_argument("selected crossing out of range");
      if (!seen.insert(c).second)
        throw std::invalid_argument("duplicate selected crossing");
    }
  }

  PartialSequence out;
  out.selected = selected;
  PartialResolution base{d, PartialKind::Closed, 0, true, d.n_plus(), d.n_minus()};
  out.closed.push_back(base);

  // cur_index[j] = index of original crossing selected[j] inside closed[k].
  std::vector<int> cur_index(selected.begin(), selected.end());
  for (int k = 1; k <= m; ++k) {
    const LinkDiagram& prev = out.closed[k - 1].diagram;
    int cx = cur_index[k - 1];

    auto closed_step = detail::smooth_crossing(prev, cx, 1, choose);
    auto open_step = detail::smooth_crossing(prev, cx, 0, choose);

    out.closed.push_back({closed_step.diagram, PartialKind::Closed, k,
                          closed_step.inherited,
                          closed_step.diagram.n_plus(),
                          closed_step.diagram.n_minus()});
    out.open.push_back({open_step.diagram, PartialKind::Open, k,
                        open_step.inherited, open_step.diagram.n_plus(),
                        open_step.diagram.n_minus()});
    if (closed_step.inherited == open_step.inherited)
      throw std::runtime_error("exactly one resolution must inherit orientation");

    for (int j = k; j < m; ++j) cur_index[j] = closed_step.crossing_map[cur_index[j]];
  }
  return out;
}

}  // namespace kh
