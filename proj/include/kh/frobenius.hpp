#pragma once

#include <array>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace kh {

// Rank-two Frobenius algebra on the ordered basis (1, x), encoded by sparse
// structure constants.  Labels: 0 is the unit generator (degree +1), 1 is x
// (degree -1).  The identities are verified exhaustively on construction.
struct FrobeniusAlgebra {
  std::string name;
  // mult[a][b]: list of (c, coeff) with m(a (x) b) = sum coeff * c.
  std::array<std::array<std::vector<std::pair<int, int>>, 2>, 2> mult;
  // comult[a]: list of (b, c, coeff) with delta(a) = sum coeff * b (x) c.
  std::array<std::vector<std::tuple<int, int, int>>, 2> comult;

  static int label_degree(int label) { return label == 0 ? 1 : -1; }

  // Quantum-degree change of each structure constant inside the complex
  // (label degree change plus one for the added 1-smoothing).  Zero for a
  // graded theory; the filtered Lee theory steps by 4.
  int qdeg_period() const {
    int g = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (const auto& [c, coeff] : mult[a][b])
          g = std::gcd(g, label_degree(c) - label_degree(a) - label_degree(b) + 1);
    for (int a = 0; a < 2; ++a)
      for (const auto& [b, c, coeff] : comult[a])
        g = std::gcd(g, label_degree(b) + label_degree(c) - label_degree(a) + 1);
    return g;
  }

  bool graded() const { return qdeg_period() == 0; }

  static FrobeniusAlgebra khovanov() {
    FrobeniusAlgebra f;
    f.name = "khovanov";
    f.mult[0][0] = {{0, 1}};
    f.mult[0][1] = {{1, 1}};
    f.mult[1][0] = {{1, 1}};
    f.mult[1][1] = {};  // x^2 = 0
    f.comult[0] = {{0, 1, 1}, {1, 0, 1}};
    f.comult[1] = {{1, 1, 1}};
    f.verify();
    return f;
  }

  static FrobeniusAlgebra lee() {
    FrobeniusAlgebra f;
    f.name = "lee";
    f.mult[0][0] = {{0, 1}};
    f.mult[0][1] = {{1, 1}};
    f.mult[1][0] = {{1, 1}};
    f.mult[1][1] = {{0, 1}};  // x^2 = 1
    f.comult[0] = {{0, 1, 1}, {1, 0, 1}};
    f.comult[1] = {{1, 1, 1}, {0, 0, 1}};
    f.verify();
    return f;
  }

  void verify() const {
    using V1 = std::map<int, int>;
    using V2 = std::map<std::pair<int, int>, int>;
    using V3 = std::map<std::tuple<int, int, int>, int>;
    auto prune1 = [](V1& v) { std::erase_if(v, [](auto& e) { return e.second == 0; }); };
    auto prune2 = [](V2& v) { std::erase_if(v, [](auto& e) { return e.second == 0; }); };
    auto prune3 = [](V3& v) { std::erase_if(v, [](auto& e) { return e.second == 0; }); };

    // m(m(a,b),c) = m(a,m(b,c)) and m(1,a) = a = m(a,1).
    for (int a = 0; a < 2; ++a) {
      V1 left, right;
      for (const auto& [c, k] : mult[0][a]) left[c] += k;
      for (const auto& [c, k] : mult[a][0]) right[c] += k;
      prune1(left);
      prune1(right);
      if (left != V1{{a, 1}} || right != V1{{a, 1}})
        throw std::runtime_error("frobenius algebra: unit axiom fails");
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          V1 lhs, rhs;
          for (const auto& [ab, k1] : mult[a][b])
            for (const auto& [abc, k2] : mult[ab][c]) lhs[abc] += k1 * k2;
          for (const auto& [bc, k1] : mult[b][c])
            for (const auto& [abc, k2] : mult[a][bc]) rhs[abc] += k1 * k2;
          prune1(lhs);
          prune1(rhs);
          if (lhs != rhs)
            throw std::runtime_error("frobenius algebra: associativity fails");
        }

    // (delta (x) id) delta = (id (x) delta) delta.
    for (int a = 0; a < 2; ++a) {
      V3 lhs, rhs;
      for (const auto& [b, c, k1] : comult[a]) {
        for (const auto& [d, e, k2] : comult[b]) lhs[{d, e, c}] += k1 * k2;
        for (const auto& [d, e, k2] : comult[c]) rhs[{b, d, e}] += k1 * k2;
      }
      prune3(lhs);
      prune3(rhs);
      if (lhs != rhs)
        throw std::runtime_error("frobenius algebra: coassociativity fails");
    }

    // Frobenius compatibility: delta m = (m (x) id)(id (x) delta)
    //                                  = (id (x) m)(delta (x) id).
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        V2 mid, lhs, rhs;
        for (const auto& [ab, k1] : mult[a][b])
          for (const auto& [c, d, k2] : comult[ab]) mid[{c, d}] += k1 * k2;
        for (const auto& [c, d, k1] : comult[b])
          for (const auto& [ac, k2] : mult[a][c]) lhs[{ac, d}] += k1 * k2;
        for (const auto& [c, d, k1] : comult[a])
          for (const auto& [db, k2] : mult[d][b]) rhs[{c, db}] += k1 * k2;
        prune2(mid);
        prune2(lhs);
        prune2(rhs);
        if (mid != lhs || mid != rhs)
          throw std::runtime_error("frobenius algebra: compatibility fails");
      }
  }
};

}  // namespace kh
