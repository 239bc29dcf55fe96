#pragma once

#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace kh {

// A word in the braid group on `width` strands.  Letter l stands for the
// generator sigma_|l| with sign(l); |l| must lie in [1, width-1].
struct BraidWord {
  int width = 2;
  std::vector<int> letters;

  void validate() const {
    if (width < 1) throw std::invalid_argument("braid width must be positive");
    for (int l : letters) {
      if (l == 0) throw std::invalid_argument("braid letter 0 is not a generator");
      if (std::abs(l) >= width)
        throw std::invalid_argument("braid letter exceeds width-1");
    }
  }

  // Permutation induced on strand positions (top to bottom).
  std::vector<int> strand_permutation() const {
    std::vector<int> perm(width);
    for (int i = 0; i < width; ++i) perm[i] = i;
    for (int l : letters) {
      int i = std::abs(l) - 1;
      std::swap(perm[i], perm[i + 1]);
    }
    return perm;
  }

  int closure_component_count() const {
    std::vector<int> perm = strand_permutation();
    std::vector<char> seen(width, 0);
    int cycles = 0;
    for (int i = 0; i < width; ++i) {
      if (seen[i]) continue;
      ++cycles;
      for (int j = i; !seen[j]; j = perm[j]) seen[j] = 1;
    }
    return cycles;
  }
};

// The braid whose closure is the negatively crossed torus link T(3,q).
inline BraidWord torus_braid(int q) {
  if (q < 1) throw std::invalid_argument("torus braid requires q >= 1");
  BraidWord b;
  b.width = 3;
  for (int i = 0; i < q; ++i) {
    b.letters.push_back(-1);
    b.letters.push_back(-2);
  }
  return b;
}

}  // namespace kh
