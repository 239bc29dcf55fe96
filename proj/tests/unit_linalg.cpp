#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "kh/laurent.hpp"
#include "kh/rational.hpp"
#include "kh/sparse_matrix.hpp"

using kh::Int;
using kh::LaurentPoly;
using kh::Rational;
using kh::SparseMat;

namespace {

// Independent oracle: dense Gaussian elimination with rational arithmetic.
int dense_rank(const SparseMat& m) {
  std::vector<std::vector<Rational>> a(m.rows(),
                                       std::vector<Rational>(m.cols(), 0));
  for (const auto& [rc, v] : m.entries()) a[rc.first][rc.second] = v;
  int rank = 0;
  for (int c = 0; c < m.cols() && rank < m.rows(); ++c) {
    int pivot = -1;
    for (int r = rank; r < m.rows(); ++r)
      if (a[r][c] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[rank], a[pivot]);
    for (int r = 0; r < m.rows(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (int cc = c; cc < m.cols(); ++cc) a[r][cc] -= f * a[rank][cc];
    }
    ++rank;
  }
  return rank;
}

SparseMat random_sparse(std::mt19937& rng, int rows, int cols, double density) {
  SparseMat m(rows, cols);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> val(-4, 4);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (u(rng) < density) m.set(r, c, val(rng));
  return m;
}

}  // namespace

TEST_CASE("rational canonical form") {
  Rational r = kh::make_rational(4, -6);
  CHECK(r.get_num() == -2);
  CHECK(r.get_den() == 3);
  CHECK(kh::is_canonical(r));
}

TEST_CASE("laurent ring operations") {
  LaurentPoly c = LaurentPoly::circle();
  CHECK(c.str() == "q + q^-1");
  CHECK((c * LaurentPoly::monomial(0)) == c);

  LaurentPoly sq = c * c;
  CHECK(sq.coefficient(2) == 1);
  CHECK(sq.coefficient(0) == 2);
  CHECK(sq.coefficient(-2) == 1);
  CHECK(sq.coefficient(1) == 0);

  LaurentPoly shifted = c.shifted(3);
  LaurentPoly expect;
  expect.add_term(4, 1);
  expect.add_term(2, 1);
  CHECK(shifted == expect);

  CHECK((c - c).is_zero());
  CHECK(c.negated_variable().coefficient(1) == -1);
  CHECK(c.negated_variable().coefficient(-1) == -1);
}

TEST_CASE("rank of fixed matrices") {
  SparseMat z(5, 7);
  CHECK(z.rank() == 0);
  CHECK(z.kernel_dim() == 7);

  CHECK(SparseMat::identity(4).rank() == 4);

  SparseMat m(2, 2);
  m.set(0, 0, 1);
  m.set(0, 1, 2);
  m.set(1, 0, 2);
  m.set(1, 1, 4);
  CHECK(m.rank() == 1);
  CHECK(m.kernel_dim() == 1);
}

TEST_CASE("rank handles rational entries") {
  SparseMat m(2, 3);
  m.set(0, 0, kh::make_rational(1, 2));
  m.set(0, 1, kh::make_rational(1, 3));
  m.set(1, 0, kh::make_rational(3, 2));
  m.set(1, 1, 1);
  m.set(1, 2, kh::make_rational(5, 7));
  CHECK(m.rank() == 2);
}

TEST_CASE("rank matches dense oracle on random instances") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 40; ++trial) {
    int rows = 1 + static_cast<int>(rng() % 12);
    int cols = 1 + static_cast<int>(rng() % 12);
    SparseMat m = random_sparse(rng, rows, cols, 0.3);
    INFO("trial " << trial << " " << rows << "x" << cols);
    CHECK(m.rank() == dense_rank(m));
  }
}

TEST_CASE("rank is invariant under transpose and permutation") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    int rows = 2 + static_cast<int>(rng() % 10);
    int cols = 2 + static_cast<int>(rng() % 10);
    SparseMat m = random_sparse(rng, rows, cols, 0.35);
    CHECK(m.rank() == m.transpose().rank());

    std::vector<int> rp(rows), cp(cols);
    for (int i = 0; i < rows; ++i) rp[i] = i;
    for (int i = 0; i < cols; ++i) cp[i] = i;
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    SparseMat p(rows, cols);
    for (const auto& [rc, v] : m.entries()) p.set(rp[rc.first], cp[rc.second], v);
    CHECK(m.rank() == p.rank());
  }
}

TEST_CASE("sparse product") {
  SparseMat a(2, 3), b(3, 2);
  a.set(0, 0, 1);
  a.set(0, 2, 2);
  a.set(1, 1, -1);
  b.set(0, 1, 3);
  b.set(2, 0, 1);
  b.set(1, 0, 4);
  SparseMat p = a * b;
  CHECK(p.at(0, 0) == 2);
  CHECK(p.at(0, 1) == 3);
  CHECK(p.at(1, 0) == -4);
  CHECK(p.nnz() == 3);
}
