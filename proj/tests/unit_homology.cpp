#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kh/braid.hpp"
#include "kh/complex.hpp"
#include "kh/diagram.hpp"
#include "kh/homology.hpp"

using kh::BraidWord;
using kh::ComputeOptions;
using kh::CubeComplex;
using kh::FrobeniusAlgebra;
using kh::KhTable;
using kh::LaurentPoly;
using kh::LinkDiagram;
using kh::torus_braid;

namespace {

KhTable table_of(std::initializer_list<std::tuple<int, int, long long>> rows) {
  KhTable t;
  for (const auto& [i, j, d] : rows) t.add(i, j, d);
  return t;
}

BraidWord random_braid(std::mt19937& rng, int max_letters = 8) {
  BraidWord b;
  b.width = 2 + static_cast<int>(rng() % 3);
  int len = 1 + static_cast<int>(rng() % max_letters);
  for (int i = 0; i < len; ++i) {
    int g = 1 + static_cast<int>(rng() % (b.width - 1));
    b.letters.push_back((rng() & 1u) ? g : -g);
  }
  return b;
}

const KhTable kTrefoil = table_of({{0, -1, 1}, {0, -3, 1}, {-2, -5, 1}, {-3, -9, 1}});

}  // namespace

TEST_CASE("frobenius algebras are valid") {
  CHECK_NOTHROW(FrobeniusAlgebra::khovanov());
  CHECK_NOTHROW(FrobeniusAlgebra::lee());
  CHECK(FrobeniusAlgebra::khovanov().graded());
  CHECK(FrobeniusAlgebra::lee().qdeg_period() == 4);

  FrobeniusAlgebra broken = FrobeniusAlgebra::khovanov();
  broken.mult[1][1] = {{1, 1}};  // x^2 = x breaks compatibility
  CHECK_THROWS(broken.verify());
}

TEST_CASE("complex of the unknot and unlink") {
  LinkDiagram unknot = kh::parse_pd("O 0\n");
  KhTable t = kh::khovanov_homology(unknot);
  CHECK(t == table_of({{0, -1, 1}, {0, 1, 1}}));

  LinkDiagram unlink = kh::parse_pd("O 0\nO 1\n");
  CHECK(kh::khovanov_homology(unlink) ==
        table_of({{0, -2, 1}, {0, 0, 2}, {0, 2, 1}}));
}

TEST_CASE("complex dimensions and d squared") {
  LinkDiagram tref = kh::from_braid(torus_braid(2));
  CubeComplex cx(tref, FrobeniusAlgebra::khovanov());
  long long total = 0;
  for (uint32_t mask = 0; mask < 16; ++mask)
    total += 1ll << cx.circle_count(mask);
  CHECK(cx.total_dimension() == total);
  CHECK(cx.d_squared_is_zero());

  CubeComplex lee(tref, FrobeniusAlgebra::lee());
  CHECK(lee.d_squared_is_zero());
}

TEST_CASE("d squared vanishes on random diagrams for both algebras") {
  std::mt19937 rng(2601);
  for (int trial = 0; trial < 8; ++trial) {
    LinkDiagram d = kh::from_braid(random_braid(rng, 6));
    CHECK(CubeComplex(d, FrobeniusAlgebra::khovanov()).d_squared_is_zero());
    CHECK(CubeComplex(d, FrobeniusAlgebra::lee()).d_squared_is_zero());
  }
}

TEST_CASE("trefoil homology") {
  LinkDiagram tref = kh::from_braid(torus_braid(2));
  KhTable t = kh::khovanov_homology(tref);
  CHECK(t == kTrefoil);
}

TEST_CASE("cube limit is enforced") {
  LinkDiagram d = kh::from_braid(torus_braid(2));
  ComputeOptions opts;
  opts.cube_limit = 3;
  CHECK_THROWS_AS(kh::khovanov_homology(d, opts), std::invalid_argument);
  CHECK_THROWS_AS(kh::kauffman_jones(d, 3), std::invalid_argument);
}

TEST_CASE("kauffman bracket oracle on small links") {
  LinkDiagram unknot = kh::parse_pd("O 0\n");
  CHECK(kh::kauffman_jones(unknot) == LaurentPoly::circle());

  LinkDiagram unlink = kh::parse_pd("O 0\nO 1\n");
  CHECK(kh::kauffman_jones(unlink) ==
        LaurentPoly::circle() * LaurentPoly::circle());

  LaurentPoly tref_jones;
  tref_jones.add_term(-1, 1);
  tref_jones.add_term(-3, 1);
  tref_jones.add_term(-5, 1);
  tref_jones.add_term(-9, -1);
  CHECK(kh::kauffman_jones(kh::from_braid(torus_braid(2))) == tref_jones);
  CHECK(kTrefoil.graded_euler() == tref_jones);
}

TEST_CASE("euler characteristic equals the state sum oracle") {
  std::mt19937 rng(88);
  for (int trial = 0; trial < 12; ++trial) {
    LinkDiagram d = kh::from_braid(random_braid(rng));
    CHECK(kh::graded_euler(kh::khovanov_homology(d)) == kh::kauffman_jones(d));
  }
}

TEST_CASE("mirror symmetry of the table") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 6; ++trial) {
    LinkDiagram d = kh::from_braid(random_braid(rng, 6));
    CHECK(kh::khovanov_homology(d.mirror()) ==
          kh::khovanov_homology(d).mirrored());
  }
}

TEST_CASE("kink does not change the table") {
  // Markov stabilization: same link, one extra negative kink.
  LinkDiagram four = kh::from_braid(torus_braid(2));
  LinkDiagram five = kh::from_braid(BraidWord{4, {-1, -2, -1, -2, -3}});
  CHECK(kh::khovanov_homology(five) == kh::khovanov_homology(four));
  LinkDiagram five_pos = kh::from_braid(BraidWord{4, {-1, -2, -1, -2, 3}});
  CHECK(kh::khovanov_homology(five_pos) == kh::khovanov_homology(four));
}

TEST_CASE("lee homology of knots and links") {
  using kh::LeeTable;
  LeeTable knot = kh::lee_homology(kh::from_braid(torus_braid(2)));
  CHECK(knot == LeeTable{{0, 2}});

  LeeTable unknot = kh::lee_homology(kh::parse_pd("O 3\n"));
  CHECK(unknot == LeeTable{{0, 2}});

  LeeTable unlink = kh::lee_homology(kh::parse_pd("O 0\nO 1\n"));
  CHECK(unlink == LeeTable{{0, 4}});

  LeeTable t33 = kh::lee_homology(kh::from_braid(torus_braid(3)));
  CHECK(t33 == LeeTable{{0, 2}, {-4, 6}});
}

TEST_CASE("lee degrees from linking numbers") {
  auto knot = kh::expected_lee_degrees(kh::from_braid(torus_braid(2)));
  CHECK(knot == std::map<int, long long>{{0, 2}});

  auto t33 = kh::expected_lee_degrees(kh::from_braid(torus_braid(3)));
  CHECK(t33 == std::map<int, long long>{{0, 2}, {-4, 6}});

  auto unlink = kh::expected_lee_degrees(kh::parse_pd("O 0\nO 1\n"));
  CHECK(unlink == std::map<int, long long>{{0, 4}});
}

TEST_CASE("lee table matches the degree formula on random links") {
  std::mt19937 rng(5150);
  int done = 0;
  while (done < 8) {
    LinkDiagram d = kh::from_braid(random_braid(rng, 7));
    std::map<int, long long> lee;
    for (const auto& [i, dim] : kh::lee_homology(d)) lee[i] = dim;
    CHECK(lee == kh::expected_lee_degrees(d));
    ++done;
  }
}

TEST_CASE("lee bound by khovanov columns") {
  for (int q = 2; q <= 4; ++q) {
    LinkDiagram d = kh::from_braid(torus_braid(q));
    auto cols = kh::khovanov_homology(d).column_sums();
    for (const auto& [i, dim] : kh::lee_homology(d)) {
      auto it = cols.find(i);
      REQUIRE(it != cols.end());
      CHECK(dim <= it->second);
    }
  }
}

TEST_CASE("threaded computation matches single threaded") {
  LinkDiagram d = kh::from_braid(torus_braid(4));
  ComputeOptions par;
  par.threads = 4;
  CHECK(kh::khovanov_homology(d, par) == kh::khovanov_homology(d));
  CHECK(kh::lee_homology(d, par) == kh::lee_homology(d));
}
