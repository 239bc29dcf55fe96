#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "kh/braid.hpp"
#include "kh/diagram.hpp"
#include "kh/partial.hpp"
#include "kh/smoothing.hpp"

using kh::BraidWord;
using kh::LinkDiagram;
using kh::PartialKind;
using kh::Smoothing;
using kh::torus_braid;

namespace {

BraidWord random_braid(std::mt19937& rng, int max_letters = 10) {
  BraidWord b;
  b.width = 2 + static_cast<int>(rng() % 3);
  int len = 1 + static_cast<int>(rng() % max_letters);
  for (int i = 0; i < len; ++i) {
    int g = 1 + static_cast<int>(rng() % (b.width - 1));
    b.letters.push_back((rng() & 1u) ? g : -g);
  }
  return b;
}

}  // namespace

TEST_CASE("torus braid word") {
  CHECK_THROWS_AS(torus_braid(0), std::invalid_argument);
  BraidWord q1 = torus_braid(1);
  CHECK(q1.width == 3);
  CHECK(q1.letters == std::vector<int>{-1, -2});
  CHECK(torus_braid(2).letters == std::vector<int>{-1, -2, -1, -2});
  CHECK(torus_braid(3).closure_component_count() == 3);
  CHECK(torus_braid(2).closure_component_count() == 1);
}

TEST_CASE("braid closure basics") {
  BraidWord empty{2, {}};
  LinkDiagram unlink = kh::from_braid(empty);
  CHECK(unlink.n() == 0);
  CHECK(unlink.component_count() == 2);

  LinkDiagram t6 = kh::from_braid(BraidWord{3, {-1, -2, -1, -2, -1, -2}});
  CHECK(t6.n() == 6);
  for (int x = 0; x < 6; ++x) CHECK(t6.sign(x) == -1);
  CHECK(crossing_signs(t6) == std::pair<int, int>{0, 6});

  BraidWord bad{3, {3}};
  CHECK_THROWS_AS(kh::from_braid(bad), std::invalid_argument);
}

TEST_CASE("braid closure component count equals permutation cycles") {
  std::mt19937 rng(411);
  for (int trial = 0; trial < 30; ++trial) {
    BraidWord b = random_braid(rng);
    LinkDiagram d = kh::from_braid(b);
    CHECK(d.component_count() == b.closure_component_count());
    CHECK(d.n() == static_cast<int>(b.letters.size()));
  }
  for (int q = 1; q <= 7; ++q) {
    LinkDiagram d = kh::from_braid(torus_braid(q));
    CHECK(d.component_count() == (q % 3 == 0 ? 3 : 1));
  }
}

TEST_CASE("pd parsing") {
  LinkDiagram hopf = kh::parse_pd("X 1 4 2 3\nX 3 2 4 1\n");
  CHECK(hopf.n() == 2);
  CHECK(hopf.component_count() == 2);

  LinkDiagram circles = kh::parse_pd("O 0\nO 1 # two circles\n");
  CHECK(circles.n() == 0);
  CHECK(circles.component_count() == 2);

  CHECK_THROWS_WITH(kh::parse_pd("  \n# comment only\n"),
                    Catch::Matchers::ContainsSubstring("no crossings"));
  CHECK_THROWS_AS(kh::parse_pd("X 1 1 1 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(kh::parse_pd("X 1 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(kh::parse_pd("Y 1 2 3 4\n"), std::invalid_argument);

  LinkDiagram braided = kh::parse_diagram_text("B 3 -1 -2 -1 -2\n");
  CHECK(braided.n() == 4);
  CHECK(braided.component_count() == 1);
}

TEST_CASE("mirror is an involution and negates signs") {
  std::mt19937 rng(97);
  for (int trial = 0; trial < 20; ++trial) {
    LinkDiagram d = kh::from_braid(random_braid(rng));
    LinkDiagram m = d.mirror();
    CHECK(m.n() == d.n());
    auto [p, q] = crossing_signs(d);
    CHECK(crossing_signs(m) == std::pair<int, int>{q, p});
    CHECK(m.mirror() == d);
  }
}

TEST_CASE("resolve counts circles") {
  LinkDiagram tref = kh::from_braid(torus_braid(2));
  Smoothing all1;
  all1.bits = {1, 1, 1, 1};
  CHECK(kh::resolve(tref, all1).circle_count == 3);

  // All-0 smoothing is the closure of the Temperley-Lieb word e1 e2 e1 e2,
  // which traces out a single loop.
  Smoothing all0;
  all0.bits = {0, 0, 0, 0};
  CHECK(kh::resolve(tref, all0).circle_count == 1);

  LinkDiagram unknot = kh::parse_pd("O 7\n");
  Smoothing empty;
  CHECK(kh::resolve(unknot, empty).circle_count == 1);

  Smoothing wrong;
  wrong.bits = {0, 1};
  CHECK_THROWS_AS(kh::resolve(tref, wrong), std::invalid_argument);
}

TEST_CASE("circle assignment is a surjection onto circle indices") {
  std::mt19937 rng(5151);
  for (int trial = 0; trial < 10; ++trial) {
    LinkDiagram d = kh::from_braid(random_braid(rng, 8));
    uint32_t mask = rng() & ((1u << d.n()) - 1u);
    auto part = kh::resolve(d, Smoothing::from_mask(mask, d.n()));
    std::set<int> hit;
    for (const auto& [edge, c] : part.assignment) {
      CHECK(c >= 0);
      CHECK(c < part.circle_count);
      hit.insert(c);
    }
    CHECK(static_cast<int>(hit.size()) == part.circle_count);
  }
}

TEST_CASE("linking numbers of torus links") {
  LinkDiagram t33 = kh::from_braid(torus_braid(3));
  REQUIRE(t33.component_count() == 3);
  for (int l = 0; l < 3; ++l)
    for (int m = 0; m < 3; ++m) {
      if (l == m)
        CHECK(t33.linking(l, m) == 0);
      else
        CHECK(t33.linking(l, m) == -1);
    }

  LinkDiagram mt33 = t33.mirror();
  for (int l = 0; l < 3; ++l)
    for (int m = 0; m < 3; ++m)
      if (l != m) CHECK(mt33.linking(l, m) == 1);

  LinkDiagram unlink = kh::parse_pd("O 0\nO 1\n");
  CHECK(unlink.linking(0, 1) == 0);
}

TEST_CASE("partial resolutions of the six crossing torus diagram") {
  LinkDiagram t33 = kh::from_braid(torus_braid(3));
  auto seq = kh::partial_diagrams(t33, {0, 1});

  REQUIRE(seq.closed.size() == 3);
  REQUIRE(seq.open.size() == 2);

  // All crossings negative, so each closed step is the oriented resolution.
  CHECK(seq.closed[0].diagram == t33);
  CHECK(seq.closed[1].inherited);
  CHECK(seq.closed[2].inherited);
  CHECK_FALSE(seq.open[0].inherited);
  CHECK_FALSE(seq.open[1].inherited);

  CHECK(seq.closed[1].n_minus == 5);
  CHECK(seq.closed[1].n_plus == 0);
  CHECK(seq.closed[2].n_minus == 4);
  CHECK(seq.closed[2].n_plus == 0);

  // The two open diagrams simplify to a two-component unlink and an unknot.
  CHECK(seq.open[0].diagram.component_count() == 2);
  CHECK(seq.open[0].diagram.n() == 5);
  CHECK(seq.open[0].n_plus == 3);
  CHECK(seq.open[0].n_minus == 2);

  CHECK(seq.open[1].diagram.component_count() == 1);
  CHECK(seq.open[1].diagram.n() == 4);
  CHECK(seq.open[1].n_plus == 3);
  CHECK(seq.open[1].n_minus == 1);

  // The fully closed diagram is the four crossing torus diagram.
  CHECK(seq.closed[2].diagram.n() == 4);
  for (int x = 0; x < 4; ++x) CHECK(seq.closed[2].diagram.sign(x) == -1);
}

TEST_CASE("partial resolution errors") {
  LinkDiagram t = kh::from_braid(torus_braid(2));
  CHECK_THROWS_AS(kh::partial_diagrams(t, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(kh::partial_diagrams(t, {7}), std::invalid_argument);
  auto seq = kh::partial_diagrams(t, {});
  CHECK(seq.closed.size() == 1);
  CHECK(seq.open.empty());
}

TEST_CASE("unoriented data is independent of reorientation choices") {
  std::mt19937 rng(31337);
  LinkDiagram t33 = kh::from_braid(torus_braid(3));
  auto base = kh::partial_diagrams(t33, {0, 1});
  for (int trial = 0; trial < 10; ++trial) {
    auto chooser = [&](int) { return (rng() & 1u) != 0; };
    auto seq = kh::partial_diagrams(t33, {0, 1}, chooser);
    for (std::size_t k = 0; k < seq.closed.size(); ++k) {
      CHECK(seq.closed[k].diagram.n() == base.closed[k].diagram.n());
      CHECK(seq.closed[k].n_plus + seq.closed[k].n_minus ==
            base.closed[k].n_plus + base.closed[k].n_minus);
    }
    for (std::size_t k = 0; k < seq.open.size(); ++k) {
      CHECK(seq.open[k].diagram.n() == base.open[k].diagram.n());
      CHECK(seq.open[k].diagram.component_count() ==
            base.open[k].diagram.component_count());
    }
  }
}
