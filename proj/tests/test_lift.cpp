#include <gtest/gtest.h>

#include <variant>

#include "support.hpp"

namespace kolchin {
namespace {

using testing::path_of;
using testing::show;

struct RoseD {
  GraphPtr g = testing::rose(2);
  FilteredMap d{g, {EdgePath::trivial(0), path_of(*g, "a")}};
  EdgePath p(const std::string& s) const { return path_of(*g, s); }
  Lift lift(const std::string& twist) const { return Lift(d, twist.empty() ? EdgePath::trivial(0) : p(twist)); }
};

TEST(LiftFixingVertex, Examples) {
  RoseD r;
  EXPECT_TRUE(lift_fixing_vertex(r.d, EdgePath::trivial(0)).twist().empty());
  const auto l = lift_fixing_vertex(r.d, r.p("b"));
  EXPECT_EQ(show(*r.g, l.twist()), "b ~a ~b");
  EXPECT_TRUE(fixes_vertex(l, r.p("b")));
}

TEST(LiftFixingVertex, FixesItsVertexOnRandomMaps) {
  testing::Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    auto g = testing::random_graph(rng, 6);
    const auto f = testing::random_map(g, rng, 8);
    const auto p = testing::random_path(*g, rng, 8);
    EXPECT_TRUE(fixes_vertex(lift_fixing_vertex(f, p), p));
  }
}

TEST(FixesVertex, Examples) {
  RoseD r;
  const Lift id(FilteredMap::identity(r.g), EdgePath::trivial(0));
  EXPECT_TRUE(fixes_vertex(id, r.p("a b ~a")));
  EXPECT_FALSE(fixes_vertex(r.lift(""), r.p("b")));
  EXPECT_TRUE(fixes_vertex(r.lift("b ~a ~b"), r.p("b")));
}

TEST(DeckDifference, Examples) {
  RoseD r;
  const auto l1 = r.lift("");
  const auto l2 = r.lift("b ~a ~b");
  EXPECT_TRUE(deck_difference(l1, l1).trivial());
  const auto delta = deck_difference(l1, l2);
  EXPECT_EQ(show(*r.g, delta.loop), "b a ~b");
  EXPECT_EQ(translate(delta, l2).twist(), l1.twist());
  EXPECT_THROW(deck_difference(l1, Lift::base_lift(FilteredMap::identity(r.g))), DomainError);
}

TEST(PowerOf, Examples) {
  RoseD r;
  const DeckElement axis{r.p("b a ~b")};
  EXPECT_EQ(power_of(DeckElement{EdgePath::trivial(0)}, axis), 0);
  EXPECT_EQ(power_of(DeckElement{r.p("b a a ~b")}, axis), 2);
  EXPECT_EQ(power_of(DeckElement{r.p("b ~a ~a ~a ~b")}, axis), -3);
  EXPECT_FALSE(power_of(DeckElement{r.p("a")}, axis));
  EXPECT_THROW(power_of(DeckElement{r.p("a")}, DeckElement{r.p("a a")}), DomainError);
}

TEST(Lift, CompositionMatchesAutomorphisms) {
  testing::Rng rng(67);
  for (int t = 0; t < 60; ++t) {
    auto g = testing::random_graph(rng, 5);
    const auto b = spanning_tree_basis(g, 0);
    const auto back = [&](const EdgePath& p) { return multiply(p, *testing::lower_path(*g, p.end(), 0, g->edge_count())); };
    const Lift l1(testing::random_map(g, rng, 6), back(testing::random_path(*g, rng, 5)));
    const Lift l2(testing::random_map(g, rng, 6), back(testing::random_path(*g, rng, 5)));
    EXPECT_EQ(compose(l1, l2).automorphism(b), compose(l1.automorphism(b), l2.automorphism(b)));
    // L1 = t_delta o L2 on the same map: automorphisms differ by conjugation by delta
    const Lift l3(l1.map(), back(testing::random_path(*g, rng, 5)));
    const auto delta = deck_difference(l1, l3);
    const auto dw = b.to_word(delta.loop);
    for (const auto& bl : b.loops) {
      const auto x = b.to_word(bl.loop);
      const auto lhs = l1.automorphism(b)(x);
      const auto rhs = multiply<GenLetter>(multiply<GenLetter>(dw, l3.automorphism(b)(x)), inverted<GenLetter>(dw));
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(FixedVertices, Examples) {
  RoseD r;
  const Lift id(FilteredMap::identity(r.g), EdgePath::trivial(0));
  // 1 + 4 + 12 + 36 reduced paths of length <= 3 in the rose on two loops
  EXPECT_EQ(fixed_vertices(id, 3).size(), 53u);
  const auto fx = fixed_vertices(r.lift(""), 3);
  std::vector<std::string> names;
  for (const auto& p : fx) names.push_back(show(*r.g, p));
  std::sort(names.begin(), names.end());
  // the fixed subgroup <a, b a ~b> of D, up to length 3
  EXPECT_EQ(names, (std::vector<std::string>{"1", "a", "a a", "a a a", "b a ~b", "b ~a ~b", "~a", "~a ~a", "~a ~a ~a"}));
  // twist a is the lift fixing ~b
  const auto moved = fixed_vertices(r.lift("a"), 3);
  EXPECT_EQ(moved.size(), 13u);
  EXPECT_TRUE(std::find(moved.begin(), moved.end(), r.p("~b")) != moved.end());
  EXPECT_EQ(lift_fixing_vertex(r.d, r.p("~b")).twist(), r.p("a"));
  EXPECT_TRUE(fixed_vertices(r.lift("a a"), 3).empty());
}

TEST(FixedRay, Examples) {
  RoseD r;
  const auto base = r.lift("");
  const auto ea = fixed_ray(base, EdgePath::trivial(0), {0, false});
  ASSERT_TRUE(ea);
  const auto* pa = std::get_if<EvPeriodicRay>(&*ea);
  ASSERT_TRUE(pa);
  EXPECT_EQ(show(*r.g, pa->period), "a");

  const auto eb = fixed_ray(base, EdgePath::trivial(0), {1, false});
  ASSERT_TRUE(eb);
  ASSERT_TRUE(std::holds_alternative<IteratedRay>(*eb));
  const auto xb = expand(*eb, 6);
  ASSERT_TRUE(xb);
  EXPECT_EQ(show(*r.g, EdgePath::unchecked(0, 0, *xb)), "b a a a a a");

  const auto ena = fixed_ray(base, EdgePath::trivial(0), {0, true});
  ASSERT_TRUE(ena);
  EXPECT_EQ(show(*r.g, std::get<EvPeriodicRay>(*ena).period), "~a");

  EXPECT_FALSE(fixed_ray(base, EdgePath::trivial(0), {1, true}));
}

TEST(Splitting, Windows) {
  auto g = testing::rose(2);
  const auto s = highest_edge_splitting(path_of(*g, "a b a b"));
  EXPECT_EQ(s.highest, 1);
  EXPECT_EQ(s.positions, (std::vector<std::size_t>{1, 3}));
  const auto s2 = highest_edge_splitting(path_of(*g, "a a a"));
  EXPECT_EQ(s2.highest, 0);
  EXPECT_EQ(s2.positions, (std::vector<std::size_t>{0, 1, 2}));
  // a reversed crossing splits at its far end
  EXPECT_EQ(highest_edge_splitting(path_of(*g, "a ~b a")).positions, (std::vector<std::size_t>{2}));
  EXPECT_THROW(highest_edge_splitting(EdgePath::unchecked(0, 0, {{1, false}, {1, true}})), DomainError);
}

TEST(SplittingTranslation, Examples) {
  RoseD r;
  const AxisLine a_axis{EdgePath::trivial(0), r.p("a")};
  EXPECT_EQ(splitting_translation(r.lift(""), a_axis), 0);
  EXPECT_EQ(splitting_translation(r.lift("a"), a_axis), 1);
  EXPECT_EQ(splitting_translation(r.lift("~a ~a"), a_axis), -2);
  const Lift id(FilteredMap::identity(r.g), EdgePath::trivial(0));
  EXPECT_EQ(splitting_translation(id, AxisLine{r.p("b"), r.p("a b")}), 0);
  EXPECT_THROW(splitting_translation(r.lift("b"), a_axis), DomainError);
}

TEST(SplittingTranslation, AdditiveAndZeroIffFixed) {
  const auto cases = testing::axis_cases(50);
  int moved = 0;
  testing::Rng rng(73);
  for (const auto& c : cases) {
    const auto& g = *c.f.graph();
    const DeckElement t = translation_of(c.line);
    const int m1 = testing::uniform(rng, -2, 2);
    const int m2 = testing::uniform(rng, -2, 2);
    const Lift l1 = translate({power(t.loop, m1)}, lift_fixing_vertex(c.f, c.line.anchor));
    const Lift l2 = translate({power(t.loop, m2)}, lift_fixing_vertex(c.h, c.line.anchor));
    const auto r1 = splitting_translation(l1, c.line);
    const auto r2 = splitting_translation(l2, c.line);
    const auto n = static_cast<long long>(highest_edge_splitting(c.line).positions.size());
    EXPECT_EQ(r1, m1 * n);
    EXPECT_EQ(splitting_translation(compose(l1, l2), c.line), r1 + r2);

    const auto s = highest_edge_splitting(c.line);
    bool all_fixed = true;
    for (const auto pos : s.positions) {
      const auto x = vertex_on_axis(g, c.line, static_cast<long long>(pos));
      all_fixed = all_fixed && l1(x) == x;
    }
    EXPECT_EQ(r1 == 0, all_fixed);
    if (r1 != 0) ++moved;
  }
  EXPECT_GT(moved, 20);
}

TEST(ClassifyFixedPoints, Examples) {
  RoseD r;
  const auto base = classify_fixed_points(r.lift(""), 3);
  EXPECT_GE(base.count_lower_bound, 3u);
  EXPECT_FALSE(base.exactly_two_within_bounds);
  EXPECT_FALSE(base.identity);

  const Lift id(FilteredMap::identity(r.g), EdgePath::trivial(0));
  EXPECT_TRUE(classify_fixed_points(id, 2).identity);

  const auto shifted = classify_fixed_points(r.lift("a a"), 3);
  EXPECT_TRUE(shifted.fixed_vertices.empty());
  EXPECT_EQ(shifted.count_lower_bound, 2u);
  EXPECT_TRUE(shifted.exactly_two_within_bounds);
}

TEST(Rays, PeriodicComparison) {
  auto g = testing::rose(2);
  const auto x = periodic_ray(*g, path_of(*g, "b a"), path_of(*g, "a"));
  const auto y = periodic_ray(*g, path_of(*g, "b"), path_of(*g, "a a"));
  EXPECT_TRUE(compare_rays(x, y).equal);
  EXPECT_FALSE(compare_rays(x, periodic_ray(*g, path_of(*g, "b"), path_of(*g, "~a"))).equal);
}

}  // namespace
}  // namespace kolchin
