#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

namespace kolchin {
namespace {

using testing::path_of;
using testing::show;

EssentialData data_for(const std::string& file, const std::string& group = "K") {
  const auto k = testing::load_sample(file).group(group);
  return essential_data(condition(k).group);
}

std::vector<std::string> edge_names(const EssentialData& d) {
  std::vector<std::string> out;
  for (const auto& e : d.edges) out.push_back(d.group.graph()->edge(e.edge).name);
  return out;
}

std::string axis_loop(const EssentialData& d, std::size_t a) {
  return show(*d.group.graph(), d.axes.at(a).period);
}

TEST(Essential, Rose) {
  const auto d = data_for("rose.kg");
  ASSERT_EQ(edge_names(d), (std::vector<std::string>{"b"}));
  ASSERT_EQ(d.axes.size(), 1u);
  EXPECT_EQ(axis_loop(d, 0), "a");
  EXPECT_EQ(d.axes[0].multiplicity(), 1u);
  EXPECT_EQ(d.edges[0].route, EssentialEdge::Route::kernel);
  EXPECT_EQ(show(*d.group.graph(), d.axes[0].translation.loop), "b a ~b");
}

TEST(Essential, Dehn) {
  const auto d = data_for("dehn.kg");
  ASSERT_EQ(edge_names(d), (std::vector<std::string>{"E2"}));
  ASSERT_EQ(d.axes.size(), 1u);
  EXPECT_EQ(axis_loop(d, 0), "E1");
  EXPECT_EQ(d.axes[0].multiplicity(), 1u);
  EXPECT_TRUE(d.rewrites.empty());
}

TEST(Essential, SharedAxis) {
  const auto d = data_for("rose3.kg");
  EXPECT_EQ(edge_names(d), (std::vector<std::string>{"b", "c"}));
  ASSERT_EQ(d.axes.size(), 1u);
  EXPECT_EQ(axis_loop(d, 0), "a");
  EXPECT_EQ(d.axes[0].multiplicity(), 2u);
}

TEST(Essential, SearchRouteAfterSlide) {
  const auto d = data_for("conjugate.kg");
  ASSERT_EQ(edge_names(d), (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(d.edges[1].route, EssentialEdge::Route::search);
  ASSERT_EQ(d.rewrites.size(), 1u);
  EXPECT_EQ(d.rewrites[0].description, "slide c along b");
  EXPECT_TRUE(check_rewrite(d.rewrites[0], 6).holds());
  EXPECT_EQ(show(*d.group.graph(), d.group.generator(0).suffix(2)), "a a");
  EXPECT_EQ(d.axes.size(), 1u);
}

TEST(Essential, TwoAxes) {
  const auto d = data_for("leaf.kg");
  EXPECT_EQ(edge_names(d), (std::vector<std::string>{"b", "Q"}));
  ASSERT_EQ(d.axes.size(), 2u);
  EXPECT_EQ(axis_loop(d, 0), "a");
  EXPECT_EQ(axis_loop(d, 1), "d");
}

TEST(Essential, EmptyCases) {
  EXPECT_TRUE(data_for("stem.kg").edges.empty());
  auto g = testing::rose(2);
  const auto d = essential_data(MapGroup(g, {{"id", FilteredMap::identity(g)}}));
  EXPECT_TRUE(d.edges.empty());
  EXPECT_TRUE(d.axes.empty());
  EXPECT_TRUE(verify_property_A(d.group, d).pass());
  EXPECT_TRUE(verify_property_A(d.group, d).checks.empty());
}

TEST(Essential, Errors) {
  const auto doc = testing::load_sample("rose3.kg");
  EXPECT_THROW(essential_data(doc.group("N")), DomainError);
  const auto q = testing::load_sample("quadratic.kg").group("K");
  try {
    essential_data(q, 8);
    FAIL() << "expected SearchExhausted";
  } catch (const SearchExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("stratum 3 (c)"), std::string::npos);
  }
}

TEST(Essential, IndependentOfGeneratorOrder) {
  const auto doc = testing::load_sample("rose3.kg");
  const auto k = doc.group("K");
  const MapGroup swapped(k.graph(), {k.generators()[1], k.generators()[0]});
  const auto d1 = essential_data(k);
  const auto d2 = essential_data(swapped);
  EXPECT_EQ(edge_names(d1), edge_names(d2));
  ASSERT_EQ(d1.axes.size(), d2.axes.size());
  for (std::size_t a = 0; a < d1.axes.size(); ++a) {
    EXPECT_EQ(d1.axes[a].period, d2.axes[a].period);
    EXPECT_EQ(d1.axes[a].preferred, d2.axes[a].preferred);
    EXPECT_EQ(d1.axes[a].edges, d2.axes[a].edges);
  }
}

TEST(PropertyA, PassesOnCorpus) {
  for (const auto& name : testing::sample_names()) {
    const auto doc = testing::load_sample(name);
    for (const auto& ng : doc.groups) {
      const auto k = doc.group(ng.name);
      if (!abelian_certificate(k).abelian) continue;
      const auto c = condition(k);
      try {
        const auto d = essential_data(c.group);
        const auto rep = verify_property_A(d.group, d);
        EXPECT_TRUE(rep.pass()) << name;
      } catch (const SearchExhausted&) {
        EXPECT_EQ(name, "quadratic.kg");
      }
    }
  }
}

TEST(PropertyA, CorruptedAnchorIsCaught) {
  auto d = data_for("rose.kg");
  const auto& g = *d.group.graph();
  auto& a = d.axes[0];
  a.preferred = multiply(a.preferred, path_of(g, "b"));
  const auto rep = verify_property_A(d.group, d);
  EXPECT_FALSE(rep.pass());
  bool caught = false;
  for (const auto& c : rep.checks) {
    if (c.check == "splitting-vertex" && c.subject == "v_alpha" && !c.pass) {
      caught = true;
      EXPECT_NE(c.witness.find("b b"), std::string::npos);
    }
  }
  EXPECT_TRUE(caught);
}

// Twist coordinates

TEST(Twist, RosePowers) {
  const auto d = data_for("rose.kg");
  for (int k = -5; k <= 5; ++k) {
    const std::string w = k == 0 ? "1" : "D^" + std::to_string(k);
    EXPECT_EQ(twist_coordinates(w, d).values, (std::vector<long long>{k})) << w;
  }
  EXPECT_TRUE(twist_coordinates("1", d).is_zero());
  EXPECT_EQ(twist_coordinates("D^2.D", d).values[0], twist_coordinates("D^2", d).values[0] + twist_coordinates("D", d).values[0]);
}

TEST(Twist, MatchesHandComputation) {
  // s_b(D^k) is the lift fixing b: twist b ~a^k ~b; s_alpha(D^k) fixes the
  // base, so the difference is (b a ~b)^k
  const auto d = data_for("rose.kg");
  const auto& g = *d.group.graph();
  for (int k = -3; k <= 3; ++k) {
    const auto f = power(d.group.generator(0), k);
    const auto delta = deck_difference(canonical_edge_lift(f, d.edges[0]), canonical_axis_lift(f, d.axes[0]));
    EXPECT_EQ(delta.loop, power(path_of(g, "b a ~b"), k));
  }
}

TEST(Twist, SharedAxisColumns) {
  const auto d = data_for("rose3.kg");
  EXPECT_EQ(twist_coordinates("f", d).values, (std::vector<long long>{1, 0}));
  EXPECT_EQ(twist_coordinates("g", d).values, (std::vector<long long>{0, 1}));
  EXPECT_EQ(twist_coordinates("~f.g^3", d).values, (std::vector<long long>{-1, 3}));
}

std::string product(const std::string& a, const std::string& b) {
  if (a == "1") return b;
  if (b == "1") return a;
  return a + "." + b;
}

TEST(Twist, AdditiveAndFaithfulOnCorpus) {
  testing::Rng rng(83);
  int nonzero = 0;
  for (const auto& name : {"rose.kg", "dehn.kg", "rose3.kg", "conjugate.kg", "leaf.kg", "stem.kg"}) {
    const auto d = data_for(name);
    const auto labels = d.group.labels();
    for (int t = 0; t < 40; ++t) {
      const auto w1 = testing::random_group_word(labels, rng, 5);
      const auto w2 = testing::random_group_word(labels, rng, 5);
      const auto p1 = twist_coordinates(w1, d).values;
      const auto p2 = twist_coordinates(w2, d).values;
      const auto w12 = product(w1, w2);
      const auto p12 = twist_coordinates(w12, d);
      for (std::size_t i = 0; i < p1.size(); ++i) EXPECT_EQ(p12.values[i], p1[i] + p2[i]) << name << " " << w1 << " " << w2;
      EXPECT_EQ(p12.is_zero(), evaluate(d.group, w12).is_identity()) << name << " " << w12;
      if (!p12.is_zero()) ++nonzero;
    }
  }
  EXPECT_GT(nonzero, 100);
}

// Interesting lifts

TEST(InterestingLifts, Rose) {
  const auto d = data_for("rose.kg");
  const auto rep = interesting_lifts(d.group.generator(0), d, 0, 5, 6);
  EXPECT_EQ(rep.found, (std::vector<long long>{0, 1}));
  EXPECT_EQ(rep.predicted, (std::vector<long long>{0, 1}));
  EXPECT_EQ(rep.differences, (std::vector<long long>{-1, 1}));
  EXPECT_TRUE(rep.matches());
  EXPECT_TRUE(rep.complete);
  for (const auto& c : rep.candidates) {
    EXPECT_TRUE(c.commutes);
    if (c.exponent == 2) {
      EXPECT_FALSE(c.interesting);
      EXPECT_TRUE(c.fixed.fixed_vertices.empty());
      EXPECT_TRUE(c.fixed.exactly_two_within_bounds);
    }
  }
  // the found lifts are s_alpha(D) and s_b(D)
  const auto& f = d.group.generator(0);
  EXPECT_EQ(rep.candidates[5].lift, canonical_axis_lift(f, d.axes[0]));
  EXPECT_EQ(rep.candidates[6].lift, canonical_edge_lift(f, d.edges[0]));
}

TEST(InterestingLifts, Dehn) {
  const auto d = data_for("dehn.kg");
  const auto rep = interesting_lifts(d.group.generator(0), d, 0, 5, 6, 64);
  EXPECT_EQ(rep.found, (std::vector<long long>{0, 1}));
  EXPECT_TRUE(rep.matches());
}

TEST(InterestingLifts, PowersAndIdentity) {
  const auto d = data_for("rose.kg");
  const auto sq = interesting_lifts(evaluate(d.group, "D^-2"), d, 0, 3, 5);
  EXPECT_EQ(sq.found, (std::vector<long long>{-2, 0}));
  EXPECT_TRUE(sq.matches());
  const auto id = interesting_lifts(evaluate(d.group, "1"), d, 0, 3, 3);
  EXPECT_TRUE(id.identity);
  EXPECT_FALSE(id.matches());
  const auto far = interesting_lifts(evaluate(d.group, "D^4"), d, 0, 2, 4);
  EXPECT_FALSE(far.complete);
}

// Index arithmetic

// |GL(n, F_3)| by counting invertible matrices.
long long count_gl3(int n) {
  const int cells = n * n;
  long long total = 1;
  for (int k = 0; k < cells; ++k) total *= 3;
  long long count = 0;
  std::vector<std::vector<int>> m(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<int>(c % 3);
        c /= 3;
      }
    }
    // rank over F_3 by elimination
    auto a = m;
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
      int piv = -1;
      for (int r = rank; r < n; ++r) {
        if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) piv = r;
      }
      if (piv < 0) continue;
      std::swap(a[static_cast<std::size_t>(rank)], a[static_cast<std::size_t>(piv)]);
      const int inv = a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];  // 1 and 2 are self-inverse mod 3
      for (auto& x : a[static_cast<std::size_t>(rank)]) x = (x * inv) % 3;
      for (int r = 0; r < n; ++r) {
        if (r == rank) continue;
        const int f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
        for (int j = 0; j < n; ++j) {
          auto& x = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
          x = ((x - f * a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)]) % 3 + 3) % 3;
        }
      }
      ++rank;
    }
    if (rank == n) ++count;
  }
  return count;
}

TEST(IndexBound, SmallOrdersMatchCounting) {
  EXPECT_EQ(gl3_order(0), 1);
  EXPECT_EQ(gl3_order(1), count_gl3(1));
  EXPECT_EQ(gl3_order(2), count_gl3(2));
  EXPECT_EQ(gl3_order(3), count_gl3(3));
  EXPECT_EQ(gl3_order(2), 48);
  EXPECT_EQ(gl3_order(3), 11232);
}

TEST(IndexBound, Comparisons) {
  for (int n = 2; n <= 8; ++n) {
    const auto b = index_bound(n);
    EXPECT_TRUE(b.d_below()) << n;
    EXPECT_TRUE(b.product_below()) << n;
    EXPECT_EQ(b.product, gl3_order(n) * gl3_order(2 * n - 3));
    EXPECT_EQ(b.vcd, 2 * n - 3);
  }
  EXPECT_EQ(index_bound(2).three_n2, 81);
  EXPECT_THROW(index_bound(1), DomainError);
}

}  // namespace
}  // namespace kolchin
