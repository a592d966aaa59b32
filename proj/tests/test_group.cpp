#include <gtest/gtest.h>

#include "support.hpp"

namespace kolchin {
namespace {

using testing::path_of;
using testing::show;

MapGroup sample_group(const std::string& file, const std::string& group = "K") {
  return testing::load_sample(file).group(group);
}

MapGroup stem_pair() {
  const auto doc = testing::load_sample("stem.kg");
  const auto g = doc.graphs.front().graph;
  return MapGroup(g, {{"f", doc.find_map("f")->map}, {"g", doc.find_map("g")->map}});
}

TEST(GroupWord, Parsing) {
  const std::vector<std::string> labels{"D", "E"};
  EXPECT_TRUE(parse_group_word("1", labels).empty());
  EXPECT_EQ(parse_group_word("D.~E", labels), (Word{{0, false}, {1, true}}));
  EXPECT_EQ(parse_group_word("D^3", labels).size(), 3u);
  EXPECT_EQ(parse_group_word("D^-2", labels), (Word{{0, true}, {0, true}}));
  EXPECT_EQ(parse_group_word("'D", labels), (Word{{0, true}}));
  EXPECT_TRUE(parse_group_word("D.~D", labels).empty());
  EXPECT_THROW(parse_group_word("F", labels), DomainError);
  EXPECT_THROW(parse_group_word("D..E", labels), DomainError);
  EXPECT_THROW(parse_group_word("D^", labels), DomainError);
}

TEST(GroupWord, LeftmostFactorAppliedLast) {
  const auto k = sample_group("rose3.kg", "N");
  const auto& f = k.generator(0);
  const auto& h = k.generator(1);
  EXPECT_TRUE(equal(evaluate(k, "f.h"), compose(f, h)));
  EXPECT_TRUE(equal(evaluate(k, "~f.h^2"), compose(invert(f), compose(h, h))));
  EXPECT_TRUE(evaluate(k, "1").is_identity());
}

TEST(Abelian, Certificates) {
  const auto rose = sample_group("rose.kg");
  EXPECT_TRUE(abelian_certificate(rose).abelian);

  const auto n = sample_group("rose3.kg", "N");
  const auto cert = abelian_certificate(n);
  EXPECT_FALSE(cert.abelian);
  ASSERT_TRUE(cert.witness);
  const auto& g = *n.graph();
  EXPECT_EQ(g.edge(cert.witness->edge).name, "c");
  EXPECT_EQ(show(g, cert.witness->lhs), "b a");
  EXPECT_EQ(show(g, cert.witness->rhs), "b");

  const auto& d = rose.generator(0);
  const MapGroup powers(rose.graph(), {{"D", d}, {"D2", compose(d, d)}});
  EXPECT_TRUE(abelian_certificate(powers).abelian);
  EXPECT_TRUE(abelian_certificate(sample_group("rose3.kg")).abelian);
}

TEST(Slide, EmptyPathIsIdentity) {
  const auto k = stem_pair();
  const auto r = slide(k, 2, EdgePath::trivial(0));
  for (std::size_t j = 0; j < k.size(); ++j) EXPECT_TRUE(equal(r.group.generator(j), k.generator(j)));
}

TEST(Slide, SuffixFormula) {
  const auto k = stem_pair();
  const auto& g = *k.graph();
  const EdgeId c = *g.find_edge("c");
  const auto sigma = path_of(g, "E");
  const auto r = slide(k, c, sigma);
  const auto& h = *r.group.graph();
  EXPECT_EQ(h.edge(c).terminal, *h.find_vertex("v1"));
  for (std::size_t j = 0; j < k.size(); ++j) {
    const auto& f = k.generator(j);
    EXPECT_EQ(r.group.generator(j).suffix(c), multiply(sigma.reversed(), f.suffix(c), apply(f, sigma)));
  }
  EXPECT_EQ(show(h, r.group.generator(0).suffix(c)), "a");
  EXPECT_EQ(show(h, r.group.generator(1).suffix(c)), "a a a");
  const RewriteStep step{"slide c along E", k, r.group, r.marking};
  EXPECT_TRUE(check_rewrite(step, 6).holds());
}

TEST(Slide, RoundTrip) {
  const auto k = stem_pair();
  const EdgeId c = *k.graph()->find_edge("c");
  const auto there = slide(k, c, path_of(*k.graph(), "E a"));
  const auto back = slide(there.group, c, path_of(*there.group.graph(), "~a ~E"));
  EXPECT_TRUE(*back.group.graph() == *k.graph());
  for (std::size_t j = 0; j < k.size(); ++j) {
    EXPECT_EQ(back.group.generator(j).suffixes(), k.generator(j).suffixes());
  }
}

TEST(Slide, RejectsPathsOutsideLowerStratum) {
  const auto k = stem_pair();
  EXPECT_THROW(slide(k, 1, path_of(*k.graph(), "c", 0)), DomainError);
  EXPECT_THROW(slide(k, 0, path_of(*k.graph(), "a")), DomainError);
}

TEST(Slide, PreservesOuterClassOnRandomSlides) {
  testing::Rng rng(79);
  int done = 0;
  for (int t = 0; t < 200 && done < 40; ++t) {
    auto g = testing::random_graph(rng, 5);
    const MapGroup k(g, {{"f", testing::random_map(g, rng, 6)}, {"g", testing::random_map(g, rng, 6)}});
    const EdgeId i = testing::uniform(rng, 1, std::max(1, g->edge_count() - 1));
    if (i >= g->edge_count()) continue;
    const auto sigma = testing::random_lower_loop(*g, rng, g->edge(i).terminal, i, 4);
    auto walk = sigma.edges();
    if (walk.empty()) continue;
    walk.pop_back();
    const auto open = tighten(*g, g->edge(i).terminal, walk);
    const auto r = slide(k, i, open);
    EXPECT_TRUE(check_rewrite({"slide", k, r.group, r.marking}, 5).holds());
    ++done;
  }
  EXPECT_GE(done, 20);
}

TEST(Condition, RoseUnchanged) {
  const auto k = sample_group("rose.kg");
  const auto c = condition(k);
  EXPECT_FALSE(c.changed());
  EXPECT_TRUE(*c.group.graph() == *k.graph());
}

TEST(Condition, CollapsesInertEdge) {
  auto g = std::make_shared<const FilteredGraph>(std::vector<std::string>{"v0", "v1"},
                                                 std::vector<EdgeRecord>{{"a", 0, 0}, {"E", 1, 0}, {"b", 1, 1}});
  const FilteredMap f(g, {EdgePath::trivial(0), EdgePath::trivial(0), path_of(*g, "E a ~E", 1)});
  const auto c = condition(MapGroup(g, {{"f", f}}));
  ASSERT_EQ(c.steps.size(), 1u);
  EXPECT_EQ(c.steps[0].description, "collapse E");
  const auto& h = *c.group.graph();
  EXPECT_EQ(h.rank(), g->rank());
  EXPECT_EQ(h.vertex_count(), 1);
  EXPECT_EQ(show(h, c.group.generator(0).suffix(*h.find_edge("b"))), "a");
  EXPECT_TRUE(c.certificate[0].holds());
}

TEST(Condition, CorpusRewritesPreserveOuterClass) {
  int steps = 0;
  for (const auto& name : testing::sample_names()) {
    const auto doc = testing::load_sample(name);
    for (const auto& ng : doc.groups) {
      const auto k = doc.group(ng.name);
      if (!abelian_certificate(k).abelian) continue;
      const auto c = condition(k, 6);
      ASSERT_EQ(c.certificate.size(), c.steps.size());
      for (std::size_t s = 0; s < c.steps.size(); ++s) {
        EXPECT_TRUE(check_rewrite(c.steps[s], 6).holds()) << name << ": " << c.steps[s].description;
        ++steps;
      }
      EXPECT_EQ(c.group.graph()->rank(), k.graph()->rank());
      for (std::size_t j = 0; j < k.size(); ++j) {
        EXPECT_TRUE(same_outer_class(k.generator(j), c.group.generator(j), c.marking, 6).holds()) << name;
      }
    }
  }
  EXPECT_GE(steps, 5);
}

TEST(Condition, LeafSample) {
  const auto c = condition(sample_group("leaf.kg"));
  std::vector<std::string> what;
  for (const auto& s : c.steps) what.push_back(s.description);
  EXPECT_EQ(what, (std::vector<std::string>{"delete valence-one vertex x with H", "slide w around d", "collapse P"}));
  const auto& h = *c.group.graph();
  EXPECT_EQ(h.vertex_count(), 1);
  EXPECT_EQ(show(h, c.group.generator(0).suffix(*h.find_edge("Q"))), "d");
}

TEST(Condition, NonLoopEdgesCarrySuffixes) {
  for (const auto& name : testing::sample_names()) {
    const auto doc = testing::load_sample(name);
    for (const auto& ng : doc.groups) {
      const auto k = doc.group(ng.name);
      if (!abelian_certificate(k).abelian) continue;
      const auto c = condition(k, 0);
      const auto& g = *c.group.graph();
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (g.is_loop(e)) continue;
        EXPECT_TRUE(c.group.active(e)) << name << ": " << g.edge(e).name;
      }
      for (VertexId v = 0; v < g.vertex_count(); ++v) EXPECT_NE(g.valence(v), 1) << name;
    }
  }
}

}  // namespace
}  // namespace kolchin
