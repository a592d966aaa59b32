#pragma once

// Finitely generated subgroups of FHE(G,V) and the rewrites that change
// the underlying filtered graph: sliding an edge and conditioning.

#include <cstddef>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kolchin/errors.hpp"
#include "kolchin/filtered_map.hpp"
#include "kolchin/graph.hpp"
#include "kolchin/oracle.hpp"
#include "kolchin/word.hpp"

namespace kolchin {

struct LabeledMap {
  std::string label;
  FilteredMap map;
};

class MapGroup {
 public:
  MapGroup(GraphPtr graph, std::vector<LabeledMap> generators)
      : graph_(std::move(graph)), generators_(std::move(generators)) {
    for (const auto& g : generators_) {
      if (!same_graph(g.map.graph(), graph_)) throw DomainError("generator '" + g.label + "' lives on another graph");
    }
  }

  const GraphPtr& graph() const { return graph_; }
  const std::vector<LabeledMap>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }
  const FilteredMap& generator(std::size_t k) const { return generators_.at(k).map; }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& g : generators_) out.push_back(g.label);
    return out;
  }

  std::optional<std::size_t> find(const std::string& label) const {
    for (std::size_t k = 0; k < generators_.size(); ++k) {
      if (generators_[k].label == label) return k;
    }
    return std::nullopt;
  }

  /// Does some generator have a nontrivial suffix on e?
  bool active(EdgeId e) const {
    for (const auto& g : generators_) {
      if (!g.map.suffix(e).empty()) return true;
    }
    return false;
  }

 private:
  GraphPtr graph_;
  std::vector<LabeledMap> generators_;
};

/// Parses "D.D.~E^2": labels separated by '.', a '~' or '\'' prefix for
/// the inverse and an optional integer exponent. "1" is the empty word.
inline Word parse_group_word(const std::string& text, const std::vector<std::string>& labels) {
  Word w;
  if (text == "1" || text.empty()) return w;
  std::size_t at = 0;
  while (at <= text.size()) {
    const std::size_t dot = std::min(text.find('.', at), text.size());
    std::string tok = text.substr(at, dot - at);
    at = dot + 1;
    if (tok.empty()) throw DomainError("empty factor in word '" + text + "'");
    bool inv = false;
    if (tok[0] == '~' || tok[0] == '\'') {
      inv = true;
      tok.erase(0, 1);
    }
    long long exp = 1;
    if (const auto caret = tok.find('^'); caret != std::string::npos) {
      const std::string e = tok.substr(caret + 1);
      char* end = nullptr;
      exp = std::strtoll(e.c_str(), &end, 10);
      if (e.empty() || *end != '\0') throw DomainError("bad exponent in '" + text + "'");
      tok.erase(caret);
    }
    int index = -1;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (labels[k] == tok) index = static_cast<int>(k);
    }
    if (index < 0) throw DomainError("unknown generator '" + tok + "'");
    if (inv) exp = -exp;
    const GenLetter l{index, exp < 0};
    for (long long n = exp < 0 ? -exp : exp; n > 0; --n) append_reduced<GenLetter>(w, std::span<const GenLetter>(&l, 1));
    if (dot == text.size()) break;
  }
  return w;
}

/// x1 x2 ... xm evaluates to x1 o x2 o ... o xm: the leftmost factor is
/// applied last.
inline FilteredMap evaluate(const MapGroup& k, const Word& w) {
  FilteredMap out = FilteredMap::identity(k.graph());
  for (const auto& l : w) {
    const auto& g = k.generator(static_cast<std::size_t>(l.index));
    out = compose(out, l.inverted ? invert(g) : g);
  }
  return out;
}

inline FilteredMap evaluate(const MapGroup& k, const std::string& word) {
  return evaluate(k, parse_group_word(word, k.labels()));
}

// ---------------------------------------------------------------------------
// Commutation

struct AbelianCertificate {
  struct Witness {
    std::size_t first = 0;
    std::size_t second = 0;
    EdgeId edge = -1;
    /// Suffixes of first o second and second o first on edge.
    EdgePath lhs;
    EdgePath rhs;
  };

  bool abelian = true;
  std::vector<std::pair<std::size_t, std::size_t>> checked;
  std::optional<Witness> witness;
};

inline AbelianCertificate abelian_certificate(const MapGroup& k) {
  AbelianCertificate c;
  for (std::size_t a = 0; a < k.size(); ++a) {
    for (std::size_t b = a + 1; b < k.size(); ++b) {
      const FilteredMap ab = compose(k.generator(a), k.generator(b));
      const FilteredMap ba = compose(k.generator(b), k.generator(a));
      c.checked.emplace_back(a, b);
      for (EdgeId e = 0; e < k.graph()->edge_count(); ++e) {
        if (ab.suffix(e) == ba.suffix(e)) continue;
        c.abelian = false;
        c.witness = AbelianCertificate::Witness{a, b, e, ab.suffix(e), ba.suffix(e)};
        return c;
      }
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Rewrites

/// One graph rewrite, with enough data to replay the outer-class check.
struct RewriteStep {
  std::string description;
  MapGroup before;
  MapGroup after;
  GraphMarking marking;
};

/// Builds the image group on marking.to() from per-generator suffix lists.
inline MapGroup rebuild(const MapGroup& k, const GraphPtr& g, const std::vector<std::vector<EdgePath>>& suffixes) {
  std::vector<LabeledMap> gens;
  for (std::size_t j = 0; j < k.size(); ++j) gens.push_back({k.generators()[j].label, FilteredMap(g, suffixes[j])});
  return MapGroup(g, std::move(gens));
}

struct SlideResult {
  MapGroup group;
  GraphMarking marking;
};

/// Slides the terminal end of E_i along sigma, a path in G_{i-1} from
/// term(E_i). The new edge E_i' ends at the end of sigma; the marking sends
/// E_i to E_i' ~sigma. New suffixes: u'_i = [~sigma u_i f_#(sigma)], and
/// higher suffixes are rewritten through the marking.
inline SlideResult slide(const MapGroup& k, EdgeId i, const EdgePath& sigma_in) {
  const auto& g = k.graph();
  if (i < 0 || i >= g->edge_count()) throw DomainError("slide: edge index out of range");
  if (sigma_in.start() != g->edge(i).terminal) throw DomainError("slide: path does not start at the terminal vertex of " + g->edge(i).name);
  for (const auto& e : sigma_in.edges()) {
    if (e.edge >= i) throw DomainError("slide: path escapes G_" + std::to_string(i) + " through " + g->format(e));
  }
  EdgePath::make(*g, sigma_in.start(), sigma_in.edges());
  const EdgePath sigma = tighten(sigma_in);
  if (sigma.empty()) return {k, GraphMarking::identity(g)};

  std::vector<EdgeRecord> edges = g->edges();
  edges[static_cast<std::size_t>(i)].terminal = sigma.end();
  auto h = std::make_shared<const FilteredGraph>(g->vertex_names(), std::move(edges));

  std::vector<VertexId> vm;
  for (VertexId v = 0; v < g->vertex_count(); ++v) vm.push_back(v);
  std::vector<EdgePath> images;
  for (EdgeId e = 0; e < g->edge_count(); ++e) {
    if (e == i) {
      images.push_back(concat(edge_path(*h, {i, false}), sigma.reversed()));
    } else {
      images.push_back(edge_path(*h, {e, false}));
    }
  }
  GraphMarking marking(g, h, std::move(vm), std::move(images));

  std::vector<std::vector<EdgePath>> suffixes;
  for (const auto& gen : k.generators()) {
    std::vector<EdgePath> s;
    for (EdgeId e = 0; e < g->edge_count(); ++e) {
      const EdgePath& u = gen.map.suffix(e);
      if (e == i) {
        // sigma and u lie in G_{i-1}, which the slide does not touch
        s.push_back(multiply(sigma.reversed(), u, apply(gen.map, sigma)));
      } else {
        s.push_back(marking.apply(u));
      }
    }
    suffixes.push_back(std::move(s));
  }
  return {rebuild(k, h, suffixes), std::move(marking)};
}

/// Replays a rewrite step through the outer-class oracle, generator by
/// generator. Returns the first failing verdict, or a passing one.
inline Verdict check_rewrite(const RewriteStep& step, int max_length) {
  Verdict out;
  out.bound = max_length;
  for (std::size_t j = 0; j < step.before.size(); ++j) {
    Verdict v = same_outer_class(step.before.generator(j), step.after.generator(j), step.marking, max_length);
    if (!v.holds()) {
      v.detail = step.before.generators()[j].label + ": " + v.detail;
      return v;
    }
  }
  return out;
}

struct ConditionResult {
  MapGroup group;
  std::vector<RewriteStep> steps;
  /// Composite marking from the input graph to the conditioned graph.
  GraphMarking marking;
  /// One verdict per step; all hold unless a bug was trapped.
  std::vector<Verdict> certificate;

  bool changed() const { return !steps.empty(); }
};

namespace detail {

/// Transports every generator across a collapse that drops edge `gone`.
inline MapGroup transport_collapse(const MapGroup& k, const Collapse& c, EdgeId gone) {
  std::vector<std::vector<EdgePath>> suffixes;
  for (const auto& gen : k.generators()) {
    std::vector<EdgePath> s;
    for (EdgeId e = 0; e < k.graph()->edge_count(); ++e) {
      if (e == gone) continue;
      s.push_back(c.rewriter.apply(gen.map.suffix(e)));
    }
    suffixes.push_back(std::move(s));
  }
  return rebuild(k, c.graph, suffixes);
}

/// k with u = E^k for the loop edge e, if u is a power of it.
inline std::optional<long long> loop_exponent(const EdgePath& u, EdgeId e) {
  if (u.empty()) return 0;
  const bool rev = u[0].reversed;
  for (const auto& x : u.edges()) {
    if (x.edge != e || x.reversed != rev) return std::nullopt;
  }
  const auto n = static_cast<long long>(u.size());
  return rev ? -n : n;
}

/// (a) a valence-one vertex and its edge.
inline std::optional<RewriteStep> prune_leaf(const MapGroup& k) {
  const auto& g = *k.graph();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.valence(v) != 1) continue;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const auto& rec = g.edge(e);
      if (rec.initial != v && rec.terminal != v) continue;
      const Collapse c = collapse_edge(k.graph(), e, rec.initial == v);
      return RewriteStep{"delete valence-one vertex " + g.vertex_name(v) + " with " + rec.name, k,
                         transport_collapse(k, c, e), c.rewriter};
    }
  }
  return std::nullopt;
}

/// (b) a non-loop edge whose suffix is trivial for every generator.
inline std::optional<RewriteStep> collapse_inert(const MapGroup& k) {
  const auto& g = *k.graph();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (g.is_loop(e) || k.active(e)) continue;
    // keep the base vertex where it is when possible
    const Collapse c = collapse_edge(k.graph(), e, g.edge(e).terminal == g.base());
    return RewriteStep{"collapse " + g.edge(e).name, k, transport_collapse(k, c, e), c.rewriter};
  }
  return std::nullopt;
}

/// (c) at a vertex v whose lowest edge E_i is a loop and which is the
/// initial vertex of fewer than two edges, when every other edge at v is
/// a non-loop ending at v with suffixes E_i^{k_j(f)}: shift every k_j(f)
/// by -k_{j0}(f), which slides v around E_i. Afterwards E_{j0} has trivial
/// suffixes and is collapsed by (b).
inline std::optional<RewriteStep> normalize_loop_slide(const MapGroup& k) {
  const auto& g = *k.graph();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    std::vector<EdgeId> at;
    int outgoing = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const auto& rec = g.edge(e);
      if (rec.initial == v || rec.terminal == v) at.push_back(e);
      outgoing += rec.initial == v;
    }
    if (at.size() < 2 || outgoing >= 2) continue;
    const EdgeId loop = at.front();
    if (!g.is_loop(loop)) continue;
    bool ok = true;
    std::vector<EdgeId> others(at.begin() + 1, at.end());
    std::vector<std::vector<long long>> ks(k.size());
    for (const EdgeId e : others) {
      if (g.is_loop(e) || g.edge(e).terminal != v) {
        ok = false;
        break;
      }
      for (std::size_t j = 0; j < k.size() && ok; ++j) {
        const auto x = loop_exponent(k.generator(j).suffix(e), loop);
        if (!x) ok = false;
        else ks[j].push_back(*x);
      }
    }
    if (!ok || others.empty()) continue;
    bool nonzero = false;
    for (const auto& row : ks) nonzero = nonzero || row.front() != 0;
    if (!nonzero) continue;

    std::vector<std::vector<EdgePath>> suffixes;
    const EdgePath one = edge_path(g, {loop, false});
    for (std::size_t j = 0; j < k.size(); ++j) {
      std::vector<EdgePath> s = k.generator(j).suffixes();
      for (std::size_t t = 0; t < others.size(); ++t) {
        s[static_cast<std::size_t>(others[t])] = power(one, ks[j][t] - ks[j].front());
      }
      suffixes.push_back(std::move(s));
    }
    return RewriteStep{"slide " + g.vertex_name(v) + " around " + g.edge(loop).name, k, rebuild(k, k.graph(), suffixes),
                       GraphMarking::identity(k.graph())};
  }
  return std::nullopt;
}

}  // namespace detail

/// Normalizes K until every vertex is the initial vertex of at least two
/// edges or no rule applies. Each step is replayed through the outer-class
/// oracle at `check_length` (0 disables the check); a failure is a bug and
/// raises InternalError.
inline ConditionResult condition(const MapGroup& k, int check_length = 6) {
  ConditionResult r{k, {}, GraphMarking::identity(k.graph()), {}};
  for (;;) {
    std::optional<RewriteStep> step = detail::prune_leaf(r.group);
    if (!step) step = detail::collapse_inert(r.group);
    if (!step) step = detail::normalize_loop_slide(r.group);
    if (!step) break;
    if (check_length > 0) {
      Verdict v = check_rewrite(*step, check_length);
      if (!v.holds()) throw InternalError("condition: rewrite '" + step->description + "' changed an outer class: " + v.detail);
      r.certificate.push_back(std::move(v));
    }
    r.marking = r.marking.then(step->marking);
    r.group = step->after;
    r.steps.push_back(std::move(*step));
  }
  return r;
}

}  // namespace kolchin
