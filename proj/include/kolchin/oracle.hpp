#pragma once

// Brute-force oracles: fixed words, conjugacy, primitive roots and
// outer-class comparison. They are independent of the lift and axis
// machinery and are used both by tests and by the bounded search routes.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kolchin/errors.hpp"
#include "kolchin/filtered_map.hpp"
#include "kolchin/graph.hpp"
#include "kolchin/word.hpp"

namespace kolchin {

struct Verdict {
  enum class Outcome { holds, fails, inconclusive };

  Outcome outcome = Outcome::holds;
  /// Search bound the verdict was reached at.
  int bound = 0;
  /// Replayable counterexample when outcome == fails.
  std::optional<Word> witness;
  std::string detail;

  bool holds() const { return outcome == Outcome::holds; }
};

inline std::string to_string(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::holds: return "holds";
    case Verdict::Outcome::fails: return "fails";
    case Verdict::Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

/// Calls visit(w) on every reduced word of exactly `length` letters over
/// `rank` generators, in lexicographic order (x0 < ~x0 < x1 < ...).
/// Returning false from visit stops the walk.
inline bool for_each_reduced_word(int rank, int length, const std::function<bool(const Word&)>& visit) {
  Word w;
  std::function<bool()> rec = [&]() -> bool {
    if (static_cast<int>(w.size()) == length) return visit(w);
    for (int g = 0; g < rank; ++g) {
      for (bool inv : {false, true}) {
        const GenLetter l{g, inv};
        if (!w.empty() && w.back() == l.inverse()) continue;
        w.push_back(l);
        const bool go_on = rec();
        w.pop_back();
        if (!go_on) return false;
      }
    }
    return true;
  };
  return rec();
}

/// All reduced w with |w| <= max_length and phi(w) = w, shortlex order.
inline std::vector<Word> brute_fixed_words(const FreeGroupAutomorphism& phi, int max_length) {
  if (max_length < 0) throw DomainError("brute_fixed_words: negative length bound");
  std::vector<Word> out;
  for (int len = 0; len <= max_length; ++len) {
    for_each_reduced_word(phi.rank(), len, [&](const Word& w) {
      if (phi(w) == w) out.push_back(w);
      return true;
    });
  }
  return out;
}

/// c with c u c^-1 = v, if u and v are conjugate.
template <Letter L>
std::optional<std::vector<L>> conjugate_in_free_group(const std::vector<L>& u_in, const std::vector<L>& v_in) {
  const auto u = reduced(u_in);
  const auto v = reduced(v_in);
  const auto su = cyclic_split<L>(u);
  const auto sv = cyclic_split<L>(v);
  const auto s = rotation_offset<L>(su.core, sv.core);
  if (!s) return std::nullopt;
  // core_v = y x where core_u = x y and |x| = s, so v = (tv ~x ~tu) u (...)^-1
  const std::vector<L> x(su.core.begin(), su.core.begin() + static_cast<std::ptrdiff_t>(*s));
  auto c = multiply<L>(sv.conjugator, inverted(x));
  c = multiply<L>(c, inverted(su.conjugator));
  return c;
}

/// w = conjugator * root^exponent * conjugator^-1, root cyclically reduced
/// and primitive, exponent >= 1.
template <Letter L>
struct PrimitiveRoot {
  std::vector<L> conjugator;
  std::vector<L> root;
  long long exponent = 0;

  std::vector<L> based_root() const { return multiply<L>(multiply<L>(conjugator, root), inverted(conjugator)); }
};

template <Letter L>
PrimitiveRoot<L> primitive_root(const std::vector<L>& w_in) {
  const auto w = reduced(w_in);
  if (w.empty()) throw DomainError("primitive_root: trivial word");
  auto split = cyclic_split<L>(w);
  const std::size_t p = primitive_period<L>(split.core);
  PrimitiveRoot<L> r;
  r.conjugator = std::move(split.conjugator);
  r.root.assign(split.core.begin(), split.core.begin() + static_cast<std::ptrdiff_t>(p));
  r.exponent = static_cast<long long>(split.core.size() / p);
  return r;
}

/// Primitive root of a loop, with vertices: conjugator runs from the loop's
/// vertex to the root's vertex.
struct PathRoot {
  EdgePath conjugator;
  EdgePath root;
  long long exponent = 0;
};

inline PathRoot primitive_root(const FilteredGraph& g, const EdgePath& loop) {
  if (!loop.is_loop()) throw DomainError("primitive_root: path is not a loop");
  const auto r = primitive_root<OrientedEdge>(loop.edges());
  const VertexId x = r.conjugator.empty() ? loop.start() : g.terminal(r.conjugator.back());
  return {EdgePath::unchecked(loop.start(), x, r.conjugator), EdgePath::unchecked(x, x, r.root), r.exponent};
}

// ---------------------------------------------------------------------------
// Outer classes

namespace detail {

/// The isomorphism pi_1(G, base) -> pi_1(H, base') induced by a marking,
/// as generator images in spanning-tree bases.
inline FreeGroupAutomorphism marking_isomorphism(const GraphMarking& m, const Basis& from, const Basis& to) {
  const VertexId hb = m.map_vertex(from.base);
  const EdgePath& transport = to.tree_paths.at(static_cast<std::size_t>(hb));
  std::vector<Word> images;
  for (const auto& bl : from.loops) {
    const EdgePath img = multiply(transport, m.apply(bl.loop), transport.reversed());
    images.push_back(to.to_word(img));
  }
  return FreeGroupAutomorphism(from.labels(), std::move(images));
}

}  // namespace detail

/// Compares the outer classes of f (on the marking's source graph) and g
/// (on its target) on the conjugacy classes of all basis words of length
/// <= max_length. A pass is a verdict at that bound only.
inline Verdict same_outer_class(const FilteredMap& f, const FilteredMap& g, const GraphMarking& marking, int max_length) {
  if (!same_graph(f.graph(), marking.from()) || !same_graph(g.graph(), marking.to())) {
    throw DomainError("same_outer_class: marking does not connect the maps' graphs");
  }
  const Basis bf = spanning_tree_basis(f.graph(), f.graph()->base());
  const Basis bg = spanning_tree_basis(g.graph(), g.graph()->base());
  if (bf.rank() != bg.rank()) throw DomainError("same_outer_class: rank mismatch");
  const auto mu = detail::marking_isomorphism(marking, bf, bg);
  const auto phi_f = induced_automorphism(f, bf);
  const auto phi_g = induced_automorphism(g, bg);
  const auto lhs = compose(mu, phi_f);
  const auto rhs = compose(phi_g, mu);

  Verdict v;
  v.bound = max_length;
  for (int len = 0; len <= max_length && v.holds(); ++len) {
    for_each_reduced_word(bf.rank(), len, [&](const Word& w) {
      if (conjugate_in_free_group<GenLetter>(lhs(w), rhs(w))) return true;
      v.outcome = Verdict::Outcome::fails;
      v.witness = w;
      v.detail = "conjugacy class of " + format_word(bf.labels(), w) + " is sent to different classes";
      return false;
    });
  }
  return v;
}

/// Same-graph convenience overload.
inline Verdict same_outer_class(const FilteredMap& f, const FilteredMap& g, int max_length) {
  require_same_graph(f, g);
  return same_outer_class(f, g, GraphMarking::identity(f.graph()), max_length);
}

}  // namespace kolchin
