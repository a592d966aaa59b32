#pragma once

// Lifts of filtered maps to the universal cover.
//
// A vertex of the universal cover is a reduced path from the base vertex.
// The base lift of f sends p to f_#(p); the lift (f, gamma) post-composes it
// with the covering translation by the loop gamma, so it sends p to
// [gamma f_#(p)].

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kolchin/errors.hpp"
#include "kolchin/filtered_map.hpp"
#include "kolchin/graph.hpp"
#include "kolchin/oracle.hpp"

namespace kolchin {

/// A covering translation, named by a reduced loop at the base vertex.
struct DeckElement {
  EdgePath loop;

  bool trivial() const { return loop.empty(); }
  friend bool operator==(const DeckElement&, const DeckElement&) = default;
};

inline DeckElement operator*(const DeckElement& a, const DeckElement& b) { return {multiply(a.loop, b.loop)}; }
inline DeckElement inverse(const DeckElement& a) { return {a.loop.reversed()}; }

class Lift {
 public:
  Lift(FilteredMap map, EdgePath twist) : map_(std::move(map)), twist_(std::move(twist)) {
    const VertexId b = map_.graph()->base();
    if (twist_.start() != b || twist_.end() != b) throw DomainError("lift twist must be a loop at the base vertex");
    twist_ = tighten(twist_);
  }

  /// The lift fixing the base vertex.
  static Lift base_lift(const FilteredMap& f) { return Lift(f, EdgePath::trivial(f.graph()->base())); }

  const FilteredMap& map() const { return map_; }
  const EdgePath& twist() const { return twist_; }
  const GraphPtr& graph() const { return map_.graph(); }

  /// Image of the universal-cover vertex named by a path from the base.
  EdgePath operator()(const EdgePath& p) const { return multiply(twist_, apply(map_, p)); }

  /// Induced automorphism of pi_1(G, base): c -> gamma f_#(c) gamma^-1.
  EdgePath act(const EdgePath& loop) const { return multiply(twist_, apply(map_, loop), twist_.reversed()); }

  FreeGroupAutomorphism automorphism(const Basis& basis) const {
    std::vector<Word> images;
    for (const auto& bl : basis.loops) images.push_back(basis.to_word(act(bl.loop)));
    return FreeGroupAutomorphism(basis.labels(), std::move(images));
  }

  friend bool operator==(const Lift& a, const Lift& b) {
    return equal(a.map_, b.map_) && a.twist_ == b.twist_;
  }

 private:
  FilteredMap map_;
  EdgePath twist_;
};

/// (f, gamma) o (g, delta) = (f o g, [gamma f_#(delta)]).
inline Lift compose(const Lift& a, const Lift& b) {
  return Lift(compose(a.map(), b.map()), multiply(a.twist(), apply(a.map(), b.twist())));
}

/// t_delta o L.
inline Lift translate(const DeckElement& delta, const Lift& l) { return Lift(l.map(), multiply(delta.loop, l.twist())); }

inline void require_from_base(const FilteredGraph& g, const EdgePath& p) {
  if (p.start() != g.base()) throw DomainError("vertex path must start at the base vertex");
  if (!p.is_reduced()) throw DomainError("vertex path must be reduced");
}

/// The lift of f fixing the endpoint of p: gamma = [p ~f_#(p)].
inline Lift lift_fixing_vertex(const FilteredMap& f, const EdgePath& p) {
  require_from_base(*f.graph(), p);
  return Lift(f, multiply(p, apply(f, p).reversed()));
}

inline bool fixes_vertex(const Lift& l, const EdgePath& p) {
  require_from_base(*l.graph(), p);
  return l(p) == p;
}

/// delta with L1 = t_delta o L2.
inline DeckElement deck_difference(const Lift& l1, const Lift& l2) {
  if (!equal(l1.map(), l2.map())) throw DomainError("deck_difference: lifts of different maps");
  return {multiply(l1.twist(), l2.twist().reversed())};
}

/// k with delta = tau rho^k ~tau, where axis = tau rho ~tau and rho is
/// primitive and cyclically reduced.
inline std::optional<long long> power_of(const DeckElement& delta, const DeckElement& axis) {
  if (axis.trivial()) throw DomainError("power_of: trivial axis word");
  const auto ar = primitive_root<OrientedEdge>(axis.loop.edges());
  if (ar.exponent != 1) throw DomainError("power_of: axis word is a proper power");
  if (delta.trivial()) return 0;
  const auto d = reduced<OrientedEdge>(delta.loop.span());
  const auto ds = cyclic_split<OrientedEdge>(d);
  if (ds.conjugator != ar.conjugator) return std::nullopt;
  const std::size_t n = ar.root.size();
  if (ds.core.size() % n != 0) return std::nullopt;
  const auto k = static_cast<long long>(ds.core.size() / n);
  if (ds.core == power<OrientedEdge>(ar.root, k)) return k;
  if (ds.core == power<OrientedEdge>(ar.root, -k)) return -k;
  return std::nullopt;
}

/// Every reduced path p from the base with |p| <= radius fixed by l, in
/// depth-first lexicographic order.
inline std::vector<EdgePath> fixed_vertices(const Lift& l, int radius) {
  if (radius < 0) throw DomainError("fixed_vertices: negative radius");
  const auto& g = *l.graph();
  const auto& f = l.map();
  std::vector<EdgePath> out;
  std::vector<OrientedEdge> path;
  std::vector<VertexId> at{g.base()};
  // images[k] = reduced image of the prefix of length k
  std::vector<std::vector<OrientedEdge>> images{l.twist().edges()};
  std::function<void()> rec = [&]() {
    if (images.back() == path) out.push_back(EdgePath::unchecked(g.base(), at.back(), path));
    if (static_cast<int>(path.size()) == radius) return;
    for (const auto d : g.directions_at(at.back())) {
      if (!path.empty() && path.back() == d.inverse()) continue;
      auto img = images.back();
      f.push_image(img, d);
      path.push_back(d);
      at.push_back(g.terminal(d));
      images.push_back(std::move(img));
      rec();
      images.pop_back();
      at.pop_back();
      path.pop_back();
    }
  };
  rec();
  return out;
}

}  // namespace kolchin
