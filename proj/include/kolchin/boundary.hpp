#pragma once

// Boundary points, invariant lines and fixed-point search for lifts.
//
// Only two kinds of ends are representable: eventually periodic rays
// prefix . period^infinity, which compare exactly through a normal form,
// and rays generated by iterating a lift on a seed path, which compare up
// to an explicit depth.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kolchin/errors.hpp"
#include "kolchin/filtered_map.hpp"
#include "kolchin/graph.hpp"
#include "kolchin/lift.hpp"
#include "kolchin/oracle.hpp"

namespace kolchin {

inline constexpr int kDefaultDepth = 64;

/// prefix . period^infinity, from the base vertex. Constructed through
/// periodic_ray(), which puts it in normal form: no cancellation at the
/// splice, shortest prefix, primitive cyclically reduced period.
struct EvPeriodicRay {
  EdgePath prefix;
  EdgePath period;

  friend bool operator==(const EvPeriodicRay&, const EvPeriodicRay&) = default;
};

/// The limit of L^k(seed). Requires L(seed) = seed . beta with beta
/// nontrivial.
struct IteratedRay {
  Lift lift;
  EdgePath seed;
};

using RaySpec = std::variant<EvPeriodicRay, IteratedRay>;

/// Normal form of prefix . period^infinity; period must be a nontrivial
/// loop at prefix.end().
inline EvPeriodicRay periodic_ray(const FilteredGraph& g, const EdgePath& prefix_in, const EdgePath& period_in) {
  if (period_in.empty() || !period_in.is_loop()) throw DomainError("periodic ray: period must be a nontrivial loop");
  if (prefix_in.end() != period_in.start()) throw DomainError("periodic ray: period does not start where the prefix ends");
  const auto split = primitive_root(g, tighten(period_in));
  std::vector<OrientedEdge> prefix = multiply(tighten(prefix_in), split.conjugator).edges();
  std::vector<OrientedEdge> period = split.root.edges();
  while (!prefix.empty() && prefix.back() == period.front().inverse()) {
    prefix.pop_back();
    std::rotate(period.begin(), period.begin() + 1, period.end());
  }
  while (!prefix.empty() && prefix.back() == period.back()) {
    prefix.pop_back();
    std::rotate(period.begin(), period.end() - 1, period.end());
  }
  const VertexId x = g.initial(period.front());
  return {EdgePath::unchecked(prefix_in.start(), x, std::move(prefix)), EdgePath::unchecked(x, x, std::move(period))};
}

/// First `depth` edges of an iterated ray, or nullopt when the iteration
/// does not extend its own prefix.
inline std::optional<std::vector<OrientedEdge>> expand(const IteratedRay& r, std::size_t depth) {
  EdgePath x = r.seed;
  for (std::size_t iter = 0; x.size() < depth; ++iter) {
    if (iter > depth + 8) return std::nullopt;
    EdgePath y = r.lift(x);
    if (y.size() <= x.size() || !std::equal(x.edges().begin(), x.edges().end(), y.edges().begin())) {
      return std::nullopt;
    }
    x = std::move(y);
  }
  std::vector<OrientedEdge> out(x.edges().begin(), x.edges().begin() + static_cast<std::ptrdiff_t>(depth));
  return out;
}

inline std::vector<OrientedEdge> expand(const EvPeriodicRay& r, std::size_t depth) {
  std::vector<OrientedEdge> out(r.prefix.edges());
  for (std::size_t k = 0; out.size() < depth; ++k) out.push_back(r.period[k % r.period.size()]);
  out.resize(depth);
  return out;
}

inline std::optional<std::vector<OrientedEdge>> expand(const RaySpec& r, std::size_t depth) {
  if (const auto* p = std::get_if<EvPeriodicRay>(&r)) return expand(*p, depth);
  return expand(std::get<IteratedRay>(r), depth);
}

struct RayComparison {
  bool equal = false;
  /// True when the verdict only holds to the comparison depth.
  bool depth_bounded = false;
};

inline RayComparison compare_rays(const RaySpec& a, const RaySpec& b, std::size_t depth = kDefaultDepth) {
  const auto* pa = std::get_if<EvPeriodicRay>(&a);
  const auto* pb = std::get_if<EvPeriodicRay>(&b);
  if (pa && pb) return {*pa == *pb, false};
  const auto ea = expand(a, depth);
  const auto eb = expand(b, depth);
  if (!ea || !eb) throw DomainError("compare_rays: iterated ray does not converge at this depth");
  return {*ea == *eb, true};
}

/// L-hat(prefix . period^inf) = [gamma f_#(prefix)] . (f_#(period))^inf.
inline EvPeriodicRay apply_lift(const Lift& l, const EvPeriodicRay& r) {
  return periodic_ray(*l.graph(), l(r.prefix), apply(l.map(), r.period));
}

// ---------------------------------------------------------------------------
// Lines

/// The line through the endpoint of `anchor` running along `period` in
/// both directions: ... ~period ~period [v] period period ...
struct AxisLine {
  EdgePath anchor;
  EdgePath period;

  friend bool operator==(const AxisLine&, const AxisLine&) = default;
};

struct RayPairLine {
  RaySpec negative;
  RaySpec positive;
};

using LineSpec = std::variant<AxisLine, RayPairLine>;

/// Axis of the covering translation c = tau rho^k ~tau, anchored at the
/// endpoint of tau and oriented along the translation.
inline AxisLine axis_of(const FilteredGraph& g, const DeckElement& c) {
  if (c.trivial()) throw DomainError("axis_of: trivial covering translation has no axis");
  const auto r = primitive_root(g, tighten(c.loop));
  return {r.conjugator, r.root};
}

/// tau rho ~tau for an axis.
inline DeckElement translation_of(const AxisLine& a) { return {multiply(a.anchor, a.period, a.anchor.reversed())}; }

inline std::pair<EvPeriodicRay, EvPeriodicRay> ends_of(const FilteredGraph& g, const AxisLine& a) {
  return {periodic_ray(g, a.anchor, a.period.reversed()), periodic_ray(g, a.anchor, a.period)};
}

struct Splitting {
  /// Highest filtration position crossed (0-based edge id).
  EdgeId highest = -1;
  /// Positions of the splitting vertices. For a window these index its
  /// vertices 0..|window|; for an axis they are offsets in [0, |period|)
  /// measured from the anchor vertex and repeat with the period.
  std::vector<std::size_t> positions;
  std::size_t period = 0;
};

/// Splitting of a finite reduced window: subdivide at the initial vertex
/// of every crossing of the highest edge, in either direction.
inline Splitting highest_edge_splitting(const EdgePath& window) {
  if (window.empty()) throw DomainError("highest_edge_splitting: empty window");
  if (!window.is_reduced()) throw DomainError("highest_edge_splitting: window is not reduced");
  Splitting s;
  s.highest = highest_edge(window);
  for (std::size_t j = 0; j < window.size(); ++j) {
    if (window[j].edge != s.highest) continue;
    s.positions.push_back(window[j].reversed ? j + 1 : j);
  }
  return s;
}

inline Splitting highest_edge_splitting(const AxisLine& line) {
  if (line.period.empty() || !is_cyclically_reduced<OrientedEdge>(line.period.span())) {
    throw DomainError("highest_edge_splitting: axis period must be cyclically reduced");
  }
  Splitting s;
  s.period = line.period.size();
  s.highest = highest_edge(line.period);
  std::set<std::size_t> pos;
  for (std::size_t j = 0; j < s.period; ++j) {
    if (line.period[j].edge != s.highest) continue;
    pos.insert(line.period[j].reversed ? (j + 1) % s.period : j);
  }
  s.positions.assign(pos.begin(), pos.end());
  return s;
}

inline Splitting highest_edge_splitting(const LineSpec& line) {
  if (const auto* a = std::get_if<AxisLine>(&line)) return highest_edge_splitting(*a);
  throw DomainError("highest_edge_splitting: ray-pair lines need a finite window");
}

/// Signed edge distance of the vertex y from the anchor vertex along the
/// axis, or nullopt when y is not on the axis.
inline std::optional<long long> position_on_axis(const AxisLine& a, const EdgePath& y) {
  const auto z = reduced<OrientedEdge>(multiply(a.anchor.reversed(), y).span());
  const std::size_t n = a.period.size();
  bool forward = true;
  bool backward = true;
  for (std::size_t k = 0; k < z.size(); ++k) {
    forward = forward && z[k] == a.period[k % n];
    backward = backward && z[k] == a.period[n - 1 - (k % n)].inverse();
  }
  if (forward) return static_cast<long long>(z.size());
  if (backward) return -static_cast<long long>(z.size());
  return std::nullopt;
}

namespace detail {

inline long long floor_div(long long a, long long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

/// Index of the splitting vertex at position pos, or nullopt if pos is
/// not a splitting position.
inline std::optional<long long> splitting_index(const Splitting& s, long long pos) {
  const auto n = static_cast<long long>(s.period);
  const long long m = floor_div(pos, n);
  const auto r = static_cast<std::size_t>(pos - m * n);
  const auto it = std::find(s.positions.begin(), s.positions.end(), r);
  if (it == s.positions.end()) return std::nullopt;
  return m * static_cast<long long>(s.positions.size()) + (it - s.positions.begin());
}

}  // namespace detail

/// Vertex at a signed position along an axis, as a path from the base.
inline EdgePath vertex_on_axis(const FilteredGraph& g, const AxisLine& a, long long pos) {
  const auto n = static_cast<long long>(a.period.size());
  std::vector<OrientedEdge> walk;
  for (long long k = 0; k < (pos >= 0 ? pos : -pos); ++k) {
    walk.push_back(pos >= 0 ? a.period[static_cast<std::size_t>(k % n)]
                            : a.period[static_cast<std::size_t>(n - 1 - (k % n))].inverse());
  }
  VertexId at = a.anchor.end();
  if (!walk.empty()) at = g.terminal(walk.back());
  std::vector<OrientedEdge> out = a.anchor.edges();
  append_reduced<OrientedEdge>(out, walk);
  return EdgePath::unchecked(a.anchor.start(), at, std::move(out));
}

/// The r with [L(sigma_j)] = sigma_{j+r} on the highest edge splitting of
/// an L-invariant axis.
inline long long splitting_translation(const Lift& l, const AxisLine& line) {
  const auto& g = *l.graph();
  const DeckElement c = translation_of(line);
  const EdgePath image = l.act(c.loop);
  if (image != c.loop) {
    throw DomainError("splitting_translation: line is not invariant; the translation " + format_path(g, c.loop) +
                      " is sent to " + format_path(g, image));
  }
  const Splitting s = highest_edge_splitting(line);
  long long r = 0;
  for (std::size_t k = 0; k < s.positions.size() + 1; ++k) {
    const long long pos = static_cast<long long>(s.positions[k % s.positions.size()]) +
                          (k == s.positions.size() ? static_cast<long long>(s.period) : 0);
    const EdgePath x = vertex_on_axis(g, line, pos);
    const auto ix = detail::splitting_index(s, pos);
    const auto py = position_on_axis(line, l(x));
    if (!py) {
      throw DomainError("splitting_translation: splitting vertex " + format_path(g, x) + " leaves the line");
    }
    const auto iy = detail::splitting_index(s, *py);
    if (!iy) throw DomainError("splitting_translation: splitting vertex " + format_path(g, x) + " lands off the splitting");
    if (k == 0) {
      r = *iy - *ix;
    } else if (*iy - *ix != r) {
      throw DomainError("splitting_translation: lift does not translate the splitting uniformly");
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Fixed rays and fixed-point classification

/// Loops w at v starting with `first`, cyclically reduced, primitive, with
/// f_#(w) = w and |w| <= max_length; shortlex order.
inline std::vector<EdgePath> fixed_loops_through(const FilteredMap& f, OrientedEdge first, int max_length, std::size_t limit = 1) {
  const auto& g = *f.graph();
  const VertexId v = g.initial(first);
  std::vector<EdgePath> out;
  for (int len = 1; len <= max_length && out.size() < limit; ++len) {
    std::vector<OrientedEdge> w{first};
    std::function<void(VertexId)> rec = [&](VertexId at) {
      if (out.size() >= limit) return;
      if (static_cast<int>(w.size()) == len) {
        if (at != v || !is_cyclically_reduced<OrientedEdge>(w)) return;
        if (primitive_period<OrientedEdge>(w) != w.size()) return;
        const EdgePath loop = EdgePath::unchecked(v, v, w);
        if (apply(f, loop) == loop) out.push_back(loop);
        return;
      }
      for (const auto d : g.directions_at(at)) {
        if (w.back() == d.inverse()) continue;
        w.push_back(d);
        rec(g.terminal(d));
        w.pop_back();
      }
    };
    rec(g.terminal(first));
  }
  return out;
}

/// The L-fixed end leaving the fixed vertex p through `direction`, if one
/// of the representable kinds exists.
inline std::optional<RaySpec> fixed_ray(const Lift& l, const EdgePath& p, OrientedEdge direction, int loop_search = 8) {
  const auto& g = *l.graph();
  if (!fixes_vertex(l, p)) throw DomainError("fixed_ray: the lift does not fix " + format_path(g, p));
  if (g.initial(direction) != p.end()) throw DomainError("fixed_ray: direction does not leave the vertex");
  if (!p.empty() && p.edges().back() == direction.inverse()) throw DomainError("fixed_ray: direction backtracks along p");
  const EdgePath seed = concat(p, edge_path(g, direction));
  const EdgePath image = l(seed);
  const bool extends = image.size() >= seed.size() && std::equal(seed.edges().begin(), seed.edges().end(), image.edges().begin());
  if (!extends) return std::nullopt;
  if (image.size() > seed.size()) return IteratedRay{l, seed};
  const auto loops = fixed_loops_through(l.map(), direction, loop_search);
  if (loops.empty()) return std::nullopt;
  return periodic_ray(g, p, loops.front());
}

struct FixedPointReport {
  bool identity = false;
  int radius = 0;
  std::size_t depth = 0;
  std::vector<EdgePath> fixed_vertices;
  /// Pairwise distinct at `depth` (exactly, when both are periodic).
  std::vector<RaySpec> fixed_ends;
  std::size_t count_lower_bound = 0;
  /// No fixed vertex within the radius and exactly two fixed ends found.
  /// A bounded-search surrogate only.
  bool exactly_two_within_bounds = false;
};

/// Gathers fixed points of L-hat: axis ends of covering translations that
/// commute with L (fixed words up to `radius`) and fixed rays leaving fixed
/// vertices within `radius`. Witness collection stops at `witness_cap`.
inline FixedPointReport classify_fixed_points(const Lift& l, int radius, std::size_t depth = kDefaultDepth,
                                              std::size_t witness_cap = 64) {
  if (radius < 0) throw DomainError("classify_fixed_points: negative radius");
  const auto& g = *l.graph();
  FixedPointReport rep;
  rep.radius = radius;
  rep.depth = depth;

  const Basis basis = spanning_tree_basis(l.graph(), g.base());
  const auto aut = l.automorphism(basis);
  rep.identity = aut == FreeGroupAutomorphism::identity(basis.labels());

  rep.fixed_vertices = fixed_vertices(l, radius);

  std::set<std::vector<OrientedEdge>> seen;
  auto add = [&](RaySpec r) {
    if (rep.fixed_ends.size() >= witness_cap) return;
    const auto e = expand(r, depth);
    if (!e) return;
    if (seen.insert(*e).second) rep.fixed_ends.push_back(std::move(r));
  };

  for (const auto& w : brute_fixed_words(aut, radius)) {
    if (w.empty()) continue;
    const auto line = axis_of(g, DeckElement{basis.to_loop(w)});
    auto [neg, pos] = ends_of(g, line);
    add(neg);
    add(pos);
    if (rep.fixed_ends.size() >= witness_cap) break;
  }
  for (const auto& p : rep.fixed_vertices) {
    if (rep.fixed_ends.size() >= witness_cap) break;
    for (const auto d : g.directions_at(p.end())) {
      if (!p.empty() && p.edges().back() == d.inverse()) continue;
      // periodic fixed directions are already covered by the fixed words
      const EdgePath seed = concat(p, edge_path(g, d));
      const EdgePath image = l(seed);
      if (image.size() <= seed.size() || !std::equal(seed.edges().begin(), seed.edges().end(), image.edges().begin())) {
        continue;
      }
      add(IteratedRay{l, seed});
    }
  }
  rep.count_lower_bound = rep.fixed_ends.size();
  rep.exactly_two_within_bounds = rep.fixed_vertices.empty() && rep.fixed_ends.size() == 2;
  return rep;
}

}  // namespace kolchin
