#pragma once

// Essential edges and axes of an abelian group of filtered maps, the
// canonical lifts s_i(f) and s_alpha(f), and the twist coordinates that
// embed the group in Z^r.
//
// Every essential edge E_i carries an anchor p_i (a path from the base to
// the initial vertex of the chosen lift E_i*) and an invariant line L_i
// through the terminal vertex v_i of E_i*. Edges whose lines project to
// the same loop share an axis alpha with preferred vertex v_alpha and
// covering translation T_alpha.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kolchin/boundary.hpp"
#include "kolchin/errors.hpp"
#include "kolchin/filtered_map.hpp"
#include "kolchin/graph.hpp"
#include "kolchin/homology.hpp"
#include "kolchin/lift.hpp"
#include "kolchin/map_group.hpp"
#include "kolchin/oracle.hpp"

namespace kolchin {

struct EssentialEdge {
  enum class Route { kernel, search };

  EdgeId edge = -1;
  /// p_i: base to the initial vertex of E_i*.
  EdgePath anchor;
  /// Anchored at v_i, with period the projected axis loop read from there.
  AxisLine line;
  std::size_t axis = 0;
  Route route = Route::kernel;
};

struct EssentialAxis {
  /// p_alpha: base to v_alpha.
  EdgePath preferred;
  /// rho_alpha, read from the projection of v_alpha.
  EdgePath period;
  /// T_alpha = p_alpha rho_alpha ~p_alpha.
  DeckElement translation;
  /// Indices into EssentialData::edges.
  std::vector<std::size_t> edges;

  std::size_t multiplicity() const { return edges.size(); }
  AxisLine line() const { return {preferred, period}; }
};

struct EssentialData {
  /// The group after the normalizing slides; all paths live on its graph.
  MapGroup group;
  std::vector<EssentialEdge> edges;
  std::vector<EssentialAxis> axes;
  std::vector<RewriteStep> rewrites;
  /// Input graph to group.graph().
  GraphMarking marking;
  int search_bound = 0;

  const EssentialAxis& axis_of(const EssentialEdge& e) const { return axes.at(e.axis); }
};

inline std::string to_string(EssentialEdge::Route r) { return r == EssentialEdge::Route::kernel ? "kernel" : "search"; }

/// s_i(f): the lift fixing the initial vertex of E_i*.
inline Lift canonical_edge_lift(const FilteredMap& f, const EssentialEdge& e) { return lift_fixing_vertex(f, e.anchor); }

/// s_alpha(f): the lift fixing v_alpha.
inline Lift canonical_axis_lift(const FilteredMap& f, const EssentialAxis& a) { return lift_fixing_vertex(f, a.preferred); }

/// The k with s_i(f) = T_alpha^k o s_alpha(f).
inline long long twist_coordinate(const FilteredMap& f, const EssentialData& d, std::size_t edge_index) {
  const auto& e = d.edges.at(edge_index);
  const auto& a = d.axis_of(e);
  const DeckElement delta = deck_difference(canonical_edge_lift(f, e), canonical_axis_lift(f, a));
  const auto k = power_of(delta, a.translation);
  if (!k) {
    const auto& g = *d.group.graph();
    throw PropertyViolation("twist coordinate at " + g.edge(e.edge).name + ": the lifts differ by " +
                            format_path(g, delta.loop) + ", which is not a power of " + format_path(g, a.translation.loop));
  }
  return *k;
}

struct TwistVector {
  std::vector<std::string> labels;
  std::vector<long long> values;

  bool is_zero() const {
    return std::all_of(values.begin(), values.end(), [](long long x) { return x == 0; });
  }
  friend bool operator==(const TwistVector&, const TwistVector&) = default;
};

inline TwistVector twist_coordinates(const FilteredMap& f, const EssentialData& d) {
  if (!same_graph(f.graph(), d.group.graph())) throw DomainError("twist_coordinates: map and data live on different graphs");
  TwistVector v;
  for (std::size_t k = 0; k < d.edges.size(); ++k) {
    v.labels.push_back(d.group.graph()->edge(d.edges[k].edge).name);
    v.values.push_back(twist_coordinate(f, d, k));
  }
  return v;
}

inline TwistVector twist_coordinates(const Word& w, const EssentialData& d) { return twist_coordinates(evaluate(d.group, w), d); }

inline TwistVector twist_coordinates(const std::string& w, const EssentialData& d) {
  return twist_coordinates(evaluate(d.group, w), d);
}

namespace detail {

/// Basis of the integer kernel {x : A x = 0} of an r x m matrix, by
/// unimodular column reduction.
inline std::vector<std::vector<BigInt>> integer_kernel(std::vector<std::vector<BigInt>> a, std::size_t m) {
  std::vector<std::vector<BigInt>> u(m, std::vector<BigInt>(m));
  for (std::size_t c = 0; c < m; ++c) u[c][c] = 1;
  // column c of the working matrix is a[*][c]; u tracks the same column ops
  auto col_axpy = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    for (auto& row : a) row[dst] -= q * row[src];
    for (std::size_t r = 0; r < m; ++r) u[r][dst] -= q * u[r][src];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (auto& row : a) std::swap(row[x], row[y]);
    for (std::size_t r = 0; r < m; ++r) std::swap(u[r][x], u[r][y]);
  };
  std::size_t pivot = 0;
  for (std::size_t row = 0; row < a.size() && pivot < m; ++row) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t c = pivot; c < m; ++c) {
        if (a[row][c] == 0) continue;
        if (!best || abs(a[row][c]) < abs(a[row][*best])) best = c;
      }
      if (!best) break;
      col_swap(pivot, *best);
      bool done = true;
      for (std::size_t c = pivot + 1; c < m; ++c) {
        if (a[row][c] == 0) continue;
        col_axpy(c, pivot, a[row][c] / a[row][pivot]);
        done = done && a[row][c] == 0;
      }
      if (done) {
        ++pivot;
        break;
      }
    }
  }
  std::vector<std::vector<BigInt>> out;
  for (std::size_t c = pivot; c < m; ++c) {
    std::vector<BigInt> v;
    for (std::size_t r = 0; r < m; ++r) v.push_back(u[r][c]);
    // first nonzero entry positive
    for (const auto& x : v) {
      if (x == 0) continue;
      if (x < 0) {
        for (auto& y : v) y = -y;
      }
      break;
    }
    out.push_back(std::move(v));
  }
  return out;
}

/// A line through v_i found at stratum i: sigma runs from v_i to the
/// projection x of a vertex of the line, rho is the primitive loop at x.
struct LineCandidate {
  EdgePath sigma;
  EdgePath rho;
  EssentialEdge::Route route;
};

/// u = sigma rho^m ~sigma for some m != 0?
inline bool is_power_along(const EdgePath& u, const EdgePath& sigma, const EdgePath& rho) {
  const EdgePath z = multiply(sigma.reversed(), u, sigma);
  if (z.empty() || z.size() % rho.size() != 0) return false;
  const auto m = static_cast<long long>(z.size() / rho.size());
  return z == power(rho, m) || z == power(rho, -m);
}

inline std::optional<LineCandidate> kernel_route(const EssentialData& d, EdgeId i) {
  const auto& k = d.group;
  const auto& g = *k.graph();
  const std::size_t m = k.size();
  std::vector<std::vector<BigInt>> a;
  for (std::size_t r = 0; r < d.edges.size(); ++r) {
    std::vector<BigInt> row;
    for (std::size_t c = 0; c < m; ++c) row.emplace_back(twist_coordinate(k.generator(c), d, r));
    a.push_back(std::move(row));
  }
  std::optional<PathRoot> root;
  for (const auto& v : integer_kernel(a, m)) {
    Word w;
    for (std::size_t c = 0; c < m; ++c) {
      if (v[c] > 1000000 || v[c] < -1000000) throw InternalError("kernel_route: kernel vector entry too large");
      const auto e = static_cast<long long>(v[c]);
      const GenLetter l{static_cast<int>(c), e < 0};
      for (long long n = e < 0 ? -e : e; n > 0; --n) append_reduced<GenLetter>(w, std::span<const GenLetter>(&l, 1));
    }
    const FilteredMap f = evaluate(k, w);
    for (EdgeId j = 0; j < i; ++j) {
      if (!f.suffix(j).empty()) {
        throw PropertyViolation("kernel element " + format_word(k.labels(), w) + " is nontrivial on " + g.edge(j).name +
                                " although its lower twist coordinates vanish");
      }
    }
    const EdgePath& u = f.suffix(i);
    if (u.empty()) continue;
    if (!root) {
      root = primitive_root(g, u);
    } else if (!is_power_along(u, root->conjugator, root->root)) {
      throw PropertyViolation("kernel suffixes at " + g.edge(i).name + " have no common root: " + format_path(g, u) +
                              " is not a power of " + format_path(g, root->root));
    }
  }
  if (!root) return std::nullopt;
  return LineCandidate{root->conjugator, root->root, EssentialEdge::Route::kernel};
}

/// Loops w at term(E_i) in G_{i-1} with u_f f_#(w) ~u_f = w for every
/// generator, shortest first.
inline LineCandidate search_route(const EssentialData& d, EdgeId i, int bound) {
  const auto& k = d.group;
  const auto& g = *k.graph();
  const VertexId v = g.edge(i).terminal;
  std::optional<EdgePath> found;
  std::vector<OrientedEdge> w;
  for (int len = 1; len <= bound && !found; ++len) {
    std::function<void(VertexId)> rec = [&](VertexId at) {
      if (found) return;
      if (static_cast<int>(w.size()) == len) {
        if (at != v) return;
        const EdgePath loop = EdgePath::unchecked(v, v, w);
        for (const auto& gen : k.generators()) {
          const EdgePath& u = gen.map.suffix(i);
          if (multiply(u, apply(gen.map, loop), u.reversed()) != loop) return;
        }
        found = loop;
        return;
      }
      for (const auto dir : g.directions_at(at)) {
        if (dir.edge >= i) continue;
        if (!w.empty() && w.back() == dir.inverse()) continue;
        w.push_back(dir);
        rec(g.terminal(dir));
        w.pop_back();
      }
    };
    rec(v);
  }
  if (!found) {
    throw SearchExhausted("no invariant line for stratum " + std::to_string(i + 1) + " (" + g.edge(i).name +
                          ") among loops of length <= " + std::to_string(bound));
  }
  PathRoot r = primitive_root(g, *found);
  // orient by the lexicographically least cyclic rotation
  const auto fwd = rotated<OrientedEdge>(r.root.edges(), least_rotation_offset<OrientedEdge>(r.root.edges()));
  const auto back_word = inverted<OrientedEdge>(r.root.edges());
  const auto back = rotated<OrientedEdge>(back_word, least_rotation_offset<OrientedEdge>(back_word));
  if (back < fwd) r.root = r.root.reversed();
  return {r.conjugator, r.root, EssentialEdge::Route::search};
}

/// Is rotated(a, s) == b for some s (returns s)?
inline std::optional<std::size_t> rotation_to(const EdgePath& a, const EdgePath& b) {
  if (a.size() != b.size()) return std::nullopt;
  return rotation_offset<OrientedEdge>(a.edges(), b.edges());
}

inline long long positive_mod(long long a, long long n) { return ((a % n) + n) % n; }

}  // namespace detail

/// Builds essential data bottom-up the filtration. Each stratum with a
/// nontrivial suffix gets an invariant line from the restriction kernel
/// or, when that kernel acts trivially there, from a bounded search. E_i
/// is then slid so that v_i is the highest edge splitting vertex of the
/// line closest to the base vertex; lines projecting to an existing axis
/// are moved onto that axis.
inline EssentialData essential_data(const MapGroup& k, int search_bound = 8) {
  if (search_bound < 1) throw DomainError("essential_data: search bound must be positive");
  const auto cert = abelian_certificate(k);
  if (!cert.abelian) {
    const auto& w = *cert.witness;
    throw DomainError("essential_data: group is not abelian; " + k.generators()[w.first].label + " and " +
                      k.generators()[w.second].label + " do not commute on " + k.graph()->edge(w.edge).name);
  }
  EssentialData d{k, {}, {}, {}, GraphMarking::identity(k.graph()), search_bound};

  for (EdgeId i = 0; i < k.graph()->edge_count(); ++i) {
    if (!d.group.active(i)) continue;
    const GraphPtr g = d.group.graph();
    const Basis tree = spanning_tree_basis(g, g->base());
    const EdgePath p = tree.tree_paths.at(static_cast<std::size_t>(g->edge(i).initial));
    const EdgePath tau = concat(p, edge_path(*g, {i, false}));

    auto cand = detail::kernel_route(d, i);
    if (!cand) cand = detail::search_route(d, i, search_bound);
    const auto n = static_cast<long long>(cand->rho.size());
    const AxisLine line{multiply(tau, cand->sigma), cand->rho};

    // target positions along the line, relative to its anchor
    std::optional<std::size_t> shared;
    std::vector<long long> allowed;
    for (std::size_t a = 0; a < d.axes.size() && !shared; ++a) {
      const auto& rho_a = d.axes[a].period;
      if (auto s = detail::rotation_to(cand->rho, rho_a)) {
        shared = a;
        allowed.push_back(static_cast<long long>(*s));
      } else if (auto t = detail::rotation_to(cand->rho.reversed(), rho_a)) {
        shared = a;
        allowed.push_back(detail::positive_mod(n - static_cast<long long>(*t), n));
      }
    }
    if (!shared) {
      for (const auto pos : highest_edge_splitting(line).positions) allowed.push_back(static_cast<long long>(pos));
    }
    std::optional<std::pair<long long, EdgePath>> best;
    const long long reach = static_cast<long long>(line.anchor.size()) + 2 * n;
    for (long long q = -reach / n - 1; q <= reach / n + 1; ++q) {
      for (const auto r : allowed) {
        const long long pos = q * n + r;
        EdgePath at = vertex_on_axis(*g, line, pos);
        if (!best || at.size() < best->second.size() || (at.size() == best->second.size() && at < best->second)) {
          best = std::make_pair(pos, std::move(at));
        }
      }
    }
    const EdgePath sigma = multiply(tau.reversed(), best->second);
    const EdgePath rho = EdgePath::unchecked(
        best->second.end(), best->second.end(),
        rotated<OrientedEdge>(cand->rho.edges(), static_cast<std::size_t>(detail::positive_mod(best->first, n))));

    SlideResult moved = slide(d.group, i, sigma);
    if (!sigma.empty()) {
      d.rewrites.push_back({"slide " + g->edge(i).name + " along " + format_path(*g, sigma), d.group, moved.group, moved.marking});
      const auto& h = moved.marking;
      for (auto& e : d.edges) {
        e.anchor = h.apply(e.anchor);
        e.line = {h.apply(e.line.anchor), h.apply(e.line.period)};
      }
      for (auto& a : d.axes) {
        a.preferred = h.apply(a.preferred);
        a.period = h.apply(a.period);
        a.translation = {h.apply(a.translation.loop)};
      }
      d.marking = d.marking.then(h);
      d.group = moved.group;
    }
    const auto& hg = *d.group.graph();
    const EdgePath ei = edge_path(hg, {i, false});

    EssentialEdge e;
    e.edge = i;
    e.route = cand->route;
    if (shared) {
      auto& a = d.axes[*shared];
      e.anchor = multiply(a.preferred, ei.reversed());
      e.line = a.line();
      e.axis = *shared;
      a.edges.push_back(d.edges.size());
    } else {
      e.anchor = moved.marking.apply(p);
      const EdgePath v = multiply(e.anchor, ei);
      e.line = {v, moved.marking.apply(rho)};
      e.axis = d.axes.size();
      EssentialAxis a;
      a.preferred = v;
      a.period = e.line.period;
      a.translation = translation_of(e.line);
      a.edges.push_back(d.edges.size());
      d.axes.push_back(std::move(a));
    }
    d.edges.push_back(std::move(e));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Property A

struct PropertyCheck {
  std::string check;
  std::string edge;
  /// What was checked at that edge ("v_i", "v_alpha", ...), may be empty.
  std::string subject;
  /// Generator label, empty for checks that do not depend on one.
  std::string generator;
  bool pass = true;
  std::string witness;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
  }
};

namespace detail {

inline bool on_splitting(const AxisLine& line, const EdgePath& y) {
  const auto pos = position_on_axis(line, y);
  return pos && splitting_index(highest_edge_splitting(line), *pos).has_value();
}

}  // namespace detail

/// Report-only check of the essential data against every generator of k.
inline PropertyReport verify_property_A(const MapGroup& k, const EssentialData& d) {
  PropertyReport rep;
  if (!same_graph(k.graph(), d.group.graph())) {
    rep.checks.push_back({"graph", "", "", "", false, "essential data is for another graph"});
    return rep;
  }
  const auto& g = *k.graph();
  for (std::size_t x = 0; x < d.edges.size(); ++x) {
    const auto& e = d.edges[x];
    const auto& a = d.axis_of(e);
    const std::string name = g.edge(e.edge).name;

    {
      PropertyCheck c{"period", name, "", "", true, ""};
      const auto& rho = e.line.period;
      const bool lower = highest_edge(rho) < e.edge;
      const bool cyc = !rho.empty() && rho.is_loop() && is_cyclically_reduced<OrientedEdge>(rho.span());
      const bool prim = cyc && primitive_period<OrientedEdge>(rho.edges()) == rho.size();
      c.pass = lower && cyc && prim;
      if (!c.pass) c.witness = format_path(g, rho);
      rep.checks.push_back(std::move(c));
    }
    const EdgePath v = multiply(e.anchor, edge_path(g, {e.edge, false}));
    for (const auto& [what, y] : {std::pair<std::string, EdgePath>{"v_i", v}, {"v_alpha", a.preferred}}) {
      PropertyCheck c{"splitting-vertex", name, what, "", detail::on_splitting(e.line, y), ""};
      if (!c.pass) c.witness = what + " = " + format_path(g, y) + " is not a highest edge splitting vertex of the line";
      rep.checks.push_back(std::move(c));
    }
    const DeckElement t = translation_of(e.line);
    for (const auto& gen : k.generators()) {
      const Lift s = canonical_edge_lift(gen.map, e);
      const EdgePath img = s.act(t.loop);
      PropertyCheck c{"invariance", name, "", gen.label, img == t.loop, ""};
      if (!c.pass) c.witness = format_path(g, t.loop) + " -> " + format_path(g, img);
      rep.checks.push_back(std::move(c));
    }
    for (std::size_t y = x + 1; y < d.edges.size(); ++y) {
      const auto& o = d.edges[y];
      const bool same_projection = detail::rotation_to(e.line.period, o.line.period) ||
                                   detail::rotation_to(e.line.period.reversed(), o.line.period);
      if (!same_projection) continue;
      const DeckElement u = translation_of(o.line);
      const EdgePath vo = multiply(o.anchor, edge_path(g, {o.edge, false}));
      const bool same_line = u == t || u == inverse(t);
      PropertyCheck c{"coincidence", name, g.edge(o.edge).name, "", same_line && v == vo, ""};
      if (!c.pass) c.witness = "lines or vertices differ: " + format_path(g, v) + " vs " + format_path(g, vo);
      rep.checks.push_back(std::move(c));
    }
  }
  return rep;
}

}  // namespace kolchin
