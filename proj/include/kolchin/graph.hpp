#pragma once

// Filtered graphs, oriented edge paths and tightening.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kolchin/errors.hpp"
#include "kolchin/word.hpp"

namespace kolchin {

using VertexId = int;
/// 0-based edge position. The filtration index of edge e is e + 1.
using EdgeId = int;

struct OrientedEdge {
  EdgeId edge = 0;
  bool reversed = false;

  constexpr OrientedEdge inverse() const { return {edge, !reversed}; }
  friend constexpr auto operator<=>(const OrientedEdge&, const OrientedEdge&) = default;
};

struct EdgeRecord {
  std::string name;
  VertexId initial = 0;
  VertexId terminal = 0;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

/// Unvalidated, name-level description of a graph, as written in a document.
struct GraphDescription {
  struct Edge {
    std::string name;
    std::string initial;
    std::string terminal;
  };
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
};

/// A finite graph whose edge order is the filtration G_1 < ... < G_K. The
/// first declared vertex is the base vertex for all deck arithmetic.
class FilteredGraph {
 public:
  FilteredGraph(std::vector<std::string> vertices, std::vector<EdgeRecord> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (!vertex_index_.emplace(vertices_[v], static_cast<VertexId>(v)).second) {
        throw DomainError("duplicate vertex name '" + vertices_[v] + "'");
      }
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& rec = edges_[e];
      if (rec.initial < 0 || rec.initial >= vertex_count() || rec.terminal < 0 ||
          rec.terminal >= vertex_count()) {
        throw DomainError("edge '" + rec.name + "' has an undeclared endpoint");
      }
      if (!edge_index_.emplace(rec.name, static_cast<EdgeId>(e)).second) {
        throw DomainError("duplicate edge name '" + rec.name + "'");
      }
    }
  }

  /// Builds from a description; throws DomainError on fatal findings.
  static FilteredGraph from_description(const GraphDescription& d);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  VertexId base() const { return 0; }

  const std::string& vertex_name(VertexId v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  const EdgeRecord& edge(EdgeId e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::vector<std::string>& vertex_names() const { return vertices_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }

  std::optional<VertexId> find_vertex(const std::string& name) const {
    auto it = vertex_index_.find(name);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<EdgeId> find_edge(const std::string& name) const {
    auto it = edge_index_.find(name);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  VertexId initial(OrientedEdge e) const {
    const auto& rec = edge(e.edge);
    return e.reversed ? rec.terminal : rec.initial;
  }
  VertexId terminal(OrientedEdge e) const {
    const auto& rec = edge(e.edge);
    return e.reversed ? rec.initial : rec.terminal;
  }
  bool is_loop(EdgeId e) const { return edge(e).initial == edge(e).terminal; }

  /// Number of edge ends at v (a loop counts twice).
  int valence(VertexId v) const {
    int n = 0;
    for (const auto& rec : edges_) n += (rec.initial == v) + (rec.terminal == v);
    return n;
  }

  /// Oriented edges leaving v, in filtration order, forward before reversed.
  std::vector<OrientedEdge> directions_at(VertexId v) const {
    std::vector<OrientedEdge> out;
    for (EdgeId e = 0; e < edge_count(); ++e) {
      if (edge(e).initial == v) out.push_back({e, false});
      if (edge(e).terminal == v) out.push_back({e, true});
    }
    return out;
  }

  /// First Betti number of the whole graph (#E - #V + #components).
  int rank() const;

  std::string format(OrientedEdge e) const { return (e.reversed ? "~" : "") + edge(e.edge).name; }

  friend bool operator==(const FilteredGraph& a, const FilteredGraph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> vertices_;
  std::vector<EdgeRecord> edges_;
  std::map<std::string, VertexId> vertex_index_;
  std::map<std::string, EdgeId> edge_index_;
};

using GraphPtr = std::shared_ptr<const FilteredGraph>;

inline bool same_graph(const GraphPtr& a, const GraphPtr& b) { return a == b || (a && b && *a == *b); }

/// An edge path with explicit endpoints, so the empty path still knows
/// where it sits. Instances are incidence-valid by construction.
class EdgePath {
 public:
  EdgePath() = default;

  static EdgePath trivial(VertexId v) { return EdgePath(v, v, {}); }

  /// Checks incidence; throws MalformedPath.
  static EdgePath make(const FilteredGraph& g, VertexId start, std::vector<OrientedEdge> edges) {
    if (start < 0 || start >= g.vertex_count()) throw MalformedPath("start vertex out of range");
    VertexId at = start;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto& e = edges[k];
      if (e.edge < 0 || e.edge >= g.edge_count()) throw MalformedPath("foreign edge in path");
      if (g.initial(e) != at) {
        throw MalformedPath("edge " + g.format(e) + " at position " + std::to_string(k) +
                            " does not start at vertex " + g.vertex_name(at));
      }
      at = g.terminal(e);
    }
    return EdgePath(start, at, std::move(edges));
  }

  /// Path starting at the initial vertex of the first edge; edges nonempty.
  static EdgePath make(const FilteredGraph& g, std::vector<OrientedEdge> edges) {
    if (edges.empty()) throw MalformedPath("cannot infer the vertex of an empty path");
    const VertexId start = g.initial(edges.front());
    return make(g, start, std::move(edges));
  }

  /// Trusted constructor for algorithms that preserve incidence.
  static EdgePath unchecked(VertexId start, VertexId end, std::vector<OrientedEdge> edges) {
    return EdgePath(start, end, std::move(edges));
  }

  VertexId start() const { return start_; }
  VertexId end() const { return end_; }
  const std::vector<OrientedEdge>& edges() const { return edges_; }
  std::span<const OrientedEdge> span() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  bool is_loop() const { return start_ == end_; }
  bool is_reduced() const { return kolchin::is_reduced<OrientedEdge>(edges_); }
  const OrientedEdge& operator[](std::size_t i) const { return edges_[i]; }

  EdgePath reversed() const { return EdgePath(end_, start_, inverted<OrientedEdge>(edges_)); }

  /// First n edges.
  EdgePath prefix(const FilteredGraph& g, std::size_t n) const {
    std::vector<OrientedEdge> head(edges_.begin(), edges_.begin() + static_cast<std::ptrdiff_t>(n));
    const VertexId e = head.empty() ? start_ : g.terminal(head.back());
    return EdgePath(start_, e, std::move(head));
  }

  friend bool operator==(const EdgePath&, const EdgePath&) = default;
  friend auto operator<=>(const EdgePath& a, const EdgePath& b) {
    if (auto c = a.start_ <=> b.start_; c != 0) return c;
    if (a.edges_.size() != b.edges_.size()) return a.edges_.size() <=> b.edges_.size();
    return a.edges_ <=> b.edges_;
  }

 private:
  EdgePath(VertexId s, VertexId e, std::vector<OrientedEdge> edges)
      : start_(s), end_(e), edges_(std::move(edges)) {}

  VertexId start_ = 0;
  VertexId end_ = 0;
  std::vector<OrientedEdge> edges_;
};

/// The reduced path homotopic to p rel endpoints.
inline EdgePath tighten(const EdgePath& p) {
  return EdgePath::unchecked(p.start(), p.end(), reduced<OrientedEdge>(p.span()));
}

/// Validates incidence of a raw edge sequence, then reduces it.
inline EdgePath tighten(const FilteredGraph& g, VertexId start, std::vector<OrientedEdge> edges) {
  return tighten(EdgePath::make(g, start, std::move(edges)));
}

/// Concatenation without reduction; throws MalformedPath on an endpoint
/// mismatch.
inline EdgePath concat(const EdgePath& a, const EdgePath& b) {
  if (a.end() != b.start()) throw MalformedPath("concatenated paths do not meet");
  std::vector<OrientedEdge> es = a.edges();
  es.insert(es.end(), b.edges().begin(), b.edges().end());
  return EdgePath::unchecked(a.start(), b.end(), std::move(es));
}

/// Reduced a * b for reduced a, b.
inline EdgePath multiply(const EdgePath& a, const EdgePath& b) {
  if (a.end() != b.start()) throw MalformedPath("multiplied paths do not meet");
  std::vector<OrientedEdge> es = a.edges();
  append_reduced<OrientedEdge>(es, b.span());
  return EdgePath::unchecked(a.start(), b.end(), std::move(es));
}

inline EdgePath multiply(const EdgePath& a, const EdgePath& b, const EdgePath& c) {
  return multiply(multiply(a, b), c);
}

/// Reduced loop^k; the loop must be reduced.
inline EdgePath power(const EdgePath& loop, long long k) {
  if (!loop.is_loop()) throw DomainError("power of a non-loop path");
  return EdgePath::unchecked(loop.start(), loop.start(), power<OrientedEdge>(loop.edges(), k));
}

/// Single-edge path.
inline EdgePath edge_path(const FilteredGraph& g, OrientedEdge e) {
  return EdgePath::unchecked(g.initial(e), g.terminal(e), {e});
}

/// Highest filtration position crossed by p, or -1 for the empty path.
inline EdgeId highest_edge(const EdgePath& p) {
  EdgeId h = -1;
  for (const auto& e : p.edges()) h = std::max(h, e.edge);
  return h;
}

/// Space-separated edge names, "~" for reversal; the empty path prints
/// as "1".
inline std::string format_path(const FilteredGraph& g, const EdgePath& p) {
  if (p.empty()) return "1";
  std::string out;
  for (const auto& e : p.edges()) {
    if (!out.empty()) out += ' ';
    out += g.format(e);
  }
  return out;
}

inline std::vector<std::string> path_tokens(const FilteredGraph& g, const EdgePath& p) {
  std::vector<std::string> out;
  for (const auto& e : p.edges()) out.push_back(g.format(e));
  return out;
}

/// Parses "a ~b c" against a graph. Uses `start` for the empty path.
inline EdgePath parse_path(const FilteredGraph& g, const std::vector<std::string>& tokens, VertexId start) {
  std::vector<OrientedEdge> es;
  for (const auto& tok : tokens) {
    const bool rev = !tok.empty() && (tok[0] == '~' || tok[0] == '\'');
    const std::string name = rev ? tok.substr(1) : tok;
    auto id = g.find_edge(name);
    if (!id) throw DomainError("unknown edge '" + name + "'");
    es.push_back({*id, rev});
  }
  if (es.empty()) return EdgePath::trivial(start);
  const VertexId from = g.initial(es.front());
  return EdgePath::make(g, from, std::move(es));
}

// ---------------------------------------------------------------------------
// Validation

struct Finding {
  bool fatal = false;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;
  /// (edge name, filtration index) in declaration order.
  std::vector<std::pair<std::string, int>> filtration;

  bool valid() const {
    return std::none_of(findings.begin(), findings.end(), [](const Finding& f) { return f.fatal; });
  }
};

/// Report-only validation of a graph description.
inline ValidationReport validate(const GraphDescription& d) {
  ValidationReport r;
  std::set<std::string> vnames;
  for (const auto& v : d.vertices) {
    if (!vnames.insert(v).second) r.findings.push_back({true, "duplicate vertex '" + v + "'"});
  }
  std::set<std::string> enames;
  std::map<std::string, int> valence;
  int index = 0;
  for (const auto& e : d.edges) {
    ++index;
    r.filtration.emplace_back(e.name, index);
    if (!enames.insert(e.name).second) r.findings.push_back({true, "duplicate edge '" + e.name + "'"});
    for (const auto* end : {&e.initial, &e.terminal}) {
      if (!vnames.contains(*end)) {
        r.findings.push_back({true, "edge '" + e.name + "' uses undeclared vertex '" + *end + "'"});
      }
      ++valence[*end];
    }
  }
  for (const auto& v : d.vertices) {
    const int val = valence[v];
    if (val == 1) r.findings.push_back({false, "vertex '" + v + "' has valence one"});
    if (val == 0) r.findings.push_back({false, "vertex '" + v + "' is isolated"});
  }
  return r;
}

inline GraphDescription describe(const FilteredGraph& g) {
  GraphDescription d;
  d.vertices = g.vertex_names();
  for (const auto& e : g.edges()) {
    d.edges.push_back({e.name, g.vertex_name(e.initial), g.vertex_name(e.terminal)});
  }
  return d;
}

inline ValidationReport validate(const FilteredGraph& g) { return validate(describe(g)); }

inline FilteredGraph FilteredGraph::from_description(const GraphDescription& d) {
  const auto report = validate(d);
  for (const auto& f : report.findings) {
    if (f.fatal) throw DomainError(f.message);
  }
  std::map<std::string, VertexId> idx;
  for (std::size_t v = 0; v < d.vertices.size(); ++v) idx[d.vertices[v]] = static_cast<VertexId>(v);
  std::vector<EdgeRecord> edges;
  for (const auto& e : d.edges) edges.push_back({e.name, idx.at(e.initial), idx.at(e.terminal)});
  return FilteredGraph(d.vertices, std::move(edges));
}

inline int FilteredGraph::rank() const {
  // union-find component count
  std::vector<int> parent(static_cast<std::size_t>(vertex_count()));
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    }
    return x;
  };
  int components = vertex_count();
  for (const auto& e : edges_) {
    const int a = find(e.initial);
    const int b = find(e.terminal);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return edge_count() - vertex_count() + components;
}

// ---------------------------------------------------------------------------
// Markings between graphs

/// A vertex-and-edge substitution G -> H that is a homotopy equivalence.
/// Used to transport paths across collapses, slides and leaf deletions.
class GraphMarking {
 public:
  GraphMarking(GraphPtr from, GraphPtr to, std::vector<VertexId> vertex_map, std::vector<EdgePath> edge_images)
      : from_(std::move(from)), to_(std::move(to)), vertex_map_(std::move(vertex_map)),
        edge_images_(std::move(edge_images)) {
    for (EdgeId e = 0; e < from_->edge_count(); ++e) {
      const auto& img = edge_images_.at(static_cast<std::size_t>(e));
      const auto& rec = from_->edge(e);
      if (img.start() != map_vertex(rec.initial) || img.end() != map_vertex(rec.terminal)) {
        throw InternalError("marking edge image does not match vertex map");
      }
    }
  }

  static GraphMarking identity(const GraphPtr& g) {
    std::vector<VertexId> vm;
    for (VertexId v = 0; v < g->vertex_count(); ++v) vm.push_back(v);
    std::vector<EdgePath> images;
    for (EdgeId e = 0; e < g->edge_count(); ++e) images.push_back(edge_path(*g, {e, false}));
    return GraphMarking(g, g, std::move(vm), std::move(images));
  }

  const GraphPtr& from() const { return from_; }
  const GraphPtr& to() const { return to_; }
  VertexId map_vertex(VertexId v) const { return vertex_map_.at(static_cast<std::size_t>(v)); }
  const EdgePath& image(EdgeId e) const { return edge_images_.at(static_cast<std::size_t>(e)); }

  /// Image of a path, tightened.
  EdgePath apply(const EdgePath& p) const {
    std::vector<OrientedEdge> out;
    for (const auto& e : p.edges()) {
      const auto& img = image(e.edge);
      if (e.reversed) {
        const auto inv = inverted<OrientedEdge>(img.edges());
        append_reduced<OrientedEdge>(out, inv);
      } else {
        append_reduced<OrientedEdge>(out, img.span());
      }
    }
    return EdgePath::unchecked(map_vertex(p.start()), map_vertex(p.end()), std::move(out));
  }

  /// this followed by next.
  GraphMarking then(const GraphMarking& next) const {
    if (!same_graph(to_, next.from_)) throw DomainError("marking composition: graph mismatch");
    std::vector<VertexId> vm;
    for (auto v : vertex_map_) vm.push_back(next.map_vertex(v));
    std::vector<EdgePath> images;
    for (const auto& img : edge_images_) images.push_back(next.apply(img));
    return GraphMarking(from_, next.to_, std::move(vm), std::move(images));
  }

 private:
  GraphPtr from_;
  GraphPtr to_;
  std::vector<VertexId> vertex_map_;
  std::vector<EdgePath> edge_images_;
};

/// Rewrites paths of a graph into a quotient; see collapse_edge.
using PathRewriter = GraphMarking;

struct Collapse {
  GraphPtr graph;
  PathRewriter rewriter;
};

/// Collapses the non-loop edge e: its terminal vertex is identified with
/// its initial vertex (or the other way round when keep_terminal), e is
/// deleted and the surviving edges keep their order.
inline Collapse collapse_edge(const GraphPtr& g, EdgeId e, bool keep_terminal = false) {
  if (e < 0 || e >= g->edge_count()) throw DomainError("collapse: edge index out of range");
  if (g->is_loop(e)) throw DomainError("collapse: '" + g->edge(e).name + "' is a loop; collapsing it changes rank");
  const VertexId keep = keep_terminal ? g->edge(e).terminal : g->edge(e).initial;
  const VertexId gone = keep_terminal ? g->edge(e).initial : g->edge(e).terminal;

  std::vector<std::string> vertices;
  std::vector<VertexId> vertex_map(static_cast<std::size_t>(g->vertex_count()));
  for (VertexId v = 0; v < g->vertex_count(); ++v) {
    if (v == gone) continue;
    vertex_map[static_cast<std::size_t>(v)] = static_cast<VertexId>(vertices.size());
    vertices.push_back(g->vertex_name(v));
  }
  vertex_map[static_cast<std::size_t>(gone)] = vertex_map[static_cast<std::size_t>(keep)];

  std::vector<EdgeRecord> edges;
  std::vector<EdgeId> edge_map(static_cast<std::size_t>(g->edge_count()), -1);
  for (EdgeId k = 0; k < g->edge_count(); ++k) {
    if (k == e) continue;
    const auto& rec = g->edge(k);
    edge_map[static_cast<std::size_t>(k)] = static_cast<EdgeId>(edges.size());
    edges.push_back({rec.name, vertex_map[static_cast<std::size_t>(rec.initial)],
                     vertex_map[static_cast<std::size_t>(rec.terminal)]});
  }
  auto quotient = std::make_shared<const FilteredGraph>(std::move(vertices), std::move(edges));

  std::vector<EdgePath> images;
  for (EdgeId k = 0; k < g->edge_count(); ++k) {
    if (k == e) {
      images.push_back(EdgePath::trivial(vertex_map[static_cast<std::size_t>(keep)]));
    } else {
      images.push_back(edge_path(*quotient, {edge_map[static_cast<std::size_t>(k)], false}));
    }
  }
  return {quotient, PathRewriter(g, quotient, std::move(vertex_map), std::move(images))};
}

// ---------------------------------------------------------------------------
// Spanning tree bases

struct BasisLoop {
  std::string label;
  EdgePath loop;
};

/// Marking-induced basis of pi_1(G, base): one loop per non-tree edge.
struct Basis {
  GraphPtr graph;
  VertexId base = 0;
  /// Reduced tree path from base to each vertex.
  std::vector<EdgePath> tree_paths;
  /// Generator index of each edge, -1 for tree edges.
  std::vector<int> generator_of_edge;
  std::vector<BasisLoop> loops;

  int rank() const { return static_cast<int>(loops.size()); }

  /// Rewrites a loop at the base vertex as a reduced word in the basis.
  Word to_word(const EdgePath& loop) const {
    if (loop.start() != base || loop.end() != base) throw DomainError("to_word: not a loop at the base vertex");
    Word w;
    for (const auto& e : loop.edges()) {
      const int gen = generator_of_edge.at(static_cast<std::size_t>(e.edge));
      if (gen < 0) continue;
      const GenLetter l{gen, e.reversed};
      append_reduced<GenLetter>(w, std::span<const GenLetter>(&l, 1));
    }
    return w;
  }

  EdgePath to_loop(const Word& w) const {
    std::vector<OrientedEdge> out;
    for (const auto& l : w) {
      if (l.index < 0 || l.index >= rank()) throw DomainError("to_loop: generator out of range");
      const auto& lp = loops[static_cast<std::size_t>(l.index)].loop;
      if (l.inverted) {
        append_reduced<OrientedEdge>(out, inverted<OrientedEdge>(lp.edges()));
      } else {
        append_reduced<OrientedEdge>(out, lp.span());
      }
    }
    return EdgePath::unchecked(base, base, std::move(out));
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& l : loops) out.push_back(l.label);
    return out;
  }
};

/// Breadth-first tree from base, edges tried in filtration order; one
/// basis loop per non-tree edge, labelled by that edge's name.
inline Basis spanning_tree_basis(const GraphPtr& g, VertexId base) {
  if (base < 0 || base >= g->vertex_count()) throw DomainError("spanning tree: base vertex out of range");
  Basis b;
  b.graph = g;
  b.base = base;
  const auto nv = static_cast<std::size_t>(g->vertex_count());
  std::vector<std::optional<EdgePath>> paths(nv);
  std::vector<bool> tree_edge(static_cast<std::size_t>(g->edge_count()), false);
  paths[static_cast<std::size_t>(base)] = EdgePath::trivial(base);
  std::vector<VertexId> queue{base};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (EdgeId e = 0; e < g->edge_count(); ++e) {
      for (const OrientedEdge oe : {OrientedEdge{e, false}, OrientedEdge{e, true}}) {
        if (g->initial(oe) != v) continue;
        const VertexId w = g->terminal(oe);
        if (paths[static_cast<std::size_t>(w)]) continue;
        paths[static_cast<std::size_t>(w)] = concat(*paths[static_cast<std::size_t>(v)], edge_path(*g, oe));
        tree_edge[static_cast<std::size_t>(e)] = true;
        queue.push_back(w);
      }
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (!paths[v]) throw DomainError("spanning tree: vertex '" + g->vertex_name(static_cast<VertexId>(v)) + "' is not reachable from the base vertex");
    b.tree_paths.push_back(*paths[v]);
  }
  b.generator_of_edge.assign(static_cast<std::size_t>(g->edge_count()), -1);
  for (EdgeId e = 0; e < g->edge_count(); ++e) {
    if (tree_edge[static_cast<std::size_t>(e)]) continue;
    const auto& rec = g->edge(e);
    b.generator_of_edge[static_cast<std::size_t>(e)] = static_cast<int>(b.loops.size());
    const EdgePath loop = tighten(concat(concat(b.tree_paths[static_cast<std::size_t>(rec.initial)], edge_path(*g, {e, false})),
                                         b.tree_paths[static_cast<std::size_t>(rec.terminal)].reversed()));
    b.loops.push_back({rec.name, loop});
  }
  return b;
}

}  // namespace kolchin
