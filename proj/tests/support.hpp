#pragma once

// Random filtered graphs and maps, sample loading.

#include <cstdint>
#include <deque>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kolchin/io/document.hpp"
#include "kolchin/kolchin.hpp"

namespace kolchin::testing {

using Rng = std::mt19937_64;

inline std::string samples_dir() { return KOLCHIN_SAMPLES; }
inline std::string golden_dir() { return KOLCHIN_GOLDEN; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline io::Document load_sample(const std::string& name) { return io::parse(read_text(samples_dir() + "/" + name)); }

inline const std::vector<std::string>& sample_names() {
  static const std::vector<std::string> names{"rose.kg",  "dehn.kg", "rose3.kg",    "conjugate.kg",
                                              "stem.kg", "leaf.kg", "quadratic.kg"};
  return names;
}

inline GraphPtr rose(int n) {
  std::vector<EdgeRecord> edges;
  for (int k = 0; k < n; ++k) edges.push_back({std::string(1, static_cast<char>('a' + k)), 0, 0});
  return std::make_shared<const FilteredGraph>(std::vector<std::string>{"v"}, std::move(edges));
}

inline EdgePath path_of(const FilteredGraph& g, const std::string& text, VertexId start = 0) {
  std::vector<std::string> toks;
  std::istringstream in(text);
  for (std::string t; in >> t;) toks.push_back(t);
  return parse_path(g, toks, start);
}

inline std::string show(const FilteredGraph& g, const EdgePath& p) { return format_path(g, p); }

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Connected graph with at most max_edges edges. Edge 0 is a loop at the
/// base; every other vertex enters through an edge whose terminal vertex
/// is already present, so lower strata are connected to the base.
inline GraphPtr random_graph(Rng& rng, int max_edges) {
  const int ne = uniform(rng, 1, max_edges);
  const int nv = uniform(rng, 1, std::max(1, (ne + 1) / 2));
  std::vector<std::string> vertices;
  for (int v = 0; v < nv; ++v) vertices.push_back("v" + std::to_string(v));
  std::vector<EdgeRecord> edges;
  int present = 1;
  for (int e = 0; e < ne; ++e) {
    const std::string name = "E" + std::to_string(e + 1);
    const int left = ne - e;
    if (e == 0) {
      edges.push_back({name, 0, 0});
    } else if (present < nv && (left <= nv - present || uniform(rng, 0, 1) == 0)) {
      edges.push_back({name, present, uniform(rng, 0, present - 1)});
      ++present;
    } else {
      edges.push_back({name, uniform(rng, 0, present - 1), uniform(rng, 0, present - 1)});
    }
  }
  vertices.resize(static_cast<std::size_t>(present));
  return std::make_shared<const FilteredGraph>(std::move(vertices), std::move(edges));
}

/// Shortest path from a to b using only edges below `below`.
inline std::optional<EdgePath> lower_path(const FilteredGraph& g, VertexId a, VertexId b, EdgeId below) {
  std::vector<std::optional<std::vector<OrientedEdge>>> seen(static_cast<std::size_t>(g.vertex_count()));
  seen[static_cast<std::size_t>(a)] = std::vector<OrientedEdge>{};
  std::deque<VertexId> queue{a};
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (const auto d : g.directions_at(v)) {
      if (d.edge >= below) continue;
      const VertexId w = g.terminal(d);
      if (seen[static_cast<std::size_t>(w)]) continue;
      auto p = *seen[static_cast<std::size_t>(v)];
      p.push_back(d);
      seen[static_cast<std::size_t>(w)] = std::move(p);
      queue.push_back(w);
    }
  }
  if (!seen[static_cast<std::size_t>(b)]) return std::nullopt;
  return EdgePath::unchecked(a, b, *seen[static_cast<std::size_t>(b)]);
}

/// Reduced loop at v in G_{below}, of length at most max_len (possibly
/// trivial): a random walk closed up by a shortest path.
inline EdgePath random_lower_loop(const FilteredGraph& g, Rng& rng, VertexId v, EdgeId below, int max_len) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<OrientedEdge> walk;
    VertexId at = v;
    const int steps = uniform(rng, 0, max_len);
    for (int s = 0; s < steps; ++s) {
      std::vector<OrientedEdge> ds;
      for (const auto d : g.directions_at(at)) {
        if (d.edge < below) ds.push_back(d);
      }
      if (ds.empty()) break;
      const auto d = ds[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(ds.size()) - 1))];
      walk.push_back(d);
      at = g.terminal(d);
    }
    const auto back = lower_path(g, at, v, below);
    if (!back) continue;
    walk.insert(walk.end(), back->edges().begin(), back->edges().end());
    const EdgePath loop = tighten(EdgePath::unchecked(v, v, walk));
    if (static_cast<int>(loop.size()) <= max_len) return loop;
  }
  return EdgePath::trivial(v);
}

inline FilteredMap random_map(const GraphPtr& g, Rng& rng, int max_suffix) {
  std::vector<EdgePath> s;
  for (EdgeId e = 0; e < g->edge_count(); ++e) {
    s.push_back(random_lower_loop(*g, rng, g->edge(e).terminal, e, max_suffix));
  }
  return FilteredMap(g, std::move(s));
}

/// Random reduced path from the base of length at most max_len.
inline EdgePath random_path(const FilteredGraph& g, Rng& rng, int max_len) {
  std::vector<OrientedEdge> walk;
  VertexId at = g.base();
  const int steps = uniform(rng, 0, max_len);
  for (int s = 0; s < steps; ++s) {
    std::vector<OrientedEdge> ds;
    for (const auto d : g.directions_at(at)) {
      if (walk.empty() || walk.back() != d.inverse()) ds.push_back(d);
    }
    if (ds.empty()) break;
    const auto d = ds[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(ds.size()) - 1))];
    walk.push_back(d);
    at = g.terminal(d);
  }
  return EdgePath::unchecked(g.base(), at, walk);
}

/// An axis invariant under two maps: the lifts of f and h fixing the
/// anchor preserve the line and commute with its translation.
struct AxisCase {
  FilteredMap f;
  FilteredMap h;
  AxisLine line;
};

/// Lines along loops fixed by both maps, preferring the longest loop.
inline std::vector<AxisCase> axis_cases(std::size_t count, std::uint64_t seed = 71) {
  Rng rng(seed);
  std::vector<AxisCase> out;
  while (out.size() < count) {
    auto g = random_graph(rng, 5);
    const auto f = random_map(g, rng, 6);
    const auto h = random_map(g, rng, 6);
    const auto tau = random_path(*g, rng, 4);
    const auto dirs = g->directions_at(tau.end());
    const auto first = dirs[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(dirs.size()) - 1))];
    const auto loops = fixed_loops_through(f, first, 6, 6);
    for (auto it = loops.rbegin(); it != loops.rend(); ++it) {
      if (apply(h, *it) != *it) continue;
      out.push_back({f, h, AxisLine{tau, *it}});
      break;
    }
  }
  return out;
}

/// Random word in the generators of a group, as text for parse_group_word.
inline std::string random_group_word(const std::vector<std::string>& labels, Rng& rng, int max_len) {
  const int len = uniform(rng, 0, max_len);
  if (len == 0) return "1";
  std::string out;
  for (int k = 0; k < len; ++k) {
    if (k) out += '.';
    if (uniform(rng, 0, 1)) out += '~';
    out += labels[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(labels.size()) - 1))];
  }
  return out;
}

/// Edge-count matrix computed letter by letter from the images E_i u_i,
/// independent of the library's homology code.
inline std::vector<std::vector<long long>> count_matrix(const FilteredMap& f) {
  const auto n = static_cast<std::size_t>(f.graph()->edge_count());
  std::vector<std::vector<long long>> m(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    ++m[i][i];
    for (const auto& e : f.suffix(static_cast<EdgeId>(i)).edges()) m[static_cast<std::size_t>(e.edge)][i] += e.reversed ? -1 : 1;
  }
  return m;
}

inline std::vector<std::vector<long long>> multiply(const std::vector<std::vector<long long>>& a,
                                                    const std::vector<std::vector<long long>>& b) {
  const auto n = a.size();
  std::vector<std::vector<long long>> out(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

inline std::vector<std::vector<long long>> to_ll(const IntegerMatrix& m) {
  std::vector<std::vector<long long>> out(m.size(), std::vector<long long>(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) out[r][c] = static_cast<long long>(m(r, c));
  }
  return out;
}

}  // namespace kolchin::testing
