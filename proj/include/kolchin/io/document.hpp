#pragma once

// The text format for graphs, maps and groups.
//
//   graph rose { vertex v ; edge a v v ; edge b v v }
//   map D on rose { b -> b a }
//   group K on rose { gens D }
//
// Statements end at a newline or ';'. '#' starts a comment. Edge order in
// a graph is the filtration. A map line must read E -> E u where u is a
// reduced loop in strictly lower strata; omitted edges are fixed.

#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kolchin/errors.hpp"
#include "kolchin/filtered_map.hpp"
#include "kolchin/graph.hpp"
#include "kolchin/map_group.hpp"

namespace kolchin::io {

struct SourcePos {
  int line = 0;
  int column = 0;
};

struct NamedGraph {
  std::string name;
  GraphPtr graph;
  SourcePos pos;
};

struct NamedMap {
  std::string name;
  std::string graph;
  FilteredMap map;
  SourcePos pos;
};

struct NamedGroup {
  std::string name;
  std::string graph;
  std::vector<std::string> generators;
  SourcePos pos;
};

class Document {
 public:
  std::vector<NamedGraph> graphs;
  std::vector<NamedMap> maps;
  std::vector<NamedGroup> groups;

  const NamedGraph* find_graph(const std::string& name) const { return find_in(graphs, name); }
  const NamedMap* find_map(const std::string& name) const { return find_in(maps, name); }
  const NamedGroup* find_group(const std::string& name) const { return find_in(groups, name); }

  MapGroup group(const std::string& name) const {
    const auto* g = find_group(name);
    if (!g) throw DomainError("no group named '" + name + "'");
    std::vector<LabeledMap> gens;
    for (const auto& m : g->generators) gens.push_back({m, find_map(m)->map});
    return MapGroup(find_graph(g->graph)->graph, std::move(gens));
  }

  /// Equality of content; source positions are ignored.
  friend bool operator==(const Document& a, const Document& b) {
    if (a.graphs.size() != b.graphs.size() || a.maps.size() != b.maps.size() || a.groups.size() != b.groups.size()) {
      return false;
    }
    for (std::size_t k = 0; k < a.graphs.size(); ++k) {
      if (a.graphs[k].name != b.graphs[k].name || !(*a.graphs[k].graph == *b.graphs[k].graph)) return false;
    }
    for (std::size_t k = 0; k < a.maps.size(); ++k) {
      const auto& x = a.maps[k];
      const auto& y = b.maps[k];
      if (x.name != y.name || x.graph != y.graph || x.map.suffixes() != y.map.suffixes()) return false;
    }
    for (std::size_t k = 0; k < a.groups.size(); ++k) {
      const auto& x = a.groups[k];
      const auto& y = b.groups[k];
      if (x.name != y.name || x.graph != y.graph || x.generators != y.generators) return false;
    }
    return true;
  }

 private:
  template <class T>
  static const T* find_in(const std::vector<T>& v, const std::string& name) {
    for (const auto& x : v) {
      if (x.name == name) return &x;
    }
    return nullptr;
  }
};

namespace detail {

struct Token {
  enum class Kind { word, open, close, arrow, end_of_statement, end_of_input };
  Kind kind = Kind::word;
  std::string text;
  SourcePos pos;
};

inline std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::string t, SourcePos p) { out.push_back({k, std::move(t), p}); };
  while (i < text.size()) {
    const char c = text[i];
    const SourcePos here{line, col};
    if (c == '\n') {
      push(Token::Kind::end_of_statement, "newline", here);
      ++i;
      ++line;
      col = 1;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i, ++col;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
    } else if (c == '{' || c == '}' || c == ';') {
      push(c == '{' ? Token::Kind::open : c == '}' ? Token::Kind::close : Token::Kind::end_of_statement,
           std::string(1, c), here);
      ++i;
      ++col;
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(Token::Kind::arrow, "->", here);
      i += 2;
      col += 2;
    } else {
      std::string w;
      while (i < text.size()) {
        const char d = text[i];
        if (std::isspace(static_cast<unsigned char>(d)) || d == '{' || d == '}' || d == ';' || d == '#') break;
        if (d == '-' && i + 1 < text.size() && text[i + 1] == '>') break;
        w += d;
        ++i;
        ++col;
      }
      push(Token::Kind::word, std::move(w), here);
    }
  }
  push(Token::Kind::end_of_input, "end of input", {line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  Document run() {
    Document doc;
    for (;;) {
      skip_breaks();
      const Token& t = peek();
      if (t.kind == Token::Kind::end_of_input) break;
      if (t.kind != Token::Kind::word) fail(t, "expected 'graph', 'map' or 'group'");
      if (t.text == "graph") {
        parse_graph(doc);
      } else if (t.text == "map") {
        parse_map(doc);
      } else if (t.text == "group") {
        parse_group(doc);
      } else {
        fail(t, "expected 'graph', 'map' or 'group', found '" + t.text + "'");
      }
    }
    return doc;
  }

 private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(msg, t.pos.line, t.pos.column); }

  const Token& peek() const { return toks_[at_]; }
  const Token& next() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }

  void skip_breaks() {
    while (peek().kind == Token::Kind::end_of_statement) ++at_;
  }

  const Token& expect_word(const std::string& what) {
    const Token& t = next();
    if (t.kind != Token::Kind::word) fail(t, "expected " + what + ", found '" + t.text + "'");
    return t;
  }

  void expect(Token::Kind k, const std::string& what) {
    const Token& t = next();
    if (t.kind != k) fail(t, "expected " + what + ", found '" + t.text + "'");
  }

  /// Words up to the end of the statement or block.
  std::vector<Token> rest_of_statement() {
    std::vector<Token> out;
    while (peek().kind == Token::Kind::word) out.push_back(next());
    if (peek().kind == Token::Kind::end_of_statement) ++at_;
    else if (peek().kind != Token::Kind::close) fail(peek(), "unexpected '" + peek().text + "'");
    return out;
  }

  /// Header "<kw> <name> [on <graph>] {".
  std::pair<Token, std::optional<Token>> header(bool with_graph) {
    next();
    Token name = expect_word("a name");
    std::optional<Token> graph;
    if (with_graph) {
      const Token& on = expect_word("'on'");
      if (on.text != "on") fail(on, "expected 'on', found '" + on.text + "'");
      graph = expect_word("a graph name");
    }
    skip_breaks();
    expect(Token::Kind::open, "'{'");
    return {name, graph};
  }

  void parse_graph(Document& doc) {
    const auto [name, unused] = header(false);
    if (doc.find_graph(name.text)) fail(name, "duplicate graph '" + name.text + "'");
    std::vector<std::string> vertices;
    std::map<std::string, int> vindex;
    std::vector<EdgeRecord> edges;
    std::map<std::string, int> eindex;
    for (;;) {
      skip_breaks();
      if (peek().kind == Token::Kind::close) {
        next();
        break;
      }
      const Token& kw = expect_word("'vertex' or 'edge'");
      const auto args = rest_of_statement();
      if (kw.text == "vertex") {
        if (args.empty()) fail(kw, "'vertex' needs at least one name");
        for (const auto& a : args) {
          if (vindex.contains(a.text)) fail(a, "duplicate vertex '" + a.text + "'");
          vindex[a.text] = static_cast<int>(vertices.size());
          vertices.push_back(a.text);
        }
      } else if (kw.text == "edge") {
        if (args.size() != 3) fail(kw, "'edge' takes a name, an initial and a terminal vertex");
        if (eindex.contains(args[0].text)) fail(args[0], "duplicate edge '" + args[0].text + "'");
        check_edge_name(args[0]);
        for (int k = 1; k <= 2; ++k) {
          if (!vindex.contains(args[static_cast<std::size_t>(k)].text)) {
            fail(args[static_cast<std::size_t>(k)], "unknown vertex '" + args[static_cast<std::size_t>(k)].text + "'");
          }
        }
        eindex[args[0].text] = static_cast<int>(edges.size());
        edges.push_back({args[0].text, vindex[args[1].text], vindex[args[2].text]});
      } else {
        fail(kw, "expected 'vertex' or 'edge', found '" + kw.text + "'");
      }
    }
    if (vertices.empty()) fail(name, "graph '" + name.text + "' has no vertices");
    doc.graphs.push_back({name.text, std::make_shared<const FilteredGraph>(std::move(vertices), std::move(edges)), name.pos});
  }

  static void check_edge_name(const Token& t) {
    if (t.text[0] == '~' || t.text[0] == '\'') fail(t, "edge names may not start with '~' or '''");
  }

  /// Looks up a possibly reversed edge token.
  static OrientedEdge oriented(const FilteredGraph& g, const Token& t) {
    const bool rev = t.text[0] == '~' || t.text[0] == '\'';
    const std::string name = rev ? t.text.substr(1) : t.text;
    const auto e = g.find_edge(name);
    if (!e) fail(t, "unknown edge '" + name + "'");
    return {*e, rev};
  }

  void parse_map(Document& doc) {
    const auto [name, graph] = header(true);
    if (doc.find_map(name.text)) fail(name, "duplicate map '" + name.text + "'");
    const auto* ng = doc.find_graph(graph->text);
    if (!ng) fail(*graph, "unknown graph '" + graph->text + "'");
    const auto& g = *ng->graph;
    std::vector<std::optional<EdgePath>> suffixes(static_cast<std::size_t>(g.edge_count()));
    for (;;) {
      skip_breaks();
      if (peek().kind == Token::Kind::close) {
        next();
        break;
      }
      const Token& lhs = expect_word("an edge");
      const OrientedEdge e = oriented(g, lhs);
      if (e.reversed) fail(lhs, "the left-hand side must be a forward edge");
      if (suffixes[static_cast<std::size_t>(e.edge)]) fail(lhs, "second image for edge '" + lhs.text + "'");
      expect(Token::Kind::arrow, "'->'");
      const auto rhs = rest_of_statement();
      if (rhs.empty() || rhs[0].text != lhs.text) {
        fail(rhs.empty() ? lhs : rhs[0], "image of " + lhs.text + " must begin with " + lhs.text + " (upper-triangular form)");
      }
      std::vector<OrientedEdge> u;
      for (std::size_t k = 1; k < rhs.size(); ++k) {
        const OrientedEdge x = oriented(g, rhs[k]);
        if (x.edge >= e.edge) {
          fail(rhs[k], "suffix escapes G_" + std::to_string(e.edge) + ": " + rhs[k].text + " is not below " + lhs.text);
        }
        const VertexId at = u.empty() ? g.edge(e.edge).terminal : g.terminal(u.back());
        if (g.initial(x) != at) fail(rhs[k], "edge " + rhs[k].text + " does not start where the image has reached");
        u.push_back(x);
      }
      const VertexId v = g.edge(e.edge).terminal;
      if (!u.empty() && g.terminal(u.back()) != v) fail(rhs.back(), "suffix of " + lhs.text + " is not a loop");
      if (!is_reduced<OrientedEdge>(u)) fail(rhs[1], "suffix of " + lhs.text + " is not reduced");
      suffixes[static_cast<std::size_t>(e.edge)] = EdgePath::unchecked(v, v, std::move(u));
    }
    std::vector<EdgePath> s;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const auto& x = suffixes[static_cast<std::size_t>(e)];
      s.push_back(x ? *x : EdgePath::trivial(g.edge(e).terminal));
    }
    doc.maps.push_back({name.text, graph->text, FilteredMap(ng->graph, std::move(s)), name.pos});
  }

  void parse_group(Document& doc) {
    const auto [name, graph] = header(true);
    if (doc.find_group(name.text)) fail(name, "duplicate group '" + name.text + "'");
    if (!doc.find_graph(graph->text)) fail(*graph, "unknown graph '" + graph->text + "'");
    std::vector<std::string> gens;
    bool seen = false;
    for (;;) {
      skip_breaks();
      if (peek().kind == Token::Kind::close) {
        next();
        break;
      }
      const Token& kw = expect_word("'gens'");
      if (kw.text != "gens") fail(kw, "expected 'gens', found '" + kw.text + "'");
      if (seen) fail(kw, "second 'gens' statement");
      seen = true;
      for (const auto& a : rest_of_statement()) {
        const auto* m = doc.find_map(a.text);
        if (!m) fail(a, "unknown map '" + a.text + "'");
        if (m->graph != graph->text) fail(a, "map '" + a.text + "' is on graph '" + m->graph + "'");
        for (const auto& x : gens) {
          if (x == a.text) fail(a, "generator '" + a.text + "' listed twice");
        }
        gens.push_back(a.text);
      }
    }
    doc.groups.push_back({name.text, graph->text, std::move(gens), name.pos});
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

}  // namespace detail

inline Document parse(const std::string& text) { return detail::Parser(text).run(); }

// ---------------------------------------------------------------------------
// Canonical emission

inline std::string emit_graph(const std::string& name, const FilteredGraph& g) {
  std::ostringstream out;
  out << "graph " << name << " {\n  vertex";
  for (const auto& v : g.vertex_names()) out << ' ' << v;
  out << '\n';
  for (const auto& e : g.edges()) {
    out << "  edge " << e.name << ' ' << g.vertex_name(e.initial) << ' ' << g.vertex_name(e.terminal) << '\n';
  }
  out << "}\n";
  return out.str();
}

inline std::string emit_map(const std::string& name, const std::string& graph, const FilteredMap& f) {
  const auto& g = *f.graph();
  std::ostringstream out;
  out << "map " << name << " on " << graph << " {\n";
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& u = f.suffix(e);
    if (u.empty()) continue;
    out << "  " << g.edge(e).name << " -> " << g.edge(e).name << ' ' << format_path(g, u) << '\n';
  }
  out << "}\n";
  return out.str();
}

inline std::string emit_group(const std::string& name, const std::string& graph, const std::vector<std::string>& gens) {
  std::string out = "group " + name + " on " + graph + " {\n  gens";
  for (const auto& m : gens) out += ' ' + m;
  return out + "\n}\n";
}

/// Graphs, then maps, then groups, each in declaration order, separated
/// by blank lines.
inline std::string emit(const Document& doc) {
  std::vector<std::string> blocks;
  for (const auto& g : doc.graphs) blocks.push_back(emit_graph(g.name, *g.graph));
  for (const auto& m : doc.maps) blocks.push_back(emit_map(m.name, m.graph, m.map));
  for (const auto& k : doc.groups) blocks.push_back(emit_group(k.name, k.graph, k.generators));
  std::string out;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (k) out += '\n';
    out += blocks[k];
  }
  return out;
}

/// A self-contained document holding one group, with maps named after
/// the group's generator labels.
inline Document document_of(const MapGroup& k, const std::string& graph_name, const std::string& group_name) {
  Document doc;
  doc.graphs.push_back({graph_name, k.graph(), {}});
  std::vector<std::string> gens;
  for (const auto& gen : k.generators()) {
    doc.maps.push_back({gen.label, graph_name, gen.map, {}});
    gens.push_back(gen.label);
  }
  doc.groups.push_back({group_name, graph_name, std::move(gens), {}});
  return doc;
}

}  // namespace kolchin::io
