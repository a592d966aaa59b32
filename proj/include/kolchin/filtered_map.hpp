#pragma once

// The group FHE(G,V) of filtration-respecting homotopy equivalences.
//
// A filtered map fixes every vertex and sends E_i to E_i u_i, where the
// suffix u_i is a reduced loop at the terminal vertex of E_i inside G_{i-1}.
// The suffixes are a normal form, so maps are compared by comparing them.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kolchin/errors.hpp"
#include "kolchin/graph.hpp"
#include "kolchin/word.hpp"

namespace kolchin {

/// Automorphism of a free group of the given rank, by generator images.
class FreeGroupAutomorphism {
 public:
  FreeGroupAutomorphism() = default;
  FreeGroupAutomorphism(std::vector<std::string> labels, std::vector<Word> images)
      : labels_(std::move(labels)), images_(std::move(images)) {
    if (labels_.size() != images_.size()) throw DomainError("automorphism: label/image count mismatch");
    for (auto& w : images_) {
      for (const auto& l : w) {
        if (l.index < 0 || l.index >= rank()) throw DomainError("automorphism: image uses an unknown generator");
      }
      w = reduced(w);
    }
  }

  static FreeGroupAutomorphism identity(std::vector<std::string> labels) {
    std::vector<Word> images;
    for (std::size_t i = 0; i < labels.size(); ++i) images.push_back({GenLetter{static_cast<int>(i), false}});
    return FreeGroupAutomorphism(std::move(labels), std::move(images));
  }

  int rank() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(int generator) const { return images_.at(static_cast<std::size_t>(generator)); }

  Word operator()(const Word& w) const {
    Word out;
    for (const auto& l : w) {
      const Word& img = image(l.index);
      if (l.inverted) {
        append_reduced<GenLetter>(out, inverted(img));
      } else {
        append_reduced<GenLetter>(out, img);
      }
    }
    return out;
  }

  friend bool operator==(const FreeGroupAutomorphism& a, const FreeGroupAutomorphism& b) {
    return a.images_ == b.images_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Word> images_;
};

/// a after b: w -> a(b(w)).
inline FreeGroupAutomorphism compose(const FreeGroupAutomorphism& a, const FreeGroupAutomorphism& b) {
  if (a.rank() != b.rank()) throw DomainError("automorphism composition: rank mismatch");
  std::vector<Word> images;
  for (const auto& w : b.images()) images.push_back(a(w));
  return FreeGroupAutomorphism(a.labels(), std::move(images));
}

/// Formats a generator word with the given labels, "~x" for inverses and
/// "1" for the identity.
inline std::string format_word(const std::vector<std::string>& labels, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    if (l.inverted) out += '~';
    out += labels.at(static_cast<std::size_t>(l.index));
  }
  return out;
}

class FilteredMap {
 public:
  /// Validates the upper-triangular form of every suffix.
  FilteredMap(GraphPtr graph, std::vector<EdgePath> suffixes) : graph_(std::move(graph)), suffixes_(std::move(suffixes)) {
    if (!graph_) throw DomainError("filtered map without a graph");
    if (static_cast<int>(suffixes_.size()) != graph_->edge_count()) {
      throw DomainError("filtered map: expected one suffix per edge");
    }
    for (EdgeId i = 0; i < graph_->edge_count(); ++i) {
      const auto& u = suffixes_[static_cast<std::size_t>(i)];
      const auto& rec = graph_->edge(i);
      if (u.start() != rec.terminal || u.end() != rec.terminal) {
        throw DomainError("suffix of '" + rec.name + "' is not a loop at its terminal vertex");
      }
      if (!u.is_reduced()) throw DomainError("suffix of '" + rec.name + "' is not reduced");
      for (const auto& e : u.edges()) {
        if (e.edge >= i) throw DomainError("suffix of '" + rec.name + "' escapes G_" + std::to_string(i));
      }
    }
  }

  static FilteredMap identity(const GraphPtr& g) {
    std::vector<EdgePath> s;
    for (EdgeId i = 0; i < g->edge_count(); ++i) s.push_back(EdgePath::trivial(g->edge(i).terminal));
    return FilteredMap(g, std::move(s));
  }

  const GraphPtr& graph() const { return graph_; }
  const std::vector<EdgePath>& suffixes() const { return suffixes_; }
  const EdgePath& suffix(EdgeId e) const { return suffixes_.at(static_cast<std::size_t>(e)); }

  bool is_identity() const {
    for (const auto& u : suffixes_) {
      if (!u.empty()) return false;
    }
    return true;
  }

  /// Appends the image of one oriented edge onto a reduced accumulator.
  void push_image(std::vector<OrientedEdge>& acc, OrientedEdge e) const {
    const auto& u = suffix(e.edge);
    if (!e.reversed) {
      append_reduced<OrientedEdge>(acc, std::span<const OrientedEdge>(&e, 1));
      append_reduced<OrientedEdge>(acc, u.span());
    } else {
      append_reduced<OrientedEdge>(acc, inverted<OrientedEdge>(u.edges()));
      append_reduced<OrientedEdge>(acc, std::span<const OrientedEdge>(&e, 1));
    }
  }

 private:
  GraphPtr graph_;
  std::vector<EdgePath> suffixes_;
};

inline void require_same_graph(const FilteredMap& f, const FilteredMap& g) {
  if (!same_graph(f.graph(), g.graph())) throw DomainError("filtered maps live on different graphs");
}

/// f_#(p): substitute E -> E u, ~E -> ~u ~E and tighten.
inline EdgePath apply(const FilteredMap& f, const EdgePath& p) {
  for (const auto& e : p.edges()) {
    if (e.edge < 0 || e.edge >= f.graph()->edge_count()) throw DomainError("apply: foreign edge");
  }
  std::vector<OrientedEdge> acc;
  acc.reserve(p.size() * 2);
  for (const auto& e : p.edges()) f.push_image(acc, e);
  return EdgePath::unchecked(p.start(), p.end(), std::move(acc));
}

/// f after g. Suffix law: u_{f.g} = [u_f f_#(u_g)].
inline FilteredMap compose(const FilteredMap& f, const FilteredMap& g) {
  require_same_graph(f, g);
  std::vector<EdgePath> s;
  s.reserve(f.suffixes().size());
  for (EdgeId i = 0; i < f.graph()->edge_count(); ++i) s.push_back(multiply(f.suffix(i), apply(f, g.suffix(i))));
  return FilteredMap(f.graph(), std::move(s));
}

/// Inverse, built bottom-up the filtration: u_{h,i} = [h_#(~u_{f,i})]
/// where h is already known on G_{i-1}.
inline FilteredMap invert(const FilteredMap& f) {
  const auto& g = f.graph();
  std::vector<EdgePath> s;
  for (EdgeId i = 0; i < g->edge_count(); ++i) s.push_back(EdgePath::trivial(g->edge(i).terminal));
  for (EdgeId i = 0; i < g->edge_count(); ++i) {
    // h restricted to G_{i-1} only reads suffixes below i, which are final.
    const FilteredMap partial(g, s);
    s[static_cast<std::size_t>(i)] = apply(partial, f.suffix(i).reversed());
  }
  return FilteredMap(g, std::move(s));
}

inline bool equal(const FilteredMap& f, const FilteredMap& g) {
  require_same_graph(f, g);
  return f.suffixes() == g.suffixes();
}

/// u_{i,f} for the 1-based filtration index i.
inline const EdgePath& suffix(const FilteredMap& f, int filtration_index) {
  if (filtration_index < 1 || filtration_index > f.graph()->edge_count()) {
    throw DomainError("suffix: filtration index " + std::to_string(filtration_index) + " out of range");
  }
  return f.suffix(filtration_index - 1);
}

/// f^k for any integer k.
inline FilteredMap power(const FilteredMap& f, long long k) {
  FilteredMap base = k >= 0 ? f : invert(f);
  FilteredMap out = FilteredMap::identity(f.graph());
  for (long long n = k >= 0 ? k : -k; n > 0; n >>= 1) {
    if (n & 1) out = compose(out, base);
    if (n > 1) base = compose(base, base);
  }
  return out;
}

/// Action on pi_1(G, base) in a spanning-tree basis.
inline FreeGroupAutomorphism induced_automorphism(const FilteredMap& f, const Basis& basis) {
  if (!same_graph(f.graph(), basis.graph)) throw DomainError("induced automorphism: basis is for another graph");
  std::vector<Word> images;
  for (const auto& bl : basis.loops) images.push_back(basis.to_word(apply(f, bl.loop)));
  return FreeGroupAutomorphism(basis.labels(), std::move(images));
}

}  // namespace kolchin
