#pragma once

// IL(f, T_alpha): lifts of f that commute with T_alpha and fix at least
// three points at infinity, searched among t_{T_alpha^k} o s_alpha(f).

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kolchin/boundary.hpp"
#include "kolchin/essential.hpp"
#include "kolchin/lift.hpp"

namespace kolchin {

struct ILCandidate {
  long long exponent = 0;
  Lift lift;
  bool commutes = false;
  FixedPointReport fixed;
  bool interesting = false;
};

struct ILReport {
  std::size_t axis = 0;
  bool identity = false;
  /// False when a predicted exponent lies outside the searched range.
  bool complete = true;
  int exp_bound = 0;
  int radius = 0;
  std::size_t depth = 0;
  std::vector<ILCandidate> candidates;
  /// k such that t_{T^k} o s_alpha(f) was certified interesting.
  std::vector<long long> found;
  /// 0 for s_alpha(f), and the twist coordinate of every edge on the axis.
  std::vector<long long> predicted;
  /// Which lifts produce each predicted exponent ("alpha" or an edge name).
  std::vector<std::pair<std::string, long long>> sources;
  /// l - k over ordered pairs of distinct found exponents.
  std::vector<long long> differences;

  bool matches() const { return !identity && found == predicted; }
};

inline ILReport interesting_lifts(const FilteredMap& f, const EssentialData& d, std::size_t axis, int exp_bound,
                                  int radius, std::size_t depth = kDefaultDepth, std::size_t witness_cap = 3) {
  if (axis >= d.axes.size()) throw DomainError("interesting_lifts: no axis with index " + std::to_string(axis));
  if (exp_bound < 0 || radius < 0) throw DomainError("interesting_lifts: bounds must be non-negative");
  if (witness_cap < 3) throw DomainError("interesting_lifts: witness cap below three cannot certify anything");
  const auto& a = d.axes[axis];
  const auto& g = *d.group.graph();
  ILReport rep;
  rep.axis = axis;
  rep.exp_bound = exp_bound;
  rep.radius = radius;
  rep.depth = depth;

  std::set<long long> predicted{0};
  rep.sources.emplace_back("alpha", 0);
  for (const auto x : a.edges) {
    const long long k = twist_coordinate(f, d, x);
    rep.sources.emplace_back(g.edge(d.edges[x].edge).name, k);
    predicted.insert(k);
  }
  rep.predicted.assign(predicted.begin(), predicted.end());

  if (f.is_identity()) {
    rep.identity = true;
    return rep;
  }
  for (const auto k : rep.predicted) rep.complete = rep.complete && k >= -exp_bound && k <= exp_bound;

  const Lift base = canonical_axis_lift(f, a);
  const EdgePath t = a.translation.loop;
  for (long long k = -exp_bound; k <= exp_bound; ++k) {
    ILCandidate c{k, translate({power(t, k)}, base), false, {}, false};
    c.commutes = c.lift.act(t) == t;
    if (c.commutes) {
      c.fixed = classify_fixed_points(c.lift, radius, depth, witness_cap);
      c.interesting = c.fixed.count_lower_bound >= 3;
    }
    if (c.interesting) rep.found.push_back(k);
    rep.candidates.push_back(std::move(c));
  }
  std::set<long long> diffs;
  for (const auto k : rep.found) {
    for (const auto l : rep.found) {
      if (k != l) diffs.insert(l - k);
    }
  }
  rep.differences.assign(diffs.begin(), diffs.end());
  return rep;
}

}  // namespace kolchin
