#pragma once

// Homology actions and growth of filtered maps.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kolchin/filtered_map.hpp"
#include "kolchin/graph.hpp"

namespace kolchin {

using BigInt = boost::multiprecision::cpp_int;

/// Dense square integer matrix, exact.
class IntegerMatrix {
 public:
  explicit IntegerMatrix(std::size_t n = 0) : n_(n), data_(n * n) {}

  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t size() const { return n_; }
  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    IntegerMatrix out(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) {
      for (std::size_t k = 0; k < a.n_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < a.n_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    }
    return out;
  }

  friend IntegerMatrix operator-(const IntegerMatrix& a, const IntegerMatrix& b) {
    IntegerMatrix out(a.n_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
    return out;
  }

  bool is_zero() const {
    for (const auto& x : data_) {
      if (x != 0) return false;
    }
    return true;
  }

  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

  std::vector<std::vector<std::string>> to_strings() const {
    std::vector<std::vector<std::string>> rows(n_);
    for (std::size_t r = 0; r < n_; ++r) {
      for (std::size_t c = 0; c < n_; ++c) rows[r].push_back((*this)(r, c).str());
    }
    return rows;
  }

 private:
  std::size_t n_;
  std::vector<BigInt> data_;
};

/// Edge-space action: column i holds the signed edge counts of E_i u_i.
/// Rows and columns are in filtration order.
inline IntegerMatrix homology_action(const FilteredMap& f) {
  const auto k = static_cast<std::size_t>(f.graph()->edge_count());
  IntegerMatrix m = IntegerMatrix::identity(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& e : f.suffix(static_cast<EdgeId>(i)).edges()) {
      m(static_cast<std::size_t>(e.edge), i) += e.reversed ? -1 : 1;
    }
  }
  return m;
}

/// Action on H_1(G) = cycle space, in the spanning-tree basis: column k
/// holds the exponent sums of f_#(x_k).
inline IntegerMatrix cycle_space_action(const FilteredMap& f, const Basis& basis) {
  const auto aut = induced_automorphism(f, basis);
  const auto n = static_cast<std::size_t>(aut.rank());
  IntegerMatrix m(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& l : aut.image(static_cast<int>(k))) {
      m(static_cast<std::size_t>(l.index), k) += l.inverted ? -1 : 1;
    }
  }
  return m;
}

/// (M - I)^n == 0.
inline bool is_unipotent(const IntegerMatrix& m) {
  const auto n = m.size();
  const IntegerMatrix nil = m - IntegerMatrix::identity(n);
  IntegerMatrix p = IntegerMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) p = p * nil;
  return p.is_zero();
}

/// M - I has no entries on or below the diagonal.
inline bool is_strictly_upper_unipotent(const IntegerMatrix& m) {
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c <= r; ++c) {
      if (m(r, c) != (r == c ? 1 : 0)) return false;
    }
  }
  return true;
}

inline bool is_identity_mod(const IntegerMatrix& m, int modulus) {
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) {
      const BigInt d = m(r, c) - (r == c ? 1 : 0);
      if (d % modulus != 0) return false;
    }
  }
  return true;
}

/// Triviality of the action on H_1(G; Z/3Z), computed on the cycle space.
inline bool is_identity_mod3(const FilteredMap& f) {
  const auto basis = spanning_tree_basis(f.graph(), f.graph()->base());
  return is_identity_mod(cycle_space_action(f, basis), 3);
}

struct GrowthReport {
  /// Combinatorial upper bound per edge.
  std::vector<int> bound;
  /// Degree fitted from |f^k_#(E_i)| for k <= samples.
  std::vector<int> empirical;
  /// |f^k_#(E_i)| for k = 0..samples, per edge.
  std::vector<std::vector<std::size_t>> lengths;

  bool consistent() const { return bound == empirical; }
};

namespace detail {

/// Degree of a sampled sequence: the least d whose (d+1)-st finite
/// differences vanish over the tail, falling back to a log-ratio estimate.
inline int fit_degree(const std::vector<std::size_t>& lengths) {
  std::vector<long double> diff(lengths.begin(), lengths.end());
  const std::size_t tail = 5;
  for (int d = 0; d + 2 < static_cast<int>(lengths.size()); ++d) {
    std::vector<long double> next;
    for (std::size_t i = 1; i < diff.size(); ++i) next.push_back(diff[i] - diff[i - 1]);
    diff = std::move(next);
    if (diff.size() < tail) break;
    bool zero = true;
    for (std::size_t i = diff.size() - tail; i < diff.size(); ++i) zero = zero && diff[i] == 0;
    if (zero) return d;
  }
  const std::size_t n = lengths.size() - 1;
  const long double hi = static_cast<long double>(lengths[n]);
  const long double lo = static_cast<long double>(lengths[n / 2]);
  if (lo <= 0) return 0;
  return static_cast<int>(std::lround(std::log(hi / lo) / std::log(static_cast<long double>(n) / (n / 2))));
}

}  // namespace detail

/// Growth of k -> |f^k_#(E_i)|. The bound is 0 for an edge with trivial
/// suffix and 1 + the largest bound among the edges its suffix crosses.
inline GrowthReport growth_degree(const FilteredMap& f, int samples = 12) {
  const auto& g = *f.graph();
  GrowthReport r;
  r.bound.assign(static_cast<std::size_t>(g.edge_count()), 0);
  for (EdgeId i = 0; i < g.edge_count(); ++i) {
    const auto& u = f.suffix(i);
    if (u.empty()) continue;
    int m = 0;
    for (const auto& e : u.edges()) m = std::max(m, r.bound[static_cast<std::size_t>(e.edge)]);
    r.bound[static_cast<std::size_t>(i)] = m + 1;
  }
  for (EdgeId i = 0; i < g.edge_count(); ++i) {
    std::vector<std::size_t> lens;
    EdgePath p = edge_path(g, {i, false});
    lens.push_back(p.size());
    for (int k = 1; k <= samples; ++k) {
      p = apply(f, p);
      lens.push_back(p.size());
    }
    r.empirical.push_back(detail::fit_degree(lens));
    r.lengths.push_back(std::move(lens));
  }
  return r;
}

}  // namespace kolchin
