#pragma once

// Index arithmetic: |GL(n, Z/3Z)| and the bound 3^{5n^2} on the index of
// a free abelian subgroup.

#include "kolchin/errors.hpp"
#include "kolchin/homology.hpp"

namespace kolchin {

/// prod_{k=0}^{n-1} (3^n - 3^k); D(0) = 1.
inline BigInt gl3_order(int n) {
  if (n < 0) throw DomainError("gl3_order: negative rank");
  const BigInt top = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(n));
  BigInt out = 1;
  BigInt p = 1;
  for (int k = 0; k < n; ++k) {
    out *= top - p;
    p *= 3;
  }
  return out;
}

struct IndexBound {
  int rank = 0;
  BigInt d;            // D(n)
  BigInt three_n2;     // 3^{n^2}
  BigInt d_vcd;        // D(2n-3)
  BigInt product;      // D(n) D(2n-3)
  BigInt three_5n2;    // 3^{5n^2}
  int vcd = 0;

  bool d_below() const { return d < three_n2; }
  bool product_below() const { return product < three_5n2; }
};

inline IndexBound index_bound(int n) {
  if (n < 2) throw DomainError("index_bound: rank must be at least 2");
  IndexBound b;
  b.rank = n;
  b.vcd = 2 * n - 3;
  b.d = gl3_order(n);
  b.three_n2 = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(n * n));
  b.d_vcd = gl3_order(b.vcd);
  b.product = b.d * b.d_vcd;
  b.three_5n2 = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(5 * n * n));
  return b;
}

}  // namespace kolchin
