#pragma once

// Free-group word algorithms shared by generator words and edge paths.
//
// A letter is any totally ordered value type with an involutive inverse().
// Edge paths are words in oriented edges; elements of F_n are words in
// signed generators. Everything here is purely combinatorial.

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace kolchin {

template <class L>
concept Letter = std::totally_ordered<L> && requires(const L l) {
  { l.inverse() } -> std::same_as<L>;
};

/// Signed generator of a free group. Index is 0-based.
struct GenLetter {
  int index = 0;
  bool inverted = false;

  constexpr GenLetter inverse() const { return {index, !inverted}; }
  friend constexpr auto operator<=>(const GenLetter&, const GenLetter&) = default;
};

using Word = std::vector<GenLetter>;

/// Appends `tail` onto an already reduced `acc`, cancelling at the seam.
template <Letter L>
void append_reduced(std::vector<L>& acc, std::span<const L> tail) {
  for (const L& l : tail) {
    if (!acc.empty() && acc.back() == l.inverse()) {
      acc.pop_back();
    } else {
      acc.push_back(l);
    }
  }
}

template <Letter L>
std::vector<L> reduced(std::span<const L> w) {
  std::vector<L> out;
  out.reserve(w.size());
  append_reduced<L>(out, w);
  return out;
}

template <Letter L>
std::vector<L> reduced(const std::vector<L>& w) {
  return reduced<L>(std::span<const L>(w));
}

template <Letter L>
bool is_reduced(std::span<const L> w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == w[i - 1].inverse()) return false;
  }
  return true;
}

template <Letter L>
std::vector<L> inverted(std::span<const L> w) {
  std::vector<L> out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
  return out;
}

template <Letter L>
std::vector<L> inverted(const std::vector<L>& w) {
  return inverted<L>(std::span<const L>(w));
}

/// Reduced product u * v.
template <Letter L>
std::vector<L> multiply(std::span<const L> u, std::span<const L> v) {
  std::vector<L> out(u.begin(), u.end());
  append_reduced<L>(out, v);
  return out;
}

template <Letter L>
std::vector<L> multiply(const std::vector<L>& u, const std::vector<L>& v) {
  return multiply<L>(std::span<const L>(u), std::span<const L>(v));
}

/// Reduced w^k for any integer k; w must be reduced.
template <Letter L>
std::vector<L> power(const std::vector<L>& w, long long k) {
  const std::vector<L> base = k >= 0 ? w : inverted(w);
  std::vector<L> out;
  for (long long i = 0; i < (k >= 0 ? k : -k); ++i) append_reduced<L>(out, base);
  return out;
}

template <Letter L>
bool is_cyclically_reduced(std::span<const L> w) {
  if (!is_reduced(w)) return false;
  return w.size() < 2 || w.front() != w.back().inverse();
}

/// w = conjugator * core * conjugator^-1 with core cyclically reduced.
template <Letter L>
struct CyclicSplit {
  std::vector<L> conjugator;
  std::vector<L> core;
};

/// Splits a reduced word into conjugator and cyclically reduced core. The
/// conjugator is the maximal peel, so the decomposition is unique.
template <Letter L>
CyclicSplit<L> cyclic_split(std::span<const L> w) {
  std::size_t lo = 0;
  std::size_t hi = w.size();
  while (hi - lo >= 2 && w[lo] == w[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return {std::vector<L>(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(lo)),
          std::vector<L>(w.begin() + static_cast<std::ptrdiff_t>(lo),
                         w.begin() + static_cast<std::ptrdiff_t>(hi))};
}

/// Rotation by s: w[s..] w[..s].
template <Letter L>
std::vector<L> rotated(std::span<const L> w, std::size_t s) {
  std::vector<L> out;
  out.reserve(w.size());
  if (w.empty()) return out;
  s %= w.size();
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(s), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(s));
  return out;
}

/// Smallest p dividing |w| with w = (w[0..p))^(|w|/p). Returns |w| for
/// primitive words and 0 for the empty word.
template <Letter L>
std::size_t primitive_period(std::span<const L> w) {
  const std::size_t n = w.size();
  if (n == 0) return 0;
  std::vector<std::size_t> border(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = border[i - 1];
    while (k > 0 && w[i] != w[k]) k = border[k - 1];
    if (w[i] == w[k]) ++k;
    border[i] = k;
  }
  const std::size_t p = n - border[n - 1];
  return n % p == 0 ? p : n;
}

/// Offset of the lexicographically least rotation (first one on ties).
template <Letter L>
std::size_t least_rotation_offset(std::span<const L> w) {
  const std::size_t n = w.size();
  std::size_t best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      const L& a = w[(s + k) % n];
      const L& b = w[(best + k) % n];
      if (a < b) {
        best = s;
        break;
      }
      if (b < a) break;
    }
  }
  return best;
}

/// Smallest s with rotated(a, s) == b, if any.
template <Letter L>
std::optional<std::size_t> rotation_offset(std::span<const L> a, std::span<const L> b) {
  if (a.size() != b.size()) return std::nullopt;
  if (a.empty()) return 0;
  const std::size_t n = a.size();
  for (std::size_t s = 0; s < n; ++s) {
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) ok = a[(s + k) % n] == b[k];
    if (ok) return s;
  }
  return std::nullopt;
}

/// Length-lexicographic comparison.
template <Letter L>
bool shortlex_less(std::span<const L> a, std::span<const L> b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace kolchin
