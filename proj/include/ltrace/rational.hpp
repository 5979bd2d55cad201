#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace ltrace {

using Rational = mpq_class;

/// Parses "p/q", "p" or a finite decimal such as "-0.25". The result is
/// canonicalized.
Rational parse_rational(std::string_view text);

/// "p/q" or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Exact conversion of a finite double.
Rational rational_from_double(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Multi-index alpha in N_0^n. Ordered lexicographically so that maps keyed by
/// MultiIndex have a platform-independent iteration order.
struct MultiIndex {
  std::vector<int> e;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : e(std::move(entries)) {}

  int size() const { return static_cast<int>(e.size()); }
  int order() const;
  int operator[](int i) const { return e[static_cast<std::size_t>(i)]; }

  static MultiIndex unit(int n, int i);
  MultiIndex operator+(const MultiIndex& other) const;
  /// True when every entry of `other` is <= the matching entry here.
  bool dominates(const MultiIndex& other) const;
  MultiIndex operator-(const MultiIndex& other) const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;
};

/// All multi-indices of length n and total order `order`, in descending
/// lexicographic order: (2,0), (1,1), (0,2). This matches the order of sorted
/// index tuples (1,1), (1,2), (2,2) used for symmetric tensor storage.
std::vector<MultiIndex> multi_indices(int n, int order);

/// Number of ordered index tuples represented by alpha, |alpha|! / alpha!.
long multinomial(const MultiIndex& alpha);

/// alpha! / (alpha - beta)!, the coefficient of x^(alpha-beta) in d^beta x^alpha.
long falling_factorial(const MultiIndex& alpha, const MultiIndex& beta);

long binomial(int n, int k);

std::string to_string(const MultiIndex& alpha);

}  // namespace ltrace
