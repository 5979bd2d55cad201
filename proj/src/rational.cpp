#include "ltrace/rational.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ltrace/errors.hpp"

namespace ltrace {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

std::string strip(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  if (!out.empty() && out[0] == '+') out.erase(0, 1);
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string s = strip(text);
  if (s.empty()) throw ParseError("rational", "empty string");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den)) {
      throw ParseError("rational", "malformed fraction '" + s + "'");
    }
    mpz_class p(num, 10), q(den, 10);
    if (q == 0) throw ParseError("rational", "zero denominator in '" + s + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  if (is_integer_text(s)) return Rational(mpz_class(s, 10));

  // Finite decimal: sign, digits, '.', digits, optional exponent.
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '-') {
    negative = true;
    ++pos;
  }
  std::string digits;
  long scale = 0;
  bool seen_dot = false, seen_digit = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) ++scale;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  long exponent = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    const std::string exp_text = s.substr(pos + 1);
    if (!is_integer_text(exp_text)) {
      throw ParseError("rational", "malformed exponent in '" + s + "'");
    }
    exponent = std::stol(exp_text);
    pos = s.size();
  }
  if (!seen_digit || pos != s.size()) {
    throw ParseError("rational", "not a rational number: '" + s + "'");
  }
  mpz_class mantissa(digits, 10);
  const long shift = exponent - scale;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  Rational r = shift >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("rational_from_double: non-finite value");
  Rational r(x);
  r.canonicalize();
  return r;
}

int MultiIndex::order() const { return std::accumulate(e.begin(), e.end(), 0); }

MultiIndex MultiIndex::unit(int n, int i) {
  MultiIndex m(std::vector<int>(static_cast<std::size_t>(n), 0));
  m.e[static_cast<std::size_t>(i)] = 1;
  return m;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  MultiIndex out(e);
  for (std::size_t i = 0; i < e.size(); ++i) out.e[i] += other.e[i];
  return out;
}

bool MultiIndex::dominates(const MultiIndex& other) const {
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < other.e[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  MultiIndex out(e);
  for (std::size_t i = 0; i < e.size(); ++i) out.e[i] -= other.e[i];
  return out;
}

namespace {

void fill_indices(int n, int remaining, int pos, std::vector<int>& cur,
                  std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[static_cast<std::size_t>(pos)] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[static_cast<std::size_t>(pos)] = v;
    fill_indices(n, remaining - v, pos + 1, cur, out);
  }
}

long factorial(int m) {
  long f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<MultiIndex> multi_indices(int n, int order) {
  if (n < 1 || order < 0) throw DomainError("multi_indices: need n >= 1 and order >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  fill_indices(n, order, 0, cur, out);
  return out;
}

long multinomial(const MultiIndex& alpha) {
  long r = factorial(alpha.order());
  for (int a : alpha.e) r /= factorial(a);
  return r;
}

long falling_factorial(const MultiIndex& alpha, const MultiIndex& beta) {
  long r = 1;
  for (std::size_t i = 0; i < alpha.e.size(); ++i) {
    for (int t = 0; t < beta.e[i]; ++t) r *= (alpha.e[i] - t);
  }
  return r;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string to_string(const MultiIndex& alpha) {
  std::string s = "(";
  for (std::size_t i = 0; i < alpha.e.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(alpha.e[i]);
  }
  return s + ")";
}

}  // namespace ltrace
