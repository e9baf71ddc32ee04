#include "pbundle/homog.hpp"

namespace pbundle {

namespace {

void fill(int n, int d, Exponent& cur, int pos, std::vector<Exponent>& out) {
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int a = 0; a <= d; ++a) {
    cur[pos] = a;
    fill(n, d - a, cur, pos + 1, out);
  }
}

}  // namespace

std::vector<Exponent> monomials(int n, int d) {
  std::vector<Exponent> out;
  if (n <= 0 || d < 0) return out;
  Exponent cur(n, 0);
  fill(n, d, cur, 0, out);
  return out;
}

std::string exponent_to_string(const Exponent& u) {
  std::string s = "(";
  for (std::size_t i = 0; i < u.size(); ++i) s += (i ? "," : "") + std::to_string(u[i]);
  return s + ")";
}

std::optional<OmegaCoeff> whichcoeffs(const Exponent& u, const Exponent& v) {
  if (u.size() != v.size() || exponent_degree(u) != exponent_degree(v))
    throw std::invalid_argument("whichcoeffs: exponent vectors of different shape");
  // c_j copies of t_{j+1} turn into t_j along the walk from v to u.
  OmegaCoeff out{1, 0};
  int acc = 0;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    acc += u[j] - v[j];
    if (acc < 0 || acc > v[j + 1]) return std::nullopt;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), v[j + 1], acc);
    out.coeff *= b;
    out.power += acc;
  }
  return out;
}

namespace detail {

std::vector<std::pair<std::string, Exponent>> split_homog_terms(std::string_view s, int nvars) {
  std::vector<std::pair<std::string, Exponent>> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto number = [&]() -> int {
    std::size_t st = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (st == i) throw std::invalid_argument("expected a number in polynomial '" + std::string(s) + "'");
    return std::stoi(std::string(s.substr(st, i - st)));
  };
  skip();
  if (s.substr(i) == "0") return out;
  bool first = true;
  while (true) {
    skip();
    if (i >= s.size()) break;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
      neg = s[i] == '-';
      ++i;
      skip();
    } else if (!first) {
      throw std::invalid_argument("expected '+' between terms in '" + std::string(s) + "'");
    }
    first = false;
    std::string coeff = "1";
    if (i < s.size() && s[i] == '[') {
      int depth = 0;
      std::size_t st = i + 1;
      for (; i < s.size(); ++i) {
        if (s[i] == '[') ++depth;
        if (s[i] == ']' && --depth == 0) break;
      }
      if (i >= s.size()) throw std::invalid_argument("unbalanced '[' in '" + std::string(s) + "'");
      coeff = std::string(s.substr(st, i - st));
      ++i;
    }
    if (neg) coeff = "-(" + coeff + ")";
    Exponent u(nvars, 0);
    while (true) {
      skip();
      if (i < s.size() && s[i] == '*') {
        ++i;
        continue;
      }
      if (i >= s.size() || s[i] != 't') break;
      ++i;
      int var = number();
      if (var < 0 || var >= nvars) throw std::invalid_argument("variable t" + std::to_string(var) + " out of range");
      int e = 1;
      skip();
      if (i < s.size() && s[i] == '^') {
        ++i;
        skip();
        e = number();
      }
      u[var] += e;
    }
    out.emplace_back(std::move(coeff), std::move(u));
  }
  return out;
}

}  // namespace detail

}  // namespace pbundle
