#pragma once

#include <map>
#include <string>
#include <vector>

#include "pbundle/homog.hpp"

namespace pbundle {

struct Twist {
  enum class Kind { trivial, torsion, nontorsion };
  Kind kind = Kind::trivial;
  int order = 1;      // torsion only
  std::string label;  // nontorsion only
};

struct Summand {
  int rank = 1;
  Twist twist;
};

// Product of formal transition symbols; exponents reduced by the symbol orders.
using GroupElem = std::map<std::string, long>;

class TwistGroup {
 public:
  void add(const std::string& name, int order) { orders_[name] = order; }
  bool has(const std::string& name) const { return orders_.count(name) != 0; }
  GroupElem reduce(GroupElem e) const;
  GroupElem multiply(const GroupElem& a, const GroupElem& b) const;
  GroupElem power(const GroupElem& a, long k) const;
  const std::map<std::string, int>& orders() const { return orders_; }

 private:
  std::map<std::string, int> orders_;  // 0 = free
};

std::string to_string(const GroupElem& g);

struct BundleDescriptor {
  std::vector<Summand> summands;

  void validate() const;
  int total_rank() const;
  int block_offset(int b) const;
  int block_of_var(int i) const;
  bool all_trivial() const;
  // Name of the formal transition symbol of block b, empty for trivial twists.
  std::string symbol(int b) const;
  TwistGroup group() const;
};

// Ranks of indecomposable summands, sorted in decreasing order.
using Decomposition = std::vector<int>;

Decomposition atiyah_tensor(int r, int s);
Decomposition sym_decompose(int r, int d);
Decomposition sym_decompose_sum(const BundleDescriptor& desc, int d);

// Block-diagonal transition data: unipotent Atiyah blocks plus one formal scalar per block.
template <FieldScalar K>
struct TransitionMatrix {
  Matrix<Laurent<K>> unipotent;
  std::vector<GroupElem> block_scalar;
  BundleDescriptor desc;
};

template <FieldScalar K>
TransitionMatrix<K> transition_matrix(const BundleDescriptor& desc, const CurvePtr<K>& c) {
  desc.validate();
  int n = desc.total_rank();
  Laurent<K> zero(c);
  Matrix<Laurent<K>> m = Matrix<Laurent<K>>::identity(n, zero, zero.one_like());
  Laurent<K> w = omega(c);
  std::vector<GroupElem> scal;
  for (int b = 0; b < static_cast<int>(desc.summands.size()); ++b) {
    int off = desc.block_offset(b);
    for (int i = 0; i + 1 < desc.summands[b].rank; ++i) m(off + i, off + i + 1) = w;
    GroupElem g;
    if (!desc.symbol(b).empty()) g[desc.symbol(b)] = 1;
    scal.push_back(g);
  }
  return {m, scal, desc};
}

// Matrix of F -> (Sym^d M)(F) in the monomial basis monomials(n, d).
template <class R>
Matrix<R> sym_power_matrix(const Matrix<R>& m, int d) {
  int n = m.rows();
  auto basis = monomials(n, d);
  std::map<Exponent, int> index;
  for (int i = 0; i < static_cast<int>(basis.size()); ++i) index[basis[i]] = i;
  R zero = m(0, 0).zero_like();
  Matrix<R> s(static_cast<int>(basis.size()), static_cast<int>(basis.size()), zero);
  for (int col = 0; col < static_cast<int>(basis.size()); ++col) {
    auto img = sym_action(m, HomogPoly<R>::monomial(basis[col], zero.one_like()));
    for (const auto& [u, c] : img.terms()) s(index.at(u), col) = c;
  }
  return s;
}

// Partition of the Jordan type of Sym^d M read off the ranks of (Sym^d M - I)^j.
template <class R>
Decomposition jordan_type_oracle(const Matrix<R>& m, int d) {
  int n = m.rows();
  R zero = m(0, 0).zero_like();
  Matrix<R> id = Matrix<R>::identity(n, zero, zero.one_like());
  Matrix<R> nil = m - id, p = nil;
  for (int i = 1; i < n; ++i) p = p * nil;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!p(i, j).is_zero()) throw std::invalid_argument("jordan_type_oracle needs a unipotent matrix");
  Matrix<R> s = sym_power_matrix(m, d);
  int size = s.rows();
  Matrix<R> big = s - Matrix<R>::identity(size, zero, zero.one_like());
  std::vector<int> ranks{size};
  Matrix<R> pw = big;
  while (ranks.back() > 0) {
    ranks.push_back(rank(pw));
    if (ranks.back() == ranks[ranks.size() - 2]) throw std::logic_error("rank sequence stalled");
    pw = pw * big;
  }
  Decomposition out;
  ranks.push_back(0);
  for (std::size_t j = 1; j + 1 < ranks.size(); ++j) {
    int at_least_j = ranks[j - 1] - ranks[j];
    int at_least_j1 = ranks[j] - ranks[j + 1];
    for (int k = 0; k < at_least_j - at_least_j1; ++k) out.push_back(static_cast<int>(j));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace pbundle
