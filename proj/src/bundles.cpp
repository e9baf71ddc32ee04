#include "pbundle/bundles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <gmpxx.h>

namespace pbundle {

GroupElem TwistGroup::reduce(GroupElem e) const {
  for (auto it = e.begin(); it != e.end();) {
    auto o = orders_.find(it->first);
    if (o == orders_.end()) throw std::invalid_argument("unknown twist symbol '" + it->first + "'");
    if (o->second > 0) it->second = ((it->second % o->second) + o->second) % o->second;
    it = it->second == 0 ? e.erase(it) : std::next(it);
  }
  return e;
}

GroupElem TwistGroup::multiply(const GroupElem& a, const GroupElem& b) const {
  GroupElem r = a;
  for (const auto& [k, v] : b) r[k] += v;
  return reduce(std::move(r));
}

GroupElem TwistGroup::power(const GroupElem& a, long k) const {
  GroupElem r;
  for (const auto& [s, v] : a) r[s] = v * k;
  return reduce(std::move(r));
}

std::string to_string(const GroupElem& g) {
  if (g.empty()) return "1";
  std::string s;
  for (const auto& [k, v] : g) s += (s.empty() ? "" : "*") + k + "^" + std::to_string(v);
  return s;
}

void BundleDescriptor::validate() const {
  if (summands.empty()) throw std::invalid_argument("bundle has no summands");
  std::vector<std::string> labels;
  for (const auto& s : summands) {
    if (s.rank < 1) throw std::invalid_argument("summand ranks must be positive");
    if (s.twist.kind == Twist::Kind::torsion && s.twist.order < 2)
      throw std::invalid_argument("torsion orders must be at least 2");
    if (s.twist.kind == Twist::Kind::nontorsion) {
      if (s.twist.label.empty()) throw std::invalid_argument("non-torsion twists need a label");
      if (std::find(labels.begin(), labels.end(), s.twist.label) != labels.end())
        throw std::invalid_argument("duplicate twist label '" + s.twist.label + "'");
      labels.push_back(s.twist.label);
    }
  }
}

int BundleDescriptor::total_rank() const {
  int n = 0;
  for (const auto& s : summands) n += s.rank;
  return n;
}

int BundleDescriptor::block_offset(int b) const {
  int n = 0;
  for (int i = 0; i < b; ++i) n += summands[i].rank;
  return n;
}

int BundleDescriptor::block_of_var(int i) const {
  for (int b = 0; b < static_cast<int>(summands.size()); ++b) {
    if (i < summands[b].rank) return b;
    i -= summands[b].rank;
  }
  throw std::out_of_range("variable index beyond bundle rank");
}

bool BundleDescriptor::all_trivial() const {
  return std::all_of(summands.begin(), summands.end(),
                     [](const Summand& s) { return s.twist.kind == Twist::Kind::trivial; });
}

std::string BundleDescriptor::symbol(int b) const {
  const auto& t = summands.at(b).twist;
  switch (t.kind) {
    case Twist::Kind::trivial: return "";
    case Twist::Kind::torsion: return "L" + std::to_string(b);
    case Twist::Kind::nontorsion: return t.label;
  }
  return "";
}

TwistGroup BundleDescriptor::group() const {
  TwistGroup g;
  for (int b = 0; b < static_cast<int>(summands.size()); ++b) {
    const auto& t = summands[b].twist;
    if (t.kind == Twist::Kind::torsion) g.add(symbol(b), t.order);
    if (t.kind == Twist::Kind::nontorsion) g.add(symbol(b), 0);
  }
  return g;
}

Decomposition atiyah_tensor(int r, int s) {
  if (r < 1 || s < 1) throw std::invalid_argument("ranks must be positive");
  Decomposition out;
  for (int k = r + s - 1; k >= std::abs(r - s) + 1; k -= 2) out.push_back(k);
  return out;
}

Decomposition sym_decompose(int r, int d) {
  if (r < 1 || d < 0) throw std::invalid_argument("sym_decompose needs r >= 1 and d >= 0");
  // g[k] = number of size-d multisets from {0..r-1} with sum k (q-binomial coefficients).
  int top = d * (r - 1);
  std::vector<std::vector<mpz_class>> dp(d + 1, std::vector<mpz_class>(top + 1, 0));
  dp[0][0] = 1;
  for (int val = 0; val < r; ++val)
    for (int j = 1; j <= d; ++j)
      for (int s = val; s <= top; ++s) dp[j][s] += dp[j - 1][s - val];
  const auto& g = dp[d];
  mpz_class total = 0;
  for (const auto& x : g) total += x;
  if (total > 2000000) throw std::invalid_argument("symmetric power too large");
  Decomposition out;
  for (int k = 0; 2 * k <= top; ++k) {
    mpz_class mult = g[k] - (k > 0 ? g[k - 1] : mpz_class(0));
    for (long i = 0; i < mult.get_si(); ++i) out.push_back(top - 2 * k + 1);
  }
  return out;
}

namespace {

Decomposition tensor(const Decomposition& a, const Decomposition& b) {
  Decomposition out;
  for (int x : a)
    for (int y : b)
      for (int z : atiyah_tensor(x, y)) out.push_back(z);
  return out;
}

void compositions(const std::vector<int>& ranks, std::size_t pos, int left, Decomposition cur, Decomposition& out) {
  if (pos + 1 == ranks.size()) {
    cur = tensor(cur, sym_decompose(ranks[pos], left));
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int t = left; t >= 0; --t) compositions(ranks, pos + 1, left - t, tensor(cur, sym_decompose(ranks[pos], t)), out);
}

}  // namespace

Decomposition sym_decompose_sum(const BundleDescriptor& desc, int d) {
  desc.validate();
  if (!desc.all_trivial()) throw std::invalid_argument("decomposition with non-trivial twists is not supported");
  if (d < 0) throw std::invalid_argument("degree must be non-negative");
  std::vector<int> ranks;
  for (const auto& s : desc.summands) ranks.push_back(s.rank);
  Decomposition out;
  compositions(ranks, 0, d, Decomposition{1}, out);
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace pbundle
