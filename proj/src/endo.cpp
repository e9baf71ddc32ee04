#include "pbundle/endo.hpp"

namespace pbundle {

std::string to_string(CommonZeroStatus s) {
  switch (s) {
    case CommonZeroStatus::proved_none: return "proved-none";
    case CommonZeroStatus::found: return "found";
    case CommonZeroStatus::unknown: return "unknown";
  }
  return "unknown";
}

EndoCandidate<Fp> char_p_atiyah_endo(std::uint32_t p, long lambda, long multiplier) {
  if (p < 5 || !is_prime(p)) throw std::invalid_argument("char_p_atiyah_endo needs a prime p >= 5");
  long q = multiplier;
  while (q > 1 && q % p == 0) q /= p;
  if (multiplier < static_cast<long>(p) || q != 1)
    throw std::invalid_argument("multiplier must be a positive power of p");
  FpField f(p);
  auto c = make_curve(f, f.from_int(lambda));
  int d = static_cast<int>(multiplier);
  // (t1 + w t0)^d = t1^d + w^d t0^d in characteristic p.
  auto split = split_charts(pow(omega(c), d));
  if (split.omega_coeff.is_zero())
    throw std::invalid_argument("construction degenerates: omega coefficient of w^d vanishes");
  BundleDescriptor desc{{Summand{2, {}}}};
  Laurent<Fp> one = Laurent<Fp>::integer(c, 1);
  Laurent<Fp> cst = Laurent<Fp>::constant(c, split.omega_coeff);
  using H = HomogPoly<Laurent<Fp>>;
  H t0d = H::monomial({d, 0}, one), t1d = H::monomial({0, d}, one);
  EndoCandidate<Fp> e{c, desc, d, {one, {}}, {{one, {}}}, {}, {}};
  e.F = {t0d.scaled(cst), t1d - t0d.scaled(split.u_part)};
  e.G = {t0d.scaled(cst), t1d + t0d.scaled(split.v_part)};
  return e;
}

}  // namespace pbundle
