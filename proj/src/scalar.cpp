#include "pbundle/scalar.hpp"

#include <limits>

namespace pbundle {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

Fp Fp::inverse() const {
  if (v_ == 0) throw std::domain_error("division by zero");
  std::int64_t a = v_, m = p_, x0 = 1, x1 = 0;
  while (m != 0) {
    std::int64_t q = a / m;
    std::int64_t t = a - q * m;
    a = m;
    m = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  return Fp(x0, p_);
}

static mpq_class parse_rational(std::string_view s) {
  std::string str(s);
  auto b = str.find_first_not_of(" \t");
  auto e = str.find_last_not_of(" \t");
  if (b == std::string::npos) throw std::invalid_argument("empty scalar");
  str = str.substr(b, e - b + 1);
  if (!str.empty() && str[0] == '+') str.erase(0, 1);
  mpq_class q;
  if (q.set_str(str, 10) != 0) throw std::invalid_argument("bad scalar '" + str + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
  q.canonicalize();
  return q;
}

Q QField::parse(std::string_view s) const { return Q(parse_rational(s)); }

FpField::FpField(std::uint32_t p) : p_(p) {
  if (p > static_cast<std::uint32_t>(std::numeric_limits<std::int32_t>::max()) || !is_prime(p))
    throw std::invalid_argument("modulus must be a prime below 2^31");
}

Fp FpField::from_mpz(const mpz_class& v) const {
  mpz_class r = v % p_;
  if (r < 0) r += p_;
  return Fp(r.get_si(), p_);
}

Fp FpField::parse(std::string_view s) const {
  mpq_class q = parse_rational(s);
  Fp den = from_mpz(q.get_den());
  if (den.is_zero()) throw std::invalid_argument("denominator divisible by p");
  return from_mpz(q.get_num()) / den;
}

}  // namespace pbundle
