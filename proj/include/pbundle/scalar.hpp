#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pbundle {

class QField;
class FpField;

// Rationals with arbitrary-precision numerator and denominator.
class Q {
 public:
  using field_type = QField;

  Q() = default;
  explicit Q(long v) : v_(v) {}
  explicit Q(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  const mpq_class& value() const { return v_; }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  Q zero_like() const { return Q(); }
  Q one_like() const { return Q(1); }
  Q inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    return Q(mpq_class(1) / v_);
  }
  std::string to_string() const { return v_.get_str(); }
  field_type field() const;

  Q operator-() const { return Q(mpq_class(-v_)); }
  Q& operator+=(const Q& o) { v_ += o.v_; return *this; }
  Q& operator-=(const Q& o) { v_ -= o.v_; return *this; }
  Q& operator*=(const Q& o) { v_ *= o.v_; return *this; }
  Q& operator/=(const Q& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Q operator+(Q a, const Q& b) { return a += b; }
  friend Q operator-(Q a, const Q& b) { return a -= b; }
  friend Q operator*(Q a, const Q& b) { return a *= b; }
  friend Q operator/(Q a, const Q& b) { return a /= b; }
  friend bool operator==(const Q& a, const Q& b) { return a.v_ == b.v_; }
  friend bool operator<(const Q& a, const Q& b) { return a.v_ < b.v_; }

 private:
  mpq_class v_;
};

// Element of Z/pZ. The modulus travels with the value; p == 0 marks a
// context-free zero that adopts the modulus of whatever it meets.
class Fp {
 public:
  using field_type = FpField;

  Fp() = default;
  Fp(std::int64_t v, std::uint32_t p) : p_(p) {
    if (p == 0) throw std::invalid_argument("Fp needs a modulus");
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    v_ = static_cast<std::uint32_t>(r);
  }

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }
  Fp zero_like() const { return raw(0, p_); }
  Fp one_like() const { return raw(1, p_); }
  Fp inverse() const;
  std::string to_string() const { return std::to_string(v_); }
  field_type field() const;

  Fp operator-() const { return raw(v_ == 0 ? 0 : p_ - v_, p_); }
  Fp& operator+=(const Fp& o) {
    adopt(o);
    std::uint64_t s = std::uint64_t(v_) + o.v_;
    v_ = static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
    return *this;
  }
  Fp& operator-=(const Fp& o) { return *this += -o; }
  Fp& operator*=(const Fp& o) {
    adopt(o);
    v_ = p_ == 0 ? 0 : static_cast<std::uint32_t>(std::uint64_t(v_) * o.v_ % p_);
    return *this;
  }
  Fp& operator/=(const Fp& o) { return *this *= o.inverse(); }
  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }
  friend bool operator<(const Fp& a, const Fp& b) { return a.v_ < b.v_; }

 private:
  static Fp raw(std::uint32_t v, std::uint32_t p) {
    Fp r;
    r.v_ = v;
    r.p_ = p;
    return r;
  }
  void adopt(const Fp& o) {
    if (p_ == 0) {
      p_ = o.p_;
    } else if (o.p_ != 0 && o.p_ != p_) {
      throw std::invalid_argument("prime field mismatch");
    }
  }

  std::uint32_t v_ = 0;
  std::uint32_t p_ = 0;
};

class QField {
 public:
  using scalar = Q;
  Q from_int(long v) const { return Q(v); }
  Q from_mpz(const mpz_class& v) const { return Q(mpq_class(v)); }
  Q parse(std::string_view s) const;
  unsigned long characteristic() const { return 0; }
  std::string tag() const { return "Q"; }
  friend bool operator==(const QField&, const QField&) { return true; }
};

class FpField {
 public:
  using scalar = Fp;
  FpField() = default;
  explicit FpField(std::uint32_t p);
  Fp from_int(long v) const { return Fp(v, p_); }
  Fp from_mpz(const mpz_class& v) const;
  Fp parse(std::string_view s) const;
  unsigned long characteristic() const { return p_; }
  std::uint32_t p() const { return p_; }
  std::string tag() const { return "F" + std::to_string(p_); }
  friend bool operator==(const FpField& a, const FpField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_ = 0;
};

inline QField Q::field() const { return {}; }
inline FpField Fp::field() const { return FpField(p_); }

bool is_prime(std::uint64_t n);

template <class K>
concept FieldScalar = requires(const K a, const K b) {
  { a + b } -> std::same_as<K>;
  { a * b } -> std::same_as<K>;
  { a / b } -> std::same_as<K>;
  { a.is_zero() } -> std::same_as<bool>;
  { a.inverse() } -> std::same_as<K>;
  { a.to_string() } -> std::same_as<std::string>;
  typename K::field_type;
};

// Ring-element hooks shared with the Laurent and polynomial types.
inline Q exact_quotient(const Q& a, const Q& b) { return a / b; }
inline Fp exact_quotient(const Fp& a, const Fp& b) { return a / b; }

}  // namespace pbundle
