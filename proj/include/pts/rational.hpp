#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <string_view>

namespace pts {

// Exact arbitrary-precision rational; always kept canonical. The move
// operations are noexcept so that containers move elements when they grow
// (mpq_class only allocates there, and running out of memory is fatal anyway).
class Rational : public mpq_class {
 public:
  using mpq_class::mpq_class;
  using mpq_class::operator=;
  Rational() = default;
  Rational(const mpq_class& q) : mpq_class(q) {}
  Rational(mpq_class&& q) noexcept : mpq_class(std::move(q)) {}
  Rational(const Rational&) = default;
  Rational(Rational&& o) noexcept : mpq_class(std::move(static_cast<mpq_class&>(o))) {}
  Rational& operator=(const Rational&) = default;
  Rational& operator=(Rational&& o) noexcept {
    swap(o);
    return *this;
  }
};

// Accepts "p/q", integers and exact decimals ("0.125", "-3", "1e-2" is not accepted).
Rational parse_rational(std::string_view text);

// "p/q" or "p" when the denominator is 1.
std::string to_string(const Rational& r);

// n/d in canonical form.
inline Rational make_rational(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

}  // namespace pts
