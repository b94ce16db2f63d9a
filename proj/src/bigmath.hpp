#ifndef DERANGE_BIGMATH_HPP
#define DERANGE_BIGMATH_HPP

#include <gmpxx.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cstdint>
#include <string>

namespace derange {

// Exact arithmetic. Counts are nonnegative by construction; ratios are
// always kept in lowest terms (mpq canonical form).
using BigInt = mpz_class;
using BigRat = mpq_class;

// 50 decimal digits of working precision. Every tolerance used by the
// verification suites is 1e-12 or coarser, so representation error is
// never the binding constraint.
using Float50 = boost::multiprecision::number<
    boost::multiprecision::cpp_dec_float<50>>;

// A rendered decimal together with an upper bound on |value - true value|.
// The bound is zero for quantities that are exact at working precision
// and is a certified truncation tail for series evaluations.
struct Decimal {
  Float50 value;
  Float50 error_bound;

  Decimal() : value(0), error_bound(0) {}
  explicit Decimal(Float50 v) : value(std::move(v)), error_bound(0) {}
  Decimal(Float50 v, Float50 err)
      : value(std::move(v)), error_bound(std::move(err)) {}
};

// n!
BigInt factorial(std::uint64_t n);

// (2n-1)!! = 1*3*...*(2n-1), with (-1)!! = 1 so the n = 0 case is usable
// as the final term of alternating perfect-matching sums.
BigInt double_factorial_odd(std::uint64_t n);

// C(n, k); zero when k is out of range so inclusion-exclusion sums need
// no boundary guards.
BigInt binomial(std::uint64_t n, std::int64_t k);

// p/q in lowest terms. q must be nonzero.
BigRat make_rational(const BigInt& num, const BigInt& den);

Float50 to_float(const BigInt& v);
Float50 to_float(const BigRat& v);

std::string to_string(const BigInt& v);

// Rendered at `digits` significant digits, shortest general form.
// Deterministic and locale independent.
std::string render(const Float50& v, unsigned digits);

// Nearest integer (ties away from zero; every use here is far from a tie).
BigInt round_to_integer(const Float50& v);

}  // namespace derange

#endif
