#include "bigmath.hpp"

#include <sstream>

#include "error.hpp"

namespace derange {

BigInt factorial(std::uint64_t n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt double_factorial_odd(std::uint64_t n) {
  if (n == 0) return 1;
  BigInt r;
  mpz_2fac_ui(r.get_mpz_t(), 2 * n - 1);
  return r;
}

BigInt binomial(std::uint64_t n, std::int64_t k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, static_cast<std::uint64_t>(k));
  return r;
}

BigRat make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) fail_invalid("rational denominator must be nonzero");
  BigRat q(num, den);
  q.canonicalize();
  return q;
}

Float50 to_float(const BigInt& v) {
  // Decimal string round-trip is exact.
  return Float50(v.get_str());
}

Float50 to_float(const BigRat& v) {
  return to_float(BigInt(v.get_num())) / to_float(BigInt(v.get_den()));
}

std::string to_string(const BigInt& v) { return v.get_str(); }

std::string render(const Float50& v, unsigned digits) {
  if (digits == 0) digits = 1;
  std::string s = v.str(digits, std::ios_base::fmtflags(0));
  return s;
}

BigInt round_to_integer(const Float50& v) {
  Float50 shifted = v < 0 ? v - Float50(0.5) : v + Float50(0.5);
  Float50 t = boost::multiprecision::trunc(shifted);
  std::string digits = t.str(0, std::ios_base::fixed);
  const std::size_t dot = digits.find('.');
  if (dot != std::string::npos) digits.erase(dot);
  if (digits.empty() || digits == "-") digits = "0";
  return BigInt(digits);
}

}  // namespace derange
