#pragma once

#include <gmpxx.h>

#include <string>

namespace sap {

using Rat = mpq_class;

// mpq_class(num, den) does not reduce the fraction; arithmetic assumes
// canonical operands. Build literals through this.
inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// base^exp for nonnegative integer exponents, exact.
inline Rat rat_pow(const Rat& base, unsigned long exp) {
  Rat r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  r.canonicalize();
  return r;
}

inline double to_double(const Rat& r) { return r.get_d(); }

inline std::string to_string(const Rat& r) { return r.get_str(); }

}  // namespace sap
