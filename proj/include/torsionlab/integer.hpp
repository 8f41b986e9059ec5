#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "torsionlab/error.hpp"

namespace torsionlab {

using Integer = mpz_class;

inline Integer from_int(std::int64_t v) {
  Integer r;
  mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
  return r;
}

inline std::string to_decimal(const Integer& v) { return v.get_str(10); }

inline Integer parse_integer(const std::string& s) {
  Integer r;
  const char* digits = s.c_str();
  if (*digits == '+') ++digits;
  if (s.empty() || mpz_set_str(r.get_mpz_t(), digits, 10) != 0)
    throw Error(Errc::InvalidInput, "not a decimal integer: '" + s + "'");
  return r;
}

inline int sign(const Integer& v) { return sgn(v); }

/// Natural log of |v| for arbitrarily large v; -inf for zero.
inline double log_abs(const Integer& v) {
  if (v == 0) return -INFINITY;
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

inline long double to_long_double(const Integer& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) return static_cast<long double>(v.get_si());
  Integer mag = abs(v);
  const auto bits = static_cast<long>(mpz_sizeinbase(mag.get_mpz_t(), 2));
  Integer top;
  mpz_tdiv_q_2exp(top.get_mpz_t(), mag.get_mpz_t(), static_cast<mp_bitcnt_t>(bits - 64));
  long double r = std::ldexp(static_cast<long double>(mpz_get_ui(top.get_mpz_t())),
                             static_cast<int>(bits - 64));
  return v < 0 ? -r : r;
}

}  // namespace torsionlab
