#include "mproots/mpreal.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace mproots {

static size_t roundtrip_digits(mpfr_prec_t bits) {
  // ceil(bits*log10(2)) + 2 digits guarantee an exact decimal round-trip.
  return static_cast<size_t>(
             std::ceil(static_cast<double>(bits) * 0.30102999566398119521)) + 2;
}

std::string to_decimal_string(const MPReal& x) {
  if (!x.is_finite())
    throw domain_error("cannot serialize non-finite value");
  mpfr_exp_t e = 0;
  char* digits = mpfr_get_str(nullptr, &e, 10, roundtrip_digits(x.bits()),
                              x.raw(), MPFR_RNDN);
  std::string out = std::to_string(static_cast<long>(x.bits()));
  out += ':';
  out += digits;
  out += 'e';
  out += std::to_string(static_cast<long>(e));
  mpfr_free_str(digits);
  return out;
}

MPReal mpreal_from_decimal_string(const std::string& s) {
  size_t colon = s.find(':');
  size_t epos = s.rfind('e');
  if (colon == std::string::npos || epos == std::string::npos || epos < colon)
    throw parse_error("malformed tagged decimal: " + s, 0);
  long bits = 0;
  try {
    bits = std::stol(s.substr(0, colon));
  } catch (const std::exception&) {
    throw parse_error("bad precision tag: " + s, 0);
  }
  PrecisionContext ctx = with_precision(bits);
  std::string digits = s.substr(colon + 1, epos - colon - 1);
  std::string exp10 = s.substr(epos + 1);
  if (digits.empty() || exp10.empty())
    throw parse_error("malformed tagged decimal: " + s, 0);
  // Reassemble as <sign>0.<digits>e<exp> for mpfr_set_str.
  std::string literal;
  if (digits[0] == '-' || digits[0] == '+') {
    literal += digits[0];
    digits.erase(0, 1);
  }
  literal += "0.";
  literal += digits;
  literal += 'e';
  literal += exp10;
  MPReal r(ctx);
  if (mpfr_set_str(r.raw(), literal.c_str(), 10, MPFR_RNDN) != 0)
    throw parse_error("bad decimal payload: " + s, 0);
  return r;
}

} // namespace mproots
