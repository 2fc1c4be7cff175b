#ifndef MPROOTS_MPREAL_HPP
#define MPROOTS_MPREAL_HPP

#include <mpfr.h>

#include <cmath>
#include <string>
#include <utility>

#include "mproots/errors.hpp"

namespace mproots {

// Mantissa length in bits; every scalar created under a context rounds to
// nearest at exactly this many bits.
struct PrecisionContext {
  mpfr_prec_t bits;
};

constexpr mpfr_prec_t kMinPrecisionBits = 24;

inline PrecisionContext with_precision(long bits) {
  if (bits < kMinPrecisionBits)
    throw invalid_precision_error("precision below " +
                                  std::to_string(kMinPrecisionBits) +
                                  " bits: " + std::to_string(bits));
  return PrecisionContext{static_cast<mpfr_prec_t>(bits)};
}

// Arbitrary-precision real, precision carried per value. Binary operations
// produce a result at the wider of the two operand precisions, rounded to
// nearest (ties to even). Values are immutable-in-spirit: nothing here
// mutates an operand, so sharing across threads is safe.
class MPReal {
 public:
  explicit MPReal(PrecisionContext ctx) {
    mpfr_init2(v_, ctx.bits);
    mpfr_set_zero(v_, 1);
  }
  MPReal(const MPReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  MPReal(MPReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  MPReal& operator=(const MPReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  MPReal& operator=(MPReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MPReal() { mpfr_clear(v_); }

  static MPReal from_double(double d, PrecisionContext ctx) {
    MPReal r(ctx);
    mpfr_set_d(r.v_, d, MPFR_RNDN);
    return r;
  }
  static MPReal from_long(long n, PrecisionContext ctx) {
    MPReal r(ctx);
    mpfr_set_si(r.v_, n, MPFR_RNDN);
    return r;
  }
  // Parses a plain decimal string (no precision tag), rounding at ctx.
  static MPReal from_string(const std::string& s, PrecisionContext ctx) {
    MPReal r(ctx);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw parse_error("bad decimal literal: " + s, 0);
    return r;
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  mpfr_prec_t bits() const { return mpfr_get_prec(v_); }
  PrecisionContext context() const { return PrecisionContext{bits()}; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  MPReal& operator+=(const MPReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MPReal& operator-=(const MPReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MPReal& operator*=(const MPReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MPReal& operator/=(const MPReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend MPReal operator+(const MPReal& a, const MPReal& b) {
    MPReal r(wider(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend MPReal operator-(const MPReal& a, const MPReal& b) {
    MPReal r(wider(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend MPReal operator*(const MPReal& a, const MPReal& b) {
    MPReal r(wider(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend MPReal operator/(const MPReal& a, const MPReal& b) {
    MPReal r(wider(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend MPReal operator-(const MPReal& a) {
    MPReal r(a.context()); mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r;
  }

  friend bool operator==(const MPReal& a, const MPReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const MPReal& a, const MPReal& b) { return !(a == b); }
  friend bool operator<(const MPReal& a, const MPReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const MPReal& a, const MPReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const MPReal& a, const MPReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const MPReal& a, const MPReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

 private:
  static PrecisionContext wider(const MPReal& a, const MPReal& b) {
    return PrecisionContext{std::max(a.bits(), b.bits())};
  }
  mpfr_t v_;
};

// Rounds x to nearest at the target precision; widening is exact.
inline MPReal convert(const MPReal& x, PrecisionContext target) {
  MPReal r(target);
  mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

inline MPReal abs(const MPReal& x) {
  MPReal r(x.context()); mpfr_abs(r.raw(), x.raw(), MPFR_RNDN); return r;
}
inline MPReal sqrt(const MPReal& x) {
  MPReal r(x.context()); mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN); return r;
}
inline MPReal nth_root(const MPReal& x, unsigned long k) {
  MPReal r(x.context()); mpfr_rootn_ui(r.raw(), x.raw(), k, MPFR_RNDN); return r;
}
inline MPReal exp(const MPReal& x) {
  MPReal r(x.context()); mpfr_exp(r.raw(), x.raw(), MPFR_RNDN); return r;
}
inline MPReal log(const MPReal& x) {
  MPReal r(x.context()); mpfr_log(r.raw(), x.raw(), MPFR_RNDN); return r;
}
inline MPReal sin(const MPReal& x) {
  MPReal r(x.context()); mpfr_sin(r.raw(), x.raw(), MPFR_RNDN); return r;
}
inline MPReal cos(const MPReal& x) {
  MPReal r(x.context()); mpfr_cos(r.raw(), x.raw(), MPFR_RNDN); return r;
}
inline MPReal hypot(const MPReal& a, const MPReal& b) {
  MPReal r(PrecisionContext{std::max(a.bits(), b.bits())});
  mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
inline MPReal atan2(const MPReal& y, const MPReal& x) {
  MPReal r(PrecisionContext{std::max(y.bits(), x.bits())});
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}
inline MPReal const_pi(PrecisionContext ctx) {
  MPReal r(ctx); mpfr_const_pi(r.raw(), MPFR_RNDN); return r;
}
// x * 2^e, exact.
inline MPReal ldexp2(const MPReal& x, long e) {
  MPReal r(x.context()); mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN); return r;
}
inline MPReal max(const MPReal& a, const MPReal& b) { return a >= b ? a : b; }
inline MPReal min(const MPReal& a, const MPReal& b) { return a <= b ? a : b; }

// Complex value over a pair of reals at a shared context.
class MPComplex {
 public:
  explicit MPComplex(PrecisionContext ctx) : re_(ctx), im_(ctx) {}
  MPComplex(MPReal re, MPReal im) : re_(std::move(re)), im_(std::move(im)) {}
  static MPComplex from_double(double re, double im, PrecisionContext ctx) {
    return MPComplex(MPReal::from_double(re, ctx), MPReal::from_double(im, ctx));
  }

  const MPReal& re() const { return re_; }
  const MPReal& im() const { return im_; }
  MPReal& re() { return re_; }
  MPReal& im() { return im_; }
  mpfr_prec_t bits() const { return std::max(re_.bits(), im_.bits()); }
  PrecisionContext context() const { return PrecisionContext{bits()}; }
  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  friend MPComplex operator+(const MPComplex& a, const MPComplex& b) {
    return MPComplex(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend MPComplex operator-(const MPComplex& a, const MPComplex& b) {
    return MPComplex(a.re_ - b.re_, a.im_ - b.im_);
  }
  friend MPComplex operator-(const MPComplex& a) {
    return MPComplex(-a.re_, -a.im_);
  }
  friend MPComplex operator*(const MPComplex& a, const MPComplex& b) {
    PrecisionContext ctx{std::max(a.bits(), b.bits())};
    MPComplex r(ctx);
    mpfr_fmms(r.re().raw(), a.re_.raw(), b.re_.raw(), a.im_.raw(), b.im_.raw(), MPFR_RNDN);
    mpfr_fmma(r.im().raw(), a.re_.raw(), b.im_.raw(), a.im_.raw(), b.re_.raw(), MPFR_RNDN);
    return r;
  }
  friend MPComplex operator/(const MPComplex& a, const MPComplex& b);

  friend bool operator==(const MPComplex& a, const MPComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const MPComplex& a, const MPComplex& b) { return !(a == b); }

 private:
  MPReal re_, im_;
};

inline MPComplex conj(const MPComplex& z) { return MPComplex(z.re(), -z.im()); }

// |z| without premature overflow.
inline MPReal cabs(const MPComplex& z) { return hypot(z.re(), z.im()); }

// Smith-style scaled division: never forms re^2+im^2, so it survives the
// extreme exponents of Wilkinson-sized operands.
inline MPComplex operator/(const MPComplex& a, const MPComplex& b) {
  PrecisionContext ctx{std::max(a.bits(), b.bits())};
  MPComplex r(ctx);
  MPReal t(ctx), d(ctx);
  if (abs(b.re()) >= abs(b.im())) {
    // t = bi/br, d = br + bi*t
    mpfr_div(t.raw(), b.im().raw(), b.re().raw(), MPFR_RNDN);
    mpfr_fma(d.raw(), b.im().raw(), t.raw(), b.re().raw(), MPFR_RNDN);
    mpfr_fma(r.re().raw(), a.im().raw(), t.raw(), a.re().raw(), MPFR_RNDN);
    mpfr_fms(r.im().raw(), a.re().raw(), t.raw(), a.im().raw(), MPFR_RNDN);
    mpfr_neg(r.im().raw(), r.im().raw(), MPFR_RNDN);
  } else {
    // t = br/bi, d = br*t + bi
    mpfr_div(t.raw(), b.re().raw(), b.im().raw(), MPFR_RNDN);
    mpfr_fma(d.raw(), b.re().raw(), t.raw(), b.im().raw(), MPFR_RNDN);
    mpfr_fma(r.re().raw(), a.re().raw(), t.raw(), a.im().raw(), MPFR_RNDN);
    mpfr_fms(r.im().raw(), a.im().raw(), t.raw(), a.re().raw(), MPFR_RNDN);
  }
  mpfr_div(r.re().raw(), r.re().raw(), d.raw(), MPFR_RNDN);
  mpfr_div(r.im().raw(), r.im().raw(), d.raw(), MPFR_RNDN);
  return r;
}

// Principal-branch complex logarithm.
inline MPComplex clog(const MPComplex& z) {
  return MPComplex(log(cabs(z)), atan2(z.im(), z.re()));
}

// Tagged decimal serialization, `<bits>:<sign><digits>e<exp>` with
// value = +-0.<digits> * 10^exp; round-trip exact.
std::string to_decimal_string(const MPReal& x);
MPReal mpreal_from_decimal_string(const std::string& s);

} // namespace mproots

#endif
