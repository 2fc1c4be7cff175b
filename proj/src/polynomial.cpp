#include "mproots/polynomial.hpp"

#include <gmp.h>

#include <algorithm>
#include <string>

namespace mproots {

Polynomial::Polynomial(std::vector<MPReal> coeffs_low_to_high)
    : coeffs_(std::move(coeffs_low_to_high)) {
  if (coeffs_.size() < 2)
    throw degenerate_polynomial_error("polynomial needs degree >= 1");
  if (coeffs_.back().is_zero())
    throw degenerate_polynomial_error("leading coefficient is zero");
  // One shared context: widen everything to the widest coefficient.
  mpfr_prec_t bits = 0;
  for (const auto& c : coeffs_) bits = std::max(bits, c.bits());
  for (auto& c : coeffs_)
    if (c.bits() != bits) c = convert(c, PrecisionContext{bits});
}

MonicPolynomial::MonicPolynomial(std::vector<MPReal> coeffs, long degree)
    : coeffs_(std::move(coeffs)), degree_(degree) {
  if (degree_ < 1 || coeffs_.size() != static_cast<size_t>(degree_))
    throw degenerate_polynomial_error("monic coefficient count != degree");
}

PrecisionContext MonicPolynomial::context() const {
  return coeffs_.front().context();
}

MonicPolynomial make_monic(const Polynomial& p) {
  const MPReal& an = p.coeffs().back();
  if (an.is_zero())
    throw degenerate_polynomial_error("leading coefficient is zero");
  std::vector<MPReal> c;
  c.reserve(static_cast<size_t>(p.degree()));
  for (long i = 0; i < p.degree(); ++i) c.push_back(p.coeff(i) / an);
  return MonicPolynomial(std::move(c), p.degree());
}

static MPComplex horner(const std::vector<MPReal>& coeffs, bool implicit_lead,
                        long degree, const MPComplex& z) {
  PrecisionContext ctx{std::max(z.bits(), coeffs.front().bits())};
  MPComplex w(ctx);
  long top;
  if (implicit_lead) {
    mpfr_set_si(w.re().raw(), 1, MPFR_RNDN);
    top = degree - 1;
  } else {
    mpfr_set(w.re().raw(), coeffs[static_cast<size_t>(degree)].raw(), MPFR_RNDN);
    top = degree - 1;
  }
  MPReal t(ctx);
  for (long i = top; i >= 0; --i) {
    // w = w*z + c_i  (c_i real)
    mpfr_fmms(t.raw(), w.re().raw(), z.re().raw(), w.im().raw(), z.im().raw(), MPFR_RNDN);
    mpfr_fmma(w.im().raw(), w.re().raw(), z.im().raw(), w.im().raw(), z.re().raw(), MPFR_RNDN);
    mpfr_add(w.re().raw(), t.raw(), coeffs[static_cast<size_t>(i)].raw(), MPFR_RNDN);
  }
  return w;
}

MPComplex eval(const Polynomial& p, const MPComplex& z) {
  return horner(p.coeffs(), false, p.degree(), z);
}

MPComplex eval(const MonicPolynomial& q, const MPComplex& z) {
  return horner(q.coeffs(), true, q.degree(), z);
}

std::pair<MPComplex, MPComplex> eval_with_derivative(const Polynomial& p,
                                                     const MPComplex& z) {
  PrecisionContext ctx{std::max(z.bits(), p.context().bits)};
  MPComplex w(ctx), d(ctx);
  mpfr_set(w.re().raw(), p.coeffs().back().raw(), MPFR_RNDN);
  MPReal t(ctx), u(ctx);
  for (long i = p.degree() - 1; i >= 0; --i) {
    // d = d*z + w
    mpfr_fmms(t.raw(), d.re().raw(), z.re().raw(), d.im().raw(), z.im().raw(), MPFR_RNDN);
    mpfr_fmma(u.raw(), d.re().raw(), z.im().raw(), d.im().raw(), z.re().raw(), MPFR_RNDN);
    mpfr_add(d.re().raw(), t.raw(), w.re().raw(), MPFR_RNDN);
    mpfr_add(d.im().raw(), u.raw(), w.im().raw(), MPFR_RNDN);
    // w = w*z + a_i
    mpfr_fmms(t.raw(), w.re().raw(), z.re().raw(), w.im().raw(), z.im().raw(), MPFR_RNDN);
    mpfr_fmma(w.im().raw(), w.re().raw(), z.im().raw(), w.im().raw(), z.re().raw(), MPFR_RNDN);
    mpfr_add(w.re().raw(), t.raw(), p.coeff(i).raw(), MPFR_RNDN);
  }
  return {std::move(w), std::move(d)};
}

WilkinsonProblem wilkinson(long n, PrecisionContext ctx) {
  if (n < 1) throw degenerate_polynomial_error("wilkinson degree must be >= 1");
  // Exact integer expansion of prod(x - i).
  std::vector<mpz_t> c(static_cast<size_t>(n) + 1);
  for (auto& z : c) mpz_init(z);
  mpz_set_ui(c[0], 1);
  for (long i = 1; i <= n; ++i) {
    // multiply by (x - i): new c_k = c_{k-1} - i*c_k
    for (long k = i; k >= 1; --k) {
      mpz_mul_si(c[static_cast<size_t>(k)], c[static_cast<size_t>(k)], -i);
      mpz_add(c[static_cast<size_t>(k)], c[static_cast<size_t>(k)],
              c[static_cast<size_t>(k - 1)]);
    }
    mpz_mul_si(c[0], c[0], -i);
  }
  std::vector<MPReal> coeffs;
  coeffs.reserve(c.size());
  bool exact = true;
  for (auto& z : c) {
    MPReal r(ctx);
    if (mpfr_set_z(r.raw(), z, MPFR_RNDN) != 0) exact = false;
    coeffs.push_back(std::move(r));
  }
  for (auto& z : c) mpz_clear(z);
  if (!exact)
    throw insufficient_precision_error(
        "wilkinson(" + std::to_string(n) + ") coefficients need more than " +
        std::to_string(static_cast<long>(ctx.bits)) + " bits");
  ReferenceRoots roots{{}, RootProvenance::analytic};
  roots.roots.reserve(static_cast<size_t>(n));
  for (long i = 1; i <= n; ++i)
    roots.roots.emplace_back(MPReal::from_long(i, ctx), MPReal(ctx));
  return WilkinsonProblem{Polynomial(std::move(coeffs)), std::move(roots)};
}

// Newton's identities with power sums s_m = n/(m+1) (even m), 0 (odd m):
// k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} s_i, a_{n-k} = (-1)^k e_k.
// Odd-k terms vanish identically, so odd coefficients are exact zeros.
static std::vector<MPReal> chebyshev_coeffs_at(long n, PrecisionContext gen) {
  std::vector<MPReal> e(static_cast<size_t>(n) + 1, MPReal(gen));
  mpfr_set_si(e[0].raw(), 1, MPFR_RNDN);
  std::vector<MPReal> s(static_cast<size_t>(n) + 1, MPReal(gen));
  for (long m = 2; m <= n; m += 2) {
    mpfr_set_si(s[static_cast<size_t>(m)].raw(), n, MPFR_RNDN);
    mpfr_div_si(s[static_cast<size_t>(m)].raw(), s[static_cast<size_t>(m)].raw(),
                m + 1, MPFR_RNDN);
  }
  MPReal acc(gen);
  for (long k = 2; k <= n; k += 2) {
    mpfr_set_zero(acc.raw(), 1);
    for (long i = 2; i <= k; i += 2) {
      // (-1)^{i-1} = -1 for even i
      mpfr_fms(acc.raw(), e[static_cast<size_t>(k - i)].raw(),
               s[static_cast<size_t>(i)].raw(), acc.raw(), MPFR_RNDN);
      mpfr_neg(acc.raw(), acc.raw(), MPFR_RNDN);
    }
    mpfr_div_si(e[static_cast<size_t>(k)].raw(), acc.raw(), k, MPFR_RNDN);
  }
  // a_{n-k} = (-1)^k e_k; only even k survive, where the sign is +1.
  std::vector<MPReal> a(static_cast<size_t>(n) + 1, MPReal(gen));
  mpfr_set_si(a[static_cast<size_t>(n)].raw(), 1, MPFR_RNDN);
  for (long k = 2; k <= n; k += 2)
    a[static_cast<size_t>(n - k)] = e[static_cast<size_t>(k)];
  return a;
}

Polynomial chebyshev_poly(long n, PrecisionContext ctx) {
  if (n < 1) throw degenerate_polynomial_error("chebyshev degree must be >= 1");
  PrecisionContext gen{2 * ctx.bits};
  PrecisionContext chk{4 * ctx.bits};
  std::vector<MPReal> a = chebyshev_coeffs_at(n, gen);
  std::vector<MPReal> b = chebyshev_coeffs_at(n, chk);
  std::vector<MPReal> out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    MPReal r1 = convert(a[i], ctx);
    MPReal r2 = convert(b[i], ctx);
    // Relative to the coefficient itself: the whole point is catching
    // cancellation that leaves a small coefficient with few correct digits.
    MPReal tol = ldexp2(max(abs(r1), abs(r2)),
                        -static_cast<long>(ctx.bits) + 3);
    if (abs(r1 - r2) > tol)
      throw insufficient_precision_error(
          "chebyshev(" + std::to_string(n) +
          ") coefficient cancellation exceeds " +
          std::to_string(static_cast<long>(ctx.bits)) + " bits");
    out.push_back(std::move(r1));
  }
  return Polynomial(std::move(out));
}

MPReal limit_curve_residual(const MPComplex& z) {
  PrecisionContext ctx = z.context();
  MPComplex one(MPReal::from_long(1, ctx), MPReal(ctx));
  MPComplex zp = z + one;
  MPComplex zm = z - one;
  if ((zp.re().is_zero() && zp.im().is_zero()) ||
      (zm.re().is_zero() && zm.im().is_zero()))
    throw domain_error("limit curve has branch points at z = +-1");
  MPComplex half_zp(ldexp2(zp.re(), -1), ldexp2(zp.im(), -1));
  MPComplex half_zm(ldexp2(zm.re(), -1), ldexp2(zm.im(), -1));
  MPComplex w = half_zp * clog(zp) - half_zm * clog(zm);
  MPReal two = MPReal::from_long(2, ctx);
  return abs(exp(w.re()) - two);
}

} // namespace mproots
