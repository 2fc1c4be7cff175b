#include "mproots/companion.hpp"

#include <string>

namespace mproots {

CompanionMatrix companion_matrix(const MonicPolynomial& q) {
  long n = q.degree();
  CompanionMatrix m(n, q.context());
  for (long i = 0; i + 1 < n; ++i)
    m.at(i + 1, i) = MPReal::from_long(1, q.context());
  for (long i = 0; i < n; ++i)
    m.at(i, n - 1) = -q.coeff(i);
  return m;
}

CompanionMatrix balance(const CompanionMatrix& m) {
  CompanionMatrix h = m;
  long n = h.dim();
  PrecisionContext ctx = h.context();
  MPReal point95 = MPReal::from_double(0.95, ctx);
  bool noconv = true;
  while (noconv) {
    noconv = false;
    for (long i = 0; i < n; ++i) {
      MPReal c(ctx), r(ctx);
      for (long j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs(h.at(j, i));
        r += abs(h.at(i, j));
      }
      if (c.is_zero() || r.is_zero()) continue;
      MPReal g = ldexp2(r, -1);
      MPReal s = c + r;
      long f = 0; // scale exponent, factor 2^f
      while (c < g) { ++f; c = ldexp2(c, 2); }
      g = ldexp2(r, 1);
      while (c >= g) { --f; c = ldexp2(c, -2); }
      if (ldexp2(c + r, -f) < point95 * s) {
        noconv = true;
        for (long j = 0; j < n; ++j) {
          h.at(i, j) = ldexp2(h.at(i, j), -f);
          h.at(j, i) = ldexp2(h.at(j, i), f);
        }
      }
    }
  }
  return h;
}

std::vector<MPComplex> hessenberg_qr_eigenvalues(const CompanionMatrix& m0,
                                                 long max_sweeps) {
  const long n = m0.dim();
  const PrecisionContext ctx = m0.context();
  if (n == 1) return {MPComplex(m0.at(0, 0), MPReal(ctx))};

  CompanionMatrix H = m0;
  auto h = [&H](long i, long j) { return H.at(i, j).raw(); };

  const MPReal eps =
      ldexp2(MPReal::from_long(1, ctx), -static_cast<long>(ctx.bits) + 2);
  MPReal norm(ctx);
  for (long i = 0; i < n; ++i)
    for (long j = std::max(0L, i - 1); j < n; ++j) norm += abs(H.at(i, j));

  std::vector<MPReal> wr(static_cast<size_t>(n), MPReal(ctx));
  std::vector<MPReal> wi(static_cast<size_t>(n), MPReal(ctx));

  long en = n - 1;
  long itn = max_sweeps * n;
  MPReal t(ctx); // accumulated exceptional shift
  MPReal p(ctx), q(ctx), r(ctx), s(ctx), w(ctx), x(ctx), y(ctx), zz(ctx);
  MPReal u(ctx), tmp(ctx);

  auto partial_spectrum = [&](long active_en) {
    std::vector<MPComplex> out;
    out.reserve(static_cast<size_t>(n));
    for (long i = 0; i <= active_en; ++i)
      out.emplace_back(H.at(i, i) + t, MPReal(ctx));
    for (long i = active_en + 1; i < n; ++i)
      out.emplace_back(wr[static_cast<size_t>(i)], wi[static_cast<size_t>(i)]);
    return out;
  };

  while (en >= 0) {
    long its = 0;
    const long na = en - 1, enm2 = en - 2;
    for (;;) {
      // Look for a single small subdiagonal element.
      long l = en;
      while (l > 0) {
        s = abs(H.at(l - 1, l - 1)) + abs(H.at(l, l));
        if (s.is_zero()) s = norm;
        if (abs(H.at(l, l - 1)) <= eps * s) break;
        --l;
      }
      x = H.at(en, en);
      if (l == en) {
        wr[static_cast<size_t>(en)] = x + t;
        --en;
        break;
      }
      y = H.at(na, na);
      w = H.at(en, na) * H.at(na, en);
      if (l == na) {
        p = ldexp2(y - x, -1);
        q = p * p + w;
        zz = sqrt(abs(q));
        x += t;
        if (q.sign() >= 0) {
          // real pair, stable via the larger root
          mpfr_copysign(tmp.raw(), zz.raw(), p.raw(), MPFR_RNDN);
          zz = p + tmp;
          wr[static_cast<size_t>(na)] = x + zz;
          wr[static_cast<size_t>(en)] =
              zz.is_zero() ? wr[static_cast<size_t>(na)] : x - w / zz;
        } else {
          wr[static_cast<size_t>(na)] = x + p;
          wr[static_cast<size_t>(en)] = x + p;
          wi[static_cast<size_t>(na)] = zz;
          wi[static_cast<size_t>(en)] = -zz;
        }
        en = enm2;
        break;
      }
      if (itn == 0)
        throw qr_nonconvergence_error(
            "QR failed to deflate within " + std::to_string(max_sweeps * n) +
                " double-shift sweeps",
            partial_spectrum(en));
      if (its > 0 && its % 10 == 0) {
        // exceptional shift after 10 stalled sweeps
        t += x;
        for (long i = 0; i <= en; ++i) H.at(i, i) -= x;
        s = abs(H.at(en, na)) + abs(H.at(na, enm2));
        x = MPReal::from_double(0.75, ctx) * s;
        y = x;
        w = MPReal::from_double(-0.4375, ctx) * s * s;
      }
      ++its;
      --itn;
      // Look for two consecutive small subdiagonal elements.
      long mi = enm2;
      for (;;) {
        zz = H.at(mi, mi);
        MPReal rr = x - zz;
        MPReal ss = y - zz;
        p = (rr * ss - w) / H.at(mi + 1, mi) + H.at(mi, mi + 1);
        q = H.at(mi + 1, mi + 1) - zz - rr - ss;
        r = H.at(mi + 2, mi + 1);
        s = abs(p) + abs(q) + abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (mi == l) break;
        MPReal tst = abs(p) * (abs(H.at(mi - 1, mi - 1)) + abs(zz) +
                               abs(H.at(mi + 1, mi + 1)));
        if (abs(H.at(mi, mi - 1)) * (abs(q) + abs(r)) <= eps * tst) break;
        --mi;
      }
      for (long i = mi + 2; i <= en; ++i) {
        mpfr_set_zero(h(i, i - 2), 1);
        if (i > mi + 2) mpfr_set_zero(h(i, i - 3), 1);
      }
      // Double QR step on rows/columns l..en, bulge starting at mi.
      for (long k = mi; k <= na; ++k) {
        const bool notlas = (k != na);
        if (k != mi) {
          p = H.at(k, k - 1);
          q = H.at(k + 1, k - 1);
          if (notlas)
            r = H.at(k + 2, k - 1);
          else
            mpfr_set_zero(r.raw(), 1);
          x = abs(p) + abs(q) + abs(r);
          if (x.is_zero()) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = sqrt(p * p + q * q + r * r);
        mpfr_copysign(s.raw(), s.raw(), p.raw(), MPFR_RNDN);
        if (k != mi) {
          H.at(k, k - 1) = -(s * x);
        } else if (l != mi) {
          mpfr_neg(h(k, k - 1), h(k, k - 1), MPFR_RNDN);
        }
        p += s;
        x = p / s;
        y = q / s;
        zz = r / s;
        q /= p;
        r /= p;
        const long cmax = std::min(en, k + 3);
        if (!notlas) {
          for (long j = k; j <= en; ++j) {
            mpfr_fma(u.raw(), q.raw(), h(k + 1, j), h(k, j), MPFR_RNDN);
            mpfr_mul(tmp.raw(), u.raw(), x.raw(), MPFR_RNDN);
            mpfr_sub(h(k, j), h(k, j), tmp.raw(), MPFR_RNDN);
            mpfr_mul(tmp.raw(), u.raw(), y.raw(), MPFR_RNDN);
            mpfr_sub(h(k + 1, j), h(k + 1, j), tmp.raw(), MPFR_RNDN);
          }
          for (long i = l; i <= cmax; ++i) {
            mpfr_fmma(u.raw(), x.raw(), h(i, k), y.raw(), h(i, k + 1), MPFR_RNDN);
            mpfr_sub(h(i, k), h(i, k), u.raw(), MPFR_RNDN);
            mpfr_mul(tmp.raw(), u.raw(), q.raw(), MPFR_RNDN);
            mpfr_sub(h(i, k + 1), h(i, k + 1), tmp.raw(), MPFR_RNDN);
          }
        } else {
          for (long j = k; j <= en; ++j) {
            mpfr_fma(u.raw(), q.raw(), h(k + 1, j), h(k, j), MPFR_RNDN);
            mpfr_fma(u.raw(), r.raw(), h(k + 2, j), u.raw(), MPFR_RNDN);
            mpfr_mul(tmp.raw(), u.raw(), x.raw(), MPFR_RNDN);
            mpfr_sub(h(k, j), h(k, j), tmp.raw(), MPFR_RNDN);
            mpfr_mul(tmp.raw(), u.raw(), y.raw(), MPFR_RNDN);
            mpfr_sub(h(k + 1, j), h(k + 1, j), tmp.raw(), MPFR_RNDN);
            mpfr_mul(tmp.raw(), u.raw(), zz.raw(), MPFR_RNDN);
            mpfr_sub(h(k + 2, j), h(k + 2, j), tmp.raw(), MPFR_RNDN);
          }
          for (long i = l; i <= cmax; ++i) {
            mpfr_fmma(u.raw(), x.raw(), h(i, k), y.raw(), h(i, k + 1), MPFR_RNDN);
            mpfr_fma(u.raw(), zz.raw(), h(i, k + 2), u.raw(), MPFR_RNDN);
            mpfr_sub(h(i, k), h(i, k), u.raw(), MPFR_RNDN);
            mpfr_mul(tmp.raw(), u.raw(), q.raw(), MPFR_RNDN);
            mpfr_sub(h(i, k + 1), h(i, k + 1), tmp.raw(), MPFR_RNDN);
            mpfr_mul(tmp.raw(), u.raw(), r.raw(), MPFR_RNDN);
            mpfr_sub(h(i, k + 2), h(i, k + 2), tmp.raw(), MPFR_RNDN);
          }
        }
      }
    }
  }

  std::vector<MPComplex> out;
  out.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i)
    out.emplace_back(wr[static_cast<size_t>(i)], wi[static_cast<size_t>(i)]);
  return out;
}

InitialGuessSet eigen_roots(const Polynomial& p, PrecisionContext low,
                            long max_sweeps) {
  std::vector<MPReal> lowc;
  lowc.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) lowc.push_back(convert(c, low));
  Polynomial plow(std::move(lowc));
  CompanionMatrix c = balance(companion_matrix(make_monic(plow)));
  return InitialGuessSet{hessenberg_qr_eigenvalues(c, max_sweeps),
                         GuessSource::eigen_low};
}

} // namespace mproots
