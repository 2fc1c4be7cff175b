#include "mproots/dk.hpp"

#include <omp.h>

#include <atomic>
#include <chrono>
#include <string>

namespace mproots {

namespace {

struct Scratch {
  MPReal t, u, d1, d2;
  MPReal wr, wi, er, ei;
  MPReal dr, di;
  MPReal nr, ni, sr, si;
  MPReal ar, ai;
  MPReal zr, zi;
  explicit Scratch(PrecisionContext c)
      : t(c), u(c), d1(c), d2(c), wr(c), wi(c), er(c), ei(c), dr(c), di(c),
        nr(c), ni(c), sr(c), si(c), ar(c), ai(c), zr(c), zi(c) {}
};

enum class St { ok, zero_denom, zero_deriv };

// (qr,qi) = (ar,ai)/(br,bi), Smith-style; no aliasing between result and inputs.
void cdiv(mpfr_ptr qr, mpfr_ptr qi, mpfr_srcptr are, mpfr_srcptr aim,
          mpfr_srcptr bre, mpfr_srcptr bim, mpfr_ptr t, mpfr_ptr d) {
  if (mpfr_cmpabs(bre, bim) >= 0) {
    mpfr_div(t, bim, bre, MPFR_RNDN);
    mpfr_fma(d, bim, t, bre, MPFR_RNDN);
    mpfr_fma(qr, aim, t, are, MPFR_RNDN);
    mpfr_fms(qi, are, t, aim, MPFR_RNDN);
    mpfr_neg(qi, qi, MPFR_RNDN);
  } else {
    mpfr_div(t, bre, bim, MPFR_RNDN);
    mpfr_fma(d, bre, t, bim, MPFR_RNDN);
    mpfr_fma(qr, are, t, aim, MPFR_RNDN);
    mpfr_fms(qi, aim, t, are, MPFR_RNDN);
  }
  mpfr_div(qr, qr, d, MPFR_RNDN);
  mpfr_div(qi, qi, d, MPFR_RNDN);
}

// One DK2 correction for root i with iterate (sc.zr, sc.zi); on ok the
// correction term lands in (sc.ar, sc.ai).
St dk2_try(const std::vector<MPReal>& c, long n,
           const std::vector<MPComplex>& others, long i, Scratch& sc) {
  // w = q(z), implicit leading 1
  mpfr_set_si(sc.wr.raw(), 1, MPFR_RNDN);
  mpfr_set_zero(sc.wi.raw(), 1);
  for (long k = n - 1; k >= 0; --k) {
    mpfr_fmms(sc.t.raw(), sc.wr.raw(), sc.zr.raw(), sc.wi.raw(), sc.zi.raw(), MPFR_RNDN);
    mpfr_fmma(sc.wi.raw(), sc.wr.raw(), sc.zi.raw(), sc.wi.raw(), sc.zr.raw(), MPFR_RNDN);
    mpfr_add(sc.wr.raw(), sc.t.raw(), c[static_cast<size_t>(k)].raw(), MPFR_RNDN);
  }
  // d = prod_{j != i} (z - z_j)
  mpfr_set_si(sc.dr.raw(), 1, MPFR_RNDN);
  mpfr_set_zero(sc.di.raw(), 1);
  for (long j = 0; j < n; ++j) {
    if (j == i) continue;
    const MPComplex& zj = others[static_cast<size_t>(j)];
    mpfr_sub(sc.ar.raw(), sc.zr.raw(), zj.re().raw(), MPFR_RNDN);
    mpfr_sub(sc.ai.raw(), sc.zi.raw(), zj.im().raw(), MPFR_RNDN);
    if (mpfr_zero_p(sc.ar.raw()) && mpfr_zero_p(sc.ai.raw()))
      return St::zero_denom;
    mpfr_fmms(sc.t.raw(), sc.dr.raw(), sc.ar.raw(), sc.di.raw(), sc.ai.raw(), MPFR_RNDN);
    mpfr_fmma(sc.di.raw(), sc.dr.raw(), sc.ai.raw(), sc.di.raw(), sc.ar.raw(), MPFR_RNDN);
    mpfr_swap(sc.dr.raw(), sc.t.raw());
  }
  if (mpfr_zero_p(sc.dr.raw()) && mpfr_zero_p(sc.di.raw()))
    return St::zero_denom;
  cdiv(sc.ar.raw(), sc.ai.raw(), sc.wr.raw(), sc.wi.raw(), sc.dr.raw(),
       sc.di.raw(), sc.t.raw(), sc.u.raw());
  return St::ok;
}

// One DK3 correction; on ok the correction term lands in (sc.ar, sc.ai).
St dk3_try(const std::vector<MPReal>& a, long n,
           const std::vector<MPComplex>& others, long i, Scratch& sc) {
  // fused Horner: w = p(z), e = p'(z)
  mpfr_set(sc.wr.raw(), a[static_cast<size_t>(n)].raw(), MPFR_RNDN);
  mpfr_set_zero(sc.wi.raw(), 1);
  mpfr_set_zero(sc.er.raw(), 1);
  mpfr_set_zero(sc.ei.raw(), 1);
  for (long k = n - 1; k >= 0; --k) {
    mpfr_fmms(sc.t.raw(), sc.er.raw(), sc.zr.raw(), sc.ei.raw(), sc.zi.raw(), MPFR_RNDN);
    mpfr_fmma(sc.u.raw(), sc.er.raw(), sc.zi.raw(), sc.ei.raw(), sc.zr.raw(), MPFR_RNDN);
    mpfr_add(sc.er.raw(), sc.t.raw(), sc.wr.raw(), MPFR_RNDN);
    mpfr_add(sc.ei.raw(), sc.u.raw(), sc.wi.raw(), MPFR_RNDN);
    mpfr_fmms(sc.t.raw(), sc.wr.raw(), sc.zr.raw(), sc.wi.raw(), sc.zi.raw(), MPFR_RNDN);
    mpfr_fmma(sc.wi.raw(), sc.wr.raw(), sc.zi.raw(), sc.wi.raw(), sc.zr.raw(), MPFR_RNDN);
    mpfr_add(sc.wr.raw(), sc.t.raw(), a[static_cast<size_t>(k)].raw(), MPFR_RNDN);
  }
  if (mpfr_zero_p(sc.er.raw()) && mpfr_zero_p(sc.ei.raw()))
    return St::zero_deriv;
  // N = p/p'
  cdiv(sc.nr.raw(), sc.ni.raw(), sc.wr.raw(), sc.wi.raw(), sc.er.raw(),
       sc.ei.raw(), sc.t.raw(), sc.u.raw());
  // S = sum_{j != i} 1/(z - z_j)
  mpfr_set_zero(sc.sr.raw(), 1);
  mpfr_set_zero(sc.si.raw(), 1);
  for (long j = 0; j < n; ++j) {
    if (j == i) continue;
    const MPComplex& zj = others[static_cast<size_t>(j)];
    mpfr_sub(sc.ar.raw(), sc.zr.raw(), zj.re().raw(), MPFR_RNDN);
    mpfr_sub(sc.ai.raw(), sc.zi.raw(), zj.im().raw(), MPFR_RNDN);
    if (mpfr_zero_p(sc.ar.raw()) && mpfr_zero_p(sc.ai.raw()))
      return St::zero_denom;
    // reciprocal, Smith-style
    if (mpfr_cmpabs(sc.ar.raw(), sc.ai.raw()) >= 0) {
      mpfr_div(sc.t.raw(), sc.ai.raw(), sc.ar.raw(), MPFR_RNDN);
      mpfr_fma(sc.u.raw(), sc.ai.raw(), sc.t.raw(), sc.ar.raw(), MPFR_RNDN);
      mpfr_ui_div(sc.d1.raw(), 1, sc.u.raw(), MPFR_RNDN);
      mpfr_mul(sc.d2.raw(), sc.t.raw(), sc.d1.raw(), MPFR_RNDN);
      mpfr_neg(sc.d2.raw(), sc.d2.raw(), MPFR_RNDN);
    } else {
      mpfr_div(sc.t.raw(), sc.ar.raw(), sc.ai.raw(), MPFR_RNDN);
      mpfr_fma(sc.u.raw(), sc.ar.raw(), sc.t.raw(), sc.ai.raw(), MPFR_RNDN);
      mpfr_div(sc.d1.raw(), sc.t.raw(), sc.u.raw(), MPFR_RNDN);
      mpfr_ui_div(sc.d2.raw(), 1, sc.u.raw(), MPFR_RNDN);
      mpfr_neg(sc.d2.raw(), sc.d2.raw(), MPFR_RNDN);
    }
    mpfr_add(sc.sr.raw(), sc.sr.raw(), sc.d1.raw(), MPFR_RNDN);
    mpfr_add(sc.si.raw(), sc.si.raw(), sc.d2.raw(), MPFR_RNDN);
  }
  // D = 1 - N S
  mpfr_fmms(sc.t.raw(), sc.nr.raw(), sc.sr.raw(), sc.ni.raw(), sc.si.raw(), MPFR_RNDN);
  mpfr_ui_sub(sc.dr.raw(), 1, sc.t.raw(), MPFR_RNDN);
  mpfr_fmma(sc.u.raw(), sc.nr.raw(), sc.si.raw(), sc.ni.raw(), sc.sr.raw(), MPFR_RNDN);
  mpfr_neg(sc.di.raw(), sc.u.raw(), MPFR_RNDN);
  if (mpfr_zero_p(sc.dr.raw()) && mpfr_zero_p(sc.di.raw()))
    return St::zero_deriv;
  cdiv(sc.ar.raw(), sc.ai.raw(), sc.nr.raw(), sc.ni.raw(), sc.dr.raw(),
       sc.di.raw(), sc.t.raw(), sc.u.raw());
  return St::ok;
}

// Runs one root update with the perturb-and-retry policy. Returns the final
// status; on ok, writes the new iterate into dst and the step size into step.
template <typename TryFn>
St update_root(TryFn&& try_fn, const std::vector<MPComplex>& others, long i,
               MPComplex& dst, MPReal& step, Scratch& sc, long bits) {
  mpfr_set(sc.zr.raw(), others[static_cast<size_t>(i)].re().raw(), MPFR_RNDN);
  mpfr_set(sc.zi.raw(), others[static_cast<size_t>(i)].im().raw(), MPFR_RNDN);
  St st = St::ok;
  for (int attempt = 0; attempt < 3; ++attempt) {
    st = try_fn(i, sc);
    if (st == St::ok) break;
    // standard perturbation: z += 2^{-bits/2} (1 + i)
    mpfr_set_si(sc.t.raw(), 1, MPFR_RNDN);
    mpfr_mul_2si(sc.t.raw(), sc.t.raw(), -bits / 2, MPFR_RNDN);
    mpfr_add(sc.zr.raw(), sc.zr.raw(), sc.t.raw(), MPFR_RNDN);
    mpfr_add(sc.zi.raw(), sc.zi.raw(), sc.t.raw(), MPFR_RNDN);
  }
  if (st != St::ok) return st;
  mpfr_hypot(step.raw(), sc.ar.raw(), sc.ai.raw(), MPFR_RNDN);
  mpfr_sub(dst.re().raw(), sc.zr.raw(), sc.ar.raw(), MPFR_RNDN);
  mpfr_sub(dst.im().raw(), sc.zi.raw(), sc.ai.raw(), MPFR_RNDN);
  return St::ok;
}

template <typename TryFn>
void sweep_impl(TryFn&& try_fn, const RootVector& in, RootVector& out,
                std::vector<MPReal>& step, UpdateMode mode, int threads,
                bool parallel) {
  const long n = in.size();
  const PrecisionContext ctx = in.context();
  const long bits = ctx.bits;
  // gauss-seidel reads the vector being written; jacobi reads the snapshot
  const bool gs = (mode == UpdateMode::gauss_seidel);
  for (long i = 0; i < n; ++i) // pre-copy so frozen and gs entries are in place
    out.z[static_cast<size_t>(i)] = in.z[static_cast<size_t>(i)];
  const std::vector<MPComplex>& src = gs ? out.z : in.z;

  std::atomic<long> bad_index{-1};
  std::atomic<int> bad_kind{0};

  auto body = [&](long i, Scratch& sc) {
    if (in.frozen[static_cast<size_t>(i)]) {
      mpfr_set_zero(step[static_cast<size_t>(i)].raw(), 1);
      return;
    }
    St st = update_root(try_fn, src, i, out.z[static_cast<size_t>(i)],
                        step[static_cast<size_t>(i)], sc, bits);
    if (st != St::ok) {
      long expect = -1;
      bad_index.compare_exchange_strong(expect, i);
      bad_kind.store(st == St::zero_deriv ? 1 : 2);
    }
  };

  if (parallel && threads > 1) {
#pragma omp parallel num_threads(threads)
    {
      Scratch sc(ctx);
#pragma omp for schedule(static)
      for (long i = 0; i < n; ++i) body(i, sc);
    }
  } else {
    Scratch sc(ctx);
    for (long i = 0; i < n; ++i) body(i, sc);
  }

  long bi = bad_index.load();
  if (bi >= 0) {
    if (bad_kind.load() == 1)
      throw singular_derivative_error(
          "derivative (or third-order correction) vanished at root " +
              std::to_string(bi),
          bi);
    throw divergence_error("coincident iterates at root " + std::to_string(bi),
                           bi);
  }
}

} // namespace

namespace detail {

void dk2_sweep_serial(const MonicPolynomial& q, const RootVector& in,
                      RootVector& out, std::vector<MPReal>& step,
                      UpdateMode mode) {
  const auto& c = q.coeffs();
  const long n = q.degree();
  const bool gs = (mode == UpdateMode::gauss_seidel);
  auto& srcref = gs ? out.z : in.z;
  sweep_impl([&c, n, &srcref](long i, Scratch& sc) {
               return dk2_try(c, n, srcref, i, sc);
             },
             in, out, step, mode, 1, false);
}

void dk2_sweep_parallel(const MonicPolynomial& q, const RootVector& in,
                        RootVector& out, std::vector<MPReal>& step,
                        UpdateMode mode, int threads) {
  const auto& c = q.coeffs();
  const long n = q.degree();
  const bool gs = (mode == UpdateMode::gauss_seidel);
  auto& srcref = gs ? out.z : in.z;
  sweep_impl([&c, n, &srcref](long i, Scratch& sc) {
               return dk2_try(c, n, srcref, i, sc);
             },
             in, out, step, mode, threads, true);
}

void dk3_sweep_serial(const Polynomial& p, const RootVector& in,
                      RootVector& out, std::vector<MPReal>& step,
                      UpdateMode mode) {
  const auto& a = p.coeffs();
  const long n = p.degree();
  const bool gs = (mode == UpdateMode::gauss_seidel);
  auto& srcref = gs ? out.z : in.z;
  sweep_impl([&a, n, &srcref](long i, Scratch& sc) {
               return dk3_try(a, n, srcref, i, sc);
             },
             in, out, step, mode, 1, false);
}

void dk3_sweep_parallel(const Polynomial& p, const RootVector& in,
                        RootVector& out, std::vector<MPReal>& step,
                        UpdateMode mode, int threads) {
  const auto& a = p.coeffs();
  const long n = p.degree();
  const bool gs = (mode == UpdateMode::gauss_seidel);
  auto& srcref = gs ? out.z : in.z;
  sweep_impl([&a, n, &srcref](long i, Scratch& sc) {
               return dk3_try(a, n, srcref, i, sc);
             },
             in, out, step, mode, threads, true);
}

} // namespace detail

MPReal aberth_radius(const Polynomial& p) {
  const long n = p.degree();
  const PrecisionContext ctx = p.context();
  long nnz = 0;
  for (long i = 0; i < n; ++i)
    if (!p.coeff(i).is_zero()) ++nnz;
  MonicPolynomial q = make_monic(p);
  MPReal nnz_r = MPReal::from_long(nnz, ctx);
  MPReal r(ctx);
  for (long i = 0; i < n; ++i) {
    MPReal cand = nth_root(abs(nnz_r * q.coeff(i)),
                           static_cast<unsigned long>(n - i));
    if (cand > r) r = cand;
  }
  if (r.is_zero()) r = MPReal::from_long(1, ctx);
  return r;
}

RootVector aberth_init(const Polynomial& p, PrecisionContext working) {
  const long n = p.degree();
  std::vector<MPReal> wc;
  wc.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) wc.push_back(convert(c, working));
  Polynomial pw(std::move(wc));
  MonicPolynomial q = make_monic(pw);
  MPReal center = -(q.coeff(n - 1) / MPReal::from_long(n, working));
  MPReal r = aberth_radius(pw);
  MPReal two_pi = ldexp2(const_pi(working), 1);
  MPReal phase = MPReal::from_double(1.5, working) / MPReal::from_long(n, working);
  RootVector out;
  out.z.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    MPReal theta = two_pi * MPReal::from_long(i, working) /
                       MPReal::from_long(n, working) +
                   phase;
    out.z.emplace_back(center + r * cos(theta), r * sin(theta));
  }
  out.frozen.assign(static_cast<size_t>(n), 0);
  return out;
}

RootVector dk2_step(const MonicPolynomial& q, const RootVector& z,
                    UpdateMode mode, int threads) {
  RootVector out = z;
  std::vector<MPReal> step(z.z.size(), MPReal(z.context()));
  if (threads > 1)
    detail::dk2_sweep_parallel(q, z, out, step, mode, threads);
  else
    detail::dk2_sweep_serial(q, z, out, step, mode);
  out.iteration = z.iteration + 1;
  return out;
}

RootVector dk3_step(const Polynomial& p, const RootVector& z, UpdateMode mode,
                    int threads) {
  RootVector out = z;
  std::vector<MPReal> step(z.z.size(), MPReal(z.context()));
  if (threads > 1)
    detail::dk3_sweep_parallel(p, z, out, step, mode, threads);
  else
    detail::dk3_sweep_serial(p, z, out, step, mode);
  out.iteration = z.iteration + 1;
  return out;
}

std::pair<std::vector<char>, bool> check_converged(const RootVector& z_prev,
                                                   const RootVector& z_next,
                                                   const SolveConfig& cfg) {
  const long n = z_prev.size();
  std::vector<char> conv(static_cast<size_t>(n), 0);
  bool all = true;
  for (long i = 0; i < n; ++i) {
    MPReal delta = cabs(z_next.z[static_cast<size_t>(i)] -
                        z_prev.z[static_cast<size_t>(i)]);
    MPReal bound =
        cfg.eps_rel * cabs(z_prev.z[static_cast<size_t>(i)]) + cfg.eps_abs;
    conv[static_cast<size_t>(i)] = (delta <= bound) ? 1 : 0;
    all = all && conv[static_cast<size_t>(i)];
  }
  return {std::move(conv), all};
}

void decoincide(std::vector<MPComplex>& z) {
  const long n = static_cast<long>(z.size());
  if (n == 0) return;
  const PrecisionContext ctx = z.front().context();
  const long bits = ctx.bits;
  MPReal one = MPReal::from_long(1, ctx);
  long m = 0;
  for (long j = 1; j < n; ++j) {
    for (long i = 0; i < j; ++i) {
      MPReal sep = cabs(z[static_cast<size_t>(j)] - z[static_cast<size_t>(i)]);
      MPReal thr = ldexp2(max(one, cabs(z[static_cast<size_t>(i)])), -bits + 8);
      if (sep < thr) {
        ++m;
        MPReal nudge = ldexp2(MPReal::from_long(m, ctx), -bits / 2);
        z[static_cast<size_t>(j)].re() += nudge;
        z[static_cast<size_t>(j)].im() += nudge;
        break;
      }
    }
  }
}

SolveResult solve(const Polynomial& p, RootVector init, const SolveConfig& cfg) {
  const long n = p.degree();
  if (init.size() != n)
    throw domain_error("initial guess count does not match degree");
  const PrecisionContext working = init.context();

  std::vector<MPReal> wc;
  wc.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) wc.push_back(convert(c, working));
  Polynomial pw(std::move(wc));
  MonicPolynomial q = make_monic(pw);

  const MPReal eps_rel = convert(cfg.eps_rel, working);
  const MPReal eps_abs = convert(cfg.eps_abs, working);

  RootVector cur = std::move(init);
  cur.frozen.assign(static_cast<size_t>(n), 0);
  RootVector buf = cur;
  std::vector<MPReal> step(static_cast<size_t>(n), MPReal(working));
  std::vector<MPReal> last_step(static_cast<size_t>(n), MPReal(working));

  const bool use_parallel = cfg.threads > 1;
  bool all_frozen = false;
  long sweeps = 0;

  auto t0 = std::chrono::steady_clock::now();
  while (sweeps < cfg.max_iter && !all_frozen) {
    if (cfg.order == 2) {
      if (use_parallel)
        detail::dk2_sweep_parallel(q, cur, buf, step, cfg.mode, cfg.threads);
      else
        detail::dk2_sweep_serial(q, cur, buf, step, cfg.mode);
    } else {
      if (use_parallel)
        detail::dk3_sweep_parallel(pw, cur, buf, step, cfg.mode, cfg.threads);
      else
        detail::dk3_sweep_serial(pw, cur, buf, step, cfg.mode);
    }
    ++sweeps;
    all_frozen = true;
    for (long i = 0; i < n; ++i) {
      const size_t ii = static_cast<size_t>(i);
      if (buf.frozen[ii]) continue;
      if (!buf.z[ii].is_finite())
        throw divergence_error("iterate diverged at root " + std::to_string(i),
                               i);
      last_step[ii] = step[ii];
      MPReal bound = eps_rel * cabs(cur.z[ii]) + eps_abs;
      if (step[ii] <= bound)
        buf.frozen[ii] = 1;
      else
        all_frozen = false;
    }
    std::swap(cur.z, buf.z);
    cur.frozen = buf.frozen;
  }
  auto t1 = std::chrono::steady_clock::now();

  SolveResult res;
  cur.iteration = sweeps;
  res.roots = std::move(cur);
  res.iterations = sweeps;
  res.converged = all_frozen;
  res.last_step = std::move(last_step);
  res.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  return res;
}

SolveResult solve(const Polynomial& p, const InitialGuessSet& init,
                  const SolveConfig& cfg, PrecisionContext working) {
  RootVector rv;
  rv.z.reserve(init.guesses.size());
  for (const auto& g : init.guesses) {
    // exact widening: low-precision value padded with zero bits
    rv.z.emplace_back(convert(g.re(), working), convert(g.im(), working));
  }
  decoincide(rv.z);
  rv.frozen.assign(init.guesses.size(), 0);
  return solve(p, std::move(rv), cfg);
}

} // namespace mproots
