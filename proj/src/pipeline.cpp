#include "mproots/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace mproots {

std::string method_name(Method m) {
  switch (m) {
    case Method::eigen: return "eigen";
    case Method::dka2: return "dka2";
    case Method::dka3: return "dka3";
    case Method::dk2_low: return "dk2+low";
    case Method::dk3_low: return "dk3+low";
  }
  return "?";
}

Method method_from_name(const std::string& s) {
  if (s == "eigen") return Method::eigen;
  if (s == "dka2") return Method::dka2;
  if (s == "dka3") return Method::dka3;
  if (s == "dk2+low") return Method::dk2_low;
  if (s == "dk3+low") return Method::dk3_low;
  throw parse_error("unknown method '" + s + "'", 0);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::wilkinson: return "wilkinson";
    case Family::chebyshev: return "chebyshev";
    case Family::file: return "file";
  }
  return "?";
}

Family family_from_name(const std::string& s) {
  if (s == "wilkinson") return Family::wilkinson;
  if (s == "chebyshev") return Family::chebyshev;
  if (s == "file") return Family::file;
  throw parse_error("unknown family '" + s + "'", 0);
}

Polynomial problem_polynomial(const ProblemSpec& spec) {
  switch (spec.family) {
    case Family::wilkinson:
      return wilkinson(spec.n, with_precision(spec.coeff_bits)).poly;
    case Family::chebyshev:
      return chebyshev_poly(spec.n, with_precision(spec.coeff_bits));
    case Family::file:
      return load_polynomial(spec.path).poly;
  }
  throw domain_error("bad problem spec");
}

SolveResult mixed_precision_solve(const ProblemSpec& spec, PrecisionContext low,
                                  PrecisionContext high, SolveConfig cfg) {
  if (low.bits > high.bits)
    throw domain_error("low precision exceeds high precision");
  Polynomial p = problem_polynomial(spec);
  try {
    InitialGuessSet seeds = eigen_roots(p, low);
    return solve(p, seeds, cfg, high);
  } catch (const qr_nonconvergence_error&) {
    SolveResult res = solve(p, aberth_init(p, high), cfg);
    res.aberth_fallback = true;
    return res;
  }
}

static ReferenceRoots selfsolve_reference(const Polynomial& p) {
  const PrecisionContext ref_ctx = with_precision(2048);
  std::vector<MPReal> wide;
  wide.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) wide.push_back(convert(c, ref_ctx));
  Polynomial pw(std::move(wide));
  InitialGuessSet seeds = eigen_roots(pw, with_precision(512));
  SolveConfig cfg(ldexp2(MPReal::from_long(1, ref_ctx), -1800),
                  MPReal::from_string("1e-300", ref_ctx));
  cfg.order = 3;
  SolveResult res = solve(pw, seeds, cfg, ref_ctx);
  if (!res.converged)
    throw error("reference solve did not converge");
  // cross-check: prod(-z_i) must reproduce the monic constant term
  MonicPolynomial q = make_monic(pw);
  MPComplex prod(MPReal::from_long(1, ref_ctx), MPReal(ref_ctx));
  for (const auto& z : res.roots.z) prod = prod * (-z);
  MPReal denom = max(abs(q.coeff(0)), MPReal::from_string("1e-300", ref_ctx));
  MPReal rel = cabs(prod - MPComplex(q.coeff(0), MPReal(ref_ctx))) / denom;
  if (rel > ldexp2(MPReal::from_long(1, ref_ctx), -1024))
    throw error("reference roots failed the root-product cross-check");
  return ReferenceRoots{std::move(res.roots.z),
                        RootProvenance::high_precision_solve};
}

const ReferenceRoots& reference_roots(const ProblemSpec& spec) {
  static std::map<std::string, ReferenceRoots> cache;
  static std::mutex mu;
  std::string key =
      family_name(spec.family) + ":" + std::to_string(spec.n) + ":" + spec.path;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  ReferenceRoots ref{{}, RootProvenance::analytic};
  if (spec.family == Family::wilkinson) {
    const PrecisionContext ref_ctx = with_precision(2048);
    for (long i = 1; i <= spec.n; ++i)
      ref.roots.emplace_back(MPReal::from_long(i, ref_ctx), MPReal(ref_ctx));
  } else {
    Polynomial p = spec.family == Family::chebyshev
                       ? chebyshev_poly(spec.n, with_precision(2048))
                       : load_polynomial(spec.path).poly;
    ref = selfsolve_reference(p);
  }
  return cache.emplace(std::move(key), std::move(ref)).first->second;
}

ErrorReport match_and_errors(const std::vector<MPComplex>& approx,
                             const ReferenceRoots& ref) {
  const long n = static_cast<long>(approx.size());
  if (ref.roots.size() != approx.size())
    throw domain_error("approximation/reference size mismatch");
  mpfr_prec_t bits = 64;
  for (const auto& z : approx) bits = std::max(bits, z.bits());
  for (const auto& z : ref.roots) bits = std::max(bits, z.bits());
  const PrecisionContext ctx{bits};

  std::vector<MPReal> dist;
  dist.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      dist.push_back(cabs(approx[static_cast<size_t>(i)] -
                          ref.roots[static_cast<size_t>(j)]));
  auto d = [&dist, n](long i, long j) -> const MPReal& {
    return dist[static_cast<size_t>(i * n + j)];
  };

  // process approximations closest to the reference set first
  std::vector<long> order(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::vector<long> nearest(static_cast<size_t>(n), 0);
  for (long i = 0; i < n; ++i)
    for (long j = 1; j < n; ++j)
      if (d(i, j) < d(i, nearest[static_cast<size_t>(i)]))
        nearest[static_cast<size_t>(i)] = j;
  std::sort(order.begin(), order.end(), [&](long a, long b) {
    return d(a, nearest[static_cast<size_t>(a)]) <
           d(b, nearest[static_cast<size_t>(b)]);
  });

  ErrorReport rep{std::vector<MPReal>(static_cast<size_t>(n), MPReal(ctx)),
                  std::vector<long>(static_cast<size_t>(n), -1), MPReal(ctx),
                  MPReal(ctx)};
  std::vector<char> used(static_cast<size_t>(n), 0);
  const MPReal floor_abs = MPReal::from_string("1e-300", ctx);
  for (long oi : order) {
    long best = -1;
    for (long j = 0; j < n; ++j) {
      if (used[static_cast<size_t>(j)]) continue;
      if (best < 0 || d(oi, j) < d(oi, best)) best = j;
    }
    used[static_cast<size_t>(best)] = 1;
    rep.matching[static_cast<size_t>(oi)] = best;
    rep.rel_err[static_cast<size_t>(oi)] =
        d(oi, best) / max(cabs(ref.roots[static_cast<size_t>(best)]), floor_abs);
  }
  std::vector<MPReal> sorted = rep.rel_err;
  std::sort(sorted.begin(), sorted.end());
  rep.max_err = sorted.back();
  rep.median_err =
      (n % 2 == 1)
          ? sorted[static_cast<size_t>(n / 2)]
          : ldexp2(sorted[static_cast<size_t>(n / 2 - 1)] +
                       sorted[static_cast<size_t>(n / 2)],
                   -1);
  return rep;
}

MethodRun run_method(const ProblemSpec& spec, Method method, PrecisionContext low,
                     PrecisionContext high, const SolveConfig& cfg) {
  Polynomial p = problem_polynomial(spec);
  MethodRun run;
  run.method = method_name(method);
  SolveConfig c = cfg;
  switch (method) {
    case Method::eigen: {
      auto t0 = std::chrono::steady_clock::now();
      InitialGuessSet ev = eigen_roots(p, high);
      auto t1 = std::chrono::steady_clock::now();
      RootVector rv;
      rv.z = std::move(ev.guesses);
      rv.frozen.assign(rv.z.size(), 1);
      run.result.roots = std::move(rv);
      run.result.converged = true;
      run.result.iterations = 0;
      run.result.last_step.assign(static_cast<size_t>(p.degree()),
                                  MPReal(high));
      run.result.wall_seconds =
          std::chrono::duration<double>(t1 - t0).count();
      return run;
    }
    case Method::dka2:
    case Method::dka3:
      c.order = (method == Method::dka2) ? 2 : 3;
      run.result = solve(p, aberth_init(p, high), c);
      return run;
    case Method::dk2_low:
    case Method::dk3_low: {
      c.order = (method == Method::dk2_low) ? 2 : 3;
      auto t0 = std::chrono::steady_clock::now();
      InitialGuessSet seeds = eigen_roots(p, low);
      auto t1 = std::chrono::steady_clock::now();
      run.seed_seconds = std::chrono::duration<double>(t1 - t0).count();
      run.result = solve(p, seeds, c, high);
      return run;
    }
  }
  throw domain_error("bad method");
}

BenchReport run_benchmark(const std::vector<BenchConfig>& matrix) {
  if (matrix.empty()) throw domain_error("empty benchmark matrix");
  BenchReport report;
  for (const auto& bc : matrix) {
    BenchRow row;
    row.family = family_name(bc.spec.family);
    row.n = bc.spec.family == Family::file
                ? load_polynomial(bc.spec.path).poly.degree()
                : bc.spec.n;
    row.method = method_name(bc.method);
    row.low_bits = bc.low_bits;
    row.high_bits = bc.high_bits;
    row.threads = bc.cfg.threads;
    try {
      MethodRun run = run_method(bc.spec, bc.method, with_precision(bc.low_bits),
                                 with_precision(bc.high_bits), bc.cfg);
      const ReferenceRoots& ref = reference_roots(bc.spec);
      ErrorReport rep = match_and_errors(run.result.roots.z, ref);
      row.sweeps = run.result.iterations;
      row.wall_seconds = run.result.wall_seconds;
      row.max_rel_err = convert(rep.max_err, PrecisionContext{64});
      row.converged = run.result.converged;
    } catch (const std::exception& e) {
      row.converged = false;
      row.error_tag = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void store_bench_csv(const std::string& path, const BenchReport& report) {
  std::ofstream f(path);
  if (!f) throw error("cannot open " + path + " for writing");
  f << "family,n,method,low_bits,high_bits,threads,sweeps,wall_seconds,"
       "max_rel_err,converged\n";
  for (const auto& r : report.rows) {
    char* err = nullptr;
    mpfr_asprintf(&err, "%.6Re", r.max_rel_err.raw());
    std::ostringstream wall;
    wall.precision(6);
    wall << r.wall_seconds;
    f << r.family << "," << r.n << "," << r.method << "," << r.low_bits << ","
      << r.high_bits << "," << r.threads << "," << r.sweeps << ","
      << wall.str() << "," << err << "," << (r.converged ? "true" : "false")
      << "\n";
    mpfr_free_str(err);
  }
}

std::vector<BenchConfig> load_bench_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw error("cannot open " + path);
  std::vector<BenchConfig> out;
  std::string line;
  long line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string family, method, mode, eps_rel, eps_abs;
    long n, low, high;
    int threads;
    if (!(row >> family >> n >> method >> low >> high >> eps_rel >> eps_abs >>
          mode >> threads))
      throw parse_error("malformed benchmark config line", line_no);
    long coeff_bits = high;
    row >> coeff_bits; // optional trailing generator context
    PrecisionContext high_ctx = with_precision(high);
    SolveConfig cfg(MPReal::from_string(eps_rel, high_ctx),
                    MPReal::from_string(eps_abs, high_ctx));
    if (mode == "jacobi")
      cfg.mode = UpdateMode::jacobi;
    else if (mode == "gauss-seidel")
      cfg.mode = UpdateMode::gauss_seidel;
    else
      throw parse_error("unknown update mode '" + mode + "'", line_no);
    cfg.threads = threads;
    BenchConfig bc{ProblemSpec{family_from_name(family), n, coeff_bits, ""},
                   method_from_name(method), low, high, cfg};
    out.push_back(std::move(bc));
  }
  return out;
}

} // namespace mproots
