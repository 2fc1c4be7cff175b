#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mproots/pipeline.hpp"

using namespace mproots;

namespace {

// Exit codes: 0 ok, 2 non-converged result, 1 usage or parse failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

ProblemSpec spec_from_options(const std::string& in_path,
                              const std::string& family, long n,
                              long coeff_bits) {
  if (!in_path.empty())
    return ProblemSpec{Family::file, 0, 0, in_path};
  if (family.empty())
    throw CLI::ValidationError("either --in or --family is required");
  return ProblemSpec{family_from_name(family), n, coeff_bits, ""};
}

int cmd_gen(const std::string& family, long n, long bits,
            const std::string& out) {
  ProblemSpec spec{family_from_name(family), n, bits, ""};
  if (spec.family == Family::file)
    throw CLI::ValidationError("gen needs --family wilkinson|chebyshev");
  Polynomial p = problem_polynomial(spec);
  store_polynomial(out, p, family);
  std::cout << "wrote " << out << " (degree " << p.degree() << ", " << bits
            << " bits)\n";
  return kExitOk;
}

int cmd_solve(const ProblemSpec& spec, const std::string& method,
              long low_bits, long high_bits, const std::string& eps_rel,
              const std::string& eps_abs, const std::string& mode, int threads,
              const std::string& out) {
  PrecisionContext high = with_precision(high_bits);
  SolveConfig cfg(MPReal::from_string(eps_rel, high),
                  MPReal::from_string(eps_abs, high));
  cfg.mode = mode == "gauss-seidel" ? UpdateMode::gauss_seidel
                                    : UpdateMode::jacobi;
  cfg.threads = threads;
  Method m = method_from_name(method);
  MethodRun run = run_method(spec, m, with_precision(low_bits), high, cfg);

  const ReferenceRoots& ref = reference_roots(spec);
  ErrorReport rep = match_and_errors(run.result.roots.z, ref);
  std::cout << "method=" << method << " degree=" << run.result.roots.size()
            << " sweeps=" << run.result.iterations
            << " converged=" << (run.result.converged ? "true" : "false")
            << " wall_seconds=" << run.result.wall_seconds
            << " seed_seconds=" << run.seed_seconds
            << " aberth_fallback=" << (run.result.aberth_fallback ? "true" : "false")
            << "\n";
  std::cout << "max_rel_err=" << csv_number(rep.max_err)
            << " median_rel_err=" << csv_number(rep.median_err) << "\n";

  if (!out.empty()) {
    RootsFile rf;
    rf.degree = run.result.roots.size();
    rf.bits = high_bits;
    rf.method = method;
    rf.iterations = run.result.iterations;
    rf.converged = run.result.converged;
    rf.roots = run.result.roots.z;
    rf.last_step = run.result.last_step;
    if (rf.last_step.empty())
      rf.last_step.assign(rf.roots.size(), MPReal(high));
    store_roots(out, rf);
    store_roots_csv(out + ".csv", rf.roots, &rep.rel_err);
    std::cout << "wrote " << out << " and " << out << ".csv\n";
  }
  return run.result.converged ? kExitOk : kExitNotConverged;
}

int cmd_verify(const std::string& roots_path, const std::string& reference,
               const std::string& in_path, const std::string& family, long n,
               long bits) {
  RootsFile rf = load_roots(roots_path);
  ProblemSpec spec;
  if (reference == "analytic") {
    spec = ProblemSpec{Family::wilkinson, rf.degree, 2048, ""};
  } else if (reference == "selfsolve") {
    if (in_path.empty() && family.empty())
      throw CLI::ValidationError(
          "selfsolve needs the polynomial: --in or --family/--n/--bits");
    spec = spec_from_options(in_path, family, n == 0 ? rf.degree : n,
                             bits == 0 ? 2048 : bits);
  } else {
    throw CLI::ValidationError("--reference must be analytic or selfsolve");
  }
  const ReferenceRoots& ref = reference_roots(spec);
  ErrorReport rep = match_and_errors(rf.roots, ref);
  std::cout << "index,rel_err\n";
  for (size_t i = 0; i < rep.rel_err.size(); ++i)
    std::cout << i << "," << csv_number(rep.rel_err[i]) << "\n";
  std::cout << "max=" << csv_number(rep.max_err)
            << " median=" << csv_number(rep.median_err) << "\n";
  return kExitOk;
}

int cmd_bench(const std::string& matrix_path, const std::string& out) {
  std::vector<BenchConfig> matrix = load_bench_matrix(matrix_path);
  BenchReport report = run_benchmark(matrix);
  store_bench_csv(out, report);
  bool all_ok = true;
  for (const auto& r : report.rows) {
    if (!r.converged) {
      all_ok = false;
      std::cerr << "row " << r.family << "/" << r.n << "/" << r.method
                << " did not converge"
                << (r.error_tag.empty() ? "" : ": " + r.error_tag) << "\n";
    }
  }
  std::cout << "wrote " << out << " (" << report.rows.size() << " rows)\n";
  return all_ok ? kExitOk : kExitNotConverged;
}

int cmd_curve(const std::string& roots_path) {
  RootsFile rf = load_roots(roots_path);
  std::cout << "index,residual\n";
  for (size_t i = 0; i < rf.roots.size(); ++i)
    std::cout << i << "," << csv_number(limit_curve_residual(rf.roots[i]))
              << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-precision polynomial root finding"};
  app.require_subcommand(1);

  std::string family, in_path, out, method = "dka2", eps_rel, eps_abs = "1e-300";
  std::string mode = "jacobi", roots_path, reference = "analytic", matrix_path;
  long n = 0, bits = 0, coeff_bits = 0, low_bits = 106, high_bits = 512;
  int threads = 1;

  auto* gen = app.add_subcommand("gen", "generate a coefficient file");
  gen->add_option("--family", family, "wilkinson|chebyshev")->required();
  gen->add_option("--n", n, "degree")->required();
  gen->add_option("--bits", bits, "generator precision")->required();
  gen->add_option("--out", out, "output path")->required();

  auto* solve = app.add_subcommand("solve", "solve for all roots");
  solve->add_option("--in", in_path, "coefficient file");
  solve->add_option("--family", family, "wilkinson|chebyshev");
  solve->add_option("--n", n, "degree (with --family)");
  solve->add_option("--coeff-bits", coeff_bits,
                    "generator precision (default: --high-bits)");
  solve->add_option("--method", method, "eigen|dka2|dka3|dk2+low|dk3+low");
  solve->add_option("--low-bits", low_bits, "seed eigensolver precision");
  solve->add_option("--high-bits", high_bits, "DK working precision");
  solve->add_option("--eps-rel", eps_rel, "relative stopping tolerance")
      ->required();
  solve->add_option("--eps-abs", eps_abs, "absolute stopping tolerance");
  solve->add_option("--mode", mode, "jacobi|gauss-seidel");
  solve->add_option("--threads", threads, "sweep thread count");
  solve->add_option("--out", out, "roots file path (CSV sidecar: <out>.csv)");

  auto* verify = app.add_subcommand("verify", "error report for a roots file");
  verify->add_option("--roots", roots_path, "roots file")->required();
  verify->add_option("--reference", reference, "analytic|selfsolve");
  verify->add_option("--in", in_path, "coefficient file (selfsolve)");
  verify->add_option("--family", family, "generator family (selfsolve)");
  verify->add_option("--n", n, "degree (selfsolve)");
  verify->add_option("--bits", bits, "generator precision (selfsolve)");

  auto* bench = app.add_subcommand("bench", "run a benchmark matrix");
  bench->add_option("--matrix", matrix_path, "configuration file")->required();
  bench->add_option("--out", out, "CSV output path")->required();

  auto* curve = app.add_subcommand("curve", "limit-curve residual per root");
  curve->add_option("--roots", roots_path, "roots file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(family, n, bits, out);
    if (solve->parsed()) {
      if (eps_rel.empty()) throw CLI::ValidationError("--eps-rel is required");
      ProblemSpec spec = spec_from_options(
          in_path, family, n, coeff_bits == 0 ? high_bits : coeff_bits);
      return cmd_solve(spec, method, low_bits, high_bits, eps_rel, eps_abs,
                       mode, threads, out);
    }
    if (verify->parsed())
      return cmd_verify(roots_path, reference, in_path, family, n, bits);
    if (bench->parsed()) return cmd_bench(matrix_path, out);
    if (curve->parsed()) return cmd_curve(roots_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const parse_error& e) {
    std::cerr << "parse error";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
