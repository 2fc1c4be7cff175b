#ifndef MPROOTS_PIPELINE_HPP
#define MPROOTS_PIPELINE_HPP

#include <string>
#include <vector>

#include "mproots/dk.hpp"
#include "mproots/io.hpp"

namespace mproots {

enum class Family { wilkinson, chebyshev, file };

struct ProblemSpec {
  Family family = Family::wilkinson;
  long n = 0;           // degree (ignored for file)
  long coeff_bits = 0;  // generator context L
  std::string path;     // for Family::file
};

enum class Method { eigen, dka2, dka3, dk2_low, dk3_low };

std::string method_name(Method m);
Method method_from_name(const std::string& s);
std::string family_name(Family f);
Family family_from_name(const std::string& s);

Polynomial problem_polynomial(const ProblemSpec& spec);

struct ErrorReport {
  std::vector<MPReal> rel_err;   // per approximation index
  std::vector<long> matching;    // approximation index -> reference index
  MPReal max_err;
  MPReal median_err;
};

// Three-step pipeline: generate at L bits, eigen-seed at `low`, DK at `high`.
// Falls back to Aberth seeding (flagged in the result) if the low-precision
// eigensolver does not converge.
SolveResult mixed_precision_solve(const ProblemSpec& spec, PrecisionContext low,
                                  PrecisionContext high, SolveConfig cfg);

// Wilkinson: the integers. Everything else: third-order DK at 2048 bits
// seeded by a 512-bit eigen run, cross-checked by the root-product identity.
// Results are memoized per (family, n, path) for the process lifetime.
const ReferenceRoots& reference_roots(const ProblemSpec& spec);

// Greedy nearest-neighbor bijective matching (closest approximations claim
// their reference first); rel err = |z - a| / max(|a|, 1e-300).
ErrorReport match_and_errors(const std::vector<MPComplex>& approx,
                             const ReferenceRoots& ref);

// Runs one method end to end. wall_seconds covers the iteration loop only
// (eigen: the eigensolve); seed_seconds is reported separately.
struct MethodRun {
  SolveResult result;
  double seed_seconds = 0.0;
  std::string method;
};
MethodRun run_method(const ProblemSpec& spec, Method method, PrecisionContext low,
                     PrecisionContext high, const SolveConfig& cfg);

struct BenchConfig {
  ProblemSpec spec;
  Method method = Method::dka2;
  long low_bits = 106;
  long high_bits = 512;
  SolveConfig cfg;
};

struct BenchRow {
  std::string family;
  long n = 0;
  std::string method;
  long low_bits = 0;
  long high_bits = 0;
  int threads = 1;
  long sweeps = 0;
  double wall_seconds = 0.0;
  MPReal max_rel_err;
  bool converged = false;
  std::string error_tag;

  BenchRow() : max_rel_err(PrecisionContext{64}) {}
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

// One row per configuration, in input order; failures are recorded in the
// row rather than aborting the matrix.
BenchReport run_benchmark(const std::vector<BenchConfig>& matrix);

void store_bench_csv(const std::string& path, const BenchReport& report);

// `family n method low_bits high_bits eps_rel eps_abs mode threads` per line;
// '#' starts a comment.
std::vector<BenchConfig> load_bench_matrix(const std::string& path);

} // namespace mproots

#endif
