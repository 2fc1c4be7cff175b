#ifndef MPROOTS_DK_HPP
#define MPROOTS_DK_HPP

#include <utility>
#include <vector>

#include "mproots/companion.hpp"
#include "mproots/polynomial.hpp"

namespace mproots {

// jacobi: every update in a sweep reads the previous iterate (snapshot);
// deterministic and thread-count independent. gauss_seidel: updates land
// in place and later roots in the same sweep see them; with more than one
// thread the sweep reads the live vector without locks, so iteration counts
// become thread-dependent (torn reads are tolerated by design).
enum class UpdateMode { jacobi, gauss_seidel };

struct RootVector {
  std::vector<MPComplex> z;
  std::vector<char> frozen; // converged roots stop moving but stay in denominators
  long iteration = 0;

  long size() const { return static_cast<long>(z.size()); }
  PrecisionContext context() const { return z.front().context(); }
};

struct SolveConfig {
  MPReal eps_rel;
  MPReal eps_abs;
  long max_iter = 20000;
  int order = 2; // 2 or 3
  UpdateMode mode = UpdateMode::jacobi;
  int threads = 1;

  SolveConfig(MPReal rel, MPReal abs_)
      : eps_rel(std::move(rel)), eps_abs(std::move(abs_)) {
    if (eps_rel.sign() < 0 || eps_abs.sign() <= 0)
      throw domain_error("tolerances must satisfy eps_rel >= 0, eps_abs > 0");
  }
};

struct SolveResult {
  RootVector roots;
  long iterations = 0; // full sweeps
  bool converged = false;
  std::vector<MPReal> last_step;
  double wall_seconds = 0.0;
  bool aberth_fallback = false; // pipeline sets this when eigen seeding failed
};

// r = max_i |n_nz c_i|^{1/(n-i)}, n_nz = nonzero a_i for i < n; 1 if all zero.
MPReal aberth_radius(const Polynomial& p);

// n points on the circle of radius r around -c_{n-1}/n, angles
// 2(i-1)pi/n + 3/(2n), at the given working context.
RootVector aberth_init(const Polynomial& p, PrecisionContext working);

// One Weierstrass sweep: z_i' = z_i - q(z_i) / prod_{j!=i}(z_i - z_j).
RootVector dk2_step(const MonicPolynomial& q, const RootVector& z,
                    UpdateMode mode, int threads = 1);

// One third-order sweep: with N = p/p', S = sum 1/(z_i - z_j),
// z_i' = z_i - N / (1 - N S).
RootVector dk3_step(const Polynomial& p, const RootVector& z, UpdateMode mode,
                    int threads = 1);

// Per-root |z' - z| <= eps_rel |z| + eps_abs, plus the all-of reduction.
std::pair<std::vector<char>, bool> check_converged(const RootVector& z_prev,
                                                   const RootVector& z_next,
                                                   const SolveConfig& cfg);

// Nudges near-coincident entries apart so denominators never vanish:
// collisions closer than 2^{-bits+8} max(1,|z_i|) get m 2^{-bits/2} (1+i)
// added to the later index (m = occurrence count).
void decoincide(std::vector<MPComplex>& z);

SolveResult solve(const Polynomial& p, RootVector init, const SolveConfig& cfg);
SolveResult solve(const Polynomial& p, const InitialGuessSet& init,
                  const SolveConfig& cfg, PrecisionContext working);

namespace detail {
// Serial reference sweeps, kept independent of the OpenMP path so the two
// can be checked against each other and benchmarked.
void dk2_sweep_serial(const MonicPolynomial& q, const RootVector& in,
                      RootVector& out, std::vector<MPReal>& step,
                      UpdateMode mode);
void dk2_sweep_parallel(const MonicPolynomial& q, const RootVector& in,
                        RootVector& out, std::vector<MPReal>& step,
                        UpdateMode mode, int threads);
void dk3_sweep_serial(const Polynomial& p, const RootVector& in,
                      RootVector& out, std::vector<MPReal>& step,
                      UpdateMode mode);
void dk3_sweep_parallel(const Polynomial& p, const RootVector& in,
                        RootVector& out, std::vector<MPReal>& step,
                        UpdateMode mode, int threads);
} // namespace detail

} // namespace mproots

#endif
