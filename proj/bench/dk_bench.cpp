// Times the serial reference sweeps against the OpenMP sweeps on one
// problem instance and checks that jacobi mode produces bit-identical
// iterates regardless of the path taken.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "mproots/dk.hpp"
#include "mproots/pipeline.hpp"

using namespace mproots;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

bool identical(const RootVector& a, const RootVector& b) {
  for (long i = 0; i < a.size(); ++i) {
    size_t k = static_cast<size_t>(i);
    if (a.z[k] != b.z[k]) return false;
  }
  return true;
}

} // namespace

int main(int argc, char** argv) {
  long n = argc > 1 ? std::atol(argv[1]) : 128;
  long bits = argc > 2 ? std::atol(argv[2]) : 512;
  long sweeps = argc > 3 ? std::atol(argv[3]) : 20;
  std::vector<int> thread_counts = {1, 2, 4};

  PrecisionContext ctx = with_precision(bits);
  Polynomial p = chebyshev_poly(n, ctx);
  MonicPolynomial q = make_monic(p);
  RootVector z0 = aberth_init(p, ctx);
  std::vector<MPReal> step(static_cast<size_t>(n), MPReal(ctx));

  std::cout << "chebyshev n=" << n << " bits=" << bits << " sweeps=" << sweeps
            << " (jacobi)\n";
  std::cout << "kernel   threads  seconds   per-sweep\n";

  for (int order : {2, 3}) {
    RootVector serial_out = z0, in = z0, out = z0;
    auto t0 = clock_type::now();
    for (long s = 0; s < sweeps; ++s) {
      if (order == 2)
        detail::dk2_sweep_serial(q, in, out, step, UpdateMode::jacobi);
      else
        detail::dk3_sweep_serial(p, in, out, step, UpdateMode::jacobi);
      std::swap(in.z, out.z);
    }
    double serial_s = seconds_since(t0);
    serial_out = in;
    std::cout << "dk" << order << "-ser  1        " << serial_s << "  "
              << serial_s / static_cast<double>(sweeps) << "\n";

    for (int t : thread_counts) {
      in = z0;
      out = z0;
      t0 = clock_type::now();
      for (long s = 0; s < sweeps; ++s) {
        if (order == 2)
          detail::dk2_sweep_parallel(q, in, out, step, UpdateMode::jacobi, t);
        else
          detail::dk3_sweep_parallel(p, in, out, step, UpdateMode::jacobi, t);
        std::swap(in.z, out.z);
      }
      double par_s = seconds_since(t0);
      std::cout << "dk" << order << "-omp  " << t << "        " << par_s
                << "  " << par_s / static_cast<double>(sweeps)
                << (identical(in, serial_out) ? "" : "  MISMATCH") << "\n";
      if (!identical(in, serial_out)) return 1;
    }
  }
  return 0;
}
