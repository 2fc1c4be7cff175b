#ifndef MPROOTS_COMPANION_HPP
#define MPROOTS_COMPANION_HPP

#include <vector>

#include "mproots/polynomial.hpp"

namespace mproots {

// Upper-Hessenberg companion matrix: ones on the subdiagonal, -c_i down the
// last column. Same spectrum as the textbook last-row layout.
class CompanionMatrix {
 public:
  CompanionMatrix(long n, PrecisionContext ctx)
      : n_(n), a_(static_cast<size_t>(n) * static_cast<size_t>(n), MPReal(ctx)) {}

  long dim() const { return n_; }
  MPReal& at(long i, long j) { return a_[static_cast<size_t>(i * n_ + j)]; }
  const MPReal& at(long i, long j) const { return a_[static_cast<size_t>(i * n_ + j)]; }
  PrecisionContext context() const { return a_.front().context(); }

 private:
  long n_;
  std::vector<MPReal> a_;
};

enum class GuessSource { eigen_low, aberth };

// Low-precision eigenvalues (or Aberth circle points) used to seed the
// high-precision iteration.
struct InitialGuessSet {
  std::vector<MPComplex> guesses;
  GuessSource source;
};

struct qr_nonconvergence_error : error {
  std::vector<MPComplex> partial;
  qr_nonconvergence_error(const std::string& msg, std::vector<MPComplex> p)
      : error(msg), partial(std::move(p)) {}
};

CompanionMatrix companion_matrix(const MonicPolynomial& q);

// Parlett-Reinsch radix-2 balancing. Scaling by powers of two is exact, so
// the spectrum is preserved bit-for-bit; Hessenberg structure survives.
CompanionMatrix balance(const CompanionMatrix& m);

// Francis implicit double-shift QR, eigenvalues only (hqr lineage).
// Deflation when |h(l,l-1)| <= 2^{-bits+2} (|h(l-1,l-1)| + |h(l,l)|).
// Conjugate pairs come out adjacent, positive imaginary part first.
std::vector<MPComplex> hessenberg_qr_eigenvalues(const CompanionMatrix& m,
                                                 long max_sweeps = 30);

// convert -> make_monic -> companion -> balance -> QR, all at `low`.
InitialGuessSet eigen_roots(const Polynomial& p, PrecisionContext low,
                            long max_sweeps = 30);

} // namespace mproots

#endif
