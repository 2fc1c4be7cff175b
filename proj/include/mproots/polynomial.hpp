#ifndef MPROOTS_POLYNOMIAL_HPP
#define MPROOTS_POLYNOMIAL_HPP

#include <utility>
#include <vector>

#include "mproots/mpreal.hpp"

namespace mproots {

// Degree-n real polynomial, coefficients a_0..a_n (a_n != 0), all at one
// shared context. Immutable after construction.
class Polynomial {
 public:
  Polynomial(std::vector<MPReal> coeffs_low_to_high);

  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<MPReal>& coeffs() const { return coeffs_; }
  const MPReal& coeff(long i) const { return coeffs_[static_cast<size_t>(i)]; }
  PrecisionContext context() const { return coeffs_.front().context(); }

 private:
  std::vector<MPReal> coeffs_;
};

// Monic form: implicit leading 1, stored coefficients c_0..c_{n-1}.
class MonicPolynomial {
 public:
  MonicPolynomial(std::vector<MPReal> coeffs, long degree);

  long degree() const { return degree_; }
  const std::vector<MPReal>& coeffs() const { return coeffs_; }
  const MPReal& coeff(long i) const { return coeffs_[static_cast<size_t>(i)]; }
  PrecisionContext context() const;

 private:
  std::vector<MPReal> coeffs_; // c_0..c_{n-1}
  long degree_;
};

enum class RootProvenance { analytic, high_precision_solve };

struct ReferenceRoots {
  std::vector<MPComplex> roots;
  RootProvenance provenance;
};

MonicPolynomial make_monic(const Polynomial& p);

MPComplex eval(const Polynomial& p, const MPComplex& z);
MPComplex eval(const MonicPolynomial& q, const MPComplex& z);

// (p(z), p'(z)) in a single fused Horner pass.
std::pair<MPComplex, MPComplex> eval_with_derivative(const Polynomial& p,
                                                     const MPComplex& z);

struct WilkinsonProblem {
  Polynomial poly;
  ReferenceRoots roots; // the integers 1..n
};

// prod(x - i), i = 1..n, expanded in exact integers; throws
// insufficient_precision_error if any coefficient does not fit ctx exactly.
WilkinsonProblem wilkinson(long n, PrecisionContext ctx);

// Monic polynomial whose roots are the equal-weight (2/n) quadrature
// abscissas on [-1,1]. Coefficients come from Newton's identities on the
// power sums s_m = n/(m+1) (even m), 0 (odd m). Generated internally at
// 2x the requested bits and checked against a 4x regeneration.
Polynomial chebyshev_poly(long n, PrecisionContext ctx);

// Deviation of |(z+1)^{(z+1)/2} (z-1)^{-(z-1)/2}| from 2 (principal branch).
MPReal limit_curve_residual(const MPComplex& z);

} // namespace mproots

#endif
