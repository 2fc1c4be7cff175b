#ifndef MPROOTS_IO_HPP
#define MPROOTS_IO_HPP

#include <string>
#include <vector>

#include "mproots/dk.hpp"
#include "mproots/polynomial.hpp"

namespace mproots {

struct PolyFile {
  Polynomial poly;
  std::string kind; // wilkinson | chebyshev | generic
};

// `poly v1 degree=<n> bits=<L> kind=<k>` then one tagged decimal per line.
void store_polynomial(const std::string& path, const Polynomial& p,
                      const std::string& kind);
PolyFile load_polynomial(const std::string& path);

struct RootsFile {
  long degree = 0;
  long bits = 0;
  std::string method;
  long iterations = 0;
  bool converged = false;
  std::vector<MPComplex> roots;
  std::vector<MPReal> last_step;
};

// `roots v1 degree=<n> bits=<L> method=<m> iterations=<k> converged=<b>`
// then per root: index, re, im, last-step size (tagged decimals).
void store_roots(const std::string& path, const RootsFile& rf);
RootsFile load_roots(const std::string& path);

// CSV sidecar `index,re,im,rel_err` at 40 significant digits; rel_err may be
// empty when no reference was available.
void store_roots_csv(const std::string& path,
                     const std::vector<MPComplex>& roots,
                     const std::vector<MPReal>* rel_err);

// 40-significant-digit scientific rendering for CSV output.
std::string csv_number(const MPReal& x);

} // namespace mproots

#endif
