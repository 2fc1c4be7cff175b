#ifndef MPROOTS_ERRORS_HPP
#define MPROOTS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mproots {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_precision_error : error {
  using error::error;
};

// Raised when a generator cannot represent a coefficient exactly (Wilkinson)
// or loses too many digits to cancellation (Chebyshev) at the requested context.
struct insufficient_precision_error : error {
  using error::error;
};

struct degenerate_polynomial_error : error {
  using error::error;
};

struct domain_error : error {
  using error::error;
};

struct divergence_error : error {
  long root_index;
  divergence_error(const std::string& msg, long idx) : error(msg), root_index(idx) {}
};

struct singular_derivative_error : error {
  long root_index;
  singular_derivative_error(const std::string& msg, long idx) : error(msg), root_index(idx) {}
};

struct parse_error : error {
  long line;
  parse_error(const std::string& msg, long line_no) : error(msg), line(line_no) {}
};

} // namespace mproots

#endif
