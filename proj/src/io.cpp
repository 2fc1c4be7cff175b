#include "mproots/io.hpp"

#include <fstream>
#include <sstream>

namespace mproots {

namespace {

// Parses "key=value" tokens from a header line after the two fixed words.
std::string header_value(const std::string& token, const std::string& key,
                         long line_no) {
  if (token.rfind(key + "=", 0) != 0)
    throw parse_error("expected " + key + "=... in header, got '" + token + "'",
                      line_no);
  return token.substr(key.size() + 1);
}

long to_long(const std::string& s, long line_no) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw parse_error("bad integer '" + s + "'", line_no);
  }
}

} // namespace

std::string csv_number(const MPReal& x) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.39Re", x.raw());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

void store_polynomial(const std::string& path, const Polynomial& p,
                      const std::string& kind) {
  std::ofstream f(path);
  if (!f) throw error("cannot open " + path + " for writing");
  f << "poly v1 degree=" << p.degree() << " bits=" << p.context().bits
    << " kind=" << kind << "\n";
  for (const auto& c : p.coeffs()) f << to_decimal_string(c) << "\n";
}

PolyFile load_polynomial(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw error("cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw parse_error("empty file " + path, 1);
  std::istringstream hdr(line);
  std::string magic, version, tok;
  hdr >> magic >> version;
  if (magic != "poly" || version != "v1")
    throw parse_error("not a poly v1 file: " + path, 1);
  hdr >> tok;
  long degree = to_long(header_value(tok, "degree", 1), 1);
  hdr >> tok;
  long bits = to_long(header_value(tok, "bits", 1), 1);
  hdr >> tok;
  std::string kind = header_value(tok, "kind", 1);
  (void)bits;
  std::vector<MPReal> coeffs;
  coeffs.reserve(static_cast<size_t>(degree) + 1);
  long line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      coeffs.push_back(mpreal_from_decimal_string(line));
    } catch (const parse_error& e) {
      throw parse_error(std::string(e.what()) + " at " + path, line_no);
    }
  }
  if (static_cast<long>(coeffs.size()) != degree + 1)
    throw parse_error("degree " + std::to_string(degree) + " but " +
                          std::to_string(coeffs.size()) + " coefficients",
                      line_no);
  return PolyFile{Polynomial(std::move(coeffs)), kind};
}

void store_roots(const std::string& path, const RootsFile& rf) {
  std::ofstream f(path);
  if (!f) throw error("cannot open " + path + " for writing");
  f << "roots v1 degree=" << rf.degree << " bits=" << rf.bits
    << " method=" << rf.method << " iterations=" << rf.iterations
    << " converged=" << (rf.converged ? "true" : "false") << "\n";
  for (size_t i = 0; i < rf.roots.size(); ++i) {
    f << i << " " << to_decimal_string(rf.roots[i].re()) << " "
      << to_decimal_string(rf.roots[i].im()) << " "
      << to_decimal_string(rf.last_step[i]) << "\n";
  }
}

RootsFile load_roots(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw error("cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw parse_error("empty file " + path, 1);
  std::istringstream hdr(line);
  std::string magic, version, tok;
  hdr >> magic >> version;
  if (magic != "roots" || version != "v1")
    throw parse_error("not a roots v1 file: " + path, 1);
  RootsFile rf;
  hdr >> tok;
  rf.degree = to_long(header_value(tok, "degree", 1), 1);
  hdr >> tok;
  rf.bits = to_long(header_value(tok, "bits", 1), 1);
  hdr >> tok;
  rf.method = header_value(tok, "method", 1);
  hdr >> tok;
  rf.iterations = to_long(header_value(tok, "iterations", 1), 1);
  hdr >> tok;
  rf.converged = header_value(tok, "converged", 1) == "true";
  long line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    long idx;
    std::string re_s, im_s, step_s;
    if (!(row >> idx >> re_s >> im_s >> step_s))
      throw parse_error("malformed root row in " + path, line_no);
    rf.roots.emplace_back(mpreal_from_decimal_string(re_s),
                          mpreal_from_decimal_string(im_s));
    rf.last_step.push_back(mpreal_from_decimal_string(step_s));
  }
  if (static_cast<long>(rf.roots.size()) != rf.degree)
    throw parse_error("degree " + std::to_string(rf.degree) + " but " +
                          std::to_string(rf.roots.size()) + " roots",
                      line_no);
  return rf;
}

void store_roots_csv(const std::string& path,
                     const std::vector<MPComplex>& roots,
                     const std::vector<MPReal>* rel_err) {
  std::ofstream f(path);
  if (!f) throw error("cannot open " + path + " for writing");
  f << "index,re,im,rel_err\n";
  for (size_t i = 0; i < roots.size(); ++i) {
    f << i << "," << csv_number(roots[i].re()) << ","
      << csv_number(roots[i].im()) << ",";
    if (rel_err) f << csv_number((*rel_err)[i]);
    f << "\n";
  }
}

} // namespace mproots
