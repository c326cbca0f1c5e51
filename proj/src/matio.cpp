#include "mdanm/matio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mdanm {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void save_matrix(const std::string& path, const CMat& A) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << A.rows() << ' ' << A.cols() << '\n';
  for (long i = 0; i < A.rows(); ++i) {
    for (long j = 0; j < A.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(A(i, j).real()) << ' '
          << format_double(A(i, j).imag());
    }
    out << '\n';
  }
  if (!out) throw IoError(path + ": write failed");
}

CMat load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  long rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw IoError(path + ": bad header, expected 'rows cols'");
  CMat A(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) {
        std::ostringstream msg;
        msg << path << ": truncated or malformed at row " << i << ", col "
            << j;
        throw IoError(msg.str());
      }
      A(i, j) = cplx(re, im);
    }
  return A;
}

}  // namespace mdanm
