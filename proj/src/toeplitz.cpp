#include "mdanm/toeplitz.hpp"

namespace mdanm {

ToeplitzParams ToeplitzParams::zero(const DimSpec& dims) {
  ToeplitzParams u{dims, 0.0, {}};
  u.coeffs.assign(canonical_shifts(dims).size(), cplx(0.0, 0.0));
  return u;
}

std::vector<ShiftVector> canonical_shifts(const DimSpec& dims) {
  const int d = dims.d();
  std::vector<ShiftVector> out;
  ShiftVector s(d);
  for (int p = 0; p < d; ++p) s[p] = -(dims.size(p) - 1);
  // Odometer over the full shift box, ascending lexicographically.
  while (true) {
    if (!is_zero_shift(s) && is_canonical(s)) out.push_back(s);
    int p = d - 1;
    while (p >= 0 && s[p] == dims.size(p) - 1) {
      s[p] = -(dims.size(p) - 1);
      --p;
    }
    if (p < 0) break;
    ++s[p];
  }
  return out;
}

long shift_count(const DimSpec& dims, const ShiftVector& s) {
  if (!shift_in_range(dims, s))
    throw std::invalid_argument("shift_count: shift out of range");
  long c = 1;
  for (int p = 0; p < dims.d(); ++p) c *= dims.size(p) - std::abs(s[p]);
  return c;
}

std::vector<std::pair<long, long>> shift_positions(const DimSpec& dims,
                                                   const ShiftVector& s) {
  if (!shift_in_range(dims, s))
    throw std::invalid_argument("shift_positions: shift out of range");
  const int d = dims.d();
  std::vector<int> lo(d), hi(d), k(d);
  for (int p = 0; p < d; ++p) {
    lo[p] = std::max(1, 1 - s[p]);
    hi[p] = std::min(dims.size(p), dims.size(p) - s[p]);
    k[p] = lo[p];
  }
  std::vector<std::pair<long, long>> out;
  out.reserve(shift_count(dims, s));
  std::vector<int> kc(d);
  while (true) {
    for (int p = 0; p < d; ++p) kc[p] = k[p] + s[p];
    out.emplace_back(dims.flatten(k), dims.flatten(kc));
    int p = d - 1;
    while (p >= 0 && k[p] == hi[p]) {
      k[p] = lo[p];
      --p;
    }
    if (p < 0) break;
    ++k[p];
  }
  return out;
}

CMat build_toeplitz(const ToeplitzParams& u) {
  const long M = u.dims.total();
  const auto shifts = canonical_shifts(u.dims);
  if (u.coeffs.size() != shifts.size())
    throw std::invalid_argument("build_toeplitz: coefficient count mismatch");
  CMat A = CMat::Zero(M, M);
  A.diagonal().setConstant(cplx(u.center, 0.0));
  for (size_t i = 0; i < shifts.size(); ++i) {
    const cplx v = u.coeffs[i];
    for (const auto& [r, c] : shift_positions(u.dims, shifts[i])) {
      A(r, c) = v;
      A(c, r) = std::conj(v);
    }
  }
  return A;
}

ToeplitzParams diag_sums(const CMat& A, const DimSpec& dims) {
  const long M = dims.total();
  if (A.rows() != M || A.cols() != M)
    throw std::invalid_argument("diag_sums: size mismatch");
  ToeplitzParams out = ToeplitzParams::zero(dims);
  out.center = A.trace().real();
  const auto shifts = canonical_shifts(dims);
  for (size_t i = 0; i < shifts.size(); ++i) {
    cplx acc(0.0, 0.0);
    // Positions of shift -s are the transposes of the positions of s.
    for (const auto& [r, c] : shift_positions(dims, shifts[i])) acc += A(c, r);
    out.coeffs[i] = acc;
  }
  return out;
}

OccurrenceCounts occurrence_counts(const DimSpec& dims) {
  OccurrenceCounts f;
  f.center = dims.total();
  const auto shifts = canonical_shifts(dims);
  f.coeffs.reserve(shifts.size());
  for (const auto& s : shifts) f.coeffs.push_back(shift_count(dims, s));
  return f;
}

}  // namespace mdanm
