#pragma once

#include "mdanm/types.hpp"

#include <utility>
#include <vector>

namespace mdanm {

/// Free parameters of a Hermitian d-level Toeplitz matrix: one real value for
/// the main diagonal plus one complex coefficient per canonical nonzero shift.
/// coeffs[i] belongs to canonical_shifts(dims)[i]; the coefficient of the
/// negated shift is its conjugate.
struct ToeplitzParams {
  DimSpec dims;
  double center = 0.0;
  std::vector<cplx> coeffs;

  static ToeplitzParams zero(const DimSpec& dims);
};

/// All lexicographically positive shift vectors for the given sizes, in
/// ascending lexicographic order.  Together with their negations and the zero
/// shift they cover every shift exactly once.
std::vector<ShiftVector> canonical_shifts(const DimSpec& dims);

/// Number of positions on the shifted diagonal s: prod_p (N_p - |s_p|).
long shift_count(const DimSpec& dims, const ShiftVector& s);

/// Flat (row, col) positions with per-dimension index difference col - row
/// equal to s; exactly the support of S_{N_1}^{s_1} x ... x S_{N_d}^{s_d}.
std::vector<std::pair<long, long>> shift_positions(const DimSpec& dims,
                                                   const ShiftVector& s);

/// Materialize the M x M Hermitian d-level Toeplitz matrix.
CMat build_toeplitz(const ToeplitzParams& u);

/// Adjoint of build_toeplitz (diagonal sums): center picks up Re tr(A) and
/// the coefficient at canonical shift s sums A over the positions of -s.
ToeplitzParams diag_sums(const CMat& A, const DimSpec& dims);

/// How often each free parameter occurs in the materialized matrix;
/// equals diag_sums applied to the all-ones matrix.
struct OccurrenceCounts {
  long center = 0;
  std::vector<long> coeffs;
};
OccurrenceCounts occurrence_counts(const DimSpec& dims);

}  // namespace mdanm
