#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mdanm {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Grid sizes N_1..N_d of the index set [N_1] x ... x [N_d].  Multi-indices
/// are 1-based; the flattening is row-major (last dimension fastest), so it
/// agrees with Kronecker products of per-dimension factors.
class DimSpec {
public:
  /// Empty placeholder (d = 0); every operation requires a real spec built
  /// through the validating constructor below.
  DimSpec() = default;

  explicit DimSpec(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("DimSpec: need d >= 1");
    total_ = 1;
    for (int n : dims_) {
      if (n < 2) throw std::invalid_argument("DimSpec: every N_p must be >= 2");
      total_ *= n;
    }
    strides_.assign(dims_.size(), 1);
    for (int p = static_cast<int>(dims_.size()) - 2; p >= 0; --p)
      strides_[p] = strides_[p + 1] * dims_[p + 1];
  }

  int d() const { return static_cast<int>(dims_.size()); }
  int size(int p) const { return dims_[p]; }
  const std::vector<int>& dims() const { return dims_; }
  long total() const { return total_; }
  const std::vector<long>& strides() const { return strides_; }

  /// 1-based multi-index -> 0-based flat index.
  long flatten(const std::vector<int>& k) const {
    long idx = 0;
    for (int p = 0; p < d(); ++p) idx += (k[p] - 1) * strides_[p];
    return idx;
  }

  /// 0-based flat index -> 1-based multi-index.
  std::vector<int> unflatten(long idx) const {
    std::vector<int> k(d());
    for (int p = 0; p < d(); ++p) {
      k[p] = static_cast<int>(idx / strides_[p]) + 1;
      idx %= strides_[p];
    }
    return k;
  }

  bool operator==(const DimSpec& o) const { return dims_ == o.dims_; }
  bool operator!=(const DimSpec& o) const { return !(*this == o); }

private:
  std::vector<int> dims_;
  std::vector<long> strides_;
  long total_ = 0;
};

/// Per-dimension index offset s with s_p in [-(N_p-1), N_p-1].
using ShiftVector = std::vector<int>;

inline bool shift_in_range(const DimSpec& dims, const ShiftVector& s) {
  if (static_cast<int>(s.size()) != dims.d()) return false;
  for (int p = 0; p < dims.d(); ++p)
    if (std::abs(s[p]) > dims.size(p) - 1) return false;
  return true;
}

/// True iff the first nonzero component is positive, or s is all zero.
inline bool is_canonical(const ShiftVector& s) {
  for (int v : s) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return true;
}

inline ShiftVector negated(const ShiftVector& s) {
  ShiftVector n(s.size());
  for (size_t i = 0; i < s.size(); ++i) n[i] = -s[i];
  return n;
}

inline bool is_zero_shift(const ShiftVector& s) {
  for (int v : s)
    if (v != 0) return false;
  return true;
}

}  // namespace mdanm
