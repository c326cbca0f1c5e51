#pragma once

#include "mdanm/model.hpp"
#include "mdanm/rng.hpp"
#include "mdanm/solver.hpp"
#include "mdanm/toeplitz.hpp"

// Shared fixtures and finite-difference oracles.  Everything here is an
// independent route: the FD code below only evaluates the Lagrangian and
// never calls the analytic gradients it is used to check.
namespace mdanm::testing {

inline CMat random_complex(long rows, long cols, Rng& rng) {
  CMat A(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) A(i, j) = rng.cgaussian();
  return A;
}

inline CMat random_hermitian(long n, Rng& rng) {
  const CMat A = random_complex(n, n, rng);
  return 0.5 * (A + A.adjoint());
}

// Uniform frequency draws with a mild separation so Gram matrices in the
// fixtures stay comfortably nonsingular.
inline FrequencySet draw_frequencies(const DimSpec& dims, int r, Rng& rng) {
  FrequencySet F{dims, RMat(r, dims.d())};
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (int i = 0; i < r; ++i)
      for (int p = 0; p < dims.d(); ++p) F.freqs(i, p) = rng.uniform_pos();
    bool ok = true;
    for (int i = 0; i < r && ok; ++i)
      for (int j = i + 1; j < r && ok; ++j) {
        double dmax = 0.0;
        for (int p = 0; p < dims.d(); ++p) {
          const double w = std::fabs(F.freqs(i, p) - F.freqs(j, p));
          dmax = std::max(dmax, std::min(w, 1.0 - w));
        }
        ok = dmax > 0.15;
      }
    if (ok) return F;
  }
  throw std::runtime_error("draw_frequencies failed");
}

inline ToeplitzParams random_params(const DimSpec& dims, Rng& rng) {
  ToeplitzParams u = ToeplitzParams::zero(dims);
  u.center = rng.gaussian();
  for (auto& c : u.coeffs) c = rng.cgaussian();
  return u;
}

inline double params_norm(const ToeplitzParams& u) {
  double s = u.center * u.center;
  for (const auto& c : u.coeffs) s += std::norm(c);
  return std::sqrt(s);
}

inline double params_dist(const ToeplitzParams& a, const ToeplitzParams& b) {
  double s = (a.center - b.center) * (a.center - b.center);
  for (size_t i = 0; i < a.coeffs.size(); ++i)
    s += std::norm(a.coeffs[i] - b.coeffs[i]);
  return std::sqrt(s);
}

// A random problem/state pair with Hermitian W, V, Lambda, suitable for
// gradient and stationarity checks.
struct RandomInstance {
  Problem pb;
  AdmmState state;
};

inline RandomInstance random_instance(const DimSpec& dims, int K, int m,
                                      std::uint64_t seed,
                                      bool identity_phi = false) {
  Rng rng(seed);
  const long M = dims.total();
  RandomInstance ri{Problem{dims, CMat(), CMat(), 0.0, 0.0}, AdmmState{}};
  ri.pb.Phi = identity_phi ? CMat(CMat::Identity(M, M))
                           : random_complex(m, M, rng);
  ri.pb.Y = random_complex(ri.pb.Phi.rows(), K, rng);
  ri.pb.tau = 0.1 + rng.uniform();
  ri.pb.rho = 0.1 + rng.uniform();
  ri.state = init_state(ri.pb, rng.next_u64());
  return ri;
}

// Central finite differences of the Lagrangian over every real coordinate of
// one block, combined with the conjugate-Wirtinger convention
// 1/2 (d/dRe + j d/dIm).
inline CMat fd_grad_W(const AdmmState& s, const Problem& pb,
                      double h = 1e-6) {
  AdmmState t = s;
  CMat g(s.K, s.K);
  for (int j = 0; j < s.K; ++j)
    for (int i = 0; i < s.K; ++i) {
      const cplx orig = t.W(i, j);
      t.W(i, j) = orig + h;
      const double fpr = lagrangian(t, pb);
      t.W(i, j) = orig - h;
      const double fmr = lagrangian(t, pb);
      t.W(i, j) = orig + cplx(0.0, h);
      const double fpi = lagrangian(t, pb);
      t.W(i, j) = orig - cplx(0.0, h);
      const double fmi = lagrangian(t, pb);
      t.W(i, j) = orig;
      g(i, j) = 0.5 * cplx((fpr - fmr) / (2.0 * h), (fpi - fmi) / (2.0 * h));
    }
  return g;
}

inline CMat fd_grad_Z(const AdmmState& s, const Problem& pb,
                      double h = 1e-6) {
  AdmmState t = s;
  CMat g(s.M, s.K);
  for (int j = 0; j < s.K; ++j)
    for (long i = 0; i < s.M; ++i) {
      const cplx orig = t.Z(i, j);
      t.Z(i, j) = orig + h;
      const double fpr = lagrangian(t, pb);
      t.Z(i, j) = orig - h;
      const double fmr = lagrangian(t, pb);
      t.Z(i, j) = orig + cplx(0.0, h);
      const double fpi = lagrangian(t, pb);
      t.Z(i, j) = orig - cplx(0.0, h);
      const double fmi = lagrangian(t, pb);
      t.Z(i, j) = orig;
      g(i, j) = 0.5 * cplx((fpr - fmr) / (2.0 * h), (fpi - fmi) / (2.0 * h));
    }
  return g;
}

inline ToeplitzParams fd_grad_u(const AdmmState& s, const Problem& pb,
                                double h = 1e-6) {
  AdmmState t = s;
  ToeplitzParams g = ToeplitzParams::zero(pb.dims);
  {
    const double orig = t.u.center;
    t.u.center = orig + h;
    const double fp = lagrangian(t, pb);
    t.u.center = orig - h;
    const double fm = lagrangian(t, pb);
    t.u.center = orig;
    g.center = (fp - fm) / (2.0 * h);
  }
  for (size_t i = 0; i < g.coeffs.size(); ++i) {
    const cplx orig = t.u.coeffs[i];
    t.u.coeffs[i] = orig + h;
    const double fpr = lagrangian(t, pb);
    t.u.coeffs[i] = orig - h;
    const double fmr = lagrangian(t, pb);
    t.u.coeffs[i] = orig + cplx(0.0, h);
    const double fpi = lagrangian(t, pb);
    t.u.coeffs[i] = orig - cplx(0.0, h);
    const double fmi = lagrangian(t, pb);
    t.u.coeffs[i] = orig;
    g.coeffs[i] =
        0.5 * cplx((fpr - fmr) / (2.0 * h), (fpi - fmi) / (2.0 * h));
  }
  return g;
}

}  // namespace mdanm::testing
