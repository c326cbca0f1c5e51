#include "mdanm/model.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace mdanm;
using namespace mdanm::testing;

TEST_CASE("atom examples") {
  SUBCASE("f = (1,..,1) gives the constant vector") {
    for (const DimSpec& dims : {DimSpec({3}), DimSpec({2, 3})}) {
      RVec f = RVec::Ones(dims.d());
      const CVec a = atom(f, dims);
      const double want = 1.0 / std::sqrt(static_cast<double>(dims.total()));
      for (long i = 0; i < a.size(); ++i)
        CHECK(std::abs(a[i] - want) < 1e-14);
    }
  }
  SUBCASE("dims=[2], f=0.5 alternates") {
    RVec f(1);
    f << 0.5;
    const CVec a = atom(f, DimSpec({2}));
    CHECK(std::abs(a[0] - cplx(-1.0, 0.0) / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(a[1] - cplx(1.0, 0.0) / std::sqrt(2.0)) < 1e-14);
  }
  SUBCASE("dims=[2,2] vectorizes the outer product") {
    RVec f(2);
    f << 0.5, 1.0;
    const CVec a = atom(f, DimSpec({2, 2}));
    // Per-dimension factors (k = 1, 2): (-1, 1)/sqrt(2) and (1, 1)/sqrt(2).
    CVec a1(2), a2(2);
    a1 << cplx(-1, 0), cplx(1, 0);
    a2 << cplx(1, 0), cplx(1, 0);
    for (int k1 = 0; k1 < 2; ++k1)
      for (int k2 = 0; k2 < 2; ++k2)
        CHECK(std::abs(a[2 * k1 + k2] - a1[k1] * a2[k2] / 2.0) < 1e-14);
  }
  SUBCASE("domain errors") {
    RVec f(1);
    f << 0.0;
    CHECK_THROWS_AS(atom(f, DimSpec({2})), std::invalid_argument);
    f << 1.5;
    CHECK_THROWS_AS(atom(f, DimSpec({2})), std::invalid_argument);
  }
}

namespace {

// Direct evaluation of the atom formula without the domain check, so the
// 1-periodicity of the convention can be probed outside (0,1].
CVec atom_formula(const RVec& f, const DimSpec& dims) {
  const long M = dims.total();
  CVec a(M);
  for (long idx = 0; idx < M; ++idx) {
    const auto k = dims.unflatten(idx);
    double phase = 0.0;
    for (int p = 0; p < dims.d(); ++p) phase += k[p] * f[p];
    phase *= -2.0 * mdanm::pi;
    a[idx] = cplx(std::cos(phase), std::sin(phase)) /
             std::sqrt(static_cast<double>(M));
  }
  return a;
}

}  // namespace

TEST_CASE("atom properties: unit norm and 1-periodicity") {
  Rng rng(3);
  for (const DimSpec& dims : {DimSpec({5}), DimSpec({3, 4}), DimSpec({2, 3, 2})}) {
    for (int rep = 0; rep < 20; ++rep) {
      RVec f(dims.d());
      for (int p = 0; p < dims.d(); ++p) f[p] = rng.uniform_pos();
      const CVec a = atom(f, dims);
      CHECK(std::abs(a.norm() - 1.0) < 1e-12);
      const int p = static_cast<int>(rng.next_u64() % dims.d());
      RVec fp = f;
      fp[p] += 1.0;
      CHECK((atom_formula(fp, dims) - a).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("steering matrix shapes and degenerate cases") {
  const DimSpec dims({3, 3});
  SUBCASE("r = 0") {
    FrequencySet F{dims, RMat(0, 2)};
    const CMat A = steering_matrix(F);
    CHECK(A.rows() == 9);
    CHECK(A.cols() == 0);
  }
  SUBCASE("single atom column") {
    FrequencySet F{dims, RMat(1, 2)};
    F.freqs << 0.3, 0.7;
    const CMat A = steering_matrix(F);
    CHECK((A.col(0) - atom(F.freqs.row(0).transpose(), dims)).norm() == 0.0);
  }
  SUBCASE("identical frequencies give identical columns") {
    FrequencySet F{dims, RMat(2, 2)};
    F.freqs << 0.3, 0.7, 0.3, 0.7;
    const CMat A = steering_matrix(F);
    CHECK((A.col(0) - A.col(1)).norm() == 0.0);
  }
}

TEST_CASE("synthesize") {
  const DimSpec dims({2, 2});
  FrequencySet F{dims, RMat(2, 2)};
  F.freqs << 0.25, 0.75, 0.6, 0.2;
  SUBCASE("zero amplitudes") {
    CHECK(synthesize(F, CMat::Zero(2, 3)).norm() == 0.0);
  }
  SUBCASE("single unit amplitude reproduces the atom") {
    FrequencySet F1{dims, F.freqs.topRows(1)};
    CMat S = CMat::Ones(1, 1);
    CHECK((synthesize(F1, S) - atom(F.freqs.row(0).transpose(), dims)).norm() ==
          0.0);
  }
  SUBCASE("two unit amplitudes sum the atoms") {
    CMat S = CMat::Ones(2, 1);
    const CMat Z = synthesize(F, S);
    const CMat expect = atom(F.freqs.row(0).transpose(), dims) +
                        atom(F.freqs.row(1).transpose(), dims);
    CHECK((Z - expect).norm() < 1e-14);
    CHECK(Z.norm() <= 2.0 + 1e-12);
  }
  SUBCASE("linearity in the amplitudes") {
    Rng rng(5);
    const CMat S1 = random_complex(2, 3, rng);
    const CMat S2 = random_complex(2, 3, rng);
    const cplx alpha = rng.cgaussian(), beta = rng.cgaussian();
    const CMat lhs = synthesize(F, alpha * S1 + beta * S2);
    const CMat rhs = alpha * synthesize(F, S1) + beta * synthesize(F, S2);
    CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
  }
  SUBCASE("shape mismatch throws") {
    CHECK_THROWS_AS(synthesize(F, CMat::Zero(3, 2)), std::invalid_argument);
  }
}

TEST_CASE("gaussian compressor") {
  const DimSpec dims({3, 3, 3});
  SUBCASE("identity flag") {
    const Compressor C = Compressor::identity(dims);
    CHECK((C.Phi - CMat::Identity(27, 27)).norm() == 0.0);
    CHECK(C.rate() == 1.0);
  }
  SUBCASE("row count from the compression rate") {
    // m = floor(0.75 * 27) = 20
    Rng rng(9);
    const int m = static_cast<int>(0.75 * dims.total());
    CHECK(m == 20);
    const Compressor C = gaussian_compressor(m, dims, rng);
    CHECK(C.measurements() == 20);
    CHECK(C.Phi.cols() == 27);
  }
  SUBCASE("unit columns and determinism") {
    Rng r1(42), r2(42);
    const Compressor a = gaussian_compressor(10, dims, r1);
    const Compressor b = gaussian_compressor(10, dims, r2);
    CHECK((a.Phi - b.Phi).norm() == 0.0);
    for (long j = 0; j < a.Phi.cols(); ++j)
      CHECK(std::abs(a.Phi.col(j).norm() - 1.0) < 1e-12);
  }
  SUBCASE("m out of range") {
    Rng rng(1);
    CHECK_THROWS_AS(gaussian_compressor(0, dims, rng), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_compressor(28, dims, rng), std::invalid_argument);
  }
}

TEST_CASE("observe") {
  const DimSpec dims({4});
  Rng rng(17);
  const CMat Z = random_complex(4, 5, rng);
  const Compressor C = Compressor::identity(dims);
  SUBCASE("noiseless is exact") {
    Rng nr(1);
    const Observation obs = observe(C, Z, 0.0, nr);
    CHECK((obs.Y - Z).norm() == 0.0);
  }
  SUBCASE("noise power matches the per-entry convention") {
    // Monte-Carlo check with m*K = 10^4 entries.
    Rng nr(33);
    const CMat Z0 = CMat::Zero(100, 100);
    const Compressor C0{CMat::Identity(100, 100)};
    const Observation obs = observe(C0, Z0, 1.0, nr);
    const double mean_power = obs.Y.squaredNorm() / 1e4;
    CHECK(mean_power == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("identical seeds give identical observations") {
    Rng n1(7), n2(7);
    const Observation a = observe(C, Z, 0.3, n1);
    const Observation b = observe(C, Z, 0.3, n2);
    CHECK((a.Y - b.Y).norm() == 0.0);
  }
  SUBCASE("shape mismatch throws") {
    Rng nr(1);
    CHECK_THROWS_AS(observe(C, CMat::Zero(5, 2), 0.0, nr),
                    std::invalid_argument);
  }
}
