#include "mdanm/eadf.hpp"

#include "mdanm/matio.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cstdio>

using namespace mdanm;
using namespace mdanm::testing;

namespace {

// Per-source unit-modulus factor between the centered Fourier index and the
// 1-based atom index: exp(-j ((L1+1) az + (L2+1) el) / 2).
cplx index_phase(const EadfModel& m, double az, double el) {
  const double ph = -0.5 * ((m.L1 + 1) * az + (m.L2 + 1) * el);
  return {std::cos(ph), std::sin(ph)};
}

}  // namespace

TEST_CASE("stacked circular array geometry") {
  SUBCASE("default build") {
    const ArrayGeometry g = stacked_circular_array();
    CHECK(g.count() == 36);
    for (int m = 0; m < g.count(); ++m) {
      const double rxy = std::hypot(g.positions(m, 0), g.positions(m, 1));
      CHECK(rxy == doctest::Approx(0.375));
    }
    // Ring heights centered about zero.
    CHECK(g.positions.col(2).minCoeff() == doctest::Approx(-0.375));
    CHECK(g.positions.col(2).maxCoeff() == doctest::Approx(0.375));
    CHECK(g.positions.col(2).sum() == doctest::Approx(0.0));
  }
  SUBCASE("degenerate single element") {
    const ArrayGeometry g = stacked_circular_array(1, 1);
    CHECK(g.count() == 1);
    CHECK(g.positions(0, 0) == doctest::Approx(0.375));
    CHECK(g.positions(0, 1) == doctest::Approx(0.0));
    CHECK(g.positions(0, 2) == doctest::Approx(0.0));
  }
}

TEST_CASE("ideal response basics") {
  const ArrayGeometry g = stacked_circular_array();
  SUBCASE("unit modulus everywhere") {
    const CVec r = ideal_response(g, 1.2, 0.7);
    for (int m = 0; m < r.size(); ++m)
      CHECK(std::abs(r[m]) == doctest::Approx(1.0));
  }
  SUBCASE("origin element sees phase zero") {
    ArrayGeometry origin;
    origin.positions.setZero(1, 3);
    for (double az : {0.0, 1.0, 4.0})
      CHECK(std::abs(ideal_response(origin, az, 0.5)[0] - cplx(1, 0)) <
            1e-14);
  }
  SUBCASE("azimuth is 2 pi periodic") {
    const CVec a = ideal_response(g, 0.9, 1.1);
    const CVec b = ideal_response(g, 0.9 + 2.0 * pi, 1.1);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("fit_eadf on an isotropic element is a delta at (0,0)") {
  ArrayGeometry origin;
  origin.positions.setZero(1, 3);
  const EadfModel m = fit_eadf(origin, 5, 5);
  const int h1 = 2, h2 = 2;
  for (int j1 = 0; j1 < 5; ++j1)
    for (int j2 = 0; j2 < 5; ++j2) {
      const cplx c = m.coeffs(0, j1 * 5 + j2);
      if (j1 == h1 && j2 == h2)
        CHECK(std::abs(c - std::sqrt(25.0)) < 1e-10);
      else
        CHECK(std::abs(c) < 1e-10);
    }
  // Reconstruction is the constant 1.
  CHECK(std::abs(eadf_response(m, 0.123, 2.5)[0] - cplx(1, 0)) < 1e-10);
}

TEST_CASE("fit_eadf rejects even truncation lengths and coarse grids") {
  const ArrayGeometry g = stacked_circular_array(1, 2);
  CHECK_THROWS_AS(fit_eadf(g, 4, 5), std::invalid_argument);
  CHECK_THROWS_AS(fit_eadf(g, 5, 5, 8, 12), std::invalid_argument);
}

TEST_CASE("eadf round trip on the synthetic array grid") {
  const ArrayGeometry g = stacked_circular_array();
  const int L = 15, Q = 2 * L + 2;
  const SampledManifold man = sample_manifold(g, Q, Q);
  const EadfModel model = fit_eadf(man, L, L);

  double worst = 0.0;
  for (int a = 0; a < Q; ++a)
    for (int b = 0; b < Q; ++b) {
      const CVec rec = eadf_response(model, 2.0 * pi * a / Q, 2.0 * pi * b / Q);
      const CVec ref = man.samples.col(static_cast<long>(a) * Q + b);
      worst = std::max(worst, (rec - ref).norm() / ref.norm());
    }
  CHECK(worst < 1e-3);
}

TEST_CASE("eadf coefficient energy decays toward the truncation edge") {
  const EadfModel m = fit_eadf(stacked_circular_array(), 15, 15);
  double total = 0.0, edge = 0.0;
  for (int j1 = 0; j1 < 15; ++j1)
    for (int j2 = 0; j2 < 15; ++j2) {
      const double e = m.coeffs.col(j1 * 15 + j2).squaredNorm();
      total += e;
      if (j1 == 0 || j1 == 14 || j2 == 0 || j2 == 14) edge += e;
    }
  CHECK(edge < 0.01 * total);
}

TEST_CASE("eadf_response properties") {
  const EadfModel m = fit_eadf(stacked_circular_array(), 7, 7);
  SUBCASE("linear in the coefficients") {
    EadfModel twice = m;
    twice.coeffs *= cplx(2.0, 0.0);
    const CVec a = eadf_response(m, 0.4, 1.3);
    const CVec b = eadf_response(twice, 0.4, 1.3);
    CHECK((b - 2.0 * a).norm() < 1e-13 * a.norm());
  }
  SUBCASE("2 pi periodic in azimuth") {
    const CVec a = eadf_response(m, 0.4, 1.3);
    const CVec b = eadf_response(m, 0.4 + 2.0 * pi, 1.3);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("matches the direct double sum") {
    const double az = 2.1, el = 0.8;
    const CVec got = eadf_response(m, az, el);
    for (int ant = 0; ant < 3; ++ant) {
      cplx acc(0.0, 0.0);
      for (int l1 = -3; l1 <= 3; ++l1)
        for (int l2 = -3; l2 <= 3; ++l2) {
          const cplx gc = m.coeffs(ant, (l1 + 3) * 7 + (l2 + 3));
          const double ph = az * l1 + el * l2;
          acc += gc * cplx(std::cos(ph), std::sin(ph));
        }
      acc /= 7.0;  // 1/sqrt(L1 L2)
      CHECK(std::abs(acc - got[ant]) < 1e-12);
    }
  }
}

TEST_CASE("fitting the reconstruction is a projection") {
  const ArrayGeometry g = stacked_circular_array(2, 6);
  const int L = 9, Q = 2 * L + 2;
  const EadfModel m = fit_eadf(g, L, L, Q, Q);
  // Sample the reconstructed manifold and fit again.
  SampledManifold rec;
  rec.grid_az = Q;
  rec.grid_el = Q;
  rec.samples.resize(m.antennas, static_cast<long>(Q) * Q);
  for (int a = 0; a < Q; ++a)
    for (int b = 0; b < Q; ++b)
      rec.samples.col(static_cast<long>(a) * Q + b) =
          eadf_response(m, 2.0 * pi * a / Q, 2.0 * pi * b / Q);
  const EadfModel m2 = fit_eadf(rec, L, L);
  CHECK((m2.coeffs - m.coeffs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("angle / frequency conversions") {
  SUBCASE("round trip on the open domain") {
    for (double t : {0.3, 1.7, 2.9, 4.4, 6.0})
      CHECK(frequency_to_angle(angle_to_frequency(t)) ==
            doctest::Approx(t).epsilon(1e-12));
  }
  SUBCASE("theta = 0 maps to f = 1 and back") {
    CHECK(angle_to_frequency(0.0) == 1.0);
    CHECK(frequency_to_angle(1.0) == doctest::Approx(0.0));
  }
  SUBCASE("elevation folding is flagged and physical") {
    FrequencySet F{DimSpec({5, 5}), RMat(1, 2)};
    F.freqs(0, 0) = angle_to_frequency(1.0);
    F.freqs(0, 1) = angle_to_frequency(1.5 * pi);  // beyond pi
    const auto angles = angles_from_frequencies(F);
    CHECK(angles[0].folded);
    CHECK(angles[0].elevation == doctest::Approx(0.5 * pi));
    CHECK(angles[0].azimuth == doctest::Approx(1.0 + pi));
    // The folded direction is the same physical wave vector.
    const ArrayGeometry g = stacked_circular_array();
    const CVec a = ideal_response(g, 1.0, 1.5 * pi);
    const CVec b = ideal_response(g, angles[0].azimuth, angles[0].elevation);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("doa_problem consistency with the response model") {
  const EadfModel model = fit_eadf(stacked_circular_array(), 15, 15);
  const CMat Psi = CMat::Identity(36, 36);
  RMat angles(1, 2);
  angles << 1.1, 0.6 * pi;
  const CMat S = CMat::Ones(1, 3);
  Rng nr(1);
  const DoaProblem dp =
      doa_problem(model, Psi, angles, S, 0.0, 0.01, 0.05, nr);

  SUBCASE("dims and ground truth") {
    CHECK(dp.problem.dims == DimSpec({15, 15}));
    CHECK(dp.truth.freqs(0, 0) ==
          doctest::Approx(angle_to_frequency(1.1)));
    CHECK(dp.truth.freqs(0, 1) ==
          doctest::Approx(angle_to_frequency(0.6 * pi)));
  }
  SUBCASE("Phi * atom equals the response up to the index phase") {
    const CVec a = atom(dp.truth.freqs.row(0).transpose(), dp.problem.dims);
    const CVec via_atom = dp.problem.Phi * a;
    const CVec direct = eadf_response(model, 1.1, 0.6 * pi);
    const cplx c = index_phase(model, 1.1, 0.6 * pi);
    CHECK((c * via_atom - direct).norm() < 1e-10 * direct.norm());
    // Noiseless observations are the scaled responses.
    CHECK((dp.problem.Y - direct * S.row(0)).norm() < 1e-12);
  }
  SUBCASE("two sources give two distinct truth points") {
    RMat two(2, 2);
    two << 1.1, 0.6 * pi, 2.3, 0.4 * pi;
    Rng nr2(2);
    const DoaProblem d2 = doa_problem(model, Psi, two, CMat::Ones(2, 2), 0.0,
                                      0.01, 0.05, nr2);
    CHECK((d2.truth.freqs.row(0) - d2.truth.freqs.row(1)).norm() > 1e-6);
  }
}

TEST_CASE("two-model consistency on the sampling grid") {
  // The identity that makes DOA a frequency-estimation problem:
  // G a(f(theta)) reproduces the physical manifold column up to the
  // index phase and the truncation error of the series.
  const ArrayGeometry g = stacked_circular_array();
  const int L = 15, Q = 2 * L + 2;
  const SampledManifold man = sample_manifold(g, Q, Q);
  const EadfModel model = fit_eadf(man, L, L);
  const DimSpec dims({L, L});

  double worst = 0.0;
  for (int a = 0; a < Q; ++a)
    for (int b = 0; b < Q; ++b) {
      const double az = 2.0 * pi * a / Q, el = 2.0 * pi * b / Q;
      RVec f(2);
      f << angle_to_frequency(az), angle_to_frequency(el);
      const CVec via_atom =
          index_phase(model, az, el) * (model.coeffs * atom(f, dims));
      const CVec ref = man.samples.col(static_cast<long>(a) * Q + b);
      worst = std::max(worst, (via_atom - ref).norm() / ref.norm());
    }
  CHECK(worst < 1e-3);
}

TEST_CASE("manifold file round trip") {
  const ArrayGeometry g = stacked_circular_array(1, 4);
  const SampledManifold man = sample_manifold(g, 8, 8);
  const std::string path = "test_manifold_tmp.txt";
  save_manifold(path, man);
  const SampledManifold back = load_manifold(path);
  CHECK(back.grid_az == 8);
  CHECK(back.grid_el == 8);
  CHECK((back.samples - man.samples).norm() == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_manifold("does_not_exist_manifold.txt"), IoError);
}
