#include "mdanm/eadf.hpp"

#include "mdanm/matio.hpp"

#include <cmath>
#include <fstream>

namespace mdanm {

ArrayGeometry stacked_circular_array(int rings, int per_ring, double dz,
                                     double diameter) {
  if (rings < 1 || per_ring < 1)
    throw std::invalid_argument("stacked_circular_array: counts must be >= 1");
  const double radius = 0.5 * diameter;
  ArrayGeometry geom;
  geom.positions.resize(static_cast<long>(rings) * per_ring, 3);
  long row = 0;
  for (int s = 0; s < rings; ++s) {
    const double z = (s - 0.5 * (rings - 1)) * dz;
    for (int i = 0; i < per_ring; ++i, ++row) {
      const double phi = 2.0 * pi * i / per_ring;
      geom.positions(row, 0) = radius * std::cos(phi);
      geom.positions(row, 1) = radius * std::sin(phi);
      geom.positions(row, 2) = z;
    }
  }
  return geom;
}

CVec ideal_response(const ArrayGeometry& geom, double az, double el) {
  Eigen::Vector3d kappa(std::sin(el) * std::cos(az),
                        std::sin(el) * std::sin(az), std::cos(el));
  CVec r(geom.count());
  for (int m = 0; m < geom.count(); ++m) {
    const double phase = 2.0 * pi * geom.positions.row(m).dot(kappa);
    r[m] = cplx(std::cos(phase), std::sin(phase));
  }
  return r;
}

SampledManifold sample_manifold(const ArrayGeometry& geom, int grid_az,
                                int grid_el) {
  SampledManifold man;
  man.grid_az = grid_az;
  man.grid_el = grid_el;
  man.samples.resize(geom.count(), static_cast<long>(grid_az) * grid_el);
  for (int a = 0; a < grid_az; ++a)
    for (int b = 0; b < grid_el; ++b)
      man.samples.col(static_cast<long>(a) * grid_el + b) =
          ideal_response(geom, 2.0 * pi * a / grid_az, 2.0 * pi * b / grid_el);
  return man;
}

EadfModel fit_eadf(const SampledManifold& man, int L1, int L2) {
  if (L1 % 2 == 0 || L2 % 2 == 0)
    throw std::invalid_argument("fit_eadf: truncation lengths must be odd");
  const int Q1 = man.grid_az;
  const int Q2 = man.grid_el;
  if (Q1 < 2 * L1 || Q2 < 2 * L2)
    throw std::invalid_argument("fit_eadf: sampling grid too coarse");

  const int h1 = (L1 - 1) / 2;
  const int h2 = (L2 - 1) / 2;
  CMat W1(Q1, L1), W2(Q2, L2);
  for (int a = 0; a < Q1; ++a)
    for (int j = 0; j < L1; ++j) {
      const double ph = -2.0 * pi * a * (j - h1) / Q1;
      W1(a, j) = cplx(std::cos(ph), std::sin(ph));
    }
  for (int b = 0; b < Q2; ++b)
    for (int j = 0; j < L2; ++j) {
      const double ph = -2.0 * pi * b * (j - h2) / Q2;
      W2(b, j) = cplx(std::cos(ph), std::sin(ph));
    }

  EadfModel model;
  model.antennas = static_cast<int>(man.samples.rows());
  model.L1 = L1;
  model.L2 = L2;
  model.coeffs.resize(model.antennas, static_cast<long>(L1) * L2);
  const double scale =
      std::sqrt(static_cast<double>(L1) * L2) / (static_cast<double>(Q1) * Q2);
  CMat R(Q1, Q2);
  for (int m = 0; m < model.antennas; ++m) {
    for (int a = 0; a < Q1; ++a)
      for (int b = 0; b < Q2; ++b)
        R(a, b) = man.samples(m, static_cast<long>(a) * Q2 + b);
    const CMat C = scale * (W1.transpose() * R * W2);
    for (int j1 = 0; j1 < L1; ++j1)
      for (int j2 = 0; j2 < L2; ++j2)
        model.coeffs(m, static_cast<long>(j1) * L2 + j2) = C(j1, j2);
  }
  return model;
}

EadfModel fit_eadf(const ArrayGeometry& geom, int L1, int L2, int grid_az,
                   int grid_el) {
  if (grid_az == 0) grid_az = 2 * L1 + 2;
  if (grid_el == 0) grid_el = 2 * L2 + 2;
  return fit_eadf(sample_manifold(geom, grid_az, grid_el), L1, L2);
}

CVec eadf_response(const EadfModel& model, double az, double el) {
  const int h1 = (model.L1 - 1) / 2;
  const int h2 = (model.L2 - 1) / 2;
  CVec e(static_cast<long>(model.L1) * model.L2);
  for (int j1 = 0; j1 < model.L1; ++j1)
    for (int j2 = 0; j2 < model.L2; ++j2) {
      const double ph = az * (j1 - h1) + el * (j2 - h2);
      e[static_cast<long>(j1) * model.L2 + j2] =
          cplx(std::cos(ph), std::sin(ph));
    }
  return model.coeffs * e /
         std::sqrt(static_cast<double>(model.L1) * model.L2);
}

double angle_to_frequency(double theta) {
  double f = std::fmod(-theta / (2.0 * pi), 1.0);
  if (f <= 0.0) f += 1.0;
  return f;
}

double frequency_to_angle(double f) {
  double t = std::fmod(-2.0 * pi * f, 2.0 * pi);
  if (t < 0.0) t += 2.0 * pi;
  return t;
}

std::vector<DoaAngles> angles_from_frequencies(const FrequencySet& F) {
  if (F.dims.d() != 2)
    throw std::invalid_argument("angles_from_frequencies: need d = 2");
  std::vector<DoaAngles> out(F.count());
  for (int i = 0; i < F.count(); ++i) {
    DoaAngles a;
    a.azimuth = frequency_to_angle(F.freqs(i, 0));
    a.elevation = frequency_to_angle(F.freqs(i, 1));
    if (a.elevation > pi) {
      a.elevation = 2.0 * pi - a.elevation;
      a.azimuth = std::fmod(a.azimuth + pi, 2.0 * pi);
      a.folded = true;
    }
    out[i] = a;
  }
  return out;
}

DoaProblem doa_problem(const EadfModel& model, const CMat& Psi,
                       const RMat& angles, const CMat& S, double sigma2,
                       double tau, double rho, Rng& noise_rng) {
  if (angles.cols() != 2)
    throw std::invalid_argument("doa_problem: angles must be r x 2");
  const int r = static_cast<int>(angles.rows());
  if (S.rows() != r)
    throw std::invalid_argument("doa_problem: amplitude rows != source count");
  if (Psi.cols() != model.antennas)
    throw std::invalid_argument("doa_problem: Psi cols != antenna count");

  CMat R(model.antennas, r);
  for (int i = 0; i < r; ++i)
    R.col(i) = eadf_response(model, angles(i, 0), angles(i, 1));

  DoaProblem dp;
  dp.problem.dims = DimSpec({model.L1, model.L2});
  dp.problem.Phi = Psi * model.coeffs;
  dp.problem.tau = tau;
  dp.problem.rho = rho;
  CMat Y = Psi * (R * S);
  if (sigma2 > 0.0) {
    const double s = std::sqrt(sigma2 / 2.0);
    for (Eigen::Index j = 0; j < Y.cols(); ++j)
      for (Eigen::Index i = 0; i < Y.rows(); ++i)
        Y(i, j) += s * noise_rng.cgaussian();
  }
  dp.problem.Y = std::move(Y);

  dp.truth.dims = dp.problem.dims;
  dp.truth.freqs.resize(r, 2);
  for (int i = 0; i < r; ++i) {
    dp.truth.freqs(i, 0) = angle_to_frequency(angles(i, 0));
    dp.truth.freqs(i, 1) = angle_to_frequency(angles(i, 1));
  }
  return dp;
}

SampledManifold load_manifold(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  SampledManifold man;
  int antennas = 0;
  if (!(in >> antennas >> man.grid_az >> man.grid_el))
    throw IoError(path + ": bad header, expected 'antennas grid_az grid_el'");
  if (antennas < 1 || man.grid_az < 2 || man.grid_el < 2)
    throw IoError(path + ": invalid manifold header values");
  man.samples.resize(antennas, static_cast<long>(man.grid_az) * man.grid_el);
  for (int m = 0; m < antennas; ++m)
    for (long c = 0; c < man.samples.cols(); ++c) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im))
        throw IoError(path + ": truncated at antenna " + std::to_string(m) +
                      ", sample " + std::to_string(c));
      man.samples(m, c) = cplx(re, im);
    }
  return man;
}

void save_manifold(const std::string& path, const SampledManifold& man) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  out.precision(17);
  out << man.samples.rows() << ' ' << man.grid_az << ' ' << man.grid_el
      << '\n';
  for (long m = 0; m < man.samples.rows(); ++m) {
    for (long c = 0; c < man.samples.cols(); ++c) {
      if (c) out << ' ';
      out << man.samples(m, c).real() << ' ' << man.samples(m, c).imag();
    }
    out << '\n';
  }
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace mdanm
