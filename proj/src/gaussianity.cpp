#include "squeezelab/gaussianity.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace squeezelab {

SecondMoments closed_form_moments(const FourModeState& state) {
  const auto m = state.photons();
  const bool add = state.kind() == PhotonKind::Add;
  const int s = add ? 1 : -1;
  const int first = state.config() ? state.config()->lower_bound() : 0;
  const int last = state.truncation_n();

  // Lower limits of r1, r2 and their upper offsets below n.
  const int r1_lo = add ? 0 : m[2];
  const int r2_lo = add ? 0 : m[3];
  const int r1_off = add ? 0 : m[0];
  const int r2_off = add ? 0 : m[1];

  auto c = [&](int n, int r1, int r2) { return state.coefficient(n, r1, r2); };

  double n1 = 0, n2 = 0, n3 = 0, n4 = 0;
  double q12 = 0, q13 = 0, q14 = 0, q23 = 0, q24 = 0, q34 = 0;
  for (int n = first; n <= last; ++n) {
    for (int r1 = r1_lo; r1 <= n - r1_off; ++r1) {
      for (int r2 = r2_lo; r2 <= n - r2_off; ++r2) {
        const double p = c(n, r1, r2);
        const double p2 = p * p;
        n1 += p2 * (n - r1);
        n2 += p2 * (n - r2);
        n3 += p2 * r1;
        n4 += p2 * r2;

        // Occupations of the ket this coefficient multiplies.
        const double o1 = n - r1 + s * m[0];
        const double o2 = n - r2 + s * m[1];
        const double o3 = r1 + s * m[2];
        const double o4 = r2 + s * m[3];

        q12 += p * c(n + 1, r1, r2) * std::sqrt((o1 + 1) * (o2 + 1));
        if (r1 <= n - r1_off - 1) q13 += p * c(n, r1 + 1, r2) * std::sqrt(o1 * (o3 + 1));
        q14 += p * c(n + 1, r1, r2 + 1) * std::sqrt((o1 + 1) * (o4 + 1));
        q23 += p * c(n + 1, r1 + 1, r2) * std::sqrt((o2 + 1) * (o3 + 1));
        if (r2 <= n - r2_off - 1) q24 += p * c(n, r1, r2 + 1) * std::sqrt(o2 * (o4 + 1));
        q34 += p * c(n + 1, r1 + 1, r2 + 1) * std::sqrt((o3 + 1) * (o4 + 1));
      }
    }
  }

  SecondMoments out;
  auto& qq = out.qq;
  qq[0][0] = 1 + 2 * s * m[0] + 2 * n1;
  qq[1][1] = 1 + 2 * s * m[1] + 2 * n2;
  qq[2][2] = 1 + 2 * s * m[2] + 2 * n3;
  qq[3][3] = 1 + 2 * s * m[3] + 2 * n4;
  qq[0][1] = qq[1][0] = 2 * q12;
  qq[0][2] = qq[2][0] = 2 * q13;
  qq[0][3] = qq[3][0] = 2 * q14;
  qq[1][2] = qq[2][1] = 2 * q23;
  qq[1][3] = qq[3][1] = 2 * q24;
  qq[2][3] = qq[3][2] = 2 * q34;
  return out;
}

CovarianceMatrix assemble_covariance(const SecondMoments& moments) {
  // +1: identity block, -1: diag(1, -1) block.
  static constexpr int kPattern[4][4] = {
      {1, -1, 1, -1},
      {-1, 1, -1, 1},
      {1, -1, 1, -1},
      {-1, 1, -1, 1},
  };
  CovarianceMatrix sigma = CovarianceMatrix::Zero(8, 8);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double v = moments.qq[i][j];
      sigma(2 * i, 2 * j) = v;
      sigma(2 * i + 1, 2 * j + 1) = kPattern[i][j] * v;
    }
  return sigma;
}

double max_first_moment(const AmplitudeTensor& state) {
  const double norm = norm_squared(state);
  double worst = 0.0;
  for (std::size_t mode = 0; mode < state.mode_count(); ++mode) {
    const std::pair<std::size_t, Ladder> op{mode, Ladder::Lower};
    const Complex a = expectation(state, std::span(&op, 1)) / norm;
    // <q> = 2 Re<a>, <p> = 2 Im<a>
    worst = std::max({worst, 2.0 * std::abs(a.real()), 2.0 * std::abs(a.imag())});
  }
  return worst;
}

CovarianceMatrix covariance_from_state(const FourModeState& state) {
  const double norm = norm_squared(state.amplitudes());
  if (std::abs(norm - 1.0) > 1e-10)
    throw std::invalid_argument("covariance_from_state: state is not normalized");
  const double first = max_first_moment(state.amplitudes());
  if (first >= 1e-10)
    throw std::logic_error("covariance_from_state: nonzero first moment " + std::to_string(first));
  return assemble_covariance(closed_form_moments(state));
}

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& sigma) {
  const auto dim = sigma.rows();
  if (dim == 0 || dim % 2 != 0 || sigma.cols() != dim)
    throw std::invalid_argument("symplectic_eigenvalues: need an even square matrix");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("symplectic_eigenvalues: covariance is not symmetric");

  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(omega * sigma, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");

  std::vector<double> mags;
  for (const auto& l : solver.eigenvalues()) mags.push_back(std::abs(l.imag()));
  std::sort(mags.begin(), mags.end());

  constexpr double kPairing = 1e-9;
  SymplecticSpectrum out;
  for (std::size_t k = 0; k < mags.size(); k += 2) {
    if (std::abs(mags[k] - mags[k + 1]) > kPairing * std::max(1.0, mags[k + 1]))
      throw std::runtime_error("symplectic_eigenvalues: eigenvalues of i Omega sigma do not pair");
    out.nu.push_back(0.5 * (mags[k] + mags[k + 1]));
  }
  std::sort(out.nu.rbegin(), out.nu.rend());
  if (out.nu.back() < 1.0 - 1e-6)
    throw UnphysicalCovariance("symplectic eigenvalue below 1: " + std::to_string(out.nu.back()),
                               out.nu.back());
  return out;
}

double g_function(double nu) {
  if (nu <= 1.0) return 0.0;
  const double plus = 0.5 * (nu + 1.0);
  const double minus = 0.5 * (nu - 1.0);
  return plus * std::log2(plus) - minus * std::log2(minus);
}

double gaussian_entropy(const SymplecticSpectrum& spectrum) {
  double s = 0.0;
  for (double nu : spectrum.nu) s += g_function(nu);
  return s;
}

double non_gaussianity(const FourModeState& state) {
  return gaussian_entropy(symplectic_eigenvalues(covariance_from_state(state)));
}

Converged converged_non_gaussianity(const SqueezingParams& params, const PhotonConfig& config,
                                    const ConvergenceOptions& options) {
  return converge(
      [&](int n) {
        const auto state = apply_photon_config(params, config, truncation_for(config, n));
        return Evaluation{non_gaussianity(state), state.leakage()};
      },
      options);
}

}  // namespace squeezelab
