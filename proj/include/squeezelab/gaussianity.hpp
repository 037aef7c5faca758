#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "squeezelab/convergence.hpp"
#include "squeezelab/states.hpp"

namespace squeezelab {

/// Quadrature covariance matrix, ordered (q1, p1, q2, p2, ...), with
/// q = a + a^+ and p = (a - a^+)/i so the vacuum maps to the identity.
using CovarianceMatrix = Eigen::MatrixXd;

/// The ten independent second moments <q_i q_j> (i <= j) of a four-mode
/// photon-added or -subtracted state; qq[i][j] == qq[j][i].
struct SecondMoments {
  std::array<std::array<double, 4>, 4> qq{};
};

/// Second moments evaluated through closed sums over the expansion
/// coefficients of the state.
SecondMoments closed_form_moments(const FourModeState& state);

/// Places <q_i q_j> into 2x2 blocks: identity on the diagonal and on the
/// (1,3), (2,4) pairs, diag(1,-1) on (1,2), (1,4), (2,3), (3,4).
CovarianceMatrix assemble_covariance(const SecondMoments& moments);

/// Throws std::invalid_argument for a state whose norm differs from 1 by
/// more than 1e-10 and std::logic_error if any |<q_i>|, |<p_i>| >= 1e-10.
CovarianceMatrix covariance_from_state(const FourModeState& state);

/// max_i max(|<q_i>|, |<p_i>|) evaluated on the tensor.
double max_first_moment(const AmplitudeTensor& state);

class UnphysicalCovariance : public std::runtime_error {
 public:
  UnphysicalCovariance(const std::string& what, double nu_min)
      : std::runtime_error(what), nu_min_(nu_min) {}
  double nu_min() const { return nu_min_; }

 private:
  double nu_min_;
};

struct SymplecticSpectrum {
  std::vector<double> nu;  // descending, one per mode
};

/// |eigenvalues| of i Omega sigma, paired. Throws UnphysicalCovariance when
/// the smallest is below 1 - 1e-6.
SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& sigma);

/// g(x) = (x+1)/2 log2((x+1)/2) - (x-1)/2 log2((x-1)/2), with g(1) = 0.
double g_function(double nu);

double gaussian_entropy(const SymplecticSpectrum& spectrum);

/// Entropy of the Gaussian state sharing the moments of a pure state.
double non_gaussianity(const FourModeState& state);

Converged converged_non_gaussianity(const SqueezingParams& params, const PhotonConfig& config,
                                    const ConvergenceOptions& options = {});

}  // namespace squeezelab
