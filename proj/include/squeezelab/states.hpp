#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "squeezelab/fock.hpp"

namespace squeezelab {

/// Squeezing parameter re^{i theta}. Every constructor in this library
/// requires theta == 0; the field exists so the type can describe the
/// general case.
struct SqueezingParams {
  double r = 0.0;
  double theta = 0.0;

  SqueezingParams() = default;
  explicit SqueezingParams(double r_, double theta_ = 0.0);

  /// tanh^2 r, always in [0, 1).
  double x() const;
};

enum class PhotonKind { Add, Subtract };

std::string to_string(PhotonKind kind);

/// Photons added to (or subtracted from) each of the four modes.
struct PhotonConfig {
  PhotonKind kind = PhotonKind::Add;
  std::array<int, 4> m{};

  PhotonConfig() = default;
  PhotonConfig(PhotonKind kind_, std::array<int, 4> m_);

  /// First surviving value of the outer sum index: max{m1+m3, m2+m4} for
  /// subtraction, 0 for addition.
  int lower_bound() const;
  int total() const { return m[0] + m[1] + m[2] + m[3]; }
};

/// Photon-added or -subtracted four-mode squeezed vacuum, truncated at
/// outer sum index n <= truncation_n and renormalized.
///
/// Each supported ket is labelled by (n, r1, r2) and sits at
/// |n-r1+-m1, n-r2+-m2, r1+-m3, r2+-m4>.
class FourModeState {
 public:
  const AmplitudeTensor& amplitudes() const { return amplitudes_; }
  const SqueezingParams& params() const { return params_; }
  const std::optional<PhotonConfig>& config() const { return config_; }
  int truncation_n() const { return truncation_n_; }

  /// Probability mass lost to truncation, 1 - (truncated norm)/(full norm).
  double leakage() const { return leakage_; }

  PhotonKind kind() const { return config_ ? config_->kind : PhotonKind::Add; }
  std::array<int, 4> photons() const { return config_ ? config_->m : std::array<int, 4>{}; }

  /// Occupation tuple of the (n, r1, r2) term; nullopt when the label lies
  /// outside the summation ranges.
  std::optional<FockIndex> ket(int n, int r1, int r2) const;

  /// Normalized expansion coefficient of the (n, r1, r2) term (p for
  /// addition, q for subtraction). Zero outside the truncated support.
  double coefficient(int n, int r1, int r2) const;

  /// Largest occupation any mode can carry: truncation_n + max(m_i).
  std::array<int, 4> per_mode_cap() const;

 private:
  friend FourModeState apply_photon_config(const SqueezingParams&, const PhotonConfig&, int);
  friend FourModeState build_fmsv(const SqueezingParams&, int);

  static FourModeState build(const SqueezingParams& params, std::optional<PhotonConfig> config,
                             int truncation_n);

  AmplitudeTensor amplitudes_;
  SqueezingParams params_;
  std::optional<PhotonConfig> config_;
  int truncation_n_ = 0;
  double leakage_ = 0.0;
};

/// Two-mode squeezed vacuum sech r sum_n (-tanh r)^n |n,n>, truncated and
/// renormalized.
struct TwoModeState {
  AmplitudeTensor amplitudes;
  SqueezingParams params;
  int truncation_n = 0;
  double leakage = 0.0;
};

TwoModeState build_tmsv(const SqueezingParams& params, int truncation_n);

FourModeState build_fmsv(const SqueezingParams& params, int truncation_n);

/// Throws std::invalid_argument for subtraction with truncation_n < M, and
/// for subtraction from the r = 0 vacuum (the result is the zero vector).
FourModeState apply_photon_config(const SqueezingParams& params, const PhotonConfig& config,
                                  int truncation_n);

/// Analytic variances (dX1^2, dX2^2) of the collective quadratures
/// X1 = sum_j (a_j + a_j^+) / (2 sqrt N), X2 = sum_j (a_j - a_j^+) / (2i sqrt N)
/// for the N-mode squeezed vacuum, N in {2, 4}.
std::pair<double, double> quadrature_variances(const SqueezingParams& params,
                                               std::size_t mode_count);

/// The same variances evaluated directly on an amplitude tensor.
std::pair<double, double> numerical_quadrature_variances(const AmplitudeTensor& state);

}  // namespace squeezelab
