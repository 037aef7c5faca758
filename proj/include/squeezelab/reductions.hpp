#pragma once

#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "squeezelab/fock.hpp"
#include "squeezelab/states.hpp"

namespace squeezelab {

/// Hermitian density matrix over an enumerated Fock basis of the kept modes.
///
/// Reduced states of the photon-added/-subtracted family conserve a linear
/// combination of occupations, so they are block diagonal. The matrix is
/// stored as those blocks ("sectors"): each sector lists the basis offsets
/// it spans and holds the dense block over them. Entries between different
/// sectors are zero.
class DensityMatrix {
 public:
  struct Sector {
    std::vector<std::size_t> offsets;  // ascending
    Eigen::MatrixXcd block;
  };

  DensityMatrix(std::vector<int> kept_modes, BasisMap basis, std::vector<Sector> sectors);

  /// Original mode numbers (1-based, ascending).
  const std::vector<int>& kept_modes() const { return kept_modes_; }
  const BasisMap& basis() const { return basis_; }
  std::span<const Sector> sectors() const { return sectors_; }
  std::size_t dimension() const { return basis_.dimension(); }

  Complex element(std::size_t row, std::size_t col) const;
  Complex element(const FockIndex& row, const FockIndex& col) const;

  double trace() const;

  /// max |rho - rho^+| over stored entries.
  double hermiticity_error() const;

  /// All eigenvalues, ascending.
  std::vector<double> eigenvalues() const;

  /// Materialized dense matrix; only sensible for small bases.
  Eigen::MatrixXcd dense() const;

 private:
  std::vector<int> kept_modes_;
  BasisMap basis_;
  std::vector<Sector> sectors_;
  std::vector<std::size_t> sector_of_;
  std::vector<std::size_t> local_of_;
};

/// One (row, col, value) contribution; duplicates are summed.
struct MatrixEntry {
  FockIndex row;
  FockIndex col;
  Complex value;
};

/// Builds a DensityMatrix from scattered entries, discovering its sectors.
DensityMatrix density_from_entries(std::vector<int> kept_modes, std::span<const MatrixEntry> entries);

/// |psi><psi| / <psi|psi> of a pure state over all of its modes.
DensityMatrix density_from_pure(const AmplitudeTensor& state);

/// Reduced state on `keep` (1-based mode numbers). Rejects an empty keep set
/// and keeping every mode.
DensityMatrix partial_trace(const AmplitudeTensor& state, std::span<const int> keep);
DensityMatrix partial_trace(const FourModeState& state, std::span<const int> keep);

/// Transpose of the given kept mode's indices:
/// <i,j| rho^T |k,l> = <i,l| rho |k,j> when `mode` is the second one.
DensityMatrix partial_transpose(const DensityMatrix& rho, int mode);

/// A density matrix diagonal in the number basis, as occupation -> weight.
struct DiagonalDistribution {
  std::map<int, double> weights;

  double sum() const;
  std::vector<double> probabilities() const;
};

/// f(r, x) = sum_{n >= r} (x/2)^n C(n, r), evaluated through the recursion
/// f(r) = x/(2-x) f(r-1) from f(0) = 2/(2-x).
double binomial_tail_series(int r, double x);

/// Single-mode reduction of the state with m photons added to mode 1 only:
/// weight of |m + r> is
///   g(x, m, r) = 2^m (1-x)^{m+1} / (2-x)^m * f(r, x) * C(m+r, m).
/// Throws std::invalid_argument unless 0 <= x < 1.
DiagonalDistribution added_single_mode_distribution(double x, int m);

/// Single-mode reduction of the state with m photons subtracted from mode 1:
/// weight of |r> is (1-x)^{m+1} C(m+r, m) x^r 2^{m+1} / (2-x)^{r+m+1}.
DiagonalDistribution subtracted_single_mode_distribution(double x, int m);

}  // namespace squeezelab
