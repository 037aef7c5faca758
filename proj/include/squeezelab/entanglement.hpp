#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "squeezelab/reductions.hpp"
#include "squeezelab/states.hpp"

namespace squeezelab {

/// Split of the four modes {1,2,3,4} into two disjoint nonempty blocks.
struct Bipartition {
  std::vector<int> block_a;  // ascending, 1-based
  std::vector<int> block_b;

  /// From block A; B is the complement in {1,2,3,4}.
  static Bipartition from_block(std::vector<int> block_a);

  /// Parses labels such as "1:234" or "13:24".
  static Bipartition parse(std::string_view label);

  /// The seven distinct splits, each listed once with mode 1 in block A.
  static std::vector<Bipartition> all();

  std::string label() const;

  friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

/// Raised when a density matrix has eigenvalues below -1e-8.
class PsdViolation : public std::runtime_error {
 public:
  PsdViolation(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

inline constexpr double kEigenClamp = 1e-14;
inline constexpr double kPsdTolerance = 1e-8;

/// -sum l log2 l over a spectrum, with |l| < 1e-14 treated as 0.
double entropy_bits(std::span<const double> eigenvalues);

double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy of the reduced state of the smaller block (block A on a tie).
double bipartite_entanglement(const FourModeState& state, const Bipartition& split);

/// log2(1 + 2 |sum of negative eigenvalues of rho^T|), transposing
/// `transpose_mode` (an original mode number kept by rho).
/// Throws std::invalid_argument when rho is not Hermitian to 1e-10.
double logarithmic_negativity(const DensityMatrix& rho, int transpose_mode);

/// Reduced two-mode state on `pair`, transposed on its second mode.
double logarithmic_negativity(const FourModeState& state, std::array<int, 2> pair);

}  // namespace squeezelab
