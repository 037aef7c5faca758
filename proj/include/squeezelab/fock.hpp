#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace squeezelab {

using Complex = std::complex<double>;

/// Largest number of bosonic modes any object in the library carries.
inline constexpr std::size_t kMaxModes = 4;

/// Occupation numbers of up to four modes, one photon count per mode.
class FockIndex {
 public:
  FockIndex() = default;
  FockIndex(std::initializer_list<int> occupations);
  explicit FockIndex(std::span<const int> occupations);

  std::size_t mode_count() const { return size_; }
  int operator[](std::size_t mode) const { return occ_[mode]; }
  int total() const;

  /// Copy with one mode's occupation replaced.
  FockIndex with(std::size_t mode, int occupation) const;

  /// Sub-index over the given (ascending, zero-based) modes.
  FockIndex select(std::span<const std::size_t> modes) const;

  std::string to_string() const;

  friend bool operator==(const FockIndex&, const FockIndex&) = default;
  friend auto operator<=>(const FockIndex& a, const FockIndex& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.occ_ <=> b.occ_;
  }

 private:
  std::array<int, kMaxModes> occ_{};
  std::uint8_t size_ = 0;
};

struct FockIndexHash {
  std::size_t operator()(const FockIndex& idx) const noexcept;
};

/// Bijective enumeration between occupation tuples and contiguous offsets.
///
/// Two flavours share one interface. A box map covers every tuple with
/// `occupations[i] <= per_mode_max[i]` in row-major order (last mode fastest)
/// and is never materialized. A support map enumerates an explicit, sorted
/// set of tuples; its ordering agrees with row-major order of any box that
/// contains it.
class BasisMap {
 public:
  /// Row-major box enumeration. Throws std::invalid_argument for
  /// mode_count == 0 or negative bounds, std::length_error on overflow.
  static BasisMap box(std::size_t mode_count, std::span<const int> per_mode_max);

  /// Enumeration of an explicit set of states (duplicates are merged).
  static BasisMap from_support(std::size_t mode_count, std::vector<FockIndex> states);

  std::size_t mode_count() const { return mode_count_; }
  std::size_t dimension() const { return dimension_; }

  /// Per-mode maximum occupation (for support maps: the maximum present).
  std::span<const int> truncation() const { return truncation_; }

  std::optional<std::size_t> offset(const FockIndex& idx) const;
  FockIndex index(std::size_t offset) const;

  bool is_box() const { return box_; }

 private:
  BasisMap() = default;

  std::size_t mode_count_ = 0;
  std::size_t dimension_ = 0;
  bool box_ = false;
  std::vector<int> truncation_;
  std::vector<std::size_t> strides_;
  std::vector<FockIndex> states_;  // support maps only, sorted
};

/// Same as BasisMap::box; the canonical constructor name.
BasisMap build_basis_map(std::size_t mode_count, std::span<const int> per_mode_max);

/// Sparse map from occupation tuples to complex amplitudes.
///
/// Entries are kept sorted by FockIndex; lookups are binary searches. The
/// container is immutable once built.
class AmplitudeTensor {
 public:
  using Entry = std::pair<FockIndex, Complex>;

  AmplitudeTensor() = default;

  /// Takes ownership of unsorted entries. Rejects duplicate keys and keys
  /// whose mode count differs from `mode_count`.
  AmplitudeTensor(std::size_t mode_count, std::vector<Entry> entries);

  std::size_t mode_count() const { return mode_count_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return entries_; }

  /// Amplitude of `idx`, zero when absent.
  Complex amplitude(const FockIndex& idx) const;

  /// Copy with every amplitude multiplied by `factor`.
  AmplitudeTensor scaled(Complex factor) const;

  /// Per-mode maximum occupation over the support.
  std::vector<int> max_occupation() const;

 private:
  std::size_t mode_count_ = 0;
  std::vector<Entry> entries_;
};

/// Sum of |c|^2 over all entries.
double norm_squared(const AmplitudeTensor& t);

/// <a|b>.
Complex inner_product(const AmplitudeTensor& a, const AmplitudeTensor& b);

enum class Ladder { Lower, Raise };

/// Applies a single annihilation (Lower) or creation (Raise) operator on
/// `mode`. The result is not normalized.
AmplitudeTensor apply_ladder(const AmplitudeTensor& t, std::size_t mode, Ladder op);

/// <t| O_k ... O_1 |t> for the operator product applied right to left,
/// i.e. `ops[0]` acts first.
Complex expectation(const AmplitudeTensor& t,
                    std::span<const std::pair<std::size_t, Ladder>> ops);

/// log(n!) via lgamma.
double log_factorial(int n);

/// log C(n, k); -inf when k is outside [0, n].
double log_binomial(int n, int k);

/// log((a)! / (b)!) for a, b >= 0.
double log_factorial_ratio(int a, int b);

/// Numerically stable log(sum(exp(v))).
double log_sum_exp(std::span<const double> v);

}  // namespace squeezelab
