#include "squeezelab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace squeezelab {

FockIndex::FockIndex(std::initializer_list<int> occupations)
    : FockIndex(std::span<const int>(occupations.begin(), occupations.size())) {}

FockIndex::FockIndex(std::span<const int> occupations) {
  if (occupations.size() > kMaxModes)
    throw std::invalid_argument("FockIndex: at most 4 modes supported");
  for (std::size_t i = 0; i < occupations.size(); ++i) {
    if (occupations[i] < 0)
      throw std::invalid_argument("FockIndex: negative occupation");
    occ_[i] = occupations[i];
  }
  size_ = static_cast<std::uint8_t>(occupations.size());
}

int FockIndex::total() const {
  int sum = 0;
  for (std::size_t i = 0; i < size_; ++i) sum += occ_[i];
  return sum;
}

FockIndex FockIndex::with(std::size_t mode, int occupation) const {
  if (mode >= size_) throw std::out_of_range("FockIndex::with: mode out of range");
  if (occupation < 0) throw std::invalid_argument("FockIndex: negative occupation");
  FockIndex out = *this;
  out.occ_[mode] = occupation;
  return out;
}

FockIndex FockIndex::select(std::span<const std::size_t> modes) const {
  FockIndex out;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] >= size_) throw std::out_of_range("FockIndex::select: mode out of range");
    out.occ_[i] = occ_[modes[i]];
  }
  out.size_ = static_cast<std::uint8_t>(modes.size());
  return out;
}

std::string FockIndex::to_string() const {
  std::ostringstream os;
  os << '|';
  for (std::size_t i = 0; i < size_; ++i) {
    if (i) os << ',';
    os << occ_[i];
  }
  os << '>';
  return os.str();
}

std::size_t FockIndexHash::operator()(const FockIndex& idx) const noexcept {
  std::size_t h = idx.mode_count();
  for (std::size_t i = 0; i < idx.mode_count(); ++i)
    h = h * 0x9E3779B97F4A7C15ull + static_cast<std::size_t>(idx[i]) + 0x7F4A7C15ull;
  return h;
}

// --- BasisMap ---------------------------------------------------------------

BasisMap BasisMap::box(std::size_t mode_count, std::span<const int> per_mode_max) {
  if (mode_count == 0) throw std::invalid_argument("BasisMap: mode_count must be >= 1");
  if (mode_count > kMaxModes) throw std::invalid_argument("BasisMap: at most 4 modes supported");
  if (per_mode_max.size() != mode_count)
    throw std::invalid_argument("BasisMap: per_mode_max size differs from mode_count");

  BasisMap map;
  map.mode_count_ = mode_count;
  map.box_ = true;
  map.truncation_.assign(per_mode_max.begin(), per_mode_max.end());
  map.strides_.assign(mode_count, 1);

  std::size_t dim = 1;
  for (std::size_t k = mode_count; k-- > 0;) {
    if (per_mode_max[k] < 0) throw std::invalid_argument("BasisMap: negative truncation");
    map.strides_[k] = dim;
    const auto extent = static_cast<std::size_t>(per_mode_max[k]) + 1;
    std::size_t next = 0;
    if (__builtin_mul_overflow(dim, extent, &next) ||
        next > static_cast<std::size_t>(std::numeric_limits<std::ptrdiff_t>::max()))
      throw std::length_error("BasisMap: basis dimension overflows addressable size");
    dim = next;
  }
  map.dimension_ = dim;
  return map;
}

BasisMap BasisMap::from_support(std::size_t mode_count, std::vector<FockIndex> states) {
  if (mode_count == 0) throw std::invalid_argument("BasisMap: mode_count must be >= 1");
  for (const auto& s : states)
    if (s.mode_count() != mode_count)
      throw std::invalid_argument("BasisMap: support state has wrong mode count");
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());

  BasisMap map;
  map.mode_count_ = mode_count;
  map.dimension_ = states.size();
  map.truncation_.assign(mode_count, 0);
  for (const auto& s : states)
    for (std::size_t k = 0; k < mode_count; ++k)
      map.truncation_[k] = std::max(map.truncation_[k], s[k]);
  map.states_ = std::move(states);
  return map;
}

BasisMap build_basis_map(std::size_t mode_count, std::span<const int> per_mode_max) {
  return BasisMap::box(mode_count, per_mode_max);
}

std::optional<std::size_t> BasisMap::offset(const FockIndex& idx) const {
  if (idx.mode_count() != mode_count_) return std::nullopt;
  if (box_) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < mode_count_; ++k) {
      if (idx[k] > truncation_[k]) return std::nullopt;
      off += static_cast<std::size_t>(idx[k]) * strides_[k];
    }
    return off;
  }
  auto it = std::lower_bound(states_.begin(), states_.end(), idx);
  if (it == states_.end() || *it != idx) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

FockIndex BasisMap::index(std::size_t offset) const {
  if (offset >= dimension_) throw std::out_of_range("BasisMap::index: offset out of range");
  if (!box_) return states_[offset];
  std::array<int, kMaxModes> occ{};
  for (std::size_t k = 0; k < mode_count_; ++k) {
    occ[k] = static_cast<int>(offset / strides_[k]);
    offset %= strides_[k];
  }
  return FockIndex(std::span<const int>(occ.data(), mode_count_));
}

// --- AmplitudeTensor --------------------------------------------------------

AmplitudeTensor::AmplitudeTensor(std::size_t mode_count, std::vector<Entry> entries)
    : mode_count_(mode_count), entries_(std::move(entries)) {
  if (mode_count_ == 0 || mode_count_ > kMaxModes)
    throw std::invalid_argument("AmplitudeTensor: mode_count must be in 1..4");
  for (const auto& [idx, amp] : entries_)
    if (idx.mode_count() != mode_count_)
      throw std::invalid_argument("AmplitudeTensor: entry has wrong mode count");
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                [](const Entry& a, const Entry& b) { return a.first == b.first; });
  if (dup != entries_.end())
    throw std::invalid_argument("AmplitudeTensor: duplicate key " + dup->first.to_string());
}

Complex AmplitudeTensor::amplitude(const FockIndex& idx) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), idx,
                             [](const Entry& e, const FockIndex& k) { return e.first < k; });
  if (it == entries_.end() || it->first != idx) return {0.0, 0.0};
  return it->second;
}

AmplitudeTensor AmplitudeTensor::scaled(Complex factor) const {
  AmplitudeTensor out = *this;
  for (auto& e : out.entries_) e.second *= factor;
  return out;
}

std::vector<int> AmplitudeTensor::max_occupation() const {
  std::vector<int> out(mode_count_, 0);
  for (const auto& [idx, amp] : entries_)
    for (std::size_t k = 0; k < mode_count_; ++k) out[k] = std::max(out[k], idx[k]);
  return out;
}

double norm_squared(const AmplitudeTensor& t) {
  double s = 0.0;
  for (const auto& e : t.entries()) s += std::norm(e.second);
  return s;
}

Complex inner_product(const AmplitudeTensor& a, const AmplitudeTensor& b) {
  // Both sides are sorted; merge-walk.
  Complex s{0.0, 0.0};
  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].first < eb[j].first) {
      ++i;
    } else if (eb[j].first < ea[i].first) {
      ++j;
    } else {
      s += std::conj(ea[i].second) * eb[j].second;
      ++i;
      ++j;
    }
  }
  return s;
}

AmplitudeTensor apply_ladder(const AmplitudeTensor& t, std::size_t mode, Ladder op) {
  if (mode >= t.mode_count()) throw std::out_of_range("apply_ladder: mode out of range");
  std::vector<AmplitudeTensor::Entry> out;
  out.reserve(t.size());
  for (const auto& [idx, amp] : t.entries()) {
    const int n = idx[mode];
    if (op == Ladder::Lower) {
      if (n == 0) continue;
      out.emplace_back(idx.with(mode, n - 1), amp * std::sqrt(static_cast<double>(n)));
    } else {
      out.emplace_back(idx.with(mode, n + 1), amp * std::sqrt(static_cast<double>(n + 1)));
    }
  }
  return AmplitudeTensor(t.mode_count(), std::move(out));
}

Complex expectation(const AmplitudeTensor& t,
                    std::span<const std::pair<std::size_t, Ladder>> ops) {
  AmplitudeTensor v = t;
  for (const auto& [mode, op] : ops) v = apply_ladder(v, mode, op);
  return inner_product(t, v);
}

double log_factorial(int n) {
  // lgamma touches the global signgam, so worker threads read a table built
  // once under the static-initialization guard.
  static constexpr int kTableSize = 8192;
  static const std::vector<double> table = [] {
    std::vector<double> t(kTableSize);
    for (int k = 0; k < kTableSize; ++k) t[k] = std::lgamma(static_cast<double>(k) + 1.0);
    return t;
  }();
  if (n < 0) throw std::domain_error("log_factorial: negative argument");
  if (n < kTableSize) return table[static_cast<std::size_t>(n)];
  // Stirling series; relative error far below double epsilon at this size.
  const double x = static_cast<double>(n) + 1.0;
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * M_PI) + 1.0 / (12.0 * x) -
         1.0 / (360.0 * x * x * x);
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_factorial_ratio(int a, int b) { return log_factorial(a) - log_factorial(b); }

double log_sum_exp(std::span<const double> v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

}  // namespace squeezelab
