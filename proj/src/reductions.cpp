#include "squeezelab/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace squeezelab {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;  // smallest offset stays the root
  }

 private:
  std::vector<std::size_t> parent_;
};

// Groups offsets into sectors by their union-find root. Sectors are ordered
// by their smallest offset; offsets inside a sector ascend.
std::vector<DensityMatrix::Sector> empty_sectors(DisjointSets& sets, std::size_t dim) {
  std::vector<std::size_t> sector_of_root(dim, SIZE_MAX);
  std::vector<DensityMatrix::Sector> sectors;
  for (std::size_t off = 0; off < dim; ++off) {
    const std::size_t root = sets.find(off);
    if (sector_of_root[root] == SIZE_MAX) {
      sector_of_root[root] = sectors.size();
      sectors.emplace_back();
    }
    sectors[sector_of_root[root]].offsets.push_back(off);
  }
  for (auto& s : sectors) {
    const auto n = static_cast<Eigen::Index>(s.offsets.size());
    s.block = Eigen::MatrixXcd::Zero(n, n);
  }
  return sectors;
}

std::vector<std::size_t> to_zero_based(std::span<const int> modes, std::size_t mode_count) {
  std::vector<std::size_t> out;
  for (int m : modes) {
    if (m < 1 || static_cast<std::size_t>(m) > mode_count)
      throw std::invalid_argument("mode number out of range: " + std::to_string(m));
    out.push_back(static_cast<std::size_t>(m - 1));
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw std::invalid_argument("mode listed twice");
  return out;
}

}  // namespace

// --- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(std::vector<int> kept_modes, BasisMap basis,
                             std::vector<Sector> sectors)
    : kept_modes_(std::move(kept_modes)),
      basis_(std::move(basis)),
      sectors_(std::move(sectors)),
      sector_of_(basis_.dimension(), SIZE_MAX),
      local_of_(basis_.dimension(), 0) {
  if (kept_modes_.size() != basis_.mode_count())
    throw std::invalid_argument("DensityMatrix: kept modes and basis disagree");
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    const auto& sec = sectors_[s];
    if (static_cast<std::size_t>(sec.block.rows()) != sec.offsets.size() ||
        sec.block.rows() != sec.block.cols())
      throw std::invalid_argument("DensityMatrix: sector block has wrong shape");
    for (std::size_t i = 0; i < sec.offsets.size(); ++i) {
      const auto off = sec.offsets[i];
      if (off >= sector_of_.size() || sector_of_[off] != SIZE_MAX)
        throw std::invalid_argument("DensityMatrix: sectors must partition the basis");
      sector_of_[off] = s;
      local_of_[off] = i;
    }
  }
  if (std::find(sector_of_.begin(), sector_of_.end(), SIZE_MAX) != sector_of_.end())
    throw std::invalid_argument("DensityMatrix: sectors must cover the basis");
}

Complex DensityMatrix::element(std::size_t row, std::size_t col) const {
  if (row >= dimension() || col >= dimension())
    throw std::out_of_range("DensityMatrix::element: offset out of range");
  if (sector_of_[row] != sector_of_[col]) return {0.0, 0.0};
  const auto& block = sectors_[sector_of_[row]].block;
  return block(static_cast<Eigen::Index>(local_of_[row]), static_cast<Eigen::Index>(local_of_[col]));
}

Complex DensityMatrix::element(const FockIndex& row, const FockIndex& col) const {
  const auto r = basis_.offset(row);
  const auto c = basis_.offset(col);
  if (!r || !c) return {0.0, 0.0};
  return element(*r, *c);
}

double DensityMatrix::trace() const {
  double t = 0.0;
  for (const auto& s : sectors_) t += s.block.trace().real();
  return t;
}

double DensityMatrix::hermiticity_error() const {
  double err = 0.0;
  for (const auto& s : sectors_)
    if (s.block.size() > 0) err = std::max(err, (s.block - s.block.adjoint()).cwiseAbs().maxCoeff());
  return err;
}

std::vector<double> DensityMatrix::eigenvalues() const {
  std::vector<double> out;
  out.reserve(dimension());
  for (const auto& s : sectors_) {
    if (s.block.rows() == 1) {
      out.push_back(s.block(0, 0).real());
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(s.block, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("DensityMatrix: eigensolver failed");
    const auto& ev = solver.eigenvalues();
    out.insert(out.end(), ev.data(), ev.data() + ev.size());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXcd DensityMatrix::dense() const {
  const auto d = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& s : sectors_)
    for (std::size_t i = 0; i < s.offsets.size(); ++i)
      for (std::size_t j = 0; j < s.offsets.size(); ++j)
        out(static_cast<Eigen::Index>(s.offsets[i]), static_cast<Eigen::Index>(s.offsets[j])) =
            s.block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

// --- construction -----------------------------------------------------------

DensityMatrix density_from_entries(std::vector<int> kept_modes, std::span<const MatrixEntry> entries) {
  std::vector<FockIndex> support;
  support.reserve(2 * entries.size());
  for (const auto& e : entries) {
    support.push_back(e.row);
    support.push_back(e.col);
  }
  BasisMap basis = BasisMap::from_support(kept_modes.size(), std::move(support));

  std::vector<std::pair<std::size_t, std::size_t>> at;
  at.reserve(entries.size());
  DisjointSets sets(basis.dimension());
  for (const auto& e : entries) {
    const std::size_t r = *basis.offset(e.row);
    const std::size_t c = *basis.offset(e.col);
    sets.unite(r, c);
    at.emplace_back(r, c);
  }
  auto sectors = empty_sectors(sets, basis.dimension());
  std::vector<std::size_t> sector_of(basis.dimension());
  std::vector<Eigen::Index> local_of(basis.dimension());
  for (std::size_t s = 0; s < sectors.size(); ++s)
    for (std::size_t i = 0; i < sectors[s].offsets.size(); ++i) {
      sector_of[sectors[s].offsets[i]] = s;
      local_of[sectors[s].offsets[i]] = static_cast<Eigen::Index>(i);
    }
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto [r, c] = at[k];
    sectors[sector_of[r]].block(local_of[r], local_of[c]) += entries[k].value;
  }
  return DensityMatrix(std::move(kept_modes), std::move(basis), std::move(sectors));
}

DensityMatrix density_from_pure(const AmplitudeTensor& state) {
  if (state.empty()) throw std::invalid_argument("density_from_pure: empty state");
  const double norm = norm_squared(state);
  std::vector<FockIndex> support;
  for (const auto& e : state.entries()) support.push_back(e.first);
  BasisMap basis = BasisMap::from_support(state.mode_count(), std::move(support));

  // A pure state is a single rank-one sector.
  DensityMatrix::Sector sector;
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  Eigen::VectorXcd v(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    sector.offsets.push_back(static_cast<std::size_t>(i));
    v(i) = state.entries()[static_cast<std::size_t>(i)].second;
  }
  sector.block = v * v.adjoint() / norm;

  std::vector<int> kept(state.mode_count());
  std::iota(kept.begin(), kept.end(), 1);
  std::vector<DensityMatrix::Sector> sectors;
  sectors.push_back(std::move(sector));
  return DensityMatrix(std::move(kept), std::move(basis), std::move(sectors));
}

DensityMatrix partial_trace(const AmplitudeTensor& state, std::span<const int> keep) {
  const std::size_t modes = state.mode_count();
  const auto kept0 = to_zero_based(keep, modes);
  if (kept0.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  if (kept0.size() == modes) throw std::invalid_argument("partial_trace: nothing to trace out");
  if (state.empty()) throw std::invalid_argument("partial_trace: empty state");

  std::vector<std::size_t> traced0;
  for (std::size_t k = 0; k < modes; ++k)
    if (!std::binary_search(kept0.begin(), kept0.end(), k)) traced0.push_back(k);

  struct Record {
    FockIndex traced;
    std::size_t kept;
    Complex amp;
  };
  std::vector<FockIndex> support;
  support.reserve(state.size());
  for (const auto& [idx, amp] : state.entries()) support.push_back(idx.select(kept0));
  BasisMap basis = BasisMap::from_support(kept0.size(), support);

  std::vector<Record> records;
  records.reserve(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto& [idx, amp] = state.entries()[i];
    records.push_back({idx.select(traced0), *basis.offset(support[i]), amp});
  }
  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    return a.traced < b.traced || (a.traced == b.traced && a.kept < b.kept);
  });

  // rho[I,J] = sum_K c(I+K) conj(c(J+K)): each group sharing a traced index
  // K couples all of its kept indices.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  DisjointSets sets(basis.dimension());
  for (std::size_t begin = 0; begin < records.size();) {
    std::size_t end = begin + 1;
    while (end < records.size() && records[end].traced == records[begin].traced) ++end;
    for (std::size_t k = begin + 1; k < end; ++k) sets.unite(records[begin].kept, records[k].kept);
    groups.emplace_back(begin, end);
    begin = end;
  }

  auto sectors = empty_sectors(sets, basis.dimension());
  std::vector<std::size_t> sector_of(basis.dimension());
  std::vector<Eigen::Index> local_of(basis.dimension());
  for (std::size_t s = 0; s < sectors.size(); ++s)
    for (std::size_t i = 0; i < sectors[s].offsets.size(); ++i) {
      sector_of[sectors[s].offsets[i]] = s;
      local_of[sectors[s].offsets[i]] = static_cast<Eigen::Index>(i);
    }

  const double inv_norm = 1.0 / norm_squared(state);
  for (const auto& [begin, end] : groups) {
    auto& block = sectors[sector_of[records[begin].kept]].block;
    for (std::size_t a = begin; a < end; ++a) {
      const Eigen::Index la = local_of[records[a].kept];
      const Complex ca = records[a].amp * inv_norm;
      for (std::size_t b = begin; b < end; ++b)
        block(la, local_of[records[b].kept]) += ca * std::conj(records[b].amp);
    }
  }

  std::vector<int> kept_modes;
  for (auto k : kept0) kept_modes.push_back(static_cast<int>(k) + 1);
  return DensityMatrix(std::move(kept_modes), std::move(basis), std::move(sectors));
}

DensityMatrix partial_trace(const FourModeState& state, std::span<const int> keep) {
  return partial_trace(state.amplitudes(), keep);
}

DensityMatrix partial_transpose(const DensityMatrix& rho, int mode) {
  const auto& kept = rho.kept_modes();
  const auto pos = std::find(kept.begin(), kept.end(), mode);
  if (pos == kept.end())
    throw std::invalid_argument("partial_transpose: mode " + std::to_string(mode) + " is not kept");
  const auto p = static_cast<std::size_t>(pos - kept.begin());

  std::vector<MatrixEntry> entries;
  for (const auto& s : rho.sectors()) {
    for (std::size_t a = 0; a < s.offsets.size(); ++a) {
      const FockIndex row = rho.basis().index(s.offsets[a]);
      for (std::size_t b = 0; b < s.offsets.size(); ++b) {
        const Complex v = s.block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (v == Complex{0.0, 0.0}) continue;
        const FockIndex col = rho.basis().index(s.offsets[b]);
        entries.push_back({row.with(p, col[p]), col.with(p, row[p]), v});
      }
    }
  }
  return density_from_entries(kept, entries);
}

// --- closed-form single-mode distributions ----------------------------------

double DiagonalDistribution::sum() const {
  double s = 0.0;
  for (const auto& [k, w] : weights) s += w;
  return s;
}

std::vector<double> DiagonalDistribution::probabilities() const {
  std::vector<double> out;
  out.reserve(weights.size());
  for (const auto& [k, w] : weights) out.push_back(w);
  return out;
}

double binomial_tail_series(int r, double x) {
  if (r < 0) throw std::invalid_argument("binomial_tail_series: r must be >= 0");
  if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("binomial_tail_series: need 0 <= x < 1");
  double f = 2.0 / (2.0 - x);
  for (int k = 1; k <= r; ++k) f *= x / (2.0 - x);
  return f;
}

namespace {

// Weights w_r = exp(log_w(r)) for r = 0, 1, ... until the decaying tail is
// below 1e-18 of the peak.
template <typename LogWeight>
std::vector<double> geometric_like_weights(double x, LogWeight log_w) {
  std::vector<double> out;
  if (x == 0.0) {
    out.push_back(std::exp(log_w(0)));
    return out;
  }
  double peak = -std::numeric_limits<double>::infinity();
  double prev = peak;
  for (int r = 0;; ++r) {
    const double lw = log_w(r);
    out.push_back(std::exp(lw));
    peak = std::max(peak, lw);
    if (lw < prev && lw < peak - 41.5) break;  // e^-41.5 ~ 1e-18
    prev = lw;
    if (r > 1000000) throw std::runtime_error("single-mode distribution did not converge");
  }
  return out;
}

void check_x(double x) {
  if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("need 0 <= x < 1");
}

}  // namespace

DiagonalDistribution added_single_mode_distribution(double x, int m) {
  check_x(x);
  if (m < 0) throw std::invalid_argument("photon count must be >= 0");
  const double log2v = std::log(2.0);
  const double prefactor = m * log2v + (m + 1) * std::log1p(-x) - m * std::log(2.0 - x);
  auto log_w = [&](int r) {
    const double log_f = log2v + (r == 0 ? 0.0 : r * std::log(x)) - (r + 1) * std::log(2.0 - x);
    return prefactor + log_f + log_binomial(m + r, m);
  };
  DiagonalDistribution out;
  const auto w = geometric_like_weights(x, log_w);
  for (std::size_t r = 0; r < w.size(); ++r) out.weights[m + static_cast<int>(r)] = w[r];
  return out;
}

DiagonalDistribution subtracted_single_mode_distribution(double x, int m) {
  check_x(x);
  if (m < 0) throw std::invalid_argument("photon count must be >= 0");
  const double log2v = std::log(2.0);
  auto log_w = [&](int r) {
    const double log_fsub =
        (r == 0 ? 0.0 : r * std::log(x)) + (m + 1) * log2v - (r + m + 1) * std::log(2.0 - x);
    return (m + 1) * std::log1p(-x) + log_binomial(m + r, m) + log_fsub;
  };
  DiagonalDistribution out;
  const auto w = geometric_like_weights(x, log_w);
  for (std::size_t r = 0; r < w.size(); ++r) out.weights[static_cast<int>(r)] = w[r];
  return out;
}

}  // namespace squeezelab
