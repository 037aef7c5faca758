#include "squeezelab/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace squeezelab {

SqueezingParams::SqueezingParams(double r_, double theta_) : r(r_), theta(theta_) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw std::invalid_argument("SqueezingParams: r must be finite and >= 0");
  if (!std::isfinite(theta)) throw std::invalid_argument("SqueezingParams: theta must be finite");
}

double SqueezingParams::x() const {
  const double t = std::tanh(r);
  return t * t;
}

std::string to_string(PhotonKind kind) { return kind == PhotonKind::Add ? "add" : "subtract"; }

PhotonConfig::PhotonConfig(PhotonKind kind_, std::array<int, 4> m_) : kind(kind_), m(m_) {
  for (int v : m)
    if (v < 0) throw std::invalid_argument("PhotonConfig: photon counts must be >= 0");
}

int PhotonConfig::lower_bound() const {
  return kind == PhotonKind::Subtract ? std::max(m[0] + m[2], m[1] + m[3]) : 0;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_zero_phase(const SqueezingParams& params) {
  if (params.theta != 0.0)
    throw std::invalid_argument("only theta = 0 squeezed states are supported");
}

// Summation ranges and log-weights of one (n, r1, r2) family.
struct Layout {
  PhotonKind kind;
  std::array<int, 4> m;

  int r1_lo(int) const { return kind == PhotonKind::Add ? 0 : m[2]; }
  int r1_hi(int n) const { return kind == PhotonKind::Add ? n : n - m[0]; }
  int r2_lo(int) const { return kind == PhotonKind::Add ? 0 : m[3]; }
  int r2_hi(int n) const { return kind == PhotonKind::Add ? n : n - m[1]; }

  // log of the squared r-dependent factors: C(n,r) times the two
  // factorial ratios picked up by the ladder operators on the pair of
  // modes (outer, inner) = (1, 3) or (2, 4).
  double log_factor(int n, int r, int m_outer, int m_inner) const {
    double v = log_binomial(n, r);
    if (kind == PhotonKind::Add) {
      v += log_factorial_ratio(n - r + m_outer, n - r);
      v += log_factorial_ratio(r + m_inner, r);
    } else {
      v += log_factorial_ratio(n - r, n - r - m_outer);
      v += log_factorial_ratio(r, r - m_inner);
    }
    return v;
  }

  std::vector<double> factors1(int n) const {
    std::vector<double> out;
    for (int r = r1_lo(n); r <= r1_hi(n); ++r) out.push_back(log_factor(n, r, m[0], m[2]));
    return out;
  }
  std::vector<double> factors2(int n) const {
    std::vector<double> out;
    for (int r = r2_lo(n); r <= r2_hi(n); ++r) out.push_back(log_factor(n, r, m[1], m[3]));
    return out;
  }

  // log sum_{r1,r2} |coefficient|^2 at fixed n, without normalization.
  double log_weight(int n, double log_x_over_4) const {
    const auto f1 = factors1(n);
    const auto f2 = factors2(n);
    if (f1.empty() || f2.empty()) return kNegInf;
    return n * log_x_over_4 + log_sum_exp(f1) + log_sum_exp(f2);
  }

  FockIndex ket(int n, int r1, int r2) const {
    const int s = kind == PhotonKind::Add ? 1 : -1;
    return FockIndex{n - r1 + s * m[0], n - r2 + s * m[1], r1 + s * m[2], r2 + s * m[3]};
  }
};

// Mass of the tail n > last relative to the full series. The per-n weights are x^n times a polynomial in n, so they
// are unimodal; we walk past the peak until terms drop below 1e-35 of the
// running total.
double tail_fraction(const Layout& layout, int first, int last, double log_x_over_4,
                     double log_truncated) {
  std::vector<double> tail;
  double prev = kNegInf;
  double peak = log_truncated;
  constexpr int kMaxTail = 200000;
  for (int n = last + 1;; ++n) {
    if (n - last > kMaxTail)
      throw std::runtime_error("normalization series did not converge");
    if (n < first) continue;
    const double w = layout.log_weight(n, log_x_over_4);
    tail.push_back(w);
    peak = std::max(peak, w);
    if (w < prev && w < peak - 80.0) break;
    prev = w;
  }
  const double log_tail = log_sum_exp(tail);
  const std::array<double, 2> both{log_truncated, log_tail};
  return std::exp(log_tail - log_sum_exp(both));
}

}  // namespace

FourModeState FourModeState::build(const SqueezingParams& params,
                                   std::optional<PhotonConfig> config, int truncation_n) {
  require_zero_phase(params);
  if (truncation_n < 0) throw std::invalid_argument("truncation_n must be >= 0");

  const PhotonConfig effective = config.value_or(PhotonConfig{});
  const Layout layout{effective.kind, effective.m};
  const int first = effective.lower_bound();
  if (truncation_n < first)
    throw std::invalid_argument("subtraction needs truncation_n >= max{m1+m3, m2+m4} = " +
                                std::to_string(first));

  FourModeState state;
  state.params_ = params;
  state.config_ = config;
  state.truncation_n_ = truncation_n;

  const double x = params.x();
  std::vector<AmplitudeTensor::Entry> entries;

  if (x == 0.0) {
    // Only the n = 0 term survives.
    if (first > 0)
      throw std::invalid_argument("subtracting photons from the vacuum yields the zero vector");
    entries.emplace_back(layout.ket(0, 0, 0), Complex{1.0, 0.0});
    state.amplitudes_ = AmplitudeTensor(4, std::move(entries));
    state.leakage_ = 0.0;
    return state;
  }

  const double log_x_over_4 = std::log(x / 4.0);
  const double log_half_t = 0.5 * log_x_over_4;  // log(tanh r / 2)

  std::vector<double> weights;
  for (int n = first; n <= truncation_n; ++n) weights.push_back(layout.log_weight(n, log_x_over_4));
  const double log_z = log_sum_exp(weights);
  state.leakage_ = tail_fraction(layout, first, truncation_n, log_x_over_4, log_z);

  for (int n = first; n <= truncation_n; ++n) {
    const auto f1 = layout.factors1(n);
    const auto f2 = layout.factors2(n);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double base = n * log_half_t - 0.5 * log_z;
    for (std::size_t i = 0; i < f1.size(); ++i) {
      const int r1 = layout.r1_lo(n) + static_cast<int>(i);
      for (std::size_t j = 0; j < f2.size(); ++j) {
        const int r2 = layout.r2_lo(n) + static_cast<int>(j);
        const double amp = sign * std::exp(base + 0.5 * (f1[i] + f2[j]));
        entries.emplace_back(layout.ket(n, r1, r2), Complex{amp, 0.0});
      }
    }
  }
  state.amplitudes_ = AmplitudeTensor(4, std::move(entries));
  return state;
}

std::optional<FockIndex> FourModeState::ket(int n, int r1, int r2) const {
  const PhotonConfig effective = config_.value_or(PhotonConfig{});
  const Layout layout{effective.kind, effective.m};
  if (n < effective.lower_bound()) return std::nullopt;
  if (r1 < layout.r1_lo(n) || r1 > layout.r1_hi(n)) return std::nullopt;
  if (r2 < layout.r2_lo(n) || r2 > layout.r2_hi(n)) return std::nullopt;
  return layout.ket(n, r1, r2);
}

double FourModeState::coefficient(int n, int r1, int r2) const {
  if (n > truncation_n_) return 0.0;
  const auto k = ket(n, r1, r2);
  return k ? amplitudes_.amplitude(*k).real() : 0.0;
}

std::array<int, 4> FourModeState::per_mode_cap() const {
  const auto m = photons();
  const int cap = truncation_n_ + *std::max_element(m.begin(), m.end());
  return {cap, cap, cap, cap};
}

FourModeState build_fmsv(const SqueezingParams& params, int truncation_n) {
  return FourModeState::build(params, std::nullopt, truncation_n);
}

FourModeState apply_photon_config(const SqueezingParams& params, const PhotonConfig& config,
                                  int truncation_n) {
  return FourModeState::build(params, config, truncation_n);
}

TwoModeState build_tmsv(const SqueezingParams& params, int truncation_n) {
  require_zero_phase(params);
  if (truncation_n < 0) throw std::invalid_argument("truncation_n must be >= 0");
  const double t = std::tanh(params.r);
  std::vector<AmplitudeTensor::Entry> entries;
  double norm = 0.0;
  double c = 1.0 / std::cosh(params.r);
  for (int n = 0; n <= truncation_n; ++n) {
    entries.emplace_back(FockIndex{n, n}, Complex{c, 0.0});
    norm += c * c;
    c *= -t;
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& e : entries) e.second *= scale;

  TwoModeState out;
  out.amplitudes = AmplitudeTensor(2, std::move(entries));
  out.params = params;
  out.truncation_n = truncation_n;
  out.leakage = std::pow(t, 2.0 * (truncation_n + 1));
  return out;
}

std::pair<double, double> quadrature_variances(const SqueezingParams& params,
                                               std::size_t mode_count) {
  if (mode_count != 2 && mode_count != 4)
    throw std::invalid_argument("quadrature_variances: only 2- and 4-mode states are supported");
  const double s2 = std::pow(std::sin(params.theta / 2.0), 2);
  const double c2 = std::pow(std::cos(params.theta / 2.0), 2);
  const double up = std::exp(2.0 * params.r);
  const double down = std::exp(-2.0 * params.r);
  return {0.25 * (up * s2 + down * c2), 0.25 * (up * c2 + down * s2)};
}

namespace {

// sum_j (a_j + sign * a_j^+) |state>
AmplitudeTensor collective(const AmplitudeTensor& state, double sign) {
  std::map<FockIndex, Complex> acc;
  for (std::size_t mode = 0; mode < state.mode_count(); ++mode) {
    const AmplitudeTensor lowered = apply_ladder(state, mode, Ladder::Lower);
    const AmplitudeTensor raised = apply_ladder(state, mode, Ladder::Raise);
    for (const auto& [idx, amp] : lowered.entries()) acc[idx] += amp;
    for (const auto& [idx, amp] : raised.entries()) acc[idx] += sign * amp;
  }
  std::vector<AmplitudeTensor::Entry> entries(acc.begin(), acc.end());
  return AmplitudeTensor(state.mode_count(), std::move(entries));
}

}  // namespace

std::pair<double, double> numerical_quadrature_variances(const AmplitudeTensor& state) {
  const double norm = norm_squared(state);
  const double modes = static_cast<double>(state.mode_count());
  const double scale = 1.0 / (4.0 * modes * norm);
  // X1 = Q / (2 sqrt N) with Q Hermitian; X2 = P' / (2i sqrt N) with
  // P' anti-Hermitian, so <X2^2> = ||P'psi||^2 / (4N).
  const AmplitudeTensor q = collective(state, +1.0);
  const AmplitudeTensor p = collective(state, -1.0);
  const double mean_x1 = inner_product(state, q).real() / (2.0 * std::sqrt(modes) * norm);
  const double mean_x2 = inner_product(state, p).imag() / (2.0 * std::sqrt(modes) * norm);
  return {norm_squared(q) * scale - mean_x1 * mean_x1,
          norm_squared(p) * scale - mean_x2 * mean_x2};
}

}  // namespace squeezelab
