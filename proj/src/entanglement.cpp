#include "squeezelab/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace squeezelab {

Bipartition Bipartition::from_block(std::vector<int> block_a) {
  std::sort(block_a.begin(), block_a.end());
  if (block_a.empty()) throw std::invalid_argument("bipartition block is empty");
  if (std::adjacent_find(block_a.begin(), block_a.end()) != block_a.end())
    throw std::invalid_argument("bipartition repeats a mode");
  for (int m : block_a)
    if (m < 1 || m > 4) throw std::invalid_argument("bipartition mode out of range 1..4");
  Bipartition out;
  out.block_a = block_a;
  for (int m = 1; m <= 4; ++m)
    if (!std::binary_search(block_a.begin(), block_a.end(), m)) out.block_b.push_back(m);
  if (out.block_b.empty()) throw std::invalid_argument("bipartition block B is empty");
  return out;
}

Bipartition Bipartition::parse(std::string_view label) {
  const auto colon = label.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("bipartition label needs a ':' (e.g. 13:24)");
  auto digits = [&](std::string_view part) {
    std::vector<int> out;
    for (char c : part) {
      if (c < '1' || c > '4')
        throw std::invalid_argument("bad bipartition label: " + std::string(label));
      out.push_back(c - '0');
    }
    return out;
  };
  Bipartition out = from_block(digits(label.substr(0, colon)));
  auto b = digits(label.substr(colon + 1));
  std::sort(b.begin(), b.end());
  if (b != out.block_b)
    throw std::invalid_argument("bipartition blocks must partition {1,2,3,4}: " + std::string(label));
  return out;
}

std::vector<Bipartition> Bipartition::all() {
  std::vector<Bipartition> out;
  for (int mask = 1; mask < 16; ++mask) {
    if (!(mask & 1) || mask == 15) continue;
    std::vector<int> a;
    for (int m = 0; m < 4; ++m)
      if (mask & (1 << m)) a.push_back(m + 1);
    out.push_back(from_block(a));
  }
  return out;
}

std::string Bipartition::label() const {
  std::string s;
  for (int m : block_a) s += static_cast<char>('0' + m);
  s += ':';
  for (int m : block_b) s += static_cast<char>('0' + m);
  return s;
}

double entropy_bits(std::span<const double> eigenvalues) {
  double s = 0.0;
  double lowest = 0.0;
  for (double l : eigenvalues) {
    lowest = std::min(lowest, l);
    if (l > kEigenClamp) s -= l * std::log2(l);
  }
  if (lowest < -kPsdTolerance)
    throw PsdViolation("density matrix is not positive semidefinite (truncation too small?)", lowest);
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const auto ev = rho.eigenvalues();
  return entropy_bits(ev);
}

double bipartite_entanglement(const FourModeState& state, const Bipartition& split) {
  const auto& keep = split.block_b.size() < split.block_a.size() ? split.block_b : split.block_a;
  return von_neumann_entropy(partial_trace(state, keep));
}

double logarithmic_negativity(const DensityMatrix& rho, int transpose_mode) {
  if (rho.hermiticity_error() > 1e-10)
    throw std::invalid_argument("logarithmic_negativity: input is not Hermitian");
  const auto ev = partial_transpose(rho, transpose_mode).eigenvalues();
  double negative = 0.0;
  for (double l : ev)
    if (l < 0.0) negative += l;
  return std::log2(1.0 + 2.0 * std::abs(negative));
}

double logarithmic_negativity(const FourModeState& state, std::array<int, 2> pair) {
  const auto rho = partial_trace(state, pair);
  return logarithmic_negativity(rho, rho.kept_modes().back());
}

}  // namespace squeezelab
