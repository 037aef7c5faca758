#pragma once

#include "oracles.hpp"
#include "squeezelab/fock.hpp"

inline oracle::StateMap to_map(const squeezelab::AmplitudeTensor& t) {
  oracle::StateMap out;
  for (const auto& [idx, amp] : t.entries()) {
    oracle::Ket k;
    for (std::size_t i = 0; i < idx.mode_count(); ++i) k.push_back(idx[i]);
    out[k] = amp.real();
  }
  return out;
}

/// max |a - b| over the union of supports.
inline double max_diff(const oracle::StateMap& a, const oracle::StateMap& b) {
  double d = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    d = std::max(d, std::abs(v - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) d = std::max(d, std::abs(v));
  return d;
}
