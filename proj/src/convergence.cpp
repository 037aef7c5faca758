#include "squeezelab/convergence.hpp"

#include <algorithm>
#include <cmath>

namespace squeezelab {

Converged converge(const Evaluator& evaluate, const ConvergenceOptions& options) {
  if (options.start_n < 0) throw std::invalid_argument("converge: start_n must be >= 0");
  if (options.start_n > options.max_truncation)
    throw std::invalid_argument("converge: start_n exceeds max_truncation");

  int n = options.start_n;
  Evaluation previous = evaluate(n);
  ConvergenceReport report;
  for (;;) {
    const int doubled = std::max(1, 2 * n);
    if (doubled > options.max_truncation) {
      report.converged = false;
      throw ConvergenceError("no convergence up to truncation " +
                                 std::to_string(options.max_truncation) + " (last delta " +
                                 std::to_string(report.value_delta) + ", trace deficit " +
                                 std::to_string(report.trace_deficit) + ")",
                             report);
    }
    const Evaluation current = evaluate(doubled);
    report.truncation_used = doubled;
    report.converged_at = n;
    report.trace_deficit = current.trace_deficit;
    report.value_delta = std::abs(current.value - previous.value);
    if (report.value_delta <= options.tol_value && report.trace_deficit <= options.tol_trace) {
      report.converged = true;
      return {current.value, report};
    }
    n = doubled;
    previous = current;
  }
}

int truncation_for(const PhotonConfig& config, int n) { return config.lower_bound() + n; }

Converged converged_entanglement(const SqueezingParams& params, const PhotonConfig& config,
                                 const Bipartition& split, const ConvergenceOptions& options) {
  return converge(
      [&](int n) {
        const auto state = apply_photon_config(params, config, truncation_for(config, n));
        return Evaluation{bipartite_entanglement(state, split), state.leakage()};
      },
      options);
}

Converged converged_log_negativity(const SqueezingParams& params, const PhotonConfig& config,
                                   std::array<int, 2> pair, const ConvergenceOptions& options) {
  return converge(
      [&](int n) {
        const auto state = apply_photon_config(params, config, truncation_for(config, n));
        return Evaluation{logarithmic_negativity(state, pair), state.leakage()};
      },
      options);
}

DeltaE delta_E(const SqueezingParams& params, const std::array<int, 4>& m, const Bipartition& split,
               const ConvergenceOptions& options) {
  return {converged_entanglement(params, PhotonConfig{PhotonKind::Add, m}, split, options),
          converged_entanglement(params, PhotonConfig{PhotonKind::Subtract, m}, split, options)};
}

}  // namespace squeezelab
