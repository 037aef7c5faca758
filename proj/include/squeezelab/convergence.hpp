#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "squeezelab/entanglement.hpp"
#include "squeezelab/states.hpp"

namespace squeezelab {

struct ConvergenceOptions {
  int start_n = 4;
  double tol_value = 1e-6;
  double tol_trace = 1e-6;
  int max_truncation = 512;  // ceiling on the doubled N
};

/// Value of a quantity at one truncation, with the probability mass that
/// truncation dropped.
struct Evaluation {
  double value = 0.0;
  double trace_deficit = 0.0;
};

struct ConvergenceReport {
  int truncation_used = 0;  // 2N, where the returned value was evaluated
  int converged_at = 0;     // N
  double trace_deficit = 0.0;
  double value_delta = 0.0;  // |value(N) - value(2N)|
  bool converged = false;
};

struct Converged {
  double value = 0.0;
  ConvergenceReport report;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, ConvergenceReport report)
      : std::runtime_error(what), report_(report) {}
  const ConvergenceReport& report() const { return report_; }

 private:
  ConvergenceReport report_;
};

using Evaluator = std::function<Evaluation(int)>;

/// Doubles N from options.start_n until |value(N) - value(2N)| <= tol_value
/// and the trace deficit at 2N is <= tol_trace; returns value(2N).
/// Throws ConvergenceError once 2N would exceed options.max_truncation.
Converged converge(const Evaluator& evaluate, const ConvergenceOptions& options = {});

/// Truncation of the outer sum for headroom N: N for addition, M + N for
/// subtraction.
int truncation_for(const PhotonConfig& config, int n);

Converged converged_entanglement(const SqueezingParams& params, const PhotonConfig& config,
                                 const Bipartition& split, const ConvergenceOptions& options = {});

Converged converged_log_negativity(const SqueezingParams& params, const PhotonConfig& config,
                                   std::array<int, 2> pair, const ConvergenceOptions& options = {});

struct DeltaE {
  Converged add;
  Converged sub;
  double value() const { return add.value - sub.value; }
};

/// E(add) - E(sub) for one photon configuration, each independently converged.
DeltaE delta_E(const SqueezingParams& params, const std::array<int, 4>& m, const Bipartition& split,
               const ConvergenceOptions& options = {});

}  // namespace squeezelab
