#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "squeezelab/convergence.hpp"
#include "squeezelab/entanglement.hpp"

namespace squeezelab {

enum class Quantity { Entropy, DeltaE, LogNegativity, NonGaussianity, Convergence };
enum class KindSelection { Add, Subtract, Both };

std::string to_string(Quantity q);
std::string to_string(KindSelection k);

/// Photon count rule for one mode: a list of values (a single value makes
/// the mode a spectator), or offset + sign * m<other> tied to another mode.
struct ModeRule {
  std::vector<int> values{0};
  int other = 0;  // 1-based mode this one follows; 0 when independent
  int offset = 0;
  int sign = 1;

  bool dependent() const { return other != 0; }
  bool player() const { return dependent() || values.size() != 1; }
  int follow(int base) const { return offset + sign * base; }
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  double squeezing = 0.4;
  KindSelection kind = KindSelection::Both;
  Quantity quantity = Quantity::Entropy;
  Bipartition split = Bipartition::parse("1:234");
  std::array<int, 2> pair{1, 2};
  std::array<ModeRule, 4> modes{};
  ConvergenceOptions tolerances;
  std::vector<int> schedule{2, 4, 6, 8, 10, 12, 16, 20};  // for Quantity::Convergence
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` document; `#` and `;` start comments.
ScenarioConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ScenarioConfig load_config(const std::string& path);

/// Parses one mode rule: "3", "0..40", "0..40:2", "1,5,9", or a dependent
/// form "m3", "20 - m1", "m1 + 2".
ModeRule parse_mode_rule(const std::string& text, int mode);

/// Rejects inconsistent configurations (dependent chains, negative counts,
/// kind/quantity mismatch, etc.).
void validate(const ScenarioConfig& cfg);

struct GridPoint {
  std::array<int, 4> m{};
  int n = -1;  // truncation headroom, only for Quantity::Convergence
};

/// Grid points in deterministic order: mode 1 outermost, then the
/// convergence schedule innermost.
std::vector<GridPoint> expand_grid(const ScenarioConfig& cfg);

using Cell = std::variant<std::int64_t, double, std::string>;

struct ResultRow {
  std::size_t index = 0;
  std::vector<Cell> cells;  // aligned with result_columns()
  bool converged = true;
};

struct RunOptions {
  unsigned threads = 1;
  bool timing = false;  // append a wall_ms column (makes output non-deterministic)
};

std::vector<std::string> result_columns(const ScenarioConfig& cfg, const RunOptions& options);

ResultRow evaluate_point(const ScenarioConfig& cfg, const GridPoint& point, std::size_t index,
                         const RunOptions& options);

struct RunSummary {
  std::size_t rows = 0;
  std::size_t failed = 0;
};

/// Evaluates every grid point on a worker pool and hands rows to `sink` in
/// grid order.
RunSummary run_scenario(const ScenarioConfig& cfg, const RunOptions& options,
                        const std::function<void(const ResultRow&)>& sink);

/// Threads from SQUEEZELAB_THREADS, else hardware concurrency (at least 1).
unsigned default_thread_count();

}  // namespace squeezelab
