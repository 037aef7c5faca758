#include "squeezelab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "squeezelab/gaussianity.hpp"

namespace squeezelab {

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::Entropy: return "entropy";
    case Quantity::DeltaE: return "delta_E";
    case Quantity::LogNegativity: return "log_negativity";
    case Quantity::NonGaussianity: return "non_gaussianity";
    case Quantity::Convergence: return "convergence";
  }
  return "?";
}

std::string to_string(KindSelection k) {
  switch (k) {
    case KindSelection::Add: return "add";
    case KindSelection::Subtract: return "subtract";
    case KindSelection::Both: return "both";
  }
  return "?";
}

// --- parsing ----------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(what + ": expected an integer, got '" + t + "'");
  return v;
}

double parse_double(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
    throw ConfigError(what + ": expected a finite number, got '" + t + "'");
  return v;
}

int non_negative(int v, const std::string& what) {
  if (v < 0) throw ConfigError(what + ": photon counts must be >= 0");
  return v;
}

}  // namespace

ModeRule parse_mode_rule(const std::string& raw, int mode) {
  const std::string what = "m" + std::to_string(mode);
  const std::string text = trim(raw);
  ModeRule rule;
  rule.values.clear();

  if (text.find('m') != std::string::npos) {
    static const std::regex leading(R"(^(\d+)\s*([+-])\s*m([1-4])$)");
    static const std::regex trailing(R"(^m([1-4])(?:\s*([+-])\s*(\d+))?$)");
    std::smatch mt;
    if (std::regex_match(text, mt, leading)) {
      rule.offset = parse_int(mt[1].str(), what);
      rule.sign = mt[2].str() == "-" ? -1 : 1;
      rule.other = parse_int(mt[3].str(), what);
    } else if (std::regex_match(text, mt, trailing)) {
      rule.other = parse_int(mt[1].str(), what);
      if (mt[2].matched) rule.offset = (mt[2].str() == "-" ? -1 : 1) * parse_int(mt[3].str(), what);
    } else {
      throw ConfigError(what + ": dependent rule must look like 'm3', '20 - m1' or 'm1 + 2'");
    }
    if (rule.other == mode) throw ConfigError(what + ": rule refers to itself");
    return rule;
  }
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = non_negative(parse_int(text.substr(0, dots), what), what);
    std::string rest = text.substr(dots + 2);
    int step = 1;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
      step = parse_int(rest.substr(colon + 1), what);
      rest = rest.substr(0, colon);
      if (step <= 0) throw ConfigError(what + ": step must be positive");
    }
    const int hi = parse_int(rest, what);
    for (int v = lo; v <= hi; v += step) rule.values.push_back(v);
    return rule;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) rule.values.push_back(non_negative(parse_int(item, what), what));
  if (rule.values.empty()) throw ConfigError(what + ": empty value");
  return rule;
}

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    seen[key] = lineno;

    const std::string what = where + ": " + key;
    try {
      if (key == "name") {
        cfg.name = value;
      } else if (key == "description") {
        cfg.description = value;
      } else if (key == "squeezing") {
        cfg.squeezing = parse_double(value, what);
      } else if (key == "kind") {
        if (value == "add") cfg.kind = KindSelection::Add;
        else if (value == "subtract") cfg.kind = KindSelection::Subtract;
        else if (value == "both") cfg.kind = KindSelection::Both;
        else throw ConfigError(what + ": expected add, subtract or both");
      } else if (key == "quantity") {
        if (value == "entropy") cfg.quantity = Quantity::Entropy;
        else if (value == "delta_E") cfg.quantity = Quantity::DeltaE;
        else if (value == "log_negativity") cfg.quantity = Quantity::LogNegativity;
        else if (value == "non_gaussianity") cfg.quantity = Quantity::NonGaussianity;
        else if (value == "convergence") cfg.quantity = Quantity::Convergence;
        else throw ConfigError(what + ": unknown quantity '" + value + "'");
      } else if (key == "split") {
        cfg.split = Bipartition::parse(value);
      } else if (key == "pair") {
        if (value.size() != 2) throw ConfigError(what + ": expected two mode digits, e.g. 12");
        cfg.pair = {value[0] - '0', value[1] - '0'};
      } else if (key.size() == 2 && key[0] == 'm' && key[1] >= '1' && key[1] <= '4') {
        const int mode = key[1] - '0';
        cfg.modes[static_cast<std::size_t>(mode - 1)] = parse_mode_rule(value, mode);
      } else if (key == "tol_value") {
        cfg.tolerances.tol_value = parse_double(value, what);
      } else if (key == "tol_trace") {
        cfg.tolerances.tol_trace = parse_double(value, what);
      } else if (key == "start_n") {
        cfg.tolerances.start_n = parse_int(value, what);
      } else if (key == "max_truncation") {
        cfg.tolerances.max_truncation = parse_int(value, what);
      } else if (key == "schedule") {
        cfg.schedule = parse_mode_rule(value, 0).values;
      } else {
        throw ConfigError(what + ": unknown key");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(what + ": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

void validate(const ScenarioConfig& cfg) {
  if (!(cfg.squeezing >= 0.0) || !std::isfinite(cfg.squeezing))
    throw ConfigError("squeezing must be finite and >= 0");
  if (cfg.quantity == Quantity::DeltaE && cfg.kind != KindSelection::Both)
    throw ConfigError("delta_E needs kind = both");
  if (cfg.pair[0] < 1 || cfg.pair[0] > 4 || cfg.pair[1] < 1 || cfg.pair[1] > 4 ||
      cfg.pair[0] >= cfg.pair[1])
    throw ConfigError("pair must name two distinct modes in ascending order, e.g. 12");
  const auto& t = cfg.tolerances;
  if (!(t.tol_value > 0.0) || !(t.tol_trace > 0.0)) throw ConfigError("tolerances must be positive");
  if (t.start_n < 0 || t.max_truncation < 1 || t.start_n > t.max_truncation)
    throw ConfigError("need 0 <= start_n <= max_truncation and max_truncation >= 1");
  if (cfg.quantity == Quantity::Convergence) {
    if (cfg.schedule.empty()) throw ConfigError("convergence needs a non-empty schedule");
  }
  for (int k = 0; k < 4; ++k) {
    const auto& rule = cfg.modes[static_cast<std::size_t>(k)];
    for (int v : rule.values)
      if (v < 0) throw ConfigError("photon counts must be >= 0");
    if (!rule.dependent()) continue;
    const auto& base = cfg.modes[static_cast<std::size_t>(rule.other - 1)];
    if (base.dependent())
      throw ConfigError("m" + std::to_string(k + 1) + " depends on another dependent mode");
    for (int v : base.values)
      if (rule.follow(v) < 0)
        throw ConfigError("m" + std::to_string(k + 1) + " goes negative at m" +
                          std::to_string(rule.other) + " = " + std::to_string(v));
  }
}

std::vector<GridPoint> expand_grid(const ScenarioConfig& cfg) {
  std::vector<GridPoint> out;
  std::array<int, 4> m{};
  std::function<void(int)> walk = [&](int k) {
    if (k == 4) {
      GridPoint p;
      p.m = m;
      for (int j = 0; j < 4; ++j) {
        const auto& rule = cfg.modes[static_cast<std::size_t>(j)];
        if (rule.dependent()) p.m[j] = rule.follow(m[rule.other - 1]);
      }
      if (cfg.quantity == Quantity::Convergence) {
        for (int n : cfg.schedule) {
          p.n = n;
          out.push_back(p);
        }
      } else {
        out.push_back(p);
      }
      return;
    }
    const auto& rule = cfg.modes[static_cast<std::size_t>(k)];
    if (rule.dependent()) {
      walk(k + 1);
      return;
    }
    for (int v : rule.values) {
      m[static_cast<std::size_t>(k)] = v;
      walk(k + 1);
    }
  };
  walk(0);
  return out;
}

// --- evaluation -------------------------------------------------------------

namespace {

std::vector<PhotonKind> kinds_of(KindSelection k) {
  switch (k) {
    case KindSelection::Add: return {PhotonKind::Add};
    case KindSelection::Subtract: return {PhotonKind::Subtract};
    case KindSelection::Both: return {PhotonKind::Add, PhotonKind::Subtract};
  }
  return {};
}

std::string short_kind(PhotonKind k) { return k == PhotonKind::Add ? "add" : "sub"; }

std::string symbol(Quantity q) {
  switch (q) {
    case Quantity::Entropy:
    case Quantity::DeltaE: return "E";
    case Quantity::LogNegativity: return "LN";
    case Quantity::NonGaussianity: return "NG";
    case Quantity::Convergence: return "S";
  }
  return "?";
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<std::string> result_columns(const ScenarioConfig& cfg, const RunOptions& options) {
  std::vector<std::string> cols{"m1", "m2", "m3", "m4"};
  if (cfg.quantity == Quantity::Convergence) cols.push_back("N");
  for (auto kind : kinds_of(cfg.kind)) {
    const std::string k = short_kind(kind);
    cols.push_back(symbol(cfg.quantity) + "_" + k);
    if (cfg.quantity == Quantity::Convergence) {
      cols.push_back("trace_" + k);
      cols.push_back("truncation_" + k);
    } else {
      cols.push_back("truncation_" + k);
      cols.push_back("trace_deficit_" + k);
      cols.push_back("value_delta_" + k);
    }
  }
  if (cfg.quantity == Quantity::DeltaE) cols.push_back("delta_E");
  cols.push_back("converged");
  cols.push_back("error");
  if (options.timing) cols.push_back("wall_ms");
  return cols;
}

ResultRow evaluate_point(const ScenarioConfig& cfg, const GridPoint& point, std::size_t index,
                         const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  ResultRow row;
  row.index = index;
  for (int v : point.m) row.cells.emplace_back(std::int64_t{v});
  if (cfg.quantity == Quantity::Convergence) row.cells.emplace_back(std::int64_t{point.n});

  const SqueezingParams params(cfg.squeezing);
  std::string errors;
  std::vector<double> values;
  for (auto kind : kinds_of(cfg.kind)) {
    const PhotonConfig pc(kind, point.m);
    try {
      if (cfg.quantity == Quantity::Convergence) {
        const int trunc = truncation_for(pc, point.n);
        const auto state = apply_photon_config(params, pc, trunc);
        const double s = bipartite_entanglement(state, cfg.split);
        values.push_back(s);
        row.cells.emplace_back(s);
        row.cells.emplace_back(1.0 - state.leakage());
        row.cells.emplace_back(std::int64_t{trunc});
        continue;
      }
      Converged c;
      switch (cfg.quantity) {
        case Quantity::Entropy:
        case Quantity::DeltaE: c = converged_entanglement(params, pc, cfg.split, cfg.tolerances); break;
        case Quantity::LogNegativity: c = converged_log_negativity(params, pc, cfg.pair, cfg.tolerances); break;
        case Quantity::NonGaussianity: c = converged_non_gaussianity(params, pc, cfg.tolerances); break;
        case Quantity::Convergence: break;
      }
      values.push_back(c.value);
      row.cells.emplace_back(c.value);
      row.cells.emplace_back(std::int64_t{truncation_for(pc, c.report.truncation_used)});
      row.cells.emplace_back(c.report.trace_deficit);
      row.cells.emplace_back(c.report.value_delta);
    } catch (const std::exception& e) {
      row.converged = false;
      if (!errors.empty()) errors += "; ";
      errors += short_kind(kind) + ": " + e.what();
      values.push_back(kNaN);
      const int blanks = cfg.quantity == Quantity::Convergence ? 3 : 4;
      for (int i = 0; i < blanks; ++i) row.cells.emplace_back(kNaN);
    }
  }
  if (cfg.quantity == Quantity::DeltaE) row.cells.emplace_back(values[0] - values[1]);
  row.cells.emplace_back(std::int64_t{row.converged ? 1 : 0});
  row.cells.emplace_back(errors);
  if (options.timing) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started);
    row.cells.emplace_back(ms.count());
  }
  return row;
}

RunSummary run_scenario(const ScenarioConfig& cfg, const RunOptions& options,
                        const std::function<void(const ResultRow&)>& sink) {
  validate(cfg);
  const auto points = expand_grid(cfg);
  RunSummary summary;
  const auto deliver = [&](const ResultRow& row) {
    ++summary.rows;
    if (!row.converged) ++summary.failed;
    sink(row);
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, options.threads), points.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) deliver(evaluate_point(cfg, points[i], i, options));
    return summary;
  }

  std::vector<std::optional<ResultRow>> slots(points.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::condition_variable ready;

  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= points.size() || stop.load()) return;
        ResultRow row = evaluate_point(cfg, points[i], i, options);
        {
          std::lock_guard lock(mu);
          slots[i] = std::move(row);
        }
        ready.notify_all();
      }
    });
  }

  try {
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::optional<ResultRow> row;
      {
        std::unique_lock lock(mu);
        ready.wait(lock, [&] { return slots[i].has_value(); });
        row = std::move(slots[i]);
        slots[i].reset();
      }
      deliver(*row);
    }
  } catch (...) {
    stop.store(true);
    throw;  // jthreads join on unwind
  }
  return summary;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("SQUEEZELAB_THREADS")) {
    const std::string s = trim(env);
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace squeezelab
