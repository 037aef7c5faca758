// squeezelab command-line scenario runner.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "squeezelab/emit.hpp"
#include "squeezelab/presets.hpp"
#include "squeezelab/scenario.hpp"

namespace sl = squeezelab;

namespace {

struct RunArgs {
  std::string preset;
  std::string config;
  std::string out = "-";
  std::string format = "csv";
  std::optional<double> squeezing;
  std::optional<double> tol_value;
  std::optional<double> tol_trace;
  std::optional<int> max_truncation;
  std::optional<unsigned> threads;
  bool timing = false;
};

int run(const RunArgs& args) {
  sl::ScenarioConfig cfg = args.preset.empty() ? sl::load_config(args.config) : sl::load_preset(args.preset);
  if (args.squeezing) cfg.squeezing = *args.squeezing;
  if (args.tol_value) cfg.tolerances.tol_value = *args.tol_value;
  if (args.tol_trace) cfg.tolerances.tol_trace = *args.tol_trace;
  if (args.max_truncation) cfg.tolerances.max_truncation = *args.max_truncation;
  sl::validate(cfg);

  sl::RunOptions options;
  options.threads = args.threads ? *args.threads : sl::default_thread_count();
  options.timing = args.timing;
  const auto format = sl::parse_format(args.format);

  std::unique_ptr<std::ofstream> file;
  std::ostream* out = &std::cout;
  if (args.out != "-") {
    file = std::make_unique<std::ofstream>(args.out, std::ios::binary);
    if (!*file) throw std::runtime_error("cannot open output file: " + args.out);
    out = file.get();
  }
  sl::RowWriter writer(*out, format, sl::result_columns(cfg, options), args.out == "-" ? "<stdout>" : args.out);
  writer.begin();
  const auto summary = sl::run_scenario(cfg, options, [&](const sl::ResultRow& row) { writer.write(row); });
  if (file) {
    file->close();
    if (!*file) throw std::runtime_error("write failed: " + args.out);
  }

  std::cerr << (cfg.name.empty() ? std::string("scenario") : cfg.name) << ": " << summary.rows << " rows";
  if (args.out != "-") std::cerr << " -> " << args.out;
  if (summary.failed) std::cerr << ", " << summary.failed << " did not converge";
  std::cerr << '\n';
  return summary.failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement and non-Gaussianity of photon-added/-subtracted four-mode squeezed vacuum"};
  app.require_subcommand(1);

  RunArgs args;
  auto* run_cmd = app.add_subcommand("run", "evaluate a scenario grid and write a table");
  auto* preset_opt = run_cmd->add_option("--preset", args.preset, "built-in scenario (see list-presets)");
  auto* config_opt = run_cmd->add_option("--config", args.config, "scenario file (key = value lines)")
                         ->check(CLI::ExistingFile);
  preset_opt->excludes(config_opt);
  run_cmd->add_option("--out", args.out, "output path, '-' for stdout")->capture_default_str();
  run_cmd->add_option("--format", args.format, "csv or json-lines")
      ->check(CLI::IsMember({"csv", "json-lines"}))
      ->capture_default_str();
  run_cmd->add_option("--squeezing", args.squeezing, "squeezing parameter r")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--tol-value", args.tol_value, "convergence tolerance on the value")->check(CLI::PositiveNumber);
  run_cmd->add_option("--tol-trace", args.tol_trace, "convergence tolerance on the trace deficit")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--max-truncation", args.max_truncation, "ceiling for the doubled truncation N")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--threads", args.threads, "worker threads (default: $SQUEEZELAB_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--timing", args.timing, "append a wall_ms column (output no longer reproducible)");

  auto* list_cmd = app.add_subcommand("list-presets", "list built-in scenarios");
  std::string show_name;
  auto* show_cmd = app.add_subcommand("show-preset", "print a built-in scenario file");
  show_cmd->add_option("name", show_name)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      if (args.preset.empty() && args.config.empty()) {
        std::cerr << "run: one of --preset or --config is required\n";
        return 1;
      }
      return run(args);
    }
    if (*list_cmd) {
      for (const auto& p : sl::preset_sources()) {
        const auto cfg = sl::parse_config(p.text, p.name);
        std::cout << p.name << '\t' << cfg.description << '\n';
      }
      return 0;
    }
    if (*show_cmd) {
      for (const auto& p : sl::preset_sources())
        if (p.name == show_name) {
          std::cout << p.text;
          return 0;
        }
      std::cerr << "unknown preset '" << show_name << "'\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "squeezelab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
