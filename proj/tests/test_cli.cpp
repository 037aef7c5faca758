#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "squeezelab/emit.hpp"
#include "squeezelab/presets.hpp"
#include "squeezelab/scenario.hpp"

using namespace squeezelab;

namespace {

std::string run_to_string(const ScenarioConfig& cfg, OutputFormat format, unsigned threads) {
  RunOptions opts;
  opts.threads = threads;
  std::ostringstream out;
  RowWriter writer(out, format, result_columns(cfg, opts));
  writer.begin();
  run_scenario(cfg, opts, [&](const ResultRow& row) { writer.write(row); });
  return out.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("mode rules") {
  CHECK(parse_mode_rule("3", 1).values == std::vector<int>{3});
  CHECK(parse_mode_rule("0..4", 1).values == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(parse_mode_rule("0..40:10", 1).values == std::vector<int>{0, 10, 20, 30, 40});
  CHECK(parse_mode_rule("5..3", 1).values.empty());
  CHECK(parse_mode_rule("1, 5,9", 1).values == std::vector<int>{1, 5, 9});

  const auto dep = parse_mode_rule("20 - m1", 2);
  CHECK(dep.dependent());
  CHECK(dep.follow(7) == 13);
  const auto same = parse_mode_rule("m3", 4);
  CHECK(same.follow(6) == 6);
  CHECK(parse_mode_rule("m1 + 2", 3).follow(1) == 3);
  CHECK(parse_mode_rule("m1 - 2", 3).follow(5) == 3);

  CHECK_THROWS_AS(parse_mode_rule("m2", 2), ConfigError);
  CHECK_THROWS_AS(parse_mode_rule("-1", 1), ConfigError);
  CHECK_THROWS_AS(parse_mode_rule("2 * m1", 2), ConfigError);
  CHECK_THROWS_AS(parse_mode_rule("0..4:0", 1), ConfigError);
  CHECK_THROWS_AS(parse_mode_rule("x", 1), ConfigError);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"(
# comment
name = demo
quantity = log_negativity   # trailing
kind = add
pair = 13
squeezing = 0.3
m1 = 0..2
m2 = 2 - m1
m3 = 1
tol_value = 1e-7
)");
  CHECK(cfg.name == "demo");
  CHECK(cfg.quantity == Quantity::LogNegativity);
  CHECK(cfg.kind == KindSelection::Add);
  CHECK(cfg.pair == std::array<int, 2>{1, 3});
  CHECK(cfg.squeezing == 0.3);
  CHECK(cfg.tolerances.tol_value == 1e-7);
  const auto grid = expand_grid(cfg);
  REQUIRE(grid.size() == 3);
  CHECK(grid[0].m == std::array<int, 4>{0, 2, 1, 0});
  CHECK(grid[2].m == std::array<int, 4>{2, 0, 1, 0});
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("bogus = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("m1 = 1\nm1 = 2"), ConfigError);
  CHECK_THROWS_AS(parse_config("no equals sign"), ConfigError);
  CHECK_THROWS_AS(parse_config("quantity = delta_E\nkind = add"), ConfigError);
  CHECK_THROWS_AS(parse_config("pair = 21"), ConfigError);
  CHECK_THROWS_AS(parse_config("split = 12:33"), ConfigError);
  CHECK_THROWS_AS(parse_config("squeezing = -1"), ConfigError);
  CHECK_THROWS_AS(parse_config("tol_trace = 0"), ConfigError);
  CHECK_THROWS_AS(parse_config("m1 = 0..5\nm2 = 3 - m1"), ConfigError);
  CHECK_THROWS_AS(parse_config("m1 = 0..5\nm2 = m1\nm3 = m2"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("grid order: mode 1 outermost") {
  const auto cfg = parse_config("m1 = 0..1\nm3 = 0..2");
  const auto g = expand_grid(cfg);
  REQUIRE(g.size() == 6);
  CHECK(g[0].m == std::array<int, 4>{0, 0, 0, 0});
  CHECK(g[1].m == std::array<int, 4>{0, 0, 1, 0});
  CHECK(g[3].m == std::array<int, 4>{1, 0, 0, 0});
}

TEST_CASE("convergence grid repeats the schedule per point") {
  const auto cfg = parse_config("quantity = convergence\nkind = add\nm1 = 1,2\nschedule = 2,4");
  const auto g = expand_grid(cfg);
  REQUIRE(g.size() == 4);
  CHECK(g[1].n == 4);
  CHECK(g[2].m[0] == 2);
  const auto cols = result_columns(cfg, RunOptions{});
  CHECK(cols[4] == "N");
  CHECK(cols[5] == "S_add");
}

TEST_CASE("empty sweep range produces zero rows") {
  const auto cfg = parse_config("m1 = 5..3");
  const auto s = run_to_string(cfg, OutputFormat::Csv, 2);
  CHECK(count_lines(s) == 1);
}

TEST_CASE("three rows of CSV are four lines") {
  const auto cfg = parse_config("quantity = delta_E\nm1 = 0..2");
  const auto s = run_to_string(cfg, OutputFormat::Csv, 1);
  CHECK(count_lines(s) == 4);
  CHECK(s.rfind("m1,m2,m3,m4,E_add,truncation_add,trace_deficit_add,value_delta_add,E_sub,", 0) == 0);
}

TEST_CASE("output is deterministic across runs and thread counts") {
  const auto cfg = parse_config("quantity = entropy\nsplit = 12:34\nm1 = 0..3\nm3 = 0..1");
  const auto a = run_to_string(cfg, OutputFormat::Csv, 1);
  const auto b = run_to_string(cfg, OutputFormat::Csv, 4);
  const auto c = run_to_string(cfg, OutputFormat::Csv, 4);
  CHECK(a == b);
  CHECK(b == c);
}

TEST_CASE("json-lines rows") {
  const auto cfg = parse_config("quantity = log_negativity\nkind = add\nm1 = 0..1");
  const auto s = run_to_string(cfg, OutputFormat::JsonLines, 1);
  CHECK(count_lines(s) == 2);
  CHECK(s.rfind("{\"m1\":0,\"m2\":0,\"m3\":0,\"m4\":0,\"LN_add\":", 0) == 0);
  CHECK(s.find("\"error\":\"\"}") != std::string::npos);
}

TEST_CASE("failed points are flagged, not dropped") {
  auto cfg = parse_config("quantity = entropy\nkind = add\nm1 = 0..1\nmax_truncation = 4\nstart_n = 4");
  std::vector<ResultRow> rows;
  const auto summary = run_scenario(cfg, RunOptions{}, [&](const ResultRow& r) { rows.push_back(r); });
  CHECK(summary.rows == 2);
  CHECK(summary.failed == 2);
  CHECK_FALSE(rows[0].converged);
  CHECK(std::isnan(std::get<double>(rows[0].cells[4])));
  CHECK(std::get<std::string>(rows[0].cells.back()).find("add:") == 0);
}

TEST_CASE("timing column only on request") {
  const auto cfg = parse_config("m1 = 0");
  RunOptions opts;
  CHECK(result_columns(cfg, opts).back() == "error");
  opts.timing = true;
  CHECK(result_columns(cfg, opts).back() == "wall_ms");
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(parse_format("json-lines") == OutputFormat::JsonLines);
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("preset catalog") {
  std::set<std::string> names;
  for (const auto& p : preset_sources()) {
    CAPTURE(p.name);
    names.insert(p.name);
    const auto cfg = load_preset(p.name);
    CHECK(cfg.name == p.name);
    CHECK(cfg.squeezing == 0.4);
    CHECK_FALSE(expand_grid(cfg).empty());
  }
  for (const char* required : {"fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig5", "fig7a", "fig7b", "fig8a", "fig8b",
                               "fig9a", "fig9b", "fig10a", "fig10b", "fig11", "fig12a", "fig12b"})
    CHECK(names.count(required) == 1);
  CHECK_THROWS_AS(load_preset("fig99"), ConfigError);
}

TEST_CASE("preset grid sizes") {
  CHECK(expand_grid(load_preset("fig2")).size() == 41);
  CHECK(expand_grid(load_preset("fig5")).size() == 24);
  CHECK(expand_grid(load_preset("fig8b")).size() == 21);
  CHECK(expand_grid(load_preset("fig7a")).size() == 441);
  const auto g = expand_grid(load_preset("fig8b"));
  for (const auto& p : g) CHECK(p.m[0] + p.m[1] == 20);
}

TEST_CASE("fig2 rows coincide") {
  auto cfg = load_preset("fig2");
  cfg.modes[0] = parse_mode_rule("0..40:8", 1);
  RunOptions opts;
  opts.threads = 2;
  run_scenario(cfg, opts, [&](const ResultRow& row) {
    CHECK(row.converged);
    CHECK(std::abs(std::get<double>(row.cells[12])) <= 1e-8);
  });
}

}
