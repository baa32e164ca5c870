#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "experiment.hpp"

using namespace shrinktarget;
using nlohmann::json;

namespace {
const double kLu = std::log((3.0 + std::sqrt(5.0)) / 2.0);

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(EXAMPLES_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load(const std::string& name) { return parse_config_text(slurp(name)); }

std::string validation_message(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Validation);
    return e.what();
  }
  FAIL("config unexpectedly validated");
  return {};
}

const json& task(const Report& r, const std::string& name) {
  for (const auto& t : r.doc["tasks"])
    if (t["task"] == name) return t;
  FAIL("no task " << name);
  static json none;
  return none;
}

const BoundRow& row(const Report& r, const std::string& label) {
  for (const auto& x : r.rows)
    if (x.theorem == label) return x;
  FAIL("no row " << label);
  return r.rows.front();
}
}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(std::nullopt) == "NA");
  CHECK(format_number(kInfinity) == "inf");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(kLu) == "0.962423650119");
  CHECK(format_number(2.0) == "2");
}

TEST_CASE("cat map config") {
  auto cfg = load("cat_map.json");
  CHECK(cfg.name == "cat-map");
  auto rep = run(cfg);
  CHECK(rep.all_tasks_ok);
  CHECK(rep.doc["schema_version"] == 1);
  CHECK(rep.doc["tool"]["version"] == "0.1.0");
  CHECK(rep.doc["config"]["name"] == "cat-map");

  const auto& exact = row(rep, "toral-automorphism");
  CHECK(exact.report.case_tag == CaseTag::Exact);
  CHECK(std::abs(*exact.report.entropy_upper - kLu) < 1e-9);
  CHECK(std::abs(*exact.report.dim_upper - 2.0) < 1e-9);
  const auto& sharp = row(rep, "hyperbolic-set [sharp]");
  CHECK(*sharp.report.entropy_upper == doctest::Approx(*exact.report.entropy_upper).epsilon(1e-12));

  const auto& analyze = task(rep, "analyze")["result"];
  CHECK(analyze["spectrum"]["d_s"] == 1);
  CHECK(analyze["spectrum"]["is_hyperbolic"] == true);
  CHECK(analyze["kind"] == "automorphism");

  for (const auto& r : rep.rows) CHECK(r.report.consistent());
  CHECK(task(rep, "analyze").contains("wall_ms") == false);
}

TEST_CASE("doubling map config") {
  auto rep = run(load("doubling.json"));
  CHECK(rep.all_tasks_ok);
  const auto& r = row(rep, "expanding-torus");
  CHECK(r.report.case_tag == CaseTag::Exact);
  CHECK(std::abs(*r.report.entropy_upper - std::log(2.0) / 2) < 1e-12);
  CHECK(std::abs(*r.report.dim_upper - 0.5) < 1e-12);
}

TEST_CASE("golden mean oracle config") {
  auto rep = run(load("golden_oracle.json"));
  CHECK(rep.all_tasks_ok);
  const auto& o = task(rep, "oracle")["result"][0];
  CHECK(o["status"] == "ok");
  const double lo = o["bracket"]["s_lo"], hi = o["bracket"]["s_hi"];
  CHECK(lo <= 0.320808);
  CHECK(hi >= 0.320808);
  CHECK(o["bracket"]["contains_predicted"] == true);
  CHECK(o["moran"]["within_bracket_upper"] == true);
}

TEST_CASE("golden mean witness config") {
  auto rep = run(load("golden_witness.json"));
  CHECK(rep.all_tasks_ok);
  const auto& w = task(rep, "witness")["result"][0];
  CHECK(w["status"] == "ok");
  CHECK(w["all_verified"] == true);
  CHECK(w["admissible"] == true);
  CHECK(w["independently_confirmed"] == true);
  CHECK(w["hits"].size() == 5);
}

TEST_CASE("index-set counterexample config") {
  auto rep = run(load("period2_counterexample.json"));
  const auto& a = task(rep, "analyze")["result"];
  CHECK(a["index_condition"] == false);
  REQUIRE(a["index_sets"].size() == 2);
  CHECK(a["index_sets"][0]["diffs"] == json::array({0}));
  CHECK(a["index_sets"][1]["diffs"] == json::array({1}));
  bool saw_shift = false;
  for (const auto& r : rep.rows) {
    // the covering-set statement concerns a different set and needs no index condition
    if (r.theorem.rfind("covering-set", 0) == 0) continue;
    CHECK_FALSE(r.report.entropy_lower);
    CHECK_FALSE(r.report.dim_lower);
    saw_shift = saw_shift || r.theorem == "two-sided-shift";
  }
  CHECK(saw_shift);
}

TEST_CASE("abstract profile config") {
  auto rep = run(load("expanding_profile.json"));
  CHECK(rep.all_tasks_ok);
  const auto& r = row(rep, "expanding-map");
  CHECK(r.report.case_tag == CaseTag::Generic);
  CHECK(r.exponents.tau_upper == doctest::Approx(0.4));
  CHECK(r.exponents.tau_lower == doctest::Approx(0.2));
  CHECK(r.report.consistent());
}

TEST_CASE("two-sided shift config") {
  auto rep = run(load("full_shift_two_sided.json"));
  const auto& r = row(rep, "two-sided-shift");
  CHECK(r.report.case_tag == CaseTag::Exact);
  CHECK(*r.report.entropy_upper == doctest::Approx(0.160404).epsilon(1e-5));
  CHECK(task(rep, "witness")["status"] == "ok");
}

TEST_CASE("validation reports every problem with its path") {
  const std::string msg = validation_message(slurp("invalid.json"));
  CHECK(msg.find("colour") != std::string::npos);
  CHECK(msg.find("tasks[1]") != std::string::npos);
  CHECK(msg.find("system.matrix") != std::string::npos);
  CHECK(msg.find("rates[0].phi") != std::string::npos);
}

TEST_CASE("validation: assorted malformed configs") {
  const std::string sys = R"("system": {"type": "sft", "matrix": [[1,1],[1,0]]})";
  const std::string rate = R"("rates": [{"phi": {"kind": "exponential", "tau": 0.5}, "target": {"symbols": {"cycle": [0]}}}])";
  CHECK(validation_message("{" + sys + "," + rate + R"(, "tasks": []})").find("tasks") != std::string::npos);
  CHECK(validation_message("{" + sys + R"(, "tasks": ["exact"]})").find("rates") != std::string::npos);
  CHECK(validation_message("{" + sys + "," + rate + R"(, "tasks": ["exact", "exact"]})").find("duplicate") !=
        std::string::npos);
  CHECK(validation_message("{" + rate + R"(, "tasks": ["exact"]})").find("system") != std::string::npos);
  CHECK(validation_message(R"({"system": {"type": "sft", "matrix": [[1,1],[1,0]]}, "tasks": ["exact"],
      "rates": [{"phi": {"kind": "exponential", "tau": 0.5}, "target": {"symbols": {"cycle": [5]}}}]})")
            .find("rates[0].target") != std::string::npos);
  CHECK(validation_message(R"({"system": {"type": "matrix", "matrix": [[2,1],[1,1]]}, "tasks": ["exact"],
      "rates": [{"phi": {"kind": "exponential", "tau": 0.5}, "target": {"point": [0.5]}}]})")
            .find("rates[0].target") != std::string::npos);
  CHECK(validation_message("{" + sys + "," + rate + R"(, "tasks": ["oracle"], "oracle": {"depth": 2}})")
            .find("oracle.depth") != std::string::npos);
  CHECK(validation_message("not json").size() > 0);
  CHECK(validation_message("[1, 2]").size() > 0);
}

TEST_CASE("analyze-only configs need no rates") {
  auto cfg = parse_config_text(R"({"system": {"type": "matrix", "matrix": [[3,1],[2,1]]}, "tasks": ["analyze"]})");
  auto rep = run(cfg);
  CHECK(rep.all_tasks_ok);
  CHECK(task(rep, "analyze")["result"]["spectrum"]["is_hyperbolic"] == true);
}

TEST_CASE("unsupported system/task pairs become task errors") {
  auto cfg = parse_config_text(R"({"system": {"type": "matrix", "matrix": [[2,1],[1,1]]}, "tasks": ["exact", "oracle"],
      "rates": [{"phi": {"kind": "exponential", "tau": 0.5}, "target": {"point": [0.5, 0.5]}}]})");
  auto rep = run(cfg);
  CHECK_FALSE(rep.all_tasks_ok);
  CHECK(task(rep, "exact")["status"] == "ok");
  CHECK(task(rep, "oracle")["status"] == "error");
  CHECK(task(rep, "oracle")["error"].contains("code"));
}

TEST_CASE("hypothesis failures are unavailable rows, not aborts") {
  auto cfg = parse_config_text(R"({"system": {"type": "matrix", "matrix": [[2,1],[1,1]]}, "tasks": ["bounds"],
      "rates": [{"phi": {"kind": "exponential", "tau": 1.5}, "target": {"point": [0.5, 0.5]}}]})");
  auto rep = run(cfg);
  CHECK(rep.all_tasks_ok);
  bool any = false;
  for (const auto& r : rep.rows) {
    CHECK(r.report.consistent());
    any = any || !r.report.entropy_lower;
  }
  CHECK(any);
}

TEST_CASE("timing is opt-in") {
  auto text = slurp("cat_map.json");
  auto doc = json::parse(text);
  doc["output"] = {{"report_timing", true}};
  auto rep = run(parse_config(doc));
  CHECK(task(rep, "analyze").contains("wall_ms"));
}

TEST_CASE("reports are deterministic") {
  for (const char* name : {"cat_map.json", "golden_oracle.json", "golden_witness.json", "period2_counterexample.json"}) {
    auto cfg = load(name);
    auto a = run(cfg), b = run(cfg);
    CHECK(a.json_text() == b.json_text());
    CHECK(a.csv_text() == b.csv_text());
  }
}

TEST_CASE("csv layout") {
  auto rep = run(load("cat_map.json"));
  std::istringstream in(rep.csv_text());
  std::string line;
  std::getline(in, line);
  CHECK(line == "row,theorem,tau_lower,tau_upper,h_lower,h_upper,dim_lower,dim_upper,case_tag");
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::size_t commas = 0;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      if (c == ',' && !quoted) ++commas;
    }
    CHECK(commas == 8);
  }
  CHECK(n == rep.rows.size());
}

TEST_CASE("sweeps") {
  auto cfg = load("cat_map_sweep.json");
  REQUIRE(cfg.sweep_taus.size() == 7);
  auto rep = sweep(cfg, cfg.sweep_taus);
  CHECK(rep.all_tasks_ok);
  REQUIRE(rep.rows.size() == 7);
  for (const auto& r : rep.rows) {
    if (*r.tau > kLu) {
      CHECK(*r.report.entropy_lower == 0.0);
      CHECK(*r.report.entropy_upper == 0.0);
      CHECK(*r.report.dim_lower == 0.0);
      CHECK(*r.report.dim_upper == 0.0);
    } else {
      CHECK(r.report.case_tag == CaseTag::Exact);
    }
  }
  std::istringstream in(rep.csv_text());
  std::string header;
  std::getline(in, header);
  CHECK(header == "tau,h_lower,h_upper,dim_lower,dim_upper,case_tag");

  CHECK(sweep(cfg, {0.3}).rows.size() == 1);
  CHECK_THROWS_AS(sweep(cfg, {0.5, 0.1}), Error);
  CHECK_THROWS_AS(sweep(cfg, {}), Error);
}

TEST_CASE("sweep across the two-sided boundary changes case once") {
  auto cfg = parse_config_text(R"({"system": {"type": "profile", "lambda1": 1, "lambda2": 1, "lnL1": 1, "lnL2": 1,
      "h_top": 0.7}, "tasks": ["exact"],
      "rates": [{"phi": {"kind": "exponential", "tau": 0}, "target": {"point": [0.0]}}]})");
  auto rep = sweep(cfg, {0.6, 0.8, 1.2, 1.4});
  std::size_t changes = 0;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    changes += rep.rows[i].report.case_tag != rep.rows[i - 1].report.case_tag;
  CHECK(changes == 1);

  auto at = sweep(cfg, {0.5, 1.0});
  CHECK(at.rows[1].report.case_tag == CaseTag::BoundaryZero);
  CHECK(*at.rows[1].report.entropy_upper == 0.0);
  CHECK(*at.rows[1].report.dim_upper == doctest::Approx(0.7));
}
