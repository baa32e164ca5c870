#pragma once

// Batch front end: a JSON experiment config names one system, a family of
// (rate, time set, target) triples and the tasks to run. Reports are JSON
// plus CSV rows; both are byte-identical across runs of the same config.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "oracle.hpp"
#include "rates.hpp"
#include "symbolic.hpp"
#include "systems.hpp"

namespace shrinktarget {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class SystemType { Matrix, Sft, Sofic, Profile };

struct SystemConfig {
  SystemType type = SystemType::Matrix;
  IntMatrix matrix;                 // Matrix
  std::string profile_choice = "auto";  // Matrix: auto | sharp | crude
  double tol = 1e-9;
  BoolMatrix transition;            // Sft
  Sidedness sided = Sidedness::OneSided;
  std::uint32_t states = 0;         // Sofic
  std::vector<SoficEdge> edges;
  HyperbolicityProfile profile;     // Profile
  MapClass map_class;
  HyperClass hyper_class;
};

struct RateSpec {
  RateFunction phi;
  TimeSet times;
  TargetSequence target;
};

struct OracleParams {
  std::uint64_t depth = 40;
  double grid_step = 0.01;
  std::uint32_t moran_stages = 12;
  double eta = 0.05;
  std::uint32_t witness_blocks = 5;
  bool enforce_growth = false;
  std::size_t prefix_limit = 100000;
};

struct OutputSpec {
  std::string dir;
  bool json = true;
  bool csv = true;
  bool report_timing = false;
};

struct ExperimentConfig {
  std::string name;
  SystemConfig system;
  std::vector<RateSpec> rates;
  std::vector<std::string> tasks;
  double chi = 0.0;
  OracleParams oracle;
  OutputSpec output;
  std::vector<double> sweep_taus;
  nlohmann::json source;
};

// Throws Error(Validation) listing every problem as "field.path: message".
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);

struct BoundRow {
  std::string theorem;
  std::optional<double> tau;  // set in sweeps
  RateExponents exponents;
  BoundReport report;
};

struct Report {
  nlohmann::json doc;
  std::vector<BoundRow> rows;
  bool sweep = false;
  bool all_tasks_ok = true;

  std::string json_text() const;
  std::string csv_text() const;
};

// Runs the config's tasks in declaration order. Task-level failures become
// error entries; hypothesis failures become unavailable rows.
Report run(const ExperimentConfig& cfg);
// Replaces every rate by exp(-tau n), keeping time sets and targets; one
// primary row per tau. Throws Error(Validation) for an unsorted or empty grid.
Report sweep(const ExperimentConfig& cfg, const std::vector<double>& taus);

// 12 significant digits, "NA" for unknown, "inf" for infinities.
std::string format_number(std::optional<double> v);

}  // namespace shrinktarget
