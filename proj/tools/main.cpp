// shrinktarget command line front end. Talks to the library only through the
// C interface.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "shrinktarget/shrinktarget.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kValidation = 2, kIo = 3, kTaskFailed = 4 };

int exit_for(st_status s) {
  switch (s) {
    case ST_OK: return kOk;
    case ST_ERR_VALIDATION:
    case ST_ERR_INVALID_ARGUMENT: return kValidation;
    case ST_ERR_IO: return kIo;
    default: return kFailure;
  }
}

// "0,0.2,0.4" or "start:stop:step" (inclusive of stop up to rounding).
bool parse_taus(const std::string& text, std::vector<double>& out, std::string& err) {
  out.clear();
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
      if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
        err = "range must be start:stop:step with step > 0 and stop >= start";
        return false;
      }
      const auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
      for (long i = 0; i <= n; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
      return true;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  } catch (const std::exception&) {
    err = "cannot parse tau list '" + text + "'";
    return false;
  }
  if (out.empty()) err = "empty tau list";
  return !out.empty();
}

bool write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f << text;
  return static_cast<bool>(f);
}

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::string taus;
  bool seedless = false;
};

int execute(const std::string& command, const Options& o) {
  st_experiment* exp = nullptr;
  st_status s = st_experiment_from_file(o.config.c_str(), &exp);
  if (s != ST_OK) {
    std::cerr << "error: " << st_last_error() << "\n";
    return exit_for(s);
  }

  int formats = st_experiment_formats(exp);
  if (o.format == "json") formats = ST_FORMAT_JSON;
  else if (o.format == "csv") formats = ST_FORMAT_CSV;
  else if (o.format == "both") formats = ST_FORMAT_JSON | ST_FORMAT_CSV;

  std::string dir = st_experiment_output_dir(exp);
  if (const char* env = std::getenv("SHRINKTARGET_OUT"); env && *env) dir = env;
  if (!o.out.empty()) dir = o.out;

  st_report* rep = nullptr;
  std::string stem = "report";
  if (command == "sweep") {
    stem = "sweep";
    std::vector<double> taus;
    if (!o.taus.empty()) {
      std::string err;
      if (!parse_taus(o.taus, taus, err)) {
        std::cerr << "error: --taus: " << err << "\n";
        st_experiment_free(exp);
        return kValidation;
      }
    } else {
      size_t n = 0;
      const double* t = st_experiment_sweep_taus(exp, &n);
      taus.assign(t, t + n);
    }
    if (taus.empty()) {
      std::cerr << "error: sweep needs --taus or sweep.taus in the config\n";
      st_experiment_free(exp);
      return kValidation;
    }
    s = st_run_sweep(exp, taus.data(), taus.size(), &rep);
  } else {
    st_command cmd = ST_CMD_RUN;
    if (command == "analyze") cmd = ST_CMD_ANALYZE;
    else if (command == "bounds") cmd = ST_CMD_BOUNDS;
    else if (command == "exact") cmd = ST_CMD_EXACT;
    else if (command == "oracle") cmd = ST_CMD_ORACLE;
    else if (command == "witness") cmd = ST_CMD_WITNESS;
    s = st_run(exp, cmd, &rep);
  }
  st_experiment_free(exp);
  if (s != ST_OK) {
    std::cerr << "error: " << st_last_error() << "\n";
    return exit_for(s);
  }

  int code = st_report_all_tasks_ok(rep) ? kOk : kTaskFailed;
  if (dir.empty()) {
    if (formats & ST_FORMAT_JSON) std::cout << st_report_json(rep);
    if (formats & ST_FORMAT_CSV) std::cout << st_report_csv(rep);
  } else {
    std::error_code ec;
    fs::create_directories(dir, ec);
    bool ok = !ec;
    if (ok && (formats & ST_FORMAT_JSON)) ok = write_file(fs::path(dir) / (stem + ".json"), st_report_json(rep));
    if (ok && (formats & ST_FORMAT_CSV)) ok = write_file(fs::path(dir) / (stem + ".csv"), st_report_csv(rep));
    if (!ok) {
      std::cerr << "error: cannot write reports to " << dir << "\n";
      code = kIo;
    } else {
      std::cerr << "wrote " << stem << " to " << dir << "\n";
    }
  }
  if (code == kTaskFailed) std::cerr << "some tasks failed; see the report\n";
  st_report_free(rep);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy and dimension of shrinking target sets"};
  app.set_version_flag("--version", std::string(st_version()));
  app.require_subcommand(1);

  Options o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"run", "Run the tasks listed in the config"},
      {"analyze", "Spectral / shift analysis only"},
      {"bounds", "All applicable bounds"},
      {"exact", "Exact-value formulas"},
      {"oracle", "Covering-sum bracket and Moran estimate"},
      {"witness", "Construct and verify witness points"},
      {"sweep", "One primary bound row per tau"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "Experiment config (JSON)")->required();
    sub->add_option("--out", o.out, "Output directory (overrides SHRINKTARGET_OUT and the config)");
    sub->add_option("--format", o.format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    sub->add_flag("--seedless", o.seedless, "Assert that no randomness is used");
    if (name == "sweep") sub->add_option("--taus", o.taus, "Comma list or start:stop:step");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidation;
  }
  // Every computation in the library is deterministic, so --seedless holds
  // unconditionally.
  for (const auto* sub : app.get_subcommands()) return execute(sub->get_name(), o);
  return kFailure;
}
