#include "shrinktarget/shrinktarget.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "bounds.hpp"
#include "error.hpp"
#include "experiment.hpp"

using namespace shrinktarget;

struct st_experiment {
  ExperimentConfig cfg;
};

struct st_report {
  Report rep;
  std::string json;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

st_status fail(st_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

st_status map_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Validation: return fail(ST_ERR_VALIDATION, e.what());
    case ErrorCode::Io: return fail(ST_ERR_IO, e.what());
    case ErrorCode::InvalidArgument: return fail(ST_ERR_INVALID_ARGUMENT, e.what());
    case ErrorCode::Internal: return fail(ST_ERR_INTERNAL, e.what());
    default: return fail(ST_ERR_COMPUTATION, std::string(to_string(e.code())) + ": " + e.what());
  }
}

template <class F>
st_status guard(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const Error& e) {
    return map_error(e);
  } catch (const std::bad_alloc&) {
    return fail(ST_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ST_ERR_INTERNAL, e.what());
  }
}

st_report* wrap(Report r) {
  auto* out = new st_report{std::move(r), {}, {}};
  out->json = out->rep.json_text();
  out->csv = out->rep.csv_text();
  return out;
}

}  // namespace

extern "C" {

const char* st_version(void) { return kToolVersion; }

const char* st_last_error(void) { return g_last_error.c_str(); }

st_status st_experiment_from_json(const char* text, st_experiment** out) {
  if (!text || !out) return fail(ST_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    *out = new st_experiment{parse_config_text(text)};
    return ST_OK;
  });
}

st_status st_experiment_from_file(const char* path, st_experiment** out) {
  if (!path || !out) return fail(ST_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(ST_ERR_IO, std::string("cannot open config: ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return st_experiment_from_json(ss.str().c_str(), out);
}

void st_experiment_free(st_experiment* exp) { delete exp; }

const char* st_experiment_output_dir(const st_experiment* exp) {
  return exp ? exp->cfg.output.dir.c_str() : "";
}

int st_experiment_formats(const st_experiment* exp) {
  if (!exp) return 0;
  return (exp->cfg.output.json ? ST_FORMAT_JSON : 0) | (exp->cfg.output.csv ? ST_FORMAT_CSV : 0);
}

const double* st_experiment_sweep_taus(const st_experiment* exp, size_t* n) {
  if (n) *n = exp ? exp->cfg.sweep_taus.size() : 0;
  return exp && !exp->cfg.sweep_taus.empty() ? exp->cfg.sweep_taus.data() : nullptr;
}

st_status st_run(const st_experiment* exp, st_command cmd, st_report** out) {
  if (!exp || !out) return fail(ST_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    ExperimentConfig cfg = exp->cfg;
    static const char* names[] = {nullptr, "analyze", "bounds", "exact", "oracle", "witness"};
    if (cmd < ST_CMD_RUN || cmd > ST_CMD_WITNESS) return fail(ST_ERR_INVALID_ARGUMENT, "unknown command");
    if (cmd != ST_CMD_RUN) cfg.tasks = {names[cmd]};
    if (cfg.rates.empty() && cmd != ST_CMD_ANALYZE &&
        !(cmd == ST_CMD_RUN && cfg.tasks == std::vector<std::string>{"analyze"}))
      return fail(ST_ERR_VALIDATION, "rates: at least one rate is required for this command");
    *out = wrap(run(cfg));
    return ST_OK;
  });
}

st_status st_run_sweep(const st_experiment* exp, const double* taus, size_t n, st_report** out) {
  if (!exp || !out || (!taus && n)) return fail(ST_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    *out = wrap(sweep(exp->cfg, std::vector<double>(taus, taus + n)));
    return ST_OK;
  });
}

const char* st_report_json(const st_report* rep) { return rep ? rep->json.c_str() : ""; }
const char* st_report_csv(const st_report* rep) { return rep ? rep->csv.c_str() : ""; }
int st_report_all_tasks_ok(const st_report* rep) { return rep && rep->rep.all_tasks_ok ? 1 : 0; }
void st_report_free(st_report* rep) { delete rep; }

st_status st_sft_entropy(const int* matrix, size_t k, double* out) {
  if (!matrix || !out || k == 0) return fail(ST_ERR_INVALID_ARGUMENT, "null or empty matrix");
  return guard([&] {
    BoolMatrix m(k, std::vector<std::uint8_t>(k));
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) {
        const int v = matrix[i * k + j];
        if (v != 0 && v != 1) return fail(ST_ERR_INVALID_ARGUMENT, "entries must be 0 or 1");
        m[i][j] = static_cast<std::uint8_t>(v);
      }
    *out = sft_entropy(ShiftOfFiniteType::create(m, Sidedness::OneSided));
    return ST_OK;
  });
}

st_status st_exact_torus(const long long* matrix, size_t d, double tau_lower, double* h_out,
                         double* dim_out) {
  if (!matrix || !h_out || !dim_out || d == 0) return fail(ST_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    IntMatrix m(d, std::vector<std::int64_t>(d));
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) m[i][j] = matrix[i * d + j];
    const auto p = analyze_matrix(IntegerMatrixSystem::create(m));
    const RateExponents tau{tau_lower, tau_lower, {}};
    const BoundReport r = p.is_expanding ? exact_expanding_torus(p, tau) : exact_toral_automorphism(p, tau);
    if (r.case_tag == CaseTag::Generic)
      return fail(ST_ERR_COMPUTATION, "no exact value for this spectrum, only a sandwich");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto pinned = [nan](const std::optional<double>& lo, const std::optional<double>& hi) {
      return lo && hi && *lo == *hi ? *lo : nan;
    };
    *h_out = pinned(r.entropy_lower, r.entropy_upper);
    *dim_out = pinned(r.dim_lower, r.dim_upper);
    return ST_OK;
  });
}

}  // extern "C"
