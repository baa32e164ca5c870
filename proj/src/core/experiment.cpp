#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "error.hpp"

namespace shrinktarget {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Number formatting

std::string format_number(std::optional<double> v) {
  if (!v) return "NA";
  if (std::isnan(*v)) return "nan";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", *v == 0.0 ? 0.0 : *v);
  return buf;
}

namespace {

json jnum(std::optional<double> v) {
  if (!v) return nullptr;
  if (!std::isfinite(*v)) return format_number(v);
  return std::stod(format_number(v));
}

// ---------------------------------------------------------------------------
// Config parsing. Problems are collected with their field paths and reported
// together.

class Issues {
 public:
  void add(const std::string& path, const std::string& msg) { list_.push_back(path + ": " + msg); }
  bool empty() const { return list_.empty(); }
  std::size_t size() const { return list_.size(); }
  [[noreturn]] void raise() const {
    std::string msg = "invalid config";
    for (const auto& s : list_) msg += "\n  " + s;
    throw Error(ErrorCode::Validation, msg);
  }

 private:
  std::vector<std::string> list_;
};

std::string at(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::optional<double> get_real(const json& j, const std::string& path, Issues& is) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInfinity;
  }
  is.add(path, "expected a number");
  return std::nullopt;
}

std::optional<std::int64_t> get_int(const json& j, const std::string& path, Issues& is) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  is.add(path, "expected an integer");
  return std::nullopt;
}

std::optional<std::uint64_t> get_nat(const json& j, const std::string& path, Issues& is) {
  const auto v = get_int(j, path, is);
  if (!v) return std::nullopt;
  if (*v < 0) {
    is.add(path, "expected a nonnegative integer");
    return std::nullopt;
  }
  return static_cast<std::uint64_t>(*v);
}

std::optional<bool> get_bool(const json& j, const std::string& path, Issues& is) {
  if (j.is_boolean()) return j.get<bool>();
  is.add(path, "expected true or false");
  return std::nullopt;
}

std::optional<std::string> get_string(const json& j, const std::string& path, Issues& is) {
  if (j.is_string()) return j.get<std::string>();
  is.add(path, "expected a string");
  return std::nullopt;
}

const json* member(const json& obj, const char* key, const std::string& path, Issues& is,
                   bool required) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) is.add(at(path, key), "missing");
    return nullptr;
  }
  return &*it;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& path, Issues& is) {
  if (!obj.is_object()) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* k) { return it.key() == k; });
    if (!ok) is.add(at(path, it.key()), "unknown field");
  }
}

std::optional<std::vector<std::vector<std::int64_t>>> get_matrix(const json& j,
                                                                 const std::string& path,
                                                                 Issues& is) {
  if (!j.is_array() || j.empty()) {
    is.add(path, "expected a nonempty array of rows");
    return std::nullopt;
  }
  const std::size_t before = is.size();
  std::vector<std::vector<std::int64_t>> m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    if (!row.is_array()) {
      is.add(at(path, i), "expected an array");
      continue;
    }
    if (row.size() != j.size()) is.add(at(path, i), "matrix must be square");
    std::vector<std::int64_t> r;
    for (std::size_t c = 0; c < row.size(); ++c)
      if (auto v = get_int(row[c], at(at(path, i), c), is)) r.push_back(*v);
    m.push_back(std::move(r));
  }
  if (is.size() != before) return std::nullopt;
  return m;
}

std::optional<std::vector<Symbol>> get_symbols(const json& j, const std::string& path,
                                               Issues& is) {
  if (!j.is_array()) {
    is.add(path, "expected an array of symbols");
    return std::nullopt;
  }
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto v = get_int(j[i], at(path, i), is);
    if (!v) return std::nullopt;
    if (*v < 0 || *v > 1'000'000) {
      is.add(at(path, i), "symbol out of range");
      return std::nullopt;
    }
    out.push_back(static_cast<Symbol>(*v));
  }
  return out;
}

std::optional<SymbolSequence> get_sequence(const json& j, const std::string& path, Issues& is) {
  if (!j.is_object()) {
    is.add(path, "expected {\"prefix\": [...], \"cycle\": [...]}");
    return std::nullopt;
  }
  reject_unknown(j, {"prefix", "cycle"}, path, is);
  SymbolSequence s;
  if (auto* p = member(j, "prefix", path, is, false)) {
    auto v = get_symbols(*p, at(path, "prefix"), is);
    if (!v) return std::nullopt;
    s.prefix = *v;
  }
  if (auto* c = member(j, "cycle", path, is, false)) {
    auto v = get_symbols(*c, at(path, "cycle"), is);
    if (!v) return std::nullopt;
    s.cycle = *v;
  }
  if (s.prefix.empty() && s.cycle.empty()) {
    is.add(path, "empty symbol sequence");
    return std::nullopt;
  }
  return s;
}

template <class T, class F>
std::optional<EventuallyPeriodic<T>> get_eventually_periodic(const json& j, const std::string& path,
                                                             Issues& is, F item) {
  if (!j.is_object()) {
    is.add(path, "expected {\"pre\": [...], \"period\": [...]}");
    return std::nullopt;
  }
  reject_unknown(j, {"pre", "period"}, path, is);
  EventuallyPeriodic<T> out;
  const std::size_t before = is.size();
  for (const char* key : {"pre", "period"}) {
    const json* arr = member(j, key, path, is, std::string(key) == "period");
    if (!arr) continue;
    if (!arr->is_array()) {
      is.add(at(path, key), "expected an array");
      continue;
    }
    for (std::size_t i = 0; i < arr->size(); ++i)
      if (auto v = item((*arr)[i], at(at(path, key), i)))
        (std::string(key) == "pre" ? out.pre : out.period).push_back(*v);
  }
  if (is.size() != before) return std::nullopt;
  if (out.period.empty()) {
    is.add(at(path, "period"), "must be nonempty");
    return std::nullopt;
  }
  return out;
}

std::optional<Point> get_point(const json& j, const std::string& path, Issues& is) {
  if (!j.is_array() || j.empty()) {
    is.add(path, "expected a nonempty array of coordinates");
    return std::nullopt;
  }
  Point p;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto v = get_real(j[i], at(path, i), is);
    if (!v) return std::nullopt;
    p.push_back(*v);
  }
  return p;
}

std::optional<RateFunction> get_rate(const json& j, const std::string& path, Issues& is) {
  if (!j.is_object()) {
    is.add(path, "expected a rate object");
    return std::nullopt;
  }
  const json* kind = member(j, "kind", path, is, true);
  if (!kind) return std::nullopt;
  auto k = get_string(*kind, at(path, "kind"), is);
  if (!k) return std::nullopt;
  const std::size_t before = is.size();
  try {
    if (*k == "exponential") {
      reject_unknown(j, {"kind", "tau"}, path, is);
      const json* t = member(j, "tau", path, is, true);
      auto tau = t ? get_real(*t, at(path, "tau"), is) : std::nullopt;
      if (tau) return RateFunction::exponential(*tau);
    } else if (*k == "power_law") {
      reject_unknown(j, {"kind", "a"}, path, is);
      const json* a = member(j, "a", path, is, true);
      auto v = a ? get_real(*a, at(path, "a"), is) : std::nullopt;
      if (v) return RateFunction::power_law(*v);
    } else if (*k == "piecewise") {
      reject_unknown(j, {"kind", "taus"}, path, is);
      const json* t = member(j, "taus", path, is, true);
      if (t && t->is_array() && !t->empty()) {
        std::vector<double> taus;
        for (std::size_t i = 0; i < t->size(); ++i)
          if (auto v = get_real((*t)[i], at(at(path, "taus"), i), is)) taus.push_back(*v);
        if (is.size() == before)
          return RateFunction::piecewise_exponential(static_cast<std::uint32_t>(taus.size()), taus);
      } else if (t) {
        is.add(at(path, "taus"), "expected a nonempty array");
      }
    } else if (*k == "tabulated") {
      reject_unknown(j, {"kind", "values", "tail_tau"}, path, is);
      const json* v = member(j, "values", path, is, true);
      const json* t = member(j, "tail_tau", path, is, true);
      std::vector<double> values;
      if (v && v->is_array()) {
        for (std::size_t i = 0; i < v->size(); ++i)
          if (auto x = get_real((*v)[i], at(at(path, "values"), i), is)) values.push_back(*x);
      } else if (v) {
        is.add(at(path, "values"), "expected an array");
      }
      auto tail = t ? get_real(*t, at(path, "tail_tau"), is) : std::nullopt;
      if (tail && is.size() == before) return RateFunction::tabulated(values, *tail);
    } else if (*k == "super_exponential") {
      reject_unknown(j, {"kind", "c"}, path, is);
      double c = 1.0;
      if (const json* cj = member(j, "c", path, is, false)) {
        auto v = get_real(*cj, at(path, "c"), is);
        if (!v) return std::nullopt;
        c = *v;
      }
      return RateFunction::super_exponential(c);
    } else {
      is.add(at(path, "kind"),
             "unknown rate kind '" + *k +
                 "' (exponential, power_law, piecewise, tabulated, super_exponential)");
    }
  } catch (const Error& e) {
    is.add(path, e.what());
  }
  return std::nullopt;
}

std::optional<Arithmetic> get_progression(const json& j, const std::string& path, Issues& is) {
  if (!j.is_object()) {
    is.add(path, "expected {\"offset\": n, \"step\": n}");
    return std::nullopt;
  }
  reject_unknown(j, {"offset", "step"}, path, is);
  Arithmetic a;
  if (const json* o = member(j, "offset", path, is, false)) {
    auto v = get_nat(*o, at(path, "offset"), is);
    if (!v) return std::nullopt;
    a.offset = *v;
  }
  if (const json* s = member(j, "step", path, is, true)) {
    auto v = get_nat(*s, at(path, "step"), is);
    if (!v) return std::nullopt;
    a.step = *v;
  } else {
    return std::nullopt;
  }
  return a;
}

std::optional<TimeSet> get_times(const json& j, const std::string& path, Issues& is) {
  try {
    if (j.is_string()) {
      if (j.get<std::string>() == "all") return TimeSet::all();
      is.add(path, "expected \"all\", a progression or an explicit list");
      return std::nullopt;
    }
    if (!j.is_object()) {
      is.add(path, "expected \"all\", a progression or an explicit list");
      return std::nullopt;
    }
    if (j.contains("times")) {
      reject_unknown(j, {"times", "tail"}, path, is);
      const json& t = j["times"];
      if (!t.is_array()) {
        is.add(at(path, "times"), "expected an array");
        return std::nullopt;
      }
      std::vector<std::uint64_t> times;
      for (std::size_t i = 0; i < t.size(); ++i) {
        auto v = get_nat(t[i], at(at(path, "times"), i), is);
        if (!v) return std::nullopt;
        times.push_back(*v);
      }
      std::optional<Arithmetic> tail;
      if (const json* tj = member(j, "tail", path, is, false)) {
        tail = get_progression(*tj, at(path, "tail"), is);
        if (!tail) return std::nullopt;
      }
      return TimeSet::explicit_times(times, tail);
    }
    auto a = get_progression(j, path, is);
    if (!a) return std::nullopt;
    return TimeSet::arithmetic(a->offset, a->step);
  } catch (const Error& e) {
    is.add(path, e.what());
  }
  return std::nullopt;
}

std::optional<TargetSequence> get_target(const json& j, const std::string& path, Issues& is) {
  if (!j.is_object() || j.size() != 1) {
    is.add(path, "expected exactly one of point, points, symbols, sequences");
    return std::nullopt;
  }
  const std::string key = j.begin().key();
  const json& v = j.begin().value();
  const std::string p = at(path, key);
  if (key == "point") {
    auto pt = get_point(v, p, is);
    if (pt) return TargetSequence::constant_point(*pt);
  } else if (key == "points") {
    auto seq = get_eventually_periodic<Point>(
        v, p, is, [&](const json& x, const std::string& q) { return get_point(x, q, is); });
    if (seq) return TargetSequence::point_sequence(*seq);
  } else if (key == "symbols") {
    auto s = get_sequence(v, p, is);
    if (s) return TargetSequence::constant_shift(*s);
  } else if (key == "sequences") {
    auto seq = get_eventually_periodic<SymbolSequence>(
        v, p, is, [&](const json& x, const std::string& q) { return get_sequence(x, q, is); });
    if (seq) return TargetSequence::shift(*seq);
  } else {
    is.add(p, "unknown target kind (point, points, symbols, sequences)");
  }
  return std::nullopt;
}

Sidedness get_sided(const json& obj, const std::string& path, Issues& is) {
  const json* s = member(obj, "sided", path, is, false);
  if (!s) return Sidedness::OneSided;
  auto v = get_string(*s, at(path, "sided"), is);
  if (v && *v == "one") return Sidedness::OneSided;
  if (v && *v == "two") return Sidedness::TwoSided;
  if (v) is.add(at(path, "sided"), "expected \"one\" or \"two\"");
  return Sidedness::OneSided;
}

void parse_system(const json& j, const std::string& path, SystemConfig& sys, Issues& is) {
  if (!j.is_object()) {
    is.add(path, "expected an object");
    return;
  }
  const json* t = member(j, "type", path, is, true);
  if (!t) return;
  auto type = get_string(*t, at(path, "type"), is);
  if (!type) return;
  try {
    if (*type == "matrix") {
      sys.type = SystemType::Matrix;
      reject_unknown(j, {"type", "matrix", "profile", "tol"}, path, is);
      if (const json* m = member(j, "matrix", path, is, true))
        if (auto mat = get_matrix(*m, at(path, "matrix"), is)) {
          sys.matrix = *mat;
          try {
            IntegerMatrixSystem::create(sys.matrix);
          } catch (const Error& e) {
            is.add(at(path, "matrix"), e.what());
          }
        }
      if (const json* p = member(j, "profile", path, is, false)) {
        auto v = get_string(*p, at(path, "profile"), is);
        if (v && (*v == "auto" || *v == "sharp" || *v == "crude")) sys.profile_choice = *v;
        else if (v) is.add(at(path, "profile"), "expected auto, sharp or crude");
      }
      if (const json* tl = member(j, "tol", path, is, false)) {
        auto v = get_real(*tl, at(path, "tol"), is);
        if (v && *v > 0.0) sys.tol = *v;
        else if (v) is.add(at(path, "tol"), "must be positive");
      }
    } else if (*type == "sft") {
      sys.type = SystemType::Sft;
      reject_unknown(j, {"type", "matrix", "sided"}, path, is);
      sys.sided = get_sided(j, path, is);
      if (const json* m = member(j, "matrix", path, is, true))
        if (auto mat = get_matrix(*m, at(path, "matrix"), is)) {
          BoolMatrix b;
          for (const auto& row : *mat) {
            std::vector<std::uint8_t> r;
            for (auto v : row) {
              if (v != 0 && v != 1) {
                is.add(at(path, "matrix"), "entries must be 0 or 1");
                return;
              }
              r.push_back(static_cast<std::uint8_t>(v));
            }
            b.push_back(std::move(r));
          }
          try {
            ShiftOfFiniteType::create(b, sys.sided);
            sys.transition = std::move(b);
          } catch (const Error& e) {
            is.add(at(path, "matrix"), e.what());
          }
        }
    } else if (*type == "sofic") {
      sys.type = SystemType::Sofic;
      reject_unknown(j, {"type", "states", "edges", "sided"}, path, is);
      sys.sided = get_sided(j, path, is);
      const json* st = member(j, "states", path, is, true);
      const json* ed = member(j, "edges", path, is, true);
      auto n = st ? get_nat(*st, at(path, "states"), is) : std::nullopt;
      if (ed && !ed->is_array()) is.add(at(path, "edges"), "expected an array of [from, to, label]");
      if (n && ed && ed->is_array()) {
        sys.states = static_cast<std::uint32_t>(*n);
        const std::size_t before = is.size();
        for (std::size_t i = 0; i < ed->size(); ++i) {
          const json& e = (*ed)[i];
          const std::string ep = at(at(path, "edges"), i);
          if (!e.is_array() || e.size() != 3) {
            is.add(ep, "expected [from, to, label]");
            continue;
          }
          auto f = get_nat(e[0], at(ep, 0), is);
          auto to = get_nat(e[1], at(ep, 1), is);
          auto l = get_nat(e[2], at(ep, 2), is);
          if (f && to && l)
            sys.edges.push_back({static_cast<std::uint32_t>(*f), static_cast<std::uint32_t>(*to),
                                 static_cast<Symbol>(*l)});
        }
        if (is.size() == before) {
          try {
            SoficPresentation::create(sys.states, sys.edges, sys.sided);
          } catch (const Error& e) {
            is.add(at(path, "edges"), e.what());
          }
        }
      }
    } else if (*type == "profile") {
      sys.type = SystemType::Profile;
      reject_unknown(j,
                     {"type", "lambda1", "lambda2", "lnL1", "lnL2", "h_top", "map_class",
                      "hyper_class"},
                     path, is);
      auto& pr = sys.profile;
      pr.origin = "config";
      auto req = [&](const char* key, double& out, bool allow_inf) {
        if (const json* v = member(j, key, path, is, true)) {
          auto x = get_real(*v, at(path, key), is);
          if (!x) return;
          if (!(*x > 0.0) || (!allow_inf && std::isinf(*x)))
            is.add(at(path, key), allow_inf ? "must be positive" : "must be positive and finite");
          out = *x;
        }
      };
      req("lambda1", pr.lambda1, true);
      req("lambda2", pr.lambda2, false);
      req("lnL2", pr.lnL2, false);
      if (const json* v = member(j, "lnL1", path, is, false)) {
        auto x = get_real(*v, at(path, "lnL1"), is);
        if (x && *x > 0.0 && std::isfinite(*x)) pr.lnL1 = *x;
        else if (x) is.add(at(path, "lnL1"), "must be positive and finite");
      }
      if (const json* v = member(j, "h_top", path, is, true)) {
        auto x = get_real(*v, at(path, "h_top"), is);
        if (x && *x >= 0.0 && std::isfinite(*x)) pr.h_top = *x;
        else if (x) is.add(at(path, "h_top"), "must be finite and nonnegative");
      }
      std::string mc = pr.lnL1 ? "bilipschitz" : "lipschitz";
      if (const json* v = member(j, "map_class", path, is, false))
        if (auto s = get_string(*v, at(path, "map_class"), is)) mc = *s;
      if (mc == "lipschitz") {
        sys.map_class = Lipschitz{pr.lnL2};
      } else if (mc == "bilipschitz") {
        if (!pr.lnL1) is.add(at(path, "map_class"), "bilipschitz needs lnL1");
        else sys.map_class = BiLipschitz{*pr.lnL1, pr.lnL2};
      } else {
        is.add(at(path, "map_class"), "expected lipschitz or bilipschitz");
      }
      std::string hc = std::isinf(pr.lambda1) ? "lambda" : "pair";
      if (const json* v = member(j, "hyper_class", path, is, false))
        if (auto s = get_string(*v, at(path, "hyper_class"), is)) hc = *s;
      if (hc == "none") sys.hyper_class = NotHyperbolic{};
      else if (hc == "lambda") sys.hyper_class = LambdaHyperbolic{pr.lambda2};
      else if (hc == "pair") sys.hyper_class = LambdaPairHyperbolic{pr.lambda1, pr.lambda2};
      else is.add(at(path, "hyper_class"), "expected none, lambda or pair");
    } else {
      is.add(at(path, "type"), "unknown system type '" + *type + "' (matrix, sft, sofic, profile)");
    }
  } catch (const Error& e) {
    is.add(path, e.what());
  }
}

const std::vector<std::string> kTasks = {"analyze", "bounds", "exact", "oracle", "witness"};

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  Issues is;
  ExperimentConfig cfg;
  cfg.source = doc;
  if (!doc.is_object()) {
    is.add("$", "config must be a JSON object");
    is.raise();
  }
  reject_unknown(doc, {"name", "system", "rates", "tasks", "chi", "oracle", "output", "sweep"}, "",
                 is);
  if (const json* n = member(doc, "name", "", is, false))
    if (auto s = get_string(*n, "name", is)) cfg.name = *s;

  if (const json* s = member(doc, "system", "", is, true)) parse_system(*s, "system", cfg.system, is);

  if (const json* t = member(doc, "tasks", "", is, true)) {
    if (!t->is_array() || t->empty()) {
      is.add("tasks", "expected a nonempty array of task names");
    } else {
      for (std::size_t i = 0; i < t->size(); ++i) {
        auto name = get_string((*t)[i], at("tasks", i), is);
        if (!name) continue;
        if (std::find(kTasks.begin(), kTasks.end(), *name) == kTasks.end())
          is.add(at("tasks", i), "unknown task '" + *name + "' (analyze, bounds, exact, oracle, witness)");
        else if (std::find(cfg.tasks.begin(), cfg.tasks.end(), *name) != cfg.tasks.end())
          is.add(at("tasks", i), "duplicate task '" + *name + "'");
        else
          cfg.tasks.push_back(*name);
      }
    }
  }

  if (const json* r = member(doc, "rates", "", is, false)) {
    if (!r->is_array()) {
      is.add("rates", "expected an array");
    } else {
      for (std::size_t i = 0; i < r->size(); ++i) {
        const json& e = (*r)[i];
        const std::string p = at("rates", i);
        if (!e.is_object()) {
          is.add(p, "expected an object with phi, times, target");
          continue;
        }
        reject_unknown(e, {"phi", "times", "target"}, p, is);
        std::optional<RateFunction> phi;
        std::optional<TimeSet> times = TimeSet::all();
        std::optional<TargetSequence> target;
        if (const json* f = member(e, "phi", p, is, true)) phi = get_rate(*f, at(p, "phi"), is);
        if (const json* t = member(e, "times", p, is, false)) times = get_times(*t, at(p, "times"), is);
        if (const json* z = member(e, "target", p, is, true)) target = get_target(*z, at(p, "target"), is);
        if (phi && times && target) cfg.rates.push_back({*phi, *times, *target});
      }
    }
  }
  const bool only_analyze = cfg.tasks.size() == 1 && cfg.tasks[0] == "analyze";
  if (cfg.rates.empty() && !only_analyze && is.empty())
    is.add("rates", "at least one rate is required for bounds, exact, oracle and witness tasks");

  // Targets must live in the system's phase space.
  if (is.empty()) {
    for (std::size_t i = 0; i < cfg.rates.size(); ++i) {
      const auto& z = cfg.rates[i].target;
      const std::string p = at(at("rates", i), "target");
      try {
        if (cfg.system.type == SystemType::Matrix) {
          z.check_torus(cfg.system.matrix.size());
        } else if (cfg.system.type == SystemType::Sft || cfg.system.type == SystemType::Sofic) {
          if (!z.is_symbolic()) {
            is.add(p, "shift systems need a symbolic target");
            continue;
          }
          Symbol alphabet = 0;
          if (cfg.system.type == SystemType::Sft) {
            alphabet = static_cast<Symbol>(cfg.system.transition.size());
          } else {
            for (const auto& e : cfg.system.edges) alphabet = std::max(alphabet, e.label + 1);
          }
          for (std::uint64_t n = 0; n < z.preperiod() + z.period(); ++n) {
            const auto& s = z.symbols_at(n);
            auto bad = [&](const std::vector<Symbol>& v) {
              return std::any_of(v.begin(), v.end(), [&](Symbol c) { return c >= alphabet; });
            };
            if (bad(s.prefix) || bad(s.cycle)) {
              is.add(p, "symbol outside the alphabet");
              break;
            }
          }
        }
      } catch (const Error& e) {
        is.add(p, e.what());
      }
    }
  }

  if (const json* c = member(doc, "chi", "", is, false)) {
    auto v = get_real(*c, "chi", is);
    if (v && *v >= 0.0 && std::isfinite(*v)) cfg.chi = *v;
    else if (v) is.add("chi", "must be finite and nonnegative");
  }

  if (const json* o = member(doc, "oracle", "", is, false)) {
    reject_unknown(*o,
                   {"depth", "grid_step", "K", "eta", "witness_blocks", "enforce_growth",
                    "prefix_limit"},
                   "oracle", is);
    auto& op = cfg.oracle;
    if (const json* v = member(*o, "depth", "oracle", is, false))
      if (auto x = get_nat(*v, "oracle.depth", is)) {
        if (*x < 4 || *x > 5000) is.add("oracle.depth", "must lie in [4, 5000]");
        op.depth = *x;
      }
    if (const json* v = member(*o, "grid_step", "oracle", is, false))
      if (auto x = get_real(*v, "oracle.grid_step", is)) {
        if (!(*x > 0.0) || std::isinf(*x)) is.add("oracle.grid_step", "must be positive");
        op.grid_step = *x;
      }
    if (const json* v = member(*o, "K", "oracle", is, false))
      if (auto x = get_nat(*v, "oracle.K", is)) {
        if (*x < 1 || *x > 13) is.add("oracle.K", "must lie in [1, 13]");
        op.moran_stages = static_cast<std::uint32_t>(*x);
      }
    if (const json* v = member(*o, "eta", "oracle", is, false))
      if (auto x = get_real(*v, "oracle.eta", is)) {
        if (!(*x > 0.0 && *x < 1.0)) is.add("oracle.eta", "must lie in (0, 1)");
        op.eta = *x;
      }
    if (const json* v = member(*o, "witness_blocks", "oracle", is, false))
      if (auto x = get_nat(*v, "oracle.witness_blocks", is)) {
        if (*x > 64) is.add("oracle.witness_blocks", "at most 64");
        op.witness_blocks = static_cast<std::uint32_t>(*x);
      }
    if (const json* v = member(*o, "enforce_growth", "oracle", is, false))
      if (auto x = get_bool(*v, "oracle.enforce_growth", is)) op.enforce_growth = *x;
    if (const json* v = member(*o, "prefix_limit", "oracle", is, false))
      if (auto x = get_nat(*v, "oracle.prefix_limit", is)) op.prefix_limit = *x;
  }

  if (const json* o = member(doc, "output", "", is, false)) {
    reject_unknown(*o, {"dir", "formats", "report_timing"}, "output", is);
    if (const json* v = member(*o, "dir", "output", is, false))
      if (auto s = get_string(*v, "output.dir", is)) cfg.output.dir = *s;
    if (const json* v = member(*o, "formats", "output", is, false)) {
      if (!v->is_array() || v->empty()) {
        is.add("output.formats", "expected a nonempty array");
      } else {
        cfg.output.json = cfg.output.csv = false;
        for (std::size_t i = 0; i < v->size(); ++i) {
          auto s = get_string((*v)[i], at("output.formats", i), is);
          if (s && *s == "json") cfg.output.json = true;
          else if (s && *s == "csv") cfg.output.csv = true;
          else if (s) is.add(at("output.formats", i), "expected json or csv");
        }
      }
    }
    if (const json* v = member(*o, "report_timing", "output", is, false))
      if (auto b = get_bool(*v, "output.report_timing", is)) cfg.output.report_timing = *b;
  }

  if (const json* s = member(doc, "sweep", "", is, false)) {
    reject_unknown(*s, {"taus"}, "sweep", is);
    if (const json* t = member(*s, "taus", "sweep", is, true)) {
      if (!t->is_array()) {
        is.add("sweep.taus", "expected an array");
      } else {
        for (std::size_t i = 0; i < t->size(); ++i)
          if (auto v = get_real((*t)[i], at("sweep.taus", i), is)) cfg.sweep_taus.push_back(*v);
      }
    }
  }

  if (!is.empty()) is.raise();
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Validation, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

// ---------------------------------------------------------------------------
// Running

namespace {

json exponents_json(const RateExponents& t) {
  json j = {{"tau_upper", jnum(t.tau_upper)}, {"tau_lower", jnum(t.tau_lower)}};
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

json report_json(const BoundReport& r) {
  json a = json::array();
  for (const auto& x : r.assumptions) a.push_back({{"name", x.name}, {"holds", x.holds}});
  return {{"theorem", r.theorem},
          {"case_tag", to_string(r.case_tag)},
          {"entropy_lower", jnum(r.entropy_lower)},
          {"entropy_upper", jnum(r.entropy_upper)},
          {"dim_lower", jnum(r.dim_lower)},
          {"dim_upper", jnum(r.dim_upper)},
          {"assumptions", a},
          {"notes", r.notes},
          {"consistent", r.consistent()}};
}

json profile_json(const HyperbolicityProfile& p) {
  return {{"origin", p.origin},
          {"lambda1", jnum(p.lambda1)},
          {"lambda2", jnum(p.lambda2)},
          {"lnL1", jnum(p.lnL1)},
          {"lnL2", jnum(p.lnL2)},
          {"h_top", jnum(p.h_top)},
          {"usable", p.usable},
          {"notes", p.notes}};
}

json spectral_json(const SpectralProfile& p) {
  json moduli = json::array();
  for (const auto& c : p.eigen_moduli)
    moduli.push_back({{"modulus", jnum(c.modulus)}, {"multiplicity", c.multiplicity}, {"shared", c.shared}});
  json ev = json::array();
  for (const auto& e : p.eigenvalues) ev.push_back({jnum(e.real()), jnum(e.imag())});
  return {{"dim", p.dim},
          {"eigen_moduli", moduli},
          {"eigenvalues", ev},
          {"d_s", p.d_s},
          {"d_u", p.d_u},
          {"is_hyperbolic", p.is_hyperbolic},
          {"is_expanding", p.is_expanding},
          {"lambda_s_mod", jnum(p.lambda_s_mod)},
          {"lambda_u_mod", jnum(p.lambda_u_mod)},
          {"notes", p.notes}};
}

json error_json(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e))
    return {{"code", to_string(err->code())}, {"message", err->what()}};
  return {{"code", "Internal"}, {"message", e.what()}};
}

// Everything derived from the system once per run.
struct SystemView {
  const SystemConfig* cfg = nullptr;
  std::optional<IntegerMatrixSystem> matrix;
  std::optional<SpectralProfile> spectrum;
  std::optional<HyperbolicityProfile> sharp;
  std::optional<HyperbolicityProfile> crude;
  std::string sharp_error;
  std::optional<ShiftOfFiniteType> sft;
  std::optional<SoficPresentation> sofic;
  double h_top = 0.0;
  bool mixing = false;
  std::optional<PeriodDecomposition> decomposition;
  std::string decomposition_error;

  // The profile the generic formulas consume.
  HyperbolicityProfile profile;
  MapClass map_class;
  HyperClass hyper_class;
};

SystemView make_view(const SystemConfig& s) {
  SystemView v;
  v.cfg = &s;
  switch (s.type) {
    case SystemType::Matrix: {
      v.matrix = IntegerMatrixSystem::create(s.matrix);
      v.spectrum = analyze_matrix(*v.matrix, s.tol);
      v.crude = crude_profile_from_matrix(*v.matrix, s.tol);
      try {
        v.sharp = sharp_profile_from_matrix(*v.matrix, *v.spectrum);
      } catch (const Error& e) {
        v.sharp_error = e.what();
      }
      const bool use_sharp = s.profile_choice == "sharp" || (s.profile_choice == "auto" && v.sharp);
      if (s.profile_choice == "sharp" && !v.sharp) throw Error(ErrorCode::UnsupportedSpectrum, v.sharp_error);
      v.profile = use_sharp ? *v.sharp : *v.crude;
      v.h_top = v.profile.h_top;
      v.mixing = v.spectrum->is_hyperbolic || v.spectrum->is_expanding;
      if (v.profile.lnL1) {
        v.map_class = BiLipschitz{*v.profile.lnL1, v.profile.lnL2};
        v.hyper_class = LambdaPairHyperbolic{v.profile.lambda1, v.profile.lambda2};
      } else {
        v.map_class = Lipschitz{v.profile.lnL2};
        if (v.spectrum->is_expanding) v.hyper_class = LambdaHyperbolic{v.profile.lambda2};
        else v.hyper_class = NotHyperbolic{};
      }
      break;
    }
    case SystemType::Sft:
    case SystemType::Sofic: {
      BoolMatrix support;
      if (s.type == SystemType::Sft) {
        v.sft = ShiftOfFiniteType::create(s.transition, s.sided);
        v.h_top = sft_entropy(*v.sft);
        support = s.transition;
      } else {
        v.sofic = SoficPresentation::create(s.states, s.edges, s.sided);
        v.h_top = sofic_entropy(*v.sofic);
        support = v.sofic->support();
      }
      try {
        v.decomposition = period_decomposition(support);
        v.mixing = v.decomposition->period == 1;
      } catch (const Error& e) {
        v.decomposition_error = e.what();
      }
      auto& p = v.profile;
      p.origin = s.sided == Sidedness::OneSided ? "one-sided shift metric" : "two-sided shift metric";
      p.h_top = v.h_top;
      p.lambda2 = 1.0;
      p.lnL2 = 1.0;
      if (s.sided == Sidedness::OneSided) {
        p.lambda1 = kInfinity;
        v.map_class = Lipschitz{1.0};
        v.hyper_class = LambdaHyperbolic{1.0};
      } else {
        p.lambda1 = 1.0;
        p.lnL1 = 1.0;
        v.map_class = BiLipschitz{1.0, 1.0};
        v.hyper_class = LambdaPairHyperbolic{1.0, 1.0};
      }
      if (v.decomposition) p.gap = {GapKind::Constant, 0, "constant gap"};
      break;
    }
    case SystemType::Profile:
      v.profile = s.profile;
      v.h_top = s.profile.h_top;
      v.map_class = s.map_class;
      v.hyper_class = s.hyper_class;
      v.mixing = true;
      break;
  }
  return v;
}

struct RateContext {
  RateExponents tau;                 // family exponents of the restricted rates
  std::vector<RateExponents> per_rate;
  bool all_times = true;
  bool index_condition = true;
  std::vector<std::string> notes;
  json index_sets;
};

RateContext rate_context(const SystemView& v, const std::vector<RateSpec>& rates) {
  RateContext c;
  for (const auto& r : rates) {
    const bool all = r.times.is_all();
    c.all_times = c.all_times && all;
    c.per_rate.push_back(tau_exponents(all ? r.phi : restrict_rate(r.phi, r.times)));
  }
  if (!c.per_rate.empty()) c.tau = family_tau(c.per_rate);

  if (v.decomposition && v.decomposition->period > 1) {
    if (v.sft) {
      std::vector<IndexSet> sets;
      c.index_sets = json::array();
      for (const auto& r : rates) {
        sets.push_back(index_set(r.target, r.times, *v.decomposition));
        json pairs = json::array();
        for (const auto& [a, b] : sets.back().pairs) pairs.push_back({a, b});
        c.index_sets.push_back({{"pairs", pairs}, {"diffs", sets.back().diffs}});
      }
      if (!sets.empty()) {
        const auto common = indices_intersect(sets);
        c.index_condition = common.has_value();
        if (!common) c.notes.push_back("Ind' sets have empty intersection");
      }
    } else {
      c.index_condition = false;
      c.notes.push_back("index sets are not computed for sofic presentations; lower bounds withheld");
    }
  } else if (!v.decomposition && (v.sft || v.sofic)) {
    c.index_condition = false;
    c.notes.push_back("shift is not transitive: " + v.decomposition_error);
  }
  return c;
}

BoundInput input_for(const SystemView& v, const RateExponents& tau, double chi,
                     const RateContext& c, const HyperbolicityProfile& profile) {
  BoundInput in;
  in.profile = profile;
  in.tau = tau;
  in.map_class = v.map_class;
  in.hyper_class = v.hyper_class;
  in.chi = chi;
  in.substitute_liminf = v.mixing && c.all_times;
  if (profile.origin == "crude" || profile.origin == "sharp") {
    if (profile.lnL1) {
      in.map_class = BiLipschitz{*profile.lnL1, profile.lnL2};
      in.hyper_class = LambdaPairHyperbolic{profile.lambda1, profile.lambda2};
    } else {
      in.map_class = Lipschitz{profile.lnL2};
    }
  }
  return in;
}

// A formula evaluation that may fail its hypotheses: failures become an
// unavailable row carrying the reason.
BoundRow guarded(const std::string& label, const RateExponents& tau,
                 const std::function<BoundReport()>& f) {
  BoundRow row;
  row.theorem = label;
  row.exponents = tau;
  try {
    row.report = f();
    if (row.report.theorem.empty()) row.report.theorem = label;
  } catch (const Error& e) {
    row.report = BoundReport{};
    row.report.theorem = label;
    row.report.notes.push_back(std::string("unavailable: ") + to_string(e.code()) + ": " + e.what());
  }
  return row;
}

BoundReport merge(const BoundReport& lo, const BoundReport& up, const std::string& label) {
  BoundReport r;
  r.theorem = label;
  r.entropy_lower = lo.entropy_lower;
  r.dim_lower = lo.dim_lower;
  r.entropy_upper = up.entropy_upper;
  r.dim_upper = up.dim_upper;
  r.case_tag = up.case_tag;
  if (up.case_tag == CaseTag::DegenerateZero || up.case_tag == CaseTag::BoundaryZero) {
    r.entropy_lower = 0.0;
    if (up.case_tag == CaseTag::DegenerateZero && r.dim_upper) r.dim_lower = 0.0;
  }
  for (const auto* src : {&lo, &up}) {
    r.assumptions.insert(r.assumptions.end(), src->assumptions.begin(), src->assumptions.end());
    r.notes.insert(r.notes.end(), src->notes.begin(), src->notes.end());
  }
  return r;
}

void add_context_notes(BoundRow& row, const RateContext& c) {
  for (const auto& n : c.notes) row.report.notes.push_back(n);
}

std::vector<BoundRow> bounds_rows(const SystemView& v, const RateContext& c,
                                  const std::vector<RateSpec>& rates, double chi) {
  std::vector<BoundRow> rows;
  const auto& tau = c.tau;
  const ShiftContext sctx{c.all_times, c.index_condition};

  std::vector<const HyperbolicityProfile*> profiles;
  if (v.cfg->type == SystemType::Matrix) {
    if (v.sharp) profiles.push_back(&*v.sharp);
    profiles.push_back(&*v.crude);
  } else {
    profiles.push_back(&v.profile);
  }

  for (const auto* prof : profiles) {
    const std::string suffix = v.cfg->type == SystemType::Matrix ? " [" + prof->origin + "]" : "";
    const BoundInput in = input_for(v, tau, chi, c, *prof);
    const bool decomposed = v.decomposition && v.decomposition->period > 1;
    rows.push_back(guarded("general" + suffix, tau, [&] {
      if (!prof->usable) throw Error(ErrorCode::UnsupportedSpectrum, "profile flagged unusable");
      const BoundReport lo = decomposed ? lower_with_decomposition(in, c.index_condition)
                                        : lower_bounds(in);
      return merge(lo, upper_bounds(in), "general");
    }));
    if (v.cfg->type == SystemType::Matrix || v.cfg->type == SystemType::Profile) {
      if (std::isinf(prof->lambda1)) {
        rows.push_back(guarded("expanding-map" + suffix, tau, [&] { return bounds_expanding(in); }));
      } else {
        rows.push_back(guarded("hyperbolic-set" + suffix, tau, [&] { return bounds_hyperbolic_set(in); }));
      }
    }
  }

  if (v.sft || v.sofic) {
    const bool one = v.cfg->sided == Sidedness::OneSided;
    rows.push_back(guarded(one ? "one-sided-shift" : "two-sided-shift", tau, [&] {
      if (!v.decomposition) throw Error(ErrorCode::Reducible, v.decomposition_error);
      return one ? bounds_one_sided_shift(v.h_top, v.mixing, tau, sctx)
                 : bounds_two_sided_shift(v.h_top, v.mixing, tau, sctx);
    }));
  }

  for (std::size_t i = 0; i < rates.size(); ++i) {
    const std::uint32_t period = v.decomposition ? v.decomposition->period : 1;
    rows.push_back(guarded("covering-set [rate " + std::to_string(i) + "]", c.per_rate[i], [&] {
      const HyperbolicityProfile& prof = *profiles.front();
      if (!prof.usable) throw Error(ErrorCode::UnsupportedSpectrum, "profile flagged unusable");
      const BoundInput in = input_for(v, c.per_rate[i], chi, c, prof);
      const RateFunction r = rates[i].times.is_all() ? rates[i].phi : restrict_rate(rates[i].phi, rates[i].times);
      return covering_bounds(prof, r, in.map_class, v.mixing && c.all_times ? 1 : std::max<std::uint32_t>(period, 2));
    }));
  }
  for (auto& r : rows) add_context_notes(r, c);
  return rows;
}

// The exact-value formula for the system, or the tightest sandwich when no
// exact statement applies.
BoundRow primary_row(const SystemView& v, const RateContext& c, const RateExponents& tau) {
  const ShiftContext sctx{c.all_times, c.index_condition};
  BoundRow row;
  switch (v.cfg->type) {
    case SystemType::Matrix: {
      const auto& sp = *v.spectrum;
      if (sp.is_expanding) {
        row = guarded("expanding-torus", tau, [&] {
          if (!c.all_times)
            throw Error(ErrorCode::HypothesisViolated, "exact torus formulas need S = N for every rate");
          return exact_expanding_torus(sp, tau);
        });
      } else if (sp.is_hyperbolic && sp.lambda_s_mod) {
        row = guarded("toral-automorphism", tau, [&] {
          if (!c.all_times)
            throw Error(ErrorCode::HypothesisViolated, "exact torus formulas need S = N for every rate");
          return exact_toral_automorphism(sp, tau);
        });
      } else {
        row = guarded("hyperbolic-set [crude]", tau, [&] {
          return bounds_hyperbolic_set(input_for(v, tau, 0.0, c, *v.crude));
        });
      }
      break;
    }
    case SystemType::Sft:
    case SystemType::Sofic: {
      const bool one = v.cfg->sided == Sidedness::OneSided;
      row = guarded(one ? "one-sided-shift" : "two-sided-shift", tau, [&] {
        if (!v.decomposition) throw Error(ErrorCode::Reducible, v.decomposition_error);
        return one ? bounds_one_sided_shift(v.h_top, v.mixing, tau, sctx)
                   : bounds_two_sided_shift(v.h_top, v.mixing, tau, sctx);
      });
      break;
    }
    case SystemType::Profile: {
      BoundInput in = input_for(v, tau, 0.0, c, v.profile);
      if (std::isinf(v.profile.lambda1))
        row = guarded("expanding-map", tau, [&] { return bounds_expanding(in); });
      else if (v.profile.lnL1)
        row = guarded("hyperbolic-set", tau, [&] { return bounds_hyperbolic_set(in); });
      else
        row = guarded("general", tau, [&] { return merge(lower_bounds(in), upper_bounds(in), "general"); });
      break;
    }
  }
  add_context_notes(row, c);
  return row;
}

json analyze_task(const SystemView& v, const RateContext& c) {
  json j;
  j["h_top"] = jnum(v.h_top);
  if (v.cfg->type == SystemType::Matrix) {
    j["kind"] = v.matrix->kind() == MapKind::Automorphism ? "automorphism" : "endomorphism";
    j["abs_det"] = v.matrix->abs_det();
    j["spectrum"] = spectral_json(*v.spectrum);
    j["crude_profile"] = profile_json(*v.crude);
    if (v.sharp) j["sharp_profile"] = profile_json(*v.sharp);
    else j["sharp_profile"] = {{"unavailable", v.sharp_error}};
  } else if (v.sft || v.sofic) {
    j["mixing"] = v.mixing;
    if (v.decomposition) {
      j["period"] = v.decomposition->period;
      j["cyclic_classes"] = v.decomposition->class_of;
    } else {
      j["period"] = nullptr;
      j["decomposition_error"] = v.decomposition_error;
    }
    if (v.mixing) {
      const BoolMatrix support = v.sft ? v.sft->transition() : v.sofic->support();
      j["mixing_gap"] = mixing_gap(support);
    }
    if (v.sft) j["alphabet_size"] = v.sft->alphabet_size();
    j["profile"] = profile_json(v.profile);
    const auto amb = dim_upper_ambient(v.h_top, v.hyper_class);
    j["ambient_dim_bound"] = jnum(amb.dim_bound_lambda ? amb.dim_bound_lambda : amb.dim_bound_pair);
  } else {
    j["profile"] = profile_json(v.profile);
    const auto amb = dim_upper_ambient(v.h_top, v.hyper_class);
    j["ambient_dim_bound_lambda"] = jnum(amb.dim_bound_lambda);
    j["ambient_dim_bound_pair"] = jnum(amb.dim_bound_pair);
  }
  if (!c.per_rate.empty()) {
    j["tau"] = exponents_json(c.tau);
    json per = json::array();
    for (const auto& t : c.per_rate) per.push_back(exponents_json(t));
    j["per_rate_tau"] = per;
    j["all_times"] = c.all_times;
  }
  if (!c.index_sets.is_null()) {
    j["index_sets"] = c.index_sets;
    j["index_condition"] = c.index_condition;
  }
  if (!c.notes.empty()) j["notes"] = c.notes;
  return j;
}

json oracle_task(const SystemView& v, const ExperimentConfig& cfg, const RateContext& c) {
  if (!v.sft) throw Error(ErrorCode::InvalidArgument, "oracle tasks need an SFT system");
  if (v.sft->sided() != Sidedness::OneSided)
    throw Error(ErrorCode::InvalidArgument,
                "oracle checks are one-sided; only the formula is reported for two-sided shifts");
  const auto& op = cfg.oracle;
  json out = json::array();
  for (std::size_t i = 0; i < cfg.rates.size(); ++i) {
    const auto& r = cfg.rates[i];
    const double tau = tau_exponents(r.phi).tau_upper;
    json j;
    j["rate"] = i;
    j["tau"] = jnum(tau);
    try {
      const double predicted = v.h_top / (1.0 + tau);
      j["predicted"] = jnum(predicted);
      LimsupCylinderScheme scheme(*v.sft, tau, r.target);
      const auto grid = uniform_grid(v.h_top + 4.0 * op.grid_step, op.grid_step);
      const auto br = bracket_critical_exponent(scheme, grid, op.depth);
      j["bracket"] = {{"s_lo", jnum(br.s_lo)},
                      {"s_hi", jnum(br.s_hi)},
                      {"width", jnum(br.s_hi - br.s_lo)},
                      {"contains_predicted", br.s_lo < predicted && predicted <= br.s_hi},
                      {"depth", op.depth},
                      {"grid_step", jnum(op.grid_step)}};
      const auto mo = moran_dimension(*v.sft, tau, op.moran_stages, op.eta);
      j["moran"] = {{"value", jnum(mo.value)},
                    {"stages", op.moran_stages},
                    {"within_bracket_upper", mo.value <= br.s_hi + 0.02}};
      if (!r.times.is_all()) j["note"] = "the cylinder scheme uses every time; the time set is ignored";
      j["status"] = "ok";
    } catch (const Error& e) {
      j["status"] = "unavailable";
      j["error"] = error_json(e);
    }
    out.push_back(j);
  }
  (void)c;
  return out;
}

json witness_task(const SystemView& v, const ExperimentConfig& cfg) {
  if (!v.sft) throw Error(ErrorCode::InvalidArgument, "witness tasks need an SFT system");
  const auto& op = cfg.oracle;
  json out = json::array();
  for (std::size_t i = 0; i < cfg.rates.size(); ++i) {
    const auto& r = cfg.rates[i];
    json j;
    j["rate"] = i;
    try {
      const auto plan = plan_witness(*v.sft, r.phi, r.target, r.times, op.witness_blocks,
                                     {op.eta, op.enforce_growth});
      const auto cert = construct_witness(plan, *v.sft, r.phi, r.target);
      const auto verified =
          verify_witness(SymbolSequence{cert.prefix, {}}, r.phi, r.target, r.times);
      json hits = json::array();
      bool confirmed = true;
      for (const auto& h : cert.hits) {
        hits.push_back({h.time, h.achieved, h.required});
        confirmed = confirmed && std::binary_search(verified.begin(), verified.end(), h.time);
      }
      json blocks = json::array();
      for (const auto& b : plan.blocks)
        blocks.push_back({{"hit_time", b.hit_time},
                          {"free_len", b.free_len},
                          {"gap", b.gap},
                          {"pinned_len", b.pinned_len}});
      j["plan"] = {{"tau_upper", jnum(plan.tau_upper)},
                   {"eta", jnum(plan.eta)},
                   {"alpha", jnum(plan.alpha)},
                   {"beta", jnum(plan.beta)},
                   {"blocks", blocks}};
      j["prefix_length"] = cert.prefix.size();
      j["prefix"] = encode_word(cert.prefix, op.prefix_limit);
      j["hits"] = hits;
      j["admissible"] = cert.admissible;
      j["all_verified"] = cert.all_verified;
      j["independently_confirmed"] = confirmed;
      j["verified_time_count"] = verified.size();
      if (v.sft->sided() == Sidedness::TwoSided)
        j["note"] = "forward coordinates only; the backward refinement is not constructed";
      j["status"] = "ok";
    } catch (const Error& e) {
      j["status"] = "unavailable";
      j["error"] = error_json(e);
    }
    out.push_back(j);
  }
  return out;
}

json rows_json(const std::vector<BoundRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    json j = report_json(r.report);
    j["label"] = r.theorem;
    j["tau"] = exponents_json(r.exponents);
    if (r.tau) j["sweep_tau"] = jnum(*r.tau);
    a.push_back(j);
  }
  return a;
}

json header(const ExperimentConfig& cfg, const std::string& command) {
  json d;
  d["schema_version"] = kSchemaVersion;
  d["tool"] = {{"name", "shrinktarget"}, {"version", kToolVersion}};
  d["command"] = command;
  d["name"] = cfg.name;
  d["config"] = cfg.source;
  return d;
}

}  // namespace

Report run(const ExperimentConfig& cfg) {
  Report rep;
  rep.doc = header(cfg, "run");
  json tasks = json::array();

  std::optional<SystemView> view;
  std::optional<RateContext> ctx;
  json setup_error;
  try {
    view = make_view(cfg.system);
    ctx = rate_context(*view, cfg.rates);
  } catch (const std::exception& e) {
    setup_error = error_json(e);
  }

  for (const auto& name : cfg.tasks) {
    json t = {{"task", name}};
    const auto start = std::chrono::steady_clock::now();
    if (!view || !ctx) {
      t["status"] = "error";
      t["error"] = setup_error;
      rep.all_tasks_ok = false;
      tasks.push_back(t);
      continue;
    }
    try {
      if (name == "analyze") {
        t["result"] = analyze_task(*view, *ctx);
      } else if (name == "bounds") {
        auto rows = bounds_rows(*view, *ctx, cfg.rates, cfg.chi);
        t["result"] = rows_json(rows);
        for (auto& r : rows) rep.rows.push_back(std::move(r));
      } else if (name == "exact") {
        std::vector<BoundRow> rows{primary_row(*view, *ctx, ctx->tau)};
        if (view->cfg->type == SystemType::Matrix && view->sharp) {
          // Independent path through the sharp-profile sandwich.
          BoundInput in = input_for(*view, ctx->tau, 0.0, *ctx, *view->sharp);
          rows.push_back(guarded(std::isinf(view->sharp->lambda1) ? "expanding-map [sharp]"
                                                                  : "hyperbolic-set [sharp]",
                                 ctx->tau, [&] {
                                   return std::isinf(view->sharp->lambda1) ? bounds_expanding(in)
                                                                           : bounds_hyperbolic_set(in);
                                 }));
        }
        t["result"] = rows_json(rows);
        for (auto& r : rows) rep.rows.push_back(std::move(r));
      } else if (name == "oracle") {
        t["result"] = oracle_task(*view, cfg, *ctx);
      } else if (name == "witness") {
        t["result"] = witness_task(*view, cfg);
      }
      t["status"] = "ok";
    } catch (const std::exception& e) {
      t["status"] = "error";
      t["error"] = error_json(e);
      rep.all_tasks_ok = false;
    }
    if (cfg.output.report_timing) {
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
      t["wall_ms"] = jnum(ms.count());
    }
    tasks.push_back(t);
  }
  rep.doc["tasks"] = tasks;
  rep.doc["all_tasks_ok"] = rep.all_tasks_ok;
  return rep;
}

Report sweep(const ExperimentConfig& cfg, const std::vector<double>& taus) {
  if (taus.empty()) throw Error(ErrorCode::Validation, "sweep grid is empty");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] >= 0.0))
      throw Error(ErrorCode::Validation, "taus[" + std::to_string(i) + "]: must be nonnegative");
    if (i > 0 && taus[i] < taus[i - 1])
      throw Error(ErrorCode::Validation, "taus[" + std::to_string(i) + "]: grid must be sorted");
  }
  Report rep;
  rep.sweep = true;
  rep.doc = header(cfg, "sweep");
  rep.doc["taus"] = json::array();
  for (double t : taus) rep.doc["taus"].push_back(jnum(t));
  try {
    const SystemView view = make_view(cfg.system);
    for (double t : taus) {
      std::vector<RateSpec> rates;
      for (const auto& r : cfg.rates) rates.push_back({RateFunction::exponential(t), r.times, r.target});
      if (rates.empty())
        rates.push_back({RateFunction::exponential(t), TimeSet::all(),
                         view.sft || view.sofic ? TargetSequence::constant_shift(SymbolSequence::constant(0))
                                                : TargetSequence::constant_point(Point(cfg.system.matrix.size(), 0.0))});
      const RateContext c = rate_context(view, rates);
      BoundRow row = primary_row(view, c, c.tau);
      row.tau = t;
      rep.rows.push_back(std::move(row));
    }
    rep.doc["rows"] = rows_json(rep.rows);
  } catch (const std::exception& e) {
    rep.all_tasks_ok = false;
    rep.doc["error"] = error_json(e);
  }
  rep.doc["all_tasks_ok"] = rep.all_tasks_ok;
  return rep;
}

std::string Report::json_text() const { return doc.dump(2) + "\n"; }

std::string Report::csv_text() const {
  std::ostringstream os;
  if (sweep) {
    os << "tau,h_lower,h_upper,dim_lower,dim_upper,case_tag\n";
    for (const auto& r : rows)
      os << format_number(r.tau) << ',' << format_number(r.report.entropy_lower) << ','
         << format_number(r.report.entropy_upper) << ',' << format_number(r.report.dim_lower) << ','
         << format_number(r.report.dim_upper) << ',' << to_string(r.report.case_tag) << '\n';
    return os.str();
  }
  os << "row,theorem,tau_lower,tau_upper,h_lower,h_upper,dim_lower,dim_upper,case_tag\n";
  std::size_t i = 1;
  for (const auto& r : rows) {
    std::string label = r.theorem;
    if (label.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char ch : label) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      label = q + "\"";
    }
    os << i++ << ',' << label << ',' << format_number(r.exponents.tau_lower) << ','
       << format_number(r.exponents.tau_upper) << ',' << format_number(r.report.entropy_lower) << ','
       << format_number(r.report.entropy_upper) << ',' << format_number(r.report.dim_lower) << ','
       << format_number(r.report.dim_upper) << ',' << to_string(r.report.case_tag) << '\n';
  }
  return os.str();
}

}  // namespace shrinktarget
