#include "rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "error.hpp"

namespace shrinktarget {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

bool is_nonneg_finite(double x) { return std::isfinite(x) && x >= 0.0; }

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// TimeSet

TimeSet TimeSet::arithmetic(std::uint64_t offset, std::uint64_t step) {
  require(step >= 1, "arithmetic time set needs step >= 1");
  return TimeSet(Arithmetic{offset, step});
}

TimeSet TimeSet::explicit_times(std::vector<std::uint64_t> times,
                                std::optional<Arithmetic> tail) {
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i - 1] < times[i], "explicit time set must be strictly increasing");
  if (tail) require(tail->step >= 1, "tail progression needs step >= 1");
  require(!times.empty() || tail.has_value(), "explicit time set is empty");
  return TimeSet(ExplicitTimes{std::move(times), tail});
}

bool TimeSet::is_bounded() const {
  if (auto* e = std::get_if<ExplicitTimes>(&v_)) return !e->tail.has_value();
  return false;
}

namespace {

bool in_progression(const Arithmetic& a, std::uint64_t n) {
  return n >= a.offset && (n - a.offset) % a.step == 0;
}

std::optional<std::uint64_t> progression_at_least(const Arithmetic& a, std::uint64_t n) {
  if (n <= a.offset) return a.offset;
  std::uint64_t k = (n - a.offset + a.step - 1) / a.step;
  return a.offset + k * a.step;
}

}  // namespace

bool TimeSet::contains(std::uint64_t n) const {
  return std::visit(
      [n](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AllTimes>) {
          return true;
        } else if constexpr (std::is_same_v<T, Arithmetic>) {
          return in_progression(s, n);
        } else {
          if (std::binary_search(s.times.begin(), s.times.end(), n)) return true;
          if (!s.tail) return false;
          std::uint64_t last = s.times.empty() ? 0 : s.times.back();
          if (!s.times.empty() && n <= last) return false;
          return in_progression(*s.tail, n);
        }
      },
      v_);
}

std::optional<std::uint64_t> TimeSet::next_at_least(std::uint64_t n) const {
  return std::visit(
      [n](const auto& s) -> std::optional<std::uint64_t> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AllTimes>) {
          return n;
        } else if constexpr (std::is_same_v<T, Arithmetic>) {
          return progression_at_least(s, n);
        } else {
          auto it = std::lower_bound(s.times.begin(), s.times.end(), n);
          if (it != s.times.end()) return *it;
          if (!s.tail) return std::nullopt;
          std::uint64_t from = n;
          if (!s.times.empty()) from = std::max(from, s.times.back() + 1);
          return progression_at_least(*s.tail, from);
        }
      },
      v_);
}

std::vector<std::uint64_t> TimeSet::enumerate(std::uint64_t lo, std::uint64_t hi) const {
  std::vector<std::uint64_t> out;
  std::uint64_t n = lo;
  while (n <= hi) {
    auto next = next_at_least(n);
    if (!next || *next > hi) break;
    out.push_back(*next);
    if (*next == std::numeric_limits<std::uint64_t>::max()) break;
    n = *next + 1;
  }
  return out;
}

std::optional<Arithmetic> TimeSet::eventual_progression() const {
  return std::visit(
      [](const auto& s) -> std::optional<Arithmetic> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AllTimes>) {
          return Arithmetic{0, 1};
        } else if constexpr (std::is_same_v<T, Arithmetic>) {
          return s;
        } else {
          return s.tail;
        }
      },
      v_);
}

std::string TimeSet::describe() const {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AllTimes>) {
          return "all";
        } else if constexpr (std::is_same_v<T, Arithmetic>) {
          return "arithmetic(" + std::to_string(s.offset) + "," + std::to_string(s.step) + ")";
        } else {
          std::string out = "explicit[" + std::to_string(s.times.size()) + "]";
          if (s.tail)
            out += "+tail(" + std::to_string(s.tail->offset) + "," +
                   std::to_string(s.tail->step) + ")";
          return out;
        }
      },
      v_);
}

// ---------------------------------------------------------------------------
// RateFunction

RateFunction RateFunction::exponential(double tau) {
  require(tau == kInfinity || is_nonneg_finite(tau), "exponential rate needs tau >= 0");
  if (tau == kInfinity) return RateFunction(SuperExponential{1.0});
  return RateFunction(Exponential{tau});
}

RateFunction RateFunction::power_law(double a) {
  require(is_nonneg_finite(a), "power-law rate needs a >= 0");
  return RateFunction(PowerLaw{a});
}

RateFunction RateFunction::piecewise_exponential(std::uint32_t period, std::vector<double> taus) {
  require(period >= 1, "piecewise rate needs period >= 1");
  require(taus.size() == period, "piecewise rate needs one tau per residue");
  for (double t : taus) require(is_nonneg_finite(t), "piecewise rate needs taus >= 0");
  return RateFunction(PiecewiseExponential{period, std::move(taus)});
}

RateFunction RateFunction::tabulated(std::vector<double> values, double tail_tau) {
  for (double v : values)
    require(std::isfinite(v) && v > 0.0 && v <= 1.0, "tabulated rate values must lie in (0,1]");
  require(is_nonneg_finite(tail_tau), "tabulated rate needs tail_tau >= 0");
  return RateFunction(Tabulated{std::move(values), tail_tau});
}

RateFunction RateFunction::super_exponential(double c) {
  require(std::isfinite(c) && c > 0.0, "super-exponential rate needs c > 0");
  return RateFunction(SuperExponential{c});
}

double RateFunction::neg_log(std::uint64_t n) const {
  const double x = static_cast<double>(n);
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return r.tau * x;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return n <= 1 ? 0.0 : r.a * std::log(x);
        } else if constexpr (std::is_same_v<T, PiecewiseExponential>) {
          return r.taus[n % r.period] * x;
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          if (n >= 1 && n <= r.values.size()) return -std::log(r.values[n - 1]);
          return r.tail_tau * x;
        } else if constexpr (std::is_same_v<T, SuperExponential>) {
          return r.c * x * x;
        } else {
          return r.on.contains(n) ? r.base->neg_log(n) : 0.0;
        }
      },
      v_);
}

double RateFunction::value(std::uint64_t n) const {
  return std::max(std::exp(-neg_log(n)), std::numeric_limits<double>::denorm_min());
}

AsymptoticPattern RateFunction::pattern() const {
  return std::visit(
      [](const auto& r) -> AsymptoticPattern {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return {1, {r.tau}};
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return {1, {0.0}};
        } else if constexpr (std::is_same_v<T, PiecewiseExponential>) {
          return {r.period, r.taus};
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          return {1, {r.tail_tau}};
        } else if constexpr (std::is_same_v<T, SuperExponential>) {
          return {1, {kInfinity}};
        } else {
          const AsymptoticPattern base = r.base->pattern();
          const Arithmetic prog = *r.on.eventual_progression();
          const std::uint64_t period = std::lcm(base.period, prog.step);
          AsymptoticPattern out{period, std::vector<double>(period, 0.0)};
          for (std::uint64_t res = 0; res < period; ++res) {
            if (res % prog.step == prog.offset % prog.step)
              out.limits[res] = base.limits[res % base.period];
          }
          return out;
        }
      },
      v_);
}

std::string RateFunction::describe() const {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return "exponential(" + fmt_double(r.tau) + ")";
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return "power_law(" + fmt_double(r.a) + ")";
        } else if constexpr (std::is_same_v<T, PiecewiseExponential>) {
          std::string s = "piecewise(" + std::to_string(r.period) + ";";
          for (std::size_t i = 0; i < r.taus.size(); ++i)
            s += (i ? "," : "") + fmt_double(r.taus[i]);
          return s + ")";
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          return "tabulated[" + std::to_string(r.values.size()) + "](tail " +
                 fmt_double(r.tail_tau) + ")";
        } else if constexpr (std::is_same_v<T, SuperExponential>) {
          return "super_exponential(" + fmt_double(r.c) + ")";
        } else {
          return r.base->describe() + " on " + r.on.describe();
        }
      },
      v_);
}

RateExponents tau_exponents(const RateFunction& phi) {
  const AsymptoticPattern p = phi.pattern();
  RateExponents out;
  out.tau_upper = *std::max_element(p.limits.begin(), p.limits.end());
  out.tau_lower = *std::min_element(p.limits.begin(), p.limits.end());
  if (std::holds_alternative<Tabulated>(phi.variant()))
    out.note = "tabulated rate: exponents taken from tail_tau; finite prefixes never affect limsup/liminf";
  return out;
}

RateExponents family_tau(const std::vector<RateExponents>& exponents) {
  if (exponents.empty()) throw Error(ErrorCode::EmptyFamily, "empty family");
  RateExponents out{0.0, 0.0, {}};
  for (const auto& e : exponents) {
    out.tau_upper = std::max(out.tau_upper, e.tau_upper);
    out.tau_lower = std::max(out.tau_lower, e.tau_lower);
  }
  return out;
}

RateFunction restrict_rate(const RateFunction& phi, const TimeSet& s) {
  if (s.is_bounded())
    throw Error(ErrorCode::BoundedTimeSet, "cannot restrict a rate to a bounded time set");
  if (s.is_all()) return phi;
  return RateFunction(Restricted{std::make_shared<const RateFunction>(phi), s});
}

std::uint64_t required_exponent(double neg_log_phi) {
  if (!(neg_log_phi >= 0.0)) return 1;
  const double r = std::round(neg_log_phi);
  // Within rounding noise of an integer the boundary is treated as attained,
  // so the strict inequality k > -ln phi demands one more symbol.
  if (std::fabs(neg_log_phi - r) < 1e-9 * std::max(1.0, r))
    return static_cast<std::uint64_t>(r) + 1;
  return static_cast<std::uint64_t>(std::floor(neg_log_phi)) + 1;
}

// ---------------------------------------------------------------------------
// Targets

std::uint64_t SymbolSequence::length() const {
  return is_finite() ? prefix.size() : std::numeric_limits<std::uint64_t>::max();
}

Symbol SymbolSequence::at(std::uint64_t i) const {
  if (i < prefix.size()) return prefix[i];
  if (cycle.empty()) throw Error(ErrorCode::InvalidArgument, "index past end of finite word");
  return cycle[(i - prefix.size()) % cycle.size()];
}

std::string SymbolSequence::describe() const {
  auto join = [](const std::vector<Symbol>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  return "[" + join(prefix) + "](" + join(cycle) + ")";
}

TargetSequence TargetSequence::constant_point(Point p) {
  return TargetSequence(ConstantPoint{std::move(p)});
}

TargetSequence TargetSequence::point_sequence(EventuallyPeriodic<Point> pts) {
  require(!pts.period.empty(), "target sequence needs a nonempty period");
  return TargetSequence(PointSequence{std::move(pts)});
}

TargetSequence TargetSequence::shift(EventuallyPeriodic<SymbolSequence> seqs) {
  require(!seqs.period.empty(), "target sequence needs a nonempty period");
  auto check = [](const SymbolSequence& s) {
    require(!s.cycle.empty(), "shift targets must be infinite eventually periodic sequences");
  };
  for (const auto& s : seqs.pre) check(s);
  for (const auto& s : seqs.period) check(s);
  return TargetSequence(ShiftTarget{std::move(seqs)});
}

TargetSequence TargetSequence::constant_shift(SymbolSequence seq) {
  return shift({{}, {std::move(seq)}});
}

std::uint64_t TargetSequence::preperiod() const {
  if (auto* p = std::get_if<PointSequence>(&v_)) return p->points.pre.size();
  if (auto* s = std::get_if<ShiftTarget>(&v_)) return s->sequences.pre.size();
  return 0;
}

std::uint64_t TargetSequence::period() const {
  if (auto* p = std::get_if<PointSequence>(&v_)) return p->points.period.size();
  if (auto* s = std::get_if<ShiftTarget>(&v_)) return s->sequences.period.size();
  return 1;
}

const SymbolSequence& TargetSequence::symbols_at(std::uint64_t n) const {
  auto* s = std::get_if<ShiftTarget>(&v_);
  if (!s) throw Error(ErrorCode::InvalidArgument, "target is not symbolic");
  return s->sequences.at(n);
}

const Point& TargetSequence::point_at(std::uint64_t n) const {
  if (auto* c = std::get_if<ConstantPoint>(&v_)) return c->point;
  if (auto* p = std::get_if<PointSequence>(&v_)) return p->points.at(n);
  throw Error(ErrorCode::InvalidArgument, "target is symbolic, not a torus point");
}

void TargetSequence::check_torus(std::size_t dim) const {
  auto check_point = [dim](const Point& p) {
    require(p.size() == dim, "target point dimension does not match the torus");
    for (double c : p) require(c >= 0.0 && c < 1.0, "torus coordinates must lie in [0,1)");
  };
  if (auto* c = std::get_if<ConstantPoint>(&v_)) {
    check_point(c->point);
  } else if (auto* p = std::get_if<PointSequence>(&v_)) {
    for (const auto& q : p->points.pre) check_point(q);
    for (const auto& q : p->points.period) check_point(q);
  } else {
    throw Error(ErrorCode::InvalidArgument, "symbolic target used with a torus system");
  }
}

}  // namespace shrinktarget
