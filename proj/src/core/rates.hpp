#pragma once

// Shrinking rates phi: N -> (0,1], time sets S and target sequences Z.
//
// Rates are parametric so that the exponents
//   tau_upper = limsup -ln phi(n) / n,   tau_lower = liminf -ln phi(n) / n
// have closed forms. Every rate reduces to an "asymptotic pattern": a period P
// and, for each residue r mod P, the limit of -ln phi(n)/n along n = r (mod P).

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace shrinktarget {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Time sets

struct AllTimes {};

struct Arithmetic {
  std::uint64_t offset = 0;
  std::uint64_t step = 1;
};

struct ExplicitTimes {
  std::vector<std::uint64_t> times;
  // Continues the list with the progression's elements beyond times.back().
  std::optional<Arithmetic> tail;
};

class TimeSet {
 public:
  using Variant = std::variant<AllTimes, Arithmetic, ExplicitTimes>;

  TimeSet() = default;
  static TimeSet all() { return TimeSet(AllTimes{}); }
  static TimeSet arithmetic(std::uint64_t offset, std::uint64_t step);
  static TimeSet explicit_times(std::vector<std::uint64_t> times,
                                std::optional<Arithmetic> tail = std::nullopt);

  const Variant& variant() const { return v_; }
  bool is_all() const { return std::holds_alternative<AllTimes>(v_); }
  bool is_bounded() const;
  bool contains(std::uint64_t n) const;

  // Smallest element >= n, if any.
  std::optional<std::uint64_t> next_at_least(std::uint64_t n) const;

  // Elements in [lo, hi].
  std::vector<std::uint64_t> enumerate(std::uint64_t lo, std::uint64_t hi) const;

  // The progression the set eventually follows; nullopt for bounded sets.
  std::optional<Arithmetic> eventual_progression() const;

  std::string describe() const;

 private:
  explicit TimeSet(Variant v) : v_(std::move(v)) {}
  Variant v_{AllTimes{}};
};

// ---------------------------------------------------------------------------
// Rates

class RateFunction;

struct Exponential {
  double tau = 0.0;
};
// phi(n) = min(1, n^-a)
struct PowerLaw {
  double a = 0.0;
};
// phi(n) = exp(-taus[n mod period] * n)
struct PiecewiseExponential {
  std::uint32_t period = 1;
  std::vector<double> taus;
};
// phi(n) = values[n-1] for n <= values.size(), exp(-tail_tau * n) afterwards.
struct Tabulated {
  std::vector<double> values;
  double tail_tau = 0.0;
};
// phi(n) = exp(-c n^2); both exponents are +inf.
struct SuperExponential {
  double c = 1.0;
};
// phi on `on`, 1 elsewhere.
struct Restricted {
  std::shared_ptr<const RateFunction> base;
  TimeSet on;
};

struct AsymptoticPattern {
  std::uint64_t period = 1;
  std::vector<double> limits;  // size == period, entries in [0, +inf]
};

struct RateExponents {
  double tau_upper = 0.0;
  double tau_lower = 0.0;
  std::string note;
};

class RateFunction {
 public:
  using Variant = std::variant<Exponential, PowerLaw, PiecewiseExponential,
                               Tabulated, SuperExponential, Restricted>;

  // Factories validate their arguments and throw Error(InvalidArgument).
  static RateFunction exponential(double tau);
  static RateFunction power_law(double a);
  static RateFunction piecewise_exponential(std::uint32_t period, std::vector<double> taus);
  static RateFunction tabulated(std::vector<double> values, double tail_tau);
  static RateFunction super_exponential(double c);

  const Variant& variant() const { return v_; }

  // -ln phi(n) >= 0; exact for every variant, no underflow.
  double neg_log(std::uint64_t n) const;
  // phi(n), floored at the smallest positive double so it stays in (0, 1].
  double value(std::uint64_t n) const;

  AsymptoticPattern pattern() const;
  std::string describe() const;

 private:
  friend RateFunction restrict_rate(const RateFunction&, const TimeSet&);
  explicit RateFunction(Variant v) : v_(std::move(v)) {}
  Variant v_;
};
RateExponents tau_exponents(const RateFunction& phi);

// Componentwise suprema. Throws Error(EmptyFamily) on an empty list.
RateExponents family_tau(const std::vector<RateExponents>& exponents);

// phi on s and 1 off s. Throws Error(BoundedTimeSet) for a bounded s.
RateFunction restrict_rate(const RateFunction& phi, const TimeSet& s);

// Smallest integer k with k > -ln phi(n); a point whose first disagreement
// with the target (in the e^-k shift metric) is at index >= k lies inside
// the ball of radius phi(n).
std::uint64_t required_exponent(double neg_log_phi);

// ---------------------------------------------------------------------------
// Targets

using Symbol = int;
using Point = std::vector<double>;

// An eventually periodic infinite symbol sequence, 0-indexed. An empty cycle
// denotes a finite word.
struct SymbolSequence {
  std::vector<Symbol> prefix;
  std::vector<Symbol> cycle;

  bool is_finite() const { return cycle.empty(); }
  // Finite words: prefix length; infinite sequences: unbounded.
  std::uint64_t length() const;
  Symbol at(std::uint64_t i) const;
  static SymbolSequence constant(Symbol s) { return {{}, {s}}; }
  std::string describe() const;
};

template <class T>
struct EventuallyPeriodic {
  std::vector<T> pre;
  std::vector<T> period;

  const T& at(std::uint64_t n) const {
    if (n < pre.size()) return pre[n];
    return period[(n - pre.size()) % period.size()];
  }
};

struct ConstantPoint {
  Point point;
};
struct PointSequence {
  EventuallyPeriodic<Point> points;
};
struct ShiftTarget {
  EventuallyPeriodic<SymbolSequence> sequences;
};

class TargetSequence {
 public:
  using Variant = std::variant<ConstantPoint, PointSequence, ShiftTarget>;

  static TargetSequence constant_point(Point p);
  static TargetSequence point_sequence(EventuallyPeriodic<Point> pts);
  static TargetSequence shift(EventuallyPeriodic<SymbolSequence> seqs);
  static TargetSequence constant_shift(SymbolSequence seq);

  const Variant& variant() const { return v_; }
  bool is_symbolic() const { return std::holds_alternative<ShiftTarget>(v_); }

  // Index structure of n -> z_n.
  std::uint64_t preperiod() const;
  std::uint64_t period() const;

  const SymbolSequence& symbols_at(std::uint64_t n) const;
  const Point& point_at(std::uint64_t n) const;

  // Throws Error(InvalidArgument) if a point is not in [0,1)^dim or a
  // symbolic target is used with a torus (and vice versa).
  void check_torus(std::size_t dim) const;

 private:
  explicit TargetSequence(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

}  // namespace shrinktarget
