#pragma once

// Entropy and Hausdorff-dimension bounds for shrinking target sets, with
// explicit case dispatch. A side whose hypotheses fail is reported as
// unavailable (nullopt), never as 0 or NaN.
//
// Notation: profile.lambda1 / lambda2 are the specification exponents
// (lambda1 may be +inf), lnL1 / lnL2 the logarithmic (bi-)Lipschitz
// constants, tau_upper / tau_lower the rate exponents.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rates.hpp"
#include "symbolic.hpp"
#include "systems.hpp"

namespace shrinktarget {

// Equality tolerance for boundary dispatch (|tau_lower - lnL1| <= tol is the
// boundary case).
inline constexpr double kBoundaryTol = 1e-12;

struct Lipschitz {
  double lnL = 0.0;
};
struct BiLipschitz {
  double lnL1 = 0.0;
  double lnL2 = 0.0;
};
using MapClass = std::variant<std::monostate, Lipschitz, BiLipschitz>;

struct NotHyperbolic {};
struct LambdaHyperbolic {
  double lam = 0.0;
};
struct LambdaPairHyperbolic {
  double lam1 = 0.0;
  double lam2 = 0.0;
};
using HyperClass = std::variant<NotHyperbolic, LambdaHyperbolic, LambdaPairHyperbolic>;

struct BoundInput {
  HyperbolicityProfile profile;
  RateExponents tau;
  MapClass map_class;
  HyperClass hyper_class;
  double chi = 0.0;  // weak-specification defect
  // Use tau_lower in place of tau_upper for lower bounds; valid when the
  // system is mixing and every time set is all of N.
  bool substitute_liminf = false;
};

enum class CaseTag { Generic, Exact, BoundaryZero, DegenerateZero };
const char* to_string(CaseTag tag);

struct Assumption {
  std::string name;
  bool holds = false;
};

struct BoundReport {
  std::optional<double> entropy_lower;
  std::optional<double> entropy_upper;
  std::optional<double> dim_lower;
  std::optional<double> dim_upper;
  CaseTag case_tag = CaseTag::Generic;
  std::string theorem;
  std::vector<Assumption> assumptions;
  std::vector<std::string> notes;

  // lower <= upper + 1e-12 wherever both sides are known; Exact implies equality.
  bool consistent() const;
};

// (l1 l2 - l2 t) / (l1 l2 + l1 t), written as (1 - t/l1) l2 / (l2 + t) so the
// l1 = +inf limit l2 / (l2 + t) is exact. With chi > 0 the weakened form
// (1/(1+chi)) (l1 l2 - l2 t) / (l1 l2 + l1 t + (l1 + l2) chi t).
double lower_factor(double l1, double l2, double t, double chi = 0.0);

// Throws Error(HypothesisViolated) unless tau < lambda1.
double lower_entropy_general(const BoundInput& in);
// Throw Error(MapClassMismatch) for the wrong map class.
double lower_dim_lipschitz(const BoundInput& in);
double lower_dim_bilipschitz(const BoundInput& in);
// Both lower bounds in one report; unavailable sides when hypotheses fail.
BoundReport lower_bounds(const BoundInput& in);
// Transitive but not mixing: same factors, provided the Ind' sets of all
// targets intersect. Otherwise the lower side is unavailable (the set may be
// empty).
BoundReport lower_with_decomposition(const BoundInput& in, bool index_condition);

BoundReport upper_bounds(const BoundInput& in);

// Hyperbolic toral automorphism with exactly two eigenvalue moduli.
// Throws Error(UnsupportedSpectrum) for other spectra.
BoundReport exact_toral_automorphism(const SpectralProfile& p, const RateExponents& tau);

// Locally maximal hyperbolic set: lower from (lambda1, lambda2), upper from
// (lnL1, lnL2); Exact when the two pairs coincide.
BoundReport bounds_hyperbolic_set(const BoundInput& in);

// Expanding map: lambda = exp(profile.lambda2), L = exp(profile.lnL2).
BoundReport bounds_expanding(const BoundInput& in);
BoundReport exact_expanding_torus(const SpectralProfile& p, const RateExponents& tau);

struct ShiftContext {
  bool all_times = true;          // every time set is N
  bool index_condition = true;    // the Ind' sets intersect
};

BoundReport bounds_one_sided_shift(double h_top, bool mixing, const RateExponents& tau,
                                   const ShiftContext& ctx = {});
BoundReport bounds_two_sided_shift(double h_top, bool mixing, const RateExponents& tau,
                                   const ShiftContext& ctx = {});
// Throw Error(Reducible) for reducible shifts.
BoundReport bounds_one_sided_shift(const ShiftOfFiniteType& x, const RateExponents& tau,
                                   const ShiftContext& ctx = {});
BoundReport bounds_two_sided_shift(const ShiftOfFiniteType& x, const RateExponents& tau,
                                   const ShiftContext& ctx = {});

// Points whose orbit's shrinking balls cover X densely. `period` is the
// number of cyclic classes; with period 1 the liminf exponent is used.
BoundReport covering_bounds(const HyperbolicityProfile& profile, const RateFunction& phi,
                            const MapClass& map_class, std::uint32_t period = 1);

struct AmbientDimBounds {
  std::optional<double> dim_bound_lambda;
  std::optional<double> dim_bound_pair;
};
AmbientDimBounds dim_upper_ambient(double h_top, const HyperClass& hyper);

}  // namespace shrinktarget
