#include "bounds.hpp"

#include <cmath>

#include "error.hpp"

namespace shrinktarget {

namespace {

bool near(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= kBoundaryTol * std::max(1.0, std::fabs(b));
}

double lower_tau(const BoundInput& in) {
  return in.substitute_liminf ? in.tau.tau_lower : in.tau.tau_upper;
}

// t / (l + t) style ratios with t possibly +inf.
double ratio_over(double l, double t) {
  if (std::isinf(t)) return 0.0;
  return l / (l + t);
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
}

BoundReport zero_report(const char* theorem, CaseTag tag) {
  BoundReport r;
  r.theorem = theorem;
  r.case_tag = tag;
  r.entropy_lower = 0.0;
  r.entropy_upper = 0.0;
  if (tag == CaseTag::DegenerateZero) {
    r.dim_lower = 0.0;
    r.dim_upper = 0.0;
  }
  return r;
}

}  // namespace

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::Generic: return "Generic";
    case CaseTag::Exact: return "Exact";
    case CaseTag::BoundaryZero: return "BoundaryZero";
    case CaseTag::DegenerateZero: return "DegenerateZero";
  }
  return "Unknown";
}

bool BoundReport::consistent() const {
  auto ok = [](const std::optional<double>& lo, const std::optional<double>& hi) {
    return !lo || !hi || *lo <= *hi + 1e-12;
  };
  if (!ok(entropy_lower, entropy_upper) || !ok(dim_lower, dim_upper)) return false;
  if (case_tag == CaseTag::Exact) {
    auto same = [](const std::optional<double>& a, const std::optional<double>& b) {
      return a && b && std::fabs(*a - *b) <= 1e-12 * std::max(1.0, std::fabs(*b));
    };
    return same(entropy_lower, entropy_upper) && same(dim_lower, dim_upper);
  }
  return true;
}

double lower_factor(double l1, double l2, double t, double chi) {
  if (std::isinf(t)) return 0.0;
  const double head = std::isinf(l1) ? 1.0 : 1.0 - t / l1;
  if (chi == 0.0) return head * l2 / (l2 + t);
  const double cross = std::isinf(l1) ? 1.0 : 1.0 + l2 / l1;
  return (1.0 / (1.0 + chi)) * head * l2 / (l2 + t + cross * chi * t);
}

double lower_entropy_general(const BoundInput& in) {
  const auto& p = in.profile;
  require_positive(p.lambda1, "lambda1");
  require_positive(p.lambda2, "lambda2");
  if (in.chi < 0.0) throw Error(ErrorCode::InvalidArgument, "chi must be nonnegative");
  const double t = lower_tau(in);
  if (!(t < p.lambda1))
    throw Error(ErrorCode::HypothesisViolated,
                "lower bound needs tau < lambda1 (tau = " + std::to_string(t) +
                    ", lambda1 = " + std::to_string(p.lambda1) + ")");
  return lower_factor(p.lambda1, p.lambda2, t, in.chi) * p.h_top;
}

double lower_dim_lipschitz(const BoundInput& in) {
  const auto* lip = std::get_if<Lipschitz>(&in.map_class);
  if (!lip) throw Error(ErrorCode::MapClassMismatch, "Lipschitz map class required");
  require_positive(lip->lnL, "lnL");
  return lower_entropy_general(in) / lip->lnL;
}

double lower_dim_bilipschitz(const BoundInput& in) {
  const auto* bi = std::get_if<BiLipschitz>(&in.map_class);
  if (!bi) throw Error(ErrorCode::MapClassMismatch, "bi-Lipschitz map class required");
  require_positive(bi->lnL1, "lnL1");
  require_positive(bi->lnL2, "lnL2");
  const double h = lower_entropy_general(in);
  return in.profile.h_top / bi->lnL1 + h / bi->lnL2;
}

BoundReport lower_bounds(const BoundInput& in) {
  BoundReport r;
  r.theorem = "general-lower";
  const double t = lower_tau(in);
  const bool holds = t < in.profile.lambda1;
  r.assumptions.push_back({"tau < lambda1", holds});
  if (!holds) {
    r.notes.push_back("lower bounds unavailable: tau >= lambda1");
    return r;
  }
  r.entropy_lower = lower_entropy_general(in);
  if (std::holds_alternative<Lipschitz>(in.map_class)) {
    r.dim_lower = lower_dim_lipschitz(in);
  } else if (std::holds_alternative<BiLipschitz>(in.map_class)) {
    r.dim_lower = lower_dim_bilipschitz(in);
  } else {
    r.notes.push_back("no map class: dimension lower bound unavailable");
  }
  return r;
}

BoundReport lower_with_decomposition(const BoundInput& in, bool index_condition) {
  if (!index_condition) {
    BoundReport r;
    r.theorem = "periodic-decomposition-lower";
    r.assumptions.push_back({"Ind' intersection nonempty", false});
    r.notes.push_back("lower bounds unavailable: Ind' sets do not intersect (the set may be empty)");
    return r;
  }
  BoundInput adj = in;
  adj.substitute_liminf = false;
  BoundReport r = lower_bounds(adj);
  r.theorem = "periodic-decomposition-lower";
  r.assumptions.insert(r.assumptions.begin(), {"Ind' intersection nonempty", true});
  return r;
}

BoundReport upper_bounds(const BoundInput& in) {
  const double t = in.tau.tau_lower;
  const double h = in.profile.h_top;
  if (const auto* lip = std::get_if<Lipschitz>(&in.map_class)) {
    require_positive(lip->lnL, "lnL");
    BoundReport r;
    r.theorem = "lipschitz-upper";
    r.assumptions.push_back({"L-Lipschitz", true});
    const double factor = ratio_over(lip->lnL, t);
    r.entropy_upper = factor * h;
    if (const auto* hyp = std::get_if<LambdaHyperbolic>(&in.hyper_class)) {
      require_positive(hyp->lam, "lambda");
      r.assumptions.push_back({"lambda-hyperbolic", true});
      r.dim_upper = std::isinf(hyp->lam) ? 0.0 : factor * h / hyp->lam;
    } else {
      r.notes.push_back("dimension upper bound needs lambda-hyperbolicity");
    }
    if (std::isinf(t)) {
      r.case_tag = CaseTag::DegenerateZero;
      r.entropy_lower = 0.0;
      if (r.dim_upper) r.dim_lower = 0.0;
    }
    return r;
  }

  const auto* bi = std::get_if<BiLipschitz>(&in.map_class);
  if (!bi) throw Error(ErrorCode::InvalidArgument, "upper bounds need a map class");
  require_positive(bi->lnL1, "lnL1");
  require_positive(bi->lnL2, "lnL2");
  const auto* pair = std::get_if<LambdaPairHyperbolic>(&in.hyper_class);

  if (!std::isinf(t) && near(t, bi->lnL1)) {
    BoundReport r = zero_report("bilipschitz-upper/boundary", CaseTag::BoundaryZero);
    r.assumptions.push_back({"tau_lower = ln L1", true});
    if (pair) r.dim_upper = h / pair->lam1;
    return r;
  }
  if (t > bi->lnL1) {
    BoundReport r = zero_report("bilipschitz-upper/beyond", CaseTag::DegenerateZero);
    r.assumptions.push_back({"tau_lower > ln L1", true});
    if (!pair) {
      r.dim_lower.reset();
      r.dim_upper.reset();
      r.notes.push_back("dimension statement needs (lambda1, lambda2)-hyperbolicity");
    }
    return r;
  }
  BoundReport r;
  r.theorem = "bilipschitz-upper/interior";
  r.assumptions.push_back({"tau_lower < ln L1", true});
  const double factor = lower_factor(bi->lnL1, bi->lnL2, t);
  r.entropy_upper = factor * h;
  if (pair) {
    require_positive(pair->lam1, "lambda1");
    require_positive(pair->lam2, "lambda2");
    r.dim_upper = (1.0 / pair->lam1 + factor / pair->lam2) * h;
  } else {
    r.notes.push_back("dimension upper bound needs (lambda1, lambda2)-hyperbolicity");
  }
  return r;
}

BoundReport exact_toral_automorphism(const SpectralProfile& p, const RateExponents& tau) {
  if (!p.is_hyperbolic || !p.lambda_s_mod || !p.lambda_u_mod)
    throw Error(ErrorCode::UnsupportedSpectrum,
                "exact toral formula needs a hyperbolic spectrum with exactly two moduli; "
                "fall back to bounds_hyperbolic_set");
  const double a = -std::log(*p.lambda_s_mod);  // ln |lambda_s|^-1
  const double b = std::log(*p.lambda_u_mod);   // ln |lambda_u|
  const double ds = p.d_s;
  if (std::fabs(ds * a - p.d_u * b) > 1e-9 * std::max(1.0, ds * a))
    throw Error(ErrorCode::UnsupportedSpectrum,
                "exact toral formula needs |det A| = 1 (d_s ln|l_s|^-1 != d_u ln|l_u|)");
  const double t = tau.tau_lower;

  if (!std::isinf(t) && near(t, a)) {
    BoundReport r = zero_report("toral-automorphism/boundary", CaseTag::BoundaryZero);
    r.dim_upper = ds;
    return r;
  }
  if (t > a) return zero_report("toral-automorphism/beyond", CaseTag::DegenerateZero);

  BoundReport r;
  r.theorem = "toral-automorphism/exact";
  r.case_tag = CaseTag::Exact;
  const double h = ds * (a * b - t * b) / (b + t);
  const double dim = ds * (a + b) / (b + t);
  r.entropy_lower = r.entropy_upper = h;
  r.dim_lower = r.dim_upper = dim;
  for (const auto& note : p.notes) r.notes.push_back(note);
  return r;
}

BoundReport bounds_hyperbolic_set(const BoundInput& in) {
  const auto& p = in.profile;
  if (!p.usable) throw Error(ErrorCode::UnsupportedSpectrum, "profile flagged unusable for bounds");
  if (!p.lnL1) throw Error(ErrorCode::MapClassMismatch, "hyperbolic sets need an invertible map");
  require_positive(p.lambda1, "lambda1");
  require_positive(p.lambda2, "lambda2");
  const double L1 = *p.lnL1, L2 = p.lnL2, h = p.h_top;
  const double t_low = in.tau.tau_lower;

  if (!std::isinf(t_low) && near(t_low, L1)) {
    BoundReport r = zero_report("hyperbolic-set/boundary", CaseTag::BoundaryZero);
    r.dim_upper = h / p.lambda1;
    return r;
  }
  if (t_low > L1) return zero_report("hyperbolic-set/beyond", CaseTag::DegenerateZero);

  BoundReport r;
  r.theorem = "hyperbolic-set";
  const double t_up = lower_tau(in);
  const bool lower_ok = t_up < p.lambda1;
  r.assumptions.push_back({"tau < ln lambda1^-1", lower_ok});
  if (lower_ok) {
    const double f = lower_factor(p.lambda1, p.lambda2, t_up, in.chi);
    r.entropy_lower = f * h;
    r.dim_lower = (1.0 / L1 + f / L2) * h;
  } else {
    r.notes.push_back("lower bounds unavailable: tau >= ln lambda1^-1");
  }
  const double g = lower_factor(L1, L2, t_low);
  r.entropy_upper = g * h;
  r.dim_upper = (1.0 / p.lambda1 + g / p.lambda2) * h;

  const bool sharp = near(L1, p.lambda1) && near(L2, p.lambda2);
  const bool same_tau = in.substitute_liminf || in.tau.tau_upper == in.tau.tau_lower;
  r.assumptions.push_back({"L1 = lambda1^-1 and L2 = lambda2^-1", sharp});
  if (sharp && same_tau && lower_ok && in.chi == 0.0) {
    r.case_tag = CaseTag::Exact;
    const double hx = lower_factor(L1, L2, t_low) * h;
    const double dx = (1.0 / L1) * (L1 + L2) / (L2 + t_low) * h;
    r.entropy_lower = r.entropy_upper = hx;
    r.dim_lower = r.dim_upper = dx;
  }
  return r;
}

BoundReport bounds_expanding(const BoundInput& in) {
  const auto& p = in.profile;
  if (!p.usable) throw Error(ErrorCode::UnsupportedSpectrum, "profile flagged unusable for bounds");
  if (!std::isinf(p.lambda1))
    throw Error(ErrorCode::UnsupportedSpectrum, "expanding maps have lambda1 = +inf");
  const double ll = p.lambda2;  // ln lambda
  const double lL = p.lnL2;     // ln L
  require_positive(ll, "ln lambda");
  require_positive(lL, "ln L");
  const double h = p.h_top;

  BoundReport r;
  r.theorem = "expanding-map";
  const double t_up = lower_tau(in);
  const double t_low = in.tau.tau_lower;
  const double lower = ratio_over(ll, t_up) * h;
  const double upper = ratio_over(lL, t_low) * h;
  r.entropy_lower = lower;
  r.entropy_upper = upper;
  r.dim_lower = lower / lL;
  r.dim_upper = upper / ll;

  const bool sharp = near(ll, lL);
  r.assumptions.push_back({"L = lambda", sharp});
  r.notes.push_back("bounds coincide only when L = lambda");
  if (std::isinf(t_low)) {
    r.case_tag = CaseTag::DegenerateZero;
  } else if (sharp && (in.substitute_liminf || in.tau.tau_upper == t_low)) {
    r.case_tag = CaseTag::Exact;
    r.entropy_lower = r.entropy_upper = ratio_over(lL, t_low) * h;
    r.dim_lower = r.dim_upper = h / (lL + t_low);
  }
  return r;
}

BoundReport exact_expanding_torus(const SpectralProfile& p, const RateExponents& tau) {
  if (!p.is_expanding)
    throw Error(ErrorCode::UnsupportedSpectrum, "expanding torus formula needs all moduli > 1");
  double H = 0.0;
  for (const auto& c : p.eigen_moduli) H += c.multiplicity * std::log(c.modulus);
  const double l1 = std::log(p.eigen_moduli.front().modulus);
  const double ld = std::log(p.eigen_moduli.back().modulus);
  const double t = tau.tau_lower;

  BoundReport r;
  r.theorem = "expanding-torus";
  if (std::isinf(t)) return zero_report("expanding-torus", CaseTag::DegenerateZero);
  if (p.eigen_moduli.size() == 1) {
    const double d = static_cast<double>(p.dim);
    r.case_tag = CaseTag::Exact;
    r.entropy_lower = r.entropy_upper = d * ld * ld / (ld + t);
    r.dim_lower = r.dim_upper = d * ld / (ld + t);
    return r;
  }
  r.entropy_lower = ratio_over(l1, t) * H;
  r.entropy_upper = ratio_over(ld, t) * H;
  r.dim_lower = *r.entropy_lower / ld;
  r.dim_upper = *r.entropy_upper / l1;
  return r;
}

BoundReport bounds_one_sided_shift(double h_top, bool mixing, const RateExponents& tau,
                                   const ShiftContext& ctx) {
  BoundReport r;
  r.theorem = "one-sided-shift";
  r.assumptions.push_back({"Ind' intersection nonempty", ctx.index_condition});
  if (std::isinf(tau.tau_lower)) return zero_report("one-sided-shift", CaseTag::DegenerateZero);
  const double up = h_top / (1.0 + tau.tau_lower);
  r.entropy_upper = r.dim_upper = up;
  if (ctx.index_condition) {
    const double lo = std::isinf(tau.tau_upper) ? 0.0 : h_top / (1.0 + tau.tau_upper);
    r.entropy_lower = r.dim_lower = lo;
    if (mixing && ctx.all_times) {
      r.case_tag = CaseTag::Exact;
      r.entropy_lower = r.dim_lower = up;
    }
  } else {
    r.notes.push_back("lower bounds unavailable: Ind' sets do not intersect (the set may be empty)");
  }
  r.assumptions.push_back({"mixing with S = N", mixing && ctx.all_times});
  return r;
}

BoundReport bounds_two_sided_shift(double h_top, bool mixing, const RateExponents& tau,
                                   const ShiftContext& ctx) {
  const double tl = tau.tau_lower;
  if (!std::isinf(tl) && near(tl, 1.0)) {
    BoundReport r = zero_report("two-sided-shift/boundary", CaseTag::BoundaryZero);
    r.dim_upper = h_top;
    return r;
  }
  if (tl > 1.0) return zero_report("two-sided-shift/beyond", CaseTag::DegenerateZero);

  BoundReport r;
  r.theorem = "two-sided-shift";
  r.entropy_upper = (1.0 - tl) / (1.0 + tl) * h_top;
  r.dim_upper = 2.0 / (1.0 + tl) * h_top;
  const double tu = tau.tau_upper;
  const bool lower_ok = tu < 1.0 && ctx.index_condition;
  r.assumptions.push_back({"tau_upper < 1", tu < 1.0});
  r.assumptions.push_back({"Ind' intersection nonempty", ctx.index_condition});
  if (lower_ok) {
    r.entropy_lower = (1.0 - tu) / (1.0 + tu) * h_top;
    r.dim_lower = 2.0 / (1.0 + tu) * h_top;
    if (mixing && ctx.all_times) {
      r.case_tag = CaseTag::Exact;
      r.entropy_lower = r.entropy_upper;
      r.dim_lower = r.dim_upper;
    }
  } else if (!ctx.index_condition) {
    r.notes.push_back("lower bounds unavailable: Ind' sets do not intersect (the set may be empty)");
  } else {
    r.notes.push_back("lower bounds unavailable: tau_upper >= 1");
  }
  r.assumptions.push_back({"mixing with S = N", mixing && ctx.all_times});
  return r;
}

namespace {

std::pair<double, bool> shift_entropy_and_mixing(const ShiftOfFiniteType& x) {
  const auto d = period_decomposition(x);  // throws Reducible
  return {sft_entropy(x), d.period == 1};
}

}  // namespace

BoundReport bounds_one_sided_shift(const ShiftOfFiniteType& x, const RateExponents& tau,
                                   const ShiftContext& ctx) {
  const auto [h, mixing] = shift_entropy_and_mixing(x);
  return bounds_one_sided_shift(h, mixing, tau, ctx);
}

BoundReport bounds_two_sided_shift(const ShiftOfFiniteType& x, const RateExponents& tau,
                                   const ShiftContext& ctx) {
  const auto [h, mixing] = shift_entropy_and_mixing(x);
  return bounds_two_sided_shift(h, mixing, tau, ctx);
}

BoundReport covering_bounds(const HyperbolicityProfile& profile, const RateFunction& phi,
                            const MapClass& map_class, std::uint32_t period) {
  BoundInput in;
  in.profile = profile;
  in.tau = tau_exponents(phi);
  in.map_class = map_class;
  in.substitute_liminf = period == 1;
  BoundReport r = lower_bounds(in);
  r.theorem = "covering-set";
  r.notes.push_back("lower bounds for the set of points whose shrinking balls are dense");
  return r;
}

AmbientDimBounds dim_upper_ambient(double h_top, const HyperClass& hyper) {
  AmbientDimBounds out;
  if (const auto* l = std::get_if<LambdaHyperbolic>(&hyper)) {
    require_positive(l->lam, "lambda");
    out.dim_bound_lambda = std::isinf(l->lam) ? 0.0 : h_top / l->lam;
  } else if (const auto* pr = std::get_if<LambdaPairHyperbolic>(&hyper)) {
    require_positive(pr->lam1, "lambda1");
    require_positive(pr->lam2, "lambda2");
    out.dim_bound_pair = (1.0 / pr->lam1 + 1.0 / pr->lam2) * h_top;
  }
  return out;
}

}  // namespace shrinktarget
