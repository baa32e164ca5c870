// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "oracle.hpp"

using namespace shrinktarget;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const double kLu = std::log((3.0 + std::sqrt(5.0)) / 2.0);
const double kGoldenH = std::log((1.0 + std::sqrt(5.0)) / 2.0);

ShiftOfFiniteType full2() { return ShiftOfFiniteType::create({{1, 1}, {1, 1}}, Sidedness::OneSided); }
ShiftOfFiniteType golden() { return ShiftOfFiniteType::create({{1, 1}, {1, 0}}, Sidedness::OneSided); }
TargetSequence zeros() { return TargetSequence::constant_shift(SymbolSequence::constant(0)); }

// Exact toral values for the cat map, cross-checked against the sharp
// hyperbolic-set path.
Outcome cat_map_exact() {
  const auto t0 = Clock::now();
  auto m = IntegerMatrixSystem::create({{2, 1}, {1, 1}});
  auto sp = analyze_matrix(m);
  auto sharp = sharp_profile_from_matrix(m, sp);
  bool ok = true;
  std::ostringstream d;
  struct Want {
    double tau, h, dim;
  };
  for (const Want& w : {Want{0.0, kLu, 2.0}, Want{kLu / 2, kLu / 3, 4.0 / 3.0}}) {
    auto r = exact_toral_automorphism(sp, {w.tau, w.tau, ""});
    BoundInput in;
    in.profile = sharp;
    in.tau = {w.tau, w.tau, ""};
    auto s = bounds_hyperbolic_set(in);
    const double eh = std::abs(*r.entropy_upper - w.h), ed = std::abs(*r.dim_upper - w.dim);
    const double xh = std::abs(*s.entropy_upper - w.h), xd = std::abs(*s.dim_upper - w.dim);
    ok = ok && r.case_tag == CaseTag::Exact && r.consistent() && eh < 1e-9 && ed < 1e-9 && xh < 1e-9 &&
         xd < 1e-9;
    d << "tau=" << w.tau << " h=" << *r.entropy_upper << " dim=" << *r.dim_upper << "; ";
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 1.0;
  d << fmt("%.3fs", secs);
  return {ok, d.str()};
}

Outcome doubling_exact() {
  auto sp = analyze_matrix(IntegerMatrixSystem::create({{2}}));
  const double t = std::log(2.0);
  auto r = exact_expanding_torus(sp, {t, t, ""});
  const double eh = std::abs(*r.entropy_upper - t / 2), ed = std::abs(*r.dim_upper - 0.5);
  return {r.case_tag == CaseTag::Exact && r.consistent() && eh < 1e-12 && ed < 1e-12,
          "h=" + fmt("%.15g", *r.entropy_upper) + " dim=" + fmt("%.15g", *r.dim_upper)};
}

Outcome bracket_check(const ShiftOfFiniteType& x, double tau, double expected) {
  const auto t0 = Clock::now();
  LimsupCylinderScheme s(x, tau, zeros());
  auto b = bracket_critical_exponent(s, uniform_grid(1.0, 0.01), 40);
  const double secs = seconds_since(t0);
  const bool ok = b.s_lo <= expected && expected <= b.s_hi && b.s_hi - b.s_lo <= 0.02 + 1e-12 && secs < 30.0;
  return {ok, "[" + fmt("%.4f", b.s_lo) + ", " + fmt("%.4f", b.s_hi) + "] vs " + fmt("%.6f", expected) + ", " +
                  fmt("%.3fs", secs)};
}

Outcome oracle_brackets() {
  auto a = bracket_check(full2(), 0.5, std::log(2.0) / 1.5);
  auto b = bracket_check(golden(), 0.5, kGoldenH / 1.5);
  return {a.pass && b.pass, "full 2-shift " + a.detail + "; golden mean " + b.detail};
}

Outcome moran() {
  const double target = std::log(2.0) / 1.5;
  auto est = moran_dimension(full2(), 0.5, 12);
  LimsupCylinderScheme s(full2(), 0.5, zeros());
  auto b = bracket_critical_exponent(s, uniform_grid(1.0, 0.01), 40);
  const bool ok = std::abs(est.value - target) < 0.05 && est.value <= b.s_hi + 0.02;
  return {ok, "value " + fmt("%.5f", est.value) + ", bracket top " + fmt("%.4f", b.s_hi)};
}

Outcome witness() {
  const auto t0 = Clock::now();
  auto phi = RateFunction::exponential(0.3);
  auto x = golden();
  auto plan = plan_witness(x, phi, zeros(), TimeSet::all(), 5);
  auto cert = construct_witness(plan, x, phi, zeros());
  auto found = verify_witness(SymbolSequence{cert.prefix, {}}, phi, zeros(), TimeSet::all());
  std::size_t confirmed = 0;
  for (const auto& b : plan.blocks)
    if (std::binary_search(found.begin(), found.end(), b.hit_time)) ++confirmed;
  const double secs = seconds_since(t0);
  const bool ok = cert.all_verified && cert.admissible && cert.hits.size() == 5 && confirmed == 5 && secs < 5.0;
  std::ostringstream d;
  d << "hits at";
  for (const auto& h : cert.hits) d << ' ' << h.time << '(' << h.achieved << ">=" << h.required << ')';
  d << ", confirmed " << confirmed << "/5, prefix " << cert.prefix.size() << ", " << fmt("%.3fs", secs);
  return {ok, d.str()};
}

Outcome entropy_numerics() {
  const double h = sft_entropy(golden());
  const double w = log_count_words(golden(), 60) / 60.0;
  return {std::abs(h - kGoldenH) < 1e-9 && std::abs(w - h) < 0.01,
          "h=" + fmt("%.12f", h) + " lnW(60)/60=" + fmt("%.6f", w)};
}

Outcome property_suite() {
  std::mt19937 rng(20240611u);
  std::uniform_int_distribution<int> entry(-5, 5);
  int matrices = 0;
  long rows = 0, violations = 0;
  auto mono = [&](const std::optional<double>& a, const std::optional<double>& b) {
    if (a && b && *b > *a + 1e-12) ++violations;
  };
  while (matrices < 200) {
    IntMatrix a{{entry(rng), entry(rng)}, {entry(rng), entry(rng)}};
    const long det = static_cast<long>(a[0][0]) * a[1][1] - static_cast<long>(a[0][1]) * a[1][0];
    if (det != 1 && det != -1) continue;
    auto m = IntegerMatrixSystem::create(a);
    auto sp = analyze_matrix(m);
    if (!sp.is_hyperbolic) continue;
    ++matrices;
    std::vector<HyperbolicityProfile> profiles{sharp_profile_from_matrix(m, sp)};
    auto crude = crude_profile_from_matrix(m);
    if (crude.usable) profiles.push_back(crude);
    const double lu = std::log(*sp.lambda_u_mod);
    std::vector<std::vector<BoundReport>> series(profiles.size() + 1);
    for (int i = 0; i < 10; ++i) {
      const double t = 1.3 * lu * i / 9.0;
      series[0].push_back(exact_toral_automorphism(sp, {t, t, ""}));
      for (std::size_t p = 0; p < profiles.size(); ++p) {
        BoundInput in;
        in.profile = profiles[p];
        in.tau = {t, t, ""};
        series[p + 1].push_back(bounds_hyperbolic_set(in));
      }
    }
    for (const auto& s : series)
      for (std::size_t i = 0; i < s.size(); ++i) {
        ++rows;
        if (!s[i].consistent()) ++violations;
        if (i == 0) continue;
        mono(s[i - 1].entropy_lower, s[i].entropy_lower);
        mono(s[i - 1].entropy_upper, s[i].entropy_upper);
        mono(s[i - 1].dim_lower, s[i].dim_lower);
        mono(s[i - 1].dim_upper, s[i].dim_upper);
      }
  }
  return {violations == 0, std::to_string(matrices) + " matrices, " + std::to_string(rows) + " rows, " +
                               std::to_string(violations) + " violations"};
}

Outcome case_dispatch() {
  bool ok = true;
  std::ostringstream d;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 100; ++i) {
    BoundInput in;
    in.profile.lambda1 = u(rng);
    in.profile.lambda2 = u(rng);
    const double L1 = u(rng), L2 = u(rng);
    in.profile.lnL1 = L1;
    in.profile.lnL2 = L2;
    in.profile.h_top = u(rng);
    in.map_class = BiLipschitz{L1, L2};
    in.hyper_class = LambdaPairHyperbolic{in.profile.lambda1, in.profile.lambda2};
    in.tau = {L1 + u(rng), L1 + u(rng), ""};
    auto beyond = upper_bounds(in);
    ok = ok && beyond.case_tag == CaseTag::DegenerateZero && *beyond.entropy_upper == 0.0 && *beyond.dim_upper == 0.0;
    in.tau = {L1, L1, ""};
    auto at = upper_bounds(in);
    ok = ok && at.case_tag == CaseTag::BoundaryZero && *at.entropy_upper == 0.0 &&
         *at.dim_upper == in.profile.h_top / in.profile.lambda1;
  }
  d << "100 random profiles beyond and at tau_lower = ln L1";
  return {ok, d.str()};
}

Outcome boundary_continuity() {
  auto sp = analyze_matrix(IntegerMatrixSystem::create({{2, 1}, {1, 1}}));
  const double t = kLu - 1e-8;
  auto r = exact_toral_automorphism(sp, {t, t, ""});
  return {r.case_tag == CaseTag::Exact && *r.entropy_upper < 1e-7 && *r.entropy_upper >= 0.0,
          "h(ln lambda_u - 1e-8) = " + fmt("%.3e", *r.entropy_upper)};
}

Outcome index_counterexample() {
  auto flip = ShiftOfFiniteType::create({{0, 1}, {1, 0}}, Sidedness::TwoSided);
  auto d = period_decomposition(flip);
  auto evens = TimeSet::arithmetic(0, 2);
  auto i1 = index_set(TargetSequence::constant_shift(SymbolSequence{{}, {0, 1}}), evens, d);
  auto i2 = index_set(TargetSequence::constant_shift(SymbolSequence{{}, {1, 0}}), evens, d);
  const bool sets_ok = i1.diffs == std::set<std::uint32_t>{0} && i2.diffs == std::set<std::uint32_t>{1} &&
                       !indices_intersect({i1, i2});

  auto cfg = parse_config_text(R"({
    "system": {"type": "sft", "matrix": [[0, 1], [1, 0]], "sided": "two"},
    "rates": [
      {"phi": {"kind": "exponential", "tau": 0.5}, "times": {"offset": 0, "step": 2},
       "target": {"symbols": {"cycle": [0, 1]}}},
      {"phi": {"kind": "exponential", "tau": 0.5}, "times": {"offset": 0, "step": 2},
       "target": {"symbols": {"cycle": [1, 0]}}}],
    "tasks": ["bounds", "exact"]})");
  auto rep = run(cfg);
  bool all_unavailable = true;
  std::size_t checked = 0;
  for (const auto& r : rep.rows) {
    if (r.theorem.rfind("covering-set", 0) == 0) continue;  // a different set
    ++checked;
    all_unavailable = all_unavailable && !r.report.entropy_lower && !r.report.dim_lower;
  }
  all_unavailable = all_unavailable && checked > 0;
  return {sets_ok && all_unavailable,
          "Ind' diffs {0} and {1}, intersection empty; " + std::to_string(checked) +
              " shrinking-target rows with lower bounds unavailable"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact toral automorphism (cat map)", cat_map_exact},
      {"exact expanding torus ([[2]])", doubling_exact},
      {"covering-sum brackets (one-sided shifts)", oracle_brackets},
      {"Moran lower estimate", moran},
      {"witness construction", witness},
      {"entropy numerics (golden mean)", entropy_numerics},
      {"sandwich and monotonicity property suite", property_suite},
      {"upper-bound case dispatch", case_dispatch},
      {"boundary continuity", boundary_continuity},
      {"index-set counterexample", index_counterexample}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
