#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "error.hpp"

namespace shrinktarget {

namespace {

void require_symbolic(const TargetSequence& z) {
  if (!z.is_symbolic())
    throw Error(ErrorCode::InvalidArgument, "shift oracles need a symbolic target");
}

double log_add(double a, double b) {
  if (a == -kInfinity) return b;
  if (b == -kInfinity) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

// Length of the longest admissible prefix of z, capped at `cap`.
std::uint64_t admissible_prefix(const ShiftOfFiniteType& x, const SymbolSequence& z,
                                std::uint64_t cap) {
  const std::uint64_t len = std::min(cap, z.length());
  const auto k = static_cast<Symbol>(x.alphabet_size());
  for (std::uint64_t i = 0; i < len; ++i) {
    const Symbol c = z.at(i);
    if (c < 0 || c >= k) return i;
    if (i > 0 && !x.allows(z.at(i - 1), c)) return i;
  }
  return len;
}

std::uint64_t target_slot(const TargetSequence& z, std::uint64_t n) {
  const std::uint64_t pre = z.preperiod();
  return n < pre ? n : pre + (n - pre) % z.period();
}

// For each text position i, the length of the longest common prefix of
// text[i..] and pat[0..plen), reported through `emit`. Linear time, memory
// O(plen): only the pattern's own Z array is stored.
template <class Pat, class Text, class Emit>
void stream_prefix_matches(Pat pat, std::uint64_t plen, Text text, std::uint64_t tlen, Emit emit) {
  std::vector<std::uint64_t> zp(plen, 0);
  if (plen > 0) zp[0] = plen;
  for (std::uint64_t i = 1, l = 0, r = 0; i < plen; ++i) {
    std::uint64_t e = 0;
    if (i < r) e = std::min(r - i, zp[i - l]);
    while (i + e < plen && pat(e) == pat(i + e)) ++e;
    zp[i] = e;
    if (i + e > r) l = i, r = i + e;
  }
  std::uint64_t l = 0, r = 0;
  for (std::uint64_t i = 0; i < tlen; ++i) {
    std::uint64_t e = 0;
    bool extend = true;
    if (i < r) {
      const std::uint64_t known = zp[i - l];
      if (known < r - i) {
        e = known;
        extend = false;
      } else {
        e = r - i;
      }
    }
    if (extend) {
      while (e < plen && i + e < tlen && text(i + e) == pat(e)) ++e;
      if (i + e > r) l = i, r = i + e;
    }
    if (!emit(i, e)) return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Covering sums

LimsupCylinderScheme::LimsupCylinderScheme(ShiftOfFiniteType x, double t, TargetSequence z)
    : shift(std::move(x)), tau(t), target(std::move(z)) {
  if (!(tau >= 0.0) || std::isinf(tau))
    throw Error(ErrorCode::InvalidArgument, "scheme rate must be finite and nonnegative");
  if (shift.sided() != Sidedness::OneSided)
    throw Error(ErrorCode::InvalidArgument, "cylinder schemes are one-sided");
  require_symbolic(target);
}

std::uint64_t LimsupCylinderScheme::match_len(std::uint64_t n) const {
  return required_exponent(tau * static_cast<double>(n)) - 1;
}

std::vector<double> log_cylinder_counts(const LimsupCylinderScheme& scheme, std::uint64_t lo,
                                        std::uint64_t hi) {
  if (lo < 1 || hi < lo) throw Error(ErrorCode::InvalidArgument, "need 1 <= lo <= hi");
  const auto& x = scheme.shift;
  const auto& m = x.transition();
  const std::size_t k = x.alphabet_size();
  std::vector<double> out;
  out.reserve(hi - lo + 1);
  std::vector<BigInt> v(k, BigInt(1)), next(k);
  for (std::uint64_t n = 1; n <= hi; ++n) {
    if (n > 1) {
      for (std::size_t b = 0; b < k; ++b) {
        next[b] = 0;
        for (std::size_t a = 0; a < k; ++a)
          if (m[a][b]) next[b] += v[a];
      }
      v.swap(next);
    }
    if (n < lo) continue;
    const std::uint64_t len = scheme.match_len(n);
    BigInt c = 0;
    if (len == 0) {
      for (const auto& e : v) c += e;
    } else {
      const auto& z = scheme.target.symbols_at(n);
      if (admissible_prefix(x, z, len) == len) {
        const auto first = static_cast<std::size_t>(z.at(0));
        for (std::size_t a = 0; a < k; ++a)
          if (m[a][first]) c += v[a];
      }
    }
    out.push_back(log_bigint(c));
  }
  return out;
}

double log_covering_sum(const LimsupCylinderScheme& scheme, double s, std::uint64_t lo,
                        std::uint64_t hi) {
  const auto logs = log_cylinder_counts(scheme, lo, hi);
  double acc = -kInfinity;
  for (std::uint64_t n = lo; n <= hi; ++n)
    acc = log_add(acc, logs[n - lo] - s * static_cast<double>(scheme.level_weight(n)));
  return acc;
}

double covering_sum(const LimsupCylinderScheme& scheme, double s, std::uint64_t lo,
                    std::uint64_t hi) {
  return std::exp(log_covering_sum(scheme, s, lo, hi));
}

std::vector<double> uniform_grid(double s_max, double step) {
  if (!(step > 0.0) || !(s_max >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "grid needs step > 0 and s_max >= 0");
  std::vector<double> g;
  const auto n = static_cast<std::uint64_t>(std::floor(s_max / step + 1e-9));
  for (std::uint64_t i = 0; i <= n; ++i) g.push_back(static_cast<double>(i) * step);
  return g;
}

CriticalBracket bracket_critical_exponent(const LimsupCylinderScheme& scheme,
                                          const std::vector<double>& s_grid,
                                          std::uint64_t depth) {
  if (depth < 4) throw Error(ErrorCode::InvalidArgument, "bracket depth must be at least 4");
  if (s_grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty s grid");
  if (!std::is_sorted(s_grid.begin(), s_grid.end()))
    throw Error(ErrorCode::InvalidArgument, "s grid must be sorted");
  const std::uint64_t lo = depth / 2, hi = depth;
  const auto logs = log_cylinder_counts(scheme, lo, hi);
  for (double v : logs)
    if (std::isinf(v))
      throw Error(ErrorCode::Infeasible, "some cylinder count is zero; target not reachable");

  CriticalBracket out;
  out.grid = s_grid;
  const double cnt = static_cast<double>(hi - lo + 1);
  double mx = 0.0;
  for (std::uint64_t n = lo; n <= hi; ++n) mx += static_cast<double>(n);
  mx /= cnt;
  std::optional<double> s_lo, s_hi;
  for (double s : s_grid) {
    double my = 0.0;
    for (std::uint64_t n = lo; n <= hi; ++n)
      my += logs[n - lo] - s * static_cast<double>(scheme.level_weight(n));
    my /= cnt;
    double sxy = 0.0, sxx = 0.0;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const double dx = static_cast<double>(n) - mx;
      const double y = logs[n - lo] - s * static_cast<double>(scheme.level_weight(n));
      sxy += dx * (y - my);
      sxx += dx * dx;
    }
    const double slope = sxy / sxx;
    out.slopes.push_back(slope);
    if (slope >= -kSlopeDeadBand) {
      s_lo = s;
    } else if (!s_hi) {
      s_hi = s;
    }
  }
  if (!s_lo || !s_hi) {
    std::string msg = "s grid does not straddle the critical exponent; slopes at the ends: ";
    msg += std::to_string(out.slopes.front()) + " .. " + std::to_string(out.slopes.back());
    throw Error(ErrorCode::Infeasible, msg);
  }
  if (*s_lo > *s_hi)
    throw Error(ErrorCode::Internal, "log-term slopes are not monotone in s");
  out.s_lo = *s_lo;
  out.s_hi = *s_hi;
  return out;
}

// ---------------------------------------------------------------------------
// Moran construction

MoranEstimate moran_dimension(const ShiftOfFiniteType& x, double tau, std::uint32_t depth,
                              double eta) {
  if (x.sided() != Sidedness::OneSided)
    throw Error(ErrorCode::InvalidArgument, "Moran estimate is for one-sided shifts");
  if (!(tau >= 0.0) || std::isinf(tau))
    throw Error(ErrorCode::InvalidArgument, "Moran estimate needs a finite tau >= 0");
  if (depth == 0) throw Error(ErrorCode::InvalidArgument, "Moran depth must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::InvalidArgument, "eta must lie in (0,1)");
  const std::uint64_t conn = mixing_gap(x) - 1;
  const auto first_free = static_cast<std::uint64_t>(std::ceil(1.0 / eta));
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;

  MoranEstimate out;
  std::uint64_t total = 0;
  double log_sum = 0.0;
  for (std::uint32_t k = 0; k < depth; ++k) {
    const double grown = std::floor(static_cast<double>(total) / eta) + 1.0;
    if (grown > static_cast<double>(kLimit) / 4)
      throw Error(ErrorCode::Infeasible, "Moran depth too large: positions exceed 2^62");
    const std::uint64_t free_len = std::max(first_free, static_cast<std::uint64_t>(grown));
    const std::uint64_t hit = total + conn + free_len + conn;
    const std::uint64_t pinned = required_exponent(tau * static_cast<double>(hit)) - 1;
    if (pinned > kLimit - hit)
      throw Error(ErrorCode::Infeasible, "Moran depth too large: positions exceed 2^62");
    MoranStage st;
    st.free_len = static_cast<double>(free_len);
    st.hit_time = static_cast<double>(hit);
    st.pinned_len = static_cast<double>(pinned);
    st.log_count = log_count_words(x, free_len);
    total = hit + pinned;
    log_sum += st.log_count;
    st.ratio = log_sum / static_cast<double>(total);
    out.stages.push_back(st);
  }
  out.value = out.stages.back().ratio;
  return out;
}

// ---------------------------------------------------------------------------
// Witness points

WitnessPlan plan_witness(const ShiftOfFiniteType& x, const RateFunction& phi,
                         const TargetSequence& z, const TimeSet& s, std::uint32_t blocks,
                         const WitnessOptions& opt) {
  require_symbolic(z);
  if (!(opt.eta > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta must be positive");
  const std::uint64_t p = mixing_gap(x);
  const RateFunction restricted = s.is_all() ? phi : restrict_rate(phi, s);
  const double tau = tau_exponents(restricted).tau_upper;
  if (std::isinf(tau))
    throw Error(ErrorCode::HypothesisViolated, "witness construction needs a finite upper exponent");
  if (x.sided() == Sidedness::TwoSided && !(tau < 1.0))
    throw Error(ErrorCode::HypothesisViolated, "two-sided witnesses need tau_upper < 1");
  for (std::uint64_t j = 0; j < z.preperiod() + z.period(); ++j)
    if (!x.admissible(z.symbols_at(j)))
      throw Error(ErrorCode::InvalidArgument,
                  "target " + z.symbols_at(j).describe() + " is not admissible");

  WitnessPlan plan;
  plan.tau_upper = tau;
  plan.eta = opt.eta;
  plan.alpha = tau + opt.eta;
  plan.beta = tau + 2.0 * opt.eta;
  const auto min_time = static_cast<std::uint64_t>(std::floor(1.0 / opt.eta)) + 1;

  std::uint64_t end = 0;  // first index after the previous pinned block
  for (std::uint32_t k = 0; k < blocks; ++k) {
    std::uint64_t min_free = 1;
    if (opt.enforce_growth && k > 0)
      min_free = static_cast<std::uint64_t>(std::floor(static_cast<double>(end) / opt.eta)) + 1;
    std::optional<std::uint64_t> cand =
        s.next_at_least(std::max(min_time, end + min_free + (p - 1)));
    bool placed = false;
    for (std::uint64_t tries = 0; cand && tries < opt.search_limit; ++tries) {
      const std::uint64_t t = *cand;
      const auto pinned = static_cast<std::uint64_t>(std::floor(plan.alpha * static_cast<double>(t))) + 1;
      const std::uint64_t req = required_exponent(phi.neg_log(t));
      if (pinned + 1 >= req) {
        if (z.symbols_at(t).length() < pinned)
          throw Error(ErrorCode::InvalidArgument,
                      "finite target word shorter than the pinned block at time " +
                          std::to_string(t));
        plan.blocks.push_back({t, t - end - (p - 1), p, pinned, req});
        end = t + pinned;
        placed = true;
        break;
      }
      cand = s.next_at_least(t + 1);
    }
    if (!placed)
      throw Error(ErrorCode::Infeasible,
                  "no admissible hit time in S for block " + std::to_string(k + 1));
  }
  plan.total_length = end;
  return plan;
}

WitnessCertificate construct_witness(const WitnessPlan& plan, const ShiftOfFiniteType& x,
                                     const RateFunction& phi, const TargetSequence& z) {
  require_symbolic(z);
  const auto& m = x.transition();
  const auto k = static_cast<Symbol>(x.alphabet_size());
  WitnessCertificate cert;
  auto& w = cert.prefix;
  w.reserve(plan.total_length);

  auto smallest_after = [&](std::optional<Symbol> prev, auto&& ok) -> std::optional<Symbol> {
    for (Symbol c = 0; c < k; ++c)
      if ((!prev || m[*prev][c]) && ok(c)) return c;
    return std::nullopt;
  };

  for (const auto& b : plan.blocks) {
    if (w.size() + b.free_len + (b.gap - 1) != b.hit_time)
      throw Error(ErrorCode::Internal, "inconsistent witness plan");
    for (std::uint64_t i = 0; i < b.free_len; ++i) {
      std::optional<Symbol> prev;
      if (!w.empty()) prev = w.back();
      const auto c = smallest_after(prev, [](Symbol) { return true; });
      if (!c) throw Error(ErrorCode::Internal, "dead end in free word");
      w.push_back(*c);
    }
    const auto& target = z.symbols_at(b.hit_time);
    const Symbol goal = target.at(0);
    // reach[j][c]: goal is reachable from c in exactly j steps.
    std::vector<std::vector<bool>> reach(b.gap + 1, std::vector<bool>(k, false));
    reach[0][goal] = true;
    for (std::uint64_t j = 1; j <= b.gap; ++j)
      for (Symbol c = 0; c < k; ++c)
        for (Symbol d = 0; d < k && !reach[j][c]; ++d)
          if (m[c][d] && reach[j - 1][d]) reach[j][c] = true;
    if (!reach[b.gap][w.back()])
      throw Error(ErrorCode::Internal, "no connector of the mixing length");
    for (std::uint64_t t = 1; t < b.gap; ++t) {
      const auto c = smallest_after(w.back(), [&](Symbol c) { return reach[b.gap - t][c]; });
      if (!c) throw Error(ErrorCode::Internal, "connector search failed");
      w.push_back(*c);
    }
    for (std::uint64_t i = 0; i < b.pinned_len; ++i) w.push_back(target.at(i));
  }

  cert.admissible = x.admissible(std::span<const Symbol>(w));
  cert.all_verified = cert.admissible;
  for (const auto& b : plan.blocks) {
    const auto& target = z.symbols_at(b.hit_time);
    std::uint64_t agree = 0;
    const std::uint64_t room = w.size() - b.hit_time;
    const std::uint64_t tlen = target.length();
    while (agree < room && agree < tlen && w[b.hit_time + agree] == target.at(agree)) ++agree;
    WitnessHit h;
    h.time = b.hit_time;
    h.achieved = agree + 1;
    h.required = required_exponent(phi.neg_log(b.hit_time));
    h.ok = h.achieved >= h.required;
    cert.all_verified = cert.all_verified && h.ok;
    cert.hits.push_back(h);
  }
  return cert;
}

std::vector<std::uint64_t> verify_witness(const SymbolSequence& x, const RateFunction& phi,
                                          const TargetSequence& z, const TimeSet& s,
                                          std::optional<std::uint64_t> horizon) {
  require_symbolic(z);
  std::uint64_t range = 0;
  if (x.is_finite()) {
    range = x.prefix.size();
  } else {
    range = horizon.value_or(std::max<std::uint64_t>(1000, 4 * (x.prefix.size() + x.cycle.size())));
  }

  // Collect the times and their required agreement lengths.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> times;
  std::uint64_t need_max = 0;
  for (auto t = s.next_at_least(0); t && *t < range; t = s.next_at_least(*t + 1)) {
    const std::uint64_t need = required_exponent(phi.neg_log(*t)) - 1;
    if (x.is_finite() && *t + need > range) continue;
    times.emplace_back(*t, need);
    need_max = std::max(need_max, need);
  }
  const std::uint64_t tlen = x.is_finite() ? range : range + need_max;

  std::vector<std::uint64_t> ok;
  const std::uint64_t slots = z.preperiod() + z.period();
  std::vector<bool> hit(times.size(), false);
  for (std::uint64_t j = 0; j < slots; ++j) {
    const auto& zj = z.symbols_at(j);
    const std::uint64_t plen = std::min(need_max, zj.length());
    std::size_t cursor = 0;
    auto advance = [&](std::uint64_t i) {
      while (cursor < times.size() && times[cursor].first < i) ++cursor;
    };
    stream_prefix_matches(
        [&](std::uint64_t i) { return zj.at(i); }, plen,
        [&](std::uint64_t i) { return x.at(i); }, tlen,
        [&](std::uint64_t i, std::uint64_t lcp) {
          advance(i);
          if (cursor == times.size()) return false;
          if (times[cursor].first == i && target_slot(z, i) == j)
            hit[cursor] = lcp >= times[cursor].second;
          return true;
        });
  }
  for (std::size_t i = 0; i < times.size(); ++i)
    if (hit[i]) ok.push_back(times[i].first);
  return ok;
}

BigInt count_separated(const ShiftOfFiniteType& x, std::uint64_t n, std::uint64_t r) {
  if (n < 1 || r < 1) throw Error(ErrorCode::InvalidArgument, "need n >= 1 and r >= 1");
  return count_words(x, n + r - 1);
}

std::string encode_word(const std::vector<Symbol>& w, std::size_t plain_limit) {
  const bool digits = std::all_of(w.begin(), w.end(), [](Symbol c) { return c >= 0 && c <= 9; });
  auto sym = [](Symbol c) { return std::to_string(c); };
  if (w.size() <= plain_limit) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!digits && i) s += ',';
      s += sym(w[i]);
    }
    return s;
  }
  std::string s;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (!s.empty()) s += ' ';
    s += sym(w[i]) + "*" + std::to_string(j - i);
    i = j;
  }
  return s;
}

}  // namespace shrinktarget
