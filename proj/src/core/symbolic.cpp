#include "symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>

#include "error.hpp"
#include "polynomial.hpp"
#include "systems.hpp"

namespace shrinktarget {

namespace {

std::string components_text(const std::vector<std::vector<std::uint32_t>>& sccs) {
  std::string s;
  for (const auto& c : sccs) {
    s += "{";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
    s += "}";
  }
  return s;
}

BoolMatrix to_bool(const RealMatrix& a) {
  BoolMatrix b(a.size(), std::vector<std::uint8_t>(a.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) b[i][j] = a[i][j] > 0.0;
  return b;
}

// Largest real root of the characteristic polynomial; exact coefficients.
double perron_by_char_poly(const RealMatrix& a) {
  IntMatrix m(a.size(), std::vector<std::int64_t>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m[i][j] = std::llround(a[i][j]);
  double best = 0.0;
  for (const auto& [factor, mult] :
       poly::squarefree_decomposition(poly::characteristic_polynomial(m))) {
    (void)mult;
    for (const auto& r : poly::roots(factor))
      if (std::fabs(r.imag()) < 1e-9) best = std::max(best, r.real());
  }
  return best;
}

// Power iteration on I + A (primitive for irreducible A) with the
// Collatz-Wielandt bracket min_i (Bx)_i/x_i <= rho(B) <= max_i (Bx)_i/x_i
// as the stopping rule.
std::optional<double> perron_irreducible(const RealMatrix& a) {
  const std::size_t n = a.size();
  std::vector<double> x(n, 1.0), y(n);
  for (int it = 0; it < 200000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[i];
      for (std::size_t j = 0; j < n; ++j) s += a[i][j] * x[j];
      y[i] = s;
    }
    double lo = kInfinity, hi = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      norm = std::max(norm, y[i]);
    }
    if (hi - lo <= 1e-13 * hi) return 0.5 * (lo + hi) - 1.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
  }
  return std::nullopt;
}

std::uint64_t gcd_u(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
  const std::size_t n = a.size();
  BoolMatrix c(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l)
      if (a[i][l])
        for (std::size_t j = 0; j < n; ++j) c[i][j] |= b[l][j];
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// ShiftOfFiniteType

ShiftOfFiniteType ShiftOfFiniteType::create(BoolMatrix m, Sidedness sided) {
  const std::size_t k = m.size();
  if (k == 0) throw Error(ErrorCode::EmptyShift, "transition matrix is empty");
  bool any = false;
  for (const auto& row : m) {
    if (row.size() != k) throw Error(ErrorCode::InvalidArgument, "transition matrix is not square");
    for (auto v : row) {
      if (v > 1) throw Error(ErrorCode::InvalidArgument, "transition entries must be 0 or 1");
      any = any || v;
    }
  }
  if (!any) throw Error(ErrorCode::EmptyShift, "transition matrix is zero: the shift is empty");
  for (std::size_t i = 0; i < k; ++i) {
    bool row = false, col = false;
    for (std::size_t j = 0; j < k; ++j) {
      row = row || m[i][j];
      col = col || m[j][i];
    }
    if (!row || !col)
      throw Error(ErrorCode::InvalidArgument,
                  "symbol " + std::to_string(i) + " has no successor or no predecessor");
  }
  return ShiftOfFiniteType(std::move(m), sided);
}

bool ShiftOfFiniteType::allows(Symbol a, Symbol b) const {
  const auto k = static_cast<Symbol>(m_.size());
  if (a < 0 || b < 0 || a >= k || b >= k) return false;
  return m_[a][b] != 0;
}

bool ShiftOfFiniteType::admissible(std::span<const Symbol> word) const {
  const auto k = static_cast<Symbol>(m_.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 0 || word[i] >= k) return false;
    if (i > 0 && !m_[word[i - 1]][word[i]]) return false;
  }
  return true;
}

bool ShiftOfFiniteType::admissible(const SymbolSequence& seq) const {
  if (seq.is_finite()) return admissible(std::span<const Symbol>(seq.prefix));
  std::vector<Symbol> unrolled = seq.prefix;
  unrolled.insert(unrolled.end(), seq.cycle.begin(), seq.cycle.end());
  unrolled.push_back(seq.cycle.front());
  return admissible(std::span<const Symbol>(unrolled));
}

// ---------------------------------------------------------------------------
// SoficPresentation

SoficPresentation SoficPresentation::create(std::uint32_t states, std::vector<SoficEdge> edges,
                                            Sidedness sided) {
  if (states == 0) throw Error(ErrorCode::InvalidArgument, "presentation has no states");
  std::set<std::pair<std::uint32_t, Symbol>> seen;
  std::vector<bool> has_out(states, false);
  for (const auto& e : edges) {
    if (e.from >= states || e.to >= states)
      throw Error(ErrorCode::InvalidArgument, "edge refers to an unknown state");
    if (e.label < 0) throw Error(ErrorCode::InvalidArgument, "edge labels must be nonnegative");
    if (!seen.insert({e.from, e.label}).second)
      throw Error(ErrorCode::InvalidArgument,
                  "presentation is not right-resolving: state " + std::to_string(e.from) +
                      " has two edges labeled " + std::to_string(e.label));
    has_out[e.from] = true;
  }
  for (std::uint32_t s = 0; s < states; ++s)
    if (!has_out[s])
      throw Error(ErrorCode::InvalidArgument, "state " + std::to_string(s) + " has no outgoing edge");
  return SoficPresentation(states, std::move(edges), sided);
}

SoficPresentation SoficPresentation::from_sft(const ShiftOfFiniteType& x) {
  std::vector<SoficEdge> edges;
  const auto k = static_cast<std::uint32_t>(x.alphabet_size());
  for (std::uint32_t a = 0; a < k; ++a)
    for (std::uint32_t b = 0; b < k; ++b)
      if (x.transition()[a][b]) edges.push_back({a, b, static_cast<Symbol>(b)});
  return create(k, std::move(edges), x.sided());
}

RealMatrix SoficPresentation::adjacency() const {
  RealMatrix a(states_, std::vector<double>(states_, 0.0));
  for (const auto& e : edges_) a[e.from][e.to] += 1.0;
  return a;
}

BoolMatrix SoficPresentation::support() const { return to_bool(adjacency()); }

// ---------------------------------------------------------------------------
// Graph structure

std::vector<std::vector<std::uint32_t>> strongly_connected_components(const BoolMatrix& a) {
  const auto n = static_cast<std::uint32_t>(a.size());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> out;
  int counter = 0;

  std::function<void(std::uint32_t)> visit = [&](std::uint32_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::uint32_t w = 0; w < n; ++w) {
      if (!a[v][w]) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::uint32_t> comp;
      std::uint32_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (std::uint32_t v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  std::sort(out.begin(), out.end());
  return out;
}

double perron_root(const RealMatrix& a) {
  bool any = false;
  for (const auto& row : a)
    for (double v : row) {
      if (v < 0.0) throw Error(ErrorCode::InvalidArgument, "matrix must be nonnegative");
      any = any || v > 0.0;
    }
  if (!any) throw Error(ErrorCode::EmptyShift, "zero matrix: the shift is empty");

  double best = 0.0;
  for (const auto& comp : strongly_connected_components(to_bool(a))) {
    RealMatrix sub(comp.size(), std::vector<double>(comp.size()));
    bool has_edge = false;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (std::size_t j = 0; j < comp.size(); ++j) {
        sub[i][j] = a[comp[i]][comp[j]];
        has_edge = has_edge || sub[i][j] > 0.0;
      }
    if (!has_edge) continue;  // a transient vertex contributes root 0
    auto root = perron_irreducible(sub);
    if (!root) {
      if (sub.size() > 4)
        throw Error(ErrorCode::Internal, "power iteration did not converge");
      root = perron_by_char_poly(sub);
    }
    best = std::max(best, *root);
  }
  return best;
}

double sft_entropy(const ShiftOfFiniteType& x) {
  RealMatrix a(x.alphabet_size(), std::vector<double>(x.alphabet_size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) a[i][j] = x.transition()[i][j];
  return std::log(perron_root(a));
}

PeriodDecomposition period_decomposition(const BoolMatrix& m) {
  const auto sccs = strongly_connected_components(m);
  if (sccs.size() != 1)
    throw Error(ErrorCode::Reducible,
                "transition graph is reducible; components " + components_text(sccs));
  const std::size_t n = m.size();
  std::vector<std::int64_t> level(n, -1);
  std::queue<std::size_t> queue;
  level[0] = 0;
  queue.push(0);
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop();
    for (std::size_t w = 0; w < n; ++w)
      if (m[v][w] && level[w] < 0) {
        level[w] = level[v] + 1;
        queue.push(w);
      }
  }
  std::uint64_t g = 0;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w)
      if (m[v][w]) {
        const std::int64_t diff = level[v] + 1 - level[w];
        g = gcd_u(g, static_cast<std::uint64_t>(diff < 0 ? -diff : diff));
      }
  PeriodDecomposition out;
  out.period = static_cast<std::uint32_t>(g == 0 ? 1 : g);
  out.class_of.resize(n);
  for (std::size_t v = 0; v < n; ++v)
    out.class_of[v] = static_cast<std::uint32_t>(level[v] % out.period);
  return out;
}

PeriodDecomposition period_decomposition(const ShiftOfFiniteType& x) {
  return period_decomposition(x.transition());
}

std::uint64_t mixing_gap(const BoolMatrix& m) {
  const auto d = period_decomposition(m);
  if (d.period != 1)
    throw Error(ErrorCode::NotMixing,
                "transition matrix is not primitive (period " + std::to_string(d.period) + ")");
  const std::size_t n = m.size();
  const std::uint64_t wielandt = (n - 1) * (n - 1) + 1;
  BoolMatrix power = m;
  for (std::uint64_t p = 1; p <= wielandt; ++p) {
    bool positive = true;
    for (const auto& row : power)
      for (auto v : row) positive = positive && v;
    if (positive) return p;
    power = bool_product(power, m);
  }
  throw Error(ErrorCode::Internal, "primitive matrix exceeded the Wielandt bound");
}

std::uint64_t mixing_gap(const ShiftOfFiniteType& x) { return mixing_gap(x.transition()); }

// ---------------------------------------------------------------------------
// Index sets

IndexSet index_set(const TargetSequence& z, const TimeSet& s, const PeriodDecomposition& d) {
  const auto prog = s.eventual_progression();
  if (!prog)
    throw Error(ErrorCode::Undecidable,
                "a bounded time set has no time realized infinitely often");
  if (!z.is_symbolic() && d.period != 1)
    throw Error(ErrorCode::InvalidArgument,
                "torus targets cannot be located in cyclic classes of a shift");

  IndexSet out;
  out.period = d.period;
  const std::uint64_t N = d.period;
  const std::uint64_t cycle = std::lcm(z.period(), N);
  // Residues along the progression are periodic in k, so one full cycle of
  // progression elements past the target preperiod covers every pair that
  // occurs infinitely often.
  std::uint64_t first = prog->offset;
  if (first < z.preperiod())
    first += ((z.preperiod() - first + prog->step - 1) / prog->step) * prog->step;

  for (std::uint64_t k = 0; k < cycle; ++k) {
    const std::uint64_t t = first + k * prog->step;
    std::uint32_t cls = 0;
    if (z.is_symbolic()) {
      const Symbol a = z.symbols_at(t).at(0);
      if (a < 0 || static_cast<std::size_t>(a) >= d.class_of.size())
        throw Error(ErrorCode::InvalidArgument, "target symbol outside the alphabet");
      cls = d.class_of[a];
    }
    const auto residue = static_cast<std::uint32_t>(t % N);
    out.pairs.insert({cls, residue});
    out.diffs.insert(static_cast<std::uint32_t>((cls + N - residue) % N));
  }
  return out;
}

std::optional<std::uint32_t> indices_intersect(const std::vector<IndexSet>& sets) {
  if (sets.empty()) throw Error(ErrorCode::EmptyFamily, "empty family");
  for (const auto& s : sets)
    if (s.period != sets.front().period)
      throw Error(ErrorCode::PeriodMismatch, "index sets have different periods");
  for (std::uint32_t candidate : sets.front().diffs) {
    bool everywhere = true;
    for (const auto& s : sets) everywhere = everywhere && s.diffs.count(candidate);
    if (everywhere) return candidate;
  }
  return std::nullopt;
}

double sofic_entropy(const SoficPresentation& p) { return std::log(perron_root(p.adjacency())); }

// ---------------------------------------------------------------------------
// Word counts

std::vector<BigInt> words_ending_in(const ShiftOfFiniteType& x, std::uint64_t n) {
  const std::size_t k = x.alphabet_size();
  if (n == 0) return std::vector<BigInt>(k, BigInt(0));
  std::vector<BigInt> v(k, BigInt(1)), next(k);
  const auto& m = x.transition();
  for (std::uint64_t step = 1; step < n; ++step) {
    for (std::size_t b = 0; b < k; ++b) {
      BigInt s = 0;
      for (std::size_t a = 0; a < k; ++a)
        if (m[a][b]) s += v[a];
      next[b] = s;
    }
    std::swap(v, next);
  }
  return v;
}

BigInt count_words(const ShiftOfFiniteType& x, std::uint64_t n) {
  if (n == 0) return 1;
  BigInt total = 0;
  for (const auto& c : words_ending_in(x, n)) total += c;
  return total;
}

// GCC 11 reports a bogus overflow inside cpp_int's right shift.
#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wstringop-overflow"
#pragma GCC diagnostic ignored "-Wstringop-overread"
#endif
double log_bigint(const BigInt& c) {
  if (c <= 0) return -kInfinity;
  const unsigned bits = boost::multiprecision::msb(c);
  if (bits < 1000) return std::log(static_cast<double>(c));
  return std::log(static_cast<double>(c >> (bits - 60))) + (bits - 60) * std::log(2.0);
}
#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic pop
#endif

double log_count_words(const ShiftOfFiniteType& x, std::uint64_t n) {
  if (n <= 256) return log_bigint(count_words(x, n));
  // Rescaled repeated squaring of M applied to the exponent n - 1.
  const std::size_t k = x.alphabet_size();
  using Mat = std::vector<std::vector<double>>;
  auto mul = [k](const Mat& a, const Mat& b) {
    Mat c(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t l = 0; l < k; ++l)
        if (a[i][l] != 0.0)
          for (std::size_t j = 0; j < k; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
  };
  auto rescale = [k](Mat& a) {
    double mx = 0.0;
    for (const auto& row : a)
      for (double v : row) mx = std::max(mx, v);
    for (auto& row : a)
      for (double& v : row) v /= mx;
    return std::log(mx);
  };
  Mat base(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) base[i][j] = x.transition()[i][j];
  Mat acc(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) acc[i][i] = 1.0;
  double log_base = 0.0, log_acc = 0.0;
  std::uint64_t e = n - 1;
  while (e > 0) {
    if (e & 1) {
      acc = mul(acc, base);
      log_acc += log_base + rescale(acc);
    }
    e >>= 1;
    if (e) {
      base = mul(base, base);
      log_base = 2.0 * log_base + rescale(base);
    }
  }
  double total = 0.0;
  for (const auto& row : acc)
    for (double v : row) total += v;
  return log_acc + std::log(total);
}

}  // namespace shrinktarget
