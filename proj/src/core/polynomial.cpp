#include "polynomial.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "error.hpp"

namespace shrinktarget::poly {

namespace {

using CLD = std::complex<long double>;

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const RatPoly& p) { return static_cast<int>(p.size()) - 1; }

RatPoly make_monic(RatPoly p) {
  trim(p);
  if (p.empty()) return p;
  const Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

RatPoly derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

// Quotient and remainder of a / b (b nonzero).
std::pair<RatPoly, RatPoly> divmod(RatPoly a, const RatPoly& b) {
  trim(a);
  const int db = degree(b);
  if (degree(a) < db) return {RatPoly{}, a};
  RatPoly q(a.size() - b.size() + 1, Rational(0));
  while (!a.empty() && degree(a) >= db) {
    const int shift = degree(a) - db;
    const Rational coef = a.back() / b.back();
    q[shift] = coef;
    for (int i = 0; i <= db; ++i) a[shift + i] -= coef * b[i];
    trim(a);
  }
  trim(q);
  return {q, a};
}

RatPoly gcd(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

bool is_one(const RatPoly& p) { return p.size() == 1 && p[0] == 1; }

std::vector<long double> to_ld(const RatPoly& p) {
  std::vector<long double> out;
  out.reserve(p.size());
  for (const auto& c : p) out.push_back(static_cast<long double>(c));
  return out;
}

std::pair<CLD, CLD> eval_with_derivative(const std::vector<long double>& c, CLD z) {
  CLD v = c.back();
  CLD d = 0;
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
    d = d * z + v;
    v = v * z + c[i];
  }
  return {v, d};
}

CLD polish(const std::vector<long double>& c, CLD z) {
  for (int it = 0; it < 50; ++it) {
    auto [v, d] = eval_with_derivative(c, z);
    if (std::abs(d) == 0.0L) break;
    const CLD step = v / d;
    z -= step;
    if (std::abs(step) <= 1e-19L * std::max(1.0L, std::abs(z))) break;
  }
  return z;
}

std::vector<CLD> aberth(const std::vector<long double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  long double bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::fabs(c[i] / c[n]));
  const long double radius = 1.0L + bound;
  std::vector<CLD> z(n);
  for (int k = 0; k < n; ++k) {
    const long double angle = 2.0L * std::numbers::pi_v<long double> * k / n + 0.4L;
    z[k] = std::polar(radius, angle);
  }
  for (int it = 0; it < 1000; ++it) {
    long double worst = 0;
    for (int k = 0; k < n; ++k) {
      auto [v, d] = eval_with_derivative(c, z[k]);
      if (std::abs(v) == 0.0L) continue;
      const CLD ratio = v / d;
      CLD sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) sum += 1.0L / (z[k] - z[j]);
      const CLD w = ratio / (1.0L - ratio * sum);
      z[k] -= w;
      worst = std::max(worst, std::abs(w) / std::max(1.0L, std::abs(z[k])));
    }
    if (worst < 1e-18L) break;
  }
  return z;
}

}  // namespace

IntPoly characteristic_polynomial(const std::vector<std::vector<std::int64_t>>& a) {
  const std::size_t n = a.size();
  using Mat = std::vector<std::vector<BigInt>>;
  Mat A(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = a[i][j];

  IntPoly c(n + 1);
  c[n] = 1;
  Mat M(n, std::vector<BigInt>(n, BigInt(0)));
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    Mat next(n, std::vector<BigInt>(n, BigInt(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        BigInt s = 0;
        for (std::size_t l = 0; l < n; ++l) s += A[i][l] * M[l][j];
        next[i][j] = s;
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    M = std::move(next);
    BigInt trace = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) trace += A[i][l] * M[l][i];
    c[n - k] = -trace / static_cast<long>(k);
  }
  return c;
}

std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const IntPoly& p) {
  RatPoly a;
  for (const auto& c : p) a.emplace_back(c);
  a = make_monic(a);
  if (degree(a) < 1) return {};

  std::vector<std::pair<RatPoly, int>> out;
  RatPoly c = gcd(a, derivative(a));
  RatPoly w = divmod(a, c).first;
  int mult = 1;
  while (!is_one(c)) {
    RatPoly y = gcd(w, c);
    RatPoly z = divmod(w, y).first;
    if (degree(z) >= 1) out.emplace_back(make_monic(z), mult);
    ++mult;
    w = y;
    c = divmod(c, y).first;
  }
  if (degree(w) >= 1) out.emplace_back(make_monic(w), mult);
  return out;
}

std::vector<std::complex<double>> roots(const RatPoly& p) {
  RatPoly q = make_monic(p);
  const int n = degree(q);
  if (n < 1) return {};
  const auto c = to_ld(q);

  std::vector<CLD> raw;
  if (n == 1) {
    raw.push_back(-c[0]);
  } else if (n <= 4) {
    raw = aberth(c);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -static_cast<double>(c[i]);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorCode::Internal, "eigensolver failed on companion matrix");
    for (int i = 0; i < n; ++i) {
      const auto ev = solver.eigenvalues()[i];
      raw.emplace_back(ev.real(), ev.imag());
    }
  }

  std::vector<std::complex<double>> out;
  out.reserve(raw.size());
  for (auto z : raw) {
    z = polish(c, z);
    out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return out;
}

}  // namespace shrinktarget::poly
