#include "systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "error.hpp"
#include "polynomial.hpp"
#include "rates.hpp"

namespace shrinktarget {

IntegerMatrixSystem IntegerMatrixSystem::create(IntMatrix entries) {
  const std::size_t d = entries.size();
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "matrix is empty");
  for (const auto& row : entries)
    if (row.size() != d) throw Error(ErrorCode::InvalidArgument, "matrix is not square");

  const poly::IntPoly cp = poly::characteristic_polynomial(entries);
  poly::BigInt det = cp[0];
  if (d % 2 == 1) det = -det;
  if (det == 0) throw Error(ErrorCode::SingularMatrix, "matrix is singular (det A = 0)");
  const poly::BigInt abs_det = det < 0 ? poly::BigInt(-det) : det;
  const poly::BigInt cap = std::numeric_limits<std::int64_t>::max();
  const std::int64_t ad = abs_det > cap ? std::numeric_limits<std::int64_t>::max()
                                        : static_cast<std::int64_t>(abs_det);
  const MapKind kind = ad == 1 ? MapKind::Automorphism : MapKind::Endomorphism;
  return IntegerMatrixSystem(std::move(entries), kind, ad);
}

IntegerMatrixSystem IntegerMatrixSystem::power(unsigned k) const {
  const std::size_t d = dim();
  IntMatrix result(d, std::vector<std::int64_t>(d, 0));
  for (std::size_t i = 0; i < d; ++i) result[i][i] = 1;
  for (unsigned step = 0; step < k; ++step) {
    IntMatrix next(d, std::vector<std::int64_t>(d, 0));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = 0; l < d; ++l) next[i][j] += result[i][l] * entries_[l][j];
    result = std::move(next);
  }
  return create(std::move(result));
}

SpectralProfile analyze_matrix(const IntegerMatrixSystem& m, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  SpectralProfile out;
  out.dim = m.dim();
  out.tol = tol;

  struct Root {
    std::complex<double> value;
    int multiplicity;
  };
  std::vector<Root> all;
  const auto factors = poly::squarefree_decomposition(poly::characteristic_polynomial(m.entries()));
  for (const auto& [factor, mult] : factors)
    for (const auto& r : poly::roots(factor)) all.push_back({r, mult});

  std::sort(all.begin(), all.end(),
            [](const Root& a, const Root& b) { return std::abs(a.value) < std::abs(b.value); });
  for (const auto& r : all)
    for (int i = 0; i < r.multiplicity; ++i) out.eigenvalues.push_back(r.value);

  for (const auto& r : all) {
    const double mod = std::abs(r.value);
    if (!out.eigen_moduli.empty()) {
      auto& last = out.eigen_moduli.back();
      if (std::fabs(mod - last.modulus) <= tol * std::max(1.0, last.modulus)) {
        last.multiplicity += r.multiplicity;
        last.shared = true;
        continue;
      }
    }
    // A lone non-real root always has its conjugate in the same cluster,
    // so `shared` also marks complex pairs.
    out.eigen_moduli.push_back({mod, r.multiplicity, false});
  }

  out.is_hyperbolic = true;
  for (const auto& c : out.eigen_moduli) {
    if (std::fabs(c.modulus - 1.0) < tol) out.is_hyperbolic = false;
    if (c.modulus < 1.0 - tol) out.d_s += c.multiplicity;
    if (c.modulus > 1.0 + tol) out.d_u += c.multiplicity;
  }
  out.is_expanding = out.eigen_moduli.front().modulus > 1.0 + tol;
  if (!out.is_hyperbolic)
    out.notes.push_back("NotHyperbolic: an eigenvalue modulus lies within tol of 1");

  if (out.eigen_moduli.size() == 2 && out.is_hyperbolic && out.d_s > 0 && out.d_u > 0) {
    out.lambda_s_mod = out.eigen_moduli[0].modulus;
    out.lambda_u_mod = out.eigen_moduli[1].modulus;
  }
  for (const auto& c : out.eigen_moduli)
    if (c.shared && c.multiplicity > 1) {
      bool has_complex = false;
      for (const auto& ev : out.eigenvalues)
        if (std::fabs(std::abs(ev) - c.modulus) <= tol * std::max(1.0, c.modulus) &&
            std::fabs(ev.imag()) > tol)
          has_complex = true;
      out.notes.push_back(std::string("modulus ") + std::to_string(c.modulus) +
                          " is shared by distinct eigenvalues" +
                          (has_complex ? " (complex pair)" : ""));
    }
  return out;
}

double entropy_toral(const SpectralProfile& p) {
  if (!p.is_hyperbolic && !p.is_expanding)
    throw Error(ErrorCode::UnsupportedSpectrum,
                "entropy formula needs a hyperbolic or expanding spectrum");
  double h = 0.0;
  for (const auto& c : p.eigen_moduli)
    if (c.modulus > 1.0 + p.tol) h += c.multiplicity * std::log(c.modulus);
  return h;
}

std::pair<double, double> singular_value_extremes(const IntMatrix& a) {
  const auto d = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = static_cast<double>(a[i][j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.transpose() * m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();  // ascending
  return {std::sqrt(std::max(0.0, ev(d - 1))), std::sqrt(std::max(0.0, ev(0)))};
}

HyperbolicityProfile sharp_profile_from_matrix(const IntegerMatrixSystem& m,
                                               const SpectralProfile& p) {
  HyperbolicityProfile out;
  out.origin = "sharp";
  out.gap = {GapKind::Constant, 0, {}};
  if (p.is_expanding) {
    out.lambda1 = kInfinity;
    out.lambda2 = std::log(p.eigen_moduli.front().modulus);
    out.lnL2 = std::log(p.eigen_moduli.back().modulus);
    out.h_top = entropy_toral(p);
    return out;
  }
  if (p.is_hyperbolic && p.lambda_s_mod && p.lambda_u_mod) {
    const double contraction = -std::log(*p.lambda_s_mod);
    const double expansion = std::log(*p.lambda_u_mod);
    out.lambda1 = contraction;
    out.lambda2 = expansion;
    out.lnL1 = contraction;
    out.lnL2 = expansion;
    out.h_top = entropy_toral(p);
    if (m.kind() == MapKind::Endomorphism)
      out.notes.push_back("endomorphism with a contracting direction: not invertible on the torus");
    return out;
  }
  throw Error(ErrorCode::UnsupportedSpectrum,
              "sharp profile needs a hyperbolic spectrum with exactly two distinct moduli "
              "or an expanding spectrum; use the crude profile instead");
}

HyperbolicityProfile crude_profile_from_matrix(const IntegerMatrixSystem& m, double tol) {
  const SpectralProfile p = analyze_matrix(m, tol);
  HyperbolicityProfile out;
  out.origin = "crude";
  out.gap = {GapKind::Constant, 0, {}};
  const auto [smax, smin] = singular_value_extremes(m.entries());
  out.lnL2 = std::log(smax);
  if (m.kind() == MapKind::Automorphism) out.lnL1 = -std::log(smin);

  double h = 0.0;
  for (const auto& c : p.eigen_moduli)
    if (c.modulus > 1.0 + tol) h += c.multiplicity * std::log(c.modulus);
  out.h_top = h;

  if (p.is_expanding) {
    out.lambda1 = kInfinity;
    out.lambda2 = std::log(p.eigen_moduli.front().modulus);
  } else if (p.is_hyperbolic && p.d_s > 0 && p.d_u > 0) {
    double weakest_stable = 0.0;
    double weakest_unstable = kInfinity;
    for (const auto& c : p.eigen_moduli) {
      if (c.modulus < 1.0) weakest_stable = std::max(weakest_stable, c.modulus);
      else weakest_unstable = std::min(weakest_unstable, c.modulus);
    }
    out.lambda1 = -std::log(weakest_stable);
    out.lambda2 = std::log(weakest_unstable);
  } else {
    out.usable = false;
    out.notes.push_back("spectrum is neither hyperbolic nor expanding; profile unusable for bounds");
  }
  return out;
}

}  // namespace shrinktarget
