#pragma once

// Integer-matrix torus maps x -> A x mod 1 and the constants every bound
// consumes: spectral moduli, topological entropy, and hyperbolicity profiles.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shrinktarget {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

enum class MapKind { Automorphism, Endomorphism };

class IntegerMatrixSystem {
 public:
  // Throws Error(InvalidArgument) for a non-square or empty matrix and
  // Error(SingularMatrix) when det A = 0.
  static IntegerMatrixSystem create(IntMatrix entries);

  std::size_t dim() const { return entries_.size(); }
  const IntMatrix& entries() const { return entries_; }
  MapKind kind() const { return kind_; }
  // |det A| saturated to int64 range; exact for every realistic input.
  std::int64_t abs_det() const { return abs_det_; }

  IntegerMatrixSystem power(unsigned k) const;

 private:
  IntegerMatrixSystem(IntMatrix e, MapKind k, std::int64_t d)
      : entries_(std::move(e)), kind_(k), abs_det_(d) {}
  IntMatrix entries_;
  MapKind kind_;
  std::int64_t abs_det_;
};

struct ModulusCluster {
  double modulus = 0.0;
  int multiplicity = 0;
  // More than one distinct eigenvalue shares this modulus (complex pair,
  // or lambda and -lambda).
  bool shared = false;
};

struct SpectralProfile {
  std::size_t dim = 0;
  std::vector<ModulusCluster> eigen_moduli;  // ascending
  std::vector<std::complex<double>> eigenvalues;
  int d_s = 0;
  int d_u = 0;
  bool is_hyperbolic = false;
  bool is_expanding = false;
  std::optional<double> lambda_s_mod;
  std::optional<double> lambda_u_mod;
  double tol = 1e-9;
  std::vector<std::string> notes;
};

SpectralProfile analyze_matrix(const IntegerMatrixSystem& m, double tol = 1e-9);

// Sum over moduli > 1 of multiplicity * ln(modulus).
// Throws Error(UnsupportedSpectrum) unless hyperbolic or expanding.
double entropy_toral(const SpectralProfile& p);

enum class GapKind { Constant, Sublinear };

struct GapSpec {
  GapKind kind = GapKind::Constant;
  std::uint64_t p = 0;       // Constant
  std::string description;   // Sublinear: how p(n) grows
};

// Inputs shared by every bound formula. Exponents are logarithmic:
// lambda1 is the backward (contraction) exponent and may be +inf for
// non-invertible maps; lnL1 is absent for non-invertible maps. The
// specification scale is not represented: every implemented system has the
// property at every scale.
struct HyperbolicityProfile {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::optional<double> lnL1;
  double lnL2 = 0.0;
  double h_top = 0.0;
  GapSpec gap;
  bool usable = true;
  std::string origin;
  std::vector<std::string> notes;
};

// Spectral constants via high iterates. Requires a hyperbolic spectrum with
// exactly two distinct moduli, or an expanding spectrum; throws
// Error(UnsupportedSpectrum) otherwise.
HyperbolicityProfile sharp_profile_from_matrix(const IntegerMatrixSystem& m,
                                               const SpectralProfile& p);

// One-step constants: lnL2 = ln ||A||_2, lnL1 = ln ||A^-1||_2 (automorphisms
// only); exponents from the spectral extremes. Non-hyperbolic, non-expanding
// spectra give a profile flagged unusable.
HyperbolicityProfile crude_profile_from_matrix(const IntegerMatrixSystem& m, double tol = 1e-9);

// Largest and smallest singular values of A.
std::pair<double, double> singular_value_extremes(const IntMatrix& a);

}  // namespace shrinktarget
