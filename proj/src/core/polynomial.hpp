#pragma once

// Exact integer/rational polynomial helpers used for spectra of integer
// matrices: characteristic polynomial, square-free decomposition and
// numerically polished roots of the square-free factors.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace shrinktarget::poly {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Coefficients in increasing degree: c[0] + c[1] x + ... + c[n] x^n.
using IntPoly = std::vector<BigInt>;
using RatPoly = std::vector<Rational>;

// det(xI - A) via Faddeev-LeVerrier; all divisions are exact.
IntPoly characteristic_polynomial(const std::vector<std::vector<std::int64_t>>& a);

// Yun's algorithm over Q. Returns monic square-free factors f_i with their
// multiplicities, product f_i^{m_i} = p / lc(p).
std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const IntPoly& p);

// Roots of a square-free polynomial. Degree <= 4 uses Aberth iteration on the
// polynomial; higher degree uses a dense eigensolver on the companion matrix.
// Both finish with Newton polishing in long double.
std::vector<std::complex<double>> roots(const RatPoly& p);

}  // namespace shrinktarget::poly
