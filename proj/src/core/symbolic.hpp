#pragma once

// Shift spaces: vertex shifts of finite type, right-resolving sofic
// presentations, Perron-Frobenius entropy, mixing gaps, cyclic period
// decomposition and the index sets Ind / Ind' of a target sequence.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rates.hpp"

namespace shrinktarget {

using BigInt = boost::multiprecision::cpp_int;
using BoolMatrix = std::vector<std::vector<std::uint8_t>>;
using RealMatrix = std::vector<std::vector<double>>;

enum class Sidedness { OneSided, TwoSided };

class ShiftOfFiniteType {
 public:
  // Throws Error(EmptyShift) for an all-zero matrix and Error(InvalidArgument)
  // for non-square input, entries outside {0,1}, or a zero row/column.
  static ShiftOfFiniteType create(BoolMatrix transition, Sidedness sided);

  std::size_t alphabet_size() const { return m_.size(); }
  const BoolMatrix& transition() const { return m_; }
  Sidedness sided() const { return sided_; }
  bool allows(Symbol a, Symbol b) const;
  bool admissible(std::span<const Symbol> word) const;
  // Infinite sequences are checked through one full cycle including the wrap.
  bool admissible(const SymbolSequence& seq) const;

 private:
  ShiftOfFiniteType(BoolMatrix m, Sidedness s) : m_(std::move(m)), sided_(s) {}
  BoolMatrix m_;
  Sidedness sided_;
};

struct SoficEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  Symbol label = 0;
};

class SoficPresentation {
 public:
  // Rejects presentations that are not right-resolving or have a state with
  // no outgoing edge.
  static SoficPresentation create(std::uint32_t states, std::vector<SoficEdge> edges,
                                  Sidedness sided);
  // The identity-labeled presentation of a vertex shift.
  static SoficPresentation from_sft(const ShiftOfFiniteType& x);

  std::uint32_t states() const { return states_; }
  const std::vector<SoficEdge>& edges() const { return edges_; }
  Sidedness sided() const { return sided_; }
  // Edge multiplicities between states.
  RealMatrix adjacency() const;
  BoolMatrix support() const;

 private:
  SoficPresentation(std::uint32_t n, std::vector<SoficEdge> e, Sidedness s)
      : states_(n), edges_(std::move(e)), sided_(s) {}
  std::uint32_t states_;
  std::vector<SoficEdge> edges_;
  Sidedness sided_;
};

struct PeriodDecomposition {
  std::uint32_t period = 1;
  std::vector<std::uint32_t> class_of;
};

struct IndexSet {
  std::uint32_t period = 1;
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::set<std::uint32_t> diffs;
};

// Spectral radius of a nonnegative matrix, maximized over its irreducible
// components. Throws Error(EmptyShift) for the zero matrix.
double perron_root(const RealMatrix& a);

std::vector<std::vector<std::uint32_t>> strongly_connected_components(const BoolMatrix& a);

double sft_entropy(const ShiftOfFiniteType& x);

// Smallest p >= 1 with M^p > 0. Throws Error(NotMixing) otherwise.
std::uint64_t mixing_gap(const ShiftOfFiniteType& x);
std::uint64_t mixing_gap(const BoolMatrix& m);

// Throws Error(Reducible) listing the strongly connected components.
PeriodDecomposition period_decomposition(const ShiftOfFiniteType& x);
PeriodDecomposition period_decomposition(const BoolMatrix& m);

// All (I1, I2) realized for infinitely many s in S: z_s lies in cyclic class
// I1 and s = I2 (mod N). Throws Error(Undecidable) for a bounded S and
// Error(InvalidArgument) for torus targets when N > 1.
IndexSet index_set(const TargetSequence& z, const TimeSet& s, const PeriodDecomposition& d);

// Least common element of the diff sets. Throws Error(PeriodMismatch).
std::optional<std::uint32_t> indices_intersect(const std::vector<IndexSet>& sets);

double sofic_entropy(const SoficPresentation& p);

// Number of admissible words of length n (sum of entries of M^(n-1)).
BigInt count_words(const ShiftOfFiniteType& x, std::uint64_t n);

// Natural log of a nonnegative big integer (-inf for 0).
double log_bigint(const BigInt& c);

// ln count_words(x, n) for arbitrarily large n, via rescaled repeated squaring.
double log_count_words(const ShiftOfFiniteType& x, std::uint64_t n);

// Number of admissible words of length n ending in each symbol.
std::vector<BigInt> words_ending_in(const ShiftOfFiniteType& x, std::uint64_t n);

}  // namespace shrinktarget
