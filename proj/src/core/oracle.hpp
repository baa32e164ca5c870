#pragma once

// Desk-scale checks of the exact shift formulas: Bowen-style covering sums
// over limsup cylinder schemes, finite Moran constructions and explicit
// witness points built by gluing free words to pinned target prefixes.
//
// Metric convention (one-sided): d(w, g) = exp(-k) where k >= 1 is the first
// 1-based coordinate at which w and g differ. A point x is stored 0-indexed,
// so coordinate k of sigma^n x is x[n + k - 1]. Hitting the ball of radius
// phi(n) needs agreement on the first required_exponent(-ln phi(n)) - 1
// coordinates; that count is the match length l(n) (= floor(tau n) for a pure
// exponential rate).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rates.hpp"
#include "symbolic.hpp"

namespace shrinktarget {

struct LimsupCylinderScheme {
  ShiftOfFiniteType shift;
  double tau = 0.0;
  TargetSequence target;

  LimsupCylinderScheme(ShiftOfFiniteType x, double t, TargetSequence z);

  std::uint64_t match_len(std::uint64_t n) const;
  // Diameter exponent of a level-n cylinder.
  std::uint64_t level_weight(std::uint64_t n) const { return n + match_len(n); }
};

// ln C(n) for n in [lo, hi], where C(n) counts admissible length-n words w
// such that w followed by the first l(n) target symbols is admissible.
std::vector<double> log_cylinder_counts(const LimsupCylinderScheme& scheme, std::uint64_t lo,
                                        std::uint64_t hi);

// sum_{n=lo}^{hi} C(n) exp(-s (n + l(n))), accumulated in log space.
double log_covering_sum(const LimsupCylinderScheme& scheme, double s, std::uint64_t lo,
                        std::uint64_t hi);
double covering_sum(const LimsupCylinderScheme& scheme, double s, std::uint64_t lo,
                    std::uint64_t hi);

struct CriticalBracket {
  double s_lo = 0.0;
  double s_hi = 0.0;
  std::vector<double> grid;
  std::vector<double> slopes;  // per grid value, least-squares slope of the log terms
};

inline constexpr double kSlopeDeadBand = 1e-4;

// Fits the log terms over n in [depth/2, depth]; slope >= -kSlopeDeadBand is
// read as divergent. Throws Error(Infeasible) when the grid does not straddle
// the critical exponent.
CriticalBracket bracket_critical_exponent(const LimsupCylinderScheme& scheme,
                                          const std::vector<double>& s_grid,
                                          std::uint64_t depth);

// Evenly spaced grid [0, s_max] with the given step.
std::vector<double> uniform_grid(double s_max, double step);

struct MoranStage {
  double free_len = 0.0;
  double pinned_len = 0.0;
  double hit_time = 0.0;
  double log_count = 0.0;
  double ratio = 0.0;  // cumulative ln count / cumulative length after this stage
};

struct MoranEstimate {
  double value = 0.0;
  std::vector<MoranStage> stages;
};

// Stage k: connector, free block, connector, pinned block of length l(s_k),
// with free blocks growing so that everything before is at most an eta
// fraction of them. Throws Error(NotMixing).
MoranEstimate moran_dimension(const ShiftOfFiniteType& x, double tau, std::uint32_t depth,
                              double eta = 0.05);

struct WitnessBlock {
  std::uint64_t hit_time = 0;  // s_k
  std::uint64_t free_len = 0;  // m_k
  std::uint64_t gap = 0;       // p; the connector has p - 1 symbols
  std::uint64_t pinned_len = 0;
  std::uint64_t required = 0;  // required exponent at s_k
};

struct WitnessPlan {
  std::vector<WitnessBlock> blocks;
  double tau_upper = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t total_length = 0;
};

struct WitnessOptions {
  double eta = 0.05;
  // Require each free block to dominate everything before it (M_{k-1} < eta m_k).
  bool enforce_growth = false;
  // Give up after this many candidate times per block.
  std::uint64_t search_limit = 10'000'000;
};

// Throws Error(NotMixing), Error(HypothesisViolated) for an infinite upper
// exponent (or >= 1 on a two-sided shift), Error(Infeasible) naming the block
// that S could not accommodate.
WitnessPlan plan_witness(const ShiftOfFiniteType& x, const RateFunction& phi,
                         const TargetSequence& z, const TimeSet& s, std::uint32_t blocks,
                         const WitnessOptions& opt = {});

struct WitnessHit {
  std::uint64_t time = 0;
  std::uint64_t achieved = 0;  // first disagreement index, or a lower bound for it
  std::uint64_t required = 0;
  bool ok = false;
};

struct WitnessCertificate {
  std::vector<Symbol> prefix;
  std::vector<WitnessHit> hits;
  bool admissible = false;
  bool all_verified = false;
};

WitnessCertificate construct_witness(const WitnessPlan& plan, const ShiftOfFiniteType& x,
                                     const RateFunction& phi, const TargetSequence& z);

// Times n in S with d(sigma^n x, z_n) < phi(n). A finite x is checked for
// every n whose required agreement fits inside it; an eventually periodic x up
// to `horizon`.
std::vector<std::uint64_t> verify_witness(const SymbolSequence& x, const RateFunction& phi,
                                          const TargetSequence& z, const TimeSet& s,
                                          std::optional<std::uint64_t> horizon = std::nullopt);

// Maximal (n, e^-r)-separated set size: count_words(n + r - 1).
BigInt count_separated(const ShiftOfFiniteType& x, std::uint64_t n, std::uint64_t r);

// Run-length form "a^k b^j ..." for long words, plain symbols otherwise.
std::string encode_word(const std::vector<Symbol>& w, std::size_t plain_limit);

}  // namespace shrinktarget
