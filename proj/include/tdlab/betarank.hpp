#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdlab/cbspace.hpp"

namespace tdlab {

/// The two-level system X = base x {0,1} with the maximum metric
/// d((y,i),(y',j)) = max(d_base(y,y'), |i-j|); the inter-level gap is
/// exactly 1, so the achievable oscillation set of the representable
/// function family is {0, 1}.
struct FlipSystem {
  CBSpace base;

  explicit FlipSystem(CBSpace b) : base(std::move(b)) {}
};

struct SystemPoint {
  PointAddress base;
  std::uint8_t level = 0;  // 0 or 1

  friend bool operator==(const SystemPoint&, const SystemPoint&) = default;
  friend auto operator<=>(const SystemPoint&, const SystemPoint&) = default;
};

Rat system_distance(const FlipSystem& sys, const SystemPoint& a, const SystemPoint& b);

/// Identity; the parity flip f(y,i) = (y,i) for even rank(y) and (y,1-i)
/// for odd; or an involutive homeomorphism swapping levels over a list of
/// pairwise disjoint clopen cones.
struct SystemFunction {
  enum class Kind { identity, parity_flip, clopen_swap };
  Kind kind = Kind::identity;
  std::vector<NeighborhoodCone> swap_cones;  // clopen_swap only

  static SystemFunction identity() { return SystemFunction{}; }
  static SystemFunction parity_flip() {
    return SystemFunction{Kind::parity_flip, {}};
  }
  static SystemFunction clopen_swap(std::vector<NeighborhoodCone> cones);
};

SystemPoint apply(const FlipSystem& sys, const SystemFunction& fn, const SystemPoint& x);

/// Symbolic subsets of the carrier closed under the eps-derivative:
/// RankFilter(t) = { (y,i) : point_rank(y) >= t }, both levels.
struct DerivativeSet {
  enum class Kind { empty, finite, rank_filter };
  Kind kind = Kind::empty;
  std::vector<SystemPoint> points;
  Ordinal threshold;

  static DerivativeSet empty_set() { return DerivativeSet{}; }
  static DerivativeSet finite(std::vector<SystemPoint> pts);
  static DerivativeSet rank_filter(Ordinal t);
  static DerivativeSet whole() { return rank_filter(Ordinal()); }

  friend bool operator==(const DerivativeSet&, const DerivativeSet&) = default;
};

std::string derivative_set_str(const DerivativeSet& s);

bool denotationally_empty(const FlipSystem& sys, const DerivativeSet& s);
bool member(const FlipSystem& sys, const DerivativeSet& s, const SystemPoint& x);

// inf over basic neighborhoods V of x of diam(fn(V)), computed exactly:
// 0 for the continuous functions, and for the parity flip 1 at points with
// rank >= 1 and 0 at isolated points.
Rat oscillation(const FlipSystem& sys, const SystemFunction& fn, const SystemPoint& x);

// Oscillation of fn restricted to A at x; requires x in A.
Rat relative_oscillation(const FlipSystem& sys, const SystemFunction& fn,
                         const SystemPoint& x, const DerivativeSet& A);

DerivativeSet eps_derivative(const FlipSystem& sys, const SystemFunction& fn,
                             const DerivativeSet& A, const Rat& eps);

// Least stage at which the iterated eps-derivative of the whole carrier
// empties; limit stages intersect symbolically.
Ordinal beta_rank_at_eps(const FlipSystem& sys, const SystemFunction& fn, const Rat& eps);

// sup over eps > 0 of beta_rank_at_eps, realized at the smallest positive
// achievable oscillation value; independence is verified over the probe grid
// eps in {1/4, 1/2, 3/4, 1}.
Ordinal beta_rank(const FlipSystem& sys, const SystemFunction& fn);

// The eps-derivative chain evaluated at stage beta (structural recursion,
// limit stages probed along the fundamental sequence).
DerivativeSet eps_stage(const FlipSystem& sys, const SystemFunction& fn, const Rat& eps,
                        const Ordinal& beta);

// A clopen level swap g agreeing with the parity flip on every sample point:
// pairwise disjoint cones are chosen around the odd-rank sample bases,
// shrunk until they exclude the even-rank ones. Duplicate base addresses are
// merged (they never conflict for the parity flip).
SystemFunction ellis_approximant(const FlipSystem& sys,
                                 const std::vector<SystemPoint>& sample);

struct StageLine {
  Ordinal stage;
  BaseSubset cb;        // CB chain of the base, lifted to the carrier
  DerivativeSet eps;    // eps-derivative chain
  bool equal = false;
  std::size_t sampled_points = 0;
  std::size_t agreements = 0;
};

struct RankTheoremReport {
  Ordinal cb;               // cb_rank of the base (= carrier CB rank)
  Ordinal beta;             // beta_rank of the parity flip
  bool rank_equal = false;
  std::vector<StageLine> stages;
  bool all_stages_equal = false;

  bool passed() const { return rank_equal && all_stages_equal; }
  // One line per stage: "stage <ord> cb=<set> eps=<set> equal=<bool>".
  std::string text() const;
};

// Asserts beta_rank(parity flip) = cb_rank(base) and stagewise equality of
// the eps- and CB-derivative chains at the probe stages, with
// sampled-membership evidence from an enumeration of the given size.
RankTheoremReport verify_rank_theorem(const FlipSystem& sys, std::uint32_t depth,
                                      std::uint32_t width);

// The probe stages used for stagewise verification: finite offsets from 0,
// from each limit milestone in the seed's CNF structure, and the final rank.
std::vector<Ordinal> probe_stages(const Ordinal& seed);

}  // namespace tdlab
