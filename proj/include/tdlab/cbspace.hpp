#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tdlab/ordinal.hpp"
#include "tdlab/rational.hpp"

namespace tdlab {

struct AddressError : std::runtime_error {
  explicit AddressError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A point of S(beta), encoded by the copy indices descended from the top
/// descriptor; the address terminates at the center of the final descriptor.
struct PointAddress {
  std::vector<std::uint32_t> steps;

  friend bool operator==(const PointAddress&, const PointAddress&) = default;
  friend auto operator<=>(const PointAddress&, const PointAddress&) = default;
};

std::string address_str(const PointAddress& a);          // comma-separated
PointAddress parse_address(const std::string& text);     // "" denotes the center

/// The recursive countable compact space S(seed) embedded in [lo, hi]:
/// the center sits at lo and copy n occupies
/// [lo + (hi-lo)/(n+2), lo + (hi-lo)/(n+1)]. At descriptor beta+1 copy n is
/// S(beta); at a limit descriptor beta copy n is S(beta[n]). CB rank is
/// seed + 1.
class CBSpace {
 public:
  CBSpace(Ordinal seed, Rat lo, Rat hi);

  const Ordinal& seed() const { return seed_; }
  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }

  // Descriptor into which copy n of a point at descriptor beta descends;
  // nullopt when beta is 0 (no copies).
  std::optional<Ordinal> copy_seed(const Ordinal& beta, std::uint32_t n) const;

  bool valid(const PointAddress& a) const;
  void require_valid(const PointAddress& a) const;

 private:
  Ordinal seed_;
  Rat lo_, hi_;
};

// The space S(beta) with beta + 1 = target_rank, embedded in [0,1].
// Rejects target_rank 0 or limit: for a compact space the first empty
// derivative stage is a successor, so those ranks are unattainable.
CBSpace build_space(const Ordinal& target_rank);

Ordinal point_rank(const CBSpace& space, const PointAddress& a);

Rat embed_point(const CBSpace& space, const PointAddress& a);
Rat distance(const CBSpace& space, const PointAddress& a, const PointAddress& b);

// All valid addresses with <= depth steps, each step < width, in DFS
// preorder (the deterministic enumeration order used everywhere).
std::vector<PointAddress> enumerate_points(const CBSpace& space, std::uint32_t depth,
                                           std::uint32_t width);

/// The k-th basic clopen neighborhood of a point: the point itself together
/// with the copies of index >= k below its terminal descriptor. Its embedded
/// image is space ∩ [lo, hi] for the recorded rational interval.
struct NeighborhoodCone {
  PointAddress anchor;
  std::uint32_t min_copy;
  Rat lo, hi;       // embedded interval; lo == hi for an isolated anchor
  bool singleton;   // anchor has descriptor 0

  Rat interval_diameter() const { return hi - lo; }
  bool contains_embedded(const Rat& x) const { return lo <= x && x <= hi; }
  bool disjoint(const NeighborhoodCone& other) const {
    return hi < other.lo || other.hi < lo;
  }
};

NeighborhoodCone neighborhood_cone(const CBSpace& space, const PointAddress& a,
                                   std::uint32_t k);

bool cone_contains(const CBSpace& space, const NeighborhoodCone& cone,
                   const PointAddress& b);

/// Symbolic subsets closed under the CB derivative: Empty, a finite set of
/// addresses, or RankFilter(t) = { y : point_rank(y) >= t }.
struct BaseSubset {
  enum class Kind { empty, finite, rank_filter };
  Kind kind = Kind::empty;
  std::vector<PointAddress> points;  // finite case
  Ordinal threshold;                 // rank_filter case

  static BaseSubset empty_set() { return BaseSubset{}; }
  static BaseSubset finite(std::vector<PointAddress> pts);
  static BaseSubset rank_filter(Ordinal t);

  friend bool operator==(const BaseSubset&, const BaseSubset&) = default;
};

std::string subset_str(const BaseSubset& s);

bool denotationally_empty(const CBSpace& space, const BaseSubset& s);
bool member(const CBSpace& space, const BaseSubset& s, const PointAddress& a);

BaseSubset cb_derivative(const CBSpace& space, const BaseSubset& s);

// Least alpha with the iterated derivative empty, starting from RankFilter(0).
// Limit stages intersect symbolically (a RankFilter chain intersects to the
// RankFilter of the supremum). Equals seed + 1.
Ordinal cb_rank(const CBSpace& space);

// The derivative chain evaluated at stage beta, by structural recursion on
// beta (successor stages step once; limit stages are probed along the
// canonical fundamental sequence and intersected symbolically).
BaseSubset cb_stage(const CBSpace& space, const Ordinal& beta);

// Shared transfinite iteration: least stage at which `step` empties `start`.
// Any step that leaves the symbolic family breaks the closure invariant and
// is a hard internal error.
Ordinal least_empty_stage(const CBSpace& space, const BaseSubset& start,
                          const std::function<BaseSubset(const BaseSubset&)>& step);

}  // namespace tdlab
