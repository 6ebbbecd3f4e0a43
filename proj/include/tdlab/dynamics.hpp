#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tdlab/dendrite.hpp"
#include "tdlab/rng.hpp"

namespace tdlab {

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Monotone map of one source arc onto one target arc, linear in arclength
/// between matched cuts. cuts are (src arclength, dst arclength) pairs,
/// strictly increasing in both coordinates, containing the endpoints.
struct ArcMapPiece {
  Arc src, dst;
  std::vector<std::pair<Rat, Rat>> cuts;
};

/// Finite-resolution certificate of a homeomorphism: matched arc pieces with
/// exact monotone interpolation. A total map defaults to the identity off
/// its pieces; a projective map evaluates off-piece points through the
/// projection onto the matched subtree (the canonical monotone extension of
/// the certificate); a plain partial map rejects off-piece points.
///
/// Structural invariants (anchored vertex pairs preserve ramification order
/// and colour; arcs map onto arcs) are audited where matched; a stage is a
/// finite approximation, so unmatched fine structure is interpolated.
class TreeHomeo {
 public:
  enum class Extension { total_identity, projective, none };

  TreeHomeo(const TreeStage& stage, std::vector<ArcMapPiece> pieces, Extension ext);

  static TreeHomeo identity(const TreeStage& stage);

  GeometricPoint eval(const GeometricPoint& p) const;
  TreeHomeo inverse() const;  // swaps every piece; defined on the matched core

  bool is_identity() const { return pieces_.empty() && ext_ == Extension::total_identity; }
  Extension extension() const { return ext_; }
  const std::vector<ArcMapPiece>& pieces() const { return pieces_; }
  const TreeStage& stage() const { return *stage_; }

  // matched vertex pairs (cut positions that land on vertices)
  std::vector<std::pair<GeometricPoint, GeometricPoint>> anchors() const;

  // a point of the map's domain suitable for sampling, from the rng
  GeometricPoint sample_domain_point(Rng& rng) const;

 private:
  const TreeStage* stage_;
  std::vector<ArcMapPiece> pieces_;
  Extension ext_;
};

// arclength position of p on the arc, if p lies on it
std::optional<Rat> position_on_arc(const TreeStage& stage, const Arc& arc,
                                   const GeometricPoint& p);

// single-edge reparametrization fixing both endpoints: interior cut pairs
// (t_src -> t_dst), strictly increasing fractions
TreeHomeo edge_reparam(const TreeStage& stage, std::uint32_t edge,
                       const std::vector<std::pair<Rat, Rat>>& interior_cuts);

// exchanges two isomorphic branches hanging at v (given by their first
// edges); an exact involutive automorphism, identity elsewhere
TreeHomeo subtree_swap(const TreeStage& stage, std::uint32_t v, std::uint32_t edge1,
                       std::uint32_t edge2);

// branches at v that are exactly isomorphic (shape, lengths, colours),
// smallest edge ids first
std::optional<std::pair<std::uint32_t, std::uint32_t>> twin_branches(
    const TreeStage& stage, std::uint32_t v);

/// Finite-image map: finitely many singleton regions (cut point -> value)
/// over a default region mapping everything else to rest_value. The
/// partition's boundary is the finite cut set.
struct FiniteImageTreeMap {
  const TreeStage* stage;
  std::vector<std::pair<GeometricPoint, GeometricPoint>> singletons;
  GeometricPoint rest_value;

  GeometricPoint eval(const GeometricPoint& p) const;
  const std::vector<std::pair<GeometricPoint, GeometricPoint>>& boundary_points() const {
    return singletons;
  }
};

// p_{a,b} (b present) or the constant map p_a (b absent); requires a != b.
FiniteImageTreeMap collapse_map(const TreeStage& stage, const GeometricPoint& a,
                                const std::optional<GeometricPoint>& b);

// {x : osc(map, x) >= eps}; the oscillation at x is the diameter of the set
// of values of regions whose closure contains x, so the result is a subset
// of the finite boundary.
std::vector<GeometricPoint> tree_eps_derivative(const TreeStage& stage,
                                                const FiniteImageTreeMap& map,
                                                const Rat& eps);

struct BetweennessResult {
  bool ok = true;
  std::uint32_t trials = 0;
  GeometricPoint x, y, z;  // first counterexample when !ok
};

BetweennessResult betweenness_preserved(const TreeHomeo& map, std::uint32_t trials,
                                        std::uint64_t seed);
BetweennessResult betweenness_preserved(const FiniteImageTreeMap& map, std::uint32_t trials,
                                        std::uint64_t seed);

// --- witness synthesis ---

// h with path_distance(h(x), h(y)) < eps, built by squeezing both points
// along their edges toward a shared vertex. At a finite stage the skeleton
// is rigid, so the supported pairs are those whose edges meet (plus pairs
// already eps-close); anything else is a resolution error.
TreeHomeo proximal_witness(const TreeStage& stage, const GeometricPoint& x,
                           const GeometricPoint& y, const Rat& eps);

// h with d(h(s), p_{a,b}(s)) < eps for every sample point: the a-side
// collapses onto a short tail [z, a] (cut points z near a and y isolating b
// from the sample), the b-side [y, b] stretches onto [z, b].
TreeHomeo pab_approx(const TreeStage& stage, std::uint32_t a, std::uint32_t b,
                     const std::vector<GeometricPoint>& sample, const Rat& eps);

struct RigidityStep {
  TreeHomeo map;
  GeometricPoint a, b;        // flanking regular points
  Rat region_diameter;        // diam C_{a,b}
  Rat witness_displacement;   // a moved point inside the support
};

// g_1..g_N, each a twin-branch swap supported inside C_{a_n,b_n} with
// diam <= 2^-n; displacements are exact and non-increasing.
std::vector<RigidityStep> rigidity_sequence(const TreeStage& stage, std::uint32_t N);

/// Back-and-forth state: matched arc pairs (I_n, J_n) with consistent
/// order/colour-preserving arc maps and the bookkeeping for the next step.
struct PartialHomeo {
  std::vector<ArcMapPiece> pieces;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> matched_rams;
  std::vector<std::uint32_t> used_E, used_F;
  std::uint32_t steps_done = 0;
  bool exhausted = false;
  std::string note;

  TreeHomeo to_homeo(const TreeStage& stage) const {
    return TreeHomeo(stage, pieces, TreeHomeo::Extension::none);
  }
};

// The Lemma's construction at stage resolution: the pinned arc map
// [e1,e2] -> [f1,f2] (ramification pairs matched by an order/colour LCS),
// then alternating backward/forward shortest-arc extensions chosen by least
// index. Exhausted candidates stop the construction with a report.
PartialHomeo back_and_forth(const TreeStage& stage, const std::vector<std::uint32_t>& E,
                            const std::vector<std::uint32_t>& F,
                            std::pair<std::uint32_t, std::uint32_t> pin1,
                            std::pair<std::uint32_t, std::uint32_t> pin2,
                            std::uint32_t steps);

// h with path_distance(h(x), y) < eps for a non-endpoint x: alternating
// endpoints e1,e2 around x and f1,f2 around a near-y target with a short
// [f1,f2], pinned back-and-forth, h extracted from the first arc map.
TreeHomeo minimal_witness(const TreeStage& stage, const GeometricPoint& x,
                          const GeometricPoint& y, const Rat& eps);

struct PabSequenceStep {
  TreeHomeo map;
  std::uint32_t a_n, b_n;  // matched ramification marks, h_n(b_n) = a_n
};

// h_n fixing the realized endpoints of two alternating threads with
// h_n(b_n) = a_n, the pairs marching along [a,b] (order 4 at even n, 3 at
// odd n); on a fixed sample the values converge to the collapse map's.
std::vector<PabSequenceStep> twocolor_pab_sequence(const TreeStage& stage,
                                                   const EndpointAddress& a,
                                                   const EndpointAddress& b,
                                                   std::uint32_t N);

struct StabOrbitProbe {
  GeometricPoint e_hat, f_hat;       // realized endpoints
  GeometricPoint color_switch;       // first red ramification on [e,f]
  Rat red_segment_length;            // distance from the switch to f
  std::vector<GeometricPoint> orbit; // orbit sample of x
  Rat min_distance_to_f;
  bool green_side_invariant = false; // every orbit point stays green-side
  std::size_t words_applied = 0;
};

// Synthesizes `generators` stabilizer homeomorphisms of {e,f} (arc
// reparametrizations and off-arc twin swaps), applies all words up to the
// given length to x, and certifies the exact colour-boundary separation.
StabOrbitProbe stab_orbit_probe(const TreeStage& stage, const EndpointAddress& e_green,
                                const EndpointAddress& f_red, const GeometricPoint& x,
                                std::uint32_t generators, std::uint32_t word_length);

struct Beta2Line {
  std::size_t map_index = 0;
  Rat eps;
  std::size_t derivative_size = 0;
  bool second_derivative_empty = false;
  std::size_t cover_boundary_total = 0;
  bool bound_holds = false;
  bool direction_witnessed = false;
};

struct Beta2Report {
  std::vector<Beta2Line> lines;
  bool passed = true;
  std::string text() const;
};

// For each map and eps: the first eps-derivative is finite, the second is
// empty, |X^1| is bounded by the cover's total boundary count, and every
// derivative point gets a boundary direction witnessing eps/2-oscillation.
Beta2Report verify_beta_le_2(const TreeStage& stage,
                             const std::vector<FiniteImageTreeMap>& maps,
                             const std::vector<Rat>& eps_grid);

}  // namespace tdlab
