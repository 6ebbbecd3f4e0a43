#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdlab/ordinal.hpp"
#include "tdlab/rational.hpp"

namespace tdlab {

enum class Color : std::uint8_t { none, red, green };
enum class Role : std::uint8_t { endpoint, regular, ramification };
enum class TreeMode : std::uint8_t { wazewski, twocolor };

std::string color_str(Color c);
std::string role_str(Role r);

struct TreeEdge {
  std::uint32_t u, v;
  Rat length;
};

/// A point of the geometric realization: a vertex, or an interior point of
/// an edge at fraction t in (0,1) measured from the edge's u endpoint.
struct GeometricPoint {
  bool at_vertex = true;
  std::uint32_t vertex = 0;
  std::uint32_t edge = 0;
  Rat t;

  static GeometricPoint at(std::uint32_t v) {
    GeometricPoint p;
    p.at_vertex = true;
    p.vertex = v;
    return p;
  }
  friend bool operator==(const GeometricPoint& a, const GeometricPoint& b) {
    if (a.at_vertex != b.at_vertex) return false;
    return a.at_vertex ? a.vertex == b.vertex : (a.edge == b.edge && a.t == b.t);
  }
};

std::string point_str(const GeometricPoint& p);

/// One T-copy arc of the twocolor construction: the attachment (0-end)
/// vertex, the colored marks in position order, and the free (1-end) vertex.
struct ArcRecord {
  std::uint32_t attach = 0;
  std::vector<std::uint32_t> marks;
  std::uint32_t free_end = 0;
  bool is_t1 = false;
  std::uint32_t created_stage = 0;
  std::vector<std::uint32_t> path;  // attach, marks..., free_end
};

struct Arc {
  std::vector<GeometricPoint> points;  // endpoints plus every vertex between
  Rat length;
};

struct EdgeSpan {
  std::uint32_t edge;
  Rat t0, t1;  // 0 <= t0 < t1 <= 1
};

/// A connected subtree region with rational cuts. Vertices are listed
/// explicitly; spans cover edge subsegments. A point at a vertex belongs
/// iff the vertex is listed (span ends touching a vertex do not imply it).
struct Region {
  std::vector<std::uint32_t> vertices;  // sorted
  std::vector<EdgeSpan> spans;
  std::vector<GeometricPoint> boundary;
  bool boundary_included = true;
};

struct ConvexCover {
  Rat eps;
  std::vector<Region> regions;
  std::size_t boundary_total() const {
    std::size_t n = 0;
    for (const auto& r : regions) n += r.boundary.size();
    return n;
  }
};

class TreeStage {
 public:
  TreeMode mode() const { return mode_; }
  std::uint32_t stage_index() const { return stage_index_; }
  const std::vector<std::uint32_t>& orders() const { return orders_; }
  std::uint32_t width() const { return width_; }
  std::uint32_t marks_per_block() const { return marks_per_block_; }
  bool omega_realized() const { return omega_realized_; }

  std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(color_.size()); }
  std::size_t edge_count() const { return edges_.size(); }
  const TreeEdge& edge(std::uint32_t e) const { return edges_[e]; }
  const std::vector<TreeEdge>& edges() const { return edges_; }

  Color color(std::uint32_t v) const { return color_[v]; }
  std::uint32_t degree(std::uint32_t v) const {
    return static_cast<std::uint32_t>(adj_[v].size());
  }
  Role role(std::uint32_t v) const;
  std::uint32_t created_stage(std::uint32_t v) const { return created_stage_[v]; }
  // Previous-stage vertex a new vertex collapses onto; nullopt for stage-0.
  std::optional<std::uint32_t> bonding(std::uint32_t v) const;

  struct Half {
    std::uint32_t edge;
    std::uint32_t neighbor;
  };
  const std::vector<Half>& incident(std::uint32_t v) const { return adj_[v]; }

  const std::vector<ArcRecord>& arcs() const { return arcs_; }
  const std::vector<std::uint32_t>& arcs_at(std::uint32_t v) const;

  GeometricPoint point_on_edge(std::uint32_t e, const Rat& t) const;

  Rat vertex_distance(std::uint32_t u, std::uint32_t v) const;
  Rat point_distance(const GeometricPoint& p, const GeometricPoint& q) const;
  std::vector<std::uint32_t> vertex_path(std::uint32_t u, std::uint32_t v) const;

  Rat diameter() const;
  Rat total_length() const;

  bool is_tree() const;  // connected and |E| = |V| - 1

  // --- construction surface (used by the stage builders) ---
  std::uint32_t add_vertex(Color c, std::uint32_t created_stage,
                           std::optional<std::uint32_t> bond);
  std::uint32_t add_edge(std::uint32_t u, std::uint32_t v, Rat length);
  // Splits edge e at ordered interior fractions, reusing the slot for the
  // first piece; returns the new interior vertex ids.
  std::vector<std::uint32_t> subdivide_edge(std::uint32_t e, const std::vector<Rat>& ts,
                                            Color c, std::uint32_t created_stage,
                                            std::optional<std::uint32_t> bond);
  void add_arc_record(ArcRecord rec);
  void finalize();  // roots path queries at vertex 0

  TreeMode mode_ = TreeMode::wazewski;
  std::uint32_t stage_index_ = 0;
  std::vector<std::uint32_t> orders_;
  std::uint32_t width_ = 0;
  std::uint32_t marks_per_block_ = 0;
  bool omega_realized_ = false;

 private:
  std::vector<TreeEdge> edges_;
  std::vector<Color> color_;
  std::vector<std::uint32_t> created_stage_;
  std::vector<std::int64_t> bond_;  // -1: none
  std::vector<std::vector<Half>> adj_;
  std::vector<ArcRecord> arcs_;
  std::vector<std::vector<std::uint32_t>> arcs_at_;

  // rooted at 0 after finalize()
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> parent_edge_;
  std::vector<std::uint32_t> depth_;
  std::vector<Rat> dist_to_root_;
  bool finalized_ = false;

  friend Arc arc_between(const TreeStage&, const GeometricPoint&, const GeometricPoint&);

 public:
  // endpoint of p's edge on the side toward the given target
  std::uint32_t exit_vertex(const GeometricPoint& p, const GeometricPoint& toward) const;
};

// --- builders ---

// Iterative Wazewski refinement: stage 0 is a single star of the smallest
// order in P; each step puts `width` new interior ramification vertices on
// every edge (orders cycling through P) and sprouts order-2 fresh branches
// whose diameters shrink below 2^-step. An order given as 0 stands for the
// omega marker and is realized as degree max(width, 3)+2 at desk scale.
TreeStage build_wazewski_stage(const std::vector<std::uint32_t>& orders,
                               std::uint32_t depth, std::uint32_t width);
std::vector<TreeStage> build_wazewski_chain(const std::vector<std::uint32_t>& orders,
                                            std::uint32_t depth, std::uint32_t width);

// The two-color construction truncated: X_0 is four T0 arcs joined at a red
// degree-4 center; each colored mark a of the newest arcs receives
// T(a) = T0 v T0 (red) or T1 (green). Each arc carries two blocks
// (n = 0, 1 of the (n/(n+1),(n+1)/(n+2)) pattern) with marks_per_block
// dyadic-rational marks per block.
TreeStage build_twocolor_stage(std::uint32_t depth, std::uint32_t marks_per_block);
std::vector<TreeStage> build_twocolor_chain(std::uint32_t depth,
                                            std::uint32_t marks_per_block);

// --- point/arc/region calculus ---

Arc arc_between(const TreeStage& stage, const GeometricPoint& x, const GeometricPoint& y);

std::vector<Region> components_at(const TreeStage& stage, const GeometricPoint& x);
std::uint32_t order_of(const TreeStage& stage, const GeometricPoint& x);

// C_x(y): the component of the complement of x containing y, plus x.
Region component_toward(const TreeStage& stage, const GeometricPoint& x,
                        const GeometricPoint& y);
// C_{x,y} = C_x(y) ∩ C_y(x).
Region between_region(const TreeStage& stage, const GeometricPoint& x,
                      const GeometricPoint& y);

bool region_contains(const TreeStage& stage, const Region& r, const GeometricPoint& p);
Rat region_diameter(const TreeStage& stage, const Region& r);
// Convexity probe: the whole arc [x,y] stays inside r.
bool region_contains_arc(const TreeStage& stage, const Region& r, const GeometricPoint& x,
                         const GeometricPoint& y);

// The unique common point of the three pairwise arcs.
GeometricPoint midpoint(const TreeStage& stage, const GeometricPoint& x1,
                        const GeometricPoint& x2, const GeometricPoint& x3);

// Point at the given distance from the arc's first endpoint (0 <= d <= length).
GeometricPoint point_along_arc(const TreeStage& stage, const Arc& arc, const Rat& d);

// Nearest point of [a,b] to p (the median of a, b, p).
GeometricPoint project_to_arc(const TreeStage& stage, const Arc& arc,
                              const GeometricPoint& p);

// Deterministic greedy cover: one convex star per vertex (segments of length
// min(len/2, eps/8) into each incident edge) plus edge chunks of length at
// most eps/4; single whole-tree region when eps >= 4*diam.
ConvexCover build_convex_cover(const TreeStage& stage, const Rat& eps);

// --- endpoint threads (twocolor mode) ---

/// A finite approximation of an endpoint of the inverse limit: colored mark
/// vertices with thread[i] created at stage i and bonding(thread[i+1]) =
/// thread[i] (each descent enters the subtree attached over the previous
/// mark).
struct EndpointAddress {
  std::vector<std::uint32_t> thread;
};

enum class EndpointKind : std::uint8_t { green_so_far, red_so_far, alternating, undetermined };
enum class WitnessKind : std::uint8_t { green, red, alternating };

std::string endpoint_kind_str(EndpointKind k);

bool thread_valid(const TreeStage& stage, const EndpointAddress& addr);

EndpointKind classify_endpoint(const TreeStage& stage, const EndpointAddress& addr);

// Realizes the 2^omega injection at finite depth: each bit selects between
// two candidate marks of the kind's color pattern inside the subtree
// attached over the previous mark; distinct bit strings separate at the
// first differing bit.
EndpointAddress type_witness(const TreeStage& stage, WitnessKind kind,
                             const std::string& bits);

// Colored vertices on the arc (x, y], in order from x.
std::vector<std::uint32_t> colored_vertices_along(const TreeStage& stage,
                                                  const GeometricPoint& x,
                                                  const GeometricPoint& y);

}  // namespace tdlab
