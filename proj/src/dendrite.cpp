#include "tdlab/dendrite.hpp"

#include <algorithm>
#include <deque>

namespace tdlab {

namespace {

Int rat_floor(const Rat& r) {
  Int num = boost::multiprecision::numerator(r);
  Int den = boost::multiprecision::denominator(r);
  Int q = num / den;
  if (num < 0 && num % den != 0) --q;
  return q;
}

Int rat_ceil(const Rat& r) {
  Int f = rat_floor(r);
  return Rat(f) == r ? f : f + 1;
}

// Dyadic rational strictly inside (lo, hi), minimal power then minimal
// numerator. Deterministic mark placement depends on it.
Rat dyadic_between(const Rat& lo, const Rat& hi) {
  for (unsigned k = 0;; ++k) {
    Int scale = Int(1) << k;
    Int p = rat_floor(lo * Rat(scale)) + 1;
    Rat cand(p, scale);
    if (cand < hi) return cand;
  }
}

}  // namespace

std::string color_str(Color c) {
  switch (c) {
    case Color::none: return "none";
    case Color::red: return "red";
    case Color::green: return "green";
  }
  return "?";
}

std::string role_str(Role r) {
  switch (r) {
    case Role::endpoint: return "endpoint";
    case Role::regular: return "regular";
    case Role::ramification: return "ramification";
  }
  return "?";
}

std::string point_str(const GeometricPoint& p) {
  if (p.at_vertex) return "v" + std::to_string(p.vertex);
  return "e" + std::to_string(p.edge) + "@" + rat_str(p.t);
}

Role TreeStage::role(std::uint32_t v) const {
  std::uint32_t d = degree(v);
  if (d <= 1) return Role::endpoint;
  if (d == 2) return Role::regular;
  return Role::ramification;
}

std::optional<std::uint32_t> TreeStage::bonding(std::uint32_t v) const {
  if (bond_[v] < 0) return std::nullopt;
  return static_cast<std::uint32_t>(bond_[v]);
}

const std::vector<std::uint32_t>& TreeStage::arcs_at(std::uint32_t v) const {
  static const std::vector<std::uint32_t> none;
  if (v >= arcs_at_.size()) return none;
  return arcs_at_[v];
}

GeometricPoint TreeStage::point_on_edge(std::uint32_t e, const Rat& t) const {
  if (t < 0 || t > 1) throw PreconditionError("edge fraction out of range");
  if (t == 0) return GeometricPoint::at(edges_[e].u);
  if (t == 1) return GeometricPoint::at(edges_[e].v);
  GeometricPoint p;
  p.at_vertex = false;
  p.edge = e;
  p.t = t;
  return p;
}

std::uint32_t TreeStage::add_vertex(Color c, std::uint32_t created,
                                    std::optional<std::uint32_t> bond) {
  color_.push_back(c);
  created_stage_.push_back(created);
  bond_.push_back(bond ? static_cast<std::int64_t>(*bond) : -1);
  adj_.emplace_back();
  finalized_ = false;
  return static_cast<std::uint32_t>(color_.size() - 1);
}

std::uint32_t TreeStage::add_edge(std::uint32_t u, std::uint32_t v, Rat length) {
  if (length <= 0) throw PreconditionError("edge length must be positive");
  std::uint32_t e = static_cast<std::uint32_t>(edges_.size());
  edges_.push_back(TreeEdge{u, v, std::move(length)});
  adj_[u].push_back(Half{e, v});
  adj_[v].push_back(Half{e, u});
  finalized_ = false;
  return e;
}

std::vector<std::uint32_t> TreeStage::subdivide_edge(std::uint32_t e,
                                                     const std::vector<Rat>& ts, Color c,
                                                     std::uint32_t created,
                                                     std::optional<std::uint32_t> bond) {
  TreeEdge old = edges_[e];
  auto drop = [&](std::uint32_t vtx) {
    auto& lst = adj_[vtx];
    for (std::size_t i = 0; i < lst.size(); ++i)
      if (lst[i].edge == e) {
        lst.erase(lst.begin() + static_cast<std::ptrdiff_t>(i));
        return;
      }
  };
  drop(old.u);
  drop(old.v);

  std::vector<std::uint32_t> ids;
  std::uint32_t prev = old.u;
  Rat prev_t(0);
  bool first = true;
  for (const Rat& t : ts) {
    std::uint32_t nv = add_vertex(c, created, bond);
    ids.push_back(nv);
    Rat len = old.length * (t - prev_t);
    if (first) {
      edges_[e] = TreeEdge{old.u, nv, len};
      adj_[old.u].push_back(Half{e, nv});
      adj_[nv].push_back(Half{e, old.u});
      first = false;
    } else {
      add_edge(prev, nv, len);
    }
    prev = nv;
    prev_t = t;
  }
  add_edge(prev, old.v, old.length * (Rat(1) - prev_t));
  finalized_ = false;
  return ids;
}

void TreeStage::add_arc_record(ArcRecord rec) {
  if (arcs_at_.size() < color_.size()) arcs_at_.resize(color_.size());
  arcs_at_[rec.attach].push_back(static_cast<std::uint32_t>(arcs_.size()));
  arcs_.push_back(std::move(rec));
}

void TreeStage::finalize() {
  std::uint32_t n = vertex_count();
  parent_.assign(n, 0);
  parent_edge_.assign(n, 0);
  depth_.assign(n, 0);
  dist_to_root_.assign(n, Rat(0));
  if (arcs_at_.size() < n) arcs_at_.resize(n);
  std::vector<bool> seen(n, false);
  std::deque<std::uint32_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    for (const Half& h : adj_[v]) {
      if (seen[h.neighbor]) continue;
      seen[h.neighbor] = true;
      parent_[h.neighbor] = v;
      parent_edge_[h.neighbor] = h.edge;
      depth_[h.neighbor] = depth_[v] + 1;
      dist_to_root_[h.neighbor] = dist_to_root_[v] + edges_[h.edge].length;
      queue.push_back(h.neighbor);
    }
  }
  finalized_ = true;
}

bool TreeStage::is_tree() const {
  if (edges_.size() + 1 != color_.size()) return false;
  std::vector<bool> seen(vertex_count(), false);
  std::deque<std::uint32_t> queue{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    for (const Half& h : adj_[v])
      if (!seen[h.neighbor]) {
        seen[h.neighbor] = true;
        ++count;
        queue.push_back(h.neighbor);
      }
  }
  return count == vertex_count();
}

std::vector<std::uint32_t> TreeStage::vertex_path(std::uint32_t u, std::uint32_t v) const {
  std::vector<std::uint32_t> up, down;
  std::uint32_t a = u, b = v;
  while (depth_[a] > depth_[b]) {
    up.push_back(a);
    a = parent_[a];
  }
  while (depth_[b] > depth_[a]) {
    down.push_back(b);
    b = parent_[b];
  }
  while (a != b) {
    up.push_back(a);
    down.push_back(b);
    a = parent_[a];
    b = parent_[b];
  }
  up.push_back(a);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

Rat TreeStage::vertex_distance(std::uint32_t u, std::uint32_t v) const {
  std::uint32_t a = u, b = v;
  Rat d(0);
  while (depth_[a] > depth_[b]) {
    d += edges_[parent_edge_[a]].length;
    a = parent_[a];
  }
  while (depth_[b] > depth_[a]) {
    d += edges_[parent_edge_[b]].length;
    b = parent_[b];
  }
  while (a != b) {
    d += edges_[parent_edge_[a]].length;
    d += edges_[parent_edge_[b]].length;
    a = parent_[a];
    b = parent_[b];
  }
  return d;
}

Rat TreeStage::point_distance(const GeometricPoint& p, const GeometricPoint& q) const {
  if (p.at_vertex && q.at_vertex) return vertex_distance(p.vertex, q.vertex);
  if (!p.at_vertex && !q.at_vertex && p.edge == q.edge) {
    Rat d = (p.t - q.t) * edges_[p.edge].length;
    return d < 0 ? Rat(-d) : d;
  }
  if (p.at_vertex) return point_distance(q, p);
  const TreeEdge& e = edges_[p.edge];
  Rat via_u = p.t * e.length + point_distance(GeometricPoint::at(e.u), q);
  Rat via_v = (Rat(1) - p.t) * e.length + point_distance(GeometricPoint::at(e.v), q);
  return std::min(via_u, via_v);
}

Rat TreeStage::total_length() const {
  Rat sum(0);
  for (const auto& e : edges_) sum += e.length;
  return sum;
}

Rat TreeStage::diameter() const {
  auto distances_from = [&](std::uint32_t src) {
    std::vector<Rat> dist(vertex_count(), Rat(-1));
    std::deque<std::uint32_t> queue{src};
    dist[src] = Rat(0);
    while (!queue.empty()) {
      std::uint32_t v = queue.front();
      queue.pop_front();
      for (const Half& h : adj_[v])
        if (dist[h.neighbor] < 0) {
          dist[h.neighbor] = dist[v] + edges_[h.edge].length;
          queue.push_back(h.neighbor);
        }
    }
    return dist;
  };
  auto far = [&](const std::vector<Rat>& dist) {
    std::uint32_t best = 0;
    for (std::uint32_t v = 1; v < vertex_count(); ++v)
      if (dist[v] > dist[best]) best = v;
    return best;
  };
  if (vertex_count() <= 1) return Rat(0);
  auto d0 = distances_from(0);
  std::uint32_t u = far(d0);
  auto d1 = distances_from(u);
  return d1[far(d1)];
}

std::uint32_t TreeStage::exit_vertex(const GeometricPoint& p,
                                     const GeometricPoint& toward) const {
  const TreeEdge& e = edges_[p.edge];
  Rat via_u = p.t * e.length + point_distance(GeometricPoint::at(e.u), toward);
  Rat via_v = (Rat(1) - p.t) * e.length + point_distance(GeometricPoint::at(e.v), toward);
  return via_u <= via_v ? e.u : e.v;
}

Arc arc_between(const TreeStage& stage, const GeometricPoint& x, const GeometricPoint& y) {
  Arc arc;
  if (x == y) {
    arc.points = {x};
    arc.length = Rat(0);
    return arc;
  }
  if (!x.at_vertex && !y.at_vertex && x.edge == y.edge) {
    arc.points = {x, y};
    Rat d = (x.t - y.t) * stage.edge(x.edge).length;
    arc.length = d < 0 ? Rat(-d) : d;
    return arc;
  }
  std::uint32_t ex = x.at_vertex ? x.vertex : stage.exit_vertex(x, y);
  std::uint32_t ey = y.at_vertex ? y.vertex : stage.exit_vertex(y, x);
  std::vector<GeometricPoint> pts;
  if (!x.at_vertex) pts.push_back(x);
  for (std::uint32_t v : stage.vertex_path(ex, ey)) pts.push_back(GeometricPoint::at(v));
  if (!y.at_vertex) pts.push_back(y);
  arc.points = std::move(pts);
  Rat len(0);
  for (std::size_t i = 0; i + 1 < arc.points.size(); ++i)
    len += stage.point_distance(arc.points[i], arc.points[i + 1]);
  arc.length = len;
  return arc;
}

namespace {

// The single edge carrying the segment between two adjacent arc points,
// with both endpoints as fractions of that edge.
struct SegInfo {
  std::uint32_t edge;
  Rat fa, fb;
};

SegInfo seg_info(const TreeStage& stage, const GeometricPoint& a, const GeometricPoint& b) {
  if (!a.at_vertex && !b.at_vertex) return SegInfo{a.edge, a.t, b.t};
  if (!a.at_vertex) {
    const TreeEdge& e = stage.edge(a.edge);
    return SegInfo{a.edge, a.t, b.vertex == e.u ? Rat(0) : Rat(1)};
  }
  if (!b.at_vertex) {
    const TreeEdge& e = stage.edge(b.edge);
    return SegInfo{b.edge, a.vertex == e.u ? Rat(0) : Rat(1), b.t};
  }
  for (const auto& h : stage.incident(a.vertex)) {
    if (h.neighbor == b.vertex) {
      const TreeEdge& e = stage.edge(h.edge);
      return SegInfo{h.edge, a.vertex == e.u ? Rat(0) : Rat(1),
                     b.vertex == e.u ? Rat(0) : Rat(1)};
    }
  }
  throw std::logic_error("arc points are not adjacent");
}

}  // namespace

GeometricPoint point_along_arc(const TreeStage& stage, const Arc& arc, const Rat& d) {
  if (d < 0 || d > arc.length) throw PreconditionError("distance outside the arc");
  if (arc.points.size() == 1) return arc.points[0];
  Rat acc(0);
  for (std::size_t i = 0; i + 1 < arc.points.size(); ++i) {
    const auto& a = arc.points[i];
    const auto& b = arc.points[i + 1];
    Rat seg = stage.point_distance(a, b);
    if (acc + seg >= d) {
      Rat within = d - acc;
      if (within == 0) return a;
      if (within == seg) return b;
      SegInfo info = seg_info(stage, a, b);
      Rat frac = info.fa + (info.fb - info.fa) * (within / seg);
      return stage.point_on_edge(info.edge, frac);
    }
    acc += seg;
  }
  return arc.points.back();
}

GeometricPoint midpoint(const TreeStage& stage, const GeometricPoint& x1,
                        const GeometricPoint& x2, const GeometricPoint& x3) {
  Rat d12 = stage.point_distance(x1, x2);
  Rat d13 = stage.point_distance(x1, x3);
  Rat d23 = stage.point_distance(x2, x3);
  Rat along = (d12 + d13 - d23) / 2;
  Arc arc = arc_between(stage, x1, x2);
  return point_along_arc(stage, arc, along);
}

GeometricPoint project_to_arc(const TreeStage& stage, const Arc& arc,
                              const GeometricPoint& p) {
  return midpoint(stage, arc.points.front(), arc.points.back(), p);
}

namespace {

// Component of the complement of a cut, grown from a seed side. For a vertex
// cut the seed is one incident half; for an interior cut it is one endpoint
// of the split edge.
Region grow_component(const TreeStage& stage, const GeometricPoint& cut,
                      std::uint32_t seed_vertex, std::uint32_t barrier_vertex,
                      std::optional<std::uint32_t> split_edge, const Rat& split_lo,
                      const Rat& split_hi) {
  Region r;
  r.boundary = {cut};
  r.boundary_included = false;
  std::vector<std::uint32_t> stack{seed_vertex};
  std::vector<std::uint32_t> verts;
  std::vector<bool> seen(stage.vertex_count(), false);
  seen[seed_vertex] = true;
  if (!cut.at_vertex) {
    // barrier is the split edge itself
  } else {
    seen[barrier_vertex] = true;
  }
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    verts.push_back(v);
    for (const auto& h : stage.incident(v)) {
      if (split_edge && h.edge == *split_edge) continue;
      if (seen[h.neighbor]) continue;
      seen[h.neighbor] = true;
      r.spans.push_back(EdgeSpan{h.edge, Rat(0), Rat(1)});
      stack.push_back(h.neighbor);
    }
  }
  if (cut.at_vertex) {
    // the component touches the barrier through the single seed edge
    for (const auto& h : stage.incident(barrier_vertex))
      if (h.neighbor == seed_vertex) {
        r.spans.push_back(EdgeSpan{h.edge, Rat(0), Rat(1)});
        break;
      }
  } else {
    r.spans.push_back(EdgeSpan{*split_edge, split_lo, split_hi});
  }
  std::sort(verts.begin(), verts.end());
  r.vertices = std::move(verts);
  return r;
}

}  // namespace

std::vector<Region> components_at(const TreeStage& stage, const GeometricPoint& x) {
  std::vector<Region> out;
  if (x.at_vertex) {
    for (const auto& h : stage.incident(x.vertex)) {
      out.push_back(grow_component(stage, x, h.neighbor, x.vertex, std::nullopt, Rat(0),
                                   Rat(0)));
    }
  } else {
    const TreeEdge& e = stage.edge(x.edge);
    out.push_back(grow_component(stage, x, e.u, e.u, x.edge, Rat(0), x.t));
    out.push_back(grow_component(stage, x, e.v, e.v, x.edge, x.t, Rat(1)));
  }
  return out;
}

std::uint32_t order_of(const TreeStage& stage, const GeometricPoint& x) {
  return x.at_vertex ? stage.degree(x.vertex) : 2;
}

Region component_toward(const TreeStage& stage, const GeometricPoint& x,
                        const GeometricPoint& y) {
  if (x == y) throw PreconditionError("component_toward requires x != y");
  Region r;
  if (x.at_vertex) {
    std::uint32_t ey = y.at_vertex ? y.vertex : stage.exit_vertex(y, x);
    std::uint32_t next;
    if (ey == x.vertex) {
      // y is interior to an edge incident to x
      const TreeEdge& e = stage.edge(y.edge);
      next = (e.u == x.vertex) ? e.v : e.u;
    } else {
      auto path = stage.vertex_path(x.vertex, ey);
      next = path[1];
    }
    r = grow_component(stage, x, next, x.vertex, std::nullopt, Rat(0), Rat(0));
    r.vertices.insert(std::lower_bound(r.vertices.begin(), r.vertices.end(), x.vertex),
                      x.vertex);
  } else {
    const TreeEdge& e = stage.edge(x.edge);
    // which side of the cut holds y
    Rat via_u = x.t * e.length + stage.point_distance(GeometricPoint::at(e.u), y);
    Rat via_v = (Rat(1) - x.t) * e.length + stage.point_distance(GeometricPoint::at(e.v), y);
    bool u_side = via_u < via_v;
    if (!y.at_vertex && y.edge == x.edge) u_side = y.t < x.t;
    if (u_side)
      r = grow_component(stage, x, e.u, e.u, x.edge, Rat(0), x.t);
    else
      r = grow_component(stage, x, e.v, e.v, x.edge, x.t, Rat(1));
  }
  r.boundary_included = true;  // C_x(y) carries its cut point
  return r;
}

Region between_region(const TreeStage& stage, const GeometricPoint& x,
                      const GeometricPoint& y) {
  Region a = component_toward(stage, x, y);
  Region b = component_toward(stage, y, x);
  Region r;
  std::set_intersection(a.vertices.begin(), a.vertices.end(), b.vertices.begin(),
                        b.vertices.end(), std::back_inserter(r.vertices));
  // one span per edge per region, so pairwise interval overlap suffices
  for (const auto& sa : a.spans)
    for (const auto& sb : b.spans) {
      if (sa.edge != sb.edge) continue;
      Rat lo = std::max(sa.t0, sb.t0);
      Rat hi = std::min(sa.t1, sb.t1);
      if (lo < hi) r.spans.push_back(EdgeSpan{sa.edge, lo, hi});
    }
  r.boundary = {x, y};
  r.boundary_included = true;
  return r;
}

bool region_contains(const TreeStage& stage, const Region& r, const GeometricPoint& p) {
  if (!r.boundary_included)
    for (const auto& b : r.boundary)
      if (b == p) return false;
  if (p.at_vertex)
    return std::binary_search(r.vertices.begin(), r.vertices.end(), p.vertex);
  for (const auto& s : r.spans)
    if (s.edge == p.edge && s.t0 <= p.t && p.t <= s.t1) return true;
  return false;
}

Rat region_diameter(const TreeStage& stage, const Region& r) {
  std::vector<GeometricPoint> candidates;
  for (const auto& s : r.spans) {
    candidates.push_back(stage.point_on_edge(s.edge, s.t0));
    candidates.push_back(stage.point_on_edge(s.edge, s.t1));
  }
  for (const auto& b : r.boundary) candidates.push_back(b);
  if (r.spans.empty())
    for (std::uint32_t v : r.vertices) candidates.push_back(GeometricPoint::at(v));
  if (candidates.size() <= 1) return Rat(0);
  // double sweep: valid for point sets in tree metrics
  auto farthest = [&](const GeometricPoint& from) {
    std::size_t best = 0;
    Rat bd(-1);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      Rat d = stage.point_distance(from, candidates[i]);
      if (d > bd) {
        bd = d;
        best = i;
      }
    }
    return std::pair<std::size_t, Rat>{best, bd};
  };
  auto [i, d0] = farthest(candidates[0]);
  auto [j, d1] = farthest(candidates[i]);
  return d1;
}

bool region_contains_arc(const TreeStage& stage, const Region& r, const GeometricPoint& x,
                         const GeometricPoint& y) {
  if (!region_contains(stage, r, x) || !region_contains(stage, r, y)) return false;
  Arc arc = arc_between(stage, x, y);
  for (const auto& p : arc.points)
    if (!region_contains(stage, r, p)) return false;
  // interior of each traversed segment: probe the middle point
  for (std::size_t i = 0; i + 1 < arc.points.size(); ++i) {
    SegInfo info = seg_info(stage, arc.points[i], arc.points[i + 1]);
    Rat mid = (info.fa + info.fb) / 2;
    if (!region_contains(stage, r, stage.point_on_edge(info.edge, mid))) return false;
  }
  return true;
}

ConvexCover build_convex_cover(const TreeStage& stage, const Rat& eps) {
  if (eps <= 0) throw PreconditionError("eps must be positive");
  ConvexCover cover;
  cover.eps = eps;
  Rat diam = stage.diameter();
  if (eps >= Rat(4) * diam) {
    Region whole;
    for (std::uint32_t v = 0; v < stage.vertex_count(); ++v) whole.vertices.push_back(v);
    for (std::uint32_t e = 0; e < stage.edge_count(); ++e)
      whole.spans.push_back(EdgeSpan{e, Rat(0), Rat(1)});
    cover.regions.push_back(std::move(whole));
    return cover;
  }
  Rat budget = eps / 8;
  // star region around each vertex: a segment of length min(len/2, eps/8)
  // into every incident edge; convex, diameter <= eps/4
  std::vector<Rat> frac_u(stage.edge_count()), frac_v(stage.edge_count());
  for (std::uint32_t e = 0; e < stage.edge_count(); ++e) {
    const TreeEdge& ed = stage.edge(e);
    Rat s = std::min(Rat(ed.length / 2), budget);
    frac_u[e] = s / ed.length;
    frac_v[e] = Rat(1) - s / ed.length;
  }
  for (std::uint32_t v = 0; v < stage.vertex_count(); ++v) {
    Region star;
    star.vertices = {v};
    for (const auto& h : stage.incident(v)) {
      const TreeEdge& ed = stage.edge(h.edge);
      Rat cut = (ed.u == v) ? frac_u[h.edge] : frac_v[h.edge];
      if (ed.u == v)
        star.spans.push_back(EdgeSpan{h.edge, Rat(0), cut});
      else
        star.spans.push_back(EdgeSpan{h.edge, cut, Rat(1)});
      star.boundary.push_back(stage.point_on_edge(h.edge, cut));
    }
    cover.regions.push_back(std::move(star));
  }
  // chunks tile the middle of each edge with pieces of length <= eps/4
  for (std::uint32_t e = 0; e < stage.edge_count(); ++e) {
    const TreeEdge& ed = stage.edge(e);
    Rat a = frac_u[e], b = frac_v[e];
    if (!(a < b)) continue;
    Rat mid_len = (b - a) * ed.length;
    Int n = rat_ceil(mid_len / (eps / 4));
    for (Int i = 0; i < n; ++i) {
      Rat lo = a + (b - a) * Rat(i) / Rat(n);
      Rat hi = a + (b - a) * Rat(i + 1) / Rat(n);
      Region chunk;
      chunk.spans.push_back(EdgeSpan{e, lo, hi});
      chunk.boundary.push_back(stage.point_on_edge(e, lo));
      chunk.boundary.push_back(stage.point_on_edge(e, hi));
      cover.regions.push_back(std::move(chunk));
    }
  }
  return cover;
}

// --- builders ---

namespace {

std::vector<std::uint32_t> realize_orders(const std::vector<std::uint32_t>& orders,
                                          std::uint32_t width, bool& omega) {
  if (orders.empty()) throw PreconditionError("P must be nonempty");
  std::vector<std::uint32_t> realized;
  for (std::uint32_t o : orders) {
    if (o == 0) {
      omega = true;
      realized.push_back(std::max<std::uint32_t>(width, 3));
    } else if (o < 3) {
      throw PreconditionError("ramification orders must be >= 3");
    } else {
      realized.push_back(o);
    }
  }
  std::sort(realized.begin(), realized.end());
  realized.erase(std::unique(realized.begin(), realized.end()), realized.end());
  return realized;
}

}  // namespace

std::vector<TreeStage> build_wazewski_chain(const std::vector<std::uint32_t>& orders,
                                            std::uint32_t depth, std::uint32_t width) {
  bool omega = false;
  std::vector<std::uint32_t> realized = realize_orders(orders, width, omega);
  if (width == 0) throw PreconditionError("width must be >= 1");

  std::vector<TreeStage> chain;
  TreeStage stage;
  stage.mode_ = TreeMode::wazewski;
  stage.orders_ = realized;
  stage.width_ = width;
  stage.omega_realized_ = omega;

  std::uint32_t center = stage.add_vertex(Color::none, 0, std::nullopt);
  for (std::uint32_t i = 0; i < realized[0]; ++i) {
    std::uint32_t leaf = stage.add_vertex(Color::none, 0, std::nullopt);
    stage.add_edge(center, leaf, Rat(1));
  }
  stage.stage_index_ = 0;
  stage.finalize();
  chain.push_back(stage);

  for (std::uint32_t s = 1; s <= depth; ++s) {
    Rat twig_len(1, Int(1) << (2 * (s + 2)));
    std::size_t existing = stage.edge_count();
    std::vector<Rat> fractions;
    for (std::uint32_t j = 1; j <= width; ++j) fractions.push_back(Rat(j, width + 1));
    for (std::uint32_t e = 0; e < existing; ++e) {
      auto fresh = stage.subdivide_edge(e, fractions, Color::none, s, std::nullopt);
      for (std::uint32_t j = 0; j < fresh.size(); ++j) {
        std::uint32_t target_order = realized[j % realized.size()];
        for (std::uint32_t b = 0; b + 2 < target_order; ++b) {
          std::uint32_t leaf = stage.add_vertex(Color::none, s, std::nullopt);
          stage.add_edge(fresh[j], leaf, twig_len);
        }
      }
    }
    stage.stage_index_ = s;
    stage.finalize();
    chain.push_back(stage);
  }
  return chain;
}

TreeStage build_wazewski_stage(const std::vector<std::uint32_t>& orders,
                               std::uint32_t depth, std::uint32_t width) {
  return build_wazewski_chain(orders, depth, width).back();
}

namespace {

// Appends one T-copy arc of the given length at `attach`: two blocks of
// marks_per_block dyadic marks each, then the free end.
void make_arc(TreeStage& stage, std::uint32_t attach, bool is_t1, std::uint32_t created,
              const Rat& length, std::uint32_t marks_per_block,
              std::optional<std::uint32_t> bond) {
  const Rat block_bounds[3] = {Rat(0), Rat(1, 2), Rat(2, 3)};
  ArcRecord rec;
  rec.attach = attach;
  rec.is_t1 = is_t1;
  rec.created_stage = created;
  rec.path.push_back(attach);

  std::vector<std::pair<Rat, Color>> marks;
  for (int block = 0; block < 2; ++block) {
    Color c;
    if (is_t1)
      c = (block == 0) ? Color::green : Color::red;
    else
      c = (block == 0) ? Color::red : Color::green;
    Rat lo = block_bounds[block], hi = block_bounds[block + 1];
    for (std::uint32_t j = 0; j < marks_per_block; ++j) {
      Rat sub_lo = lo + (hi - lo) * Rat(j) / Rat(marks_per_block);
      Rat sub_hi = lo + (hi - lo) * Rat(j + 1) / Rat(marks_per_block);
      marks.emplace_back(dyadic_between(sub_lo, sub_hi), c);
    }
  }

  std::uint32_t prev = attach;
  Rat prev_pos(0);
  for (const auto& [pos, c] : marks) {
    std::uint32_t m = stage.add_vertex(c, created, bond);
    stage.add_edge(prev, m, length * (pos - prev_pos));
    rec.marks.push_back(m);
    rec.path.push_back(m);
    prev = m;
    prev_pos = pos;
  }
  std::uint32_t free_end = stage.add_vertex(Color::none, created, bond);
  stage.add_edge(prev, free_end, length * (Rat(1) - prev_pos));
  rec.free_end = free_end;
  rec.path.push_back(free_end);
  stage.add_arc_record(std::move(rec));
}

}  // namespace

std::vector<TreeStage> build_twocolor_chain(std::uint32_t depth,
                                            std::uint32_t marks_per_block) {
  if (marks_per_block == 0) throw PreconditionError("marks_per_block must be >= 1");
  std::vector<TreeStage> chain;
  TreeStage stage;
  stage.mode_ = TreeMode::twocolor;
  stage.marks_per_block_ = marks_per_block;

  std::uint32_t center = stage.add_vertex(Color::red, 0, std::nullopt);
  for (int i = 0; i < 4; ++i)
    make_arc(stage, center, false, 0, Rat(1), marks_per_block, std::nullopt);
  stage.stage_index_ = 0;
  stage.finalize();
  chain.push_back(stage);

  for (std::uint32_t s = 1; s <= depth; ++s) {
    Rat copy_len(1, Int(1) << (s + 1));
    std::vector<std::uint32_t> parents;
    for (std::uint32_t a = 0; a < stage.arcs().size(); ++a)
      if (stage.arcs()[a].created_stage == s - 1)
        for (std::uint32_t m : stage.arcs()[a].marks) parents.push_back(m);
    for (std::uint32_t m : parents) {
      if (stage.color(m) == Color::red) {
        make_arc(stage, m, false, s, copy_len, marks_per_block, m);
        make_arc(stage, m, false, s, copy_len, marks_per_block, m);
      } else {
        make_arc(stage, m, true, s, copy_len, marks_per_block, m);
      }
    }
    stage.stage_index_ = s;
    stage.finalize();
    chain.push_back(stage);
  }
  return chain;
}

TreeStage build_twocolor_stage(std::uint32_t depth, std::uint32_t marks_per_block) {
  return build_twocolor_chain(depth, marks_per_block).back();
}

// --- endpoint threads ---

std::string endpoint_kind_str(EndpointKind k) {
  switch (k) {
    case EndpointKind::green_so_far: return "green-so-far";
    case EndpointKind::red_so_far: return "red-so-far";
    case EndpointKind::alternating: return "alternating";
    case EndpointKind::undetermined: return "undetermined";
  }
  return "?";
}

bool thread_valid(const TreeStage& stage, const EndpointAddress& addr) {
  for (std::size_t i = 0; i < addr.thread.size(); ++i) {
    std::uint32_t v = addr.thread[i];
    if (v >= stage.vertex_count()) return false;
    if (stage.color(v) == Color::none) return false;
    if (stage.created_stage(v) != i) return false;
    if (i > 0 && stage.bonding(v) != std::optional<std::uint32_t>(addr.thread[i - 1]))
      return false;
  }
  return true;
}

std::vector<std::uint32_t> colored_vertices_along(const TreeStage& stage,
                                                  const GeometricPoint& x,
                                                  const GeometricPoint& y) {
  Arc arc = arc_between(stage, x, y);
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < arc.points.size(); ++i) {
    const auto& p = arc.points[i];
    if (p == x) continue;
    if (p.at_vertex && stage.color(p.vertex) != Color::none) out.push_back(p.vertex);
  }
  return out;
}

EndpointKind classify_endpoint(const TreeStage& stage, const EndpointAddress& addr) {
  if (stage.mode() != TreeMode::twocolor)
    throw PreconditionError("endpoint classification requires twocolor mode");
  if (!thread_valid(stage, addr))
    throw PreconditionError("thread is inconsistent with the bonding maps");
  std::size_t m = addr.thread.empty() ? 0 : addr.thread.size() - 1;
  if (m == 0) return EndpointKind::undetermined;
  if (m >= 2) {
    bool alternating = true;
    for (std::size_t i = 0; i + 1 < addr.thread.size(); ++i)
      if (stage.color(addr.thread[i]) == stage.color(addr.thread[i + 1])) {
        alternating = false;
        break;
      }
    if (alternating) return EndpointKind::alternating;
  }
  auto tail = colored_vertices_along(stage, GeometricPoint::at(addr.thread[m - 1]),
                                     GeometricPoint::at(addr.thread[m]));
  bool all_green = true, all_red = true;
  for (std::uint32_t v : tail) {
    if (stage.color(v) != Color::green) all_green = false;
    if (stage.color(v) != Color::red) all_red = false;
  }
  if (!tail.empty() && all_green) return EndpointKind::green_so_far;
  if (!tail.empty() && all_red) return EndpointKind::red_so_far;
  return EndpointKind::undetermined;
}

namespace {

std::optional<std::uint32_t> nth_mark_of_color(const TreeStage& stage, const ArcRecord& arc,
                                               Color c, std::uint32_t n) {
  std::uint32_t seen = 0;
  for (std::uint32_t m : arc.marks) {
    if (stage.color(m) == c) {
      if (seen == n) return m;
      ++seen;
    }
  }
  return std::nullopt;
}

}  // namespace

EndpointAddress type_witness(const TreeStage& stage, WitnessKind kind,
                             const std::string& bits) {
  if (stage.mode() != TreeMode::twocolor)
    throw PreconditionError("type witnesses require twocolor mode");
  for (char b : bits)
    if (b != '0' && b != '1') throw PreconditionError("bits must be over {0,1}");
  EndpointAddress addr;
  if (bits.empty()) return addr;  // the root thread

  auto pick = [&](std::uint32_t parent, Color want, bool bit,
                  std::size_t step) -> std::uint32_t {
    const auto& arc_ids = stage.arcs_at(parent);
    if (arc_ids.empty())
      throw ResolutionError("insufficient depth for a witness of length " +
                            std::to_string(bits.size()) + " at step " +
                            std::to_string(step));
    if (arc_ids.size() >= 2) {
      // two attached arcs: the bit selects the branch
      const ArcRecord& arc = stage.arcs()[arc_ids[bit ? 1 : 0]];
      auto m = nth_mark_of_color(stage, arc, want, 0);
      if (!m) throw ResolutionError("no mark of the required colour on the branch");
      return *m;
    }
    // a single attached arc: the bit selects between the first two marks
    const ArcRecord& arc = stage.arcs()[arc_ids[0]];
    auto m = nth_mark_of_color(stage, arc, want, bit ? 1 : 0);
    if (!m)
      throw ResolutionError(
          "witness needs two marks of one colour per arc; rebuild with more marks");
    return *m;
  };

  // colour of the first mark: green witnesses start green, the others red
  Color first = (kind == WitnessKind::green) ? Color::green : Color::red;
  std::uint32_t root = 0;
  std::uint32_t cur = pick(root, first, bits[0] == '1', 0);
  addr.thread.push_back(cur);
  for (std::size_t i = 1; i < bits.size(); ++i) {
    Color want;
    switch (kind) {
      case WitnessKind::green: want = Color::green; break;
      case WitnessKind::red: want = Color::red; break;
      case WitnessKind::alternating:
        want = stage.color(cur) == Color::red ? Color::green : Color::red;
        break;
    }
    cur = pick(cur, want, bits[i] == '1', i);
    addr.thread.push_back(cur);
  }
  return addr;
}

}  // namespace tdlab
