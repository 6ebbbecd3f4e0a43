#include "tdlab/cbspace.hpp"

#include <algorithm>

namespace tdlab {

std::string address_str(const PointAddress& a) {
  std::string out;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(a.steps[i]);
  }
  return out;
}

PointAddress parse_address(const std::string& text) {
  PointAddress a;
  if (text.empty()) return a;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    std::string tok = text.substr(pos, next == std::string::npos ? next : next - pos);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("malformed address component '" + tok + "'", pos);
    a.steps.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return a;
}

CBSpace::CBSpace(Ordinal seed, Rat lo, Rat hi)
    : seed_(std::move(seed)), lo_(std::move(lo)), hi_(std::move(hi)) {
  if (!(lo_ < hi_)) throw PreconditionError("embedding interval requires lo < hi");
}

std::optional<Ordinal> CBSpace::copy_seed(const Ordinal& beta, std::uint32_t n) const {
  if (beta.is_zero()) return std::nullopt;
  if (is_successor(beta)) return predecessor(beta);
  return fundamental_sequence(beta, n);
}

bool CBSpace::valid(const PointAddress& a) const {
  Ordinal cur = seed_;
  for (std::uint32_t n : a.steps) {
    auto child = copy_seed(cur, n);
    if (!child) return false;
    cur = *child;
  }
  return true;
}

void CBSpace::require_valid(const PointAddress& a) const {
  if (!valid(a))
    throw AddressError("address [" + address_str(a) + "] descends into an isolated point");
}

CBSpace build_space(const Ordinal& target_rank) {
  if (target_rank.is_zero() || is_limit(target_rank))
    throw PreconditionError(
        "target rank must be a successor ordinal: nested nonempty compact derivative "
        "sets have nonempty intersection, so the first empty stage of a compact space "
        "is a successor");
  return CBSpace(predecessor(target_rank), Rat(0), Rat(1));
}

Ordinal point_rank(const CBSpace& space, const PointAddress& a) {
  Ordinal cur = space.seed();
  for (std::uint32_t n : a.steps) {
    auto child = space.copy_seed(cur, n);
    if (!child)
      throw AddressError("address [" + address_str(a) + "] descends into an isolated point");
    cur = *child;
  }
  return cur;
}

namespace {

// Walks the descriptor chain, tracking the embedding interval.
struct Descent {
  Ordinal descriptor;
  Rat lo, hi;
};

Descent descend(const CBSpace& space, const PointAddress& a) {
  Descent d{space.seed(), space.lo(), space.hi()};
  for (std::uint32_t n : a.steps) {
    auto child = space.copy_seed(d.descriptor, n);
    if (!child)
      throw AddressError("address [" + address_str(a) + "] descends into an isolated point");
    Rat len = d.hi - d.lo;
    Rat new_lo = d.lo + len / Rat(n + 2);
    Rat new_hi = d.lo + len / Rat(n + 1);
    d = Descent{*child, new_lo, new_hi};
  }
  return d;
}

}  // namespace

Rat embed_point(const CBSpace& space, const PointAddress& a) {
  return descend(space, a).lo;
}

Rat distance(const CBSpace& space, const PointAddress& a, const PointAddress& b) {
  Rat d = embed_point(space, a) - embed_point(space, b);
  return d < 0 ? Rat(-d) : d;
}

namespace {

void enumerate_rec(const CBSpace& space, const Ordinal& descriptor, PointAddress& prefix,
                   std::uint32_t depth, std::uint32_t width,
                   std::vector<PointAddress>& out) {
  out.push_back(prefix);
  if (depth == 0 || descriptor.is_zero()) return;
  for (std::uint32_t n = 0; n < width; ++n) {
    auto child = space.copy_seed(descriptor, n);
    prefix.steps.push_back(n);
    enumerate_rec(space, *child, prefix, depth - 1, width, out);
    prefix.steps.pop_back();
  }
}

}  // namespace

std::vector<PointAddress> enumerate_points(const CBSpace& space, std::uint32_t depth,
                                           std::uint32_t width) {
  std::vector<PointAddress> out;
  PointAddress prefix;
  enumerate_rec(space, space.seed(), prefix, depth, width, out);
  return out;
}

NeighborhoodCone neighborhood_cone(const CBSpace& space, const PointAddress& a,
                                   std::uint32_t k) {
  Descent d = descend(space, a);
  NeighborhoodCone cone;
  cone.anchor = a;
  cone.min_copy = k;
  if (d.descriptor.is_zero()) {
    cone.lo = cone.hi = d.lo;
    cone.singleton = true;
    return cone;
  }
  cone.lo = d.lo;
  cone.hi = d.lo + (d.hi - d.lo) / Rat(k + 1);
  cone.singleton = false;
  return cone;
}

bool cone_contains(const CBSpace& space, const NeighborhoodCone& cone,
                   const PointAddress& b) {
  // The cone interval meets the space exactly in {anchor} ∪ (copies >= k),
  // so interval membership of the embedding decides it.
  return cone.contains_embedded(embed_point(space, b));
}

BaseSubset BaseSubset::finite(std::vector<PointAddress> pts) {
  BaseSubset s;
  s.kind = Kind::finite;
  s.points = std::move(pts);
  return s;
}

BaseSubset BaseSubset::rank_filter(Ordinal t) {
  BaseSubset s;
  s.kind = Kind::rank_filter;
  s.threshold = std::move(t);
  return s;
}

std::string subset_str(const BaseSubset& s) {
  switch (s.kind) {
    case BaseSubset::Kind::empty:
      return "empty";
    case BaseSubset::Kind::finite: {
      std::string out = "finite{";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i) out += ';';
        out += '[' + address_str(s.points[i]) + ']';
      }
      return out + "}";
    }
    case BaseSubset::Kind::rank_filter:
      return "filter:" + format_ordinal(s.threshold);
  }
  return "?";
}

bool denotationally_empty(const CBSpace& space, const BaseSubset& s) {
  switch (s.kind) {
    case BaseSubset::Kind::empty:
      return true;
    case BaseSubset::Kind::finite:
      return s.points.empty();
    case BaseSubset::Kind::rank_filter:
      return s.threshold > space.seed();
  }
  return true;
}

bool member(const CBSpace& space, const BaseSubset& s, const PointAddress& a) {
  switch (s.kind) {
    case BaseSubset::Kind::empty:
      return false;
    case BaseSubset::Kind::finite:
      return std::find(s.points.begin(), s.points.end(), a) != s.points.end();
    case BaseSubset::Kind::rank_filter:
      return point_rank(space, a) >= s.threshold;
  }
  return false;
}

BaseSubset cb_derivative(const CBSpace& space, const BaseSubset& s) {
  switch (s.kind) {
    case BaseSubset::Kind::empty:
    case BaseSubset::Kind::finite:
      // Finite sets are discrete: no limit points.
      return BaseSubset::empty_set();
    case BaseSubset::Kind::rank_filter:
      // Limit points of {rank >= t} within itself are exactly {rank >= t+1}.
      return BaseSubset::rank_filter(add(s.threshold, Ordinal::natural(1)));
  }
  return BaseSubset::empty_set();
}

Ordinal least_empty_stage(const CBSpace& space, const BaseSubset& start,
                          const std::function<BaseSubset(const BaseSubset&)>& step) {
  BaseSubset cur = start;
  Ordinal stage;  // 0
  for (;;) {
    if (denotationally_empty(space, cur)) return stage;
    if (cur.kind == BaseSubset::Kind::rank_filter) {
      // Verify the step advances the filter by one, then solve the chain in
      // closed form: thresholds grow by 1 per stage and limit stages
      // intersect to the filter of the supremum, so the chain first empties
      // after exactly (seed + 1) - threshold more stages.
      BaseSubset next = step(cur);
      BaseSubset expected =
          BaseSubset::rank_filter(add(cur.threshold, Ordinal::natural(1)));
      if (!(next == expected))
        throw std::logic_error("derivative step left the RankFilter chain");
      Ordinal target = add(space.seed(), Ordinal::natural(1));
      return add(stage, left_difference(cur.threshold, target));
    }
    cur = step(cur);
    stage = add(stage, Ordinal::natural(1));
  }
}

Ordinal cb_rank(const CBSpace& space) {
  return least_empty_stage(space, BaseSubset::rank_filter(Ordinal()),
                           [&](const BaseSubset& s) { return cb_derivative(space, s); });
}

BaseSubset cb_stage(const CBSpace& space, const Ordinal& beta) {
  if (beta.is_zero()) return BaseSubset::rank_filter(Ordinal());
  if (is_successor(beta)) return cb_derivative(space, cb_stage(space, predecessor(beta)));
  // Limit stage: probe the canonical fundamental sequence, check the chain
  // stays a RankFilter, and intersect symbolically to the supremum.
  for (std::uint64_t n = 0; n < 4; ++n) {
    BaseSubset probe = cb_stage(space, fundamental_sequence(beta, n));
    if (probe.kind != BaseSubset::Kind::rank_filter)
      throw std::logic_error("limit-stage probe left the RankFilter chain");
    if (!(probe.threshold == fundamental_sequence(beta, n)))
      throw std::logic_error("limit-stage probe has unexpected threshold");
  }
  return BaseSubset::rank_filter(beta);
}

}  // namespace tdlab
