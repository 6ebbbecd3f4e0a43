#include "tdlab/betarank.hpp"

#include <algorithm>

namespace tdlab {

Rat system_distance(const FlipSystem& sys, const SystemPoint& a, const SystemPoint& b) {
  Rat base = distance(sys.base, a.base, b.base);
  Rat gap = a.level == b.level ? Rat(0) : Rat(1);
  return std::max(base, gap);
}

SystemFunction SystemFunction::clopen_swap(std::vector<NeighborhoodCone> cones) {
  for (std::size_t i = 0; i < cones.size(); ++i)
    for (std::size_t j = i + 1; j < cones.size(); ++j)
      if (!cones[i].disjoint(cones[j]))
        throw PreconditionError("clopen swap cones must be pairwise disjoint");
  SystemFunction fn;
  fn.kind = Kind::clopen_swap;
  fn.swap_cones = std::move(cones);
  return fn;
}

SystemPoint apply(const FlipSystem& sys, const SystemFunction& fn, const SystemPoint& x) {
  sys.base.require_valid(x.base);
  switch (fn.kind) {
    case SystemFunction::Kind::identity:
      return x;
    case SystemFunction::Kind::parity_flip: {
      Parity p = parity(point_rank(sys.base, x.base));
      if (p == Parity::even) return x;
      return SystemPoint{x.base, static_cast<std::uint8_t>(1 - x.level)};
    }
    case SystemFunction::Kind::clopen_swap: {
      for (const auto& cone : fn.swap_cones)
        if (cone_contains(sys.base, cone, x.base))
          return SystemPoint{x.base, static_cast<std::uint8_t>(1 - x.level)};
      return x;
    }
  }
  return x;
}

DerivativeSet DerivativeSet::finite(std::vector<SystemPoint> pts) {
  DerivativeSet s;
  s.kind = Kind::finite;
  s.points = std::move(pts);
  return s;
}

DerivativeSet DerivativeSet::rank_filter(Ordinal t) {
  DerivativeSet s;
  s.kind = Kind::rank_filter;
  s.threshold = std::move(t);
  return s;
}

std::string derivative_set_str(const DerivativeSet& s) {
  switch (s.kind) {
    case DerivativeSet::Kind::empty:
      return "empty";
    case DerivativeSet::Kind::finite: {
      std::string out = "finite{";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i) out += ';';
        out += "([" + address_str(s.points[i].base) + "]," +
               std::to_string(int(s.points[i].level)) + ")";
      }
      return out + "}";
    }
    case DerivativeSet::Kind::rank_filter:
      return "filter:" + format_ordinal(s.threshold);
  }
  return "?";
}

bool denotationally_empty(const FlipSystem& sys, const DerivativeSet& s) {
  switch (s.kind) {
    case DerivativeSet::Kind::empty:
      return true;
    case DerivativeSet::Kind::finite:
      return s.points.empty();
    case DerivativeSet::Kind::rank_filter:
      return s.threshold > sys.base.seed();
  }
  return true;
}

bool member(const FlipSystem& sys, const DerivativeSet& s, const SystemPoint& x) {
  switch (s.kind) {
    case DerivativeSet::Kind::empty:
      return false;
    case DerivativeSet::Kind::finite:
      return std::find(s.points.begin(), s.points.end(), x) != s.points.end();
    case DerivativeSet::Kind::rank_filter:
      return point_rank(sys.base, x.base) >= s.threshold;
  }
  return false;
}

Rat oscillation(const FlipSystem& sys, const SystemFunction& fn, const SystemPoint& x) {
  sys.base.require_valid(x.base);
  if (fn.kind != SystemFunction::Kind::parity_flip) return Rat(0);
  // Every cone around a point of rank >= 1 contains whole copies, hence
  // points of both parities; the flip separates those by the level gap 1.
  return point_rank(sys.base, x.base).is_zero() ? Rat(0) : Rat(1);
}

Rat relative_oscillation(const FlipSystem& sys, const SystemFunction& fn,
                         const SystemPoint& x, const DerivativeSet& A) {
  if (!member(sys, A, x))
    throw PreconditionError("relative oscillation requires x in A");
  if (fn.kind != SystemFunction::Kind::parity_flip) return Rat(0);
  switch (A.kind) {
    case DerivativeSet::Kind::empty:
      return Rat(0);
    case DerivativeSet::Kind::finite:
      return Rat(0);  // every point of a finite set is isolated in it
    case DerivativeSet::Kind::rank_filter: {
      // Within {rank >= t}, opposite-parity approximants of rank >= t
      // accumulate exactly at the points of rank > t.
      Ordinal r = point_rank(sys.base, x.base);
      return r > A.threshold ? Rat(1) : Rat(0);
    }
  }
  return Rat(0);
}

DerivativeSet eps_derivative(const FlipSystem& sys, const SystemFunction& fn,
                             const DerivativeSet& A, const Rat& eps) {
  if (eps <= 0) throw PreconditionError("eps must be positive");
  if (fn.kind != SystemFunction::Kind::parity_flip) return DerivativeSet::empty_set();
  if (eps > 1) return DerivativeSet::empty_set();  // exceeds the carrier diameter
  switch (A.kind) {
    case DerivativeSet::Kind::empty:
    case DerivativeSet::Kind::finite:
      return DerivativeSet::empty_set();
    case DerivativeSet::Kind::rank_filter:
      return DerivativeSet::rank_filter(add(A.threshold, Ordinal::natural(1)));
  }
  return DerivativeSet::empty_set();
}

namespace {

Ordinal least_empty_system_stage(const FlipSystem& sys, const DerivativeSet& start,
                                 const SystemFunction& fn, const Rat& eps) {
  DerivativeSet cur = start;
  Ordinal stage;
  for (;;) {
    if (denotationally_empty(sys, cur)) return stage;
    if (cur.kind == DerivativeSet::Kind::rank_filter) {
      DerivativeSet next = eps_derivative(sys, fn, cur, eps);
      DerivativeSet expected =
          DerivativeSet::rank_filter(add(cur.threshold, Ordinal::natural(1)));
      if (!(next == expected))
        throw std::logic_error("eps-derivative step left the RankFilter chain");
      Ordinal target = add(sys.base.seed(), Ordinal::natural(1));
      return add(stage, left_difference(cur.threshold, target));
    }
    cur = eps_derivative(sys, fn, cur, eps);
    stage = add(stage, Ordinal::natural(1));
  }
}

}  // namespace

Ordinal beta_rank_at_eps(const FlipSystem& sys, const SystemFunction& fn, const Rat& eps) {
  if (eps <= 0) throw PreconditionError("eps must be positive");
  return least_empty_system_stage(sys, DerivativeSet::whole(), fn, eps);
}

Ordinal beta_rank(const FlipSystem& sys, const SystemFunction& fn) {
  // The achievable oscillation set is {0} or {0,1}; beta(p, eps) is constant
  // on (0, 1], so the sup over eps is attained at the smallest positive
  // achievable value (1 when it exists, otherwise any eps works).
  Ordinal result = beta_rank_at_eps(sys, fn, Rat(1));
  const Rat grid[] = {Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)};
  for (const Rat& eps : grid) {
    if (!(beta_rank_at_eps(sys, fn, eps) == result))
      throw std::logic_error("beta rank is not constant over the probe grid");
  }
  return result;
}

DerivativeSet eps_stage(const FlipSystem& sys, const SystemFunction& fn, const Rat& eps,
                        const Ordinal& beta) {
  if (beta.is_zero()) return DerivativeSet::whole();
  if (is_successor(beta))
    return eps_derivative(sys, fn, eps_stage(sys, fn, eps, predecessor(beta)), eps);
  for (std::uint64_t n = 0; n < 4; ++n) {
    DerivativeSet probe = eps_stage(sys, fn, eps, fundamental_sequence(beta, n));
    if (probe.kind != DerivativeSet::Kind::rank_filter)
      throw std::logic_error("limit-stage probe left the RankFilter chain");
  }
  return DerivativeSet::rank_filter(beta);
}

SystemFunction ellis_approximant(const FlipSystem& sys,
                                 const std::vector<SystemPoint>& sample) {
  // Distinct base addresses with their embeddings; duplicates merge (the
  // parity flip gives both levels of a base point the same requirement).
  std::vector<PointAddress> bases;
  for (const auto& pt : sample) {
    sys.base.require_valid(pt.base);
    if (std::find(bases.begin(), bases.end(), pt.base) == bases.end())
      bases.push_back(pt.base);
  }
  std::vector<Rat> embeds;
  embeds.reserve(bases.size());
  for (const auto& b : bases) embeds.push_back(embed_point(sys.base, b));

  std::vector<NeighborhoodCone> cones;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (parity(point_rank(sys.base, bases[i])) == Parity::even) continue;
    // Shrink the cone below the nearest other sample embedding above the
    // anchor; anything at or below the anchor is already outside.
    NeighborhoodCone c0 = neighborhood_cone(sys.base, bases[i], 0);
    std::uint32_t k = 0;
    if (!c0.singleton) {
      Rat len = c0.interval_diameter();  // descriptor length / 1 at k=0
      Rat gap(0);
      bool has_above = false;
      for (std::size_t j = 0; j < embeds.size(); ++j) {
        if (j == i || embeds[j] <= embeds[i]) continue;
        Rat g = embeds[j] - embeds[i];
        if (!has_above || g < gap) gap = g, has_above = true;
      }
      if (has_above && len >= gap) {
        // smallest k with len/(k+1) < gap
        Rat ratio = len / gap;
        Int kk = boost::multiprecision::numerator(ratio) /
                 boost::multiprecision::denominator(ratio);
        while (len / Rat(kk + 1) >= gap) ++kk;
        k = static_cast<std::uint32_t>(kk);
      }
    }
    cones.push_back(neighborhood_cone(sys.base, bases[i], k));
  }
  return SystemFunction::clopen_swap(std::move(cones));
}

std::vector<Ordinal> probe_stages(const Ordinal& seed) {
  std::vector<Ordinal> stages;
  auto push = [&](const Ordinal& s) {
    if (std::find(stages.begin(), stages.end(), s) == stages.end()) stages.push_back(s);
  };
  Ordinal rank = add(seed, Ordinal::natural(1));
  for (std::uint64_t n = 0; n <= 3; ++n) {
    Ordinal s = Ordinal::natural(n);
    if (s <= rank) push(s);
  }
  // Limit milestones from the CNF structure of the seed, with small offsets.
  Ordinal prefix;
  for (const auto& t : seed.terms()) {
    if (t.exponent.is_zero()) break;
    for (std::uint64_t j = 1; j <= t.coeff && j <= 2; ++j) {
      Ordinal m = add(prefix, Ordinal::omega_power(t.exponent, j));
      for (std::uint64_t off = 0; off <= 2; ++off) {
        Ordinal s = add(m, Ordinal::natural(off));
        if (s <= rank) push(s);
      }
    }
    prefix = add(prefix, Ordinal::omega_power(t.exponent, t.coeff));
  }
  push(seed);
  push(rank);
  std::sort(stages.begin(), stages.end());
  return stages;
}

RankTheoremReport verify_rank_theorem(const FlipSystem& sys, std::uint32_t depth,
                                      std::uint32_t width) {
  RankTheoremReport rep;
  SystemFunction flip = SystemFunction::parity_flip();
  rep.cb = cb_rank(sys.base);
  rep.beta = beta_rank(sys, flip);
  rep.rank_equal = rep.cb == rep.beta;

  std::vector<PointAddress> addrs = enumerate_points(sys.base, depth, width);
  const Rat eps(1, 2);
  rep.all_stages_equal = true;
  for (const Ordinal& beta : probe_stages(sys.base.seed())) {
    StageLine line;
    line.stage = beta;
    line.cb = cb_stage(sys.base, beta);
    line.eps = eps_stage(sys, flip, eps, beta);
    bool symbolic_equal = false;
    if (line.cb.kind == BaseSubset::Kind::rank_filter &&
        line.eps.kind == DerivativeSet::Kind::rank_filter) {
      symbolic_equal = line.cb.threshold == line.eps.threshold;
    } else {
      symbolic_equal = (line.cb.kind == BaseSubset::Kind::empty) ==
                       (line.eps.kind == DerivativeSet::Kind::empty);
    }
    for (const auto& a : addrs) {
      for (std::uint8_t lvl = 0; lvl <= 1; ++lvl) {
        SystemPoint pt{a, lvl};
        bool in_cb = member(sys.base, line.cb, a);
        bool in_eps = member(sys, line.eps, pt);
        ++line.sampled_points;
        if (in_cb == in_eps) ++line.agreements;
      }
    }
    line.equal = symbolic_equal && line.agreements == line.sampled_points;
    if (!line.equal) rep.all_stages_equal = false;
    rep.stages.push_back(std::move(line));
  }
  return rep;
}

std::string RankTheoremReport::text() const {
  std::string out;
  out += "cb-rank " + format_ordinal(cb) + " beta-rank " + format_ordinal(beta) +
         " equal=" + (rank_equal ? "true" : "false") + "\n";
  for (const auto& line : stages) {
    out += "stage " + format_ordinal(line.stage) + " cb=" + subset_str(line.cb) +
           " eps=" + derivative_set_str(line.eps) +
           " equal=" + (line.equal ? "true" : "false") + " sampled=" +
           std::to_string(line.sampled_points) + " agree=" +
           std::to_string(line.agreements) + "\n";
  }
  return out;
}

}  // namespace tdlab
