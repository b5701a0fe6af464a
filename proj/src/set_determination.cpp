#include "pagrules/set_determination.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include "pagrules/errors.hpp"
#include "pagrules/oracle.hpp"
#include "pagrules/parallel.hpp"
#include "pagrules/paths.hpp"
#include "pagrules/rules.hpp"

namespace pagrules {

VertexSet circle_neighbors_at(const MixedGraph& p, Vertex x) {
  VertexSet out(p.size());
  p.neighbors(x).for_each([&](Vertex v) {
    if (p.mark_at(x, v) == Mark::Circle) out.insert(v);
  });
  return out;
}

bool valid_local_transformation(const MixedGraph& p, const LocalTransformation& t) {
  if (!t.c.is_subset_of(circle_neighbors_at(p, t.x))) return false;
  const VertexSet pd = possible_descendants(minus(p, t.c), t.x);
  if (pd.intersects(parents(p, t.c))) return false;
  if (!is_complete(p, t.c)) return false;
  VertexSet k = pd;
  k.erase(t.x);
  VertexSet ref = t.c;
  ref.insert(t.x);
  return is_bridged(p, k, ref);
}

MaximalLocalMag maximal_local_mag(const MixedGraph& p, const LocalTransformation& t) {
  MixedGraph m = p;
  circle_neighbors_at(p, t.x).for_each([&](Vertex v) {
    if (t.c.contains(v)) {
      m.set_mark(t.x, v, Mark::Arrow);
    } else {
      m.set_mark(t.x, v, Mark::Tail);
      if (m.mark_at(v, t.x) == Mark::Tail)
        throw ContradictionError("transformation would create an undirected edge at " + p.label(t.x));
      m.set_mark(v, t.x, Mark::Arrow);
    }
  });
  return {close_under(m, classical_rules()), t};
}

namespace {

struct ColliderReach {
  VertexSet in_w;   // members of W reached by a collider path from x
  VertexSet out_w;  // vertices outside W ending such a path
};

// Collider paths that leave x with an arrowhead at x and whose interior
// vertices lie in W.
ColliderReach collider_reach(const MixedGraph& m, const VertexSet& w, Vertex x) {
  ColliderReach r{VertexSet(m.size()), VertexSet(m.size())};
  std::vector<std::uint8_t> seen(2 * m.size(), 0);
  std::deque<std::pair<Vertex, bool>> queue;
  auto reach = [&](Vertex v, Vertex from) {
    if (v == x) return;
    if (!w.contains(v)) {
      r.out_w.insert(v);
      return;
    }
    r.in_w.insert(v);
    bool arrow = m.mark_at(v, from) == Mark::Arrow;
    auto& s = seen[2 * v + (arrow ? 1 : 0)];
    if (!s) {
      s = 1;
      queue.emplace_back(v, arrow);
    }
  };
  m.neighbors(x).for_each([&](Vertex v) {
    if (m.mark_at(x, v) == Mark::Arrow) reach(v, x);
  });
  while (!queue.empty()) {
    auto [v, arrow_in] = queue.front();
    queue.pop_front();
    if (!arrow_in) continue;  // v must be a collider to continue
    m.neighbors(v).for_each([&](Vertex u) {
      if (m.mark_at(v, u) == Mark::Arrow) reach(u, v);
    });
  }
  return r;
}

VertexSet with(VertexSet s, Vertex v) {
  s.insert(v);
  return s;
}

}  // namespace

VertexSet bar_w(const MixedGraph& m, const VertexSet& w, Vertex x, Vertex y) {
  return collider_reach(m, w, x).out_w & possible_ancestors(m, y);
}

BlockSetBounds block_set_bounds(const MixedGraph& m, const VertexSet& w, Vertex x, Vertex y) {
  BlockSetBounds b{bar_w(m, w, x, y), m.empty_set(), m.empty_set()};
  const VertexSet below = possible_descendants(m, b.bar_w) - b.bar_w;
  const VertexSet targets = with(w, y);
  b.s_min = ancestors(m, targets) & below;
  b.s_max = possible_ancestors(m, targets) & below;
  return b;
}

bool is_potential_adjustment_set(const MixedGraph& m, const VertexSet& w, Vertex x, Vertex y) {
  if (w.contains(x) || w.contains(y)) return false;
  if (w.intersects(possible_descendants(m, x))) return false;
  const ColliderReach reach = collider_reach(m, w, x);
  const VertexSet bw = reach.out_w & possible_ancestors(m, y);
  if (bw.intersects(ancestors(m, with(w, y)))) return false;
  if (!w.is_subset_of(reach.in_w)) return false;
  const MixedGraph without_bw = minus(m, bw);
  for (Vertex v : w.members())
    if (!possible_descendants(without_bw, v).contains(y)) return false;
  return true;
}

VertexSet dd_sep(const MixedGraph& m, Vertex x, Vertex y) {
  VertexSet dd(m.size());
  if (!possible_descendants(m, x).contains(y)) return dd;
  const MixedGraph mx = remove_edges_out_of(m, x);
  const VertexSet an_y = ancestors(m, y);
  auto third_clause = [&](Vertex v) {
    if (an_y.contains(v)) return true;
    VertexSet q(m.size());
    m.neighbors(v).for_each([&](Vertex u) {
      if (an_y.contains(u) && m.mark_at(v, u) == Mark::Circle) q.insert(u);
    });
    return !is_complete(m, q);
  };
  for (bool changed = true; changed;) {
    changed = false;
    // x and the members of dd joined to x by a bidirected chain inside dd.
    VertexSet chain = m.set_of({x});
    std::vector<Vertex> stack{x};
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      mx.neighbors(v).for_each([&](Vertex u) {
        if (dd.contains(u) && !chain.contains(u) && mx.is_bidirected(v, u)) {
          chain.insert(u);
          stack.push_back(u);
        }
      });
    }
    for (Vertex r : chain.members())
      for (Vertex v : mx.neighbors(r).members()) {
        if (v == x || v == y || dd.contains(v) || mx.mark_at(r, v) != Mark::Arrow) continue;
        if (!third_clause(v)) continue;
        dd.insert(v);
        changed = true;
      }
  }
  return dd;
}

VertexSet s0(const MixedGraph& m, const VertexSet& w, const VertexSet& bar_w, Vertex, Vertex y) {
  VertexSet out(m.size());
  const VertexSet targets = ancestors(m, with(w, y));
  StepFn step = [&](Vertex a, Vertex b) { return !bar_w.contains(b) && possibly_directed_step(m, a, b); };
  for (Vertex v : bar_w.members()) {
    for_each_minimal_path(m, v, step, [&](const Path& p) {
      if (out.contains(p[1])) return Visit::Prune;
      if (targets.contains(p.back())) {
        out.insert(p[1]);
        return Visit::Prune;
      }
      return Visit::Continue;
    });
  }
  return out;
}

namespace {

// S_V for every V in bar_w: members of s adjacent to V whose edge has the
// given marks at V.
bool s_v_complete(const MixedGraph& m, const VertexSet& bw, const VertexSet& s, bool circle_only) {
  for (Vertex v : bw.members()) {
    VertexSet sv(m.size());
    (m.neighbors(v) & s).for_each([&](Vertex u) {
      Mark at_v = m.mark_at(v, u);
      if (at_v == Mark::Circle || (!circle_only && at_v == Mark::Arrow)) sv.insert(u);
    });
    if (!is_complete(m, sv)) return false;
  }
  return true;
}

}  // namespace

std::optional<VertexSet> update_s(const MixedGraph& m_in, Vertex x, Vertex y, const VertexSet& w, UpdateStats* stats) {
  MixedGraph m = m_in;
  const VertexSet bw = bar_w(m, w, x, y);
  VertexSet s = s0(m, w, bw, x, y);
  const VertexSet t = possible_descendants(minus(m, s), bw) - bw;
  UpdateStats local;
  UpdateStats& st = stats ? *stats : local;
  while (true) {
    ++st.loops;
    if (!s_v_complete(m, bw, s, false)) return std::nullopt;
    if (possible_descendants(minus(m, s), bw).intersects(parents(m, s))) return std::nullopt;
    for (Vertex v : bw.members())
      for (Vertex u : (m.neighbors(v) & s).members())
        if (m.mark_at(v, u) == Mark::Circle) m.set_mark(v, u, Mark::Arrow);
    std::optional<std::pair<Vertex, Vertex>> fired;
    for (Vertex a = 0; a < m.size() && !fired; ++a)
      for (Vertex b : m.neighbors(a).members())
        if (m.mark_at(a, b) == Mark::Circle && r12_statement_applies(m, a, b)) {
          fired = {a, b};
          break;
        }
    if (fired) {
      m.set_mark(fired->first, fired->second, Mark::Arrow);
      ++st.r12_firings;
      s |= ancestors(m, fired->second) & t;
      continue;
    }
    const VertexSet scope = possible_descendants(minus(m, s), bw);
    if (find_unbridged_path(m, s, scope)) return std::nullopt;
    return s;
  }
}

bool check_prop2_conditions(const MixedGraph& m, Vertex x, Vertex y, const VertexSet& w, const VertexSet& s) {
  const VertexSet bw = bar_w(m, w, x, y);
  const VertexSet k = possible_descendants(minus(m, s), bw);
  if (k.intersects(parents(m, s))) return false;
  if (!s_v_complete(m, bw, s, true)) return false;
  return is_bridged(m, k, s);
}

namespace {

bool has_directed_cycle(const MixedGraph& g) {
  std::vector<std::size_t> indeg(g.size(), 0);
  for (const auto& e : g.edges()) {
    if (g.is_directed(e.u, e.v)) ++indeg[e.v];
    if (g.is_directed(e.v, e.u)) ++indeg[e.u];
  }
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < g.size(); ++v)
    if (indeg[v] == 0) stack.push_back(v);
  std::size_t removed = 0;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    ++removed;
    g.neighbors(v).for_each([&](Vertex w) {
      if (g.is_directed(v, w) && --indeg[w] == 0) stack.push_back(w);
    });
  }
  return removed != g.size();
}

// Unshielded colliders of g that were not colliders in `before`.
bool new_colliders(const MixedGraph& g, const MixedGraph& before, const VertexSet& centres) {
  for (Vertex c : centres.members()) {
    auto nb = g.neighbors(c).members();
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        Vertex a = nb[i], b = nb[j];
        if (g.adjacent(a, b) || g.mark_at(c, a) != Mark::Arrow || g.mark_at(c, b) != Mark::Arrow) continue;
        if (before.mark_at(c, a) != Mark::Arrow || before.mark_at(c, b) != Mark::Arrow) return true;
      }
  }
  return false;
}

// Maximum cardinality search over the circle edges inside `region`.
std::vector<Vertex> mcs_order(const MixedGraph& g, const VertexSet& region) {
  std::vector<Vertex> order;
  std::vector<std::size_t> weight(g.size(), 0);
  VertexSet done(g.size());
  const auto members = region.members();
  for (std::size_t step = 0; step < members.size(); ++step) {
    Vertex best = g.size();
    for (Vertex v : members)
      if (!done.contains(v) && (best == g.size() || weight[v] > weight[best])) best = v;
    done.insert(best);
    order.push_back(best);
    g.neighbors(best).for_each([&](Vertex u) {
      if (region.contains(u) && !done.contains(u) && g.is_circle_edge(best, u)) ++weight[u];
    });
  }
  return order;
}

struct ExactOrienter {
  MixedGraph& g;
  const MixedGraph& before;
  std::vector<std::pair<Vertex, Vertex>> edges;

  bool reaches(Vertex from, Vertex to) const {
    VertexSet seen(g.size());
    std::vector<Vertex> stack{from};
    seen.insert(from);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      g.neighbors(v).for_each([&](Vertex u) {
        if (!seen.contains(u) && g.is_directed(v, u)) {
          seen.insert(u);
          stack.push_back(u);
        }
      });
    }
    return false;
  }

  bool run(std::size_t i) {
    if (i == edges.size()) return true;
    auto [a, b] = edges[i];
    for (int dir = 0; dir < 2; ++dir) {
      Vertex from = dir == 0 ? a : b, to = dir == 0 ? b : a;
      if (reaches(to, from)) continue;
      g.set_edge(from, to, Mark::Tail, Mark::Arrow);
      if (!new_colliders(g, before, g.set_of({to})) && run(i + 1)) return true;
    }
    g.set_edge(a, b, Mark::Circle, Mark::Circle);
    return false;
  }
};

// Orients the circle edges inside `region` acyclically without new unshielded
// colliders.
void orient_circle_component(MixedGraph& g, const VertexSet& region) {
  const MixedGraph before = g;
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (const auto& e : g.edges())
    if (region.contains(e.u) && region.contains(e.v) && e.mark_u == Mark::Circle && e.mark_v == Mark::Circle)
      edges.emplace_back(e.u, e.v);
  if (edges.empty()) return;
  auto order = mcs_order(g, region);
  std::vector<std::size_t> pos(g.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (auto [a, b] : edges) {
    if (pos[a] < pos[b])
      g.set_edge(a, b, Mark::Tail, Mark::Arrow);
    else
      g.set_edge(a, b, Mark::Arrow, Mark::Tail);
  }
  if (!has_directed_cycle(g) && !new_colliders(g, before, region)) return;
  g = before;
  ExactOrienter ex{g, before, edges};
  if (!ex.run(0)) throw ConstructionError("circle component admits no orientation without new unshielded colliders");
}

}  // namespace

MixedGraph construct_witness_mag(const MixedGraph& m_in, Vertex x, Vertex y, const VertexSet& w, const VertexSet& s) {
  MixedGraph m = m_in;
  const VertexSet bw = bar_w(m_in, w, x, y);
  const VertexSet k = possible_descendants(minus(m_in, s), bw);

  // Step 1: arrowheads at K on edges from S.
  for (Vertex v : k.members())
    for (Vertex t : (m.neighbors(v) & s).members())
      if (m.mark_at(v, t) == Mark::Circle) m.set_mark(v, t, Mark::Arrow);

  // Step 2: circle edges inside K, driven by the F-sets of the input graph.
  std::vector<VertexSet> f(m.size(), m.empty_set());
  k.for_each([&](Vertex v) { f[v] = f_set(m_in, s, v); });
  const auto km = k.members();
  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex vi : km)
      for (Vertex vj : m.neighbors(vi).members()) {
        if (!k.contains(vj) || !m.is_circle_edge(vi, vj)) continue;
        bool orient = !(f[vi] - f[vj]).empty();
        if (!orient && f[vi] == f[vj])
          for (Vertex vk : km)
            if (vk != vj && m.adjacent(vk, vi) && m.is_directed(vk, vi) && !m.adjacent(vk, vj)) {
              orient = true;
              break;
            }
        if (orient) {
          m.set_edge(vi, vj, Mark::Tail, Mark::Arrow);
          changed = true;
        }
      }
  }

  // Step 3: remaining o-> edges become ->.
  for (const auto& e : m.edges()) {
    if (e.mark_u == Mark::Circle && e.mark_v == Mark::Arrow) m.set_mark(e.u, e.v, Mark::Tail);
    if (e.mark_v == Mark::Circle && e.mark_u == Mark::Arrow) m.set_mark(e.v, e.u, Mark::Tail);
  }

  // Steps 4 and 5: the circle components inside and outside K.
  orient_circle_component(m, k);
  orient_circle_component(m, m.all_vertices() - k);

  if (m.has_circles()) throw ConstructionError("circles remain after the construction");
  if (!is_mag(m)) throw ConstructionError("the constructed graph is not a MAG");
  return m;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::NoEffect: return "no_effect";
    case Outcome::GloballyIdentified: return "globally_identified";
    case Outcome::SetOfSets: return "set_of_sets";
  }
  return "?";
}

namespace {

enum class Decider { Rules, BlockSets };

struct TransformationResult {
  Diagnostics diag;
  std::vector<Provenance> found;
};

// Subsets of `pool` in order of increasing size, then by member order.
std::vector<VertexSet> subsets_by_size(const VertexSet& pool) {
  const auto members = pool.members();
  const std::size_t k = members.size();
  if (k >= 63) throw BudgetExceeded("too many candidate vertices for subset enumeration");
  std::vector<std::uint64_t> masks;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    return __builtin_popcountll(a) < __builtin_popcountll(b);
  });
  std::vector<VertexSet> out;
  for (std::uint64_t mask : masks) {
    VertexSet s(pool.universe());
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) s.insert(members[i]);
    out.push_back(std::move(s));
  }
  return out;
}

TransformationResult process_transformation(const MixedGraph& p, Vertex x, Vertex y, const VertexSet& c,
                                            Decider decider, const SetDeterminationOptions& opts) {
  TransformationResult r;
  r.diag.transformations = 1;
  LocalTransformation t{x, c};
  if (!valid_local_transformation(p, t)) return r;
  MixedGraph m;
  try {
    m = maximal_local_mag(p, t).graph;
  } catch (const ContradictionError&) {
    return r;
  }
  r.diag.valid_transformations = 1;
  if (opts.skip_without_possible_effect && !possible_descendants(m, x).contains(y)) {
    r.diag.skipped_no_possible_effect = 1;
    return r;
  }
  VertexSet forced = decider == Decider::Rules ? dd_sep(m, x, y) : m.empty_set();
  VertexSet pool = m.all_vertices() - possible_descendants(m, x) - forced;
  pool.erase(x);
  pool.erase(y);
  for (const VertexSet& extra : subsets_by_size(pool)) {
    VertexSet w = forced | extra;
    ++r.diag.candidate_sets;
    if (!is_potential_adjustment_set(m, w, x, y)) continue;
    ++r.diag.potential_sets_tested;
    if (decider == Decider::Rules) {
      UpdateStats st;
      auto s = update_s(m, x, y, w, &st);
      ++r.diag.update_s_calls;
      r.diag.alg2_loops += st.loops;
      r.diag.max_alg2_loops = std::max(r.diag.max_alg2_loops, st.loops);
      r.diag.r12_firings += st.r12_firings;
      if (s) r.found.push_back({w, c, s});
    } else {
      const BlockSetBounds b = block_set_bounds(m, w, x, y);
      const auto free = (b.s_max - b.s_min).members();
      if (free.size() >= 63) throw BudgetExceeded("block-set enumeration is too large");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
        if (++r.diag.block_sets_tested > opts.block_set_budget)
          throw BudgetExceeded("block-set budget of " + std::to_string(opts.block_set_budget) + " exhausted");
        VertexSet s = b.s_min;
        for (std::size_t i = 0; i < free.size(); ++i)
          if (mask >> i & 1) s.insert(free[i]);
        if (check_prop2_conditions(m, x, y, w, s)) {
          r.found.push_back({w, c, s});
          break;
        }
      }
    }
  }
  return r;
}

void accumulate(Diagnostics& into, const Diagnostics& d) {
  into.transformations += d.transformations;
  into.valid_transformations += d.valid_transformations;
  into.skipped_no_possible_effect += d.skipped_no_possible_effect;
  into.potential_sets_tested += d.potential_sets_tested;
  into.candidate_sets += d.candidate_sets;
  into.block_sets_tested += d.block_sets_tested;
  into.r12_firings += d.r12_firings;
  into.update_s_calls += d.update_s_calls;
  into.alg2_loops += d.alg2_loops;
  into.max_alg2_loops = std::max(into.max_alg2_loops, d.max_alg2_loops);
}

AdjustmentReport determine(const MixedGraph& p, Vertex x, Vertex y, Decider decider,
                           const SetDeterminationOptions& opts) {
  if (x == y || x >= p.size() || y >= p.size()) throw std::invalid_argument("x and y must be two distinct vertices");
  validate_pmg(p);
  AdjustmentReport report;
  if (!possible_ancestors(p, y).contains(x)) {
    report.outcome = Outcome::NoEffect;
    return report;
  }
  if (opts.backdoor_shortcut) {
    if (auto d = adjustment_via_backdoor(p, x, y)) {
      report.outcome = Outcome::GloballyIdentified;
      report.sets.push_back(*d);
      report.provenance.push_back({*d, p.empty_set(), std::nullopt});
      return report;
    }
  }
  const auto cs = subsets_by_size(circle_neighbors_at(p, x));
  auto results = parallel_map<TransformationResult>(cs.size(), opts.threads, [&](std::size_t i) {
    return process_transformation(p, x, y, cs[i], decider, opts);
  });
  std::set<VertexSet> seen;
  for (auto& r : results) {
    accumulate(report.diagnostics, r.diag);
    for (auto& prov : r.found)
      if (seen.insert(prov.w).second) report.provenance.push_back(std::move(prov));
  }
  report.sets.assign(seen.begin(), seen.end());
  std::sort(report.provenance.begin(), report.provenance.end(),
            [](const Provenance& a, const Provenance& b) { return a.w < b.w; });
  return report;
}

}  // namespace

AdjustmentReport pagrules(const MixedGraph& p, Vertex x, Vertex y, const SetDeterminationOptions& opts) {
  return determine(p, x, y, Decider::Rules, opts);
}

AdjustmentReport pagcauses_baseline(const MixedGraph& p, Vertex x, Vertex y, const SetDeterminationOptions& opts) {
  return determine(p, x, y, Decider::BlockSets, opts);
}

}  // namespace pagrules
