#include "pagrules/rules.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "pagrules/errors.hpp"
#include "pagrules/paths.hpp"

namespace pagrules {

const char* rule_name(RuleId id) {
  switch (id) {
    case RuleId::R1: return "R1";
    case RuleId::R2: return "R2";
    case RuleId::R3: return "R3";
    case RuleId::R4p: return "R4'";
    case RuleId::R8: return "R8";
    case RuleId::R9: return "R9";
    case RuleId::R10: return "R10";
    case RuleId::R11: return "R11";
    case RuleId::R12: return "R12";
    case RuleId::R13: return "R13";
  }
  return "?";
}

std::optional<RuleId> parse_rule_name(std::string_view name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (s == "R4" || s == "R4P") s = "R4'";
  for (RuleId id : all_rules())
    if (s == rule_name(id)) return id;
  return std::nullopt;
}

std::vector<RuleId> classical_rules() {
  return {RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4p, RuleId::R8, RuleId::R9, RuleId::R10, RuleId::R11};
}

std::vector<RuleId> all_rules() {
  auto r = classical_rules();
  r.push_back(RuleId::R12);
  r.push_back(RuleId::R13);
  return r;
}

namespace {

// Sets the mark at `at` on at-other. A circle may become anything; any other
// mark is final.
bool commit(MixedGraph& h, Vertex at, Vertex other, Mark m, RuleId rule) {
  Mark cur = h.mark_at(at, other);
  if (cur == m) return false;
  if (cur != Mark::Circle)
    throw ContradictionError(std::string(rule_name(rule)) + " would put " + mark_name(m) + " at " + h.label(at) +
                             " on the edge " + h.label(at) + " - " + h.label(other) + ", which already carries " +
                             mark_name(cur));
  h.set_mark(at, other, m);
  return true;
}

struct Pass {
  MixedGraph& h;
  RuleId rule;
  std::vector<Firing>& log;

  // Applies the marks and records a firing if anything changed.
  void fire(Vertex u, Vertex v, std::optional<Mark> mu, std::optional<Mark> mv, std::vector<Vertex> witness) {
    bool changed = false;
    if (mu) changed = commit(h, u, v, *mu, rule) || changed;
    if (mv) changed = commit(h, v, u, *mv, rule) || changed;
    if (changed) log.push_back({rule, u, v, h.mark_at(u, v), h.mark_at(v, u), std::move(witness)});
  }
};

void run_r1(Pass& p) {
  MixedGraph& h = p.h;
  for (Vertex b = 0; b < h.size(); ++b)
    for (Vertex r : h.neighbors(b).members()) {
      if (h.mark_at(b, r) != Mark::Circle) continue;
      for (Vertex a : h.neighbors(b).members()) {
        if (a == r || h.adjacent(a, r) || h.mark_at(b, a) != Mark::Arrow) continue;
        p.fire(b, r, Mark::Tail, Mark::Arrow, {a});
        break;
      }
    }
}

void run_r2(Pass& p) {
  MixedGraph& h = p.h;
  for (Vertex a = 0; a < h.size(); ++a)
    for (Vertex r : h.neighbors(a).members()) {
      if (h.mark_at(r, a) != Mark::Circle) continue;
      for (Vertex b : h.neighbors(a).members()) {
        if (b == r || !h.adjacent(b, r)) continue;
        bool first = h.is_directed(a, b) && h.mark_at(r, b) == Mark::Arrow;
        bool second = h.mark_at(b, a) == Mark::Arrow && h.is_directed(b, r);
        if (first || second) {
          p.fire(a, r, std::nullopt, Mark::Arrow, {b});
          break;
        }
      }
    }
}

void run_r3(Pass& p) {
  MixedGraph& h = p.h;
  for (Vertex d = 0; d < h.size(); ++d)
    for (Vertex b : h.neighbors(d).members()) {
      if (h.mark_at(b, d) != Mark::Circle) continue;
      auto common = (h.neighbors(b) & h.neighbors(d)).members();
      bool done = false;
      for (std::size_t i = 0; i < common.size() && !done; ++i)
        for (std::size_t j = i + 1; j < common.size() && !done; ++j) {
          Vertex a = common[i], r = common[j];
          if (h.adjacent(a, r)) continue;
          if (h.mark_at(b, a) != Mark::Arrow || h.mark_at(b, r) != Mark::Arrow) continue;
          if (h.mark_at(d, a) != Mark::Circle || h.mark_at(d, r) != Mark::Circle) continue;
          p.fire(d, b, std::nullopt, Mark::Arrow, {a, r});
          done = true;
        }
    }
}

void run_r4p(Pass& p) {
  MixedGraph& h = p.h;
  for (Vertex b = 0; b < h.size(); ++b)
    for (Vertex r : h.neighbors(b).members()) {
      if (h.mark_at(b, r) != Mark::Circle) continue;
      if (auto path = find_discriminating_path(h, b, r)) p.fire(b, r, Mark::Tail, Mark::Arrow, *path);
    }
}

void run_r8(Pass& p) {
  MixedGraph& h = p.h;
  for (Vertex a = 0; a < h.size(); ++a)
    for (Vertex r : h.neighbors(a).members()) {
      if (h.mark_at(a, r) != Mark::Circle || h.mark_at(r, a) != Mark::Arrow) continue;
      for (Vertex b : h.neighbors(a).members())
        if (b != r && h.is_directed(a, b) && h.adjacent(b, r) && h.is_directed(b, r)) {
          p.fire(a, r, Mark::Tail, std::nullopt, {b});
          break;
        }
    }
}

StepFn pd_step(const MixedGraph& h) {
  return [&h](Vertex u, Vertex v) { return possibly_directed_step(h, u, v); };
}

void run_r9(Pass& p) {
  MixedGraph& h = p.h;
  for (Vertex a = 0; a < h.size(); ++a)
    for (Vertex r : h.neighbors(a).members()) {
      if (h.mark_at(a, r) != Mark::Circle || h.mark_at(r, a) != Mark::Arrow) continue;
      for (Vertex b : h.neighbors(a).members()) {
        if (b == r || h.adjacent(b, r) || !possibly_directed_step(h, a, b)) continue;
        if (uncovered_reach(h, a, b, pd_step(h)).contains(r)) {
          p.fire(a, r, Mark::Tail, std::nullopt, {b});
          break;
        }
      }
    }
}

void run_r10(Pass& p) {
  MixedGraph& h = p.h;
  for (Vertex a = 0; a < h.size(); ++a)
    for (Vertex r : h.neighbors(a).members()) {
      if (h.mark_at(a, r) != Mark::Circle || h.mark_at(r, a) != Mark::Arrow) continue;
      std::vector<Vertex> pa;
      for (Vertex v : h.neighbors(r).members())
        if (h.is_directed(v, r)) pa.push_back(v);
      if (pa.size() < 2) continue;
      // reach[u]: ends of uncovered p.d. paths <a, u, ...>.
      std::vector<std::pair<Vertex, VertexSet>> reach;
      for (Vertex u : h.neighbors(a).members())
        if (possibly_directed_step(h, a, u)) reach.emplace_back(u, uncovered_reach(h, a, u, pd_step(h)));
      auto firsts = [&](Vertex target) {
        std::vector<Vertex> out;
        for (auto& [u, set] : reach)
          if (set.contains(target)) out.push_back(u);
        return out;
      };
      bool fired = false;
      for (std::size_t i = 0; i < pa.size() && !fired; ++i)
        for (std::size_t j = i + 1; j < pa.size() && !fired; ++j) {
          auto us = firsts(pa[i]), ws = firsts(pa[j]);
          for (Vertex u : us) {
            for (Vertex w : ws)
              if (u != w && !h.adjacent(u, w)) {
                p.fire(a, r, Mark::Tail, std::nullopt, {pa[i], pa[j], u, w});
                fired = true;
                break;
              }
            if (fired) break;
          }
        }
    }
}

void run_r11(Pass& p) {
  MixedGraph& h = p.h;
  for (Vertex a = 0; a < h.size(); ++a)
    for (Vertex b : h.neighbors(a).members())
      if (h.mark_at(a, b) == Mark::Tail && h.mark_at(b, a) == Mark::Circle) p.fire(a, b, std::nullopt, Mark::Arrow, {});
}

}  // namespace

RuleResult apply_rule(const MixedGraph& h, RuleId id) {
  if (id == RuleId::R12 || id == RuleId::R13) return apply_R12_R13(h, {}, id);
  RuleResult res{false, h, {}};
  Pass p{res.graph, id, res.firings};
  switch (id) {
    case RuleId::R1: run_r1(p); break;
    case RuleId::R2: run_r2(p); break;
    case RuleId::R3: run_r3(p); break;
    case RuleId::R4p: run_r4p(p); break;
    case RuleId::R8: run_r8(p); break;
    case RuleId::R9: run_r9(p); break;
    case RuleId::R10: run_r10(p); break;
    case RuleId::R11: run_r11(p); break;
    default: break;
  }
  res.changed = !res.firings.empty();
  return res;
}

VertexSet f_set(const MixedGraph& h, const VertexSet& vp, Vertex v) {
  VertexSet out = h.neighbors(v) & vp;
  for (Vertex w : out.members())
    if (h.mark_at(v, w) == Mark::Tail) out.erase(w);
  return out;
}

std::optional<UnbridgedPath> find_unbridged_path(const MixedGraph& h, const VertexSet& vp, const VertexSet& scope) {
  std::vector<VertexSet> f(h.size(), h.empty_set());
  scope.for_each([&](Vertex v) { f[v] = f_set(h, vp, v); });
  auto differs = [&](Vertex a, Vertex b) { return !(f[a] - f[b]).empty(); };

  std::vector<std::pair<Vertex, Vertex>> starts;
  scope.for_each([&](Vertex v0) {
    h.neighbors(v0).for_each([&](Vertex v1) {
      if (scope.contains(v1) && h.is_circle_edge(v0, v1) && differs(v0, v1)) starts.emplace_back(v0, v1);
    });
  });
  if (starts.empty()) return std::nullopt;
  StepFn step = [&](Vertex u, Vertex w) { return scope.contains(w) && h.is_circle_edge(u, w); };
  EndFn accept = [&](Vertex prev, Vertex cur) { return differs(cur, prev); };
  auto path = find_uncovered_path(h, starts, step, accept);
  if (!path) return std::nullopt;
  const Path& p = *path;
  std::size_t n = p.size() - 1;
  return UnbridgedPath{p, (f[p[0]] - f[p[1]]).members().front(), (f[p[n]] - f[p[n - 1]]).members().front()};
}

bool is_bridged(const MixedGraph& h, const VertexSet& component, const VertexSet& vp) {
  std::vector<VertexSet> f(h.size(), h.empty_set());
  component.for_each([&](Vertex v) { f[v] = f_set(h, vp, v); });
  StepFn step = [&](Vertex u, Vertex w) { return component.contains(w) && h.is_circle_edge(u, w); };
  auto bitonic = [&](const Path& p) {
    std::size_t i = 0;
    while (i + 1 < p.size() && f[p[i]].is_subset_of(f[p[i + 1]])) ++i;
    for (; i + 1 < p.size(); ++i)
      if (!f[p[i + 1]].is_subset_of(f[p[i]])) return false;
    return true;
  };
  for (Vertex a : component.members()) {
    bool ok = for_each_minimal_path(h, a, step, [&](const Path& p) { return bitonic(p) ? Visit::Continue : Visit::Stop; });
    if (!ok) return false;
  }
  return true;
}

VertexSet s_a_set(const MixedGraph& h, Vertex a) {
  VertexSet s = h.set_of({a});
  h.neighbors(a).for_each([&](Vertex v) {
    if (h.mark_at(a, v) == Mark::Arrow) s.insert(v);
  });
  return s;
}

Trigger alg1_trigger(const MixedGraph& h, Vertex a, Vertex b, const R1213Options& opts,
                     std::vector<Vertex>* witness) {
  if (!h.adjacent(a, b) || h.mark_at(a, b) != Mark::Circle) return Trigger::None;
  const VertexSet sa = s_a_set(h, a);
  StepFn step = opts.any_uncovered_path ? StepFn([](Vertex, Vertex) { return true; }) : pd_step(h);
  VertexSet d = uncovered_reach(h, a, b, step) - sa;
  if (d.empty()) return Trigger::None;
  if (const VertexSet hit = d & ancestors(h, sa); !hit.empty()) {
    if (witness) *witness = hit.members();
    return Trigger::R13;
  }

  MixedGraph hp = h;
  d.for_each([&](Vertex v) {
    h.neighbors(v).for_each([&](Vertex w) {
      if (sa.contains(w) && hp.mark_at(v, w) == Mark::Circle) hp.set_mark(v, w, Mark::Arrow);
    });
  });
  std::vector<VertexSet> f(h.size(), h.empty_set());
  d.for_each([&](Vertex v) { f[v] = f_set(h, sa, v); });
  const auto dm = d.members();
  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex vi : dm)
      for (Vertex vj : hp.neighbors(vi).members()) {
        if (!d.contains(vj) || !hp.is_circle_edge(vi, vj)) continue;
        bool orient = !(f[vi] - f[vj]).empty();
        for (std::size_t k = 0; k < dm.size() && !orient; ++k) {
          Vertex vk = dm[k];
          orient = vk != vj && hp.adjacent(vk, vi) && hp.is_directed(vk, vi) && !hp.adjacent(vk, vj);
        }
        if (orient) {
          hp.set_mark(vi, vj, Mark::Tail);
          hp.set_mark(vj, vi, Mark::Arrow);
          changed = true;
        }
      }
  }
  // Marks only changed at vertices of D, so any new collider is centred there.
  for (Vertex c : dm) {
    auto nb = hp.neighbors(c).members();
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        Vertex x = nb[i], y = nb[j];
        if (hp.adjacent(x, y)) continue;
        if (hp.mark_at(c, x) != Mark::Arrow || hp.mark_at(c, y) != Mark::Arrow) continue;
        if (h.mark_at(c, x) == Mark::Arrow && h.mark_at(c, y) == Mark::Arrow) continue;
        if (witness) *witness = {x, c, y};
        return Trigger::R12;
      }
  }
  return Trigger::None;
}

namespace {

// Vertices K with an uncovered possibly directed path <a, b, ..., K>.
VertexSet pd_reach(const MixedGraph& h, Vertex a, Vertex b) { return uncovered_reach(h, a, b, pd_step(h)); }

}  // namespace

bool r12_statement_applies(const MixedGraph& h, Vertex a, Vertex b) {
  if (!h.adjacent(a, b) || h.mark_at(a, b) != Mark::Circle) return false;
  const VertexSet sa = s_a_set(h, a);
  VertexSet scope = pd_reach(h, a, b) - sa;
  scope.erase(b);
  return find_unbridged_path(h, sa, scope).has_value();
}

Trigger rule_statement_trigger(const MixedGraph& h, Vertex a, Vertex b) {
  if (!h.adjacent(a, b) || h.mark_at(a, b) != Mark::Circle) return Trigger::None;
  const VertexSet sa = s_a_set(h, a);
  if (pd_reach(h, a, b).intersects(ancestors(h, sa))) return Trigger::R13;
  return r12_statement_applies(h, a, b) ? Trigger::R12 : Trigger::None;
}

RuleResult apply_R12_R13(const MixedGraph& h, const R1213Options& opts, std::optional<RuleId> only) {
  RuleResult res{false, h, {}};
  MixedGraph& g = res.graph;
  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex a = 0; a < g.size(); ++a)
      for (Vertex b : g.neighbors(a).members()) {
        if (g.mark_at(a, b) != Mark::Circle) continue;
        std::vector<Vertex> why;
        Trigger t = alg1_trigger(g, a, b, opts, &why);
        if (t == Trigger::None) continue;
        RuleId id = t == Trigger::R12 ? RuleId::R12 : RuleId::R13;
        if (only && *only != id) continue;
        g.set_mark(a, b, Mark::Arrow);
        res.firings.push_back({id, a, b, g.mark_at(a, b), g.mark_at(b, a), std::move(why)});
        changed = true;
      }
  }
  res.changed = !res.firings.empty();
  return res;
}

MixedGraph close_under(const MixedGraph& h, const std::vector<RuleId>& ruleset, std::vector<Firing>* log) {
  // R12 and R13 share one loop; run it once when both are requested.
  bool has12 = std::find(ruleset.begin(), ruleset.end(), RuleId::R12) != ruleset.end();
  bool has13 = std::find(ruleset.begin(), ruleset.end(), RuleId::R13) != ruleset.end();
  MixedGraph g = h;
  for (bool any = true; any;) {
    any = false;
    for (RuleId id : ruleset) {
      RuleResult r;
      if (id == RuleId::R13 && has12) continue;
      if (id == RuleId::R12 && has13)
        r = apply_R12_R13(g);
      else
        r = apply_rule(g, id);
      if (!r.changed) continue;
      g = std::move(r.graph);
      any = true;
      if (log) log->insert(log->end(), r.firings.begin(), r.firings.end());
    }
  }
  return g;
}

MixedGraph incorporate_bk(const MixedGraph& p, const BackgroundKnowledge& bk, const std::vector<RuleId>& ruleset,
                          std::vector<Firing>* log) {
  validate_pmg(p);
  MixedGraph g = p;
  for (const auto& c : bk.items) {
    if (c.at >= g.size() || c.other >= g.size() || !g.adjacent(c.at, c.other))
      throw std::invalid_argument("background knowledge refers to a missing edge");
    if (c.mark == Mark::Circle) continue;
    Mark cur = g.mark_at(c.at, c.other);
    if (cur == c.mark) continue;
    if (cur != Mark::Circle)
      throw ContradictionError("background knowledge puts " + std::string(mark_name(c.mark)) + " at " +
                               g.label(c.at) + " on " + g.label(c.at) + " - " + g.label(c.other) +
                               ", but the graph has " + mark_name(cur));
    g.set_mark(c.at, c.other, c.mark);
  }
  return close_under(g, ruleset, log);
}

}  // namespace pagrules
