#include "pagrules/queries.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace pagrules {

PathFlags classify_path(const MixedGraph& g, std::span<const Vertex> p) {
  if (p.size() < 2) throw std::invalid_argument("a path needs at least two vertices");
  VertexSet seen(g.size());
  for (Vertex v : p) {
    if (v >= g.size()) throw std::invalid_argument("path vertex out of range");
    if (seen.contains(v)) throw std::invalid_argument("path repeats vertex '" + g.label(v) + "'");
    seen.insert(v);
  }
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (!g.adjacent(p[i], p[i + 1]))
      throw std::invalid_argument("no edge between '" + g.label(p[i]) + "' and '" + g.label(p[i + 1]) + "'");

  PathFlags f;
  f.directed = f.possibly_directed = f.uncovered = f.minimal = f.collider = f.circle = true;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    f.directed = f.directed && g.is_directed(p[i], p[i + 1]);
    f.possibly_directed = f.possibly_directed && possibly_directed_step(g, p[i], p[i + 1]);
    f.circle = f.circle && g.is_circle_edge(p[i], p[i + 1]);
  }
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    f.uncovered = f.uncovered && !g.adjacent(p[i - 1], p[i + 1]);
    f.collider = f.collider && g.mark_at(p[i], p[i - 1]) == Mark::Arrow && g.mark_at(p[i], p[i + 1]) == Mark::Arrow;
  }
  for (std::size_t i = 0; i < p.size() && f.minimal; ++i)
    for (std::size_t j = i + 2; j < p.size(); ++j)
      if (g.adjacent(p[i], p[j])) {
        f.minimal = false;
        break;
      }
  return f;
}

namespace {

// Closure of `s` under the relation "step(from, to)" following edges
// backwards (to -> from) when `backwards` is set.
template <typename Step>
VertexSet closure(const MixedGraph& g, const VertexSet& s, Step step, bool backwards) {
  VertexSet out = s;
  std::vector<Vertex> stack = s.members();
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    g.neighbors(v).for_each([&](Vertex w) {
      if (out.contains(w)) return;
      bool ok = backwards ? step(w, v) : step(v, w);
      if (ok) {
        out.insert(w);
        stack.push_back(w);
      }
    });
  }
  return out;
}

}  // namespace

VertexSet ancestors(const MixedGraph& g, const VertexSet& s) {
  return closure(g, s, [&](Vertex a, Vertex b) { return g.is_directed(a, b); }, true);
}

VertexSet descendants(const MixedGraph& g, const VertexSet& s) {
  return closure(g, s, [&](Vertex a, Vertex b) { return g.is_directed(a, b); }, false);
}

VertexSet possible_ancestors(const MixedGraph& g, const VertexSet& s) {
  return closure(g, s, [&](Vertex a, Vertex b) { return possibly_directed_step(g, a, b); }, true);
}

VertexSet possible_descendants(const MixedGraph& g, const VertexSet& s) {
  return closure(g, s, [&](Vertex a, Vertex b) { return possibly_directed_step(g, a, b); }, false);
}

VertexSet parents(const MixedGraph& g, const VertexSet& s) {
  VertexSet out(g.size());
  s.for_each([&](Vertex v) {
    g.neighbors(v).for_each([&](Vertex p) {
      if (g.is_directed(p, v)) out.insert(p);
    });
  });
  return out;
}

MixedGraph induced(const MixedGraph& g, const VertexSet& keep) {
  MixedGraph out(g.labels());
  for (const auto& e : g.edges())
    if (keep.contains(e.u) && keep.contains(e.v)) out.add_edge(e.u, e.v, e.mark_u, e.mark_v);
  return out;
}

MixedGraph minus(const MixedGraph& g, const VertexSet& drop) { return induced(g, g.all_vertices() - drop); }

MixedGraph remove_edges_out_of(const MixedGraph& g, Vertex x) {
  MixedGraph out = g;
  for (Vertex w : g.neighbors(x).members())
    if (g.mark_at(x, w) == Mark::Tail) out.remove_edge(x, w);
  return out;
}

MixedGraph circle_component(const MixedGraph& g) {
  MixedGraph out(g.labels());
  for (const auto& e : g.edges())
    if (e.mark_u == Mark::Circle && e.mark_v == Mark::Circle) out.add_edge(e.u, e.v, Mark::Circle, Mark::Circle);
  return out;
}

VertexSet circle_component_of(const MixedGraph& g, Vertex v) {
  return closure(g, g.set_of({v}), [&](Vertex a, Vertex b) { return g.is_circle_edge(a, b); }, false);
}

bool same_circle_component(const MixedGraph& g, Vertex u, Vertex v) { return circle_component_of(g, u).contains(v); }

std::vector<std::array<Vertex, 3>> unshielded_colliders(const MixedGraph& g) {
  std::vector<std::array<Vertex, 3>> out;
  for (Vertex b = 0; b < g.size(); ++b) {
    auto nb = g.neighbors(b).members();
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (g.mark_at(b, nb[i]) != Mark::Arrow) continue;
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (g.mark_at(b, nb[j]) != Mark::Arrow) continue;
        if (g.adjacent(nb[i], nb[j])) continue;
        out.push_back({nb[i], b, nb[j]});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool m_separated(const MixedGraph& g, Vertex x, Vertex y, const VertexSet& z) {
  if (x == y) throw std::invalid_argument("m_separated needs two distinct vertices");
  if (z.contains(x) || z.contains(y)) throw std::invalid_argument("conditioning set contains an endpoint");
  const VertexSet an_z = ancestors(g, z);
  const std::size_t n = g.size();
  // State (v, a): walk reached v, a = arrowhead at v on the edge used.
  std::vector<std::uint8_t> seen(2 * n, 0);
  std::deque<std::pair<Vertex, bool>> queue;
  auto push = [&](Vertex w, bool arrow) {
    auto& s = seen[2 * w + (arrow ? 1 : 0)];
    if (s) return;
    s = 1;
    queue.emplace_back(w, arrow);
  };
  for (Vertex w : g.neighbors(x).members()) {
    if (w == y) return false;
    push(w, g.mark_at(w, x) == Mark::Arrow);
  }
  while (!queue.empty()) {
    auto [v, arrow_in] = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(v).members()) {
      bool collider = arrow_in && g.mark_at(v, w) == Mark::Arrow;
      bool pass = collider ? an_z.contains(v) : !z.contains(v);
      if (!pass) continue;
      if (w == y) return false;
      push(w, g.mark_at(w, v) == Mark::Arrow);
    }
  }
  return true;
}

bool is_ancestral(const MixedGraph& g) {
  if (g.has_circles()) throw std::invalid_argument("ancestrality is defined for graphs without circle marks");
  for (const auto& e : g.edges())
    if (e.mark_u == Mark::Tail && e.mark_v == Mark::Tail) return false;
  // Directed cycles: Kahn's algorithm over the directed part.
  const std::size_t n = g.size();
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& e : g.edges()) {
    if (g.is_directed(e.u, e.v)) ++indeg[e.v];
    if (g.is_directed(e.v, e.u)) ++indeg[e.u];
  }
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < n; ++v)
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
  if (removed != n) return false;
  for (const auto& e : g.edges()) {
    if (!g.is_bidirected(e.u, e.v)) continue;
    if (ancestors(g, e.v).contains(e.u) || ancestors(g, e.u).contains(e.v)) return false;
  }
  return true;
}

bool is_maximal(const MixedGraph& g) {
  if (g.has_circles()) throw std::invalid_argument("maximality is defined for graphs without circle marks");
  for (Vertex x = 0; x < g.size(); ++x)
    for (Vertex y = x + 1; y < g.size(); ++y) {
      if (g.adjacent(x, y)) continue;
      VertexSet z = ancestors(g, g.set_of({x, y}));
      z.erase(x);
      z.erase(y);
      if (!m_separated(g, x, y, z)) return false;
    }
  return true;
}

bool is_mag(const MixedGraph& g) { return is_ancestral(g) && is_maximal(g); }

namespace {

std::optional<Path> discriminating_search(const MixedGraph& g, std::optional<Vertex> k, Vertex b, Vertex r) {
  if (b == r || !g.adjacent(b, r)) return std::nullopt;
  if (k && (*k == b || *k == r || g.adjacent(*k, r))) return std::nullopt;
  const std::size_t n = g.size();
  std::vector<Vertex> parent(n, n);
  VertexSet visited(n);
  visited.insert(b);
  visited.insert(r);
  std::deque<Vertex> queue;
  auto interior_ok = [&](Vertex v, Vertex toward_b) {
    return g.mark_at(v, toward_b) == Mark::Arrow && g.is_directed(v, r);
  };
  for (Vertex a : g.neighbors(b).members()) {
    if (a == r || !interior_ok(a, b)) continue;
    visited.insert(a);
    parent[a] = b;
    queue.push_back(a);
  }
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex u : g.neighbors(v).members()) {
      if (u == b || u == r || g.mark_at(v, u) != Mark::Arrow) continue;
      if (!g.adjacent(u, r)) {
        if (k && u != *k) continue;
        Path p{u};
        for (Vertex w = v; w != b; w = parent[w]) p.push_back(w);
        p.push_back(b);
        p.push_back(r);
        return p;
      }
      if (visited.contains(u) || !interior_ok(u, v)) continue;
      visited.insert(u);
      parent[u] = v;
      queue.push_back(u);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Path> discriminating_path(const MixedGraph& g, Vertex k, Vertex b, Vertex r) {
  return discriminating_search(g, k, b, r);
}

std::optional<Path> find_discriminating_path(const MixedGraph& g, Vertex b, Vertex r) {
  return discriminating_search(g, std::nullopt, b, r);
}

bool is_complete(const MixedGraph& g, const VertexSet& s) {
  auto m = s.members();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (!g.adjacent(m[i], m[j])) return false;
  return true;
}

void validate_pmg(const MixedGraph& g) {
  for (const auto& e : g.edges()) {
    bool tail_u = e.mark_u == Mark::Tail, tail_v = e.mark_v == Mark::Tail;
    bool circ_u = e.mark_u == Mark::Circle, circ_v = e.mark_v == Mark::Circle;
    if (tail_u && tail_v)
      throw std::invalid_argument("undirected edge " + g.label(e.u) + " --- " + g.label(e.v) +
                                  " is not allowed without selection bias");
    if ((tail_u && circ_v) || (circ_u && tail_v))
      throw std::invalid_argument("tail-circle edge between " + g.label(e.u) + " and " + g.label(e.v) +
                                  " is not allowed without selection bias");
  }
}

}  // namespace pagrules
