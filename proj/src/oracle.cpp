#include "pagrules/oracle.hpp"

#include <deque>
#include <map>
#include <stdexcept>

#include "pagrules/errors.hpp"

namespace pagrules {

MixedGraph dag_graph(const LatentDagSpec& d) {
  std::vector<std::string> labels = d.observed;
  labels.insert(labels.end(), d.latent.begin(), d.latent.end());
  MixedGraph g(labels);
  for (const auto& [from, to] : d.edges) {
    Vertex a = g.index_of(from), b = g.index_of(to);
    if (g.adjacent(a, b)) throw std::invalid_argument("DAG has two edges between " + from + " and " + to);
    g.add_edge(a, b, Mark::Tail, Mark::Arrow);
  }
  if (!is_ancestral(g)) throw std::invalid_argument("DAG contains a directed cycle");
  return g;
}

namespace {

// Inducing path between observed a and b relative to the latent set: every
// observed interior vertex is a collider and every collider is an ancestor of
// a or b. Explored as a walk over (vertex, arrowhead-at-vertex) states.
bool inducing_path(const MixedGraph& g, const VertexSet& latent, Vertex a, Vertex b) {
  if (g.adjacent(a, b)) return true;
  const VertexSet anc = ancestors(g, g.set_of({a, b}));
  std::vector<std::uint8_t> seen(2 * g.size(), 0);
  std::deque<std::pair<Vertex, bool>> queue;
  auto push = [&](Vertex w, bool arrow) {
    auto& s = seen[2 * w + (arrow ? 1 : 0)];
    if (!s) {
      s = 1;
      queue.emplace_back(w, arrow);
    }
  };
  for (Vertex w : g.neighbors(a).members()) push(w, g.mark_at(w, a) == Mark::Arrow);
  while (!queue.empty()) {
    auto [v, arrow_in] = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(v).members()) {
      if (w == a) continue;
      bool collider = arrow_in && g.mark_at(v, w) == Mark::Arrow;
      bool ok = collider ? anc.contains(v) : latent.contains(v);
      if (!ok) continue;
      if (w == b) return true;
      push(w, g.mark_at(w, v) == Mark::Arrow);
    }
  }
  return false;
}

}  // namespace

MixedGraph project_dag_to_mag(const LatentDagSpec& d) {
  MixedGraph g = dag_graph(d);
  const std::size_t no = d.observed.size();
  VertexSet latent(g.size());
  for (Vertex v = no; v < g.size(); ++v) latent.insert(v);
  MixedGraph m(d.observed);
  for (Vertex a = 0; a < no; ++a)
    for (Vertex b = a + 1; b < no; ++b) {
      if (!inducing_path(g, latent, a, b)) continue;
      Mark at_a = ancestors(g, b).contains(a) ? Mark::Tail : Mark::Arrow;
      Mark at_b = ancestors(g, a).contains(b) ? Mark::Tail : Mark::Arrow;
      m.add_edge(a, b, at_a, at_b);
    }
  return m;
}

Fingerprint fingerprint(const MixedGraph& mag) {
  const std::size_t n = mag.size();
  Fingerprint fp;
  fp.skeleton.resize(n * n);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n; ++b) fp.skeleton[a * n + b] = mag.adjacent(a, b);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) {
      if (mag.adjacent(a, b)) continue;
      std::vector<Vertex> rest;
      for (Vertex v = 0; v < n; ++v)
        if (v != a && v != b) rest.push_back(v);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
        VertexSet z(n);
        for (std::size_t i = 0; i < rest.size(); ++i)
          if (mask >> i & 1) z.insert(rest[i]);
        fp.separations.push_back(m_separated(mag, a, b, z));
      }
    }
  return fp;
}

bool markov_equivalent(const MixedGraph& m1, const MixedGraph& m2) {
  if (m1.labels() != m2.labels()) throw std::invalid_argument("markov_equivalent needs graphs on the same vertices");
  return fingerprint(m1) == fingerprint(m2);
}

namespace {

struct Enumerator {
  const MixedGraph& reference;
  const OracleLimits& limits;
  MixedGraph g;
  std::vector<EdgeRecord> open;  // edges with at least one circle
  std::vector<MixedGraph> out;
  std::uint64_t nodes = 0;

  // A new unshielded collider centred at `c` through the edge to `v`.
  bool bad_collider(Vertex c, Vertex v) const {
    if (g.mark_at(c, v) != Mark::Arrow) return false;
    for (Vertex w : g.neighbors(c).members()) {
      if (w == v || g.mark_at(c, w) != Mark::Arrow || g.adjacent(v, w)) continue;
      if (reference.mark_at(c, v) != Mark::Arrow || reference.mark_at(c, w) != Mark::Arrow) return true;
    }
    return false;
  }

  bool reaches_directed(Vertex from, Vertex to) const {
    VertexSet seen(g.size());
    std::vector<Vertex> stack{from};
    seen.insert(from);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      for (Vertex w : g.neighbors(v).members())
        if (!seen.contains(w) && g.is_directed(v, w)) {
          seen.insert(w);
          stack.push_back(w);
        }
    }
    return false;
  }

  void run(std::size_t i) {
    if (++nodes > limits.max_nodes) throw CeilingExceeded("MAG enumeration exceeded the node ceiling");
    if (i == open.size()) {
      if (is_mag(g)) out.push_back(g);
      return;
    }
    const EdgeRecord& e = open[i];
    static constexpr Mark kChoices[] = {Mark::Tail, Mark::Arrow};
    for (Mark mu : kChoices) {
      if (e.mark_u != Mark::Circle && mu != e.mark_u) continue;
      for (Mark mv : kChoices) {
        if (e.mark_v != Mark::Circle && mv != e.mark_v) continue;
        if (mu == Mark::Tail && mv == Mark::Tail) continue;
        g.set_edge(e.u, e.v, mu, mv);
        bool ok = !bad_collider(e.u, e.v) && !bad_collider(e.v, e.u);
        if (ok && g.is_directed(e.u, e.v)) ok = !reaches_directed(e.v, e.u);
        if (ok && g.is_directed(e.v, e.u)) ok = !reaches_directed(e.u, e.v);
        if (ok) run(i + 1);
      }
    }
    g.set_edge(e.u, e.v, e.mark_u, e.mark_v);
  }
};

void check_same_skeleton(const MixedGraph& h, const MixedGraph& p) {
  if (h.labels() != p.labels()) throw std::invalid_argument("graphs have different vertex lists");
  for (Vertex a = 0; a < h.size(); ++a)
    for (Vertex b = 0; b < h.size(); ++b)
      if (h.adjacent(a, b) != p.adjacent(a, b)) throw std::invalid_argument("graphs have different skeletons");
}

// Every non-circle mark of `coarse` is present in `fine`.
bool carries_marks(const MixedGraph& fine, const MixedGraph& coarse) {
  for (const auto& e : coarse.edges()) {
    if (e.mark_u != Mark::Circle && fine.mark_at(e.u, e.v) != e.mark_u) return false;
    if (e.mark_v != Mark::Circle && fine.mark_at(e.v, e.u) != e.mark_v) return false;
  }
  return true;
}

}  // namespace

std::vector<MixedGraph> enumerate_refining_mags(const MixedGraph& h, const MixedGraph& reference,
                                                const OracleLimits& limits) {
  check_same_skeleton(h, reference);
  if (h.size() > limits.max_vertices)
    throw CeilingExceeded("oracle enumeration is limited to " + std::to_string(limits.max_vertices) + " vertices");
  Enumerator en{reference, limits, h, {}, {}, 0};
  for (const auto& e : h.edges()) {
    if (e.mark_u == Mark::Tail && e.mark_v == Mark::Tail) return {};
    if (e.mark_u == Mark::Circle || e.mark_v == Mark::Circle) en.open.push_back(e);
  }
  // Fixed marks may already contain a forbidden collider or cycle; the leaf
  // test catches cycles, colliders are checked here once.
  for (const auto& e : h.edges())
    if (e.mark_u != Mark::Circle && e.mark_v != Mark::Circle && (en.bad_collider(e.u, e.v) || en.bad_collider(e.v, e.u)))
      return {};
  en.run(0);
  return std::move(en.out);
}

OracleBundle enumerate_mec(const MixedGraph& p, const OracleLimits& limits) {
  OracleBundle bundle{p, {}, {}};
  auto mags = enumerate_refining_mags(p, p, limits);
  std::map<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>, std::vector<std::size_t>> classes;
  std::vector<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>> order;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    Fingerprint fp = fingerprint(mags[i]);
    auto key = std::make_pair(std::move(fp.skeleton), std::move(fp.separations));
    auto [it, inserted] = classes.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(i);
  }
  for (const auto& key : order) {
    std::vector<MixedGraph> members;
    for (std::size_t i : classes[key]) members.push_back(mags[i]);
    if (consensus_pag(members) == p) {
      bundle.consistent_mags = std::move(members);
      break;
    }
  }
  return bundle;
}

OracleBundle restrict_bundle(const OracleBundle& mec, const MixedGraph& h) {
  check_same_skeleton(h, mec.reference_pag);
  if (!carries_marks(h, mec.reference_pag)) throw std::invalid_argument("graph does not refine the reference PAG");
  OracleBundle out{mec.reference_pag, {}, {}};
  for (std::size_t i = 0; i < mec.consistent_mags.size(); ++i) {
    if (!carries_marks(mec.consistent_mags[i], h)) continue;
    out.consistent_mags.push_back(mec.consistent_mags[i]);
    if (i < mec.per_mag_dsep.size()) out.per_mag_dsep.push_back(mec.per_mag_dsep[i]);
  }
  return out;
}

OracleBundle enumerate_consistent_mags(const MixedGraph& h, const MixedGraph& p, const OracleLimits& limits) {
  check_same_skeleton(h, p);
  if (!carries_marks(h, p)) throw std::invalid_argument("graph does not refine the reference PAG");
  return restrict_bundle(enumerate_mec(p, limits), h);
}

MixedGraph consensus_pag(const std::vector<MixedGraph>& mags) {
  if (mags.empty()) throw std::invalid_argument("consensus of an empty set of MAGs");
  MixedGraph out = mags.front();
  for (const auto& m : mags)
    for (const auto& e : m.edges()) {
      if (out.mark_at(e.u, e.v) != e.mark_u) out.set_mark(e.u, e.v, Mark::Circle);
      if (out.mark_at(e.v, e.u) != e.mark_v) out.set_mark(e.v, e.u, Mark::Circle);
    }
  return out;
}

MixedGraph consensus_pag(const OracleBundle& bundle) { return consensus_pag(bundle.consistent_mags); }

VertexSet dsep_set(const MixedGraph& g, Vertex x, Vertex y) {
  const VertexSet anc = ancestors(g, g.set_of({x, y}));
  VertexSet out(g.size());
  std::vector<std::uint8_t> seen(2 * g.size(), 0);
  std::deque<std::pair<Vertex, bool>> queue;
  auto push = [&](Vertex w, bool arrow) {
    out.insert(w);
    auto& s = seen[2 * w + (arrow ? 1 : 0)];
    if (!s) {
      s = 1;
      queue.emplace_back(w, arrow);
    }
  };
  for (Vertex w : g.neighbors(x).members())
    if (anc.contains(w)) push(w, g.mark_at(w, x) == Mark::Arrow);
  while (!queue.empty()) {
    auto [v, arrow_in] = queue.front();
    queue.pop_front();
    if (!arrow_in) continue;
    for (Vertex w : g.neighbors(v).members())
      if (w != x && g.mark_at(v, w) == Mark::Arrow && anc.contains(w)) push(w, g.mark_at(w, v) == Mark::Arrow);
  }
  out.erase(x);
  out.erase(y);
  return out;
}

std::optional<VertexSet> adjustment_via_backdoor(const MixedGraph& g, Vertex x, Vertex y) {
  MixedGraph gx = remove_edges_out_of(g, x);
  if (gx.adjacent(x, y)) return std::nullopt;
  VertexSet d = dsep_set(gx, x, y);
  if (d.intersects(possible_descendants(g, x))) return std::nullopt;
  return d;
}

bool is_adjustment_set(const MixedGraph& m, Vertex x, Vertex y, const VertexSet& w) {
  if (w.contains(x) || w.contains(y)) return false;
  VertexSet cn = descendants(m, x) & ancestors(m, y);
  cn.erase(x);
  if (w.intersects(descendants(m, cn))) return false;
  MixedGraph pbd = m;
  cn.for_each([&](Vertex v) {
    if (pbd.adjacent(x, v) && pbd.is_directed(x, v)) pbd.remove_edge(x, v);
  });
  return m_separated(pbd, x, y, w);
}

void annotate_dsep(OracleBundle& bundle, Vertex x, Vertex y) {
  bundle.per_mag_dsep.clear();
  for (const auto& m : bundle.consistent_mags) bundle.per_mag_dsep.push_back(adjustment_via_backdoor(m, x, y));
}

std::set<VertexSet> brute_force_set_determination(const OracleBundle& mec, Vertex x, Vertex y) {
  std::set<VertexSet> out;
  for (const auto& m : mec.consistent_mags) {
    if (!ancestors(m, y).contains(x)) continue;
    if (auto d = adjustment_via_backdoor(m, x, y)) out.insert(*d);
  }
  return out;
}

std::set<VertexSet> brute_force_set_determination(const MixedGraph& p, Vertex x, Vertex y,
                                                  const OracleLimits& limits) {
  return brute_force_set_determination(enumerate_mec(p, limits), x, y);
}

}  // namespace pagrules
