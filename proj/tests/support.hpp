#pragma once

// Helpers shared by the unit tests: fixture loading, random graphs and naive
// reference implementations that work from the definitions by brute force.
// Nothing here calls the library's own path machinery.

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pagrules/generate.hpp"
#include "pagrules/graph.hpp"
#include "pagrules/oracle.hpp"
#include "pagrules/queries.hpp"
#include "pagrules/rules.hpp"
#include "pagrules/text_format.hpp"

#ifndef PAGRULES_FIXTURE_DIR
#define PAGRULES_FIXTURE_DIR "tests/fixtures"
#endif

namespace testsupport {

using namespace pagrules;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fixture {
  std::map<std::string, std::string> sections;
  std::map<std::string, std::string> note;  // key: value lines of the note section

  bool has(const std::string& s) const { return sections.count(s) != 0; }
  MixedGraph pag() const { return parse_graph(sections.at("pag")); }
  ParsedGraph dag() const { return parse_graph_file(sections.at("dag")); }
};

inline Fixture load_fixture(const std::string& name) {
  Fixture f;
  for (auto& [k, v] : split_sections(read_file(std::string(PAGRULES_FIXTURE_DIR) + "/" + name))) f.sections[k] = v;
  if (f.has("note")) {
    std::istringstream in(f.sections["note"]);
    for (std::string line; std::getline(in, line);) {
      auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string value = line.substr(colon + 1);
      while (!value.empty() && value.front() == ' ') value.erase(value.begin());
      f.note[line.substr(0, colon)] = value;
    }
  }
  return f;
}

inline VertexSet labels_to_set(const MixedGraph& g, std::initializer_list<const char*> names) {
  VertexSet s = g.empty_set();
  for (const char* n : names) s.insert(g.index_of(n));
  return s;
}

inline VertexSet words_to_set(const MixedGraph& g, const std::string& words) {
  VertexSet s = g.empty_set();
  std::istringstream in(words);
  for (std::string w; in >> w;) s.insert(g.index_of(w));
  return s;
}

inline LatentDagSpec dag_spec(const ParsedGraph& pg) {
  LatentDagSpec d;
  for (Vertex v = 0; v < pg.graph.size(); ++v)
    (pg.latent.contains(v) ? d.latent : d.observed).push_back(pg.graph.label(v));
  for (const auto& e : pg.graph.edges()) {
    if (pg.graph.is_directed(e.u, e.v))
      d.edges.emplace_back(pg.graph.label(e.u), pg.graph.label(e.v));
    else
      d.edges.emplace_back(pg.graph.label(e.v), pg.graph.label(e.u));
  }
  return d;
}

// Random graph with arbitrary marks (tail-tail and tail-circle excluded).
inline MixedGraph random_mixed_graph(Rng& rng, std::size_t n, double p) {
  MixedGraph g(default_labels(n));
  const Mark marks[] = {Mark::Tail, Mark::Arrow, Mark::Circle};
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      if (!rng.chance(p)) continue;
      Mark a, b;
      do {
        a = marks[rng.below(3)];
        b = marks[rng.below(3)];
      } while ((a == Mark::Tail && b != Mark::Arrow) || (b == Mark::Tail && a != Mark::Arrow));
      g.add_edge(u, v, a, b);
    }
  return g;
}

inline std::vector<Path> all_simple_paths_from(const MixedGraph& g, Vertex start) {
  std::vector<Path> out;
  Path cur{start};
  std::vector<bool> on(g.size(), false);
  on[start] = true;
  std::function<void()> rec = [&] {
    if (cur.size() >= 2) out.push_back(cur);
    for (Vertex w = 0; w < g.size(); ++w) {
      if (on[w] || !g.adjacent(cur.back(), w)) continue;
      on[w] = true;
      cur.push_back(w);
      rec();
      cur.pop_back();
      on[w] = false;
    }
  };
  rec();
  return out;
}

inline std::vector<Path> all_simple_paths(const MixedGraph& g) {
  std::vector<Path> out;
  for (Vertex v = 0; v < g.size(); ++v) {
    auto p = all_simple_paths_from(g, v);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

// Clause-by-clause path classification.
struct NaiveFlags {
  bool directed = true, possibly_directed = true, uncovered = true, minimal = true, collider = true, circle = true;
};

inline NaiveFlags naive_classify(const MixedGraph& g, const Path& p) {
  NaiveFlags f;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    Mark at_i = g.mark_at(p[i], p[i + 1]), at_next = g.mark_at(p[i + 1], p[i]);
    if (!(at_i == Mark::Tail && at_next == Mark::Arrow)) f.directed = false;
    if (at_i == Mark::Arrow || at_next == Mark::Tail) f.possibly_directed = false;
    if (!(at_i == Mark::Circle && at_next == Mark::Circle)) f.circle = false;
  }
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (g.adjacent(p[i - 1], p[i + 1])) f.uncovered = false;
    if (g.mark_at(p[i], p[i - 1]) != Mark::Arrow || g.mark_at(p[i], p[i + 1]) != Mark::Arrow) f.collider = false;
  }
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 2; j < p.size(); ++j)
      if (g.adjacent(p[i], p[j])) f.minimal = false;
  return f;
}

// Possible ancestors of s: start vertices of possibly directed paths into s.
inline VertexSet naive_possible_ancestors(const MixedGraph& g, const VertexSet& s) {
  VertexSet out = s;
  for (const auto& p : all_simple_paths(g))
    if (s.contains(p.back()) && naive_classify(g, p).possibly_directed) out.insert(p.front());
  return out;
}

inline VertexSet naive_ancestors(const MixedGraph& g, const VertexSet& s) {
  VertexSet out = s;
  for (const auto& p : all_simple_paths(g))
    if (s.contains(p.back()) && naive_classify(g, p).directed) out.insert(p.front());
  return out;
}

// d-separation in a DAG via the moralized ancestral graph.
inline bool dag_d_separated(const MixedGraph& dag, Vertex x, Vertex y, const VertexSet& z) {
  const std::size_t n = dag.size();
  std::vector<bool> keep(n, false);
  std::vector<Vertex> stack{x, y};
  z.for_each([&](Vertex v) { stack.push_back(v); });
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (keep[v]) continue;
    keep[v] = true;
    for (Vertex u = 0; u < n; ++u)
      if (dag.adjacent(u, v) && dag.is_directed(u, v)) stack.push_back(u);
  }
  std::vector<std::vector<bool>> moral(n, std::vector<bool>(n, false));
  for (Vertex v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    std::vector<Vertex> pa;
    for (Vertex u = 0; u < n; ++u)
      if (keep[u] && dag.adjacent(u, v) && dag.is_directed(u, v)) {
        pa.push_back(u);
        moral[u][v] = moral[v][u] = true;
      }
    for (std::size_t i = 0; i < pa.size(); ++i)
      for (std::size_t j = i + 1; j < pa.size(); ++j) moral[pa[i]][pa[j]] = moral[pa[j]][pa[i]] = true;
  }
  std::vector<bool> seen(n, false);
  stack = {x};
  seen[x] = true;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (v == y) return false;
    for (Vertex u = 0; u < n; ++u)
      if (keep[u] && moral[v][u] && !seen[u] && !z.contains(u)) {
        seen[u] = true;
        stack.push_back(u);
      }
  }
  return true;
}

// DAG in which every bidirected edge A <-> B of a MAG becomes L -> A, L -> B.
// Observed vertices keep their ids.
inline MixedGraph canonical_dag(const MixedGraph& mag) {
  std::vector<std::string> labels = mag.labels();
  std::vector<std::pair<Vertex, Vertex>> bi;
  for (const auto& e : mag.edges())
    if (mag.is_bidirected(e.u, e.v)) bi.emplace_back(e.u, e.v);
  for (std::size_t i = 0; i < bi.size(); ++i) labels.push_back("_L" + std::to_string(i));
  MixedGraph d(labels);
  for (const auto& e : mag.edges()) {
    if (mag.is_directed(e.u, e.v)) d.add_edge(e.u, e.v, Mark::Tail, Mark::Arrow);
    if (mag.is_directed(e.v, e.u)) d.add_edge(e.v, e.u, Mark::Tail, Mark::Arrow);
  }
  for (std::size_t i = 0; i < bi.size(); ++i) {
    Vertex l = mag.size() + i;
    d.add_edge(l, bi[i].first, Mark::Tail, Mark::Arrow);
    d.add_edge(l, bi[i].second, Mark::Tail, Mark::Arrow);
  }
  return d;
}

inline VertexSet widen(const VertexSet& s, std::size_t universe) {
  VertexSet out(universe);
  s.for_each([&](Vertex v) { out.insert(v); });
  return out;
}

// Small random PAGs for property sweeps; each seed gives one instance.
inline GeneratedInstance small_instance(std::uint64_t seed, std::size_t observed = 5) {
  GenConfig cfg;
  cfg.observed = observed;
  cfg.latents = 1 + seed % 2;
  cfg.edge_prob = 0.45;
  cfg.seed = seed;
  return generate_instance(cfg);
}

}  // namespace testsupport
