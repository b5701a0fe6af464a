#include <doctest.h>

#include <algorithm>

#include "pagrules/errors.hpp"
#include "pagrules/set_determination.hpp"
#include "support.hpp"

using namespace pagrules;
using namespace testsupport;

namespace {

LatentDagSpec spec(std::vector<std::string> obs, std::vector<std::string> lat,
                   std::vector<std::pair<std::string, std::string>> edges) {
  return LatentDagSpec{std::move(obs), std::move(lat), std::move(edges)};
}

// Inducing path relative to the latents between observed a and b: every
// observed interior vertex is a collider and every collider is an ancestor of
// a or b. Checked over every simple path of the DAG.
bool has_inducing_path(const MixedGraph& dag, std::size_t observed, Vertex a, Vertex b) {
  const VertexSet anc = naive_ancestors(dag, dag.set_of({a, b}));
  for (const auto& p : all_simple_paths_from(dag, a)) {
    if (p.back() != b) continue;
    bool ok = true;
    for (std::size_t i = 1; i + 1 < p.size() && ok; ++i) {
      bool collider = dag.mark_at(p[i], p[i - 1]) == Mark::Arrow && dag.mark_at(p[i], p[i + 1]) == Mark::Arrow;
      if (p[i] < observed && !collider) ok = false;
      if (collider && !anc.contains(p[i])) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

// D-SEP by enumeration: V is in the set when a collider path from x ends at V
// and every vertex on it after x is an ancestor of x or y.
VertexSet naive_dsep(const MixedGraph& g, Vertex x, Vertex y) {
  const VertexSet anc = naive_ancestors(g, g.set_of({x, y}));
  VertexSet out = g.empty_set();
  for (const auto& p : all_simple_paths_from(g, x)) {
    if (p.back() == y) continue;
    bool ok = true;
    for (std::size_t i = 1; i < p.size() && ok; ++i) {
      if (!anc.contains(p[i])) ok = false;
      if (i + 1 < p.size() && (g.mark_at(p[i], p[i - 1]) != Mark::Arrow || g.mark_at(p[i], p[i + 1]) != Mark::Arrow))
        ok = false;
    }
    if (ok) out.insert(p.back());
  }
  return out;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("projection of small DAGs") {
    auto m1 = project_dag_to_mag(spec({"X", "Y"}, {}, {{"X", "Y"}}));
    CHECK(m1.is_directed(0, 1));
    CHECK(m1.edge_count() == 1);

    auto m2 = project_dag_to_mag(spec({"X", "Y"}, {"L"}, {{"L", "X"}, {"L", "Y"}}));
    CHECK(m2.is_bidirected(0, 1));

    auto m3 = project_dag_to_mag(spec({"X", "M", "Y"}, {"L"}, {{"X", "M"}, {"M", "Y"}, {"L", "X"}, {"L", "M"}}));
    // X -> M is the causal direction; the latent does not change it.
    CHECK(m3.is_directed(m3.index_of("X"), m3.index_of("M")));
    CHECK(m3.is_directed(m3.index_of("M"), m3.index_of("Y")));
    CHECK_FALSE(m3.adjacent(m3.index_of("X"), m3.index_of("Y")));

    CHECK_THROWS_AS(project_dag_to_mag(spec({"A", "B"}, {}, {{"A", "B"}, {"B", "A"}})), std::invalid_argument);
  }

  TEST_CASE("projection adjacency matches inducing-path enumeration") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      Rng rng(seed);
      const std::size_t obs = 4 + seed % 2, lat = 1 + seed % 3;
      std::vector<std::string> names = default_labels(obs);
      for (std::size_t i = 0; i < lat; ++i) names.push_back("L" + std::to_string(i));
      std::vector<std::size_t> order(obs + lat);
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      rng.shuffle(order);
      LatentDagSpec d;
      d.observed.assign(names.begin(), names.begin() + obs);
      d.latent.assign(names.begin() + obs, names.end());
      for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
          if (rng.chance(0.4)) d.edges.emplace_back(names[order[i]], names[order[j]]);
      const MixedGraph dag = dag_graph(d);
      const MixedGraph mag = project_dag_to_mag(d);
      CHECK(is_mag(mag));
      const VertexSet all = dag.all_vertices();
      for (Vertex a = 0; a < obs; ++a)
        for (Vertex b = a + 1; b < obs; ++b) {
          CHECK(mag.adjacent(a, b) == has_inducing_path(dag, obs, a, b));
          if (!mag.adjacent(a, b)) continue;
          const bool a_anc_b = naive_ancestors(dag, dag.set_of({b})).contains(a);
          const bool b_anc_a = naive_ancestors(dag, dag.set_of({a})).contains(b);
          CHECK(mag.mark_at(a, b) == (a_anc_b ? Mark::Tail : Mark::Arrow));
          CHECK(mag.mark_at(b, a) == (b_anc_a ? Mark::Tail : Mark::Arrow));
        }
      (void)all;
    }
  }

  TEST_CASE("m-separation agrees with d-separation on the canonical DAG") {
    std::size_t checked = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const auto inst = small_instance(seed, 5 + seed % 2);
      const MixedGraph& mag = inst.mag;
      const MixedGraph dag = canonical_dag(mag);
      const std::size_t n = mag.size();
      for (Vertex x = 0; x < n; ++x)
        for (Vertex y = x + 1; y < n; ++y)
          for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
            if ((bits >> x & 1) || (bits >> y & 1)) continue;
            VertexSet z(n), zd(dag.size());
            for (Vertex v = 0; v < n; ++v)
              if (bits >> v & 1) {
                z.insert(v);
                zd.insert(v);
              }
            const bool m = m_separated(mag, x, y, z);
            CHECK(m == m_separated(mag, y, x, z));
            CHECK(m == dag_d_separated(dag, x, y, zd));
            ++checked;
          }
    }
    CHECK(checked > 1000);
  }

  TEST_CASE("markov equivalence examples") {
    auto ab = parse_graph("vertices: A B\nA --> B\n");
    auto ab_bi = parse_graph("vertices: A B\nA <-> B\n");
    CHECK(markov_equivalent(ab, ab));
    CHECK(markov_equivalent(ab, ab_bi));
    auto collider = parse_graph("vertices: A B C\nA --> B\nC --> B\n");
    auto chain = parse_graph("vertices: A B C\nA --> B\nB --> C\n");
    CHECK_FALSE(markov_equivalent(collider, chain));
  }

  TEST_CASE("consistent MAGs of a single circle edge") {
    auto p = parse_graph("vertices: A B\nA o-o B\n");
    auto bundle = enumerate_consistent_mags(p, p);
    // A -> B, A <- B and A <-> B are all Markov equivalent on two vertices.
    CHECK(bundle.consistent_mags.size() == 3);
    CHECK(consensus_pag(bundle) == p);

    auto fixed = parse_graph("vertices: A B C\nA --> B\nC --> B\n");
    auto b2 = enumerate_consistent_mags(fixed, fixed);
    REQUIRE(b2.consistent_mags.size() == 1);
    CHECK(b2.consistent_mags[0] == fixed);
    CHECK(consensus_pag(b2) == fixed);
  }

  TEST_CASE("consensus round trip on generated PAGs") {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
      const auto inst = small_instance(seed);
      const auto bundle = enumerate_consistent_mags(inst.pag, inst.pag);
      REQUIRE_FALSE(bundle.consistent_mags.empty());
      CHECK(consensus_pag(bundle) == inst.pag);
      for (const auto& m : bundle.consistent_mags) {
        CHECK(is_mag(m));
        CHECK(markov_equivalent(m, inst.mag));
      }
      // Unshielded colliders are shared by the whole class.
      const auto uc = unshielded_colliders(inst.mag);
      for (const auto& m : bundle.consistent_mags) CHECK(unshielded_colliders(m) == uc);
    }
  }

  TEST_CASE("restricting a class to a refinement") {
    auto p = parse_graph("vertices: A B\nA o-o B\n");
    auto h = parse_graph("vertices: A B\nA o-> B\n");
    auto bundle = enumerate_consistent_mags(h, p);
    CHECK(bundle.consistent_mags.size() == 2);
    for (const auto& m : bundle.consistent_mags) CHECK(m.mark_at(1, 0) == Mark::Arrow);
    auto wrong = parse_graph("vertices: A B\nA --> B\n");
    auto q = parse_graph("vertices: A B\nA <-> B\n");
    CHECK_THROWS_AS(enumerate_consistent_mags(wrong, q), std::invalid_argument);
    CHECK_THROWS_AS(consensus_pag(OracleBundle{}), std::invalid_argument);
  }

  TEST_CASE("D-SEP examples") {
    auto g = parse_graph("vertices: X V Y\nX <-> V\nV --> Y\n");
    CHECK(dsep_set(g, 0, 2) == g.set_of({1}));
    auto h = parse_graph("vertices: X Y\nX --> Y\n");
    CHECK(dsep_set(h, 0, 1).empty());
  }

  TEST_CASE("D-SEP matches collider-path enumeration") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const auto inst = small_instance(seed, 5 + seed % 3);
      const MixedGraph& m = inst.mag;
      for (Vertex x = 0; x < m.size(); ++x)
        for (Vertex y = 0; y < m.size(); ++y)
          if (x != y) CHECK(dsep_set(m, x, y) == naive_dsep(m, x, y));
    }
  }

  TEST_CASE("backdoor adjustment examples") {
    auto xy = parse_graph("vertices: X Y\nX --> Y\n");
    auto a = adjustment_via_backdoor(xy, 0, 1);
    REQUIRE(a.has_value());
    CHECK(a->empty());

    auto conf = parse_graph("vertices: Z X Y\nZ --> X\nZ --> Y\nX --> Y\n");
    auto b = adjustment_via_backdoor(conf, 1, 2);
    REQUIRE(b.has_value());
    CHECK(*b == conf.set_of({0}));

    auto bi = parse_graph("vertices: X Y\nX <-> Y\n");
    CHECK_FALSE(adjustment_via_backdoor(bi, 0, 1).has_value());
  }

  TEST_CASE("adjustment criterion examples") {
    auto conf = parse_graph("vertices: Z X Y\nZ --> X\nZ --> Y\nX --> Y\n");
    CHECK(is_adjustment_set(conf, 1, 2, conf.set_of({0})));
    CHECK_FALSE(is_adjustment_set(conf, 1, 2, conf.empty_set()));
    auto xy = parse_graph("vertices: X Y\nX --> Y\n");
    CHECK(is_adjustment_set(xy, 0, 1, xy.empty_set()));
  }

  TEST_CASE("backdoor sets pass the adjustment criterion") {
    std::size_t hits = 0;
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
      const auto inst = small_instance(seed, 5 + seed % 2);
      for (const auto& m : inst.mec.consistent_mags)
        for (Vertex x = 0; x < m.size(); ++x)
          for (Vertex y = 0; y < m.size(); ++y) {
            if (x == y || !ancestors(m, y).contains(x)) continue;
            if (auto d = adjustment_via_backdoor(m, x, y)) {
              CHECK(is_adjustment_set(m, x, y, *d));
              ++hits;
            }
          }
    }
    CHECK(hits > 50);
  }

  TEST_CASE("brute-force set determination examples") {
    auto xy = parse_graph("vertices: X Y\nX --> Y\n");
    auto s1 = brute_force_set_determination(xy, 0, 1);
    REQUIRE(s1.size() == 1);
    CHECK(s1.begin()->empty());

    auto circ = parse_graph("vertices: X Y\nX o-o Y\n");
    auto s2 = brute_force_set_determination(circ, 0, 1);
    REQUIRE(s2.size() == 1);
    CHECK(s2.begin()->empty());
  }

  TEST_CASE("enumeration ceiling") {
    OracleLimits tight;
    tight.max_vertices = 3;
    auto g = parse_graph("vertices: A B C D\nA o-o B\nB o-o C\nC o-o D\n");
    CHECK_THROWS_AS(enumerate_mec(g, tight), CeilingExceeded);
  }
}
