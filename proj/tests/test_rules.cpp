#include <doctest.h>

#include <algorithm>

#include "pagrules/errors.hpp"
#include "support.hpp"

using namespace pagrules;
using namespace testsupport;

namespace {

// Unbridged path search by enumeration of every simple path inside scope.
bool naive_unbridged(const MixedGraph& h, const VertexSet& vp, const VertexSet& scope) {
  auto f = [&](Vertex v) { return f_set(h, vp, v); };
  for (const auto& p : all_simple_paths(induced(h, scope))) {
    if (!scope.contains(p.front())) continue;
    auto flags = naive_classify(h, p);
    if (!flags.circle || !flags.uncovered) continue;
    const std::size_t n = p.size() - 1;
    if (!(f(p[0]) - f(p[1])).empty() && !(f(p[n]) - f(p[n - 1])).empty()) return true;
  }
  return false;
}

// Background knowledge drawn from one consistent MAG: each circle of p is
// committed to that MAG's mark with the given probability.
BackgroundKnowledge sample_bk(Rng& rng, const MixedGraph& p, const MixedGraph& mag, double prob) {
  BackgroundKnowledge bk;
  for (const auto& e : p.edges()) {
    if (e.mark_u == Mark::Circle && rng.chance(prob)) bk.items.push_back({e.u, e.v, mag.mark_at(e.u, e.v)});
    if (e.mark_v == Mark::Circle && rng.chance(prob)) bk.items.push_back({e.v, e.u, mag.mark_at(e.v, e.u)});
  }
  return bk;
}

MixedGraph apply_marks(MixedGraph g, const BackgroundKnowledge& bk) {
  for (const auto& c : bk.items) g.set_mark(c.at, c.other, c.mark);
  return g;
}

}  // namespace

TEST_SUITE("rules") {
  TEST_CASE("single classical firings") {
    auto r1 = parse_graph("vertices: A B R\nA --> B\nB o-o R\n");
    auto out1 = apply_rule(r1, RuleId::R1);
    CHECK(out1.changed);
    CHECK(out1.graph.is_directed(1, 2));
    REQUIRE(out1.firings.size() == 1);
    CHECK(out1.firings[0].rule == RuleId::R1);

    auto r2 = parse_graph("vertices: A B R\nA --> B\nB --> R\nA o-o R\n");
    auto out2 = apply_rule(r2, RuleId::R2);
    CHECK(out2.graph.mark_at(2, 0) == Mark::Arrow);
    CHECK(out2.graph.mark_at(0, 2) == Mark::Circle);

    auto none = apply_rule(r2, RuleId::R1);
    CHECK_FALSE(none.changed);
    CHECK(none.graph == r2);
  }

  TEST_CASE("rule names") {
    for (auto id : all_rules()) CHECK(parse_rule_name(rule_name(id)) == id);
    CHECK_FALSE(parse_rule_name("R5").has_value());
    CHECK(classical_rules().size() + 2 == all_rules().size());
  }

  TEST_CASE("contradicting background knowledge") {
    auto p = parse_graph("vertices: A B\nA --> B\n");
    BackgroundKnowledge bk{{{1, 0, Mark::Tail}}};
    CHECK_THROWS_AS(incorporate_bk(p, bk), ContradictionError);
  }

  TEST_CASE("unbridged path relative to two anchors") {
    // D o-o E with C1 only seen from D and C2 only seen from E.
    auto h = parse_graph("vertices: C1 C2 D E\nC1 <-o D\nC2 <-o E\nD o-o E\nC1 <-> C2\n");
    const VertexSet vp = labels_to_set(h, {"C1", "C2"});
    const VertexSet scope = labels_to_set(h, {"D", "E"});
    auto u = find_unbridged_path(h, vp, scope);
    REQUIRE(u.has_value());
    CHECK(u->path.size() == 2);
    CHECK(((u->path == Path{2, 3} && u->witness_first == 0 && u->witness_last == 1) ||
           (u->path == Path{3, 2} && u->witness_first == 1 && u->witness_last == 0)));
    CHECK_FALSE(is_bridged(h, scope, vp));

    // Nested F-sets: both ends see C1, only one sees C2.
    auto n = parse_graph("vertices: C1 C2 D E\nC1 <-o D\nC1 <-o E\nC2 <-o E\nD o-o E\nC1 <-> C2\n");
    CHECK_FALSE(find_unbridged_path(n, vp, scope).has_value());
    CHECK(is_bridged(n, scope, vp));
    CHECK(is_bridged(n, labels_to_set(n, {"D"}), vp));
  }

  TEST_CASE("unbridged search agrees with path enumeration") {
    std::size_t positives = 0;
    for (std::uint64_t seed = 1; seed <= 1200; ++seed) {
      Rng rng(seed * 31);
      const std::size_t n = 4 + seed % 4;
      auto h = random_mixed_graph(rng, n, 0.5);
      VertexSet vp(n), scope(n);
      for (Vertex v = 0; v < n; ++v) (rng.chance(0.35) ? vp : scope).insert(v);
      const bool want = naive_unbridged(h, vp, scope);
      CHECK(find_unbridged_path(h, vp, scope).has_value() == want);
      CHECK(is_bridged(h, scope, vp) == !want);
      positives += want;
    }
    CHECK(positives > 20);
  }

  TEST_CASE("R12 on the clique example") {
    auto f = load_fixture("r12_clique.pag");
    const MixedGraph p = f.pag();
    const Vertex a = p.index_of("A"), b = p.index_of("B");
    const MixedGraph h = incorporate_bk(p, parse_bk(f.sections.at("bk"), p), classical_rules());
    CHECK(h.is_circle_edge(a, b));
    CHECK(s_a_set(h, a) == labels_to_set(h, {"C1", "C2", "A"}));

    // <A,B,D> and <A,B,E> are uncovered possibly directed paths.
    for (const char* end : {"D", "E"}) {
      Path path{a, b, h.index_of(end)};
      auto flags = classify_path(h, path);
      CHECK(flags.uncovered);
      CHECK(flags.possibly_directed);
    }
    auto u = find_unbridged_path(h, s_a_set(h, a), labels_to_set(h, {"D", "E"}));
    REQUIRE(u.has_value());
    CHECK(u->path.size() == 2);

    CHECK(alg1_trigger(h, a, b) == Trigger::R12);
    CHECK(rule_statement_trigger(h, a, b) == Trigger::R12);
    auto r = apply_R12_R13(h);
    REQUIRE(r.firings.size() == 1);
    CHECK(r.firings[0].rule == RuleId::R12);
    // The justification is a new unshielded collider on D or E.
    REQUIRE(r.firings[0].witness.size() == 3);
    const VertexSet centre = h.set_of({r.firings[0].witness[1]});
    CHECK(centre.is_subset_of(labels_to_set(h, {"D", "E"})));
    CHECK(r.graph.mark_at(a, b) == Mark::Arrow);
    CHECK(r.graph.mark_at(b, a) == Mark::Circle);

    const MixedGraph full = incorporate_bk(p, parse_bk(f.sections.at("bk"), p));
    CHECK(full.mark_at(a, b) == Mark::Arrow);
    auto bundle = enumerate_consistent_mags(full, p);
    REQUIRE_FALSE(bundle.consistent_mags.empty());
    for (const auto& m : bundle.consistent_mags) CHECK(m.mark_at(a, b) == Mark::Arrow);
    // D and E are ancestors of S_A in every such MAG.
    for (const auto& m : bundle.consistent_mags) {
      const VertexSet anc = ancestors(m, labels_to_set(m, {"C1", "C2", "A"}));
      CHECK(anc.contains(m.index_of("D")));
      CHECK(anc.contains(m.index_of("E")));
    }
  }

  TEST_CASE("R13 on the chain example") {
    auto f = load_fixture("r13_chain.pag");
    const MixedGraph p = f.pag();
    const Vertex a = p.index_of("A"), b = p.index_of("B"), d = p.index_of("D");
    const MixedGraph h = incorporate_bk(p, parse_bk(f.sections.at("bk"), p), classical_rules());
    CHECK(h.is_circle_edge(a, b));
    CHECK(s_a_set(h, a) == labels_to_set(h, {"A", "C2"}));
    Path path{a, b, d};
    CHECK(classify_path(h, path).uncovered);
    CHECK(classify_path(h, path).possibly_directed);
    CHECK(ancestors(h, s_a_set(h, a)).contains(d));

    CHECK(alg1_trigger(h, a, b) == Trigger::R13);
    CHECK(rule_statement_trigger(h, a, b) == Trigger::R13);
    auto r = apply_R12_R13(h);
    REQUIRE(r.firings.size() == 1);
    CHECK(r.firings[0].rule == RuleId::R13);
    CHECK(r.firings[0].witness == std::vector<Vertex>{d});
    CHECK(r.graph.mark_at(a, b) == Mark::Arrow);
    CHECK(r.graph.mark_at(b, a) == Mark::Circle);

    auto bundle = enumerate_consistent_mags(r.graph, p);
    REQUIRE_FALSE(bundle.consistent_mags.empty());
    for (const auto& m : bundle.consistent_mags) CHECK(m.mark_at(a, b) == Mark::Arrow);
  }

  TEST_CASE("graphs without candidate edges are left alone") {
    auto g = parse_graph("vertices: A B C\nA --> B\nB <-> C\n");
    auto r = apply_R12_R13(g);
    CHECK_FALSE(r.changed);
    CHECK(r.graph == g);
  }

  TEST_CASE("empty background knowledge leaves a PAG unchanged") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const auto inst = small_instance(seed);
      CHECK(incorporate_bk(inst.pag, {}) == inst.pag);
    }
  }

  TEST_CASE("orientations from sampled knowledge are sound") {
    std::size_t oriented = 0;
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
      const auto inst = small_instance(seed, 5 + seed % 2);
      Rng rng(seed);
      const auto& mags = inst.mec.consistent_mags;
      const MixedGraph& truth = mags[rng.below(mags.size())];
      const auto bk = sample_bk(rng, inst.pag, truth, 0.3);
      std::vector<Firing> log;
      const MixedGraph out = incorporate_bk(inst.pag, bk, all_rules(), &log);
      const auto consistent = restrict_bundle(inst.mec, apply_marks(inst.pag, bk));
      REQUIRE_FALSE(consistent.consistent_mags.empty());
      for (const auto& e : out.edges()) {
        for (const auto& m : consistent.consistent_mags) {
          if (e.mark_u != Mark::Circle) CHECK(m.mark_at(e.u, e.v) == e.mark_u);
          if (e.mark_v != Mark::Circle) CHECK(m.mark_at(e.v, e.u) == e.mark_v);
        }
        if (e.mark_u != Mark::Circle) CHECK(truth.mark_at(e.u, e.v) == e.mark_u);
      }
      oriented += log.size();
    }
    CHECK(oriented > 0);
  }

  TEST_CASE("loop and statement checkers agree") {
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
      const auto inst = small_instance(seed + 500, 6);
      Rng rng(seed);
      const auto& mags = inst.mec.consistent_mags;
      const auto bk = sample_bk(rng, inst.pag, mags[rng.below(mags.size())], 0.3);
      const MixedGraph h = incorporate_bk(inst.pag, bk, classical_rules());
      for (const auto& e : h.edges())
        for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
          if (h.mark_at(a, b) != Mark::Circle) continue;
          const bool loop = alg1_trigger(h, a, b) != Trigger::None;
          const bool stmt = rule_statement_trigger(h, a, b) != Trigger::None;
          CHECK(loop == stmt);
        }
    }
  }

  TEST_CASE("closure is order independent and monotone") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const auto inst = small_instance(seed + 900, 6);
      Rng rng(seed);
      const auto& mags = inst.mec.consistent_mags;
      const auto bk = sample_bk(rng, inst.pag, mags[rng.below(mags.size())], 0.35);
      const MixedGraph start = apply_marks(inst.pag, bk);
      auto forward = all_rules();
      auto backward = forward;
      std::reverse(backward.begin(), backward.end());
      const MixedGraph a = close_under(start, forward);
      const MixedGraph b = close_under(start, backward);
      CHECK(a == b);
      CHECK(a.circle_count() <= start.circle_count());
      for (const auto& e : start.edges()) {
        if (e.mark_u != Mark::Circle) CHECK(a.mark_at(e.u, e.v) == e.mark_u);
        if (e.mark_v != Mark::Circle) CHECK(a.mark_at(e.v, e.u) == e.mark_v);
      }
    }
  }
}
