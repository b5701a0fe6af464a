// Searches generated PAGs for graphs that reproduce the worked examples used
// by the fixture tests, then writes them with the role labels the tests use.
//
//   fixture_search r12|r13|block-min|block-grow [--max-seeds N] [--first-seed S]

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pagrules/errors.hpp"
#include "pagrules/generate.hpp"
#include "pagrules/oracle.hpp"
#include "pagrules/rules.hpp"
#include "pagrules/set_determination.hpp"
#include "pagrules/text_format.hpp"

using namespace pagrules;

namespace {

using Roles = std::map<Vertex, std::string>;

std::map<std::string, long> g_reached;  // how far candidates get, for tuning

struct Found {
  Roles roles;
  std::string bk;  // written with the original labels, relabelled on output
  std::vector<std::pair<std::string, VertexSet>> sets;  // written to the note section
};

std::string relabel(const std::string& label, const std::map<std::string, std::string>& names) {
  auto it = names.find(label);
  return it == names.end() ? label : it->second;
}

void emit(const GeneratedInstance& inst, const Found& f) {
  const MixedGraph& p = inst.pag;
  std::map<std::string, std::string> names;
  std::set<std::string> used;
  for (const auto& [v, name] : f.roles) {
    names[p.label(v)] = name;
    used.insert(name);
  }
  const char* spare[] = {"A", "B", "C", "F", "G", "H", "J", "K", "N", "P", "Q", "R"};
  std::size_t next = 0;
  for (Vertex v = 0; v < p.size(); ++v) {
    if (names.count(p.label(v))) continue;
    if (!used.count(p.label(v))) {
      names[p.label(v)] = p.label(v);
      used.insert(p.label(v));
      continue;
    }
    while (used.count(spare[next])) ++next;
    names[p.label(v)] = spare[next];
    used.insert(spare[next]);
  }
  std::vector<std::string> labels;
  for (Vertex v = 0; v < p.size(); ++v) labels.push_back(names[p.label(v)]);
  MixedGraph out(labels);
  for (const auto& e : p.edges()) out.add_edge(e.u, e.v, e.mark_u, e.mark_v);

  std::cout << "# dag\nvertices:";
  for (const auto& o : inst.dag.observed) std::cout << ' ' << relabel(o, names);
  std::cout << '\n';
  if (!inst.dag.latent.empty()) {
    std::cout << "latent:";
    for (const auto& l : inst.dag.latent) std::cout << ' ' << l;
    std::cout << '\n';
  }
  for (const auto& [a, b] : inst.dag.edges) std::cout << relabel(a, names) << " --> " << relabel(b, names) << '\n';
  std::cout << "# pag\n" << serialize_graph(out);
  if (!f.bk.empty()) {
    std::cout << "# bk\n";
    MixedGraph bkg = parse_graph("vertices: " + [&] {
      std::string s;
      for (Vertex v = 0; v < p.size(); ++v) s += p.label(v) + " ";
      return s;
    }() + "\n" + f.bk);
    for (const auto& e : bkg.edges())
      std::cout << names[p.label(e.u)] << ' ' << edge_core(e.mark_u, e.mark_v) << ' ' << names[p.label(e.v)] << '\n';
  }
  if (!f.sets.empty()) {
    std::cout << "# note\nx: X\ny: Y\n";
    for (const auto& [name, set] : f.sets) {
      std::cout << name << ':';
      for (Vertex v : set.members()) std::cout << ' ' << names[p.label(v)];
      std::cout << '\n';
    }
  }
}

bool all_mags_arrow_at(const OracleBundle& b, Vertex a, Vertex other) {
  if (b.consistent_mags.empty()) return false;
  for (const auto& m : b.consistent_mags)
    if (m.mark_at(a, other) != Mark::Arrow) return false;
  return true;
}

bool bk_consistent(const OracleBundle& mec, const BackgroundKnowledge& bk) {
  for (const auto& m : mec.consistent_mags) {
    bool ok = true;
    for (const auto& c : bk.items) ok = ok && m.mark_at(c.at, c.other) == c.mark;
    if (ok) return true;
  }
  return false;
}

std::string bk_line(const MixedGraph& p, Vertex u, Vertex v, Mark mu, Mark mv) {
  return p.label(u) + " " + edge_core(mu, mv) + " " + p.label(v) + "\n";
}

std::optional<Found> search_r12(const GeneratedInstance& inst) {
  const MixedGraph& p = inst.pag;
  const std::size_t n = p.size();
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b : p.neighbors(a).members()) {
      if (!p.is_circle_edge(a, b)) continue;
      auto cands = p.neighbors(a).members();
      for (Vertex c1 : cands)
        for (Vertex c2 : cands) {
          if (c1 >= c2 || c1 == b || c2 == b) continue;
          if (p.mark_at(a, c1) != Mark::Circle || p.mark_at(a, c2) != Mark::Circle) continue;
          BackgroundKnowledge bk{{{a, c1, Mark::Arrow}, {a, c2, Mark::Arrow}}};
          if (!bk_consistent(inst.mec, bk)) continue;
          MixedGraph h0;
          try {
            h0 = incorporate_bk(p, bk, classical_rules());
          } catch (const ContradictionError&) {
            continue;
          }
          ++g_reached["1 bk applied"];
          if (!h0.is_circle_edge(a, b)) continue;
          const VertexSet sa = s_a_set(h0, a);
          if (sa != h0.set_of({a, c1, c2})) continue;
          ++g_reached["2 S_A"];
          if (rule_statement_trigger(h0, a, b) != Trigger::None) ++g_reached["3 any trigger"];
          if (alg1_trigger(h0, a, b) != Trigger::R12 || rule_statement_trigger(h0, a, b) != Trigger::R12) continue;
          ++g_reached["4 R12"];
          const VertexSet anc_sa = ancestors(h0, sa);
          for (Vertex d = 0; d < n; ++d)
            for (Vertex e = 0; e < n; ++e) {
              if (d == e || sa.contains(d) || sa.contains(e) || d == b || e == b) continue;
              if (!h0.adjacent(d, e) || !h0.is_circle_edge(d, e)) continue;
              if (h0.adjacent(a, d) || h0.adjacent(a, e) || !h0.adjacent(b, d) || !h0.adjacent(b, e)) continue;
              if (!possibly_directed_step(h0, a, b) || !possibly_directed_step(h0, b, d) ||
                  !possibly_directed_step(h0, b, e))
                continue;
              const VertexSet fd = f_set(h0, sa, d), fe = f_set(h0, sa, e);
              if (!fd.contains(c1) || fe.contains(c1) || !fe.contains(c2) || fd.contains(c2)) continue;
              if (anc_sa.contains(d) || anc_sa.contains(e)) continue;
              ++g_reached["5 path"];
              const MixedGraph full = incorporate_bk(p, bk, all_rules());
              if (full.mark_at(a, b) != Mark::Arrow || full.mark_at(b, a) != Mark::Circle) continue;
              if (!all_mags_arrow_at(restrict_bundle(inst.mec, h0), a, b)) continue;
              Found f;
              f.roles = {{a, "A"}, {b, "B"}, {c1, "C1"}, {c2, "C2"}, {d, "D"}, {e, "E"}};
              f.bk = bk_line(p, c1, a, Mark::Circle, Mark::Arrow) + bk_line(p, c2, a, Mark::Circle, Mark::Arrow);
              return f;
            }
        }
    }
  return std::nullopt;
}

std::optional<Found> search_r13(const GeneratedInstance& inst) {
  const MixedGraph& p = inst.pag;
  const std::size_t n = p.size();
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b : p.neighbors(a).members()) {
      if (!p.is_circle_edge(a, b)) continue;
      for (Vertex c2 : p.neighbors(a).members()) {
        if (c2 == b) continue;
        for (Vertex d : p.neighbors(c2).members()) {
          if (d == a || d == b || p.adjacent(a, d) || !p.adjacent(b, d)) continue;
          BackgroundKnowledge bk{{{a, c2, Mark::Arrow}, {c2, a, Mark::Arrow}, {d, c2, Mark::Tail}, {c2, d, Mark::Arrow}}};
          bool fresh = p.mark_at(a, c2) == Mark::Circle || p.mark_at(c2, a) == Mark::Circle ||
                       p.mark_at(d, c2) == Mark::Circle || p.mark_at(c2, d) == Mark::Circle;
          if (!fresh || !bk_consistent(inst.mec, bk)) continue;
          MixedGraph h0;
          try {
            h0 = incorporate_bk(p, bk, classical_rules());
          } catch (const ContradictionError&) {
            continue;
          }
          if (!h0.is_circle_edge(a, b)) continue;
          const VertexSet sa = s_a_set(h0, a);
          if (sa != h0.set_of({a, c2})) continue;
          if (!possibly_directed_step(h0, a, b) || !possibly_directed_step(h0, b, d)) continue;
          if (!ancestors(h0, sa).contains(d)) continue;
          if (alg1_trigger(h0, a, b) != Trigger::R13 || rule_statement_trigger(h0, a, b) != Trigger::R13) continue;
          const MixedGraph full = incorporate_bk(p, bk, all_rules());
          if (full.mark_at(a, b) != Mark::Arrow || full.mark_at(b, a) != Mark::Circle) continue;
          if (!all_mags_arrow_at(restrict_bundle(inst.mec, h0), a, b)) continue;
          Found f;
          f.roles = {{a, "A"}, {b, "B"}, {c2, "C2"}, {d, "D"}};
          f.bk = bk_line(p, c2, a, Mark::Arrow, Mark::Arrow) + bk_line(p, d, c2, Mark::Tail, Mark::Arrow);
          return f;
        }
      }
    }
  return std::nullopt;
}


// block-min: a PAG with two valid transformations at X; for one of them and
// W = {} the bounds are S_min = {E}, S_max = {B,D,E} and the rule-driven
// update returns {E}. block-grow: a maximal local MAG with S_0 = S_min =
// {C1,C2}, an unbridged path D o-o E and the update returning {C1,C2,B}.
// The second shape was never found by search; its fixture is hand-built.
std::optional<Found> search_block(const GeneratedInstance& inst, bool primed) {
  const MixedGraph& p = inst.pag;
  const std::size_t n = p.size();
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = 0; y < n; ++y) {
      if (x == y || !possible_ancestors(p, y).contains(x)) continue;
      const auto cn = circle_neighbors_at(p, x).members();
      std::vector<VertexSet> valid;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cn.size()); ++mask) {
        VertexSet c(n);
        for (std::size_t i = 0; i < cn.size(); ++i)
          if (mask >> i & 1) c.insert(cn[i]);
        if (!valid_local_transformation(p, {x, c})) continue;
        try {
          maximal_local_mag(p, {x, c});
        } catch (const ContradictionError&) {
          continue;
        }
        valid.push_back(c);
      }
      if (!primed && valid.size() < 2) continue;
      for (const VertexSet& c : valid) {
        const MixedGraph m = maximal_local_mag(p, {x, c}).graph;
        const VertexSet w(n);
        if (!is_potential_adjustment_set(m, w, x, y)) continue;
        ++g_reached["f1 potential"];
        const BlockSetBounds b = block_set_bounds(m, w, x, y);
        // The quoted bounds list the blocking vertices other than Y itself.
        VertexSet smin = b.s_min, smax = b.s_max;
        smin.erase(y);
        smax.erase(y);
        const VertexSet start = s0(m, w, b.bar_w, x, y);
        if (!b.bar_w.empty()) ++g_reached["f2 nonempty bar_w"];
        if (smin.size() == 2) ++g_reached["f3 two blockers"];
        if (start != smin) continue;
        const auto upd = update_s(m, x, y, w);
        if (!upd) continue;
        if (*upd != start) ++g_reached["f4 update grew S"];
        if (!primed) {
          if (smin.size() != 1 || smax.size() != 3 || *upd != smin) continue;
          if (!check_prop2_conditions(m, x, y, w, smin) || check_prop2_conditions(m, x, y, w, smax)) continue;
          const auto others = (smax - smin).members();
          Found f;
          f.roles = {{x, "X"}, {y, "Y"}, {smin.members()[0], "E"}, {others[0], "B"}, {others[1], "D"}};
          if (f.roles.size() != 5) continue;
          f.sets.emplace_back("m2", c);
          for (const VertexSet& c1 : valid)
            if (c1 != c) {
              f.sets.emplace_back("m1", c1);
              break;
            }
          return f;
        }
        if (smin.size() != 2 || upd->size() != 3 || !smin.is_subset_of(*upd)) continue;
        if (check_prop2_conditions(m, x, y, w, smin) || !check_prop2_conditions(m, x, y, w, *upd)) continue;
        const VertexSet region = possible_descendants(minus(m, start), b.bar_w);
        const auto path = find_unbridged_path(m, start, region);
        if (!path || path->path.size() != 2) continue;
        const Vertex bv = (*upd - smin).members()[0];
        const auto cs = smin.members();
        Roles roles{{x, "X"}, {y, "Y"}, {cs[0], "C1"}, {cs[1], "C2"}, {bv, "B"}, {path->path[0], "D"}, {path->path[1], "E"}};
        if (roles.size() != 7) continue;
        Found f;
        f.roles = roles;
        f.sets.emplace_back("mprime", c);
        return f;
      }
    }
  return std::nullopt;
}

// Random latent DAG over `labels` whose observed adjacencies include every
// required pair and a random subset of the optional ones. Each pair becomes a
// directed edge along a random order or a latent common cause.
LatentDagSpec template_dag(const std::vector<std::string>& labels,
                           const std::vector<std::pair<std::string, std::string>>& required,
                           const std::vector<std::pair<std::string, std::string>>& optional, Rng& rng) {
  std::vector<std::string> order = labels;
  rng.shuffle(order);
  auto pos = [&](const std::string& l) { return std::find(order.begin(), order.end(), l) - order.begin(); };
  LatentDagSpec d;
  d.observed = labels;
  auto add = [&](const std::string& a, const std::string& b) {
    if (rng.chance(0.3)) {
      std::string l = "L" + std::to_string(d.latent.size() + 1);
      d.latent.push_back(l);
      d.edges.emplace_back(l, a);
      d.edges.emplace_back(l, b);
    } else if (pos(a) < pos(b)) {
      d.edges.emplace_back(a, b);
    } else {
      d.edges.emplace_back(b, a);
    }
  };
  for (const auto& [a, b] : required) add(a, b);
  for (const auto& [a, b] : optional)
    if (rng.chance(0.5)) add(a, b);
  return d;
}

std::vector<std::pair<std::string, std::string>> pairs_of(const std::string& spec) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto dash = item.find('-');
    if (dash != std::string::npos) out.emplace_back(item.substr(0, dash), item.substr(dash + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search generated PAGs for fixture reconstructions"};
  std::string scenario;
  std::uint64_t first = 1, count = 20000;
  std::size_t min_obs = 6, max_obs = 7;
  app.add_option("scenario", scenario)->required()->check(CLI::IsMember({"r12", "r13", "block-min", "block-grow"}));
  app.add_option("--first-seed", first);
  app.add_option("--max-seeds", count);
  app.add_option("--min-observed", min_obs);
  app.add_option("--max-observed", max_obs);
  std::string dag_file;
  app.add_option("--dag", dag_file, "test one latent DAG (graph file with directed edges) instead of searching");
  std::string required, optional;
  app.add_option("--require", required, "template mode: comma-separated adjacencies such as A-B,B-D");
  app.add_option("--optional", optional, "template mode: adjacencies added with probability 1/2");
  CLI11_PARSE(app, argc, argv);

  auto run = [&](const GeneratedInstance& inst) -> std::optional<Found> {
    if (scenario == "r12") return search_r12(inst);
    if (scenario == "r13") return search_r13(inst);
    return search_block(inst, scenario == "block-grow");
  };
  if (!dag_file.empty()) {
    std::ifstream in(dag_file);
    std::stringstream text;
    text << in.rdbuf();
    const ParsedGraph pg = parse_graph_file(text.str());
    GeneratedInstance inst;
    for (Vertex v = 0; v < pg.graph.size(); ++v)
      (pg.latent.contains(v) ? inst.dag.latent : inst.dag.observed).push_back(pg.graph.label(v));
    for (const auto& e : pg.graph.edges()) {
      if (pg.graph.is_directed(e.u, e.v)) inst.dag.edges.emplace_back(pg.graph.label(e.u), pg.graph.label(e.v));
      if (pg.graph.is_directed(e.v, e.u)) inst.dag.edges.emplace_back(pg.graph.label(e.v), pg.graph.label(e.u));
    }
    inst.mag = project_dag_to_mag(inst.dag);
    inst.mec = mec_of_mag(inst.mag);
    inst.pag = inst.mec.reference_pag;
    std::cerr << serialize_graph(inst.pag);
    if (auto f = run(inst)) {
      emit(inst, *f);
      return 0;
    }
    for (const auto& [k, v] : g_reached) std::cerr << k << ": " << v << '\n';
    std::cerr << "no match\n";
    return 1;
  }

  if (!required.empty()) {
    const auto req = pairs_of(required), opt = pairs_of(optional);
    std::vector<std::string> labels;
    for (const auto* list : {&req, &opt})
      for (const auto& pr : *list)
        for (const auto& l : {pr.first, pr.second})
        if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    for (std::uint64_t s = first; s < first + count; ++s) {
      Rng rng(s);
      GeneratedInstance inst;
      inst.dag = template_dag(labels, req, opt, rng);
      inst.mag = project_dag_to_mag(inst.dag);
      bool extra = false;  // the projection may add adjacencies through inducing paths
      for (const auto& e : inst.mag.edges()) {
        std::pair<std::string, std::string> pr{inst.mag.label(e.u), inst.mag.label(e.v)}, rp{pr.second, pr.first};
        auto has = [&](const auto& list) {
          return std::find(list.begin(), list.end(), pr) != list.end() || std::find(list.begin(), list.end(), rp) != list.end();
        };
        extra = extra || !(has(req) || has(opt));
      }
      if (extra) continue;
      try {
        inst.mec = mec_of_mag(inst.mag);
      } catch (const CeilingExceeded&) {
        continue;
      }
      inst.pag = inst.mec.reference_pag;
      if (auto f = run(inst)) {
        std::cerr << "found at template seed " << s << '\n';
        emit(inst, *f);
        return 0;
      }
    }
    for (const auto& [k, v] : g_reached) std::cerr << k << ": " << v << '\n';
    std::cerr << "no match\n";
    return 1;
  }

  for (std::uint64_t s = first; s < first + count; ++s) {
    GenConfig cfg;
    cfg.observed = min_obs + s % (max_obs - min_obs + 1);
    cfg.latents = s % 3;
    cfg.edge_prob = 0.35 + 0.05 * static_cast<double>(s % 4);
    cfg.seed = s;
    GeneratedInstance inst = generate_instance(cfg);
    if (auto f = run(inst)) {
      std::cerr << "found at seed " << s << '\n';
      emit(inst, *f);
      return 0;
    }
  }
  for (const auto& [k, v] : g_reached) std::cerr << k << ": " << v << '\n';
  std::cerr << "no match\n";
  return 1;
}
