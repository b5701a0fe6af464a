// Command-line front end.
//
//   pagrules orient  --in FILE [--rules r1-r11|r1-r13] [--log] [--json]
//   pagrules bk      --in FILE --bk FILE [--validate-oracle] [--log] [--json]
//   pagrules effects --in FILE --x X --y Y [--baseline] [--oracle-check] [--json]
//   pagrules oracle mags    --in PMG --pag PAG
//   pagrules oracle effects --in PAG --x X --y Y
//   pagrules gen     --n N --latents K --edge-prob P --seed S
//   pagrules bench   --family ladder|complexity --k K [--k-max K] --seed S
//
// Exit status: 0 on success, 1 on a domain negative (contradicting or
// inconsistent knowledge, exhausted budgets, failed oracle checks), 2 on usage
// or input errors. Diagnostics go to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "pagrules/errors.hpp"
#include "pagrules/generate.hpp"
#include "pagrules/oracle.hpp"
#include "pagrules/parallel.hpp"
#include "pagrules/rules.hpp"
#include "pagrules/set_determination.hpp"
#include "pagrules/text_format.hpp"
#include "pagrules/version.hpp"

using namespace pagrules;
using json = nlohmann::ordered_json;

namespace {

// A failed check that is not a usage problem; mapped to exit status 1.
struct DomainNegative : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Input {
  std::string text;
  std::string digest;
};

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("--in", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return {ss.str(), fnv1a_hex(ss.str())};
}

// Graph files may carry named sections; the PAG section wins when present.
std::string graph_text(const std::string& text, const char* preferred = "pag") {
  auto sections = split_sections(text);
  for (const auto& [name, body] : sections)
    if (name == preferred) return body;
  return text;
}

Vertex vertex_arg(const MixedGraph& g, const std::string& label, const char* flag) {
  auto v = g.find(label);
  if (!v) throw CLI::ValidationError(flag, "unknown vertex '" + label + "'");
  return *v;
}

class Timer {
 public:
  void start(const std::string& phase) {
    phase_ = phase;
    t0_ = std::chrono::steady_clock::now();
  }
  void stop() {
    timings_[phase_] += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }
  json to_json() const {
    json j = json::object();
    for (const auto& [k, v] : timings_) j[k] = v;
    return j;
  }

 private:
  std::string phase_;
  std::chrono::steady_clock::time_point t0_;
  std::map<std::string, double> timings_;
};

json set_json(const MixedGraph& g, const VertexSet& s) {
  json a = json::array();
  for (Vertex v : s.members()) a.push_back(g.label(v));
  return a;
}

json firing_counts(const std::vector<Firing>& log) {
  json j = json::object();
  for (RuleId id : all_rules()) {
    std::size_t n = 0;
    for (const auto& f : log) n += f.rule == id;
    if (n) j[rule_name(id)] = n;
  }
  return j;
}

std::string firing_line(const MixedGraph& g, const Firing& f) {
  std::string s = std::string("# ") + rule_name(f.rule) + ": " + g.label(f.u) + ' ' + edge_core(f.mark_u, f.mark_v) +
                  ' ' + g.label(f.v);
  if (!f.witness.empty()) {
    s += " via";
    for (Vertex w : f.witness) s += ' ' + g.label(w);
  }
  return s;
}

struct Common {
  bool json_out = false;
  bool timings = false;
  std::string report_path;
};

// Wraps a payload in the run report and writes it where requested.
void finish(const Common& c, const std::string& command, const Input& in, json payload, json counters,
            const Timer& timer) {
  json report;
  report["version"] = kVersion;
  report["command"] = command;
  report["input_digest"] = in.digest;
  if (c.timings || !c.report_path.empty()) report["timings_ms"] = timer.to_json();
  report["counters"] = std::move(counters);
  report["result"] = payload;
  if (!c.report_path.empty()) {
    std::ofstream out(c.report_path);
    out << report.dump(2) << '\n';
  }
  if (c.json_out) {
    if (!c.timings) report.erase("timings_ms");
    std::cout << report.dump(2) << '\n';
  }
}

void add_common(CLI::App* app, Common& c) {
  app->add_flag("--json", c.json_out, "Print a JSON run report");
  app->add_flag("--timings", c.timings, "Include per-phase wall times in the JSON report");
  app->add_option("--report", c.report_path, "Also write the JSON run report (with timings) to this file");
}

// ---------------------------------------------------------------------------

struct OrientArgs {
  std::string in, rules = "r1-r13";
  bool log = false;
  Common common;
};

int run_orient(const OrientArgs& a) {
  Timer timer;
  const Input in = read_input(a.in);
  timer.start("parse");
  MixedGraph g = parse_graph(graph_text(in.text));
  validate_pmg(g);
  timer.stop();
  const auto ruleset = a.rules == "r1-r11" ? classical_rules() : all_rules();
  std::vector<Firing> log;
  timer.start("orient");
  MixedGraph out = close_under(g, ruleset, &log);
  timer.stop();
  if (a.common.json_out) {
    json firings = json::array();
    for (const auto& f : log) firings.push_back(firing_line(g, f).substr(2));
    finish(a.common, "orient", in, {{"graph", serialize_graph(out)}, {"firings", firings}},
           {{"rule_firings", firing_counts(log)}}, timer);
    return 0;
  }
  std::cout << serialize_graph(out);
  if (a.log)
    for (const auto& f : log) std::cout << firing_line(g, f) << '\n';
  if (!a.common.report_path.empty()) finish(a.common, "orient", in, {}, {{"rule_firings", firing_counts(log)}}, timer);
  return 0;
}

struct BkArgs {
  std::string in, bk;
  bool validate = false, log = false;
  Common common;
};

int run_bk(const BkArgs& a) {
  Timer timer;
  const Input in = read_input(a.in);
  const Input bk_in = read_input(a.bk);
  timer.start("parse");
  const MixedGraph p = parse_graph(graph_text(in.text));
  validate_pmg(p);
  const BackgroundKnowledge bk = parse_bk(graph_text(bk_in.text, "bk"), p);
  timer.stop();
  std::vector<Firing> log;
  timer.start("orient");
  const MixedGraph out = incorporate_bk(p, bk, all_rules(), &log);
  timer.stop();
  if (a.validate) {
    timer.start("oracle");
    MixedGraph committed = p;
    for (const auto& c : bk.items) committed.set_mark(c.at, c.other, c.mark);
    const auto bundle = enumerate_consistent_mags(committed, p);
    timer.stop();
    if (bundle.consistent_mags.empty()) throw ConsistencyError("no MAG of the class agrees with the knowledge");
    for (const auto& m : bundle.consistent_mags)
      for (const auto& e : out.edges())
        if ((e.mark_u != Mark::Circle && m.mark_at(e.u, e.v) != e.mark_u) ||
            (e.mark_v != Mark::Circle && m.mark_at(e.v, e.u) != e.mark_v))
          throw DomainNegative("oracle: an oriented mark is missing from a consistent MAG");
  }
  Input both{in.text + bk_in.text, fnv1a_hex(in.text + bk_in.text)};
  if (a.common.json_out) {
    json firings = json::array();
    for (const auto& f : log) firings.push_back(firing_line(p, f).substr(2));
    finish(a.common, "bk", both, {{"graph", serialize_graph(out)}, {"firings", firings}},
           {{"rule_firings", firing_counts(log)}}, timer);
    return 0;
  }
  std::cout << serialize_graph(out);
  if (a.log)
    for (const auto& f : log) std::cout << firing_line(p, f) << '\n';
  if (!a.common.report_path.empty()) finish(a.common, "bk", both, {}, {{"rule_firings", firing_counts(log)}}, timer);
  return 0;
}

struct EffectsArgs {
  std::string in, x, y;
  bool baseline = false, oracle_check = false, no_shortcut = false;
  std::uint64_t budget = 50'000'000;
  unsigned threads = 0;
  Common common;
};

json diagnostics_json(const Diagnostics& d, bool baseline) {
  json j;
  j["transformations"] = d.transformations;
  j["valid_transformations"] = d.valid_transformations;
  j["skipped_no_possible_effect"] = d.skipped_no_possible_effect;
  j["candidate_sets"] = d.candidate_sets;
  j["potential_sets_tested"] = d.potential_sets_tested;
  if (baseline) {
    j["block_sets_tested"] = d.block_sets_tested;
  } else {
    j["r12_firings"] = d.r12_firings;
    j["update_s_calls"] = d.update_s_calls;
    j["alg2_loops"] = d.alg2_loops;
    j["max_alg2_loops"] = d.max_alg2_loops;
  }
  return j;
}

int run_effects(const EffectsArgs& a) {
  Timer timer;
  const Input in = read_input(a.in);
  timer.start("parse");
  const MixedGraph p = parse_graph(graph_text(in.text));
  validate_pmg(p);
  const Vertex x = vertex_arg(p, a.x, "--x"), y = vertex_arg(p, a.y, "--y");
  if (x == y) throw CLI::ValidationError("--y", "x and y must differ");
  timer.stop();

  SetDeterminationOptions opts;
  opts.backdoor_shortcut = !a.no_shortcut;
  opts.block_set_budget = a.budget;
  opts.threads = a.threads ? a.threads : default_threads();
  timer.start(a.baseline ? "baseline" : "pagrules");
  const AdjustmentReport r = a.baseline ? pagcauses_baseline(p, x, y, opts) : pagrules::pagrules(p, x, y, opts);
  timer.stop();

  json sets = json::array();
  for (const auto& s : r.sets) sets.push_back(set_json(p, s));
  json payload;
  payload["outcome"] = outcome_name(r.outcome);
  payload["adjustment_sets"] = sets;
  payload["diagnostics"] = diagnostics_json(r.diagnostics, a.baseline);

  bool agrees = true;
  if (a.oracle_check) {
    timer.start("oracle");
    const auto truth = brute_force_set_determination(p, x, y);
    timer.stop();
    agrees = std::vector<VertexSet>(truth.begin(), truth.end()) == r.sets;
    json t = json::array();
    for (const auto& s : truth) t.push_back(set_json(p, s));
    payload["oracle"] = {{"agrees", agrees}, {"adjustment_sets", t}};
  }

  json counters = {{"block_sets", r.diagnostics.block_sets_tested},
                   {"alg2_loops", r.diagnostics.alg2_loops},
                   {"rule_firings", {{"R12", r.diagnostics.r12_firings}}}};
  if (a.common.json_out || !a.common.report_path.empty()) finish(a.common, "effects", in, payload, counters, timer);
  if (!a.common.json_out) {
    std::cout << "outcome: " << payload["outcome"].get<std::string>() << '\n';
    for (const auto& s : r.sets) std::cout << format_set(p, s) << '\n';
    if (a.oracle_check) std::cout << "oracle: " << (agrees ? "agrees" : "DISAGREES") << '\n';
  }
  if (!agrees) throw DomainNegative("oracle disagrees with the reported adjustment sets");
  return 0;
}

struct OracleArgs {
  std::string in, pag, x, y;
  Common common;
};

int run_oracle_mags(const OracleArgs& a) {
  Timer timer;
  const Input in = read_input(a.in);
  const MixedGraph h = parse_graph(graph_text(in.text));
  const MixedGraph p = a.pag.empty() ? h : parse_graph(graph_text(read_input(a.pag).text));
  validate_pmg(h);
  validate_pmg(p);
  timer.start("enumerate");
  const auto bundle = enumerate_consistent_mags(h, p);
  timer.stop();
  if (bundle.consistent_mags.empty()) throw ConsistencyError("no consistent MAG");
  // One JSON object per line, one line per MAG.
  for (const auto& m : bundle.consistent_mags) {
    json edges = json::array();
    for (const auto& e : m.edges()) edges.push_back(m.label(e.u) + ' ' + edge_core(e.mark_u, e.mark_v) + ' ' + m.label(e.v));
    std::cout << json{{"edges", edges}}.dump() << '\n';
  }
  if (!a.common.report_path.empty())
    finish(a.common, "oracle mags", in, {{"count", bundle.consistent_mags.size()}},
           {{"mags", bundle.consistent_mags.size()}}, timer);
  return 0;
}

int run_oracle_effects(const OracleArgs& a) {
  Timer timer;
  const Input in = read_input(a.in);
  const MixedGraph p = parse_graph(graph_text(in.text));
  validate_pmg(p);
  const Vertex x = vertex_arg(p, a.x, "--x"), y = vertex_arg(p, a.y, "--y");
  if (x == y) throw CLI::ValidationError("--y", "x and y must differ");
  timer.start("enumerate");
  auto bundle = enumerate_mec(p);
  timer.stop();
  if (bundle.consistent_mags.empty()) throw ConsistencyError("input is not a valid PAG");
  annotate_dsep(bundle, x, y);
  for (std::size_t i = 0; i < bundle.consistent_mags.size(); ++i) {
    const auto& m = bundle.consistent_mags[i];
    json line;
    json edges = json::array();
    for (const auto& e : m.edges()) edges.push_back(m.label(e.u) + ' ' + edge_core(e.mark_u, e.mark_v) + ' ' + m.label(e.v));
    line["edges"] = edges;
    line["effect"] = ancestors(m, y).contains(x);
    line["adjustment_set"] = bundle.per_mag_dsep[i] ? set_json(m, *bundle.per_mag_dsep[i]) : json(nullptr);
    std::cout << line.dump() << '\n';
  }
  if (!a.common.report_path.empty())
    finish(a.common, "oracle effects", in, {{"count", bundle.consistent_mags.size()}},
           {{"mags", bundle.consistent_mags.size()}}, timer);
  return 0;
}

struct GenArgs {
  std::size_t n = 5, latents = 1;
  double edge_prob = 0.4;
  std::uint64_t seed = 1;
};

int run_gen(const GenArgs& a) {
  GenConfig cfg;
  cfg.observed = a.n;
  cfg.latents = a.latents;
  cfg.edge_prob = a.edge_prob;
  cfg.seed = a.seed;
  const auto inst = generate_instance(cfg);
  const MixedGraph dag = dag_graph(inst.dag);
  VertexSet latent(dag.size());
  for (Vertex v = inst.dag.observed.size(); v < dag.size(); ++v) latent.insert(v);
  std::cout << "# dag\n" << serialize_graph(dag, latent);
  std::cout << "# mag\n" << serialize_graph(inst.mag);
  std::cout << "# pag\n" << serialize_graph(inst.pag);
  return 0;
}

struct BenchArgs {
  std::string family = "ladder";
  std::size_t k = 2, k_max = 0;
  std::uint64_t seed = 1;
  std::uint64_t budget = 50'000'000;
  unsigned threads = 0;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int run_bench(const BenchArgs& a) {
  const std::size_t last = std::max(a.k, a.k_max);
  if (a.family == "ladder") {
    std::cout << "family,k,vertices,edges,baseline_block_sets,pagrules_alg2_loops,pagrules_max_alg2_loops,"
                 "baseline_ms,pagrules_ms,agree\n";
    for (std::size_t k = a.k; k <= last; ++k) {
      const MixedGraph p = ladder_pag(k);
      const Vertex x = p.index_of("X"), y = p.index_of("Y");
      SetDeterminationOptions opts;
      opts.block_set_budget = a.budget;
      opts.threads = a.threads ? a.threads : default_threads();
      auto t0 = std::chrono::steady_clock::now();
      const auto fast = pagrules::pagrules(p, x, y, opts);
      const double fast_ms = ms_since(t0);
      t0 = std::chrono::steady_clock::now();
      const auto slow = pagcauses_baseline(p, x, y, opts);
      const double slow_ms = ms_since(t0);
      std::printf("ladder,%zu,%zu,%zu,%zu,%zu,%zu,%.3f,%.3f,%d\n", k, p.size(), p.edge_count(),
                  slow.diagnostics.block_sets_tested, fast.diagnostics.alg2_loops, fast.diagnostics.max_alg2_loops,
                  slow_ms, fast_ms, fast.sets == slow.sets ? 1 : 0);
    }
    return 0;
  }
  // complexity: the R12/R13 loop on trees of circles with arrowhead pendants;
  // k is the tree size.
  std::cout << "family,n,seed,vertices,edges,firings,ms\n";
  for (std::size_t n = a.k; n <= last; n = n < 4 ? n + 1 : n * 2) {
    const MixedGraph g = complexity_instance(n, a.seed);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = apply_R12_R13(g);
    std::printf("complexity,%zu,%llu,%zu,%zu,%zu,%.3f\n", n, static_cast<unsigned long long>(a.seed), g.size(),
                g.edge_count(), r.firings.size(), ms_since(t0));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orientation rules and set determination for partial ancestral graphs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  OrientArgs orient;
  auto* c_orient = app.add_subcommand("orient", "Close a graph under the orientation rules");
  c_orient->add_option("--in", orient.in, "Graph file")->required();
  c_orient->add_option("--rules", orient.rules, "Rule set")->check(CLI::IsMember({"r1-r11", "r1-r13"}));
  c_orient->add_flag("--log", orient.log, "Append one comment line per firing");
  add_common(c_orient, orient.common);

  BkArgs bk;
  auto* c_bk = app.add_subcommand("bk", "Incorporate background knowledge into a PAG");
  c_bk->add_option("--in", bk.in, "PAG file")->required();
  c_bk->add_option("--bk", bk.bk, "Background knowledge file")->required();
  c_bk->add_flag("--validate-oracle", bk.validate, "Check the result against the enumerated class");
  c_bk->add_flag("--log", bk.log, "Append one comment line per firing");
  add_common(c_bk, bk.common);

  EffectsArgs eff;
  auto* c_eff = app.add_subcommand("effects", "All adjustment sets for the effect of X on Y");
  c_eff->add_option("--in", eff.in, "PAG file")->required();
  c_eff->add_option("--x", eff.x, "Treatment vertex")->required();
  c_eff->add_option("--y", eff.y, "Outcome vertex")->required();
  c_eff->add_flag("--baseline", eff.baseline, "Use block-set enumeration instead of the rule-driven search");
  c_eff->add_flag("--oracle-check", eff.oracle_check, "Compare with brute-force enumeration");
  c_eff->add_flag("--no-shortcut", eff.no_shortcut, "Skip the early backdoor exit on the PAG");
  c_eff->add_option("--budget", eff.budget, "Block-set budget for the baseline");
  c_eff->add_option("--threads", eff.threads, "Worker threads (default: PAGRULES_THREADS or 1)");
  add_common(c_eff, eff.common);

  OracleArgs om, oe;
  auto* c_oracle = app.add_subcommand("oracle", "Brute-force ground truth");
  c_oracle->require_subcommand(1);
  auto* c_om = c_oracle->add_subcommand("mags", "MAGs consistent with a PMG");
  c_om->add_option("--in", om.in, "PMG file")->required();
  c_om->add_option("--pag", om.pag, "PAG of the class (default: the input itself)");
  c_om->add_option("--report", om.common.report_path, "Write a JSON run report");
  auto* c_oe = c_oracle->add_subcommand("effects", "Per-MAG effects and backdoor sets");
  c_oe->add_option("--in", oe.in, "PAG file")->required();
  c_oe->add_option("--x", oe.x, "Treatment vertex")->required();
  c_oe->add_option("--y", oe.y, "Outcome vertex")->required();
  c_oe->add_option("--report", oe.common.report_path, "Write a JSON run report");

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Random DAG, its MAG and the PAG of its class");
  c_gen->add_option("--n", gen.n, "Observed vertices")->check(CLI::Range(2, 16));
  c_gen->add_option("--latents", gen.latents, "Latent vertices")->check(CLI::Range(0, 16));
  c_gen->add_option("--edge-prob", gen.edge_prob, "Edge probability")->check(CLI::Range(0.0, 1.0));
  c_gen->add_option("--seed", gen.seed, "Seed");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "CSV benchmark over a generated family");
  c_bench->add_option("--family", bench.family, "Family")->check(CLI::IsMember({"ladder", "complexity"}));
  c_bench->add_option("--k", bench.k, "Size parameter (first value)")->required();
  c_bench->add_option("--k-max", bench.k_max, "Last size parameter");
  c_bench->add_option("--seed", bench.seed, "Seed");
  c_bench->add_option("--budget", bench.budget, "Block-set budget for the baseline");
  c_bench->add_option("--threads", bench.threads, "Worker threads (default: PAGRULES_THREADS or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_orient->parsed()) return run_orient(orient);
    if (c_bk->parsed()) return run_bk(bk);
    if (c_eff->parsed()) return run_effects(eff);
    if (c_om->parsed()) return run_oracle_mags(om);
    if (c_oe->parsed()) return run_oracle_effects(oe);
    if (c_gen->parsed()) return run_gen(gen);
    if (c_bench->parsed()) {
      if (bench.family == "ladder" && bench.k < 2) throw CLI::ValidationError("--k", "the ladder starts at 2");
      return run_bench(bench);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ContradictionError& e) {
    std::cerr << "ContradictionError: " << e.what() << '\n';
    return 1;
  } catch (const ConsistencyError& e) {
    std::cerr << "ConsistencyError: " << e.what() << '\n';
    return 1;
  } catch (const BudgetExceeded& e) {
    std::cerr << "BudgetExceeded: " << e.what() << '\n';
    return 1;
  } catch (const CeilingExceeded& e) {
    std::cerr << "CeilingExceeded: " << e.what() << '\n';
    return 1;
  } catch (const DomainNegative& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
