// Python module: text in, text or plain containers out. Graphs cross the
// boundary in the same format the command-line tool reads and writes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pagrules/errors.hpp"
#include "pagrules/generate.hpp"
#include "pagrules/oracle.hpp"
#include "pagrules/rules.hpp"
#include "pagrules/set_determination.hpp"
#include "pagrules/text_format.hpp"
#include "pagrules/version.hpp"

namespace py = pybind11;
using namespace pagrules;

namespace {

MixedGraph load_pmg(const std::string& text) {
  MixedGraph g = parse_graph(text);
  validate_pmg(g);
  return g;
}

Vertex vertex(const MixedGraph& g, const std::string& label) {
  auto v = g.find(label);
  if (!v) throw std::invalid_argument("unknown vertex '" + label + "'");
  return *v;
}

std::vector<std::vector<std::string>> labelled(const MixedGraph& g, const std::vector<VertexSet>& sets) {
  std::vector<std::vector<std::string>> out;
  for (const auto& s : sets) {
    std::vector<std::string> names;
    for (Vertex v : s.members()) names.push_back(g.label(v));
    out.push_back(std::move(names));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_pagrules, m) {
  m.doc() = "Orientation rules and set determination for partial ancestral graphs";
  m.attr("__version__") = kVersion;

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ContradictionError>(m, "ContradictionError", PyExc_RuntimeError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<CeilingExceeded>(m, "CeilingExceeded", PyExc_RuntimeError);

  m.def(
      "canonical", [](const std::string& text) { return serialize_graph(parse_graph(text)); }, py::arg("text"),
      "Parse a graph and return its canonical serialization.");

  m.def(
      "orient",
      [](const std::string& text, bool with_new_rules) {
        return serialize_graph(close_under(load_pmg(text), with_new_rules ? all_rules() : classical_rules()));
      },
      py::arg("text"), py::arg("with_new_rules") = true, "Close a graph under R1-R13 (or R1-R11).");

  m.def(
      "incorporate_bk",
      [](const std::string& pag, const std::string& bk) {
        const MixedGraph p = load_pmg(pag);
        return serialize_graph(incorporate_bk(p, parse_bk(bk, p)));
      },
      py::arg("pag"), py::arg("bk"), "Apply background knowledge and close under all rules.");

  m.def(
      "adjustment_sets",
      [](const std::string& pag, const std::string& x, const std::string& y, bool baseline, bool backdoor_shortcut) {
        const MixedGraph p = load_pmg(pag);
        SetDeterminationOptions opts;
        opts.backdoor_shortcut = backdoor_shortcut;
        const Vertex vx = vertex(p, x), vy = vertex(p, y);
        AdjustmentReport r;
        {
          py::gil_scoped_release release;
          r = baseline ? pagcauses_baseline(p, vx, vy, opts) : pagrules::pagrules(p, vx, vy, opts);
        }
        py::dict out;
        out["outcome"] = outcome_name(r.outcome);
        out["sets"] = labelled(p, r.sets);
        out["alg2_loops"] = r.diagnostics.alg2_loops;
        out["block_sets_tested"] = r.diagnostics.block_sets_tested;
        return out;
      },
      py::arg("pag"), py::arg("x"), py::arg("y"), py::arg("baseline") = false, py::arg("backdoor_shortcut") = true,
      "Every adjustment set for the effect of x on y across the MAGs of a PAG.");

  m.def(
      "oracle_adjustment_sets",
      [](const std::string& pag, const std::string& x, const std::string& y) {
        const MixedGraph p = load_pmg(pag);
        const auto truth = brute_force_set_determination(p, vertex(p, x), vertex(p, y));
        return labelled(p, {truth.begin(), truth.end()});
      },
      py::arg("pag"), py::arg("x"), py::arg("y"), "The same collection by enumerating every MAG.");

  m.def(
      "mags",
      [](const std::string& pag) {
        const MixedGraph p = load_pmg(pag);
        std::vector<std::string> out;
        for (const auto& g : enumerate_mec(p).consistent_mags) out.push_back(serialize_graph(g));
        return out;
      },
      py::arg("pag"), "Every MAG represented by a PAG.");

  m.def(
      "generate",
      [](std::size_t observed, std::size_t latents, double edge_prob, std::uint64_t seed) {
        GenConfig cfg;
        cfg.observed = observed;
        cfg.latents = latents;
        cfg.edge_prob = edge_prob;
        cfg.seed = seed;
        const auto inst = generate_instance(cfg);
        py::dict out;
        out["mag"] = serialize_graph(inst.mag);
        out["pag"] = serialize_graph(inst.pag);
        return out;
      },
      py::arg("observed") = 5, py::arg("latents") = 1, py::arg("edge_prob") = 0.4, py::arg("seed") = 1,
      "A random latent DAG projected to a MAG, with the PAG of its class.");
}
