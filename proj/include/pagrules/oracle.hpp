#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pagrules/graph.hpp"
#include "pagrules/queries.hpp"

namespace pagrules {

/// A DAG over observed and latent vertices, given by labels.
struct LatentDagSpec {
  std::vector<std::string> observed;
  std::vector<std::string> latent;
  std::vector<std::pair<std::string, std::string>> edges;  // (from, to)
};

/// The DAG of `d` as a MixedGraph; observed vertices come first.
MixedGraph dag_graph(const LatentDagSpec& d);

/// Latent projection onto the observed vertices. Throws std::invalid_argument
/// on cycles or unknown labels.
MixedGraph project_dag_to_mag(const LatentDagSpec& d);

/// m-separation statements of a MAG: one bit per (non-adjacent pair,
/// conditioning subset of the remaining vertices), plus the skeleton.
struct Fingerprint {
  std::vector<std::uint8_t> skeleton;
  std::vector<std::uint8_t> separations;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

Fingerprint fingerprint(const MixedGraph& mag);
bool markov_equivalent(const MixedGraph& m1, const MixedGraph& m2);

struct OracleLimits {
  std::size_t max_vertices = 16;
  std::uint64_t max_nodes = 20'000'000;  // backtracking nodes per enumeration
};

struct OracleBundle {
  MixedGraph reference_pag;
  std::vector<MixedGraph> consistent_mags;
  /// Filled by annotate_dsep: adjustment_via_backdoor per MAG.
  std::vector<std::optional<VertexSet>> per_mag_dsep;
};

/// Every MAG with the skeleton and non-circle marks of `h` that does not
/// create unshielded colliders absent from `reference`. Order is canonical.
std::vector<MixedGraph> enumerate_refining_mags(const MixedGraph& h, const MixedGraph& reference,
                                                const OracleLimits& limits = {});

/// The Markov equivalence class represented by p: among the MAGs refining p,
/// the equivalence class whose consensus is p. Empty when there is none.
OracleBundle enumerate_mec(const MixedGraph& p, const OracleLimits& limits = {});

/// MAGs of the class of p that carry every non-circle mark of h.
/// Throws std::invalid_argument when h does not refine p.
OracleBundle enumerate_consistent_mags(const MixedGraph& h, const MixedGraph& p, const OracleLimits& limits = {});
/// Same, reusing an already enumerated class.
OracleBundle restrict_bundle(const OracleBundle& mec, const MixedGraph& h);

/// Keeps a mark where all MAGs agree and puts a circle elsewhere.
/// Throws std::invalid_argument on an empty bundle.
MixedGraph consensus_pag(const OracleBundle& bundle);
MixedGraph consensus_pag(const std::vector<MixedGraph>& mags);

/// Vertices other than x and y joined to x by a collider path whose vertices
/// are all ancestors of x or y.
VertexSet dsep_set(const MixedGraph& g, Vertex x, Vertex y);

/// D-SEP(x, y) in g with the edges out of x removed, if y is then not adjacent
/// to x and the set avoids the possible descendants of x in g.
std::optional<VertexSet> adjustment_via_backdoor(const MixedGraph& g, Vertex x, Vertex y);

/// Generalized adjustment criterion on a MAG: W avoids the forbidden set and
/// m-separates x and y once the first edges of proper causal paths are removed.
bool is_adjustment_set(const MixedGraph& m, Vertex x, Vertex y, const VertexSet& w);

void annotate_dsep(OracleBundle& bundle, Vertex x, Vertex y);

/// Adjustment sets collected over the class of p (MAGs with x an ancestor of y).
std::set<VertexSet> brute_force_set_determination(const MixedGraph& p, Vertex x, Vertex y,
                                                  const OracleLimits& limits = {});
std::set<VertexSet> brute_force_set_determination(const OracleBundle& mec, Vertex x, Vertex y);

}  // namespace pagrules
