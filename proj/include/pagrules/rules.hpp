#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pagrules/graph.hpp"
#include "pagrules/queries.hpp"

namespace pagrules {

enum class RuleId { R1, R2, R3, R4p, R8, R9, R10, R11, R12, R13 };

const char* rule_name(RuleId id);
std::optional<RuleId> parse_rule_name(std::string_view name);

/// R1-R3, R4', R8-R11. This is also the rule set used for maximal local MAGs.
std::vector<RuleId> classical_rules();
/// classical_rules() followed by R12 and R13.
std::vector<RuleId> all_rules();

/// One orientation step: the edge u-v ends up with marks (mark_u, mark_v).
/// `witness` lists the vertices the rule premise was matched against.
struct Firing {
  RuleId rule;
  Vertex u;
  Vertex v;
  Mark mark_u;
  Mark mark_v;
  std::vector<Vertex> witness;
};

struct RuleResult {
  bool changed = false;
  MixedGraph graph;
  std::vector<Firing> firings;
};

/// Applies every current firing of one rule in a single pass over the graph.
/// Throws ContradictionError when a rule would replace a non-circle mark.
RuleResult apply_rule(const MixedGraph& h, RuleId id);

/// F_v relative to vp: members of vp adjacent to v whose edge has no tail at v.
VertexSet f_set(const MixedGraph& h, const VertexSet& vp, Vertex v);

struct UnbridgedPath {
  Path path;
  Vertex witness_first;  // in F(path[0]) \ F(path[1])
  Vertex witness_last;   // in F(path[n]) \ F(path[n-1])
};

/// Searches an unbridged path relative to vp whose vertices all lie in `scope`.
std::optional<UnbridgedPath> find_unbridged_path(const MixedGraph& h, const VertexSet& vp, const VertexSet& scope);

/// True iff every minimal circle path inside h[component] has the increasing
/// then decreasing F-set nesting relative to vp.
bool is_bridged(const MixedGraph& h, const VertexSet& component, const VertexSet& vp);

enum class Trigger { None, R12, R13 };

struct R1213Options {
  /// Collect D through every uncovered path out of A and B instead of the
  /// possibly directed ones named by the rule statements.
  bool any_uncovered_path = false;
};

/// S_A: vertices with an arrowhead into a, plus a itself.
VertexSet s_a_set(const MixedGraph& h, Vertex a);

/// Decides edge a o-* b on h without modifying it, following the loop body of
/// the R12/R13 implementation (D, ancestor test, arrowheads from S_A, circle
/// component update, new unshielded colliders).
/// When `witness` is given it receives the justification: the vertices of D
/// that are ancestors of S_A for R13, the new unshielded collider for R12.
Trigger alg1_trigger(const MixedGraph& h, Vertex a, Vertex b, const R1213Options& opts = {},
                     std::vector<Vertex>* witness = nullptr);

/// Decides edge a o-* b directly from the R12 and R13 statements.
Trigger rule_statement_trigger(const MixedGraph& h, Vertex a, Vertex b);
/// Only the R12 statement; used as the single-firing probe of set determination.
bool r12_statement_applies(const MixedGraph& h, Vertex a, Vertex b);

/// Runs the R12/R13 loop to a fixpoint. `only` restricts the recorded and
/// applied firings to one of the two rules.
RuleResult apply_R12_R13(const MixedGraph& h, const R1213Options& opts = {},
                         std::optional<RuleId> only = std::nullopt);

struct Commitment {
  Vertex at;
  Vertex other;
  Mark mark;
};

struct BackgroundKnowledge {
  std::vector<Commitment> items;
};

/// Closes h under `ruleset` round-robin until no rule changes the graph.
MixedGraph close_under(const MixedGraph& h, const std::vector<RuleId>& ruleset, std::vector<Firing>* log = nullptr);

/// Applies the commitments to p and closes the result under `ruleset`.
MixedGraph incorporate_bk(const MixedGraph& p, const BackgroundKnowledge& bk,
                          const std::vector<RuleId>& ruleset = all_rules(), std::vector<Firing>* log = nullptr);

}  // namespace pagrules
