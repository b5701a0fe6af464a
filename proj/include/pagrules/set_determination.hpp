#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pagrules/graph.hpp"
#include "pagrules/queries.hpp"

namespace pagrules {

/// Resolution of the circles at x: arrowhead at x for members of c, tail at x
/// (and arrowhead at the neighbour) for the other circle neighbours.
struct LocalTransformation {
  Vertex x;
  VertexSet c;
};

struct MaximalLocalMag {
  MixedGraph graph;
  LocalTransformation transformation;
};

struct BlockSetBounds {
  VertexSet bar_w;
  VertexSet s_min;
  VertexSet s_max;
};

/// Neighbours V with a circle at x on the edge x - V.
VertexSet circle_neighbors_at(const MixedGraph& p, Vertex x);

bool valid_local_transformation(const MixedGraph& p, const LocalTransformation& t);
/// Throws ContradictionError if the closure conflicts with the transformation.
MaximalLocalMag maximal_local_mag(const MixedGraph& p, const LocalTransformation& t);

VertexSet bar_w(const MixedGraph& m, const VertexSet& w, Vertex x, Vertex y);
BlockSetBounds block_set_bounds(const MixedGraph& m, const VertexSet& w, Vertex x, Vertex y);
bool is_potential_adjustment_set(const MixedGraph& m, const VertexSet& w, Vertex x, Vertex y);

/// Least fixpoint of the DD-SEP clauses, evaluated on m with the edges out of
/// x removed. Empty when y is not a possible descendant of x.
VertexSet dd_sep(const MixedGraph& m, Vertex x, Vertex y);

/// Second vertices of minimal possibly directed paths from bar_w to
/// Anc(W + y) whose other vertices avoid bar_w.
VertexSet s0(const MixedGraph& m, const VertexSet& w, const VertexSet& bar_w, Vertex x, Vertex y);

struct UpdateStats {
  std::size_t loops = 0;        // iterations of the main loop
  std::size_t r12_firings = 0;  // orientations made by the R12 probe
};

/// Rule-driven search for a block set (S update). Returns the final S, or
/// nothing when the completeness / parent guard or the final bridging test
/// fails.
std::optional<VertexSet> update_s(const MixedGraph& m, Vertex x, Vertex y, const VertexSet& w,
                                  UpdateStats* stats = nullptr);

/// The three block-set conditions for a fixed S.
bool check_prop2_conditions(const MixedGraph& m, Vertex x, Vertex y, const VertexSet& w, const VertexSet& s);

/// Orients m into a MAG in which w is an adjustment set, following the
/// construction for a block set s. Throws ConstructionError on failure.
MixedGraph construct_witness_mag(const MixedGraph& m, Vertex x, Vertex y, const VertexSet& w, const VertexSet& s);

enum class Outcome { NoEffect, GloballyIdentified, SetOfSets };
const char* outcome_name(Outcome o);

struct Diagnostics {
  std::size_t transformations = 0;        // subsets C examined
  std::size_t valid_transformations = 0;  // maximal local MAGs built
  std::size_t skipped_no_possible_effect = 0;
  std::size_t potential_sets_tested = 0;  // candidate W passing the potential test
  std::size_t candidate_sets = 0;         // candidate W examined
  std::size_t block_sets_tested = 0;      // baseline only
  std::size_t r12_firings = 0;
  std::size_t update_s_calls = 0;
  std::size_t alg2_loops = 0;
  std::size_t max_alg2_loops = 0;
};

/// Which transformation produced an adjustment set (first one found).
struct Provenance {
  VertexSet w;
  VertexSet c;
  std::optional<VertexSet> s;  // the S that certified w
};

struct AdjustmentReport {
  Outcome outcome = Outcome::SetOfSets;
  std::vector<VertexSet> sets;  // sorted, duplicate-free
  std::vector<Provenance> provenance;
  Diagnostics diagnostics;
};

struct SetDeterminationOptions {
  /// Return the backdoor set of the PAG itself when it qualifies (early exit).
  bool backdoor_shortcut = true;
  /// Skip maximal local MAGs in which y is not a possible descendant of x.
  bool skip_without_possible_effect = true;
  /// Block sets the baseline may examine before raising BudgetExceeded.
  std::uint64_t block_set_budget = 50'000'000;
  /// Worker threads for the loop over local transformations (0 or 1: serial).
  unsigned threads = 1;
};

AdjustmentReport pagrules(const MixedGraph& p, Vertex x, Vertex y, const SetDeterminationOptions& opts = {});
AdjustmentReport pagcauses_baseline(const MixedGraph& p, Vertex x, Vertex y, const SetDeterminationOptions& opts = {});

}  // namespace pagrules
