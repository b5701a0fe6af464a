#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pagrules/queries.hpp"

namespace pagrules {

/// Whether a path may move from `from` to `to` (the edge is known to exist).
using StepFn = std::function<bool(Vertex from, Vertex to)>;
/// Accepts a path by its last two vertices.
using EndFn = std::function<bool(Vertex prev, Vertex cur)>;

/// Finds a simple uncovered path that begins with one of `starts` (ordered
/// pairs of adjacent vertices), moves only along allowed steps and ends in an
/// accepted pair.
///
/// Uncoveredness only constrains consecutive triples, so reachability over
/// (previous, current) pairs decides the walk version in O(n * m). The walk
/// behind a hit is usually already a path; when it is not, an exact
/// depth-first search over simple paths, pruned to pair states that can still
/// reach an accepting pair, settles the question.
std::optional<Path> find_uncovered_path(const MixedGraph& g, const std::vector<std::pair<Vertex, Vertex>>& starts,
                                        const StepFn& step, const EndFn& accept);

/// Vertices v reachable by a simple uncovered path <start, second, ..., v>
/// whose steps are allowed. `second` is included when the first step is.
VertexSet uncovered_reach(const MixedGraph& g, Vertex start, Vertex second, const StepFn& step);

enum class Visit { Continue, Prune, Stop };

/// Depth-first enumeration of minimal paths (no two non-consecutive vertices
/// adjacent) starting at `start`. The visitor sees every path of two or more
/// vertices; Prune skips extensions of that path and Stop ends the search.
/// Returns false when the visitor stopped the search.
bool for_each_minimal_path(const MixedGraph& g, Vertex start, const StepFn& step,
                           const std::function<Visit(const Path&)>& visit);

}  // namespace pagrules
