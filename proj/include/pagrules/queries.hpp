#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "pagrules/graph.hpp"

namespace pagrules {

using Path = std::vector<Vertex>;

struct PathFlags {
  bool directed = false;
  bool possibly_directed = false;
  bool uncovered = false;
  bool minimal = false;
  bool collider = false;
  bool circle = false;
};

/// Throws std::invalid_argument when `p` is not a simple path of `g` with at
/// least two vertices.
PathFlags classify_path(const MixedGraph& g, std::span<const Vertex> p);

/// Edge u-v can be traversed as a step of a possibly directed path from u to
/// v: no arrowhead at u and no tail at v.
inline bool possibly_directed_step(const MixedGraph& g, Vertex u, Vertex v) {
  return g.adjacent(u, v) && g.mark_at(u, v) != Mark::Arrow && g.mark_at(v, u) != Mark::Tail;
}

// Every vertex belongs to its own ancestor/descendant sets.
VertexSet ancestors(const MixedGraph& g, const VertexSet& s);
VertexSet descendants(const MixedGraph& g, const VertexSet& s);
VertexSet possible_ancestors(const MixedGraph& g, const VertexSet& s);
VertexSet possible_descendants(const MixedGraph& g, const VertexSet& s);
/// Vertices p with p -> s for some s in the set.
VertexSet parents(const MixedGraph& g, const VertexSet& s);

inline VertexSet ancestors(const MixedGraph& g, Vertex v) { return ancestors(g, g.set_of({v})); }
inline VertexSet descendants(const MixedGraph& g, Vertex v) { return descendants(g, g.set_of({v})); }
inline VertexSet possible_ancestors(const MixedGraph& g, Vertex v) { return possible_ancestors(g, g.set_of({v})); }
inline VertexSet possible_descendants(const MixedGraph& g, Vertex v) {
  return possible_descendants(g, g.set_of({v}));
}

/// Keeps the edges whose endpoints both lie in `keep`. The vertex list is left
/// intact so vertex ids and set universes stay valid; dropped vertices become
/// isolated.
MixedGraph induced(const MixedGraph& g, const VertexSet& keep);
/// induced(g, V \ drop)
MixedGraph minus(const MixedGraph& g, const VertexSet& drop);
/// Deletes every edge carrying a tail at x.
MixedGraph remove_edges_out_of(const MixedGraph& g, Vertex x);

/// All vertices with only the o-o edges of `g`.
MixedGraph circle_component(const MixedGraph& g);
bool same_circle_component(const MixedGraph& g, Vertex u, Vertex v);
/// Vertices joined to v by a circle path, v included.
VertexSet circle_component_of(const MixedGraph& g, Vertex v);

/// Triples (a, b, c) with a *-> b <-* c and a, c non-adjacent; a < c.
std::vector<std::array<Vertex, 3>> unshielded_colliders(const MixedGraph& g);

/// m-separation of x and y given z. Throws std::invalid_argument if x or y is
/// in z or x == y.
bool m_separated(const MixedGraph& g, Vertex x, Vertex y, const VertexSet& z);

/// False when a tail-tail edge or a (almost) directed cycle is present.
/// Throws std::invalid_argument on circle marks.
bool is_ancestral(const MixedGraph& g);
bool is_maximal(const MixedGraph& g);
bool is_mag(const MixedGraph& g);

/// Discriminating path <k, ..., a, b, r> for b: k and r non-adjacent, at least
/// one vertex between k and b, and every vertex strictly between k and b is a
/// collider on the path and a parent of r.
std::optional<Path> discriminating_path(const MixedGraph& g, Vertex k, Vertex b, Vertex r);
/// Same, with the far endpoint left free.
std::optional<Path> find_discriminating_path(const MixedGraph& g, Vertex b, Vertex r);

bool is_complete(const MixedGraph& g, const VertexSet& s);

/// Rejects tail-tail and tail-circle edges (no selection bias).
void validate_pmg(const MixedGraph& g);

}  // namespace pagrules
