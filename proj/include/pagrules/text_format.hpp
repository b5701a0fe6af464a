#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pagrules/graph.hpp"
#include "pagrules/rules.hpp"

namespace pagrules {

/// A parsed graph file. Vertices declared on a `latent:` line come after the
/// observed ones and are listed in `latent`.
struct ParsedGraph {
  MixedGraph graph;
  VertexSet latent;
};

/// Format:
///   vertices: A B C
///   latent: L1          (optional)
///   A o-> B             (mark at A, '-', mark at B; marks are < > o -)
/// `#` starts a comment. Throws ParseError with 1-based line and column.
ParsedGraph parse_graph_file(std::string_view text);
MixedGraph parse_graph(std::string_view text);

/// Canonical text: the vertices line, then edges sorted by vertex order.
std::string serialize_graph(const MixedGraph& g);
std::string serialize_graph(const MixedGraph& g, const VertexSet& latent);

/// Two-character-plus-dash core such as "o->" for the marks (at u, at v).
std::string edge_core(Mark at_u, Mark at_v);

/// Commitments written as edge lines on existing edges of g. A circle leaves
/// that endpoint uncommitted. An optional `vertices:` line is ignored.
BackgroundKnowledge parse_bk(std::string_view text, const MixedGraph& g);

/// Splits text at lines of the form `# name` into named sections.
std::vector<std::pair<std::string, std::string>> split_sections(std::string_view text);

}  // namespace pagrules
