#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pagrules/vertex_set.hpp"

namespace pagrules {

enum class Mark : std::uint8_t { None = 0, Tail = 1, Arrow = 2, Circle = 3 };

const char* mark_name(Mark m);

struct EdgeRecord {
  Vertex u;
  Vertex v;
  Mark mark_u;
  Mark mark_v;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

/// Graph whose edges carry one mark per endpoint. DAGs, MAGs, PAGs and
/// partially oriented graphs all use this type; the validators in queries.hpp
/// decide which role a value can play.
///
/// Marks live in a dense n*n table: cell (u, v) holds the mark at v on the edge
/// between u and v, or Mark::None when they are not adjacent. Vertices keep
/// their declaration order, which is also the canonical order for output.
class MixedGraph {
 public:
  MixedGraph() = default;
  explicit MixedGraph(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Vertex v) const { return labels_[v]; }
  std::optional<Vertex> find(std::string_view label) const;
  /// Throws std::invalid_argument for unknown labels.
  Vertex index_of(std::string_view label) const;

  bool adjacent(Vertex u, Vertex v) const { return ends_[u * size() + v] != 0; }
  /// The mark at `at` on the edge joining `at` and `other`.
  Mark mark_at(Vertex at, Vertex other) const { return static_cast<Mark>(ends_[other * size() + at]); }
  const VertexSet& neighbors(Vertex v) const { return adj_[v]; }

  /// Adds a new edge; throws std::invalid_argument on self-loops, unknown
  /// vertices, Mark::None or an existing edge between the pair.
  void add_edge(Vertex u, Vertex v, Mark at_u, Mark at_v);
  /// Adds the edge or overwrites both marks of an existing one.
  void set_edge(Vertex u, Vertex v, Mark at_u, Mark at_v);
  void remove_edge(Vertex u, Vertex v);
  /// Replaces one endpoint mark of an existing edge.
  void set_mark(Vertex at, Vertex other, Mark m);

  std::size_t edge_count() const { return edge_count_; }
  /// Edges with u < v, sorted by (u, v).
  std::vector<EdgeRecord> edges() const;

  VertexSet empty_set() const { return VertexSet(size()); }
  VertexSet all_vertices() const { return VertexSet::full(size()); }
  VertexSet set_of(std::initializer_list<Vertex> vs) const { return VertexSet(size(), vs); }

  // u -> v
  bool is_directed(Vertex u, Vertex v) const { return mark_at(u, v) == Mark::Tail && mark_at(v, u) == Mark::Arrow; }
  // u <-> v
  bool is_bidirected(Vertex u, Vertex v) const {
    return mark_at(u, v) == Mark::Arrow && mark_at(v, u) == Mark::Arrow;
  }
  // u o-o v
  bool is_circle_edge(Vertex u, Vertex v) const {
    return mark_at(u, v) == Mark::Circle && mark_at(v, u) == Mark::Circle;
  }
  bool has_circles() const;
  std::size_t circle_count() const;

  friend bool operator==(const MixedGraph& a, const MixedGraph& b) {
    return a.labels_ == b.labels_ && a.ends_ == b.ends_;
  }

 private:
  void check_vertex(Vertex v) const;

  std::vector<std::string> labels_;
  std::vector<std::uint8_t> ends_;
  std::vector<VertexSet> adj_;
  std::size_t edge_count_ = 0;
};

/// Renders a vertex set as "{A,B}" using the graph labels.
std::string format_set(const MixedGraph& g, const VertexSet& s);

}  // namespace pagrules
