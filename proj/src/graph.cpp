#include "pagrules/graph.hpp"

#include <stdexcept>
#include <unordered_set>

namespace pagrules {

const char* mark_name(Mark m) {
  switch (m) {
    case Mark::None: return "none";
    case Mark::Tail: return "tail";
    case Mark::Arrow: return "arrow";
    case Mark::Circle: return "circle";
  }
  return "?";
}

MixedGraph::MixedGraph(std::vector<std::string> labels)
    : labels_(std::move(labels)), ends_(labels_.size() * labels_.size(), 0) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw std::invalid_argument("empty vertex label");
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate vertex label '" + l + "'");
  }
  adj_.assign(labels_.size(), VertexSet(labels_.size()));
}

std::optional<Vertex> MixedGraph::find(std::string_view label) const {
  for (Vertex v = 0; v < labels_.size(); ++v)
    if (labels_[v] == label) return v;
  return std::nullopt;
}

Vertex MixedGraph::index_of(std::string_view label) const {
  auto v = find(label);
  if (!v) throw std::invalid_argument("unknown vertex '" + std::string(label) + "'");
  return *v;
}

void MixedGraph::check_vertex(Vertex v) const {
  if (v >= size()) throw std::invalid_argument("vertex id out of range");
}

void MixedGraph::add_edge(Vertex u, Vertex v, Mark at_u, Mark at_v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw std::invalid_argument("self-loop on '" + labels_[u] + "'");
  if (adjacent(u, v)) throw std::invalid_argument("duplicate edge " + labels_[u] + " - " + labels_[v]);
  set_edge(u, v, at_u, at_v);
}

void MixedGraph::set_edge(Vertex u, Vertex v, Mark at_u, Mark at_v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw std::invalid_argument("self-loop on '" + labels_[u] + "'");
  if (at_u == Mark::None || at_v == Mark::None) throw std::invalid_argument("edge marks must be set");
  if (!adjacent(u, v)) {
    ++edge_count_;
    adj_[u].insert(v);
    adj_[v].insert(u);
  }
  const std::size_t n = size();
  ends_[v * n + u] = static_cast<std::uint8_t>(at_u);
  ends_[u * n + v] = static_cast<std::uint8_t>(at_v);
}

void MixedGraph::remove_edge(Vertex u, Vertex v) {
  if (!adjacent(u, v)) return;
  const std::size_t n = size();
  ends_[v * n + u] = 0;
  ends_[u * n + v] = 0;
  adj_[u].erase(v);
  adj_[v].erase(u);
  --edge_count_;
}

void MixedGraph::set_mark(Vertex at, Vertex other, Mark m) {
  if (!adjacent(at, other)) throw std::invalid_argument("set_mark on a missing edge");
  if (m == Mark::None) throw std::invalid_argument("use remove_edge to delete an edge");
  ends_[other * size() + at] = static_cast<std::uint8_t>(m);
}

std::vector<EdgeRecord> MixedGraph::edges() const {
  std::vector<EdgeRecord> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < size(); ++u)
    adj_[u].for_each([&](Vertex v) {
      if (u < v) out.push_back({u, v, mark_at(u, v), mark_at(v, u)});
    });
  return out;
}

bool MixedGraph::has_circles() const {
  for (auto e : ends_)
    if (e == static_cast<std::uint8_t>(Mark::Circle)) return true;
  return false;
}

std::size_t MixedGraph::circle_count() const {
  std::size_t c = 0;
  for (auto e : ends_)
    if (e == static_cast<std::uint8_t>(Mark::Circle)) ++c;
  return c;
}

std::string format_set(const MixedGraph& g, const VertexSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](Vertex v) {
    if (!first) out += ',';
    out += g.label(v);
    first = false;
  });
  return out + "}";
}

}  // namespace pagrules
