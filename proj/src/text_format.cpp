#include "pagrules/text_format.hpp"

#include <optional>
#include <unordered_set>

#include "pagrules/errors.hpp"

namespace pagrules {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s)
    if (c < 0x21 || c == ':' || c == '#' || c == 0x7f) return false;
  return true;
}

std::optional<std::pair<Mark, Mark>> decode_core(std::string_view core) {
  if (core.size() != 3 || core[1] != '-') return std::nullopt;
  auto left = [](char c) -> std::optional<Mark> {
    switch (c) {
      case '<': return Mark::Arrow;
      case 'o': return Mark::Circle;
      case '-': return Mark::Tail;
      default: return std::nullopt;
    }
  };
  auto right = [](char c) -> std::optional<Mark> {
    switch (c) {
      case '>': return Mark::Arrow;
      case 'o': return Mark::Circle;
      case '-': return Mark::Tail;
      default: return std::nullopt;
    }
  };
  auto a = left(core[0]), b = right(core[2]);
  if (!a || !b) return std::nullopt;
  return std::make_pair(*a, *b);
}

template <typename F>
void for_each_line(std::string_view text, F f) {
  std::size_t line_no = 1, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    f(line_no, text.substr(pos, end - pos));
    if (end == text.size()) break;
    pos = end + 1;
    ++line_no;
  }
}

struct EdgeLine {
  Vertex u, v;
  Mark mu, mv;
};

EdgeLine parse_edge_line(const MixedGraph& g, std::size_t line_no, const std::vector<Token>& toks) {
  if (toks.size() != 3)
    throw ParseError(line_no, toks.front().column, "expected an edge line of the form 'A o-> B'");
  auto marks = decode_core(toks[1].text);
  if (!marks) throw ParseError(line_no, toks[1].column, "unknown edge '" + std::string(toks[1].text) + "'");
  auto u = g.find(toks[0].text);
  if (!u) throw ParseError(line_no, toks[0].column, "unknown vertex '" + std::string(toks[0].text) + "'");
  auto v = g.find(toks[2].text);
  if (!v) throw ParseError(line_no, toks[2].column, "unknown vertex '" + std::string(toks[2].text) + "'");
  if (*u == *v) throw ParseError(line_no, toks[2].column, "self-loop on '" + std::string(toks[0].text) + "'");
  return {*u, *v, marks->first, marks->second};
}

}  // namespace

ParsedGraph parse_graph_file(std::string_view text) {
  std::vector<std::string> observed, latent;
  std::unordered_set<std::string> seen;
  std::optional<MixedGraph> g;
  bool have_vertices = false, have_latent = false;

  auto declare = [&](std::size_t line_no, const std::vector<Token>& toks, std::vector<std::string>& into) {
    for (std::size_t i = 1; i < toks.size(); ++i) {
      if (!valid_label(toks[i].text))
        throw ParseError(line_no, toks[i].column, "invalid vertex label '" + std::string(toks[i].text) + "'");
      std::string s(toks[i].text);
      if (!seen.insert(s).second) throw ParseError(line_no, toks[i].column, "duplicate vertex '" + s + "'");
      into.push_back(std::move(s));
    }
  };

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto toks = tokenize(line);
    if (toks.empty()) return;
    if (toks[0].text == "vertices:" || toks[0].text == "latent:") {
      bool is_latent = toks[0].text == "latent:";
      if (g) throw ParseError(line_no, toks[0].column, "vertex declarations must precede edges");
      bool& flag = is_latent ? have_latent : have_vertices;
      if (flag) throw ParseError(line_no, toks[0].column, "repeated '" + std::string(toks[0].text) + "' line");
      flag = true;
      declare(line_no, toks, is_latent ? latent : observed);
      return;
    }
    if (toks[0].text.back() == ':')
      throw ParseError(line_no, toks[0].column, "unknown directive '" + std::string(toks[0].text) + "'");
    if (!have_vertices) throw ParseError(line_no, toks[0].column, "edge before the 'vertices:' line");
    if (!g) {
      std::vector<std::string> all = observed;
      all.insert(all.end(), latent.begin(), latent.end());
      g.emplace(std::move(all));
    }
    EdgeLine e = parse_edge_line(*g, line_no, toks);
    if (g->adjacent(e.u, e.v))
      throw ParseError(line_no, toks[0].column,
                       "duplicate edge between '" + g->label(e.u) + "' and '" + g->label(e.v) + "'");
    g->add_edge(e.u, e.v, e.mu, e.mv);
  });
  if (!g) {
    std::vector<std::string> all = observed;
    all.insert(all.end(), latent.begin(), latent.end());
    g.emplace(std::move(all));
  }
  ParsedGraph out{std::move(*g), VertexSet(observed.size() + latent.size())};
  for (std::size_t i = 0; i < latent.size(); ++i) out.latent.insert(observed.size() + i);
  return out;
}

MixedGraph parse_graph(std::string_view text) { return parse_graph_file(text).graph; }

std::string edge_core(Mark at_u, Mark at_v) {
  auto left = [](Mark m) { return m == Mark::Arrow ? '<' : m == Mark::Circle ? 'o' : '-'; };
  auto right = [](Mark m) { return m == Mark::Arrow ? '>' : m == Mark::Circle ? 'o' : '-'; };
  return {left(at_u), '-', right(at_v)};
}

std::string serialize_graph(const MixedGraph& g, const VertexSet& latent) {
  std::string out = "vertices:";
  for (Vertex v = 0; v < g.size(); ++v)
    if (!latent.contains(v)) out += " " + g.label(v);
  out += "\n";
  if (!latent.empty()) {
    out += "latent:";
    latent.for_each([&](Vertex v) { out += " " + g.label(v); });
    out += "\n";
  }
  for (const auto& e : g.edges()) out += g.label(e.u) + " " + edge_core(e.mark_u, e.mark_v) + " " + g.label(e.v) + "\n";
  return out;
}

std::string serialize_graph(const MixedGraph& g) { return serialize_graph(g, g.empty_set()); }

BackgroundKnowledge parse_bk(std::string_view text, const MixedGraph& g) {
  BackgroundKnowledge bk;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto toks = tokenize(line);
    if (toks.empty() || toks[0].text == "vertices:") return;
    EdgeLine e = parse_edge_line(g, line_no, toks);
    if (!g.adjacent(e.u, e.v))
      throw ParseError(line_no, toks[0].column,
                       "no edge between '" + g.label(e.u) + "' and '" + g.label(e.v) + "' in the graph");
    if (e.mu != Mark::Circle) bk.items.push_back({e.u, e.v, e.mu});
    if (e.mv != Mark::Circle) bk.items.push_back({e.v, e.u, e.mv});
  });
  return bk;
}

std::vector<std::pair<std::string, std::string>> split_sections(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  for_each_line(text, [&](std::size_t, std::string_view line) {
    if (line.size() > 2 && line[0] == '#' && line[1] == ' ') {
      std::string name(line.substr(2));
      while (!name.empty() && (name.back() == ' ' || name.back() == '\r')) name.pop_back();
      out.emplace_back(std::move(name), std::string());
      return;
    }
    if (out.empty()) out.emplace_back(std::string(), std::string());
    out.back().second.append(line);
    out.back().second.push_back('\n');
  });
  return out;
}

}  // namespace pagrules
