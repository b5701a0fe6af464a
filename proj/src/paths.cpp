#include "pagrules/paths.hpp"

#include <deque>

namespace pagrules {

namespace {

// Reachable part of the (previous, current) pair graph.
struct PairSpace {
  std::size_t n = 0;
  std::vector<int> index;  // prev * n + cur -> state number, -1 if unseen
  std::vector<std::pair<Vertex, Vertex>> states;
  std::vector<int> parent;
  std::vector<std::vector<int>> succ;
};

PairSpace explore(const MixedGraph& g, const std::vector<std::pair<Vertex, Vertex>>& starts, const StepFn& step,
                  std::optional<Vertex> forbid) {
  PairSpace ps;
  ps.n = g.size();
  ps.index.assign(ps.n * ps.n, -1);
  auto add = [&](Vertex p, Vertex c, int par) {
    int& slot = ps.index[p * ps.n + c];
    if (slot >= 0) return slot;
    slot = static_cast<int>(ps.states.size());
    ps.states.emplace_back(p, c);
    ps.parent.push_back(par);
    ps.succ.emplace_back();
    return slot;
  };
  for (auto [s0, s1] : starts)
    if (g.adjacent(s0, s1) && step(s0, s1)) add(s0, s1, -1);
  for (std::size_t i = 0; i < ps.states.size(); ++i) {
    auto [p, c] = ps.states[i];
    for (Vertex w : g.neighbors(c).members()) {
      if (w == p || (forbid && w == *forbid) || g.adjacent(p, w) || !step(c, w)) continue;
      int next = add(c, w, static_cast<int>(i));
      ps.succ[i].push_back(next);
    }
  }
  return ps;
}

Path reconstruct(const PairSpace& ps, int state) {
  Path rev;
  int s = state;
  while (true) {
    rev.push_back(ps.states[s].second);
    if (ps.parent[s] < 0) {
      rev.push_back(ps.states[s].first);
      break;
    }
    s = ps.parent[s];
  }
  return Path(rev.rbegin(), rev.rend());
}

bool is_simple(const Path& p, std::size_t n) {
  VertexSet seen(n);
  for (Vertex v : p) {
    if (seen.contains(v)) return false;
    seen.insert(v);
  }
  return true;
}

// States from which some accepted state can be reached.
std::vector<char> alive_states(const PairSpace& ps, const std::vector<char>& accepting) {
  std::vector<std::vector<int>> pred(ps.states.size());
  for (std::size_t i = 0; i < ps.states.size(); ++i)
    for (int j : ps.succ[i]) pred[j].push_back(static_cast<int>(i));
  std::vector<char> alive(ps.states.size(), 0);
  std::vector<int> stack;
  for (std::size_t i = 0; i < ps.states.size(); ++i)
    if (accepting[i]) {
      alive[i] = 1;
      stack.push_back(static_cast<int>(i));
    }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int p : pred[s])
      if (!alive[p]) {
        alive[p] = 1;
        stack.push_back(p);
      }
  }
  return alive;
}

bool exact_search(const PairSpace& ps, int state, const std::vector<char>& accepting, const std::vector<char>& alive,
                  Path& path, VertexSet& on_path) {
  if (accepting[state]) return true;
  for (int nxt : ps.succ[state]) {
    if (!alive[nxt]) continue;
    Vertex w = ps.states[nxt].second;
    if (on_path.contains(w)) continue;
    path.push_back(w);
    on_path.insert(w);
    if (exact_search(ps, nxt, accepting, alive, path, on_path)) return true;
    path.pop_back();
    on_path.erase(w);
  }
  return false;
}

std::optional<Path> exact_from_starts(const PairSpace& ps, const std::vector<char>& accepting) {
  auto alive = alive_states(ps, accepting);
  for (std::size_t i = 0; i < ps.states.size(); ++i) {
    if (ps.parent[i] >= 0 || !alive[i]) continue;
    auto [s0, s1] = ps.states[i];
    if (s0 == s1) continue;
    Path path{s0, s1};
    VertexSet on_path(ps.n);
    on_path.insert(s0);
    on_path.insert(s1);
    if (exact_search(ps, static_cast<int>(i), accepting, alive, path, on_path)) return path;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Path> find_uncovered_path(const MixedGraph& g, const std::vector<std::pair<Vertex, Vertex>>& starts,
                                        const StepFn& step, const EndFn& accept) {
  PairSpace ps = explore(g, starts, step, std::nullopt);
  std::vector<char> accepting(ps.states.size(), 0);
  bool any = false;
  for (std::size_t i = 0; i < ps.states.size(); ++i) {
    auto [p, c] = ps.states[i];
    if (!accept(p, c)) continue;
    accepting[i] = 1;
    any = true;
    Path walk = reconstruct(ps, static_cast<int>(i));
    if (is_simple(walk, g.size())) return walk;
  }
  if (!any) return std::nullopt;
  return exact_from_starts(ps, accepting);
}

VertexSet uncovered_reach(const MixedGraph& g, Vertex start, Vertex second, const StepFn& step) {
  VertexSet out(g.size());
  if (start == second || !g.adjacent(start, second) || !step(start, second)) return out;
  PairSpace ps = explore(g, {{start, second}}, step, start);
  VertexSet pending(g.size());
  for (std::size_t i = 0; i < ps.states.size(); ++i) {
    Vertex v = ps.states[i].second;
    if (out.contains(v) || pending.contains(v)) continue;
    if (is_simple(reconstruct(ps, static_cast<int>(i)), g.size()))
      out.insert(v);
    else
      pending.insert(v);
  }
  pending.for_each([&](Vertex v) {
    std::vector<char> accepting(ps.states.size(), 0);
    for (std::size_t i = 0; i < ps.states.size(); ++i) accepting[i] = ps.states[i].second == v;
    if (exact_from_starts(ps, accepting)) out.insert(v);
  });
  return out;
}

namespace {

bool minimal_dfs(const MixedGraph& g, Path& path, VertexSet& on_path, const StepFn& step,
                 const std::function<Visit(const Path&)>& visit) {
  Vertex last = path.back();
  for (Vertex w : g.neighbors(last).members()) {
    if (on_path.contains(w) || !step(last, w)) continue;
    // w may touch only `last` among the vertices already on the path.
    VertexSet touches = g.neighbors(w) & on_path;
    touches.erase(last);
    if (!touches.empty()) continue;
    path.push_back(w);
    on_path.insert(w);
    Visit r = visit(path);
    if (r == Visit::Stop) return false;
    if (r == Visit::Continue && !minimal_dfs(g, path, on_path, step, visit)) return false;
    path.pop_back();
    on_path.erase(w);
  }
  return true;
}

}  // namespace

bool for_each_minimal_path(const MixedGraph& g, Vertex start, const StepFn& step,
                           const std::function<Visit(const Path&)>& visit) {
  Path path{start};
  VertexSet on_path(g.size());
  on_path.insert(start);
  return minimal_dfs(g, path, on_path, step, visit);
}

}  // namespace pagrules
