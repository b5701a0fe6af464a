#include "pagrules/generate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "pagrules/errors.hpp"

namespace pagrules {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do r = engine_();
  while (r >= limit);
  return r % n;
}

std::vector<std::string> default_labels(std::size_t n, const char* prefix_after_z) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(i < 26 ? std::string(1, static_cast<char>('A' + i)) : prefix_after_z + std::to_string(i));
  return out;
}

OracleBundle mec_of_mag(const MixedGraph& mag, const OracleLimits& limits) {
  MixedGraph h0(mag.labels());
  for (const auto& e : mag.edges()) h0.add_edge(e.u, e.v, Mark::Circle, Mark::Circle);
  for (const auto& [a, b, c] : unshielded_colliders(mag)) {
    h0.set_mark(b, a, Mark::Arrow);
    h0.set_mark(b, c, Mark::Arrow);
  }
  const Fingerprint target = fingerprint(mag);
  OracleBundle bundle{h0, {}, {}};
  for (auto& m : enumerate_refining_mags(h0, h0, limits))
    if (fingerprint(m) == target) bundle.consistent_mags.push_back(std::move(m));
  bundle.reference_pag = consensus_pag(bundle);
  return bundle;
}

GeneratedInstance generate_instance(const GenConfig& cfg) {
  if (cfg.observed < 2) throw std::invalid_argument("the generator needs at least two observed vertices");
  if (cfg.edge_prob < 0 || cfg.edge_prob > 1) throw std::invalid_argument("edge probability must lie in [0, 1]");
  Rng rng(cfg.seed);
  const std::size_t total = cfg.observed + cfg.latents;
  for (std::size_t attempt = 1;; ++attempt) {
    // perm[i] is the vertex at position i of a random topological order;
    // ids below cfg.observed are observed.
    std::vector<std::size_t> perm(total);
    for (std::size_t i = 0; i < total; ++i) perm[i] = i;
    rng.shuffle(perm);

    LatentDagSpec d;
    d.observed = default_labels(cfg.observed);
    for (std::size_t i = 0; i < cfg.latents; ++i) d.latent.push_back("L" + std::to_string(i + 1));
    auto name = [&](std::size_t pos) {
      std::size_t r = perm[pos];
      return r < cfg.observed ? d.observed[r] : d.latent[r - cfg.observed];
    };
    for (std::size_t i = 0; i < total; ++i)
      for (std::size_t j = i + 1; j < total; ++j)
        if (rng.chance(cfg.edge_prob)) d.edges.emplace_back(name(i), name(j));

    GeneratedInstance inst;
    inst.dag = std::move(d);
    inst.mag = project_dag_to_mag(inst.dag);
    try {
      inst.mec = mec_of_mag(inst.mag, cfg.limits);
    } catch (const CeilingExceeded&) {
      continue;
    }
    inst.pag = inst.mec.reference_pag;
    inst.attempts = attempt;
    return inst;
  }
}

MixedGraph ladder_pag(std::size_t k) {
  if (k < 2) throw std::invalid_argument("the ladder family starts at k = 2");
  std::vector<std::string> labels{"X", "Y", "V", "M", "U"};
  for (std::size_t i = 1; i <= k; ++i) labels.push_back("Z" + std::to_string(i));
  MixedGraph g(labels);
  const Vertex x = 0, y = 1, v = 2, m = 3, u = 4;
  g.add_edge(x, v, Mark::Circle, Mark::Circle);
  g.add_edge(x, m, Mark::Circle, Mark::Circle);
  g.add_edge(m, y, Mark::Tail, Mark::Arrow);
  g.add_edge(u, y, Mark::Tail, Mark::Arrow);
  g.add_edge(v, u, Mark::Circle, Mark::Arrow);
  // Each rung Z_i is a possible but not a definite ancestor of Y once V is
  // made a parent of X, so it widens the block-set range by one vertex.
  for (std::size_t i = 0; i < k; ++i) {
    g.add_edge(v, 5 + i, Mark::Circle, Mark::Circle);
    g.add_edge(5 + i, u, Mark::Circle, Mark::Arrow);
  }
  return g;
}

MixedGraph complexity_instance(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t pendants = std::max<std::size_t>(1, n / 4);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("T" + std::to_string(i));
  for (std::size_t i = 0; i < pendants; ++i) labels.push_back("C" + std::to_string(i));
  MixedGraph g(labels);
  for (Vertex v = 1; v < n; ++v) g.add_edge(rng.below(v), v, Mark::Circle, Mark::Circle);
  for (std::size_t i = 0; i < pendants; ++i) g.add_edge(n + i, rng.below(n), Mark::Circle, Mark::Arrow);
  return g;
}

}  // namespace pagrules
