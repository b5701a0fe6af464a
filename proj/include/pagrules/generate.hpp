#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pagrules/graph.hpp"
#include "pagrules/oracle.hpp"

namespace pagrules {

/// mt19937_64 with explicit mappings to doubles and bounded integers, so the
/// streams do not depend on the standard library's distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  bool chance(double p) { return uniform() < p; }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct GenConfig {
  std::size_t observed = 5;
  std::size_t latents = 1;
  double edge_prob = 0.4;
  std::uint64_t seed = 1;
  OracleLimits limits{};
};

struct GeneratedInstance {
  LatentDagSpec dag;
  MixedGraph mag;
  MixedGraph pag;
  OracleBundle mec;  // the equivalence class of mag; reference_pag == pag
  std::size_t attempts = 1;
};

/// Random DAG over observed + latent vertices, its projection, and the PAG of
/// the projection's equivalence class. Deterministic in the config; draws
/// whose class is too large for the oracle are skipped.
GeneratedInstance generate_instance(const GenConfig& cfg);

/// Observed labels used by the generator: A, B, ..., Z, then V26, V27, ...
std::vector<std::string> default_labels(std::size_t n, const char* prefix_after_z = "V");

/// PAG of the equivalence class of a MAG, found by enumerating the MAGs that
/// refine its skeleton with arrowheads at its unshielded colliders.
OracleBundle mec_of_mag(const MixedGraph& mag, const OracleLimits& limits = {});

/// X o-o V, X o-o M, M -> Y, U -> Y, V o-> U and, for i = 1..k,
/// V o-o Z_i, Z_i o-> U. Requires k >= 2.
MixedGraph ladder_pag(std::size_t k);

/// Random circle tree on n vertices plus pendant vertices attached with
/// arrowheads into the tree; used to time the R12/R13 loop.
MixedGraph complexity_instance(std::size_t n, std::uint64_t seed);

}  // namespace pagrules
