#pragma once
#include <cstdint>
#include <random>
#include <vector>

#include "uhmc/types.hpp"

namespace uhmc {

// (seed, stream) fully determines every draw; stream is the replica index.
struct RngSpec {
  std::uint64_t seed = 42;
  std::uint64_t stream = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic scalar source: uniforms from the top 53 bits of mt19937_64,
// standard normals via Box-Muller. The draw sequence for a fixed seed is part
// of the reproducibility contract (golden traces are diffed bit for bit).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // in [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cache_ = r * std::sin(a);
    has_cache_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool has_cache_ = false;
  double cache_ = 0.0;
};

// One substream per particle, so that particle relabeling permutes the noise
// and the eps = 0 chain factorizes into independent single-particle chains.
class ParticleStreams {
 public:
  ParticleStreams(const RngSpec& spec, int n);
  // Explicit per-slot particle ids (used to permute or to isolate a particle).
  ParticleStreams(const RngSpec& spec, const std::vector<std::uint64_t>& particle_ids);

  NormalStream& particle(int i) { return streams_[i]; }
  int size() const { return static_cast<int>(streams_.size()); }

  // Fills xi (d x n) particle-major: column i consumes d normals from stream i.
  void fill_normals(Matrix& xi);

  static std::uint64_t substream_seed(const RngSpec& spec, std::uint64_t particle_id);

 private:
  std::vector<NormalStream> streams_;
};

}  // namespace uhmc
