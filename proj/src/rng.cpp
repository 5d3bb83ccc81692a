#include "uhmc/rng.hpp"

namespace uhmc {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t ParticleStreams::substream_seed(const RngSpec& spec, std::uint64_t particle_id) {
  return splitmix64(splitmix64(spec.seed ^ splitmix64(spec.stream)) + particle_id);
}

ParticleStreams::ParticleStreams(const RngSpec& spec, int n) {
  streams_.reserve(n);
  for (int i = 0; i < n; ++i) streams_.emplace_back(substream_seed(spec, i));
}

ParticleStreams::ParticleStreams(const RngSpec& spec,
                                 const std::vector<std::uint64_t>& particle_ids) {
  streams_.reserve(particle_ids.size());
  for (auto id : particle_ids) streams_.emplace_back(substream_seed(spec, id));
}

void ParticleStreams::fill_normals(Matrix& xi) {
  for (int i = 0; i < xi.cols(); ++i) {
    for (int r = 0; r < xi.rows(); ++r) xi(r, i) = streams_[i].normal();
  }
}

}  // namespace uhmc
