#pragma once
#include "uhmc/config.hpp"
#include "uhmc/experiments.hpp"

namespace uhmc {

// Builders from a validated RunConfig. Mixture means are drawn uniformly on
// [mixture_low, mixture_high]^d from the run seed, so a (config, seed) pair
// pins the model exactly.
MeanFieldModel model_from_config(const RunConfig& cfg, std::uint64_t seed);
IntegratorConfig integrator_from_config(const RunConfig& cfg);
CouplingParams coupling_from_config(const RunConfig& cfg);
RegularityParams regularity_from_config(const RunConfig& cfg);
StartDistribution start_from_config(const RunConfig& cfg);
Observable observable_from_config(const RunConfig& cfg);

// Key schema shared by the CLI subcommands.
struct ConfigSchema {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};
ConfigSchema schema_for(const std::string& subcommand);

}  // namespace uhmc
