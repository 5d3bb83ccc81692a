#include "uhmc/setup.hpp"

namespace uhmc {

namespace {
constexpr std::uint64_t kMixtureMeansStreamId = 0x3E4A5000000000ULL;
}

MeanFieldModel model_from_config(const RunConfig& cfg, std::uint64_t seed) {
  const int n = static_cast<int>(cfg.get_int("model.n"));
  const int d = static_cast<int>(cfg.get_int("model.d"));
  const std::string kind = cfg.get_string("model.confinement");
  ConfinementSpec v;
  if (kind == "quadratic") {
    v = QuadraticConfinement{cfg.get_double_or("model.k", 1.0)};
  } else if (kind == "mixture") {
    const int count = static_cast<int>(cfg.get_int_or("model.mixture_count", 20));
    if (count < 1) throw ConfigError("model.mixture_count must be >= 1");
    const double lo = cfg.get_double_or("model.mixture_low", 0.0);
    const double hi = cfg.get_double_or("model.mixture_high", 10.0);
    NormalStream rng(ParticleStreams::substream_seed({seed, 0}, kMixtureMeansStreamId));
    Matrix means(d, count);
    for (int k = 0; k < count; ++k)
      for (int r = 0; r < d; ++r) means(r, k) = lo + (hi - lo) * rng.uniform();
    v = GaussianMixtureConfinement{std::move(means)};
  } else if (kind == "rosenbrock") {
    v = RosenbrockConfinement{cfg.get_double_or("model.rosenbrock_a", 1.0),
                              cfg.get_double_or("model.rosenbrock_b", 10.0)};
  } else {
    throw ConfigError("model.confinement must be quadratic, mixture or rosenbrock, got `" +
                      kind + "`");
  }
  const std::string inter = cfg.get_string_or("model.interaction", "zero");
  InteractionSpec w;
  if (inter == "zero")
    w = ZeroInteraction{};
  else if (inter == "attractive")
    w = QuadraticInteraction{+1.0};
  else if (inter == "repulsive")
    w = QuadraticInteraction{-1.0};
  else
    throw ConfigError("model.interaction must be zero, attractive or repulsive, got `" + inter +
                      "`");
  try {
    return MeanFieldModel::make(std::move(v), w, cfg.get_double_or("model.epsilon", 0.0), n, d);
  } catch (const ModelError& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
}

IntegratorConfig integrator_from_config(const RunConfig& cfg) {
  IntegratorConfig ic;
  ic.T = cfg.get_double("integrator.T");
  ic.steps = static_cast<int>(cfg.get_int("integrator.leapfrog_steps"));
  try {
    ic.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid integrator config: ") + e.what());
  }
  return ic;
}

CouplingParams coupling_from_config(const RunConfig& cfg) {
  CouplingParams cp;
  cp.gamma = cfg.get_double_or("coupling.gamma", 1.0);
  cp.R_tilde = cfg.has("coupling.r_tilde") ? cfg.get_double_or_inf("coupling.r_tilde")
                                           : std::numeric_limits<double>::infinity();
  cp.tol = cfg.get_double_or("coupling.tol", 1e-5);
  cp.max_steps = static_cast<int>(cfg.get_int_or("coupling.max_steps", 1000));
  try {
    cp.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid coupling config: ") + e.what());
  }
  return cp;
}

RegularityParams regularity_from_config(const RunConfig& cfg) {
  RegularityParams rp;
  rp.K = cfg.get_double("theory.K");
  rp.L = cfg.get_double("theory.L");
  rp.L_tilde = cfg.get_double_or("theory.L_tilde", 0.0);
  rp.R = cfg.get_double_or("theory.R", 0.0);
  rp.epsilon = cfg.get_double_or("theory.epsilon", 0.0);
  rp.L_H = cfg.get_double_or("theory.L_H", 0.0);
  rp.L_H_tilde = cfg.get_double_or("theory.L_H_tilde", 0.0);
  try {
    rp.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid theory parameters: ") + e.what());
  }
  return rp;
}

StartDistribution start_from_config(const RunConfig& cfg) {
  StartDistribution s;
  const std::string kind = cfg.get_string_or("study.start", "gaussian");
  if (kind == "gaussian") {
    s.kind = StartDistribution::Kind::GaussianScaled;
    s.scale = cfg.get_double_or("study.start_scale", 5.0);
  } else if (kind == "box") {
    s.kind = StartDistribution::Kind::UniformBox;
    s.low = cfg.get_double_or("study.start_low", 0.0);
    s.high = cfg.get_double_or("study.start_high", 10.0);
  } else {
    throw ConfigError("study.start must be gaussian or box, got `" + kind + "`");
  }
  return s;
}

Observable observable_from_config(const RunConfig& cfg) {
  const std::string kind = cfg.get_string_or("study.observable", "intensive_mean");
  const int coord = static_cast<int>(cfg.get_int_or("study.coordinate", 0));
  if (kind == "intensive_mean") return IntensiveMean{coord};
  if (kind == "intensive_one") return IntensiveFunc{IntensiveFunc::Kind::One, 0};
  if (kind == "intensive_square") return IntensiveFunc{IntensiveFunc::Kind::CoordSquare, coord};
  if (kind == "extensive_sum") return ExtensiveSum{coord};
  throw ConfigError("study.observable must be one of intensive_mean, intensive_one, "
                    "intensive_square, extensive_sum; got `" +
                    kind + "`");
}

ConfigSchema schema_for(const std::string& subcommand) {
  const std::vector<std::string> model_req = {"model.confinement", "model.n", "model.d"};
  const std::vector<std::string> model_opt = {
      "model.k",          "model.mixture_count", "model.mixture_low", "model.mixture_high",
      "model.rosenbrock_a", "model.rosenbrock_b", "model.interaction", "model.epsilon"};
  const std::vector<std::string> integ_req = {"integrator.T", "integrator.leapfrog_steps"};
  const std::vector<std::string> coup_opt = {"coupling.gamma", "coupling.r_tilde",
                                             "coupling.tol", "coupling.max_steps"};
  const std::vector<std::string> theory_req = {"theory.K", "theory.L"};
  const std::vector<std::string> theory_opt = {"theory.L_tilde", "theory.R", "theory.epsilon",
                                               "theory.L_H", "theory.L_H_tilde"};
  const std::vector<std::string> start_opt = {"study.start", "study.start_scale",
                                              "study.start_low", "study.start_high"};

  auto cat = [](std::initializer_list<std::vector<std::string>> lists) {
    std::vector<std::string> out;
    for (const auto& l : lists) out.insert(out.end(), l.begin(), l.end());
    return out;
  };

  if (subcommand == "sample") {
    return {cat({model_req, integ_req, {"study.steps"}}),
            cat({model_opt, {"study.thin"}, start_opt})};
  }
  if (subcommand == "couple") {
    return {cat({model_req, integ_req}), cat({model_opt, coup_opt, start_opt})};
  }
  if (subcommand == "constants" || subcommand == "check") {
    return {cat({theory_req, {"integrator.T"}}),
            cat({theory_opt, {"integrator.leapfrog_steps"}})};
  }
  if (subcommand == "order-study") {
    return {cat({model_req, integ_req, {"study.ladder", "study.replicas"}}),
            cat({model_opt, {"study.reference_steps", "study.n_list"}, start_opt})};
  }
  if (subcommand == "bias-study") {
    return {cat({model_req, integ_req,
                 {"study.ladder", "study.replicas", "study.window", "study.target"}}),
            cat({model_opt,
                 {"study.burn_in", "study.n_list", "study.observable", "study.coordinate"},
                 start_opt})};
  }
  if (subcommand == "contraction-check") {
    return {cat({model_req, integ_req, theory_req, {"study.draws"}}),
            cat({model_opt, theory_opt, coup_opt, {"study.delta"}})};
  }
  if (subcommand == "marginal-check") {
    return {cat({model_req, {"study.draws"}}), cat({model_opt, coup_opt})};
  }
  throw ConfigError("unknown subcommand: " + subcommand);
}

}  // namespace uhmc
