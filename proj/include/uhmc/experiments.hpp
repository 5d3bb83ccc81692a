#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "uhmc/coupling.hpp"
#include "uhmc/sampler.hpp"
#include "uhmc/theory.hpp"

namespace uhmc {

struct Series {
  std::string name;
  std::vector<double> x, y, yerr;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;  // cites the threshold that was used
};

struct ExperimentReport {
  std::string study;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<Series> series;
  std::map<std::string, double> scalars;
  std::vector<Verdict> verdicts;

  bool all_pass() const;
  const Series* find_series(const std::string& name) const;
  std::string summary() const;  // human-readable block, one line per verdict
};

// How overdispersed coupled starts are drawn.
struct StartDistribution {
  enum class Kind { GaussianScaled, UniformBox };
  Kind kind = Kind::GaussianScaled;
  double scale = 5.0;  // stddev per coordinate (GaussianScaled)
  double low = 0.0, high = 10.0;  // per coordinate (UniformBox)
};

struct ExperimentConfig {
  MeanFieldModel model =
      MeanFieldModel::make(QuadraticConfinement{1.0}, ZeroInteraction{}, 0.0, 1, 1);
  IntegratorConfig integrator;
  CouplingParams coupling;
  RegularityParams regularity;
  StartDistribution start;
  int replicas = 1;
  std::uint64_t seed = 42;
  int threads = 1;  // replica parallelism; results are independent of this

  // study-specific knobs
  std::vector<int> ladder_steps;   // leapfrog step counts for the h ladder
  int reference_steps = 0;         // order study reference (0: 64x finest)
  std::vector<int> n_list;         // particle-count sweep
  Observable observable = IntensiveMean{0};
  double target_value = 0.0;       // known mu(f) for the bias study
  int burn_in = 0;
  int window = 0;                  // ergodic-average window m
  int mc_draws = 100000;           // marginal / theorem-check sample count
};

// Replica-averaged coupled-chain distance decay with a log-linear rate fit
// over the post-transient window (first crossing of half the initial value).
ExperimentReport contraction_experiment(const ExperimentConfig& cfg);

// Monte Carlo check of the one-step contraction E[rho(X,Y)] <= (1-c) rho(x,y)
// at parameters passing check_conditions; refuses the verdict otherwise.
ExperimentReport contraction_theorem_check(const ExperimentConfig& cfg, const Matrix& x,
                                           const Matrix& y);

// Endpoint self-convergence of the Verlet flow against a fine-step reference
// under common random numbers; fits the log-log slope.
ExperimentReport order_study(const ExperimentConfig& cfg, const Matrix& x0);

// |ergodic average - mu(f)| across the h ladder; fits the slope in h and, when
// n_list is set, checks the intensive-observable bias for n-independence.
ExperimentReport bias_study(const ExperimentConfig& cfg);

// Normality of the coupled refreshment eta at a fixed (x, y).
ExperimentReport marginal_check(const ExperimentConfig& cfg, const Matrix& x, const Matrix& y);

// Deterministic helper: draws a start configuration from a dedicated stream.
Matrix draw_start(const StartDistribution& start, int d, int n, NormalStream& rng);

// Runs fn(replica) for replica in [0, replicas) on up to `threads` threads;
// per-replica outputs must be written to disjoint slots.
void for_each_replica(int replicas, int threads, const std::function<void(int)>& fn);

}  // namespace uhmc
