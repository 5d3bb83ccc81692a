#include "uhmc/sampler.hpp"

#include <stdexcept>

#include "uhmc/stats.hpp"

namespace uhmc {

double eval_observable(const Observable& f, const Matrix& x) {
  return std::visit(
      [&](const auto& obs) -> double {
        using T = std::decay_t<decltype(obs)>;
        if constexpr (std::is_same_v<T, IntensiveMean>) {
          if (obs.coord < 0 || obs.coord >= x.rows())
            throw std::invalid_argument("observable coordinate out of range");
          return x.row(obs.coord).mean();
        } else if constexpr (std::is_same_v<T, IntensiveFunc>) {
          if (obs.kind == IntensiveFunc::Kind::One) return 1.0;
          if (obs.coord < 0 || obs.coord >= x.rows())
            throw std::invalid_argument("observable coordinate out of range");
          return x.row(obs.coord).array().square().mean();
        } else {
          if (obs.coord < 0 || obs.coord >= x.rows())
            throw std::invalid_argument("observable coordinate out of range");
          return x.row(obs.coord).sum();
        }
      },
      f);
}

void hmc_step_inplace(const MeanFieldModel& model, Matrix& x, const IntegratorConfig& cfg,
                      ParticleStreams& streams, HmcWorkspace& ws) {
  cfg.validate();
  ws.xi.resize(model.d, model.n);
  streams.fill_normals(ws.xi);
  verlet_flow_inplace(model, x, ws.xi, cfg, ws.verlet);
}

Matrix hmc_step(const MeanFieldModel& model, const Matrix& x, const IntegratorConfig& cfg,
                ParticleStreams& streams) {
  Matrix out = x;
  HmcWorkspace ws;
  hmc_step_inplace(model, out, cfg, streams, ws);
  return out;
}

ChainTrace run_chain(const MeanFieldModel& model, const Matrix& x0, int m,
                     const IntegratorConfig& cfg, ParticleStreams& streams, int thin) {
  if (m < 0) throw std::invalid_argument("run_chain requires m >= 0");
  if (thin < 1) throw std::invalid_argument("run_chain requires thin >= 1");
  ChainTrace trace;
  trace.steps = m;
  trace.thin = thin;
  trace.cfg = cfg;
  trace.states.push_back(x0);
  Matrix x = x0;
  HmcWorkspace ws;
  for (int k = 1; k <= m; ++k) {
    hmc_step_inplace(model, x, cfg, streams, ws);
    if (k % thin == 0 || k == m) trace.states.push_back(x);
  }
  return trace;
}

double ergodic_average(const ChainTrace& trace, const Observable& f, int burn_in, int window) {
  if (trace.thin != 1) throw std::invalid_argument("ergodic_average requires an unthinned trace");
  if (burn_in < 0 || window < 1) throw std::invalid_argument("ergodic_average: bad window");
  if (burn_in + window > static_cast<int>(trace.states.size()))
    throw std::invalid_argument("ergodic_average: window exceeds trace length");
  KahanSum acc;
  for (int k = burn_in; k < burn_in + window; ++k) acc.add(eval_observable(f, trace.states[k]));
  return acc.value() / window;
}

}  // namespace uhmc
