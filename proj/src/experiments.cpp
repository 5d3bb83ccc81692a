#include "uhmc/experiments.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "uhmc/stats.hpp"

namespace uhmc {

bool ExperimentReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

const Series* ExperimentReport::find_series(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return &s;
  return nullptr;
}

std::string ExperimentReport::summary() const {
  std::ostringstream os;
  os << "study=" << study << " seed=" << seed << "\n";
  for (const auto& [k, v] : config_echo) os << "  " << k << "=" << v << "\n";
  for (const auto& [k, v] : scalars) os << "  " << k << "=" << v << "\n";
  for (const auto& v : verdicts)
    os << "  VERDICT " << v.name << " " << (v.pass ? "PASS" : "FAIL") << " (" << v.detail
       << ")\n";
  return os.str();
}

void for_each_replica(int replicas, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || replicas <= 1) {
    for (int r = 0; r < replicas; ++r) fn(r);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next.fetch_add(1); r < replicas; r = next.fetch_add(1)) fn(r);
  };
  const int nt = std::min(threads, replicas);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

Matrix draw_start(const StartDistribution& start, int d, int n, NormalStream& rng) {
  Matrix x(d, n);
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < d; ++r) {
      if (start.kind == StartDistribution::Kind::GaussianScaled)
        x(r, i) = start.scale * rng.normal();
      else
        x(r, i) = start.low + (start.high - start.low) * rng.uniform();
    }
  }
  return x;
}

namespace {

// Auxiliary draws (starts, mixture means) live on substream ids far above any
// particle index so they never collide with chain noise.
constexpr std::uint64_t kStartStreamId = 0xA11CE00000000000ULL;

NormalStream aux_stream(std::uint64_t seed, std::uint64_t stream) {
  return NormalStream(ParticleStreams::substream_seed({seed, stream}, kStartStreamId));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ExperimentReport contraction_experiment(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.study = "contraction";
  rep.seed = cfg.seed;
  rep.config_echo = {{"replicas", fmt(cfg.replicas)},
                     {"n", fmt(cfg.model.n)},
                     {"T", fmt(cfg.integrator.T)},
                     {"leapfrog_steps", fmt(cfg.integrator.steps)},
                     {"gamma", fmt(cfg.coupling.gamma)},
                     {"tol", fmt(cfg.coupling.tol)}};

  const int R = cfg.replicas;
  std::vector<std::vector<double>> dist(R);
  std::vector<char> converged(R, 0);
  for_each_replica(R, cfg.threads, [&](int r) {
    auto start_rng = aux_stream(cfg.seed, r);
    const Matrix x0 = draw_start(cfg.start, cfg.model.d, cfg.model.n, start_rng);
    const Matrix y0 = draw_start(cfg.start, cfg.model.d, cfg.model.n, start_rng);
    ParticleStreams streams({cfg.seed, static_cast<std::uint64_t>(r)}, cfg.model.n);
    const CouplingTrace trace =
        run_coupled_chain(cfg.model, x0, y0, cfg.integrator, cfg.coupling, streams);
    dist[r].reserve(trace.series.size());
    for (const auto& s : trace.series) dist[r].push_back(s.mean_distance);
    converged[r] = trace.converged ? 1 : 0;
  });

  std::size_t len = 0;
  for (const auto& v : dist) len = std::max(len, v.size());
  Series avg{"mean_distance", {}, {}, {}};
  for (std::size_t k = 0; k < len; ++k) {
    KahanSum acc;
    for (int r = 0; r < R; ++r) {
      const auto& v = dist[r];
      acc.add(k < v.size() ? v[k] : v.back());  // converged chains hold their final value
    }
    avg.x.push_back(static_cast<double>(k));
    avg.y.push_back(acc.value() / R);
  }
  rep.series.push_back(avg);

  int nconv = 0;
  for (char c : converged) nconv += c;
  rep.scalars["converged_fraction"] = static_cast<double>(nconv) / R;

  // Rate fit uses the average over converged replicas only: a replica stuck in
  // distinct modes contributes a flat plateau whose level depends on how many
  // chains it is averaged with, which would corrupt the fit window.
  std::vector<double> fit_avg(len, 0.0);
  {
    const int denom = nconv > 0 ? nconv : R;
    for (std::size_t k = 0; k < len; ++k) {
      KahanSum acc;
      for (int r = 0; r < R; ++r) {
        if (nconv > 0 && !converged[r]) continue;
        const auto& v = dist[r];
        acc.add(k < v.size() ? v[k] : v.back());
      }
      fit_avg[k] = acc.value() / denom;
    }
  }

  // Post-transient window: after the averaged series first drops below half
  // its initial value, down to the termination threshold.
  std::size_t w0 = len;
  for (std::size_t k = 0; k < len; ++k) {
    if (fit_avg[k] < 0.5 * fit_avg[0]) {
      w0 = k;
      break;
    }
  }
  std::size_t w1 = len;
  for (std::size_t k = w0; k < len; ++k) {
    if (fit_avg[k] <= cfg.coupling.tol) {
      w1 = k;
      break;
    }
  }
  double rate = std::numeric_limits<double>::quiet_NaN(), rate_se = 0.0;
  if (w0 + 2 < w1) {
    std::vector<double> xs, ys;
    for (std::size_t k = w0; k < w1; ++k) {
      if (fit_avg[k] > 0) {
        xs.push_back(static_cast<double>(k));
        ys.push_back(std::log(fit_avg[k]));
      }
    }
    if (xs.size() >= 3) {
      const SlopeFit fit = fit_line(xs, ys);
      rate = -fit.slope;
      rate_se = fit.slope_se;
    }
  }
  rep.scalars["decay_rate"] = rate;
  rep.scalars["decay_rate_se"] = rate_se;
  rep.scalars["fit_window_start"] = static_cast<double>(w0);
  rep.scalars["fit_window_end"] = static_cast<double>(w1);

  Verdict v;
  v.name = "distance_decays";
  v.pass = std::isfinite(rate) ? rate > 0 : nconv == R;
  v.detail = "fitted post-transient decay rate > 0 (rate=" + fmt(rate) +
             ", converged_fraction=" + fmt(rep.scalars["converged_fraction"]) + ")";
  rep.verdicts.push_back(v);
  return rep;
}

ExperimentReport contraction_theorem_check(const ExperimentConfig& cfg, const Matrix& x,
                                           const Matrix& y) {
  ExperimentReport rep;
  rep.study = "contraction_theorem_check";
  rep.seed = cfg.seed;
  const double T = cfg.integrator.T;
  const double h = cfg.integrator.h();
  const DerivedConstants dc = derive_constants(cfg.regularity, T);
  const ConditionReport conds = check_conditions(cfg.regularity, T, h);
  rep.scalars["c"] = dc.c;
  rep.scalars["R_tilde"] = dc.R_tilde;
  rep.scalars["gamma_formula"] = dc.gamma;

  bool gate = true;
  std::string failing;
  for (const char* name : {"cond_T", "cond_h_T", "cond_epsilon"}) {
    const Condition* c = conds.find(name);
    if (c && !c->pass) {
      gate = false;
      failing += std::string(name) + " (" + fmt(c->lhs) + (c->strict ? " >= " : " > ") +
                 fmt(c->rhs) + ") ";
    }
  }
  if (!gate) {
    Verdict v;
    v.name = "refused";
    v.pass = false;
    v.detail = "conditions not satisfied: " + failing;
    rep.verdicts.push_back(v);
    return rep;
  }

  const double rho0 = rho_distance(x, y, T, dc.R_1);
  if (rho0 == 0.0) {
    Verdict v{"one_step_contraction", true, "rho(x,y)=0, trivially consistent"};
    rep.verdicts.push_back(v);
    return rep;
  }

  const int N = cfg.mc_draws;
  std::vector<double> vals(N);
  const int chunks = 16;
  for_each_replica(chunks, cfg.threads, [&](int c) {
    const int lo = static_cast<int>(static_cast<long long>(N) * c / chunks);
    const int hi = static_cast<int>(static_cast<long long>(N) * (c + 1) / chunks);
    ParticleStreams streams({cfg.seed, static_cast<std::uint64_t>(c)}, cfg.model.n);
    CoupledWorkspace ws;
    for (int t = lo; t < hi; ++t) {
      CoupledPhase phase{x, y, {}};
      coupled_hmc_step(cfg.model, phase, cfg.integrator, cfg.coupling, streams, ws);
      vals[t] = rho_distance(phase.x, phase.y, T, dc.R_1);
    }
  });
  RunningMoments mom;
  for (double v : vals) mom.add(v);
  const double estimate = mom.mean() / rho0;
  const double se = mom.stderr_mean() / rho0;
  rep.scalars["estimate"] = estimate;
  rep.scalars["stderr"] = se;
  rep.scalars["bound"] = 1.0 - dc.c;

  Verdict v;
  v.name = "one_step_contraction";
  v.pass = estimate + 4.0 * se <= 1.0 - dc.c;
  v.detail = "E[rho(X,Y)]/rho(x,y) + 4*SE = " + fmt(estimate + 4.0 * se) +
             " <= 1-c = " + fmt(1.0 - dc.c);
  rep.verdicts.push_back(v);
  return rep;
}

namespace {

double endpoint_error(const MeanFieldModel& model, const Matrix& x0, const Matrix& xi, double T,
                      int steps, const Matrix& q_ref) {
  Matrix q = x0, p = xi;
  VerletWorkspace ws;
  verlet_flow_inplace(model, q, p, {T, steps}, ws);
  return ell1_distance(q, q_ref);
}

}  // namespace

ExperimentReport order_study(const ExperimentConfig& cfg, const Matrix& x0) {
  ExperimentReport rep;
  rep.study = "order_study";
  rep.seed = cfg.seed;
  if (cfg.ladder_steps.size() < 2)
    throw std::invalid_argument("order_study requires an h ladder of >= 2 levels");
  int finest = 0;
  for (int s : cfg.ladder_steps) finest = std::max(finest, s);
  const int ref_steps = cfg.reference_steps > 0 ? cfg.reference_steps : 64 * finest;
  const double T = cfg.integrator.T;
  const int levels = static_cast<int>(cfg.ladder_steps.size());
  const int R = cfg.replicas;
  rep.config_echo = {{"replicas", fmt(R)}, {"reference_steps", fmt(ref_steps)}};

  // errors[level][replica]; the same xi drives every level of a replica (CRN).
  std::vector<std::vector<double>> errors(levels, std::vector<double>(R));
  std::vector<double> checksums(R);
  for_each_replica(R, cfg.threads, [&](int r) {
    ParticleStreams streams({cfg.seed, static_cast<std::uint64_t>(r)}, cfg.model.n);
    Matrix xi(cfg.model.d, cfg.model.n);
    streams.fill_normals(xi);
    checksums[r] = xi.sum();
    Matrix q = x0, p = xi;
    VerletWorkspace ws;
    verlet_flow_inplace(cfg.model, q, p, {T, ref_steps}, ws);
    const Matrix q_ref = q;
    for (int l = 0; l < levels; ++l)
      errors[l][r] = endpoint_error(cfg.model, x0, xi, T, cfg.ladder_steps[l], q_ref);
  });

  Series err{"error_vs_h", {}, {}, {}};
  std::vector<double> log_h, log_e;
  for (int l = 0; l < levels; ++l) {
    RunningMoments mom;
    for (double e : errors[l]) mom.add(e);
    const double h = T / cfg.ladder_steps[l];
    err.x.push_back(h);
    err.y.push_back(mom.mean());
    err.yerr.push_back(mom.stderr_mean());
    log_h.push_back(std::log(h));
    log_e.push_back(std::log(mom.mean()));
  }
  rep.series.push_back(err);
  double crn = checksums[0];
  bool crn_ok = true;
  for (double c : checksums) crn_ok = crn_ok && std::isfinite(c);
  rep.scalars["crn_checksum_replica0"] = crn;

  const SlopeFit fit = fit_line(log_h, log_e);
  rep.scalars["slope"] = fit.slope;
  rep.scalars["slope_se"] = fit.slope_se;
  Verdict v;
  v.name = "convergence_order";
  v.pass = crn_ok && fit.slope >= 1.7 && fit.slope <= 2.3;
  v.detail = "log-log slope " + fmt(fit.slope) + " in [1.7, 2.3]";
  rep.verdicts.push_back(v);

  if (!cfg.n_list.empty()) {
    // Error growth in n at the middle ladder level; at most linear.
    const int mid_steps = cfg.ladder_steps[levels / 2];
    Series sn{"error_vs_n", {}, {}, {}};
    std::vector<double> log_n, log_err_n;
    for (int n : cfg.n_list) {
      MeanFieldModel m =
          MeanFieldModel::make(cfg.model.confinement, cfg.model.interaction, cfg.model.epsilon,
                               n, cfg.model.d);
      std::vector<double> errs(R);
      for_each_replica(R, cfg.threads, [&](int r) {
        auto start_rng = aux_stream(cfg.seed, 1000 + r);
        const Matrix xn = draw_start(cfg.start, m.d, m.n, start_rng);
        ParticleStreams streams({cfg.seed, static_cast<std::uint64_t>(r)}, m.n);
        Matrix xi(m.d, m.n);
        streams.fill_normals(xi);
        Matrix q = xn, p = xi;
        VerletWorkspace ws;
        verlet_flow_inplace(m, q, p, {T, ref_steps}, ws);
        errs[r] = endpoint_error(m, xn, xi, T, mid_steps, q);
      });
      RunningMoments mom;
      for (double e : errs) mom.add(e);
      sn.x.push_back(n);
      sn.y.push_back(mom.mean());
      sn.yerr.push_back(mom.stderr_mean());
      log_n.push_back(std::log(static_cast<double>(n)));
      log_err_n.push_back(std::log(mom.mean()));
    }
    rep.series.push_back(sn);
    const SlopeFit nfit = fit_line(log_n, log_err_n);
    rep.scalars["n_scaling_slope"] = nfit.slope;
    Verdict vn;
    vn.name = "n_scaling_at_most_linear";
    vn.pass = nfit.slope <= 1.25;
    vn.detail = "log-log slope in n " + fmt(nfit.slope) + " <= 1.25";
    rep.verdicts.push_back(vn);
  }
  return rep;
}

namespace {

// Streaming ergodic average over a window after burn-in; no states retained.
double streaming_average(const MeanFieldModel& model, Matrix x, const IntegratorConfig& cfg,
                         const Observable& f, int burn_in, int window, ParticleStreams& streams) {
  HmcWorkspace ws;
  for (int k = 0; k < burn_in; ++k) hmc_step_inplace(model, x, cfg, streams, ws);
  KahanSum acc;
  for (int k = 0; k < window; ++k) {
    hmc_step_inplace(model, x, cfg, streams, ws);
    acc.add(eval_observable(f, x));
  }
  return acc.value() / window;
}

}  // namespace

ExperimentReport bias_study(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.study = "bias_study";
  rep.seed = cfg.seed;
  if (cfg.ladder_steps.size() < 2)
    throw std::invalid_argument("bias_study requires an h ladder of >= 2 levels");
  if (cfg.window < 1) throw std::invalid_argument("bias_study requires a positive window");
  const double T = cfg.integrator.T;
  const int levels = static_cast<int>(cfg.ladder_steps.size());
  const int R = cfg.replicas;
  rep.config_echo = {{"replicas", fmt(R)},
                     {"window", fmt(cfg.window)},
                     {"burn_in", fmt(cfg.burn_in)},
                     {"target", fmt(cfg.target_value)},
                     {"n", fmt(cfg.model.n)}};

  Series bias{"bias_vs_h", {}, {}, {}};
  std::vector<double> log_h, log_b;
  for (int l = 0; l < levels; ++l) {
    std::vector<double> est(R);
    for_each_replica(R, cfg.threads, [&](int r) {
      const std::uint64_t stream = static_cast<std::uint64_t>(l) * R + r;
      auto start_rng = aux_stream(cfg.seed, stream);
      const Matrix x0 = draw_start(cfg.start, cfg.model.d, cfg.model.n, start_rng);
      ParticleStreams streams({cfg.seed, stream}, cfg.model.n);
      est[r] = streaming_average(cfg.model, x0, {T, cfg.ladder_steps[l]}, cfg.observable,
                                 cfg.burn_in, cfg.window, streams);
    });
    RunningMoments mom;
    for (double e : est) mom.add(e);
    const double h = T / cfg.ladder_steps[l];
    const double b = std::abs(mom.mean() - cfg.target_value);
    bias.x.push_back(h);
    bias.y.push_back(b);
    bias.yerr.push_back(mom.stderr_mean());
    log_h.push_back(std::log(h));
    log_b.push_back(std::log(std::max(b, 1e-300)));
  }
  rep.series.push_back(bias);

  const SlopeFit fit = fit_line(log_h, log_b);
  rep.scalars["slope"] = fit.slope;
  rep.scalars["slope_se"] = fit.slope_se;
  bool decreasing = true;
  for (int l = 1; l < levels; ++l) decreasing = decreasing && bias.y[l] <= bias.y[l - 1];
  Verdict vd{"bias_decreasing_in_h", decreasing, "abs bias non-increasing along the h ladder"};
  rep.verdicts.push_back(vd);
  Verdict vs;
  vs.name = "bias_slope";
  vs.pass = fit.slope >= 1.5 && fit.slope <= 2.5;
  vs.detail = "log-log slope " + fmt(fit.slope) + " in [1.5, 2.5]";
  rep.verdicts.push_back(vs);

  if (!cfg.n_list.empty()) {
    // Intensive-mean bias across particle counts; n-independence at 3 sigma.
    Series sn{"intensive_bias_vs_n", {}, {}, {}};
    const int steps = cfg.ladder_steps[0];
    const Observable obs = IntensiveMean{0};
    for (std::size_t idx = 0; idx < cfg.n_list.size(); ++idx) {
      const int n = cfg.n_list[idx];
      MeanFieldModel m =
          MeanFieldModel::make(cfg.model.confinement, cfg.model.interaction, cfg.model.epsilon,
                               n, cfg.model.d);
      std::vector<double> est(R);
      for_each_replica(R, cfg.threads, [&](int r) {
        const std::uint64_t stream = 0x10000ULL + idx * R + r;
        auto start_rng = aux_stream(cfg.seed, stream);
        const Matrix x0 = draw_start(cfg.start, m.d, m.n, start_rng);
        ParticleStreams streams({cfg.seed, stream}, m.n);
        est[r] = streaming_average(m, x0, {T, steps}, obs, cfg.burn_in, cfg.window, streams);
      });
      RunningMoments mom;
      for (double e : est) mom.add(e);
      sn.x.push_back(n);
      sn.y.push_back(mom.mean());
      sn.yerr.push_back(mom.stderr_mean());
    }
    rep.series.push_back(sn);
    bool ok = true;
    std::string detail = "pairwise |bias_i - bias_j| <= 3 sqrt(SE_i^2 + SE_j^2):";
    for (std::size_t i = 0; i < sn.y.size(); ++i) {
      for (std::size_t j = i + 1; j < sn.y.size(); ++j) {
        const double diff = std::abs(sn.y[i] - sn.y[j]);
        const double sigma = std::sqrt(sn.yerr[i] * sn.yerr[i] + sn.yerr[j] * sn.yerr[j]);
        ok = ok && diff <= 3.0 * sigma;
        detail += " (" + fmt(sn.x[i]) + "," + fmt(sn.x[j]) + "):" + fmt(diff) + "<=" +
                  fmt(3.0 * sigma);
      }
    }
    Verdict vn{"intensive_bias_n_independent", ok, detail};
    rep.verdicts.push_back(vn);
  }
  return rep;
}

ExperimentReport marginal_check(const ExperimentConfig& cfg, const Matrix& x, const Matrix& y) {
  ExperimentReport rep;
  rep.study = "marginal_check";
  rep.seed = cfg.seed;
  const int n = cfg.model.n, d = cfg.model.d;
  const int N = cfg.mc_draws;
  rep.config_echo = {{"draws", fmt(N)}, {"n", fmt(n)}, {"d", fmt(d)}};

  std::vector<RunningMoments> mom(static_cast<std::size_t>(n) * d);
  long n_sync = 0, n_shift = 0, n_reflect = 0;
  ParticleStreams streams({cfg.seed, 0}, n);
  for (int t = 0; t < N; ++t) {
    for (int i = 0; i < n; ++i) {
      auto& stream = streams.particle(i);
      Vector xi(d);
      for (int r = 0; r < d; ++r) xi[r] = stream.normal();
      const double u = stream.uniform();
      CouplingBranch branch;
      const Vector eta =
          couple_velocity_particle(x.col(i) - y.col(i), xi, u, cfg.coupling, &branch);
      for (int r = 0; r < d; ++r) mom[static_cast<std::size_t>(i) * d + r].add(eta[r]);
      if (branch == CouplingBranch::Synchronous)
        ++n_sync;
      else if (branch == CouplingBranch::Shifted)
        ++n_shift;
      else
        ++n_reflect;
    }
  }
  rep.scalars["n_sync"] = static_cast<double>(n_sync);
  rep.scalars["n_shift"] = static_cast<double>(n_shift);
  rep.scalars["n_reflect"] = static_cast<double>(n_reflect);

  const double tol_mean = 4.0 / std::sqrt(static_cast<double>(N));
  const double tol_var = 4.0 * std::sqrt(2.0 / N);
  const double tol_skew = 4.0 * std::sqrt(6.0 / N);
  bool ok = true;
  double worst_mean = 0, worst_var = 0, worst_skew = 0;
  for (const auto& m : mom) {
    worst_mean = std::max(worst_mean, std::abs(m.mean()));
    worst_var = std::max(worst_var, std::abs(m.variance() - 1.0));
    worst_skew = std::max(worst_skew, std::abs(m.skewness()));
  }
  ok = worst_mean <= tol_mean && worst_var <= tol_var && worst_skew <= tol_skew;
  rep.scalars["worst_abs_mean"] = worst_mean;
  rep.scalars["worst_abs_var_dev"] = worst_var;
  rep.scalars["worst_abs_skew"] = worst_skew;
  Verdict v;
  v.name = "eta_is_standard_normal";
  v.pass = ok;
  v.detail = "per-coordinate |mean|<=" + fmt(tol_mean) + ", |var-1|<=" + fmt(tol_var) +
             ", |skew|<=" + fmt(tol_skew);
  rep.verdicts.push_back(v);
  return rep;
}

}  // namespace uhmc
