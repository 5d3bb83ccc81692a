#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "uhmc/csv.hpp"
#include "uhmc/setup.hpp"

namespace fs = std::filesystem;
using namespace uhmc;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "path to the run config file")->required();
  cmd->add_option("--seed", args.seed, "master RNG seed (default 42)");
  cmd->add_option("--out", args.out_dir, "output directory (default .)");
  cmd->add_option("--threads", args.threads, "replica parallelism; 1 = reproducibility mode");
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  fs::create_directories(args.out_dir);
  return (fs::path(args.out_dir) / name).string();
}

int report_exit(const ExperimentReport& rep) {
  std::cout << rep.summary();
  return rep.all_pass() ? 0 : 3;
}

void write_report_series(const CommonArgs& args, const RunConfig& cfg, const Series& s,
                         const std::string& file, const std::vector<std::string>& columns,
                         long n_col = -1) {
  CsvWriter w(out_path(args, file), cfg.content_hash(), args.seed, columns);
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    w.begin_row();
    w.field(s.x[i]);
    w.field(s.y[i]);
    w.field(i < s.yerr.size() ? s.yerr[i] : 0.0);
    if (n_col >= 0) w.field(n_col);
    w.end_row();
  }
}

int cmd_sample(const CommonArgs& args) {
  const RunConfig cfg = RunConfig::parse_file(args.config_path);
  const auto schema = schema_for("sample");
  cfg.validate(schema.required, schema.optional);
  const MeanFieldModel model = model_from_config(cfg, args.seed);
  const IntegratorConfig ic = integrator_from_config(cfg);
  const int steps = static_cast<int>(cfg.get_int("study.steps"));
  const int thin = static_cast<int>(cfg.get_int_or("study.thin", 1));
  const StartDistribution start = start_from_config(cfg);

  NormalStream start_rng(ParticleStreams::substream_seed({args.seed, 0}, 0xA11CE00000000000ULL));
  const Matrix x0 = draw_start(start, model.d, model.n, start_rng);
  ParticleStreams streams({args.seed, 0}, model.n);
  const ChainTrace trace = run_chain(model, x0, steps, ic, streams, thin);

  CsvWriter w(out_path(args, "chain.csv"), cfg.content_hash(), args.seed,
              {"step", "particle", "coord", "value"});
  std::vector<long> retained{0};
  for (int k = thin; k <= steps; k += thin) retained.push_back(k);
  if (steps > 0 && steps % thin != 0) retained.push_back(steps);
  for (std::size_t s = 0; s < trace.states.size(); ++s) {
    const Matrix& st = trace.states[s];
    for (int i = 0; i < model.n; ++i) {
      for (int r = 0; r < model.d; ++r) {
        w.begin_row();
        w.field(retained[s]);
        w.field(static_cast<long>(i));
        w.field(static_cast<long>(r));
        w.field(st(r, i));
        w.end_row();
      }
    }
  }
  std::cout << "sample: wrote " << trace.states.size() << " states (" << steps << " steps, thin "
            << thin << ") seed=" << args.seed << "\n";
  return 0;
}

int cmd_couple(const CommonArgs& args) {
  const RunConfig cfg = RunConfig::parse_file(args.config_path);
  const auto schema = schema_for("couple");
  cfg.validate(schema.required, schema.optional);
  const MeanFieldModel model = model_from_config(cfg, args.seed);
  const IntegratorConfig ic = integrator_from_config(cfg);
  const CouplingParams cp = coupling_from_config(cfg);
  const StartDistribution start = start_from_config(cfg);

  NormalStream start_rng(ParticleStreams::substream_seed({args.seed, 0}, 0xA11CE00000000000ULL));
  const Matrix x0 = draw_start(start, model.d, model.n, start_rng);
  const Matrix y0 = draw_start(start, model.d, model.n, start_rng);
  ParticleStreams streams({args.seed, 0}, model.n);
  const CouplingTrace trace = run_coupled_chain(model, x0, y0, ic, cp, streams);

  CsvWriter w(out_path(args, "coupling.csv"), cfg.content_hash(), args.seed,
              {"step", "mean_distance", "ell1", "rho", "n_sync", "n_shift", "n_reflect"});
  for (std::size_t k = 0; k < trace.series.size(); ++k) {
    const auto& s = trace.series[k];
    w.begin_row();
    w.field(static_cast<long>(k));
    w.field(s.mean_distance);
    w.field(s.ell1);
    w.field(s.rho);
    w.field(static_cast<long>(s.n_sync));
    w.field(static_cast<long>(s.n_shift));
    w.field(static_cast<long>(s.n_reflect));
    w.end_row();
  }
  std::cout << "couple: " << (trace.converged ? "converged" : "max_steps reached") << " after "
            << trace.steps << " steps; final mean distance "
            << CsvWriter::format_double(trace.series.back().mean_distance) << "\n";
  return 0;
}

int cmd_constants(const CommonArgs& args) {
  const RunConfig cfg = RunConfig::parse_file(args.config_path);
  const auto schema = schema_for("constants");
  cfg.validate(schema.required, schema.optional);
  const RegularityParams rp = regularity_from_config(cfg);
  const double T = cfg.get_double("integrator.T");
  const DerivedConstants dc = derive_constants(rp, T);
  std::printf("derived constants (T = %.6g):\n", T);
  std::printf("  R_tilde = %.6g\n  gamma   = %.6g\n  R_1     = %.6g\n  kappa   = %.6g\n",
              dc.R_tilde, dc.gamma, dc.R_1, dc.kappa);
  std::printf("  c       = %.6g\n  M       = %.6g\n  C_hat   = %.6g\n", dc.c, dc.M, dc.C_hat);
  if (!dc.kappa_positive)
    std::printf("  warning: kappa <= 0, contraction theory inapplicable\n");
  std::printf("R_tilde=%.17g\ngamma=%.17g\nR_1=%.17g\nkappa=%.17g\nc=%.17g\nM=%.17g\nC_hat=%.17g\n",
              dc.R_tilde, dc.gamma, dc.R_1, dc.kappa, dc.c, dc.M, dc.C_hat);
  return 0;
}

int cmd_check(const CommonArgs& args) {
  const RunConfig cfg = RunConfig::parse_file(args.config_path);
  const auto schema = schema_for("check");
  cfg.validate(schema.required, schema.optional);
  const RegularityParams rp = regularity_from_config(cfg);
  const double T = cfg.get_double("integrator.T");
  const double h1 = cfg.has("integrator.leapfrog_steps")
                        ? T / static_cast<double>(cfg.get_int("integrator.leapfrog_steps"))
                        : 0.0;
  const ConditionReport rep = check_conditions(rp, T, h1);
  for (const auto& c : rep.items) {
    if (c.pass)
      std::printf("%-14s pass  %.6g %s %.6g\n", c.name.c_str(), c.lhs, c.strict ? "<" : "<=",
                  c.rhs);
    else
      std::printf("%-14s FAIL  %.6g %s %.6g\n", c.name.c_str(), c.lhs, c.strict ? ">=" : ">",
                  c.rhs);
  }
  return rep.all_pass ? 0 : 3;
}

ExperimentConfig base_experiment(const RunConfig& cfg, const CommonArgs& args) {
  ExperimentConfig ec;
  ec.model = model_from_config(cfg, args.seed);
  ec.seed = args.seed;
  ec.threads = args.threads;
  return ec;
}

int cmd_order_study(const CommonArgs& args) {
  const RunConfig cfg = RunConfig::parse_file(args.config_path);
  const auto schema = schema_for("order-study");
  cfg.validate(schema.required, schema.optional);
  ExperimentConfig ec = base_experiment(cfg, args);
  ec.integrator = integrator_from_config(cfg);
  ec.replicas = static_cast<int>(cfg.get_int("study.replicas"));
  for (long s : cfg.get_int_list("study.ladder")) ec.ladder_steps.push_back(static_cast<int>(s));
  ec.reference_steps = static_cast<int>(cfg.get_int_or("study.reference_steps", 0));
  if (cfg.has("study.n_list"))
    for (long n : cfg.get_int_list("study.n_list")) ec.n_list.push_back(static_cast<int>(n));
  ec.start = start_from_config(cfg);

  NormalStream start_rng(ParticleStreams::substream_seed({args.seed, 0}, 0xA11CE00000000000ULL));
  const Matrix x0 = draw_start(ec.start, ec.model.d, ec.model.n, start_rng);
  const ExperimentReport rep = order_study(ec, x0);
  write_report_series(args, cfg, *rep.find_series("error_vs_h"), "order.csv",
                      {"h", "mean_error", "stderr"});
  return report_exit(rep);
}

int cmd_bias_study(const CommonArgs& args) {
  const RunConfig cfg = RunConfig::parse_file(args.config_path);
  const auto schema = schema_for("bias-study");
  cfg.validate(schema.required, schema.optional);
  ExperimentConfig ec = base_experiment(cfg, args);
  ec.integrator = integrator_from_config(cfg);
  ec.replicas = static_cast<int>(cfg.get_int("study.replicas"));
  for (long s : cfg.get_int_list("study.ladder")) ec.ladder_steps.push_back(static_cast<int>(s));
  ec.window = static_cast<int>(cfg.get_int("study.window"));
  ec.burn_in = static_cast<int>(cfg.get_int_or("study.burn_in", 0));
  ec.target_value = cfg.get_double("study.target");
  ec.observable = observable_from_config(cfg);
  if (cfg.has("study.n_list"))
    for (long n : cfg.get_int_list("study.n_list")) ec.n_list.push_back(static_cast<int>(n));
  ec.start = start_from_config(cfg);

  const ExperimentReport rep = bias_study(ec);
  CsvWriter w(out_path(args, "bias.csv"), cfg.content_hash(), args.seed,
              {"h", "abs_bias", "stderr", "n"});
  const Series* ladder = rep.find_series("bias_vs_h");
  for (std::size_t i = 0; i < ladder->x.size(); ++i) {
    w.begin_row();
    w.field(ladder->x[i]);
    w.field(ladder->y[i]);
    w.field(ladder->yerr[i]);
    w.field(static_cast<long>(ec.model.n));
    w.end_row();
  }
  if (const Series* sn = rep.find_series("intensive_bias_vs_n")) {
    const double h = ec.integrator.T / ec.ladder_steps[0];
    for (std::size_t i = 0; i < sn->x.size(); ++i) {
      w.begin_row();
      w.field(h);
      w.field(std::abs(sn->y[i] - 0.0));
      w.field(sn->yerr[i]);
      w.field(static_cast<long>(sn->x[i]));
      w.end_row();
    }
  }
  return report_exit(rep);
}

int cmd_contraction_check(const CommonArgs& args) {
  const RunConfig cfg = RunConfig::parse_file(args.config_path);
  const auto schema = schema_for("contraction-check");
  cfg.validate(schema.required, schema.optional);
  ExperimentConfig ec = base_experiment(cfg, args);
  ec.integrator = integrator_from_config(cfg);
  ec.regularity = regularity_from_config(cfg);
  ec.coupling = coupling_from_config(cfg);
  ec.mc_draws = static_cast<int>(cfg.get_int("study.draws"));
  const double delta = cfg.get_double_or("study.delta", 0.01);

  const Matrix x = Matrix::Zero(ec.model.d, ec.model.n);
  Matrix y = Matrix::Zero(ec.model.d, ec.model.n);
  y.row(0).setConstant(delta);
  const ExperimentReport rep = contraction_theorem_check(ec, x, y);
  return report_exit(rep);
}

int cmd_marginal_check(const CommonArgs& args) {
  const RunConfig cfg = RunConfig::parse_file(args.config_path);
  const auto schema = schema_for("marginal-check");
  cfg.validate(schema.required, schema.optional);
  ExperimentConfig ec = base_experiment(cfg, args);
  ec.coupling = coupling_from_config(cfg);
  ec.mc_draws = static_cast<int>(cfg.get_int("study.draws"));

  // Half the particles sit inside the synchronous threshold, half outside,
  // so all branches are exercised when R_tilde is finite.
  const double rt = std::isfinite(ec.coupling.R_tilde) ? ec.coupling.R_tilde : 1.0;
  const Matrix x = Matrix::Zero(ec.model.d, ec.model.n);
  Matrix y = Matrix::Zero(ec.model.d, ec.model.n);
  for (int i = 0; i < ec.model.n; ++i) y(0, i) = (i % 2 == 0) ? 0.5 * rt : 2.0 * rt;
  const ExperimentReport rep = marginal_check(ec, x, y);
  return report_exit(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unadjusted HMC for mean-field particle models"};
  app.require_subcommand(1);
  CommonArgs args;
  std::map<std::string, std::function<int(const CommonArgs&)>> handlers = {
      {"sample", cmd_sample},
      {"couple", cmd_couple},
      {"constants", cmd_constants},
      {"check", cmd_check},
      {"order-study", cmd_order_study},
      {"bias-study", cmd_bias_study},
      {"contraction-check", cmd_contraction_check},
      {"marginal-check", cmd_marginal_check}};
  for (auto& [name, fn] : handlers) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub, args);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return handlers.at(name)(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
