#include "uhmc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uhmc {

void RegularityParams::validate() const {
  if (!(K > 0)) throw std::invalid_argument("K must be > 0");
  if (!(L >= K)) throw std::invalid_argument("L must be >= K");
  if (L_tilde < 0 || R < 0 || epsilon < 0 || L_H < 0 || L_H_tilde < 0)
    throw std::invalid_argument("regularity parameters must be nonnegative");
}

DerivedConstants derive_constants(const RegularityParams& params, double T) {
  params.validate();
  if (!(T > 0)) throw std::invalid_argument("T must be > 0");
  DerivedConstants out;
  out.R_tilde = 8.0 * params.R * std::sqrt((params.L + params.K) / params.K);
  out.gamma = out.R_tilde > 0 ? std::min(1.0 / T, 0.25 / out.R_tilde) : 1.0 / T;
  out.R_1 = 1.25 * (out.R_tilde + 2.0 * T);
  out.kappa = params.K - 3.0 * params.epsilon * params.L_tilde;
  out.kappa_positive = out.kappa > 0;
  out.c = params.K * T * T / 156.0 * std::exp(-1.25 * out.R_tilde / T);
  out.M = std::exp(1.25 * (out.R_tilde / T + 2.0));
  out.C_hat = params.R * params.R * (params.L + params.K);
  return out;
}

const Condition* ConditionReport::find(const std::string& name) const {
  for (const auto& c : items)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {
void add(ConditionReport& rep, std::string name, double lhs, double rhs, bool strict) {
  Condition c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.strict = strict;
  c.pass = strict ? (lhs < rhs) : (lhs <= rhs);
  rep.all_pass = rep.all_pass && c.pass;
  rep.items.push_back(std::move(c));
}
}  // namespace

ConditionReport check_conditions(const RegularityParams& p, double T, double h1) {
  p.validate();
  if (!(T > 0)) throw std::invalid_argument("T must be > 0");
  if (h1 < 0) throw std::invalid_argument("h1 must be >= 0");
  const DerivedConstants dc = derive_constants(p, T);
  const double inf = std::numeric_limits<double>::infinity();
  ConditionReport rep;

  const double third =
      dc.R_tilde > 0 ? 3.0 / (256.0 * 5.0 * p.L * dc.R_tilde * dc.R_tilde) : inf;
  add(rep, "cond_T", p.L * (T + h1) * (T + h1),
      0.6 * std::min({0.25, 0.3 * p.K / p.L, third}), false);
  add(rep, "cond_h_T", h1, p.K * T / (525.0 * p.L + 235.0 * p.K), false);
  const double eps_rhs =
      std::min(p.K / 6.0, 0.5 * std::pow(p.K * (dc.R_tilde + T) / (36.0 * 149.0), 2) *
                              std::exp(-5.0 * dc.R_tilde / T));
  add(rep, "cond_epsilon", p.epsilon * p.L_tilde, eps_rhs, true);

  // a-priori conditions with t = T
  const double eff = p.L + 4.0 * p.epsilon * p.L_tilde;
  const double tt = T * T + T * h1;
  add(rep, "basic_t", eff * tt, 1.0, false);
  add(rep, "conv_t", eff * tt, std::min(eff > 0 ? dc.kappa / eff : inf, 0.25), false);
  add(rep, "conv_h", h1, p.K * T / (525.0 * p.L + 235.0 * p.K), false);
  return rep;
}

double f_eval(double r, double T, double R_1) {
  if (r < 0) throw std::invalid_argument("f_eval requires r >= 0");
  if (r <= R_1) return T * (1.0 - std::exp(-r / T));
  const double e1 = std::exp(-R_1 / T);
  return T * (1.0 - e1) + (r - R_1) * e1;
}

double rho_distance(const Matrix& x, const Matrix& y, double T, double R_1) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("rho_distance: shape mismatch");
  double s = 0.0;
  for (int i = 0; i < x.cols(); ++i) s += f_eval((x.col(i) - y.col(i)).norm(), T, R_1);
  return s;
}

double ell1_distance(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("ell1_distance: shape mismatch");
  double s = 0.0;
  for (int i = 0; i < x.cols(); ++i) s += (x.col(i) - y.col(i)).norm();
  return s;
}

double ell1_mean_distance(const Matrix& x, const Matrix& y) {
  return ell1_distance(x, y) / static_cast<double>(x.cols());
}

long step_bound(double c, double R_tilde, double T, double Delta0, double eps_tilde) {
  if (!(c > 0)) throw std::invalid_argument("step_bound requires c > 0");
  if (!(T > 0) || !(Delta0 > 0) || !(eps_tilde > 0) || R_tilde < 0)
    throw std::invalid_argument("step_bound arguments must be positive");
  const double logterm = std::max(0.0, std::log(Delta0 / eps_tilde));
  const double v = (2.5 + 1.25 * R_tilde / T + logterm) / c;
  // guard against round-up at exact integer boundaries
  return static_cast<long>(std::ceil(v * (1.0 - 1e-12)));
}

}  // namespace uhmc
