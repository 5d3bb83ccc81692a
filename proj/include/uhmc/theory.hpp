#pragma once
#include <string>
#include <vector>

#include "uhmc/types.hpp"

namespace uhmc {

// Regularity parameters of the mean-field model. These are user-supplied
// inputs, never estimated from a potential.
struct RegularityParams {
  double K = 1.0;        // strong-convexity constant outside the ball, > 0
  double L = 1.0;        // Lipschitz bound on grad V, >= K
  double L_tilde = 0.0;  // Lipschitz bound on grad W, >= 0
  double R = 0.0;        // radius of the non-convexity ball, >= 0
  double epsilon = 0.0;  // interaction strength, >= 0
  double L_H = 0.0;      // optional third-derivative bound for V
  double L_H_tilde = 0.0;

  void validate() const;
};

// All constants are dimension-free: functions of (K, L, L_tilde, R, eps, T) only.
struct DerivedConstants {
  double R_tilde = 0.0;  // 8 R sqrt((L+K)/K)
  double gamma = 0.0;    // min(1/T, 1/(4 R_tilde)); R_tilde = 0 gives 1/T
  double R_1 = 0.0;      // (5/4)(R_tilde + 2T)
  double kappa = 0.0;    // K - 3 eps L_tilde
  double c = 0.0;        // (1/156) K T^2 exp(-5 R_tilde / (4T))
  double M = 0.0;        // exp((5/4)(R_tilde/T + 2))
  double C_hat = 0.0;    // R^2 (L + K)
  bool kappa_positive = true;  // false flags that the contraction theory is inapplicable
};

DerivedConstants derive_constants(const RegularityParams& params, double T);

struct Condition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool strict = false;  // pass requires lhs < rhs instead of lhs <= rhs
  bool pass = false;
};

struct ConditionReport {
  std::vector<Condition> items;
  bool all_pass = true;
  const Condition* find(const std::string& name) const;
};

// Evaluates every explicit parameter condition of the contraction theory with
// t = T: cond_T, cond_h_T, cond_epsilon plus the a-priori conditions basic_t,
// conv_t, conv_h.
ConditionReport check_conditions(const RegularityParams& params, double T, double h1);

// Concave distance profile: f(r) = integral_0^r exp(-min(R_1, s)/T) ds,
// in closed form.
double f_eval(double r, double T, double R_1);

// rho(x, y) = sum_i f(|x^i - y^i|)
double rho_distance(const Matrix& x, const Matrix& y, double T, double R_1);

// ell1(x, y) = sum_i |x^i - y^i| with the Euclidean norm per particle block.
double ell1_distance(const Matrix& x, const Matrix& y);
double ell1_mean_distance(const Matrix& x, const Matrix& y);

// Step count guaranteeing Delta(m) <= eps_tilde:
// ceil((1/c)(5/2 + 5 R_tilde/(4T) + log+(Delta0/eps_tilde))).
long step_bound(double c, double R_tilde, double T, double Delta0, double eps_tilde);

}  // namespace uhmc
