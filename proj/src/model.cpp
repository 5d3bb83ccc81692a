#include "uhmc/model.hpp"

#include <cmath>
#include <sstream>

namespace uhmc {

namespace {

void check_dims(const MeanFieldModel& model, const Matrix& x) {
  if (x.rows() != model.d || x.cols() != model.n) {
    std::ostringstream os;
    os << "state shape " << x.rows() << "x" << x.cols() << " does not match model d=" << model.d
       << " n=" << model.n;
    throw ModelError(os.str());
  }
}

}  // namespace

MeanFieldModel MeanFieldModel::make(ConfinementSpec v, InteractionSpec w, double epsilon, int n,
                                    int d) {
  if (n < 1) throw ModelError("particle count n must be >= 1");
  if (d < 1) throw ModelError("dimension d must be >= 1");
  if (auto* q = std::get_if<QuadraticConfinement>(&v)) {
    if (!(q->k > 0)) throw ModelError("quadratic confinement requires stiffness k > 0");
  } else if (auto* m = std::get_if<GaussianMixtureConfinement>(&v)) {
    if (m->means.cols() < 1) throw ModelError("gaussian mixture requires at least one mean");
    if (m->means.rows() != d) throw ModelError("gaussian mixture means must have dimension d");
  } else if (std::holds_alternative<RosenbrockConfinement>(v)) {
    if (d != 2) throw ModelError("rosenbrock confinement requires d = 2");
  }
  if (epsilon < 0) {
    // Fold the sign of a negative strength into the interaction.
    epsilon = -epsilon;
    if (auto* qi = std::get_if<QuadraticInteraction>(&w)) qi->sign = -qi->sign;
  }
  return MeanFieldModel{std::move(v), std::move(w), epsilon, n, d};
}

double confinement_energy(const ConfinementSpec& v, const Eigen::Ref<const Vector>& p) {
  return std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, QuadraticConfinement>) {
          return 0.5 * spec.k * p.squaredNorm();
        } else if constexpr (std::is_same_v<T, GaussianMixtureConfinement>) {
          const int m = static_cast<int>(spec.means.cols());
          double amax = -std::numeric_limits<double>::infinity();
          for (int k = 0; k < m; ++k) {
            const double a = -0.5 * (p - spec.means.col(k)).squaredNorm();
            if (a > amax) amax = a;
          }
          double s = 0.0;
          for (int k = 0; k < m; ++k) {
            s += std::exp(-0.5 * (p - spec.means.col(k)).squaredNorm() - amax);
          }
          return -(amax + std::log(s));
        } else {
          const double x1 = p[0], x2 = p[1];
          const double u = spec.a - x1;
          const double w = x2 - x1 * x1;
          return u * u + spec.b * w * w;
        }
      },
      v);
}

Vector confinement_grad(const ConfinementSpec& v, const Eigen::Ref<const Vector>& p) {
  return std::visit(
      [&](const auto& spec) -> Vector {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, QuadraticConfinement>) {
          return spec.k * p;
        } else if constexpr (std::is_same_v<T, GaussianMixtureConfinement>) {
          const int m = static_cast<int>(spec.means.cols());
          double amax = -std::numeric_limits<double>::infinity();
          for (int k = 0; k < m; ++k) {
            const double a = -0.5 * (p - spec.means.col(k)).squaredNorm();
            if (a > amax) amax = a;
          }
          double wsum = 0.0;
          Vector g = Vector::Zero(p.size());
          for (int k = 0; k < m; ++k) {
            const double w = std::exp(-0.5 * (p - spec.means.col(k)).squaredNorm() - amax);
            wsum += w;
            g += w * (p - spec.means.col(k));
          }
          return g / wsum;
        } else {
          const double x1 = p[0], x2 = p[1];
          const double w = x2 - x1 * x1;
          Vector g(2);
          g[0] = -2.0 * (spec.a - x1) - 4.0 * spec.b * x1 * w;
          g[1] = 2.0 * spec.b * w;
          return g;
        }
      },
      v);
}

double potential_energy(const MeanFieldModel& model, const Matrix& x) {
  check_dims(model, x);
  double e = 0.0;
  for (int i = 0; i < model.n; ++i) e += confinement_energy(model.confinement, x.col(i));
  if (model.epsilon != 0.0) {
    if (const auto* qi = std::get_if<QuadraticInteraction>(&model.interaction)) {
      const double pref = model.epsilon / model.n;
      double s = 0.0;
      for (int i = 0; i < model.n; ++i) {
        for (int j = 0; j < model.n; ++j) {
          if (j == i) continue;
          s += 0.5 * qi->sign * (x.col(i) - x.col(j)).squaredNorm();
        }
      }
      e += pref * s;
    }
  }
  return e;
}

Vector grad_particle(const MeanFieldModel& model, const Matrix& x, int i) {
  check_dims(model, x);
  if (i < 0 || i >= model.n) throw ModelError("particle index out of range");
  Vector g = confinement_grad(model.confinement, x.col(i));
  if (model.epsilon != 0.0) {
    if (const auto* qi = std::get_if<QuadraticInteraction>(&model.interaction)) {
      // gradW(u) - gradW(-u) = 2 sign u for the quadratic pair potential;
      // j ascending for a deterministic summation order.
      const double pref = model.epsilon / model.n * 2.0 * qi->sign;
      Vector acc = Vector::Zero(model.d);
      for (int j = 0; j < model.n; ++j) {
        if (j == i) continue;
        acc += x.col(i) - x.col(j);
      }
      g += pref * acc;
    }
  }
  return g;
}

void grad_full_into(const MeanFieldModel& model, const Matrix& x, Matrix& out) {
  check_dims(model, x);
  out.resize(model.d, model.n);
  if (const auto* q = std::get_if<QuadraticConfinement>(&model.confinement)) {
    out = q->k * x;  // columnwise identical to confinement_grad
  } else {
    for (int i = 0; i < model.n; ++i) out.col(i) = confinement_grad(model.confinement, x.col(i));
  }
  if (model.epsilon != 0.0) {
    if (const auto* qi = std::get_if<QuadraticInteraction>(&model.interaction)) {
      const double pref = model.epsilon / model.n * 2.0 * qi->sign;
      Vector acc(model.d);
      for (int i = 0; i < model.n; ++i) {
        acc.setZero();
        for (int j = 0; j < model.n; ++j) {
          if (j == i) continue;
          acc += x.col(i) - x.col(j);
        }
        out.col(i) += pref * acc;
      }
    }
  }
}

Matrix grad_full(const MeanFieldModel& model, const Matrix& x) {
  Matrix out;
  grad_full_into(model, x, out);
  return out;
}

}  // namespace uhmc
