#pragma once

// Test-only reference solvers, kept independent of the library's
// coordinate-descent path: a long-run subgradient method for piecewise
// linear + quadratic objectives, a golden-section line search, and
// central finite differences.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

// f(x) = hinge_coeff * sum_i max(0, a_i'x + b_i)
//        + reg_l2 * ||x||^2 + (prox_weight/2) * ||x - prox_center||^2
struct HingeQuadraticObjective {
  Eigen::MatrixXd rows;     // a_i stacked as rows
  Eigen::VectorXd offsets;  // b_i
  double hinge_coeff = 1.0;
  double reg_l2 = 0.0;
  double prox_weight = 0.0;
  Eigen::VectorXd prox_center;

  double value(const Eigen::VectorXd& x) const {
    double sum = 0.0;
    const Eigen::VectorXd margins = rows * x + offsets;
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
      sum += std::max(0.0, margins[i]);
    }
    double out = hinge_coeff * sum + reg_l2 * x.squaredNorm();
    if (prox_weight > 0.0) {
      out += 0.5 * prox_weight * (x - prox_center).squaredNorm();
    }
    return out;
  }

  Eigen::VectorXd subgradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g = 2.0 * reg_l2 * x;
    if (prox_weight > 0.0) g += prox_weight * (x - prox_center);
    const Eigen::VectorXd margins = rows * x + offsets;
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
      if (margins[i] > 0.0) g += hinge_coeff * rows.row(i).transpose();
    }
    return g;
  }

  // Strong-convexity modulus of the quadratic part.
  double modulus() const { return 2.0 * reg_l2 + prox_weight; }
};

struct SubgradientResult {
  Eigen::VectorXd best_x;
  double best_value = 0.0;
};

// Plain subgradient descent with the strongly-convex step schedule
// 2 / (mu * (k + k0)), tracking the best iterate seen. Slow but
// structurally unrelated to dual coordinate descent.
inline SubgradientResult subgradient_minimize(
    const HingeQuadraticObjective& objective, Eigen::VectorXd x,
    long steps = 1000000, long warmup = 1000) {
  const double mu = objective.modulus();
  SubgradientResult result{x, objective.value(x)};
  for (long k = 1; k <= steps; ++k) {
    const Eigen::VectorXd g = objective.subgradient(x);
    const double eta = 2.0 / (mu * static_cast<double>(k + warmup));
    x -= eta * g;
    const double value = objective.value(x);
    if (value < result.best_value) {
      result.best_value = value;
      result.best_x = x;
    }
  }
  return result;
}

// Golden-section search for a scalar convex function on [lo, hi].
inline double golden_section_minimize(const std::function<double(double)>& f,
                                      double lo, double hi,
                                      double interval_tolerance = 1e-12) {
  const double inv_phi = 0.6180339887498948482;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > interval_tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Central finite-difference gradient.
inline Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double step = 1e-6) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = f(probe);
    probe[i] = x[i] - step;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

}  // namespace oracles
