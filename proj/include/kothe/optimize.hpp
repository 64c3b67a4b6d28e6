#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kothe::opt {

// Objective returning f(x) and writing a (sub)gradient into `grad`.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

enum class Status {
  GradientTolerance,
  NoProgress,
  LineSearchFailure,
  IterationLimit,
};

struct MinimizeOptions {
  double gradient_tolerance = 1e-11;
  double value_tolerance = 1e-15;
  int max_iterations = 100000;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  Status status = Status::IterationLimit;
  bool converged() const { return status != Status::IterationLimit; }
};

// BFGS with a weak Wolfe bracketing line search. On smooth convex objectives
// this converges superlinearly; on nonsmooth convex objectives (max of
// norms, sup norms) it still drives the value down and stops at a kink with
// NoProgress or LineSearchFailure.
MinimizeResult minimize_bfgs(const Objective& objective, Eigen::VectorXd x0,
                             const MinimizeOptions& options = {});

// Objective on densities f >= 0 with sum_i mu_i f_i = 1. Writes the partial
// derivatives d/df_i into `grad`.
using SimplexObjective = std::function<double(std::span<const double> f, std::span<double> grad)>;

struct SimplexOptions {
  double tolerance = 1e-10;
  int max_iterations = 100000;
};

struct SimplexResult {
  std::vector<double> density;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Maximizes a concave objective over the mu-simplex. Runs quasi-Newton on
// softmax logits q = mu f; the logit gradient is q_i (g_i - g_bar) with
// g_i = grad_i / mu_i, so the stopping test is the simplex KKT residual.
SimplexResult maximize_on_simplex(const SimplexObjective& objective, std::span<const double> mu,
                                  std::vector<double> initial_density,
                                  const SimplexOptions& options = {});

// Minimizes a convex function of one variable on [lo, hi] by golden section.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance = 1e-10, int max_iterations = 200);

}  // namespace kothe::opt
