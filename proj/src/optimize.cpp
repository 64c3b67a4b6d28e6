#include "kothe/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kothe::opt {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;
constexpr int kMaxLineSearchSteps = 80;

struct LineSearchOutcome {
  bool ok = false;
  double step = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
  double value = 0.0;
};

LineSearchOutcome weak_wolfe(const Objective& objective, const Eigen::VectorXd& x, double fx,
                             const Eigen::VectorXd& gx, const Eigen::VectorXd& dir) {
  const double slope = gx.dot(dir);
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double step = 1.0;
  LineSearchOutcome best;
  best.value = fx;
  Eigen::VectorXd grad(x.size());
  for (int k = 0; k < kMaxLineSearchSteps; ++k) {
    Eigen::VectorXd trial = x + step * dir;
    const double ft = objective(trial, grad);
    if (std::isfinite(ft) && ft < best.value) {
      best.value = ft;
      best.step = step;
      best.x = trial;
      best.grad = grad;
    }
    if (!std::isfinite(ft) || ft > fx + kArmijo * step * slope) {
      hi = step;
    } else if (grad.dot(dir) < kCurvature * slope) {
      lo = step;
    } else {
      best.ok = true;
      best.step = step;
      best.x = std::move(trial);
      best.grad = grad;
      best.value = ft;
      return best;
    }
    step = std::isinf(hi) ? 2.0 * step : 0.5 * (lo + hi);
    if (hi - lo < 1e-16 * std::max(1.0, hi)) break;
  }
  return best;
}

}  // namespace

MinimizeResult minimize_bfgs(const Objective& objective, Eigen::VectorXd x0,
                             const MinimizeOptions& options) {
  const Eigen::Index n = x0.size();
  MinimizeResult result;
  result.x = std::move(x0);
  Eigen::VectorXd grad(n);
  result.value = objective(result.x, grad);
  if (n == 0) {
    result.status = Status::GradientTolerance;
    return result;
  }
  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  int stalled = 0;

  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it;
    if (grad.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      result.status = Status::GradientTolerance;
      return result;
    }
    Eigen::VectorXd dir = -inv_hessian * grad;
    if (!(grad.dot(dir) < 0.0)) {
      inv_hessian.setIdentity();
      dir = -grad;
    }
    auto ls = weak_wolfe(objective, result.x, result.value, grad, dir);
    if (ls.step == 0.0 && !inv_hessian.isIdentity()) {
      // Retry once along the raw gradient before giving up.
      inv_hessian.setIdentity();
      scaled = false;
      dir = -grad;
      ls = weak_wolfe(objective, result.x, result.value, grad, dir);
    }
    if (ls.step == 0.0) {
      result.status = Status::LineSearchFailure;
      return result;
    }
    const Eigen::VectorXd s = ls.x - result.x;
    const Eigen::VectorXd y = ls.grad - grad;
    const double decrease = result.value - ls.value;
    result.x = ls.x;
    grad = ls.grad;
    result.value = ls.value;

    if (decrease <= options.value_tolerance * (1.0 + std::abs(result.value))) {
      if (++stalled >= 5) {
        result.status = Status::NoProgress;
        result.iterations = it + 1;
        return result;
      }
    } else {
      stalled = 0;
    }
    if (!ls.ok) continue;

    const double ys = y.dot(s);
    if (ys > 1e-300 && ys > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        inv_hessian *= ys / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / ys;
      const Eigen::VectorXd hy = inv_hessian * y;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      inv_hessian += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
                     rho * (hy * s.transpose() + s * hy.transpose());
    }
  }
  result.iterations = options.max_iterations;
  result.status = Status::IterationLimit;
  return result;
}

SimplexResult maximize_on_simplex(const SimplexObjective& objective, std::span<const double> mu,
                                  std::vector<double> initial_density,
                                  const SimplexOptions& options) {
  const std::size_t n = mu.size();
  SimplexResult result;
  if (n == 0) return result;

  // q = softmax(theta), f_i = q_i / mu_i. The theta-gradient of the objective
  // is q_i (g_i / mu_i - g_bar), i.e. the KKT residual componentwise.
  std::vector<double> f(n), grad(n);
  auto density = [&](const Eigen::VectorXd& theta) {
    const double top = theta.maxCoeff();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += std::exp(theta[static_cast<Eigen::Index>(i)] - top);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = std::exp(theta[static_cast<Eigen::Index>(i)] - top) / total / mu[i];
    }
  };
  Objective negated = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& g) {
    density(theta);
    const double value = objective(f, grad);
    double gbar = 0.0;
    for (std::size_t i = 0; i < n; ++i) gbar += f[i] * grad[i];
    g.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) g[static_cast<Eigen::Index>(i)] = -mu[i] * f[i] * (grad[i] / mu[i] - gbar);
    return -value;
  };

  Eigen::VectorXd theta(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    theta[static_cast<Eigen::Index>(i)] = std::log(std::max(mu[i] * initial_density[i], 1e-300));
  }
  MinimizeOptions mopt;
  mopt.gradient_tolerance = options.tolerance / static_cast<double>(n);
  mopt.max_iterations = options.max_iterations;
  const auto res = minimize_bfgs(negated, theta, mopt);
  density(res.x);
  result.density = f;
  result.value = -res.value;
  result.iterations = res.iterations;
  result.converged = res.converged();
  return result;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance, int max_iterations) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iterations && (b - a) > tolerance * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace kothe::opt
