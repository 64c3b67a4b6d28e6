#pragma once

// Reference computations written directly from the definitions. They share no
// code with the library's closed forms or optimizers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double lp_norm(const std::vector<double>& mu, double p, const std::vector<double>& w,
                      const std::vector<double>& mod) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < mod.size(); ++i) m = std::max(m, w[i] * mod[i]);
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < mod.size(); ++i) s += mu[i] * w[i] * std::pow(mod[i], p);
  return std::pow(s, 1.0 / p);
}

// Lagrange conditions for max sum mu f log x subject to sum mu w x^p = 1 give
// w x^p proportional to f; the constant is fixed by the constraint.
inline double phi_lp(const std::vector<double>& mu, double p, const std::vector<double>& w,
                     const std::vector<double>& f) {
  double mass = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) mass += mu[i] * f[i];
  if (mass == 0.0) return 0.0;
  double value = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] <= 0.0) continue;
    // For p = inf the unit ball is the box x <= 1 / w.
    const double log_x = std::isinf(p) ? -std::log(w[i]) : (std::log(f[i] / (mass * w[i]))) / p;
    value += mu[i] * f[i] * log_x;
  }
  return value;
}

// Calderon interpolant of two weighted lp spaces: exponent and weight from
// the multiplier description ||x|| = ||om x||_{L^p}.
struct LpData {
  double p;
  std::vector<double> w;
};

inline LpData interpolate_lp(const LpData& a0, const LpData& a1, double t) {
  const double i0 = std::isinf(a0.p) ? 0.0 : 1.0 / a0.p;
  const double i1 = std::isinf(a1.p) ? 0.0 : 1.0 / a1.p;
  const double it = (1.0 - t) * i0 + t * i1;
  LpData out{it == 0.0 ? inf : 1.0 / it, std::vector<double>(a0.w.size())};
  for (std::size_t i = 0; i < out.w.size(); ++i) {
    const double om0 = std::isinf(a0.p) ? a0.w[i] : std::pow(a0.w[i], i0);
    const double om1 = std::isinf(a1.p) ? a1.w[i] : std::pow(a1.w[i], i1);
    const double om = std::pow(om0, 1.0 - t) * std::pow(om1, t);
    out.w[i] = std::isinf(out.p) ? om : std::pow(om, out.p);
  }
  return out;
}

// Hoelder dual of l^p(w) under the mu pairing.
inline LpData dual_lp(const LpData& a) {
  LpData out{0.0, std::vector<double>(a.w.size())};
  if (a.p == 1.0 || std::isinf(a.p)) {
    out.p = a.p == 1.0 ? inf : 1.0;
    for (std::size_t i = 0; i < a.w.size(); ++i) out.w[i] = 1.0 / a.w[i];
    return out;
  }
  out.p = a.p / (a.p - 1.0);
  for (std::size_t i = 0; i < a.w.size(); ++i) out.w[i] = std::pow(a.w[i], 1.0 - out.p);
  return out;
}

// O(n^2) count of the mass strictly above each modulus.
inline std::vector<cplx> rank_log(const std::vector<double>& mu, const std::vector<cplx>& x) {
  std::vector<cplx> out(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double above = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (std::abs(x[j]) > std::abs(x[i])) above += mu[j];
    }
    if (above > 0.0) out[i] = x[i] * std::log(above);
  }
  return out;
}

// O(N^2) Szego projection on the midpoint grid: keep frequencies 0..N/2-1.
inline std::vector<cplx> szego(const std::vector<cplx>& f) {
  const std::size_t n = f.size();
  std::vector<cplx> out(n, 0.0);
  auto theta = [&](std::size_t k) { return 2.0 * M_PI * (static_cast<double>(k) + 0.5) / static_cast<double>(n); };
  for (std::size_t m = 0; m < n / 2; ++m) {
    cplx c = 0.0;
    for (std::size_t k = 0; k < n; ++k) c += f[k] * std::polar(1.0, -static_cast<double>(m) * theta(k));
    c /= static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) out[k] += c * std::polar(1.0, static_cast<double>(m) * theta(k));
  }
  return out;
}

// Cramer's rule for alpha1 = theta1 alpha2 and alpha2 = (1 - theta2) alpha1 + theta2.
inline std::pair<double, double> wolff(double theta1, double theta2) {
  // [1, -theta1; -(1-theta2), 1] [a1; a2] = [0; theta2]
  const double det = 1.0 - theta1 * (1.0 - theta2);
  return {theta1 * theta2 / det, theta2 / det};
}

// Minimizes a convex function of one variable by ternary search.
inline double argmin_1d(const std::function<double(double)>& f, double lo, double hi, int iters = 300) {
  for (int k = 0; k < iters; ++k) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
