#pragma once

#include <cmath>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "kothe/measure.hpp"

// Seeded generators shared by the samplers in the library and the tests.
namespace kothe::sampling {

// Nonnegative vector with log-normal entries; about `density` of them nonzero.
inline std::vector<double> random_density(std::mt19937_64& rng, std::size_t n, double density = 1.0,
                                          double spread = 1.0) {
  std::normal_distribution<double> normal(0.0, spread);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> f(n, 0.0);
  bool any = false;
  for (auto& v : f) {
    if (unif(rng) < density) {
      v = std::exp(normal(rng));
      any = true;
    }
  }
  if (!any && n > 0) f[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 1.0;
  return f;
}

// Pairs (f, g) drawn from four regimes chosen by `index mod 4`: dense,
// sparse, disjoint supports, and g a small perturbation of a multiple of f.
inline std::pair<std::vector<double>, std::vector<double>> random_pair(std::mt19937_64& rng, std::size_t n,
                                                                       std::span<const double>, int index) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (index % 4) {
    case 0:
      return {random_density(rng, n), random_density(rng, n)};
    case 1:
      return {random_density(rng, n, 0.3, 2.0), random_density(rng, n, 0.3, 2.0)};
    case 2: {
      auto f = random_density(rng, n, 1.0, 1.5);
      std::vector<double> g(n, 0.0);
      bool moved = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (unif(rng) < 0.5) {
          g[i] = f[i] * std::exp(unif(rng) * 4.0 - 2.0);
          f[i] = 0.0;
          moved = true;
        }
      }
      if (!moved && n > 1) std::swap(f[0], g[0]);
      return {f, g};
    }
    default: {
      auto f = random_density(rng, n);
      const double scale = std::exp(unif(rng) * 6.0 - 3.0);
      std::normal_distribution<double> noise(0.0, 0.05);
      std::vector<double> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = scale * f[i] * std::exp(noise(rng));
      return {f, g};
    }
  }
}

// Complex vector with log-normal moduli, uniform phases and roughly
// `density` of entries nonzero.
inline MVec random_vector(std::mt19937_64& rng, const MeasureSpace& space, double density = 1.0,
                          bool real = false) {
  const auto mod = random_density(rng, space.size(), density);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::bernoulli_distribution sign(0.5);
  std::vector<cplx> values(mod.size());
  for (std::size_t i = 0; i < mod.size(); ++i) {
    values[i] = real ? (sign(rng) ? mod[i] : -mod[i]) : std::polar(mod[i], phase(rng));
  }
  return MVec(space, std::move(values));
}

// Strictly positive masses, log-uniform in [e^-1, e].
inline MeasureSpace random_measure(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> mu(n);
  for (auto& m : mu) m = std::exp(unif(rng));
  return MeasureSpace(std::move(mu));
}

// Positive weights, log-uniform in [e^-s, e^s].
inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n, double s = 1.0) {
  std::uniform_real_distribution<double> unif(-s, s);
  std::vector<double> w(n);
  for (auto& v : w) v = std::exp(unif(rng));
  return w;
}

}  // namespace kothe::sampling
