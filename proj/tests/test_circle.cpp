#include <doctest.h>

#include "kothe/centralizer.hpp"
#include "kothe/circle.hpp"
#include "kothe/sampling.hpp"
#include "oracles.hpp"

using namespace kothe;
using namespace kothe::circle;

namespace {

cplx inner(const MVec& f, const MVec& g) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f.space().mass(i) * f[i] * std::conj(g[i]);
  return s;
}

}  // namespace

TEST_SUITE("circle-lab") {
  TEST_CASE("Szego projection agrees with the direct DFT oracle") {
    for (std::size_t n : {2, 8, 16, 64}) {
      const CircleGrid grid(n);
      auto rng = make_rng(81, n);
      const MVec f = sampling::random_vector(rng, grid.space());
      const MVec pf = SzegoProjection(grid)(f);
      const auto expected = oracle::szego(f.values());
      for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(pf[k] - expected[k]) <= 1e-12);
    }
  }

  TEST_CASE("property: projection is idempotent and self-adjoint") {
    for (int k = 0; k < 20; ++k) {
      const CircleGrid grid(std::size_t{4} << (k % 6));
      auto rng = make_rng(82, k);
      const SzegoProjection p(grid);
      const MVec f = sampling::random_vector(rng, grid.space()), g = sampling::random_vector(rng, grid.space());
      CHECK((p(p(f)) - p(f)).sup_norm() <= 1e-12 * (1.0 + f.sup_norm()));
      CHECK(std::abs(inner(p(f), g) - inner(f, p(g))) <= 1e-11 * (1.0 + lp_norm(f, 2.0) * lp_norm(g, 2.0)));
      CHECK(lp_norm(p(f), 2.0) <= lp_norm(f, 2.0) * (1.0 + 1e-12));
    }
  }

  TEST_CASE("Fourier coefficients of a trigonometric monomial") {
    const CircleGrid grid(32);
    for (int m : {0, 1, 5, -3, 15, -16}) {
      MVec f(grid.space());
      for (std::size_t k = 0; k < 32; ++k) f[k] = std::pow(grid.node(k), m);
      const auto c = fourier_coefficients(f);
      const std::size_t slot = m >= 0 ? static_cast<std::size_t>(m) : 32 - static_cast<std::size_t>(-m);
      for (std::size_t j = 0; j < 32; ++j) CHECK(std::abs(c[j] - (j == slot ? 1.0 : 0.0)) <= 1e-12);
      const MVec back = from_fourier_coefficients(grid, c);
      CHECK((back - f).sup_norm() <= 1e-12);
    }
  }

  TEST_CASE("random trigonometric polynomials") {
    const CircleGrid grid(64);
    for (int k = 0; k < 20; ++k) {
      const MVec f = random_trig_poly(grid, 3, k);
      CHECK(lp_norm(f, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
      const auto c = fourier_coefficients(f);
      for (std::size_t m = 17; m < 64 - 16; ++m) CHECK(std::abs(c[m]) <= 1e-12);
      const MVec g = random_trig_poly(grid, 3, k);
      CHECK((f - g).sup_norm() == 0.0);
    }
  }

  TEST_CASE("the three maps") {
    const CircleGrid grid(16);
    const MVec f = random_trig_poly(grid, 4, 0);
    const MVec o1 = omega1(f, grid);
    for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(o1[k] - f[k] * std::log(1.0 - grid.node(k))) <= 1e-14);
    // Omega2 and Omega3 are homogeneous; Omega1 is linear.
    const cplx a(2.0, -1.0);
    CHECK((omega2(a * f, grid) - a * omega2(f, grid)).sup_norm() <= 1e-12);
    CHECK((omega3(a * f, grid) - a * omega3(f, grid)).sup_norm() <= 1e-12);
    const auto expected = oracle::rank_log({grid.space().masses().begin(), grid.space().masses().end()}, f.values());
    const MVec o3 = omega3(f, grid);
    for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(o3[k] - expected[k]) <= 1e-13);
    CHECK_THROWS_AS(apply_omega(4, f, grid), KotheError);
    CHECK_THROWS_AS(CircleGrid(12), KotheError);
    CHECK_THROWS_AS(omega2(MVec(grid.space()), grid), KotheError);
  }

  TEST_CASE("commutator experiment rows are reproducible") {
    const auto a = commutator_experiment(2, {64, 128}, 5, 9);
    const auto b = commutator_experiment(2, {64, 128}, 5, 9);
    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].ratio == b[i].ratio);
      CHECK(a[i].max_ratio >= a[i].ratio);
    }
    CHECK(a[4].max_ratio == std::max({a[0].ratio, a[1].ratio, a[2].ratio, a[3].ratio, a[4].ratio}));
  }

  TEST_CASE("adversarial spike ratio is |log|1 - tau_0||") {
    for (std::size_t n : {256, 1024, 8192}) {
      const CircleGrid grid(n);
      CHECK(adversarial_raw_ratio(n) == doctest::Approx(std::abs(std::log(1.0 - grid.node(0)))).epsilon(1e-12));
    }
    CHECK(adversarial_raw_ratio(8192) > adversarial_raw_ratio(256));
  }
}
