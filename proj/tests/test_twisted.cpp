#include <doctest.h>

#include <algorithm>

#include "kothe/sampling.hpp"
#include "kothe/twisted.hpp"

using namespace kothe;

TEST_SUITE("twisted-sum") {
  TEST_CASE("quasi-norm definition and the quasi-triangle bound") {
    auto rng = make_rng(71);
    const MeasureSpace space = sampling::random_measure(rng, 8);
    const KotheSpace l2 = KotheSpace::weighted_lp(space, 2.0);
    const Centralizer omega = Centralizer::log_modulus(l2);
    const MVec u = sampling::random_vector(rng, space), v = sampling::random_vector(rng, space);
    CHECK(twisted_quasinorm(omega, {u, v}) == doctest::Approx(l2.norm(u) + l2.norm(v - omega(u))));
    CHECK(twisted_quasinorm(omega, {u, omega(u)}) == doctest::Approx(l2.norm(u)));
    const cplx a(0.3, -2.0);
    CHECK(twisted_quasinorm(omega, a * TwistedElement{u, v}) ==
          doctest::Approx(std::abs(a) * twisted_quasinorm(omega, {u, v})).epsilon(1e-12));
    const auto q = quasi_triangle_constant(omega, 80, 3);
    CHECK(q.k_hat <= 1.0 + q.defect_max + 1e-12);
    CHECK(q.samples == 80);
    // A linear map twists trivially.
    const auto lin = quasi_triangle_constant(Centralizer::log_symbol(l2, sampling::random_weights(rng, 8)), 40, 3);
    CHECK(lin.k_hat <= 1.0 + 1e-12);
    CHECK(lin.defect_max <= 1e-12);
  }

  TEST_CASE("derived norm upper bound") {
    auto rng = make_rng(72);
    const MeasureSpace space = sampling::random_measure(rng, 6);
    const Couple c(KotheSpace::weighted_lp(space, 1.0, sampling::random_weights(rng, 6)),
                   KotheSpace::weighted_lp(space, kInf, sampling::random_weights(rng, 6)));
    const double t = 0.5;
    const MVec u = sampling::random_vector(rng, space);
    // (u, Omega u) is the pair of the optimal family itself.
    const MVec ou = canonical_omega(c, t, u);
    const auto exact = derived_norm_upper(c, t, {u, ou});
    CHECK(exact.value == doctest::Approx(calderon_norm(c, t, u).norm).epsilon(1e-9));
    CHECK(exact.correction <= 1e-9 * exact.value);
    // (0, v) only uses the conformal factor.
    const MVec v = sampling::random_vector(rng, space);
    const auto pure = derived_norm_upper(c, t, {MVec(space), v});
    CHECK(pure.kappa == doctest::Approx(2.0 / M_PI));
    CHECK(pure.value == doctest::Approx(pure.kappa * calderon_norm(c, t, v).norm).epsilon(1e-12));
    // Against the twisted quasi-norm the bound stays within fixed constants.
    const Centralizer omega = Centralizer::canonical(c, t);
    for (int k = 0; k < 20; ++k) {
      const TwistedElement e{sampling::random_vector(rng, space), sampling::random_vector(rng, space)};
      const double ratio = derived_norm_upper(c, t, e).value / twisted_quasinorm(omega, e);
      CHECK(ratio <= 1.0 + 1e-9);
      CHECK(ratio >= 2.0 / M_PI / 2.0);
    }
    CHECK_THROWS_AS(derived_norm_upper(c, 0.0, {u, v}), KotheError);
  }

  TEST_CASE("operators and commutators") {
    const MeasureSpace space = MeasureSpace::uniform(16);
    const LinearOperator op = LinearOperator::random_substochastic(space, 9);
    REQUIRE(op.norm_bound().has_value());
    for (double p : {1.0, 2.0, 5.0, kInf}) {
      CHECK(operator_norm_estimate(op, KotheSpace::weighted_lp(space, p), 40, 1) <= 1.0 + 1e-12);
    }
    auto rng = make_rng(73);
    const KotheSpace l2 = KotheSpace::weighted_lp(space, 2.0);
    const MVec b = sampling::random_vector(rng, space);
    const LinearOperator mult = LinearOperator::multiplier(b);
    const MVec x = sampling::random_vector(rng, space);
    CHECK((mult(x) - b.times(x)).sup_norm() <= 1e-15);
    CHECK(commutator_bound(mult, Centralizer::log_symbol(l2, sampling::random_weights(rng, 16)), 20, 1) <= 1e-12);
    CHECK(commutator_bound(LinearOperator::identity(space), Centralizer::rank_log(l2), 20, 1) == 0.0);

    // Bounded operators on the scale have bounded commutators, uniformly in n.
    std::vector<double> estimates;
    for (std::size_t n : {8, 32, 128}) {
      const MeasureSpace s = MeasureSpace::uniform(n);
      const Couple c(KotheSpace::weighted_lp(s, 1.0), KotheSpace::weighted_lp(s, kInf));
      estimates.push_back(commutator_bound(LinearOperator::random_substochastic(s, n), Centralizer::canonical(c, 0.5), 40, 2));
    }
    CHECK(estimates[2] <= 2.0 * estimates[0]);
    CHECK_THROWS_AS(LinearOperator::dense(space, Eigen::MatrixXcd::Zero(3, 3)), KotheError);
  }

  TEST_CASE("twisted quasi-norm vanishes only at the origin") {
    auto rng = make_rng(74);
    const MeasureSpace space = sampling::random_measure(rng, 6);
    const Centralizer omega = Centralizer::rank_log(KotheSpace::weighted_lp(space, 1.5));
    CHECK(twisted_quasinorm(omega, {MVec(space), MVec(space)}) == 0.0);
    for (int k = 0; k < 30; ++k) {
      const MVec u = sampling::random_vector(rng, space, 0.3);
      const MVec v = sampling::random_vector(rng, space, 0.3);
      if (u.sup_norm() == 0.0 && v.sup_norm() == 0.0) continue;
      CHECK(twisted_quasinorm(omega, {u, v}) > 0.0);
      CHECK((twisted_quasinorm(omega, {u, omega(u)}) > 0.0) == (u.sup_norm() > 0.0));
    }
  }

  TEST_CASE("property: operators act boundedly on the twisted sum") {
    // (Tu, Tv) - (Tu, Omega T u) = T(v - Omega u) + [T, Omega] u, so the
    // quasi-norm grows by at most max(||T||, ||T|| + C_T).
    const MeasureSpace space = MeasureSpace::uniform(12);
    const Couple c(KotheSpace::weighted_lp(space, 1.0), KotheSpace::weighted_lp(space, kInf));
    const Centralizer omega = Centralizer::canonical(c, 0.5);
    const LinearOperator op = LinearOperator::random_substochastic(space, 11);
    const double t_norm = *op.norm_bound();
    auto rng = make_rng(75);
    for (int k = 0; k < 40; ++k) {
      const MVec u = sampling::random_vector(rng, space), v = sampling::random_vector(rng, space);
      const double before = twisted_quasinorm(omega, {u, v});
      const double after = twisted_quasinorm(omega, {op(u), op(v)});
      const double cu = commutator_ratio(op, omega, u);
      CHECK(after <= (t_norm + cu) * before * (1.0 + 1e-9));
    }
  }

  TEST_CASE("commutator estimates stabilize in the dimension") {
    std::vector<double> estimates;
    for (std::size_t n : {8, 32, 128}) {
      const MeasureSpace s = MeasureSpace::uniform(n);
      const Couple c(KotheSpace::weighted_lp(s, 2.0), KotheSpace::weighted_lp(s, kInf));
      estimates.push_back(commutator_bound(LinearOperator::random_substochastic(s, 3), Centralizer::canonical(c, 0.5), 40, 7));
    }
    for (double e : estimates) CHECK(std::isfinite(e));
    const auto [lo, hi] = std::minmax_element(estimates.begin(), estimates.end());
    CHECK(*hi <= 1.5 * *lo);
  }
}
