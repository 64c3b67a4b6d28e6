#include <doctest.h>

#include "kothe/optimize.hpp"
#include "kothe/common.hpp"

using namespace kothe;

TEST_SUITE("optimize") {
  TEST_CASE("BFGS on a convex quadratic") {
    Eigen::MatrixXd q(3, 3);
    q << 4, 1, 0, 1, 3, 1, 0, 1, 2;
    const Eigen::VectorXd b = Eigen::Vector3d(1.0, -2.0, 0.5);
    auto f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      g = q * x - b;
      return 0.5 * x.dot(q * x) - b.dot(x);
    };
    const auto r = opt::minimize_bfgs(f, Eigen::VectorXd::Zero(3));
    CHECK(r.converged());
    const Eigen::VectorXd exact = q.ldlt().solve(b);
    CHECK((r.x - exact).norm() < 1e-9);
  }

  TEST_CASE("BFGS on log-sum-exp minus a linear term") {
    // Minimizer: softmax(x) = q.
    const Eigen::VectorXd q = Eigen::Vector4d(0.1, 0.2, 0.3, 0.4);
    auto f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      const double m = x.maxCoeff();
      const Eigen::VectorXd e = (x.array() - m).exp();
      const double s = e.sum();
      g = e / s - q;
      return m + std::log(s) - q.dot(x);
    };
    const auto r = opt::minimize_bfgs(f, Eigen::VectorXd::Zero(4));
    const Eigen::VectorXd e = (r.x.array() - r.x.maxCoeff()).exp();
    CHECK(((e / e.sum()) - q).norm() < 1e-9);
  }

  TEST_CASE("simplex maximization of an entropy") {
    // max sum mu f log(c / f) over sum mu f = 1 has f proportional to c.
    const std::vector<double> mu{1.0, 2.0, 0.5};
    const std::vector<double> c{1.0, 3.0, 2.0};
    auto obj = [&](std::span<const double> f, std::span<double> g) {
      double v = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double fi = std::max(f[i], 1e-300);
        v += mu[i] * fi * std::log(c[i] / fi);
        g[i] = mu[i] * (std::log(c[i] / fi) - 1.0);
      }
      return v;
    };
    const auto r = opt::maximize_on_simplex(obj, mu, {1.0 / 3.5, 1.0 / 3.5, 1.0 / 3.5});
    CHECK(r.converged);
    const double z = 1.0 * 1.0 + 2.0 * 3.0 + 0.5 * 2.0;
    for (std::size_t i = 0; i < 3; ++i) CHECK(r.density[i] == doctest::Approx(c[i] / z).epsilon(1e-7));
  }

  TEST_CASE("golden section") {
    const double x = opt::golden_section_minimize([](double t) { return (t - 0.3) * (t - 0.3); }, -1.0, 2.0, 1e-12);
    CHECK(x == doctest::Approx(0.3).epsilon(1e-8));
  }

  TEST_CASE("seeded streams are reproducible and distinct") {
    auto a = make_rng(5, 1), b = make_rng(5, 1), c = make_rng(5, 2);
    const auto va = a(), vb = b(), vc = c();
    CHECK(va == vb);
    CHECK(va != vc);
  }
}
