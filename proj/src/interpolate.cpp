#include "kothe/interpolate.hpp"

#include <algorithm>
#include <cmath>

#include "kothe/optimize.hpp"

namespace kothe {

namespace {

void check_parameter(double t, const char* where) {
  if (!(t >= 0.0 && t <= 1.0)) fail_precondition(std::string(where) + ": t must lie in [0, 1]");
}

std::vector<std::size_t> support_of(std::span<const double> mod) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < mod.size(); ++i) {
    if (mod[i] > 0.0) s.push_back(i);
  }
  return s;
}

CalderonResult blank_result(const MVec& x, double t) {
  const std::vector<double> zeros(x.size(), 0.0);
  return CalderonResult{0.0, Factorization{x, t, zeros, zeros, zeros}};
}

// Endpoint-only parameters: the trivial factorization u = v = |x|.
CalderonResult endpoint_result(const Couple& c, double t, const MVec& x) {
  const auto mod = x.modulus();
  CalderonResult r{0.0, Factorization{x, t, mod, mod, std::vector<double>(mod.size(), 0.0)}};
  r.endpoint0 = c.a0().norm_of_modulus(mod);
  r.endpoint1 = c.a1().norm_of_modulus(mod);
  r.norm = t == 0.0 ? r.endpoint0 : r.endpoint1;
  return r;
}

CalderonResult closed_form_lp(const LpParams& lp0, const LpParams& lp1, const Couple& c, double t, const MVec& x) {
  const auto mod = x.modulus();
  const std::size_t n = mod.size();
  const double i0 = lp0.reciprocal_exponent();
  const double i1 = lp1.reciprocal_exponent();
  const double it = (1.0 - t) * i0 + t * i1;
  const auto om0 = lp0.multiplier();
  const auto om1 = lp1.multiplier();
  std::vector<double> omt(n);
  for (std::size_t i = 0; i < n; ++i) omt[i] = std::pow(om0[i], 1.0 - t) * std::pow(om1[i], t);
  const double pt = it == 0.0 ? kInf : 1.0 / it;
  std::vector<double> ones(n, 1.0);
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = omt[i] * mod[i];
  const double nrm = lp_norm_of_modulus(scaled, c.space().masses(), pt, ones);

  CalderonResult r = blank_result(x, t);
  r.norm = nrm;
  Factorization& fz = r.factorization;
  if (nrm == 0.0) return r;
  const double e0 = it == 0.0 ? 1.0 : i0 / it;
  const double e1 = it == 0.0 ? 1.0 : i1 / it;
  for (std::size_t i = 0; i < n; ++i) {
    if (mod[i] == 0.0) continue;
    const double y = scaled[i] / nrm;
    fz.u[i] = nrm * std::pow(y, e0) / om0[i];
    fz.v[i] = nrm * std::pow(y, e1) / om1[i];
    fz.s[i] = std::log(fz.v[i] / fz.u[i]);
  }
  r.endpoint0 = c.a0().norm_of_modulus(fz.u);
  r.endpoint1 = c.a1().norm_of_modulus(fz.v);
  return r;
}

CalderonResult optimize(const Couple& c, double t, const MVec& x, const InterpolationOptions& options) {
  const auto mod = x.modulus();
  const std::size_t n = mod.size();
  const auto support = support_of(mod);
  CalderonResult r = blank_result(x, t);
  Factorization& fz = r.factorization;
  if (support.empty()) return r;

  const auto k = static_cast<Eigen::Index>(support.size());
  double top = 0.0;
  for (double m : mod) top = std::max(top, m);
  std::vector<double> logx(n, 0.0);
  for (std::size_t i : support) logx[i] = std::log(mod[i] / top);

  std::vector<double> u(n, 0.0), v(n, 0.0), g0, g1;
  double last_n0 = 0.0, last_n1 = 0.0;
  // Evaluated on |x| / max|x|; the scale factor is restored at the end.
  auto fill = [&](const Eigen::VectorXd& s) {
    // Normalize each endpoint argument by its largest entry to avoid overflow.
    double lu = -kInf, lv = -kInf;
    for (Eigen::Index j = 0; j < k; ++j) {
      lu = std::max(lu, logx[support[j]] - t * s[j]);
      lv = std::max(lv, logx[support[j]] + (1.0 - t) * s[j]);
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      const std::size_t i = support[j];
      u[i] = std::exp(logx[i] - t * s[j] - lu);
      v[i] = std::exp(logx[i] + (1.0 - t) * s[j] - lv);
    }
    last_n0 = c.a0().norm_with_log_gradient(u, g0);
    last_n1 = c.a1().norm_with_log_gradient(v, g1);
    return std::pair{lu + std::log(last_n0), lv + std::log(last_n1)};
  };

  opt::Objective objective = [&](const Eigen::VectorXd& s, Eigen::VectorXd& grad) {
    const auto [l0, l1] = fill(s);
    grad.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const std::size_t i = support[j];
      grad[j] = t * (1.0 - t) * (g1[i] - g0[i]);
    }
    return (1.0 - t) * l0 + t * l1;
  };

  opt::MinimizeOptions mopt;
  mopt.gradient_tolerance = options.tolerance;
  mopt.max_iterations = options.max_iterations;
  auto rng = make_rng(options.seed, 0xCA1D);
  std::normal_distribution<double> normal(0.0, 1.0);

  opt::MinimizeResult best;
  bool have = false;
  for (int attempt = 0; attempt <= std::max(0, options.restarts); ++attempt) {
    Eigen::VectorXd start = Eigen::VectorXd::Zero(k);
    if (attempt > 0) {
      for (Eigen::Index j = 0; j < k; ++j) start[j] = normal(rng);
    }
    auto res = opt::minimize_bfgs(objective, start, mopt);
    r.iterations += res.iterations;
    if (!have || res.value < best.value) {
      best = std::move(res);
      have = true;
    }
  }

  const auto [l0, l1] = fill(best.x);
  // Shift s so that both endpoint norms coincide.
  const double shift = l0 - l1;
  for (Eigen::Index j = 0; j < k; ++j) {
    const std::size_t i = support[j];
    fz.s[i] = best.x[j] + shift;
    fz.u[i] = mod[i] * std::exp(-t * fz.s[i]);
    fz.v[i] = mod[i] * std::exp((1.0 - t) * fz.s[i]);
  }
  r.norm = top * std::exp((1.0 - t) * l0 + t * l1);
  r.endpoint0 = c.a0().norm_of_modulus(fz.u);
  r.endpoint1 = c.a1().norm_of_modulus(fz.v);
  r.converged = best.converged();
  return r;
}

class CalderonProductImpl final : public detail::SpaceImpl {
 public:
  CalderonProductImpl(Couple couple, double t)
      : SpaceImpl(couple.space()), couple_(std::move(couple)), t_(t), closed_(closed_form_interpolant(couple_, t)) {}

  SpaceKind kind() const override { return SpaceKind::CalderonProduct; }

  double norm(std::span<const double> modulus) const override {
    return calderon_norm(couple_, t_, MVec::from_real(space(), modulus)).norm;
  }

  std::vector<double> log_gradient(std::span<const double> modulus) const override {
    std::vector<double> g;
    norm_with_log_gradient(modulus, g);
    return g;
  }

  // At the optimal factorization the log-gradient is (1-t) g0(u) + t g1(v).
  // That combination picks an arbitrary subgradient when an endpoint is not
  // smooth (l^inf), so a known closed-form interpolant supplies it instead.
  double norm_with_log_gradient(std::span<const double> modulus, std::vector<double>& grad) const override {
    const auto r = calderon_norm(couple_, t_, MVec::from_real(space(), modulus));
    if (closed_) {
      grad = closed_->log_gradient(modulus);
      return r.norm;
    }
    const auto g0 = couple_.a0().log_gradient(r.factorization.u);
    const auto g1 = couple_.a1().log_gradient(r.factorization.v);
    grad.resize(modulus.size());
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = (1.0 - t_) * g0[i] + t_ * g1[i];
    return r.norm;
  }

  nlohmann::json descriptor() const override {
    return {{"kind", "calderon"}, {"a0", couple_.a0().descriptor()}, {"a1", couple_.a1().descriptor()}, {"t", t_}};
  }

 private:
  Couple couple_;
  double t_;
  std::optional<KotheSpace> closed_;
};

}  // namespace

Couple::Couple(KotheSpace a0, KotheSpace a1) : a0_(std::move(a0)), a1_(std::move(a1)) {
  check_same_space(a0_.space(), a1_.space(), "couple");
}

MVec Factorization::family(cplx z) const {
  MVec out(x.space());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = std::abs(x[i]);
    if (m == 0.0) continue;
    out[i] = (x[i] / m) * u[i] * std::exp(z * s[i]);
  }
  return out;
}

MVec Factorization::derivative() const { return x.times(s); }

CalderonResult calderon_norm(const Couple& c, double t, const MVec& x, const InterpolationOptions& options) {
  check_parameter(t, "calderon_norm");
  check_same_space(c.space(), x.space(), "calderon_norm");
  if (t == 0.0 || t == 1.0) return endpoint_result(c, t, x);
  if (options.method == InterpolationMethod::Auto && c.a0().lp() && c.a1().lp()) {
    return closed_form_lp(*c.a0().lp(), *c.a1().lp(), c, t, x);
  }
  return optimize(c, t, x, options);
}

MVec canonical_omega(const Couple& c, double t, const MVec& x, const InterpolationOptions& options) {
  return calderon_norm(c, t, x, options).factorization.derivative();
}

std::optional<KotheSpace> closed_form_interpolant(const Couple& c, double t) {
  check_parameter(t, "closed_form_interpolant");
  const LpParams* lp0 = c.a0().lp();
  const LpParams* lp1 = c.a1().lp();
  if (lp0 == nullptr || lp1 == nullptr) return std::nullopt;
  const double it = (1.0 - t) * lp0->reciprocal_exponent() + t * lp1->reciprocal_exponent();
  const double pt = it == 0.0 ? kInf : 1.0 / it;
  const auto om0 = lp0->multiplier();
  const auto om1 = lp1->multiplier();
  std::vector<double> w(om0.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double om = std::pow(om0[i], 1.0 - t) * std::pow(om1[i], t);
    w[i] = std::isinf(pt) ? om : std::pow(om, pt);
  }
  return KotheSpace::weighted_lp(c.space(), pt, std::move(w));
}

KotheSpace interpolation_space(const Couple& c, double t) {
  if (auto closed = closed_form_interpolant(c, t)) return *closed;
  return KotheSpace::calderon_product(c.a0(), c.a1(), t);
}

KotheSpace KotheSpace::calderon_product(const KotheSpace& a0, const KotheSpace& a1, double t) {
  check_parameter(t, "calderon_product");
  return KotheSpace(std::make_shared<CalderonProductImpl>(Couple(a0, a1), t));
}

MVec scaling_shift(const Couple& c, double t, double r0, double r1, const MVec& x,
                   const InterpolationOptions& options) {
  const Couple scaled(KotheSpace::scaled(c.a0(), r0), KotheSpace::scaled(c.a1(), r1));
  return canonical_omega(scaled, t, x, options) - canonical_omega(c, t, x, options);
}

std::pair<double, double> wolff_coefficients(double theta1, double theta2) {
  if (!(theta1 > 0.0 && theta1 < 1.0 && theta2 > 0.0 && theta2 < 1.0)) {
    fail_precondition("wolff: theta1 and theta2 must lie in (0, 1)");
  }
  // alpha1 = theta1 alpha2 and alpha2 = (1 - theta2) alpha1 + theta2.
  const double alpha2 = theta2 / (1.0 - theta1 + theta1 * theta2);
  return {theta1 * alpha2, alpha2};
}

WolffGlue wolff_glue(const IndicatorFn& phi1, const IndicatorFn& phi4, double theta1, double theta2) {
  const auto [a1, a2] = wolff_coefficients(theta1, theta2);
  return {a1, a2, indicator_affine(phi1, phi4, a1), indicator_affine(phi1, phi4, a2)};
}

}  // namespace kothe
