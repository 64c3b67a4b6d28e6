#include "kothe/kothe_space.hpp"

#include <algorithm>
#include <cmath>

#include "kothe/indicator.hpp"
#include "kothe/optimize.hpp"

namespace kothe {

std::vector<double> LpParams::multiplier() const {
  std::vector<double> omega(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) omega[i] = std::isinf(p) ? w[i] : std::pow(w[i], 1.0 / p);
  return omega;
}

double LpParams::reciprocal_exponent() const { return std::isinf(p) ? 0.0 : 1.0 / p; }

namespace {

class WeightedLpImpl final : public detail::SpaceImpl {
 public:
  WeightedLpImpl(MeasureSpace space, LpParams params)
      : SpaceImpl(std::move(space)), params_(std::move(params)) {}

  SpaceKind kind() const override { return SpaceKind::WeightedLp; }
  const LpParams& params() const { return params_; }

  double norm(std::span<const double> modulus) const override {
    return lp_norm_of_modulus(modulus, space().masses(), params_.p, params_.w);
  }

  std::vector<double> log_gradient(std::span<const double> modulus) const override {
    const std::size_t n = modulus.size();
    std::vector<double> g(n, 0.0);
    if (std::isinf(params_.p)) {
      double top = 0.0;
      for (std::size_t i = 0; i < n; ++i) top = std::max(top, params_.w[i] * modulus[i]);
      if (top == 0.0) return g;
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (params_.w[i] * modulus[i] >= top * (1.0 - 1e-13)) {
          g[i] = 1.0;
          ++count;
        }
      }
      for (double& gi : g) gi /= static_cast<double>(count);
      return g;
    }
    double top = 0.0;
    for (double a : modulus) top = std::max(top, a);
    if (top == 0.0) return g;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (modulus[i] > 0.0) {
        g[i] = space().mass(i) * params_.w[i] * std::pow(modulus[i] / top, params_.p);
        total += g[i];
      }
    }
    for (double& gi : g) gi /= total;
    return g;
  }

  nlohmann::json descriptor() const override {
    return {{"kind", "lp"}, {"p", exponent_to_json(params_.p)}, {"w", params_.w}};
  }

 private:
  LpParams params_;
};

class ScaledImpl final : public detail::SpaceImpl {
 public:
  ScaledImpl(KotheSpace inner, double r) : SpaceImpl(inner.space()), inner_(std::move(inner)), r_(r) {}

  SpaceKind kind() const override { return SpaceKind::Scaled; }
  double norm(std::span<const double> modulus) const override { return r_ * inner_.norm_of_modulus(modulus); }
  std::vector<double> log_gradient(std::span<const double> modulus) const override {
    return inner_.log_gradient(modulus);
  }
  double norm_with_log_gradient(std::span<const double> modulus, std::vector<double>& grad) const override {
    return r_ * inner_.norm_with_log_gradient(modulus, grad);
  }
  nlohmann::json descriptor() const override {
    return {{"kind", "scaled"}, {"r", r_}, {"space", inner_.descriptor()}};
  }

 private:
  KotheSpace inner_;
  double r_;
};

}  // namespace

KotheSpace::KotheSpace(std::shared_ptr<const detail::SpaceImpl> impl) : impl_(std::move(impl)) {}

KotheSpace KotheSpace::weighted_lp(MeasureSpace space, double p, std::vector<double> w) {
  if (!(p >= 1.0)) fail_precondition("weighted_lp: exponent must lie in [1, inf]");
  if (w.empty()) w.assign(space.size(), 1.0);
  if (w.size() != space.size()) fail_dimension("weighted_lp: weight length mismatch");
  for (double wi : w) {
    if (!(wi > 0.0) || !std::isfinite(wi)) fail_precondition("weighted_lp: weights must be finite and positive");
  }
  return KotheSpace(std::make_shared<WeightedLpImpl>(std::move(space), LpParams{p, std::move(w)}));
}

KotheSpace KotheSpace::scaled(const KotheSpace& a, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) fail_precondition("scaled: factor must be finite and positive");
  if (const LpParams* lp = a.lp()) {
    std::vector<double> w = lp->w;
    const double factor = std::isinf(lp->p) ? r : std::pow(r, lp->p);
    for (double& wi : w) wi *= factor;
    return weighted_lp(a.space(), lp->p, std::move(w));
  }
  return KotheSpace(std::make_shared<ScaledImpl>(a, r));
}

double KotheSpace::norm(const MVec& x) const {
  check_same_space(space(), x.space(), "norm");
  const auto m = x.modulus();
  return impl_->norm(m);
}

double KotheSpace::norm_of_modulus(std::span<const double> modulus) const {
  if (modulus.size() != space().size()) fail_dimension("norm: length mismatch");
  return impl_->norm(modulus);
}

std::vector<double> KotheSpace::log_gradient(std::span<const double> modulus) const {
  if (modulus.size() != space().size()) fail_dimension("log_gradient: length mismatch");
  return impl_->log_gradient(modulus);
}

double KotheSpace::norm_with_log_gradient(std::span<const double> modulus, std::vector<double>& grad) const {
  if (modulus.size() != space().size()) fail_dimension("log_gradient: length mismatch");
  return impl_->norm_with_log_gradient(modulus, grad);
}

const LpParams* KotheSpace::lp() const {
  if (kind() != SpaceKind::WeightedLp) return nullptr;
  return &static_cast<const WeightedLpImpl&>(*impl_).params();
}

KotheSpace space_from_json(const MeasureSpace& space, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) fail_precondition("space descriptor needs \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "lp") {
    std::vector<double> w;
    if (j.contains("w")) w = j.at("w").get<std::vector<double>>();
    return KotheSpace::weighted_lp(space, exponent_from_json(j.at("p")), std::move(w));
  }
  if (kind == "calderon") {
    return KotheSpace::calderon_product(space_from_json(space, j.at("a0")), space_from_json(space, j.at("a1")),
                                        j.at("t").get<double>());
  }
  if (kind == "scaled") {
    return KotheSpace::scaled(space_from_json(space, j.at("space")), j.at("r").get<double>());
  }
  if (kind == "indicator") {
    return KotheSpace::indicator_induced(indicator_from_json(space, j.at("indicator")));
  }
  fail_precondition("unknown space kind \"" + kind + "\"");
}

std::optional<KotheSpace> dual_space(const KotheSpace& a) {
  const LpParams* lp = a.lp();
  if (lp == nullptr) return std::nullopt;
  std::vector<double> w(lp->w.size());
  if (lp->p == 1.0 || std::isinf(lp->p)) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / lp->w[i];
    return KotheSpace::weighted_lp(a.space(), lp->p == 1.0 ? kInf : 1.0, std::move(w));
  }
  const double q = lp->p / (lp->p - 1.0);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(lp->w[i], 1.0 - q);
  return KotheSpace::weighted_lp(a.space(), q, std::move(w));
}

Estimate dual_norm(const KotheSpace& a, const MVec& y, const DualNormOptions& options) {
  check_same_space(a.space(), y.space(), "dual_norm");
  if (!options.force_numeric) {
    if (auto dual = dual_space(a)) return {dual->norm(y), true, 0};
  }
  const auto mod = y.modulus();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < mod.size(); ++i) {
    if (mod[i] > 0.0) support.push_back(i);
  }
  if (support.empty()) return {0.0, true, 0};

  const auto mu = a.space().masses();
  const std::size_t n = mod.size();
  const auto k = static_cast<Eigen::Index>(support.size());
  // minimize log||e^sigma||_A - log sum mu |y| e^sigma over sigma on supp(y)
  opt::Objective objective = [&](const Eigen::VectorXd& sigma, Eigen::VectorXd& grad) {
    const double top = sigma.maxCoeff();
    std::vector<double> x(n, 0.0);
    double pair = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const std::size_t i = support[j];
      x[i] = std::exp(sigma[j] - top);
      pair += mu[i] * mod[i] * x[i];
    }
    std::vector<double> g;
    const double nrm = a.norm_with_log_gradient(x, g);
    grad.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const std::size_t i = support[j];
      grad[j] = g[i] - mu[i] * mod[i] * x[i] / pair;
    }
    return std::log(nrm) - std::log(pair);
  };

  opt::MinimizeOptions mopt;
  mopt.max_iterations = options.max_iterations;
  mopt.gradient_tolerance = options.tolerance * 1e-2;
  auto rng = make_rng(options.seed, 0xD0A1);
  std::normal_distribution<double> normal(0.0, 1.0);

  Estimate best{0.0, false, 0};
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    Eigen::VectorXd start(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const double base = std::log(mod[support[j]]);
      start[j] = r == 0 ? base : (r == 1 ? 0.0 : base + normal(rng));
    }
    const auto res = opt::minimize_bfgs(objective, start, mopt);
    const double value = std::exp(-res.value);
    best.iterations += res.iterations;
    if (value > best.value) {
      best.value = value;
      best.converged = res.converged();
    }
  }
  // For l^1-like norms the supremum sits at a vertex of the unit ball, where
  // the log-domain objective only approaches its infimum at infinity.
  for (const std::size_t i : support) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    const double value = mu[i] * mod[i] / a.norm_of_modulus(e);
    if (value > best.value) best = {value, true, best.iterations};
  }
  return best;
}

MVec multiplier_apply(const Multiplier& m, const MVec& x) { return m.b.times(x); }

}  // namespace kothe
