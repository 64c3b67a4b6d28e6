#include "kothe/indicator.hpp"

#include <algorithm>
#include <cmath>

#include "kothe/optimize.hpp"
#include "kothe/sampling.hpp"

namespace kothe {

namespace detail {

class IndicatorImpl {
 public:
  explicit IndicatorImpl(MeasureSpace space) : space_(std::move(space)) {}
  virtual ~IndicatorImpl() = default;

  const MeasureSpace& space() const { return space_; }
  virtual IndicatorKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual Estimate evaluate(std::span<const double> f) const = 0;
  virtual std::vector<double> gradient(std::span<const double> f) const = 0;
  virtual std::optional<double> delta_bound() const = 0;
  virtual std::optional<KotheSpace> underlying_space() const { return std::nullopt; }
  virtual nlohmann::json descriptor() const = 0;

 private:
  MeasureSpace space_;
};

}  // namespace detail

namespace {

constexpr double kLogFloor = -700.0;

double mass_of(std::span<const double> mu, std::span<const double> f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m += mu[i] * f[i];
  return m;
}

std::vector<double> central_difference_gradient(const IndicatorFn::Evaluator& eval, std::span<const double> f) {
  std::vector<double> point(f.begin(), f.end());
  std::vector<double> grad(f.size());
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, v);
  if (scale == 0.0) scale = 1.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double base = f[i];
    if (base > 0.0) {
      const double h = 1e-5 * base;
      point[i] = base + h;
      const double up = eval(point);
      point[i] = base - h;
      const double down = eval(point);
      grad[i] = (up - down) / (2.0 * h);
    } else {
      const double h = 1e-9 * scale;
      point[i] = h;
      const double up = eval(point);
      point[i] = 0.0;
      grad[i] = (up - eval(point)) / h;
    }
    point[i] = base;
  }
  return grad;
}

class ClosedFormLpIndicator final : public detail::IndicatorImpl {
 public:
  ClosedFormLpIndicator(MeasureSpace space, LpParams params)
      : IndicatorImpl(std::move(space)), params_(std::move(params)) {}

  IndicatorKind kind() const override { return IndicatorKind::ClosedFormLp; }
  std::string name() const override { return "lp"; }

  Estimate evaluate(std::span<const double> f) const override {
    const auto mu = space().masses();
    if (std::isinf(params_.p)) {
      double s = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) s -= mu[i] * f[i] * std::log(params_.w[i]);
      return {s, true, 0};
    }
    const double m = mass_of(mu, f);
    if (m == 0.0) return {0.0, true, 0};
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += mu[i] * xlogxy(f[i], m * params_.w[i]);
    return {s / params_.p, true, 0};
  }

  std::vector<double> gradient(std::span<const double> f) const override {
    const auto mu = space().masses();
    std::vector<double> g(f.size());
    if (std::isinf(params_.p)) {
      for (std::size_t i = 0; i < f.size(); ++i) g[i] = -mu[i] * std::log(params_.w[i]);
      return g;
    }
    const double m = mass_of(mu, f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double lg = f[i] > 0.0 && m > 0.0 ? std::log(f[i] / (m * params_.w[i])) : kLogFloor;
      g[i] = mu[i] * lg / params_.p;
    }
    return g;
  }

  // Delta of this functional is (1/p) Delta of the L1 entropy, and delta(Phi_{L1}) = log 2.
  std::optional<double> delta_bound() const override {
    return std::isinf(params_.p) ? 0.0 : std::log(2.0) / params_.p;
  }

  std::optional<KotheSpace> underlying_space() const override {
    return KotheSpace::weighted_lp(space(), params_.p, params_.w);
  }

  nlohmann::json descriptor() const override {
    return {{"kind", "lp"}, {"p", exponent_to_json(params_.p)}, {"w", params_.w}};
  }

 private:
  LpParams params_;
};

class NumericIndicator final : public detail::IndicatorImpl {
 public:
  explicit NumericIndicator(KotheSpace a) : IndicatorImpl(a.space()), a_(std::move(a)) {}

  IndicatorKind kind() const override { return IndicatorKind::Numeric; }
  std::string name() const override { return "numeric"; }

  Estimate evaluate(std::span<const double> f) const override { return maximize_log_pairing(a_, f, true).value; }

  // Envelope theorem: d Phi / d f_i = mu_i log x_{f,i}.
  std::vector<double> gradient(std::span<const double> f) const override {
    const auto best = maximize_log_pairing(a_, f, true);
    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      g[i] = space().mass(i) * (best.x[i] > 0.0 ? std::log(best.x[i]) : kLogFloor);
    }
    return g;
  }

  std::optional<double> delta_bound() const override { return std::log(2.0); }
  std::optional<KotheSpace> underlying_space() const override { return a_; }
  nlohmann::json descriptor() const override { return {{"kind", "numeric"}, {"space", a_.descriptor()}}; }

 private:
  KotheSpace a_;
};

class AffineIndicator final : public detail::IndicatorImpl {
 public:
  AffineIndicator(MeasureSpace space, std::vector<IndicatorFn::Term> terms)
      : IndicatorImpl(std::move(space)), terms_(std::move(terms)) {}

  IndicatorKind kind() const override { return IndicatorKind::Affine; }
  std::string name() const override { return "affine"; }

  Estimate evaluate(std::span<const double> f) const override {
    Estimate out{0.0, true, 0};
    for (const auto& term : terms_) {
      if (term.coefficient == 0.0) continue;
      const Estimate e = term.phi.evaluate(f);
      out.value += term.coefficient * e.value;
      out.converged = out.converged && e.converged;
      out.iterations += e.iterations;
    }
    return out;
  }

  std::vector<double> gradient(std::span<const double> f) const override {
    std::vector<double> g(f.size(), 0.0);
    for (const auto& term : terms_) {
      if (term.coefficient == 0.0) continue;
      const auto gt = term.phi.gradient(f);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += term.coefficient * gt[i];
    }
    return g;
  }

  std::optional<double> delta_bound() const override {
    double total = 0.0;
    for (const auto& term : terms_) {
      if (term.coefficient == 0.0) continue;
      const auto d = term.phi.delta_bound();
      if (!d) return std::nullopt;
      total += std::abs(term.coefficient) * *d;
    }
    return total;
  }

  nlohmann::json descriptor() const override {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& term : terms_) {
      terms.push_back(nlohmann::json{{"c", term.coefficient}, {"phi", term.phi.descriptor()}});
    }
    return {{"kind", "affine"}, {"terms", terms}};
  }

 private:
  std::vector<IndicatorFn::Term> terms_;
};

class FunctionalIndicator final : public detail::IndicatorImpl {
 public:
  FunctionalIndicator(MeasureSpace space, std::string name, IndicatorFn::Evaluator eval,
                      IndicatorFn::GradientFn gradient, std::optional<double> delta)
      : IndicatorImpl(std::move(space)),
        name_(std::move(name)),
        eval_(std::move(eval)),
        gradient_(std::move(gradient)),
        delta_(delta) {}

  IndicatorKind kind() const override { return IndicatorKind::Functional; }
  std::string name() const override { return name_; }
  Estimate evaluate(std::span<const double> f) const override { return {eval_(f), true, 0}; }
  std::vector<double> gradient(std::span<const double> f) const override {
    return gradient_ ? gradient_(f) : central_difference_gradient(eval_, f);
  }
  std::optional<double> delta_bound() const override { return delta_; }
  nlohmann::json descriptor() const override { return {{"kind", "functional"}, {"name", name_}}; }

 private:
  std::string name_;
  IndicatorFn::Evaluator eval_;
  IndicatorFn::GradientFn gradient_;
  std::optional<double> delta_;
};

// Norm recovered from an indicator by Legendre-type inversion.
class IndicatorInducedSpace final : public detail::SpaceImpl {
 public:
  explicit IndicatorInducedSpace(IndicatorFn phi) : SpaceImpl(phi.space()), phi_(std::move(phi)) {}

  SpaceKind kind() const override { return SpaceKind::IndicatorInduced; }

  double norm(std::span<const double> modulus) const override {
    return invert_indicator(phi_, modulus).norm.value;
  }

  std::vector<double> log_gradient(std::span<const double> modulus) const override {
    std::vector<double> g;
    norm_with_log_gradient(modulus, g);
    return g;
  }

  // The maximizing density is the norming functional: d log||x|| / d log|x_i| = mu_i f_i.
  double norm_with_log_gradient(std::span<const double> modulus, std::vector<double>& grad) const override {
    const auto inv = invert_indicator(phi_, modulus);
    grad.assign(modulus.size(), 0.0);
    if (!inv.density.empty()) {
      for (std::size_t i = 0; i < modulus.size(); ++i) grad[i] = space().mass(i) * inv.density[i];
    }
    return inv.norm.value;
  }

  nlohmann::json descriptor() const override { return {{"kind", "indicator"}, {"indicator", phi_.descriptor()}}; }

 private:
  IndicatorFn phi_;
};

void check_density(const MeasureSpace& space, std::span<const double> f, const char* where) {
  if (f.size() != space.size()) fail_dimension(std::string(where) + ": length mismatch");
  for (double v : f) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail_precondition(std::string(where) + ": entries must be finite and >= 0");
  }
}

std::vector<double> real_nonnegative(const MVec& f, const char* where) {
  if (f.max_imag() > 0.0) fail_precondition(std::string(where) + ": expected a real vector");
  auto r = f.real();
  for (double v : r) {
    if (!(v >= 0.0)) fail_precondition(std::string(where) + ": expected a nonnegative vector");
  }
  return r;
}

}  // namespace

IndicatorFn::IndicatorFn(std::shared_ptr<const detail::IndicatorImpl> impl) : impl_(std::move(impl)) {}

IndicatorFn IndicatorFn::closed_form_lp(MeasureSpace space, double p, std::vector<double> w) {
  // Reuse the space constructor for validation.
  const auto a = KotheSpace::weighted_lp(space, p, std::move(w));
  return IndicatorFn(std::make_shared<ClosedFormLpIndicator>(std::move(space), *a.lp()));
}

IndicatorFn IndicatorFn::numeric(KotheSpace a) {
  return IndicatorFn(std::make_shared<NumericIndicator>(std::move(a)));
}

IndicatorFn IndicatorFn::of_space(const KotheSpace& a) {
  if (const LpParams* lp = a.lp()) return closed_form_lp(a.space(), lp->p, lp->w);
  return numeric(a);
}

IndicatorFn IndicatorFn::affine(std::vector<Term> terms) {
  if (terms.empty()) fail_precondition("affine indicator needs at least one term");
  const MeasureSpace space = terms.front().phi.space();
  for (const auto& term : terms) check_same_space(space, term.phi.space(), "affine indicator");
  return IndicatorFn(std::make_shared<AffineIndicator>(space, std::move(terms)));
}

IndicatorFn IndicatorFn::functional(MeasureSpace space, std::string name, Evaluator eval,
                                    std::optional<double> delta) {
  return IndicatorFn(
      std::make_shared<FunctionalIndicator>(std::move(space), std::move(name), std::move(eval), nullptr, delta));
}

IndicatorFn IndicatorFn::functional_with_gradient(MeasureSpace space, std::string name, Evaluator eval,
                                                  GradientFn gradient, std::optional<double> delta) {
  return IndicatorFn(std::make_shared<FunctionalIndicator>(std::move(space), std::move(name), std::move(eval),
                                                           std::move(gradient), delta));
}

IndicatorKind IndicatorFn::kind() const { return impl_->kind(); }
const MeasureSpace& IndicatorFn::space() const { return impl_->space(); }
std::string IndicatorFn::name() const { return impl_->name(); }

Estimate IndicatorFn::evaluate(std::span<const double> f) const {
  check_density(space(), f, "indicator");
  return impl_->evaluate(f);
}

std::vector<double> IndicatorFn::gradient(std::span<const double> f) const {
  check_density(space(), f, "indicator gradient");
  return impl_->gradient(f);
}

std::optional<double> IndicatorFn::delta_bound() const { return impl_->delta_bound(); }
std::optional<KotheSpace> IndicatorFn::underlying_space() const { return impl_->underlying_space(); }
nlohmann::json IndicatorFn::descriptor() const { return impl_->descriptor(); }

KotheSpace KotheSpace::indicator_induced(const IndicatorFn& phi) {
  return KotheSpace(std::make_shared<IndicatorInducedSpace>(phi));
}

IndicatorFn indicator_from_json(const MeasureSpace& space, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) fail_precondition("indicator descriptor needs \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "lp") {
    std::vector<double> w;
    if (j.contains("w")) w = j.at("w").get<std::vector<double>>();
    return IndicatorFn::closed_form_lp(space, exponent_from_json(j.at("p")), std::move(w));
  }
  if (kind == "numeric") return IndicatorFn::numeric(space_from_json(space, j.at("space")));
  if (kind == "affine") {
    std::vector<IndicatorFn::Term> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({t.at("c").get<double>(), indicator_from_json(space, t.at("phi"))});
    }
    return IndicatorFn::affine(std::move(terms));
  }
  fail_precondition("cannot build indicator of kind \"" + kind + "\" from JSON");
}

double indicator_eval(const IndicatorFn& phi, const MVec& f) {
  check_same_space(phi.space(), f.space(), "indicator_eval");
  return phi(real_nonnegative(f, "indicator_eval"));
}

LogPairingMaximizer maximize_log_pairing(const KotheSpace& a, std::span<const double> f, bool force_numeric) {
  check_density(a.space(), f, "maximize_log_pairing");
  const auto mu = a.space().masses();
  const std::size_t n = f.size();
  LogPairingMaximizer out;
  out.x.assign(n, 0.0);
  const double m = mass_of(mu, f);
  if (m == 0.0) {
    out.value = {0.0, true, 0};
    return out;
  }

  const LpParams* lp = force_numeric ? nullptr : a.lp();
  if (lp != nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i] > 0.0) {
        out.x[i] = std::isinf(lp->p) ? 1.0 / lp->w[i] : std::pow(f[i] / (m * lp->w[i]), 1.0 / lp->p);
      }
    }
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i] > 0.0) v += mu[i] * f[i] * std::log(out.x[i]);
    }
    out.value = {v, true, 0};
    return out;
  }

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i) {
    if (f[i] > 0.0) support.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(support.size());
  // minimize log||e^sigma||_A - sum q_i sigma_i with q = mu f / m (shift invariant)
  opt::Objective objective = [&](const Eigen::VectorXd& sigma, Eigen::VectorXd& grad) {
    const double top = sigma.maxCoeff();
    std::vector<double> x(n, 0.0);
    double lin = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const std::size_t i = support[j];
      x[i] = std::exp(sigma[j] - top);
      lin += mu[i] * f[i] / m * (sigma[j] - top);
    }
    std::vector<double> g;
    const double nrm = a.norm_with_log_gradient(x, g);
    grad.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const std::size_t i = support[j];
      grad[j] = g[i] - mu[i] * f[i] / m;
    }
    return std::log(nrm) - lin;
  };
  Eigen::VectorXd start(k);
  for (Eigen::Index j = 0; j < k; ++j) start[j] = 0.5 * std::log(f[support[j]] / m);
  const auto res = opt::minimize_bfgs(objective, start);

  std::vector<double> x(n, 0.0);
  const double top = res.x.size() ? res.x.maxCoeff() : 0.0;
  for (Eigen::Index j = 0; j < k; ++j) x[support[j]] = std::exp(res.x[j] - top);
  const double nrm = a.norm_of_modulus(x);
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > 0.0) {
      x[i] /= nrm;
      v += mu[i] * f[i] * std::log(x[i]);
    }
  }
  out.x = std::move(x);
  out.value = {v, res.converged(), res.iterations};
  return out;
}

Lozanovsky lozanovsky_factorize(const KotheSpace& a, const MVec& f) {
  check_same_space(a.space(), f.space(), "lozanovsky_factorize");
  const auto fr = real_nonnegative(f, "lozanovsky_factorize");
  const double m = mass_of(a.space().masses(), fr);
  if (m == 0.0) fail_precondition("lozanovsky_factorize: f has empty support");
  const auto best = maximize_log_pairing(a, fr);
  Lozanovsky out{f, MVec::from_real(a.space(), best.x), MVec(a.space()), 0.0, 0.0, best.value.converged};
  for (std::size_t i = 0; i < fr.size(); ++i) {
    if (fr[i] > 0.0) out.a_star[i] = fr[i] / best.x[i];
  }
  out.norm_a = a.norm(out.a);
  const Estimate dn = dual_norm(a, out.a_star);
  out.norm_a_star = dn.value;
  out.converged = out.converged && dn.converged;
  return out;
}

cplx indicator_extend(const IndicatorFn& phi, const MVec& f) {
  check_same_space(phi.space(), f.space(), "indicator_extend");
  const auto mod = f.modulus();
  const auto mu = f.space().masses();
  if (mass_of(mu, mod) == 0.0) return 0.0;
  cplx s = 0.0;
  if (const auto a = phi.underlying_space()) {
    const auto best = maximize_log_pairing(*a, mod);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (mod[i] > 0.0) s += mu[i] * f[i] * std::log(best.x[i]);
    }
    return s;
  }
  // d Phi / d f_i = mu_i log x_{f,i} for indicators of spaces.
  const auto g = phi.gradient(mod);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (mod[i] > 0.0) s += f[i] * g[i];
  }
  return s;
}

double delta_phi(const IndicatorFn& phi, std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) fail_dimension("delta_phi: length mismatch");
  std::vector<double> sum(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sum[i] = f[i] + g[i];
  return phi(f) + phi(g) - phi(sum);
}

double delta_phi(const IndicatorFn& phi, const MVec& f, const MVec& g) {
  check_same_space(phi.space(), f.space(), "delta_phi");
  check_same_space(phi.space(), g.space(), "delta_phi");
  return delta_phi(phi, real_nonnegative(f, "delta_phi"), real_nonnegative(g, "delta_phi"));
}

DeltaEstimate estimate_delta(const IndicatorFn& phi, int budget, std::uint64_t seed) {
  if (budget < 1) fail_precondition("estimate_delta: budget must be >= 1");
  const auto mu = phi.space().masses();
  const std::size_t n = mu.size();
  auto rng = make_rng(seed, 0xDE17A);
  auto ratio = [&](const std::vector<double>& f, const std::vector<double>& g) {
    const double total = mass_of(mu, f) + mass_of(mu, g);
    return total > 0.0 ? delta_phi(phi, f, g) / total : 0.0;
  };

  DeltaEstimate best;
  best.value = -kInf;
  const int random_budget = std::max(1, budget - budget / 5);
  for (int s = 0; s < random_budget; ++s) {
    auto [f, g] = sampling::random_pair(rng, n, mu, s);
    const double r = ratio(f, g);
    if (r > best.value) {
      best.value = r;
      best.f = std::move(f);
      best.g = std::move(g);
    }
  }
  best.samples = random_budget;

  std::normal_distribution<double> normal(0.0, 1.0);
  double spread = 0.5;
  for (int s = random_budget; s < budget; ++s) {
    auto f = best.f;
    auto g = best.g;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] *= std::exp(spread * normal(rng));
      g[i] *= std::exp(spread * normal(rng));
    }
    const double r = ratio(f, g);
    ++best.samples;
    if (r > best.value) {
      best.value = r;
      best.f = std::move(f);
      best.g = std::move(g);
    } else {
      spread = std::max(1e-4, spread * 0.97);
    }
  }
  return best;
}

IndicatorFn indicator_affine(const IndicatorFn& phi0, const IndicatorFn& phi1, double t) {
  check_same_space(phi0.space(), phi1.space(), "indicator_affine");
  if (t == 0.0) return phi0;
  if (t == 1.0) return phi1;
  return IndicatorFn::affine({{1.0 - t, phi0}, {t, phi1}});
}

InversionResult invert_indicator(const IndicatorFn& phi, std::span<const double> modulus,
                                 const InversionOptions& options) {
  const auto mu_all = phi.space().masses();
  const std::size_t n = mu_all.size();
  if (modulus.size() != n) fail_dimension("norm_from_indicator: length mismatch");
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i) {
    if (modulus[i] > 0.0) support.push_back(i);
  }
  InversionResult out;
  if (support.empty()) {
    out.norm = {0.0, true, 0};
    return out;
  }
  const std::size_t k = support.size();
  std::vector<double> mu(k), logx(k);
  double top = 0.0;
  for (std::size_t j = 0; j < k; ++j) top = std::max(top, modulus[support[j]]);
  for (std::size_t j = 0; j < k; ++j) {
    mu[j] = mu_all[support[j]];
    logx[j] = std::log(modulus[support[j]] / top);
  }

  std::vector<double> full(n, 0.0);
  opt::SimplexObjective objective = [&](std::span<const double> f, std::span<double> grad) {
    for (std::size_t j = 0; j < k; ++j) full[support[j]] = f[j];
    const double value = phi(full);
    const auto g = phi.gradient(full);
    double lin = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      lin += mu[j] * f[j] * logx[j];
      grad[j] = mu[j] * logx[j] - g[support[j]];
    }
    return lin - value;
  };

  // Start from the L1 maximizer f proportional to |x|.
  std::vector<double> start(k);
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) total += mu[j] * modulus[support[j]] / top;
  for (std::size_t j = 0; j < k; ++j) start[j] = modulus[support[j]] / top / total;

  opt::SimplexOptions sopt;
  sopt.tolerance = options.tolerance;
  sopt.max_iterations = options.max_iterations;
  const auto res = opt::maximize_on_simplex(objective, mu, std::move(start), sopt);

  double best = res.value;
  std::vector<double> density = res.density;
  bool converged = res.converged;
  // Linear pieces of the objective (an l^inf end, for instance) put the
  // maximum at a vertex, where the softmax gradient vanishes on every
  // coordinate of small mass and the search can stall at the wrong vertex.
  std::vector<double> vertex(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::fill(vertex.begin(), vertex.end(), 0.0);
    vertex[j] = 1.0 / mu[j];
    std::vector<double> grad(k);
    const double value = objective(vertex, grad);
    if (value > best) {
      best = value;
      density = vertex;
      converged = true;
    }
  }

  out.norm = {top * std::exp(best), converged, res.iterations};
  out.density.assign(n, 0.0);
  for (std::size_t j = 0; j < k; ++j) out.density[support[j]] = density[j];
  return out;
}

Estimate norm_from_indicator(const IndicatorFn& phi, const MVec& x, const InversionOptions& options) {
  check_same_space(phi.space(), x.space(), "norm_from_indicator");
  const auto mod = x.modulus();
  return invert_indicator(phi, mod, options).norm;
}

IndicatorCheck verify_indicator(const IndicatorFn& phi, int samples, std::uint64_t seed) {
  const auto mu = phi.space().masses();
  const std::size_t n = mu.size();
  const auto l1 = IndicatorFn::closed_form_lp(phi.space(), 1.0);
  auto rng = make_rng(seed, 0x1D1CA);
  IndicatorCheck check;
  check.min_delta_ratio = kInf;
  check.max_delta_ratio = -kInf;
  check.max_domination_excess = -kInf;
  for (int s = 0; s < samples; ++s) {
    auto [f, g] = sampling::random_pair(rng, n, mu, s);
    const double total = mass_of(mu, f) + mass_of(mu, g);
    if (total == 0.0) continue;
    const double d = delta_phi(phi, f, g);
    const double d1 = delta_phi(l1, f, g);
    check.min_delta_ratio = std::min(check.min_delta_ratio, d / total);
    check.max_delta_ratio = std::max(check.max_delta_ratio, d / total);
    check.max_domination_excess = std::max(check.max_domination_excess, (d - d1) / total);

    const double base = phi(f);
    for (double alpha : {0.1, 7.0}) {
      std::vector<double> scaled(f);
      for (double& v : scaled) v *= alpha;
      const double defect = std::abs(phi(scaled) - alpha * base) / (1.0 + std::abs(alpha * base));
      check.homogeneity_defect = std::max(check.homogeneity_defect, defect);
    }
    ++check.samples;
  }
  return check;
}

}  // namespace kothe
