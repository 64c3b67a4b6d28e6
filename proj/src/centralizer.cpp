#include "kothe/centralizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kothe/optimize.hpp"
#include "kothe/sampling.hpp"

namespace kothe {

struct Centralizer::State {
  CentralizerKind kind;
  KotheSpace domain;
  std::string name;
  Map map;
  std::vector<double> symbol;
  std::optional<std::pair<Couple, double>> couple;
  nlohmann::json descriptor;
};

Centralizer::Centralizer(std::shared_ptr<const State> state) : state_(std::move(state)) {}

CentralizerKind Centralizer::kind() const { return state_->kind; }
const KotheSpace& Centralizer::domain() const { return state_->domain; }
const std::string& Centralizer::name() const { return state_->name; }

MVec Centralizer::apply(const MVec& x) const {
  check_same_space(domain().space(), x.space(), "centralizer");
  return state_->map(x);
}

const std::vector<double>* Centralizer::symbol() const {
  return state_->kind == CentralizerKind::LogSymbol ? &state_->symbol : nullptr;
}

std::optional<std::pair<Couple, double>> Centralizer::couple() const { return state_->couple; }
nlohmann::json Centralizer::descriptor() const { return state_->descriptor; }

Centralizer Centralizer::canonical(const Couple& c, double t, InterpolationOptions options) {
  if (!(t > 0.0 && t < 1.0)) fail_precondition("canonical centralizer: t must lie in (0, 1)");
  auto state = std::make_shared<State>(State{
      CentralizerKind::Canonical,
      interpolation_space(c, t),
      "canonical",
      [c, t, options](const MVec& x) { return canonical_omega(c, t, x, options); },
      {},
      std::make_pair(c, t),
      {{"kind", "canonical"}, {"a0", c.a0().descriptor()}, {"a1", c.a1().descriptor()}, {"t", t}}});
  return Centralizer(std::move(state));
}

Centralizer Centralizer::log_modulus(KotheSpace a) {
  auto map = [a](const MVec& x) {
    MVec out(x.space());
    const double nrm = a.norm(x);
    if (nrm == 0.0) return out;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double m = std::abs(x[i]);
      if (m > 0.0) out[i] = x[i] * std::log(m / nrm);
    }
    return out;
  };
  return Centralizer(std::make_shared<State>(
      State{CentralizerKind::LogModulus, a, "logmod", map, {}, std::nullopt, {{"kind", "logmod"}}}));
}

Centralizer Centralizer::log_symbol(KotheSpace a, std::vector<double> g) {
  if (g.size() != a.space().size()) fail_dimension("log_symbol: symbol length mismatch");
  for (double v : g) {
    if (!std::isfinite(v)) fail_precondition("log_symbol: symbol must be finite");
  }
  auto map = [g](const MVec& x) { return x.times(g); };
  nlohmann::json d = {{"kind", "symbol"}, {"g", g}};
  return Centralizer(std::make_shared<State>(
      State{CentralizerKind::LogSymbol, std::move(a), "symbol", map, std::move(g), std::nullopt, std::move(d)}));
}

MVec rank_log_apply(const MVec& x) {
  const auto mod = x.modulus();
  const auto mu = x.space().masses();
  std::vector<std::size_t> order(mod.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return mod[l] > mod[r]; });
  MVec out(x.space());
  // Walk down the moduli; atoms with equal modulus share the strictly-greater mass.
  double above = 0.0;
  std::size_t j = 0;
  while (j < order.size()) {
    std::size_t k = j;
    double tie_mass = 0.0;
    while (k < order.size() && mod[order[k]] == mod[order[j]]) tie_mass += mu[order[k++]];
    if (above > 0.0) {
      for (std::size_t l = j; l < k; ++l) out[order[l]] = x[order[l]] * std::log(above);
    }
    above += tie_mass;
    j = k;
  }
  return out;
}

Centralizer Centralizer::rank_log(KotheSpace a) {
  auto map = [](const MVec& x) { return rank_log_apply(x); };
  return Centralizer(std::make_shared<State>(
      State{CentralizerKind::RankLog, std::move(a), "rank", map, {}, std::nullopt, {{"kind", "rank"}}}));
}

Centralizer Centralizer::zero(KotheSpace a) {
  auto map = [](const MVec& x) { return MVec(x.space()); };
  return Centralizer(std::make_shared<State>(
      State{CentralizerKind::Zero, std::move(a), "zero", map, {}, std::nullopt, {{"kind", "zero"}}}));
}

Centralizer Centralizer::affine(std::vector<std::pair<double, Centralizer>> terms) {
  if (terms.empty()) fail_precondition("affine centralizer needs at least one term");
  const KotheSpace domain = terms.front().second.domain();
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& [c, omega] : terms) {
    check_same_space(domain.space(), omega.domain().space(), "affine centralizer");
    parts.push_back(nlohmann::json{{"c", c}, {"omega", omega.descriptor()}});
  }
  auto map = [terms](const MVec& x) {
    MVec out(x.space());
    for (const auto& [c, omega] : terms) {
      if (c != 0.0) out += cplx(c) * omega.apply(x);
    }
    return out;
  };
  return Centralizer(std::make_shared<State>(State{
      CentralizerKind::Affine, domain, "affine", map, {}, std::nullopt, {{"kind", "affine"}, {"terms", parts}}}));
}

Centralizer Centralizer::custom(KotheSpace a, std::string name, Map map) {
  nlohmann::json d = {{"kind", "custom"}, {"name", name}};
  return Centralizer(std::make_shared<State>(
      State{CentralizerKind::Custom, std::move(a), std::move(name), std::move(map), {}, std::nullopt, std::move(d)}));
}

Centralizer centralizer_from_json(const KotheSpace& domain, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) fail_precondition("centralizer descriptor needs \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "logmod") return Centralizer::log_modulus(domain);
  if (kind == "rank") return Centralizer::rank_log(domain);
  if (kind == "zero") return Centralizer::zero(domain);
  if (kind == "symbol") return Centralizer::log_symbol(domain, j.at("g").get<std::vector<double>>());
  if (kind == "canonical") {
    const Couple c(space_from_json(domain.space(), j.at("a0")), space_from_json(domain.space(), j.at("a1")));
    return Centralizer::canonical(c, j.at("t").get<double>());
  }
  if (kind == "affine") {
    std::vector<std::pair<double, Centralizer>> terms;
    for (const auto& t : j.at("terms")) {
      terms.emplace_back(t.at("c").get<double>(), centralizer_from_json(domain, t.at("omega")));
    }
    return Centralizer::affine(std::move(terms));
  }
  fail_precondition("unknown centralizer kind \"" + kind + "\"");
}

namespace {

constexpr std::uint64_t kAxiomStream = 0xA710000;
const double kEpsLevels[] = {0.5, 0.25, 0.1, 0.05, 0.01};

MVec random_multiplier(std::mt19937_64& rng, const MeasureSpace& space) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<cplx> b(space.size());
  for (auto& v : b) v = std::polar(unif(rng), 2.0 * M_PI * unif(rng));
  return MVec(space, std::move(b));
}

// Smallest M with mu{ |y| > M } <= eps.
double level_for(const MVec& y, double eps) {
  const auto mod = y.modulus();
  std::vector<std::size_t> order(mod.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return mod[l] > mod[r]; });
  double mass = 0.0;
  for (std::size_t i : order) {
    mass += y.space().mass(i);
    if (mass > eps) return mod[i];
  }
  return 0.0;
}

}  // namespace

AxiomReport check_axioms(const Centralizer& omega, int samples, std::uint64_t seed) {
  if (samples < 1) fail_precondition("check_axioms: samples must be >= 1");
  const KotheSpace& a = omega.domain();
  const MeasureSpace& space = a.space();
  AxiomReport report;
  for (double eps : kEpsLevels) report.m_eps.emplace_back(eps, 0.0);

  for (int k = 0; k < samples; ++k) {
    auto rng = make_rng(seed, kAxiomStream + static_cast<std::uint64_t>(k));
    const double density = k % 2 == 0 ? 1.0 : 0.5;
    const MVec u = sampling::random_vector(rng, space, density);
    const MVec b = random_multiplier(rng, space);
    const double nu = a.norm(u);
    const MVec omega_u = omega(u);

    const MVec comm = omega(b.times(u)) - b.times(omega_u);
    const double bsup = b.sup_norm();
    if (bsup > 0.0) report.rho_hat = std::max(report.rho_hat, a.norm(comm) / (bsup * nu));

    const MVec f = sampling::random_vector(rng, space, density);
    const MVec g = sampling::random_vector(rng, space, 1.5 - density);
    const MVec defect = omega(f + g) - omega(f) - omega(g);
    report.c_hat = std::max(report.c_hat, a.norm(defect) / (a.norm(f) + a.norm(g)));

    const MVec unit = cplx(1.0 / nu) * u;
    const MVec omega_unit = omega(unit);
    for (auto& [eps, level] : report.m_eps) level = std::max(level, level_for(omega_unit, eps));

    std::lognormal_distribution<double> modulus(0.0, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    const cplx alpha = std::polar(modulus(rng), phase(rng));
    const double hom = a.norm(omega(alpha * u) - alpha * omega_u) / (std::abs(alpha) * (a.norm(omega_u) + nu));
    report.homogeneity_defect = std::max(report.homogeneity_defect, hom);
    ++report.samples;
  }
  return report;
}

MVec lift(const Centralizer& omega, const MVec& x) {
  check_same_space(omega.domain().space(), x.space(), "lift");
  if (x.max_imag() > 0.0) fail_precondition("lift: expects a real nonnegative vector");
  const auto xr = x.real();
  double m = 0.0;
  for (std::size_t i = 0; i < xr.size(); ++i) {
    if (xr[i] < 0.0) fail_precondition("lift: expects a real nonnegative vector");
    m += x.space().mass(i) * xr[i];
  }
  if (m == 0.0) return MVec(x.space());
  const auto fac = lozanovsky_factorize(omega.domain(), cplx(1.0 / m) * x);
  return cplx(m) * omega(fac.a).times(fac.a_star);
}

PhiOmegaValue phi_omega(const Centralizer& omega, const MVec& f) {
  const MVec l = lift(omega, f);
  cplx s = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) s += f.space().mass(i) * l[i];
  return {s.real(), std::abs(s.imag())};
}

IndicatorFn phi_omega_indicator(const Centralizer& omega) {
  const MeasureSpace space = omega.domain().space();
  auto eval = [omega, space](std::span<const double> f) {
    return phi_omega(omega, MVec::from_real(space, f)).value;
  };
  // Known closed forms give exact gradients: Phi^Omega = Phi_A for the log
  // modulus and sum mu f g for a symbol. Values still go through the lift.
  switch (omega.kind()) {
    case CentralizerKind::LogModulus: {
      const IndicatorFn phi_a = IndicatorFn::of_space(omega.domain());
      return IndicatorFn::functional_with_gradient(
          space, "phi_omega", eval, [phi_a](std::span<const double> f) { return phi_a.gradient(f); });
    }
    case CentralizerKind::LogSymbol: {
      std::vector<double> grad(space.size());
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = space.mass(i) * (*omega.symbol())[i];
      return IndicatorFn::functional_with_gradient(space, "phi_omega", eval,
                                                   [grad](std::span<const double>) { return grad; });
    }
    case CentralizerKind::Zero:
      return IndicatorFn::functional_with_gradient(
          space, "phi_omega", eval, [](std::span<const double> f) { return std::vector<double>(f.size(), 0.0); });
    default:
      return IndicatorFn::functional(space, "phi_omega", eval);
  }
}

Equivalence fit_equivalence(const Centralizer& omega, const Centralizer& other, int samples, std::uint64_t seed) {
  if (samples < 1) fail_precondition("fit_equivalence: samples must be >= 1");
  check_same_space(omega.domain().space(), other.domain().space(), "fit_equivalence");
  const KotheSpace& a = omega.domain();
  std::vector<MVec> first, second;
  std::vector<double> norms;
  for (int k = 0; k < samples; ++k) {
    auto rng = make_rng(seed, 0xE9000 + static_cast<std::uint64_t>(k));
    const MVec x = sampling::random_vector(rng, a.space(), k % 3 == 2 ? 0.5 : 1.0);
    first.push_back(omega(x));
    second.push_back(other(x));
    norms.push_back(a.norm(x));
  }
  auto residual = [&](double c1) {
    double worst = 0.0;
    for (std::size_t k = 0; k < first.size(); ++k) {
      worst = std::max(worst, a.norm(first[k] - cplx(c1) * second[k]) / norms[k]);
    }
    return worst;
  };

  // Least-squares start, then golden section on the convex sup-ratio.
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < first.size(); ++k) {
    const double w = 1.0 / (norms[k] * norms[k]);
    for (std::size_t i = 0; i < first[k].size(); ++i) {
      const double m = a.space().mass(i);
      num += w * m * (std::conj(second[k][i]) * first[k][i]).real();
      den += w * m * std::norm(second[k][i]);
    }
  }
  Equivalence out;
  out.samples = samples;
  for (std::size_t k = 0; k < first.size(); ++k) out.omega_scale = std::max(out.omega_scale, a.norm(first[k]) / norms[k]);
  if (den == 0.0) {
    out.c2_hat = residual(0.0);
    return out;
  }
  const double center = num / den;
  double radius = std::max(1.0, std::abs(center));
  const double mid = residual(center);
  while (radius < 1e8 && (residual(center - radius) <= mid || residual(center + radius) <= mid)) radius *= 2.0;
  out.c1 = opt::golden_section_minimize(residual, center - radius, center + radius, 1e-10 * (1.0 + radius));
  out.c2_hat = residual(out.c1);
  if (mid <= out.c2_hat) {
    out.c1 = center;
    out.c2_hat = mid;
  }
  return out;
}

SplitResult split_centralizer(const Centralizer& omega, const SplitOptions& options) {
  const double t = options.t;
  if (!(t > 0.0 && t < 1.0)) fail_precondition("split_centralizer: t must lie in (0, 1)");
  const KotheSpace& a = omega.domain();
  const MeasureSpace& space = a.space();
  const IndicatorFn phi_a = IndicatorFn::of_space(a);
  const IndicatorFn phi_omega_fn = phi_omega_indicator(omega);

  SplitResult result;
  double scale = options.initial_scale;
  double worst_violation = -kInf;
  std::string worst_name;
  for (int h = 0; h <= options.max_halvings; ++h, scale *= 0.5) {
    const IndicatorFn phi0 = IndicatorFn::affine({{1.0, phi_a}, {-t * scale, phi_omega_fn}});
    const IndicatorFn phi1 = IndicatorFn::affine({{1.0, phi_a}, {(1.0 - t) * scale, phi_omega_fn}});
    const auto c0 = verify_indicator(phi0, options.check_samples, options.seed);
    const auto c1 = verify_indicator(phi1, options.check_samples, options.seed + 1);
    SplitAttempt attempt;
    attempt.scale = scale;
    attempt.homogeneity_defect = std::max(c0.homogeneity_defect, c1.homogeneity_defect);
    attempt.min_delta_ratio = std::min(c0.min_delta_ratio, c1.min_delta_ratio);
    attempt.max_domination_excess = std::max(c0.max_domination_excess, c1.max_domination_excess);
    attempt.passed = c0.passes(options.check_slack) && c1.passes(options.check_slack);
    result.attempts.push_back(attempt);
    const std::pair<double, const char*> violations[] = {
        {attempt.homogeneity_defect, "homogeneity"},
        {-attempt.min_delta_ratio, "Delta >= 0"},
        {attempt.max_domination_excess, "Delta <= Delta_L1"}};
    for (const auto& [v, what] : violations) {
      if (v > options.check_slack && v > worst_violation) {
        worst_violation = v;
        worst_name = what;
      }
    }
    if (!attempt.passed) continue;

    result.success = true;
    result.scale = scale;
    result.phi0 = phi0;
    result.phi1 = phi1;
    result.a0 = KotheSpace::indicator_induced(phi0);
    result.a1 = KotheSpace::indicator_induced(phi1);
    break;
  }
  if (!result.success) {
    result.failure = "no scale passed the indicator checks; largest violation " + worst_name + " = " +
                     std::to_string(worst_violation);
    return result;
  }

  auto rng = make_rng(options.seed, 0x5917);
  const Couple couple(*result.a0, *result.a1);
  for (int k = 0; k < options.fit_samples; ++k) {
    const auto f = sampling::random_density(rng, space.size(), k % 2 == 0 ? 1.0 : 0.5);
    const double target = phi_a(f);
    const double mixed = (1.0 - t) * (*result.phi0)(f) + t * (*result.phi1)(f);
    result.closure_defect = std::max(result.closure_defect, std::abs(mixed - target) / (1.0 + std::abs(target)));
    const MVec x = sampling::random_vector(rng, space, k % 2 == 0 ? 1.0 : 0.5);
    const double interp = calderon_norm(couple, t, x).norm;
    result.interpolation_defect = std::max(result.interpolation_defect, std::abs(interp / a.norm(x) - 1.0));
  }

  const Centralizer scaled = Centralizer::affine({{result.scale, omega}});
  InterpolationOptions iopt;
  iopt.method = InterpolationMethod::Optimize;
  auto rebuilt = Centralizer::custom(a, "canonical", [couple, t, iopt](const MVec& x) {
    return canonical_omega(couple, t, x, iopt);
  });
  result.equivalence = fit_equivalence(scaled, rebuilt, options.fit_samples, options.seed);
  return result;
}

}  // namespace kothe
