#include "kothe/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "kothe/centralizer.hpp"
#include "kothe/circle.hpp"
#include "kothe/indicator.hpp"
#include "kothe/interpolate.hpp"
#include "kothe/sampling.hpp"
#include "kothe/twisted.hpp"

namespace kothe::experiments {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

json ExperimentConfig::to_json() const {
  return {{"command", command}, {"action", action}, {"params", params}, {"seed", seed},
          {"tol", tolerance},   {"out", out},       {"json", json}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.command = j.at("command").get<std::string>();
  c.action = j.value("action", std::string());
  c.params = j.value("params", json::object());
  c.seed = j.value("seed", std::uint64_t{0});
  c.tolerance = j.value("tol", 1e-6);
  c.out = j.value("out", std::string());
  c.json = j.value("json", false);
  return c;
}

json Report::to_json() const {
  json j = {{"metadata", metadata}, {"results", results}, {"ok", ok}};
  if (!table.header.empty()) {
    j["table"] = {{"header", table.header}, {"rows", table.rows.size()}};
  }
  return j;
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& command_table() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
      {"indicator", {"eval", "delta", "factorize", "invert", "linearity"}},
      {"interpolate", {"norm"}},
      {"omega", {"fd"}},
      {"centralizer", {"check", "lift", "split", "equiv"}},
      {"twisted", {"norm", "upper", "commutator"}},
      {"circle", {"commutator"}},
      {"wolff", {"glue"}},
  };
  return table;
}

namespace {

// Parameter access with defaults.
class Params {
 public:
  explicit Params(const json& j) : j_(j) {}

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  double num(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    return exponent_from_json(j_.at(key));
  }
  int integer(const char* key, int fallback) const {
    if (!has(key)) return fallback;
    const double v = num(key, fallback);
    if (v != std::floor(v) || v < 0) fail_precondition(std::string("parameter ") + key + " must be a nonnegative integer");
    return static_cast<int>(v);
  }
  std::string str(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    return v.is_string() ? v.get<std::string>() : v.dump();
  }
  bool flag(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (v.is_boolean()) return v.get<bool>();
    const std::string s = str(key, "");
    return s == "1" || s == "true" || s == "yes";
  }
  // Accepts a number, a JSON array or a comma separated string.
  std::vector<double> list(const char* key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (v.is_array()) {
      std::vector<double> out;
      for (const auto& e : v) out.push_back(exponent_from_json(e));
      return out;
    }
    if (v.is_number()) return {v.get<double>()};
    std::vector<double> out;
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        out.push_back(exponent_from_json(json(item)));
      } catch (const json::exception&) {
        fail_precondition(std::string("parameter ") + key + ": cannot parse \"" + item + "\"");
      }
    }
    return out;
  }
  const json& raw(const char* key) const { return j_.at(key); }

 private:
  const json& j_;
};

json estimate(double value, int samples, double tolerance) {
  return {{"value", value}, {"samples", samples}, {"tolerance", tolerance}};
}

void require_converged(bool converged, const std::string& what) {
  if (!converged) throw KotheError(ErrorKind::NonConvergence, what + ": optimizer did not converge");
}

// "l2", "l1", "linf", "l3.5", "lp:3", or a JSON space descriptor.
KotheSpace parse_space(const MeasureSpace& space, const std::string& text, std::vector<double> w = {}) {
  if (!text.empty() && text.front() == '{') return space_from_json(space, json::parse(text));
  std::string p = text;
  if (p.rfind("lp:", 0) == 0) {
    p = p.substr(3);
  } else if (p.size() > 1 && p.front() == 'l') {
    p = p.substr(1);
  } else {
    fail_precondition("cannot parse space \"" + text + "\"");
  }
  double exponent = 0.0;
  try {
    exponent = exponent_from_json(p == "inf" ? json("inf") : json(std::stod(p)));
  } catch (const std::exception&) {
    fail_precondition("cannot parse space \"" + text + "\"");
  }
  return KotheSpace::weighted_lp(space, exponent, std::move(w));
}

std::vector<double> maybe_weights(const Params& params, std::mt19937_64& rng, std::size_t n) {
  return params.flag("weighted", false) ? sampling::random_weights(rng, n) : std::vector<double>{};
}

Couple lp_couple(const Params& params, const MeasureSpace& space, std::mt19937_64& rng) {
  const double p0 = params.num("p0", 1.0);
  const double p1 = params.num("p1", kInf);
  auto w0 = maybe_weights(params, rng, space.size());
  auto w1 = maybe_weights(params, rng, space.size());
  return Couple(KotheSpace::weighted_lp(space, p0, std::move(w0)), KotheSpace::weighted_lp(space, p1, std::move(w1)));
}

Centralizer parse_centralizer(const std::string& name, const KotheSpace& domain, const Params& params,
                              std::mt19937_64& rng) {
  if (name == "logmod") return Centralizer::log_modulus(domain);
  if (name == "rank") return Centralizer::rank_log(domain);
  if (name == "zero") return Centralizer::zero(domain);
  if (name == "symbol") {
    const double scale = params.num("g_scale", 0.1);
    std::uniform_real_distribution<double> unif(-scale, scale);
    std::vector<double> g(domain.space().size());
    for (double& v : g) v = unif(rng);
    return Centralizer::log_symbol(domain, std::move(g));
  }
  if (name == "canonical") return Centralizer::canonical(lp_couple(params, domain.space(), rng), params.num("t", 0.5));
  if (!name.empty() && name.front() == '{') return centralizer_from_json(domain, json::parse(name));
  fail_precondition("unknown centralizer \"" + name + "\"");
}

// The centralizer's own domain for canonical kinds, otherwise --space.
Centralizer centralizer_with_domain(const Params& params, const std::string& key, const std::string& fallback,
                                    std::mt19937_64& rng) {
  const MeasureSpace space = MeasureSpace::uniform(static_cast<std::size_t>(params.integer("n", 8)));
  const KotheSpace domain = parse_space(space, params.str("space", "l2"));
  return parse_centralizer(params.str(key.c_str(), fallback), domain, params, rng);
}

std::vector<std::size_t> sizes(const Params& params, std::vector<double> fallback) {
  std::vector<std::size_t> out;
  for (double v : params.list("n", std::move(fallback))) {
    if (!(v >= 1.0) || v != std::floor(v)) fail_precondition("sizes must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// ---- indicator -------------------------------------------------------------

Report indicator_command(const ExperimentConfig& cfg, const Params& params) {
  Report r;
  auto rng = make_rng(cfg.seed, 1);
  const std::size_t n = static_cast<std::size_t>(params.integer("n", 8));
  const MeasureSpace space = MeasureSpace::uniform(n);
  const int samples = params.integer("samples", 20);

  if (cfg.action == "eval") {
    const KotheSpace a = parse_space(space, params.str("space", "l2"), maybe_weights(params, rng, n));
    std::vector<double> f = params.has("f") ? params.raw("f").get<std::vector<double>>()
                                            : sampling::random_density(rng, n);
    const IndicatorFn phi = IndicatorFn::of_space(a);
    const Estimate closed = phi.evaluate(f);
    const Estimate numeric = IndicatorFn::numeric(a).evaluate(f);
    require_converged(numeric.converged, "indicator eval");
    r.results = {{"value", closed.value},
                 {"numeric", estimate(numeric.value, 1, cfg.tolerance)},
                 {"defect", std::abs(closed.value - numeric.value)},
                 {"f", f}};
    r.ok = std::abs(closed.value - numeric.value) <= cfg.tolerance * (1.0 + std::abs(closed.value));
  } else if (cfg.action == "delta") {
    const double p = params.num("p", 1.0);
    const IndicatorFn phi = IndicatorFn::closed_form_lp(space, p, maybe_weights(params, rng, n));
    const int budget = params.integer("budget", 2000);
    const auto d = estimate_delta(phi, budget, cfg.seed);
    r.results = {{"delta_hat", estimate(d.value, d.samples, cfg.tolerance)},
                 {"bound", *phi.delta_bound()},
                 {"log2", std::log(2.0)}};
    r.ok = d.value <= std::log(2.0) + 1e-9;
  } else if (cfg.action == "factorize") {
    const KotheSpace a = parse_space(space, params.str("space", "l2"), maybe_weights(params, rng, n));
    const auto dual = dual_space(a);
    const IndicatorFn l1 = IndicatorFn::closed_form_lp(space, 1.0);
    double residual = 0.0, norm_defect = 0.0, identity_defect = 0.0;
    for (int k = 0; k < samples; ++k) {
      auto f = sampling::random_density(rng, n);
      double m = 0.0;
      for (double v : f) m += v;
      for (double& v : f) v /= m;
      const MVec fv = MVec::from_real(space, f);
      const auto fac = lozanovsky_factorize(a, fv);
      require_converged(fac.converged, "factorize");
      residual = std::max(residual, (fv - fac.a.times(fac.a_star)).sup_norm());
      norm_defect = std::max({norm_defect, std::abs(fac.norm_a - 1.0), std::abs(fac.norm_a_star - 1.0)});
      if (dual) {
        const double lhs = l1(f);
        const double rhs = IndicatorFn::of_space(a)(f) + IndicatorFn::of_space(*dual)(f);
        identity_defect = std::max(identity_defect, std::abs(lhs - rhs));
      }
    }
    r.results = {{"residual", estimate(residual, samples, cfg.tolerance)},
                 {"norm_defect", estimate(norm_defect, samples, cfg.tolerance)}};
    if (dual) r.results["identity_defect"] = estimate(identity_defect, samples, cfg.tolerance);
    r.ok = norm_defect <= cfg.tolerance && identity_defect <= cfg.tolerance;
  } else if (cfg.action == "invert") {
    const KotheSpace a = parse_space(space, params.str("space", "l2"), maybe_weights(params, rng, n));
    const IndicatorFn phi = IndicatorFn::of_space(a);
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
      const MVec x = sampling::random_vector(rng, space, k % 2 == 0 ? 1.0 : 0.5);
      const Estimate e = norm_from_indicator(phi, x);
      require_converged(e.converged, "invert");
      worst = std::max(worst, std::abs(e.value / a.norm(x) - 1.0));
    }
    r.results = {{"max_relative_error", estimate(worst, samples, cfg.tolerance)}};
    r.ok = worst <= cfg.tolerance;
  } else {  // linearity
    const double t = params.num("t", 0.5);
    const Couple c = lp_couple(params, space, rng);
    const IndicatorFn mixed = indicator_affine(IndicatorFn::of_space(c.a0()), IndicatorFn::of_space(c.a1()), t);
    const IndicatorFn direct = IndicatorFn::numeric(KotheSpace::calderon_product(c.a0(), c.a1(), t));
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
      const auto f = sampling::random_density(rng, n, k % 2 == 0 ? 1.0 : 0.5);
      const Estimate e = direct.evaluate(f);
      require_converged(e.converged, "linearity");
      worst = std::max(worst, std::abs(e.value - mixed(f)) / (1.0 + std::abs(e.value)));
    }
    r.results = {{"max_defect", estimate(worst, samples, cfg.tolerance)}, {"t", t}};
    r.ok = worst <= cfg.tolerance;
  }
  return r;
}

// ---- interpolate / omega -----------------------------------------------------

Report interpolate_command(const ExperimentConfig& cfg, const Params& params) {
  Report r;
  auto rng = make_rng(cfg.seed, 2);
  const std::size_t n = static_cast<std::size_t>(params.integer("n", 8));
  const MeasureSpace space = MeasureSpace::uniform(n);
  const int samples = params.integer("samples", 10);
  const double t = params.num("t", 0.5);
  const Couple c = lp_couple(params, space, rng);
  InterpolationOptions numeric;
  numeric.method = InterpolationMethod::Optimize;
  r.table.header = {"sample", "closed", "optimized", "rel_diff", "endpoint_gap"};
  double worst = 0.0, gap = 0.0;
  for (int k = 0; k < samples; ++k) {
    const MVec x = sampling::random_vector(rng, space);
    const auto closed = calderon_norm(c, t, x);
    const auto opt = calderon_norm(c, t, x, numeric);
    require_converged(opt.converged, "interpolate");
    const double rel = std::abs(opt.norm / closed.norm - 1.0);
    const double g = std::abs(opt.endpoint0 - opt.endpoint1) / opt.norm;
    worst = std::max(worst, rel);
    gap = std::max(gap, g);
    r.table.rows.push_back(
        {std::to_string(k), format_double(closed.norm), format_double(opt.norm), format_double(rel), format_double(g)});
  }
  r.results = {{"max_rel_diff", estimate(worst, samples, cfg.tolerance)},
               {"max_endpoint_gap", estimate(gap, samples, cfg.tolerance)}};
  r.ok = worst <= cfg.tolerance;
  return r;
}

Report omega_command(const ExperimentConfig& cfg, const Params& params) {
  Report r;
  auto rng = make_rng(cfg.seed, 3);
  const std::size_t n = static_cast<std::size_t>(params.integer("n", 8));
  const MeasureSpace space = MeasureSpace::uniform(n);
  const double t = params.num("t", 0.5);
  const Couple c = lp_couple(params, space, rng);
  InterpolationOptions options;
  if (params.str("method", "auto") == "optimize") options.method = InterpolationMethod::Optimize;
  const MVec x = sampling::random_vector(rng, space);
  const auto res = calderon_norm(c, t, x, options);
  require_converged(res.converged, "omega");
  const MVec omega = res.factorization.derivative();
  const KotheSpace at = interpolation_space(c, t);
  r.table.header = {"h", "error"};
  std::vector<double> errors;
  const auto steps = params.list("h", {1e-3, 1e-4, 1e-5});
  for (double h : steps) {
    const MVec diff = cplx(1.0 / h) * (res.factorization.family(t + h) - x);
    errors.push_back(at.norm(diff - omega));
    r.table.rows.push_back({format_double(h), format_double(errors.back())});
  }
  json orders = json::array();
  for (std::size_t i = 1; i < errors.size(); ++i) {
    orders.push_back(std::log(errors[i - 1] / errors[i]) / std::log(steps[i - 1] / steps[i]));
  }
  r.results = {{"omega_norm", at.norm(omega)}, {"errors", errors}, {"orders", orders}};
  r.ok = true;
  return r;
}

// ---- centralizer -------------------------------------------------------------

json m_eps_json(const AxiomReport& a) {
  json out = json::array();
  for (const auto& [eps, level] : a.m_eps) out.push_back({{"eps", eps}, {"M", level}});
  return out;
}

Report centralizer_command(const ExperimentConfig& cfg, const Params& params) {
  Report r;
  auto rng = make_rng(cfg.seed, 4);
  const int samples = params.integer("samples", 40);
  const Centralizer omega = centralizer_with_domain(params, "omega", "logmod", rng);
  const MeasureSpace& space = omega.domain().space();

  if (cfg.action == "check") {
    const auto a = check_axioms(omega, samples, cfg.seed);
    r.results = {{"rho_hat", estimate(a.rho_hat, a.samples, cfg.tolerance)},
                 {"c_hat", estimate(a.c_hat, a.samples, cfg.tolerance)},
                 {"m_eps", m_eps_json(a)},
                 {"defects", {{"homogeneity", a.homogeneity_defect}}}};
    r.ok = a.homogeneity_defect <= 1e-12;
  } else if (cfg.action == "lift") {
    const auto x = params.has("x") ? params.raw("x").get<std::vector<double>>()
                                   : sampling::random_density(rng, space.size());
    const MVec xv = MVec::from_real(space, x);
    const MVec l = lift(omega, xv);
    const auto phi = phi_omega(omega, xv);
    r.table.header = {"index", "x", "lift_re", "lift_im"};
    for (std::size_t i = 0; i < l.size(); ++i) {
      r.table.rows.push_back({std::to_string(i), format_double(x[i]), format_double(l[i].real()),
                              format_double(l[i].imag())});
    }
    r.results = {{"phi_omega", phi.value}, {"defects", {{"imaginary_residual", phi.imaginary_residual}}}};
    r.ok = phi.imaginary_residual <= 1e-8;
  } else if (cfg.action == "split") {
    SplitOptions options;
    options.t = params.num("t", 0.5);
    options.seed = cfg.seed;
    options.check_samples = params.integer("check_samples", options.check_samples);
    options.fit_samples = params.integer("samples", options.fit_samples);
    const auto s = split_centralizer(omega, options);
    json attempts = json::array();
    for (const auto& a : s.attempts) {
      attempts.push_back({{"c", a.scale},
                          {"passed", a.passed},
                          {"homogeneity_defect", a.homogeneity_defect},
                          {"min_delta_ratio", a.min_delta_ratio},
                          {"max_domination_excess", a.max_domination_excess}});
    }
    r.results = {{"success", s.success}, {"attempts", attempts}};
    if (s.success) {
      r.results["scale"] = s.scale;
      r.results["c1"] = s.equivalence.c1;
      r.results["c2_hat"] = estimate(s.equivalence.c2_hat, s.equivalence.samples, cfg.tolerance);
      r.results["omega_scale"] = s.equivalence.omega_scale;
      r.results["defects"] = {{"closure", s.closure_defect}, {"interpolation", s.interpolation_defect}};
      r.results["phi0"] = s.phi0->descriptor();
      r.results["phi1"] = s.phi1->descriptor();
    } else {
      r.results["failure"] = s.failure;
    }
    r.ok = s.success;
  } else {  // equiv
    const Centralizer other = parse_centralizer(params.str("against", "canonical"), omega.domain(), params, rng);
    const auto e = fit_equivalence(omega, other, samples, cfg.seed);
    r.results = {{"c1", e.c1}, {"c2_hat", estimate(e.c2_hat, e.samples, cfg.tolerance)}, {"omega_scale", e.omega_scale}};
    r.ok = true;
  }
  return r;
}

// ---- twisted ----------------------------------------------------------------

Report twisted_command(const ExperimentConfig& cfg, const Params& params) {
  Report r;
  const int samples = params.integer("samples", 50);
  const double t = params.num("t", 0.5);
  r.table.header = {"n", "estimate", "seed"};
  json per_n = json::array();
  for (std::size_t n : sizes(params, {8, 32, 128})) {
    auto rng = make_rng(cfg.seed, 5 + n);
    const MeasureSpace space = MeasureSpace::uniform(n);
    double value = 0.0;
    if (cfg.action == "norm") {
      const KotheSpace domain = parse_space(space, params.str("space", "l2"));
      const Centralizer omega = parse_centralizer(params.str("omega", "logmod"), domain, params, rng);
      const auto q = quasi_triangle_constant(omega, samples, cfg.seed);
      value = q.k_hat;
      per_n.push_back({{"n", n}, {"k_hat", estimate(q.k_hat, q.samples, cfg.tolerance)}, {"defect_max", q.defect_max}});
      r.ok = r.ok && q.k_hat <= 1.0 + q.defect_max + 1e-12;
    } else if (cfg.action == "upper") {
      const Couple c = lp_couple(params, space, rng);
      const Centralizer omega = Centralizer::canonical(c, t);
      double lo = kInf, hi = 0.0;
      for (int k = 0; k < samples; ++k) {
        const MVec u = sampling::random_vector(rng, space);
        const MVec v = sampling::random_vector(rng, space);
        const TwistedElement e{u, v};
        const double ratio = derived_norm_upper(c, t, e).value / twisted_quasinorm(omega, e);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      value = std::max(hi, 1.0 / lo);
      per_n.push_back({{"n", n}, {"kappa_hat", estimate(value, samples, cfg.tolerance)}, {"min_ratio", lo}, {"max_ratio", hi}});
    } else {  // commutator
      const Couple c(KotheSpace::weighted_lp(space, 1.0), KotheSpace::weighted_lp(space, kInf));
      const Centralizer omega = Centralizer::canonical(c, t);
      const auto op = LinearOperator::random_substochastic(space, cfg.seed + n);
      value = commutator_bound(op, omega, samples, cfg.seed);
      per_n.push_back({{"n", n}, {"c_hat_T", estimate(value, samples, cfg.tolerance)}});
    }
    r.table.rows.push_back({std::to_string(n), format_double(value), std::to_string(cfg.seed)});
  }
  r.results = {{"sweep", per_n}};
  return r;
}

// ---- circle -------------------------------------------------------------------

Report circle_command(const ExperimentConfig& cfg, const Params& params) {
  Report r;
  const int which = params.integer("omega", 1);
  const int trials = params.integer("trials", 50);
  const auto ns = sizes(params, {256, 512, 1024, 2048, 4096, 8192});
  const auto rows = circle::commutator_experiment(which, ns, trials, cfg.seed);
  r.table.header = {"omega", "N", "trial", "ratio", "max_ratio"};
  json per_n = json::array();
  for (const auto& row : rows) {
    r.table.rows.push_back({std::to_string(row.omega), std::to_string(row.n), std::to_string(row.trial),
                            format_double(row.ratio), format_double(row.max_ratio)});
    if (row.trial == trials - 1) {
      per_n.push_back({{"N", row.n}, {"max_ratio", estimate(row.max_ratio, trials, cfg.tolerance)}});
    }
  }
  const double growth = per_n.back()["max_ratio"]["value"].get<double>() / per_n.front()["max_ratio"]["value"].get<double>();
  r.results = {{"sweep", per_n}, {"growth", growth}};
  if (which == 1) {
    const double raw_growth = circle::adversarial_raw_ratio(ns.back()) / circle::adversarial_raw_ratio(ns.front());
    r.results["raw_growth"] = raw_growth;
  }
  r.ok = growth <= 1.25;
  return r;
}

// ---- wolff ---------------------------------------------------------------------

Report wolff_command(const ExperimentConfig& cfg, const Params& params) {
  Report r;
  auto rng = make_rng(cfg.seed, 6);
  const std::size_t n = static_cast<std::size_t>(params.integer("n", 8));
  const MeasureSpace space = MeasureSpace::uniform(n);
  const double theta1 = params.num("theta1", 0.5);
  const double theta2 = params.num("theta2", 0.5);
  const int samples = params.integer("samples", 50);
  const KotheSpace x1 = KotheSpace::weighted_lp(space, params.num("p1", 1.0), sampling::random_weights(rng, n));
  const KotheSpace x4 = KotheSpace::weighted_lp(space, params.num("p4", kInf), sampling::random_weights(rng, n));
  const auto glue = wolff_glue(IndicatorFn::of_space(x1), IndicatorFn::of_space(x4), theta1, theta2);
  // The glued spaces are Calderon products of the ends; their indicators are
  // recomputed numerically and must satisfy both three-term identities.
  const IndicatorFn phi1 = IndicatorFn::of_space(x1);
  const IndicatorFn phi4 = IndicatorFn::of_space(x4);
  const IndicatorFn phi2 = IndicatorFn::numeric(KotheSpace::calderon_product(x1, x4, glue.alpha1));
  const IndicatorFn phi3 = IndicatorFn::numeric(KotheSpace::calderon_product(x1, x4, glue.alpha2));
  double defect = 0.0;
  for (int k = 0; k < samples; ++k) {
    const auto f = sampling::random_density(rng, n);
    const Estimate e2 = phi2.evaluate(f), e3 = phi3.evaluate(f);
    require_converged(e2.converged && e3.converged, "wolff");
    const double p1 = phi1(f), p2 = e2.value, p3 = e3.value, p4 = phi4(f);
    const double scale = 1.0 + std::abs(p1) + std::abs(p4);
    defect = std::max(defect, std::abs(p2 - ((1.0 - theta1) * p1 + theta1 * p3)) / scale);
    defect = std::max(defect, std::abs(p3 - ((1.0 - theta2) * p2 + theta2 * p4)) / scale);
  }
  r.results = {{"alpha1", glue.alpha1}, {"alpha2", glue.alpha2}, {"defect", estimate(defect, samples, cfg.tolerance)}};
  r.ok = defect <= cfg.tolerance;
  return r;
}

}  // namespace

Report run(const ExperimentConfig& config) {
  const auto& table = command_table();
  const auto cmd = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == config.command; });
  if (cmd == table.end()) fail_precondition("unknown command \"" + config.command + "\"");
  ExperimentConfig cfg = config;
  if (cfg.action.empty()) cfg.action = cmd->second.front();
  if (std::find(cmd->second.begin(), cmd->second.end(), cfg.action) == cmd->second.end()) {
    fail_precondition("unknown action \"" + cfg.action + "\" for " + cfg.command);
  }

  const auto start = std::chrono::steady_clock::now();
  const Params params(cfg.params);
  Report r;
  if (cfg.command == "indicator") {
    r = indicator_command(cfg, params);
  } else if (cfg.command == "interpolate") {
    r = interpolate_command(cfg, params);
  } else if (cfg.command == "omega") {
    r = omega_command(cfg, params);
  } else if (cfg.command == "centralizer") {
    r = centralizer_command(cfg, params);
  } else if (cfg.command == "twisted") {
    r = twisted_command(cfg, params);
  } else if (cfg.command == "circle") {
    r = circle_command(cfg, params);
  } else {
    r = wolff_command(cfg, params);
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.metadata = {{"command", cfg.command}, {"action", cfg.action}, {"seed", cfg.seed},   {"tol", cfg.tolerance},
                {"params", cfg.params},   {"version", kVersion},  {"wall_time_ms", ms}};
  return r;
}

}  // namespace kothe::experiments
