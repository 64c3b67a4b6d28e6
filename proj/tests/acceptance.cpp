// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kothe/centralizer.hpp"
#include "kothe/circle.hpp"
#include "kothe/experiments.hpp"
#include "kothe/indicator.hpp"
#include "kothe/interpolate.hpp"
#include "kothe/sampling.hpp"
#include "oracles.hpp"

using namespace kothe;

namespace {

std::vector<double> masses(const MeasureSpace& s) { return {s.masses().begin(), s.masses().end()}; }

double random_exponent(std::mt19937_64& rng, double top = 8.0) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  if (u < 0.1) return 1.0;
  if (u < 0.2) return kInf;
  return 1.0 + (top - 1.0) * unif(rng);
}

struct RandomCouple {
  MeasureSpace space;
  oracle::LpData s0, s1;
  Couple couple;
};

RandomCouple random_couple(std::uint64_t seed, int k, std::size_t max_n, double top = 8.0) {
  auto rng = make_rng(seed, k);
  const std::size_t n = 1 + static_cast<std::size_t>(k) % max_n;
  MeasureSpace space = sampling::random_measure(rng, n);
  oracle::LpData s0{random_exponent(rng, top), sampling::random_weights(rng, n)};
  oracle::LpData s1{random_exponent(rng, top), sampling::random_weights(rng, n)};
  Couple c(KotheSpace::weighted_lp(space, s0.p, s0.w), KotheSpace::weighted_lp(space, s1.p, s1.w));
  return {space, s0, s1, c};
}

std::vector<double> unit_mass(const MeasureSpace& space, std::vector<double> f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m += space.mass(i) * f[i];
  for (double& v : f) v /= m;
  return f;
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

// 1. Closed-form indicator against the numeric Legendre maximizer.
Outcome criterion1() {
  double worst = 0.0, oracle_gap = 0.0;
  bool converged = true;
  for (int k = 0; k < 100; ++k) {
    auto rng = make_rng(101, k);
    const std::size_t n = 1 + k % 16;
    const MeasureSpace space = sampling::random_measure(rng, n);
    const double p = random_exponent(rng);
    const auto w = sampling::random_weights(rng, n);
    const auto f = sampling::random_density(rng, n, k % 3 == 0 ? 0.5 : 1.0);
    const KotheSpace a = KotheSpace::weighted_lp(space, p, w);
    const double closed = IndicatorFn::closed_form_lp(space, p, w)(f);
    const Estimate numeric = IndicatorFn::numeric(a).evaluate(f);
    converged = converged && numeric.converged;
    worst = std::max(worst, std::abs(closed - numeric.value) / (1.0 + std::abs(closed)));
    oracle_gap = std::max(oracle_gap, std::abs(closed - oracle::phi_lp(masses(space), p, w, f)));
  }
  return {worst <= 1e-6 && converged && oracle_gap <= 1e-10,
          fmt("max |closed-numeric|/(1+|closed|)=%.3g over 100 cases; closed vs oracle %.3g", worst, oracle_gap)};
}

// 2. Indicator of the Calderon product is the affine combination.
Outcome criterion2() {
  double worst = 0.0;
  bool converged = true;
  for (int k = 0; k < 20; ++k) {
    const auto rc = random_couple(102, k, 8);
    const IndicatorFn phi0 = IndicatorFn::of_space(rc.couple.a0());
    const IndicatorFn phi1 = IndicatorFn::of_space(rc.couple.a1());
    for (double t : {0.25, 0.5, 0.75}) {
      const IndicatorFn direct = IndicatorFn::numeric(KotheSpace::calderon_product(rc.couple.a0(), rc.couple.a1(), t));
      auto rng = make_rng(1020 + k, static_cast<std::uint64_t>(t * 100));
      for (int j = 0; j < 100; ++j) {
        const auto f = sampling::random_density(rng, rc.space.size(), j % 4 == 0 ? 0.5 : 1.0);
        const Estimate e = direct.evaluate(f);
        converged = converged && e.converged;
        worst = std::max(worst, std::abs(e.value - ((1.0 - t) * phi0(f) + t * phi1(f))));
      }
    }
  }
  return {worst <= 1e-6 && converged, fmt("max defect %.3g over 20 couples x 3 t x 100 f", worst)};
}

// 3. Lozanovsky identity and factorization residuals.
Outcome criterion3() {
  double identity = 0.0, residual = 0.0, norms = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto rc = random_couple(102, k, 8);
    for (int side = 0; side < 2; ++side) {
      const KotheSpace& a = side == 0 ? rc.couple.a0() : rc.couple.a1();
      const oracle::LpData& data = side == 0 ? rc.s0 : rc.s1;
      const auto dual_data = oracle::dual_lp(data);
      const auto dual = dual_space(a);
      auto rng = make_rng(1030 + k, side);
      for (int j = 0; j < 100; ++j) {
        const auto f = unit_mass(rc.space, sampling::random_density(rng, rc.space.size(), j % 4 == 0 ? 0.5 : 1.0));
        const double l1 = IndicatorFn::closed_form_lp(rc.space, 1.0)(f);
        identity = std::max(identity, std::abs(l1 - IndicatorFn::of_space(a)(f) - IndicatorFn::of_space(*dual)(f)));
        const auto fac = lozanovsky_factorize(a, MVec::from_real(rc.space, f));
        residual = std::max(residual, (fac.f - fac.a.times(fac.a_star)).sup_norm());
        const double na = oracle::lp_norm(masses(rc.space), data.p, data.w, fac.a.modulus());
        const double nas = oracle::lp_norm(masses(rc.space), dual_data.p, dual_data.w, fac.a_star.modulus());
        norms = std::max({norms, std::abs(na - 1.0), std::abs(nas - 1.0)});
      }
    }
  }
  return {identity <= 1e-6 && residual <= 1e-8 && norms <= 1e-6,
          fmt("identity defect %.3g, |f-a a*| %.3g, max norm defect %.3g", identity, residual, norms)};
}

// 4. Delta estimates: the L1 witness reaches log 2 and nothing exceeds it.
Outcome criterion4() {
  const double log2 = std::log(2.0);
  double l1_min = kInf, top = 0.0;
  for (int k = 0; k < 10; ++k) {
    auto rng = make_rng(104, k);
    const MeasureSpace space = sampling::random_measure(rng, 2 + k % 10);
    const auto d = estimate_delta(IndicatorFn::closed_form_lp(space, 1.0), 1000, k);
    l1_min = std::min(l1_min, d.value);
    top = std::max(top, d.value);
  }
  for (int k = 0; k < 20; ++k) {
    const auto rc = random_couple(102, k, 8);
    for (const auto& side : {rc.s0, rc.s1}) {
      const auto d = estimate_delta(IndicatorFn::closed_form_lp(rc.space, side.p, side.w), 500, k);
      top = std::max(top, d.value);
    }
  }
  return {l1_min >= log2 - 1e-3 && top <= log2 + 1e-9,
          fmt("min L1 estimate %.12g (log 2 = %.12g), max over 50 indicators %.12g", l1_min, log2, top)};
}

// 5. Calderon optimizer against the closed-form interpolant.
Outcome criterion5() {
  InterpolationOptions numeric;
  numeric.method = InterpolationMethod::Optimize;
  double worst = 0.0, gap = 0.0;
  bool converged = true;
  for (int k = 0; k < 50; ++k) {
    const auto rc = random_couple(105, k, 8);
    auto rng = make_rng(1050, k);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    const double t = unif(rng);
    const auto st = oracle::interpolate_lp(rc.s0, rc.s1, t);
    for (int j = 0; j < 4; ++j) {
      const MVec x = sampling::random_vector(rng, rc.space, j % 2 == 0 ? 1.0 : 0.6);
      const double expected = oracle::lp_norm(masses(rc.space), st.p, st.w, x.modulus());
      const auto r = calderon_norm(rc.couple, t, x, numeric);
      converged = converged && r.converged;
      worst = std::max(worst, std::abs(r.norm / expected - 1.0));
      gap = std::max(gap, std::abs(r.endpoint0 - r.endpoint1) / r.norm);
    }
  }
  return {worst <= 1e-4 && gap <= 1e-6 && converged,
          fmt("max relative error %.3g, max relative endpoint gap %.3g over 50 couples x 4 x", worst, gap)};
}

// 6. Finite differences of the optimal family converge at first order.
Outcome criterion6() {
  InterpolationOptions numeric;
  numeric.method = InterpolationMethod::Optimize;
  double k_max = 0.0, slope_min = kInf, slope_max = 0.0;
  const std::vector<double> hs{1e-3, 1e-4, 1e-5};
  for (int k = 0; k < 20; ++k) {
    const auto rc = random_couple(106, k, 8);
    auto rng = make_rng(1060, k);
    const double t = 0.5;
    const MVec x = sampling::random_vector(rng, rc.space);
    const auto r = calderon_norm(rc.couple, t, x, numeric);
    const MVec omega = r.factorization.derivative();
    const KotheSpace at = interpolation_space(rc.couple, t);
    std::vector<double> err;
    for (double h : hs) err.push_back(at.norm(cplx(1.0 / h) * (r.factorization.family(t + h) - x) - omega) / at.norm(x));
    for (std::size_t i = 0; i < hs.size(); ++i) k_max = std::max(k_max, err[i] / hs[i]);
    // Cases where Omega x is essentially zero have nothing to measure.
    if (err[0] < 1e-12) continue;
    for (std::size_t i = 1; i < hs.size(); ++i) {
      const double slope = std::log(err[i - 1] / err[i]) / std::log(hs[i - 1] / hs[i]);
      slope_min = std::min(slope_min, slope);
      slope_max = std::max(slope_max, slope);
    }
  }
  return {slope_min >= 0.9 && slope_max <= 1.1 && std::isfinite(k_max),
          fmt("error <= K h with K=%.3g; observed orders in [%.4f, %.4f]", k_max, slope_min, slope_max)};
}

// 7. Rescaling the ends shifts Omega by log(r0/r1) and the norm by r0^(1-t) r1^t.
Outcome criterion7() {
  double shift = 0.0, norm = 0.0;
  for (int k = 0; k < 30; ++k) {
    const auto rc = random_couple(107, k, 8);
    auto rng = make_rng(1070, k);
    std::uniform_real_distribution<double> unif(0.1, 10.0), tt(0.05, 0.95);
    const double r0 = unif(rng), r1 = unif(rng), t = tt(rng);
    const MVec x = sampling::random_vector(rng, rc.space);
    const MVec d = scaling_shift(rc.couple, t, r0, r1, x);
    shift = std::max(shift, (d - cplx(std::log(r0 / r1)) * x).sup_norm() / x.sup_norm());
    const Couple scaled(KotheSpace::scaled(rc.couple.a0(), r0), KotheSpace::scaled(rc.couple.a1(), r1));
    const double lhs = calderon_norm(scaled, t, x).norm;
    const double rhs = std::pow(r0, 1.0 - t) * std::pow(r1, t) * calderon_norm(rc.couple, t, x).norm;
    norm = std::max(norm, std::abs(lhs / rhs - 1.0));
  }
  return {shift <= 1e-8 && norm <= 1e-8, fmt("max Omega shift defect %.3g, max norm ratio defect %.3g", shift, norm)};
}

// 8. The lift of a canonical Omega does not depend on t.
Outcome criterion8() {
  InterpolationOptions numeric;
  numeric.method = InterpolationMethod::Optimize;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    auto rng = make_rng(108, k);
    const std::size_t n = 2 + k % 7;
    const MeasureSpace space = sampling::random_measure(rng, n);
    std::uniform_real_distribution<double> unif(1.0, 8.0);
    const Couple c(KotheSpace::weighted_lp(space, unif(rng), sampling::random_weights(rng, n)),
                   KotheSpace::weighted_lp(space, unif(rng), sampling::random_weights(rng, n)));
    const Centralizer w1 = Centralizer::canonical(c, 1.0 / 3.0, numeric);
    const Centralizer w2 = Centralizer::canonical(c, 2.0 / 3.0, numeric);
    for (int j = 0; j < 5; ++j) {
      const MVec f = MVec::from_real(space, sampling::random_density(rng, n, j % 2 == 0 ? 1.0 : 0.6));
      worst = std::max(worst, (lift(w1, f) - lift(w2, f)).sup_norm());
    }
  }
  return {worst <= 1e-6, fmt("max pointwise |lift_{1/3} - lift_{2/3}| = %.3g over 20 couples x 5 f", worst)};
}

// 9. Splitting log-modulus on l2 reproduces l2 and the centralizer.
Outcome criterion9() {
  bool pass = true;
  std::string detail;
  for (std::size_t n : {8, 16}) {
    auto rng = make_rng(109, n);
    const MeasureSpace space = sampling::random_measure(rng, n);
    const KotheSpace l2 = KotheSpace::weighted_lp(space, 2.0);
    SplitOptions options;
    options.seed = n;
    const auto s = split_centralizer(Centralizer::log_modulus(l2), options);
    if (!s.success) {
      pass = false;
      detail += "n=" + std::to_string(n) + ": split failed (" + s.failure + "); ";
      continue;
    }
    // Independent check of the interpolation norm on fresh vectors.
    const Couple c(*s.a0, *s.a1);
    double norm_gap = 0.0;
    for (int j = 0; j < 20; ++j) {
      const MVec x = sampling::random_vector(rng, space);
      norm_gap = std::max(norm_gap, std::abs(calderon_norm(c, 0.5, x).norm / l2.norm(x) - 1.0));
    }
    const double rel = s.equivalence.c2_hat / (std::abs(s.equivalence.c1) * s.equivalence.omega_scale);
    pass = pass && norm_gap <= 1e-3 && rel <= 0.05;
    detail += fmt("n=%.0f: c=%.3g norm gap %.3g, c2/(c1 scale)=%.3g; ", static_cast<double>(n), s.scale, norm_gap, rel);
  }
  return {pass, detail};
}

// 10. Wolff gluing: the solved coefficients satisfy both three-term identities.
Outcome criterion10() {
  double worst = 0.0, coeff = 0.0;
  bool converged = true;
  for (int k = 0; k < 20; ++k) {
    auto rng = make_rng(110, k);
    const std::size_t n = 2 + k % 7;
    const MeasureSpace space = sampling::random_measure(rng, n);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    const double th1 = unif(rng), th2 = unif(rng);
    const KotheSpace x1 = KotheSpace::weighted_lp(space, random_exponent(rng), sampling::random_weights(rng, n));
    const KotheSpace x4 = KotheSpace::weighted_lp(space, random_exponent(rng), sampling::random_weights(rng, n));
    const auto [a1, a2] = wolff_coefficients(th1, th2);
    const auto [e1, e2] = oracle::wolff(th1, th2);
    coeff = std::max({coeff, std::abs(a1 - e1), std::abs(a2 - e2)});
    const IndicatorFn phi1 = IndicatorFn::of_space(x1), phi4 = IndicatorFn::of_space(x4);
    const IndicatorFn phi2 = IndicatorFn::numeric(KotheSpace::calderon_product(x1, x4, a1));
    const IndicatorFn phi3 = IndicatorFn::numeric(KotheSpace::calderon_product(x1, x4, a2));
    for (int j = 0; j < 20; ++j) {
      const auto f = sampling::random_density(rng, n);
      const Estimate v2 = phi2.evaluate(f), v3 = phi3.evaluate(f);
      converged = converged && v2.converged && v3.converged;
      worst = std::max(worst, std::abs(v2.value - ((1.0 - th1) * phi1(f) + th1 * v3.value)));
      worst = std::max(worst, std::abs(v3.value - ((1.0 - th2) * v2.value + th2 * phi4(f))));
    }
  }
  return {worst <= 1e-6 && coeff <= 1e-12 && converged,
          fmt("max identity defect %.3g over 20 tuples x 20 f; coefficient error %.3g", worst, coeff)};
}

// 11. Circle commutators stay bounded while the raw map grows.
Outcome criterion11() {
  bool pass = true;
  std::string detail;
  for (int which = 1; which <= 3; ++which) {
    const auto rows = circle::commutator_experiment(which, {256, 8192}, 50, 11);
    const double at_small = rows[49].max_ratio, at_large = rows[99].max_ratio;
    pass = pass && at_large <= 1.25 * at_small;
    detail += fmt("Omega%.0f %.4g -> %.4g; ", which, at_small, at_large);
  }
  const double raw_small = circle::adversarial_raw_ratio(256), raw_large = circle::adversarial_raw_ratio(8192);
  const double growth = raw_large / raw_small;
  pass = pass && growth >= 2.0;
  detail += fmt("raw ||Omega1 f||/||f|| %.4g -> %.4g (x%.4g, need x2)", raw_small, raw_large, growth);
  return {pass, detail};
}

// 12. Norms recovered from indicators.
Outcome criterion12() {
  double worst = 0.0;
  bool converged = true;
  for (int k = 0; k < 100; ++k) {
    auto rng = make_rng(112, k);
    const std::size_t n = 1 + k % 16;
    const MeasureSpace space = sampling::random_measure(rng, n);
    const double p = random_exponent(rng);
    const auto w = sampling::random_weights(rng, n);
    const MVec x = sampling::random_vector(rng, space, k % 3 == 0 ? 0.6 : 1.0);
    const Estimate e = norm_from_indicator(IndicatorFn::closed_form_lp(space, p, w), x);
    converged = converged && e.converged;
    worst = std::max(worst, std::abs(e.value / oracle::lp_norm(masses(space), p, w, x.modulus()) - 1.0));
  }
  return {worst <= 1e-3 && converged, fmt("max relative error %.3g over 100 x", worst)};
}

// 13. Identical config and seed reproduce the CSV body.
Outcome criterion13() {
  using experiments::ExperimentConfig;
  std::vector<ExperimentConfig> configs(3);
  configs[0].command = "circle";
  configs[0].params = {{"omega", 3}, {"n", "256,512"}, {"trials", 10}};
  configs[1].command = "interpolate";
  configs[1].params = {{"p0", 1.5}, {"p1", "inf"}, {"weighted", true}, {"samples", 10}};
  configs[2].command = "twisted";
  configs[2].action = "upper";
  configs[2].params = {{"n", "8,16"}, {"samples", 5}};
  bool same = true;
  std::size_t bytes = 0;
  for (auto& cfg : configs) {
    cfg.seed = 2024;
    const std::string a = experiments::run(cfg).table.to_csv();
    const std::string b = experiments::run(cfg).table.to_csv();
    same = same && a == b;
    bytes += a.size();
  }
  return {same, fmt("3 configs, %.0f CSV bytes compared", static_cast<double>(bytes))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"indicator closed form vs numeric", criterion1},
      {"linearity of the indicator along the scale", criterion2},
      {"Lozanovsky identity and factorization", criterion3},
      {"delta witness for L1", criterion4},
      {"Calderon optimizer vs closed form", criterion5},
      {"canonical Omega finite difference", criterion6},
      {"scaling law", criterion7},
      {"t-independence of the lift", criterion8},
      {"reconstruction from a centralizer", criterion9},
      {"Wolff gluing", criterion10},
      {"circle commutators", criterion11},
      {"norm from indicator round trip", criterion12},
      {"determinism", criterion13},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
