#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kothe/indicator.hpp"
#include "kothe/interpolate.hpp"
#include "kothe/kothe_space.hpp"

namespace kothe {

enum class CentralizerKind { Canonical, LogModulus, LogSymbol, RankLog, Affine, Zero, Custom };

// Homogeneous map Omega : A -> L0 on a fixed domain space A.
class Centralizer {
 public:
  using Map = std::function<MVec(const MVec&)>;

  // Omega(A0, A1, t) on the interpolation space [A0, A1]_t.
  static Centralizer canonical(const Couple& c, double t, InterpolationOptions options = {});
  // x log(|x| / ||x||_A).
  static Centralizer log_modulus(KotheSpace a);
  // x g for a fixed real symbol g.
  static Centralizer log_symbol(KotheSpace a, std::vector<double> g);
  // x_i log mu{ |x| > |x_i| }, zero where that measure vanishes.
  static Centralizer rank_log(KotheSpace a);
  static Centralizer zero(KotheSpace a);
  // sum_k c_k Omega_k; all terms must share a domain.
  static Centralizer affine(std::vector<std::pair<double, Centralizer>> terms);
  static Centralizer custom(KotheSpace a, std::string name, Map map);

  CentralizerKind kind() const;
  const KotheSpace& domain() const;
  const std::string& name() const;
  MVec apply(const MVec& x) const;
  MVec operator()(const MVec& x) const { return apply(x); }

  // Non-null for LogSymbol.
  const std::vector<double>* symbol() const;
  // Set for Canonical.
  std::optional<std::pair<Couple, double>> couple() const;
  nlohmann::json descriptor() const;

  struct State;

 private:
  explicit Centralizer(std::shared_ptr<const State> state);
  std::shared_ptr<const State> state_;
};

// x_i log mu{ |x| > |x_i| } on the measure space of x; atoms with equal modulus
// share a value and atoms of largest modulus map to 0.
MVec rank_log_apply(const MVec& x);

// Parses {"kind":"logmod"|"rank"|"zero"} on a given domain, {"kind":"symbol","g":[...]}
// and {"kind":"canonical","a0":...,"a1":...,"t":...}.
Centralizer centralizer_from_json(const KotheSpace& domain, const nlohmann::json& j);

struct AxiomReport {
  double rho_hat = 0.0;  // max ||Omega(b u) - b Omega(u)||_A / (||b||_inf ||u||_A)
  double c_hat = 0.0;    // max ||Omega(f+g) - Omega f - Omega g||_A / (||f||_A + ||g||_A)
  // (eps, M): over the sample, mu{ |Omega x| > M } <= eps for every x in the unit ball.
  std::vector<std::pair<double, double>> m_eps;
  double homogeneity_defect = 0.0;  // relative, over complex scalars
  int samples = 0;
};

// Sample k is drawn from its own stream, so the estimates are maxima over a
// prefix of a fixed sequence and grow monotonically with `samples`.
AxiomReport check_axioms(const Centralizer& omega, int samples, std::uint64_t seed = 0);

// Omega^[1](x) = ||x||_1 Omega(a) a* where x / ||x||_1 = a a* is the
// Lozanovsky factorization in the domain of Omega.
MVec lift(const Centralizer& omega, const MVec& x);

struct PhiOmegaValue {
  double value = 0.0;
  double imaginary_residual = 0.0;
};
// sum_i mu_i Omega^[1](f)_i.
PhiOmegaValue phi_omega(const Centralizer& omega, const MVec& f);
// Phi^Omega as an indicator-like functional.
IndicatorFn phi_omega_indicator(const Centralizer& omega);

struct Equivalence {
  double c1 = 0.0;
  double c2_hat = 0.0;  // max ||Omega x - c1 Omega' x||_A / ||x||_A
  double omega_scale = 0.0;  // max ||Omega x||_A / ||x||_A
  int samples = 0;
};

// Minimizes the worst-case residual ratio over c1. Deterministic in seed.
Equivalence fit_equivalence(const Centralizer& omega, const Centralizer& other, int samples,
                            std::uint64_t seed = 0);

struct SplitOptions {
  double t = 0.5;
  double initial_scale = 1.0;
  int max_halvings = 12;
  int check_samples = 200;
  double check_slack = 1e-9;
  int fit_samples = 40;
  std::uint64_t seed = 0;
};

struct SplitAttempt {
  double scale = 0.0;
  double homogeneity_defect = 0.0;
  double min_delta_ratio = 0.0;
  double max_domination_excess = 0.0;
  bool passed = false;
};

struct SplitResult {
  bool success = false;
  double scale = 0.0;  // the c of the accepted split
  std::optional<KotheSpace> a0;
  std::optional<KotheSpace> a1;
  std::optional<IndicatorFn> phi0;
  std::optional<IndicatorFn> phi1;
  std::vector<SplitAttempt> attempts;
  double closure_defect = 0.0;        // max |(1-t)Phi0 + t Phi1 - Phi_A| / (1 + |Phi_A|)
  double interpolation_defect = 0.0;  // max | ||x||_{[A0,A1]_t} / ||x||_A - 1 |
  Equivalence equivalence;            // c * Omega against the canonical Omega of (A0, A1)
  std::string failure;                // largest violated constraint when success is false
};

// Builds Phi0 = Phi_A - t c Phi^Omega and Phi1 = Phi_A + (1-t) c Phi^Omega for
// c = initial_scale, initial_scale / 2, ... and accepts the first c whose
// sampled indicator checks pass. The new spaces are indicator induced.
SplitResult split_centralizer(const Centralizer& omega, const SplitOptions& options = {});

}  // namespace kothe
