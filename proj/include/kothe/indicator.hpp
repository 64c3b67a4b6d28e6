#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kothe/kothe_space.hpp"
#include "kothe/measure.hpp"

namespace kothe {

enum class IndicatorKind { ClosedFormLp, Numeric, Affine, Functional };

namespace detail {
class IndicatorImpl;
}

struct IndicatorTerm;

// Functional Phi on nonnegative vectors, positively homogeneous of degree one.
// The indicator of a space A is Phi_A(f) = sup_{||x||_A <= 1} sum mu_i f_i log|x_i|.
class IndicatorFn {
 public:
  using Term = IndicatorTerm;
  using Evaluator = std::function<double(std::span<const double> f)>;
  using GradientFn = std::function<std::vector<double>(std::span<const double> f)>;

  explicit IndicatorFn(std::shared_ptr<const detail::IndicatorImpl> impl);

  // (1/p) sum mu_i f_i log(f_i / (m w_i)), m = sum mu_i f_i; -sum mu_i f_i log w_i for p = inf.
  static IndicatorFn closed_form_lp(MeasureSpace space, double p, std::vector<double> w = {});
  // Concave maximization over the unit ball of A, even when A has a closed form.
  static IndicatorFn numeric(KotheSpace a);
  // Closed form when A is weighted Lp, numeric otherwise.
  static IndicatorFn of_space(const KotheSpace& a);
  static IndicatorFn affine(std::vector<Term> terms);
  // Arbitrary functional (for example Phi^Omega). `delta` is a known bound on
  // delta(Phi), if any. Gradients are taken by central differences.
  static IndicatorFn functional(MeasureSpace space, std::string name, Evaluator eval,
                                std::optional<double> delta = std::nullopt);
  // Same with an exact gradient.
  static IndicatorFn functional_with_gradient(MeasureSpace space, std::string name, Evaluator eval,
                                              GradientFn gradient, std::optional<double> delta = std::nullopt);

  IndicatorKind kind() const;
  const MeasureSpace& space() const;
  std::string name() const;

  // Validates f >= 0 and finite. Numeric kinds report convergence.
  Estimate evaluate(std::span<const double> f) const;
  double operator()(std::span<const double> f) const { return evaluate(f).value; }
  // Partial derivatives d Phi / d f_i at f (f_i > 0 on the entries that matter).
  std::vector<double> gradient(std::span<const double> f) const;
  // Known upper bound on delta(Phi), when one is available without sampling.
  std::optional<double> delta_bound() const;
  // The space whose indicator this is, when known exactly.
  std::optional<KotheSpace> underlying_space() const;
  nlohmann::json descriptor() const;

 private:
  std::shared_ptr<const detail::IndicatorImpl> impl_;
};

struct IndicatorTerm {
  double coefficient;
  IndicatorFn phi;
};

IndicatorFn indicator_from_json(const MeasureSpace& space, const nlohmann::json& j);

// Phi(f) for a real nonnegative MVec.
double indicator_eval(const IndicatorFn& phi, const MVec& f);

// sum mu_i f_i log x_{|f|,i} for complex f, x_{|f|} the maximizer for |f|.
cplx indicator_extend(const IndicatorFn& phi, const MVec& f);

// Delta_Phi(f,g) = Phi(f) + Phi(g) - Phi(f+g).
double delta_phi(const IndicatorFn& phi, std::span<const double> f, std::span<const double> g);
double delta_phi(const IndicatorFn& phi, const MVec& f, const MVec& g);

struct DeltaEstimate {
  double value = 0.0;  // best ratio Delta / (||f||_1 + ||g||_1) found: a lower bound on delta(Phi)
  std::vector<double> f;
  std::vector<double> g;
  int samples = 0;
};

// Seeded search over random, sparse and disjoint-support pairs followed by a
// multiplicative hill climb around the best pair.
DeltaEstimate estimate_delta(const IndicatorFn& phi, int budget, std::uint64_t seed = 0);

// Maximizer of sum mu_i f_i log x_i over the unit ball of A (zero off supp f).
struct LogPairingMaximizer {
  std::vector<double> x;
  Estimate value;  // sup value, i.e. Phi_A(f)
};
// Closed form for weighted Lp unless `force_numeric`.
LogPairingMaximizer maximize_log_pairing(const KotheSpace& a, std::span<const double> f, bool force_numeric = false);

// f = a a* with a = x_f in the unit sphere of A and a* = f / x_f.
// For ||f||_1 = 1 both factors have unit norm; in general ||a*||_{A*} = ||f||_1.
struct Lozanovsky {
  MVec f;
  MVec a;
  MVec a_star;
  double norm_a = 0.0;
  double norm_a_star = 0.0;
  bool converged = true;
};
Lozanovsky lozanovsky_factorize(const KotheSpace& a, const MVec& f);

// (1 - t) Phi0 + t Phi1.
IndicatorFn indicator_affine(const IndicatorFn& phi0, const IndicatorFn& phi1, double t);

struct InversionOptions {
  double tolerance = 1e-11;
  int max_iterations = 100000;
};

struct InversionResult {
  Estimate norm;
  std::vector<double> density;  // maximizing f on the mu-simplex
};

// exp( sup { sum mu_i f_i log|x_i| - Phi(f) : f >= 0, sum mu_i f_i = 1 } ).
InversionResult invert_indicator(const IndicatorFn& phi, std::span<const double> modulus,
                                 const InversionOptions& options = {});
Estimate norm_from_indicator(const IndicatorFn& phi, const MVec& x, const InversionOptions& options = {});

// Sampled check of the indicator axioms, including Delta_Phi <= Delta_{Phi_{L1}}.
struct IndicatorCheck {
  double homogeneity_defect = 0.0;   // max |Phi(a f) - a Phi(f)| / (1 + |a Phi(f)|)
  double min_delta_ratio = 0.0;      // min Delta / (||f||_1 + ||g||_1)
  double max_delta_ratio = 0.0;      // max Delta / (||f||_1 + ||g||_1)
  double max_domination_excess = 0.0;  // max (Delta_Phi - Delta_L1) / (||f||_1 + ||g||_1)
  int samples = 0;

  bool passes(double slack) const {
    return homogeneity_defect <= slack && min_delta_ratio >= -slack && max_domination_excess <= slack;
  }
};
IndicatorCheck verify_indicator(const IndicatorFn& phi, int samples, std::uint64_t seed = 0);

}  // namespace kothe
