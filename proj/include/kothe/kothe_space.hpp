#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kothe/measure.hpp"

namespace kothe {

class IndicatorFn;

enum class SpaceKind { WeightedLp, CalderonProduct, IndicatorInduced, Scaled };

// Parameters of a weighted Lebesgue space. The norm is
// (sum mu_i w_i |x_i|^p)^(1/p), or max_i w_i |x_i| when p = inf.
struct LpParams {
  double p = 2.0;
  std::vector<double> w;

  // Pointwise factor omega with ||x|| = ||omega x||_{L^p(mu)}: w^(1/p), or w when p = inf.
  std::vector<double> multiplier() const;
  double reciprocal_exponent() const;
};

namespace detail {

// Lattice norm oracle. Lattice norms depend on |x| only, so implementations
// receive the modulus.
class SpaceImpl {
 public:
  explicit SpaceImpl(MeasureSpace space) : space_(std::move(space)) {}
  virtual ~SpaceImpl() = default;

  const MeasureSpace& space() const { return space_; }
  virtual SpaceKind kind() const = 0;
  virtual double norm(std::span<const double> modulus) const = 0;
  // d log||x|| / d log|x_i|. Nonnegative and sums to one by homogeneity;
  // a subgradient where the norm is not differentiable.
  virtual std::vector<double> log_gradient(std::span<const double> modulus) const = 0;
  // Both at once; implementations that share work between them override this.
  virtual double norm_with_log_gradient(std::span<const double> modulus, std::vector<double>& grad) const {
    grad = log_gradient(modulus);
    return norm(modulus);
  }
  virtual nlohmann::json descriptor() const = 0;

 private:
  MeasureSpace space_;
};

}  // namespace detail

// Koethe function space on a finite measure space, represented by its norm.
// Cheap to copy; immutable.
class KotheSpace {
 public:
  explicit KotheSpace(std::shared_ptr<const detail::SpaceImpl> impl);

  static KotheSpace weighted_lp(MeasureSpace space, double p, std::vector<double> w = {});
  // [A0, A1]_t realized by optimal lattice factorization (see interpolate.hpp).
  static KotheSpace calderon_product(const KotheSpace& a0, const KotheSpace& a1, double t);
  // Space whose norm is recovered from an indicator functional (see indicator.hpp).
  static KotheSpace indicator_induced(const IndicatorFn& phi);
  // Same space with norm r * ||.||. Weighted Lp spaces stay weighted Lp.
  static KotheSpace scaled(const KotheSpace& a, double r);

  SpaceKind kind() const { return impl_->kind(); }
  const MeasureSpace& space() const { return impl_->space(); }

  double norm(const MVec& x) const;
  double norm_of_modulus(std::span<const double> modulus) const;
  std::vector<double> log_gradient(std::span<const double> modulus) const;
  double norm_with_log_gradient(std::span<const double> modulus, std::vector<double>& grad) const;

  // Non-null iff kind() == WeightedLp.
  const LpParams* lp() const;

  nlohmann::json descriptor() const { return impl_->descriptor(); }
  const detail::SpaceImpl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const detail::SpaceImpl> impl_;
};

// Parses {"kind":"lp","p":2,"w":[...]}, {"kind":"calderon","a0":...,"a1":...,"t":...},
// {"kind":"scaled","r":...,"space":...} and {"kind":"indicator","indicator":...}.
KotheSpace space_from_json(const MeasureSpace& space, const nlohmann::json& j);

// Koethe dual under the mu-weighted pairing, when it has a closed form.
// For l^p(w) this is l^{p'}(w^{1-p'}); p = 1 and p = inf swap with weight 1/w.
std::optional<KotheSpace> dual_space(const KotheSpace& a);

struct DualNormOptions {
  double tolerance = 1e-8;
  int max_iterations = 100000;
  int restarts = 3;
  std::uint64_t seed = 0;
  bool force_numeric = false;
};

// sup { |sum mu_i x_i y_i| : ||x||_A <= 1 }. Closed form for weighted Lp,
// otherwise a log-domain quasi-Newton search over x > 0 whose value is always
// an attained lower bound.
Estimate dual_norm(const KotheSpace& a, const MVec& y, const DualNormOptions& options = {});

// Multiplication by a bounded function.
struct Multiplier {
  MVec b;
  double sup_norm() const { return b.sup_norm(); }
};

MVec multiplier_apply(const Multiplier& m, const MVec& x);

}  // namespace kothe
