#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kothe/centralizer.hpp"
#include "kothe/interpolate.hpp"

namespace kothe {

// Element (u, v) of a twisted sum.
struct TwistedElement {
  MVec u;
  MVec v;

  TwistedElement& operator+=(const TwistedElement& other);
};

TwistedElement operator+(TwistedElement a, const TwistedElement& b);
TwistedElement operator*(cplx alpha, const TwistedElement& e);

enum class OperatorKind { Identity, Multiplier, Dense };

class LinearOperator {
 public:
  static LinearOperator identity(MeasureSpace space);
  static LinearOperator multiplier(const MVec& b);
  static LinearOperator dense(MeasureSpace space, Eigen::MatrixXcd matrix);
  // Convex combination of `terms` random sub-permutation matrices. With equal
  // atom masses this is a contraction on every unweighted l^p.
  static LinearOperator random_substochastic(MeasureSpace space, std::uint64_t seed, int terms = 4);

  OperatorKind kind() const { return kind_; }
  const MeasureSpace& space() const { return space_; }
  MVec apply(const MVec& x) const;
  MVec operator()(const MVec& x) const { return apply(x); }
  // Upper bound on the operator norm when one is known by construction.
  std::optional<double> norm_bound() const { return norm_bound_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

 private:
  LinearOperator(OperatorKind kind, MeasureSpace space);

  OperatorKind kind_;
  MeasureSpace space_;
  Eigen::MatrixXcd matrix_;
  std::vector<cplx> symbol_;
  std::optional<double> norm_bound_;
};

// Sampled lower bound on sup ||T x||_A / ||x||_A.
double operator_norm_estimate(const LinearOperator& op, const KotheSpace& a, int samples, std::uint64_t seed = 0);

// ||u||_A + ||v - Omega u||_A with A the domain of Omega.
double twisted_quasinorm(const Centralizer& omega, const TwistedElement& e);

struct QuasiTriangle {
  double k_hat = 0.0;       // max ||e1 + e2|| / (||e1|| + ||e2||)
  double defect_max = 0.0;  // max ||Omega(u1+u2) - Omega u1 - Omega u2||_A / (||e1|| + ||e2||) on the same pairs
  int samples = 0;
};
QuasiTriangle quasi_triangle_constant(const Centralizer& omega, int samples, std::uint64_t seed = 0);

struct DerivedBound {
  double value = 0.0;       // upper bound on the derived-space norm of (u, v)
  double base = 0.0;        // max(||a||_{A0}, ||b||_{A1}) for the chosen factorization of u
  double correction = 0.0;  // kappa ||v - u s||_{A_t}
  double kappa = 0.0;       // sup of the conformal factor over the strip, 2 sin(pi t) / pi
  std::vector<double> s;
};

// Upper bound on inf { ||F|| : F(t) = u, F'(t) = v } using the families
// F(z) = sgn(u) a^(1-z) b^z + phi(z) H(z), where a^(1-t) b^t = |u| with
// s = log(b/a), H is the optimal family for r = v - u s, and phi is the
// conformal factor with phi(t) = 0, phi'(t) = 1 and |phi| <= kappa on the strip.
DerivedBound derived_norm_upper(const Couple& c, double t, const TwistedElement& e,
                                const InterpolationOptions& options = {});

// ||Omega(T v) - T(Omega v)||_A / ||v||_A for one v.
double commutator_ratio(const LinearOperator& op, const Centralizer& omega, const MVec& v);
// Sampled max of commutator_ratio.
double commutator_bound(const LinearOperator& op, const Centralizer& omega, int samples, std::uint64_t seed = 0);

}  // namespace kothe
