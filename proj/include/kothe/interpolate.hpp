#pragma once

#include <optional>
#include <vector>

#include "kothe/indicator.hpp"
#include "kothe/kothe_space.hpp"

namespace kothe {

// A compatible pair of lattices on one measure space.
class Couple {
 public:
  Couple(KotheSpace a0, KotheSpace a1);

  const KotheSpace& a0() const { return a0_; }
  const KotheSpace& a1() const { return a1_; }
  const MeasureSpace& space() const { return a0_.space(); }

 private:
  KotheSpace a0_;
  KotheSpace a1_;
};

// Lattice factorization |x| = u^(1-t) v^t with s = log(v/u) on supp(x).
// It determines the analytic family F(z) = sgn(x) u^(1-z) v^z = sgn(x) u e^(z s),
// whose value at t is x and whose derivative at t is x s.
struct Factorization {
  MVec x;
  double t = 0.5;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> s;

  MVec family(cplx z) const;
  MVec derivative() const;
};

enum class InterpolationMethod {
  // Closed form for weighted-Lp couples, optimizer otherwise.
  Auto,
  Optimize,
};

struct InterpolationOptions {
  InterpolationMethod method = InterpolationMethod::Auto;
  double tolerance = 1e-12;
  int max_iterations = 100000;
  // Additional seeded random starting points; the objective is convex, so
  // the default start s = 0 is normally enough.
  int restarts = 0;
  std::uint64_t seed = 0;
};

struct CalderonResult {
  double norm = 0.0;
  Factorization factorization;
  double endpoint0 = 0.0;  // ||u||_{A0}
  double endpoint1 = 0.0;  // ||v||_{A1}
  int iterations = 0;
  bool converged = true;
};

// ||x||_{[A0,A1]_t}: minimizes max(||x e^{-ts}||_{A0}, ||x e^{(1-t)s}||_{A1}) over
// real s on supp(x). Internally the shift-invariant convex function
// (1-t) log ||.||_{A0} + t log ||.||_{A1} is minimized and the minimizer is then
// shifted so that both endpoint norms agree.
CalderonResult calderon_norm(const Couple& c, double t, const MVec& x, const InterpolationOptions& options = {});

// Omega(A0,A1,t) x = x s, zero off supp(x).
MVec canonical_omega(const Couple& c, double t, const MVec& x, const InterpolationOptions& options = {});

// [l^{p0}(w0), l^{p1}(w1)]_t = l^{p_t}(w_t) with 1/p_t = (1-t)/p0 + t/p1 and
// w_t^{1/p_t} = (w0^{1/p0})^{1-t} (w1^{1/p1})^t. nullopt unless both ends are weighted Lp.
std::optional<KotheSpace> closed_form_interpolant(const Couple& c, double t);

// The interpolation space as a KotheSpace: the closed form when available,
// otherwise a Calderon product.
KotheSpace interpolation_space(const Couple& c, double t);

// Omega_B x - Omega_A x where B_j = r_j A_j. Equals log(r0/r1) x.
MVec scaling_shift(const Couple& c, double t, double r0, double r1, const MVec& x,
                   const InterpolationOptions& options = {});

struct WolffGlue {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  // Phi2 = (1-alpha1) Phi1 + alpha1 Phi4, Phi3 = (1-alpha2) Phi1 + alpha2 Phi4.
  IndicatorFn phi2;
  IndicatorFn phi3;
};

// Solves the linear system that glues Phi2 = (1-theta1) Phi1 + theta1 Phi3 and
// Phi3 = (1-theta2) Phi2 + theta2 Phi4 into a single scale from Phi1 to Phi4.
WolffGlue wolff_glue(const IndicatorFn& phi1, const IndicatorFn& phi4, double theta1, double theta2);

// Coefficients only.
std::pair<double, double> wolff_coefficients(double theta1, double theta2);

}  // namespace kothe
