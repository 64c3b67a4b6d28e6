#include "kothe/twisted.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kothe/optimize.hpp"
#include "kothe/sampling.hpp"

namespace kothe {

TwistedElement& TwistedElement::operator+=(const TwistedElement& other) {
  u += other.u;
  v += other.v;
  return *this;
}

TwistedElement operator+(TwistedElement a, const TwistedElement& b) { return a += b; }

TwistedElement operator*(cplx alpha, const TwistedElement& e) { return {alpha * e.u, alpha * e.v}; }

LinearOperator::LinearOperator(OperatorKind kind, MeasureSpace space) : kind_(kind), space_(std::move(space)) {}

LinearOperator LinearOperator::identity(MeasureSpace space) {
  LinearOperator op(OperatorKind::Identity, std::move(space));
  op.norm_bound_ = 1.0;
  return op;
}

LinearOperator LinearOperator::multiplier(const MVec& b) {
  LinearOperator op(OperatorKind::Multiplier, b.space());
  op.symbol_ = b.values();
  op.norm_bound_ = b.sup_norm();
  return op;
}

LinearOperator LinearOperator::dense(MeasureSpace space, Eigen::MatrixXcd matrix) {
  const auto n = static_cast<Eigen::Index>(space.size());
  if (matrix.rows() != n || matrix.cols() != n) fail_dimension("dense operator: matrix shape mismatch");
  LinearOperator op(OperatorKind::Dense, std::move(space));
  op.matrix_ = std::move(matrix);
  return op;
}

LinearOperator LinearOperator::random_substochastic(MeasureSpace space, std::uint64_t seed, int terms) {
  if (terms < 1) fail_precondition("random_substochastic: terms must be >= 1");
  const std::size_t n = space.size();
  auto rng = make_rng(seed, 0x5AB5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> weights(static_cast<std::size_t>(terms));
  for (double& w : weights) w = unif(rng) + 1e-3;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::size_t> perm(n);
  for (int k = 0; k < terms; ++k) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      // Dropping entries keeps the matrix substochastic.
      if (unif(rng) < 0.2) continue;
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i])) += weights[k] / total;
    }
  }
  const bool uniform = std::all_of(space.masses().begin(), space.masses().end(),
                                   [&](double v) { return v == space.mass(0); });
  LinearOperator op = dense(std::move(space), std::move(m));
  if (uniform) op.norm_bound_ = 1.0;
  return op;
}

MVec LinearOperator::apply(const MVec& x) const {
  check_same_space(space_, x.space(), "operator");
  switch (kind_) {
    case OperatorKind::Identity:
      return x;
    case OperatorKind::Multiplier:
      return MVec(space_, symbol_).times(x);
    case OperatorKind::Dense: {
      const Eigen::Map<const Eigen::VectorXcd> in(x.values().data(), static_cast<Eigen::Index>(x.size()));
      const Eigen::VectorXcd out = matrix_ * in;
      return MVec(space_, std::vector<cplx>(out.data(), out.data() + out.size()));
    }
  }
  return x;
}

double operator_norm_estimate(const LinearOperator& op, const KotheSpace& a, int samples, std::uint64_t seed) {
  check_same_space(op.space(), a.space(), "operator_norm_estimate");
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    auto rng = make_rng(seed, 0x0B0000 + static_cast<std::uint64_t>(k));
    const MVec x = sampling::random_vector(rng, a.space(), k % 2 == 0 ? 1.0 : 0.3);
    best = std::max(best, a.norm(op(x)) / a.norm(x));
  }
  // Basis vectors are extreme for many lattice norms.
  for (std::size_t i = 0; i < a.space().size(); ++i) {
    const MVec e = MVec::basis(a.space(), i);
    best = std::max(best, a.norm(op(e)) / a.norm(e));
  }
  return best;
}

double twisted_quasinorm(const Centralizer& omega, const TwistedElement& e) {
  const KotheSpace& a = omega.domain();
  check_same_space(a.space(), e.u.space(), "twisted_quasinorm");
  check_same_space(a.space(), e.v.space(), "twisted_quasinorm");
  return a.norm(e.u) + a.norm(e.v - omega(e.u));
}

QuasiTriangle quasi_triangle_constant(const Centralizer& omega, int samples, std::uint64_t seed) {
  if (samples < 1) fail_precondition("quasi_triangle_constant: samples must be >= 1");
  const KotheSpace& a = omega.domain();
  QuasiTriangle out;
  for (int k = 0; k < samples; ++k) {
    auto rng = make_rng(seed, 0x7A0000 + static_cast<std::uint64_t>(k));
    const double density = k % 2 == 0 ? 1.0 : 0.5;
    const MVec u1 = sampling::random_vector(rng, a.space(), density);
    const MVec u2 = sampling::random_vector(rng, a.space(), 1.5 - density);
    // v near Omega u makes the twisting term dominate.
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const MVec v1 = omega(u1) + cplx(unif(rng)) * sampling::random_vector(rng, a.space());
    const MVec v2 = omega(u2) + cplx(unif(rng)) * sampling::random_vector(rng, a.space());
    const TwistedElement e1{u1, v1}, e2{u2, v2};
    const double sum = twisted_quasinorm(omega, e1) + twisted_quasinorm(omega, e2);
    out.k_hat = std::max(out.k_hat, twisted_quasinorm(omega, e1 + e2) / sum);
    out.defect_max = std::max(out.defect_max, a.norm(omega(u1 + u2) - omega(u1) - omega(u2)) / sum);
    ++out.samples;
  }
  return out;
}

DerivedBound derived_norm_upper(const Couple& c, double t, const TwistedElement& e,
                                const InterpolationOptions& options) {
  if (!(t > 0.0 && t < 1.0)) fail_precondition("derived_norm_upper: t must lie in (0, 1)");
  check_same_space(c.space(), e.u.space(), "derived_norm_upper");
  check_same_space(c.space(), e.v.space(), "derived_norm_upper");
  const std::size_t n = e.u.size();
  DerivedBound out;
  out.kappa = 2.0 * std::sin(M_PI * t) / M_PI;
  const auto mod = e.u.modulus();

  const auto base = calderon_norm(c, t, e.u, options);
  std::vector<double> s0 = base.factorization.s;
  std::vector<double> dir(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (mod[i] > 0.0) dir[i] = (e.v[i] / e.u[i]).real() - s0[i];
  }

  auto evaluate = [&](double lambda, DerivedBound* record) {
    std::vector<double> s(n), a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = s0[i] + lambda * dir[i];
      a[i] = mod[i] * std::exp(-t * s[i]);
      b[i] = mod[i] * std::exp((1.0 - t) * s[i]);
    }
    const double head = std::max(c.a0().norm_of_modulus(a), c.a1().norm_of_modulus(b));
    const double tail = out.kappa * calderon_norm(c, t, e.v - e.u.times(s), options).norm;
    if (record != nullptr) {
      record->base = head;
      record->correction = tail;
      record->value = head + tail;
      record->s = std::move(s);
    }
    return head + tail;
  };

  double lambda = 0.0;
  if (std::any_of(dir.begin(), dir.end(), [](double d) { return d != 0.0; })) {
    lambda = opt::golden_section_minimize([&](double l) { return evaluate(l, nullptr); }, -1.0, 2.0, 1e-9);
    if (evaluate(0.0, nullptr) <= evaluate(lambda, nullptr)) lambda = 0.0;
  }
  evaluate(lambda, &out);
  return out;
}

double commutator_ratio(const LinearOperator& op, const Centralizer& omega, const MVec& v) {
  const KotheSpace& a = omega.domain();
  return a.norm(omega(op(v)) - op(omega(v))) / a.norm(v);
}

double commutator_bound(const LinearOperator& op, const Centralizer& omega, int samples, std::uint64_t seed) {
  if (samples < 1) fail_precondition("commutator_bound: samples must be >= 1");
  check_same_space(op.space(), omega.domain().space(), "commutator_bound");
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    auto rng = make_rng(seed, 0xC00000 + static_cast<std::uint64_t>(k));
    const MVec v = sampling::random_vector(rng, op.space(), k % 2 == 0 ? 1.0 : 0.4);
    best = std::max(best, commutator_ratio(op, omega, v));
  }
  return best;
}

}  // namespace kothe
