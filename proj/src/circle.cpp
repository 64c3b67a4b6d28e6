#include "kothe/circle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <fftw3.h>

#include "kothe/centralizer.hpp"

namespace kothe::circle {

namespace {

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// Unnormalized DFT; sign = FFTW_FORWARD or FFTW_BACKWARD.
std::vector<cplx> dft(const std::vector<cplx>& in, int sign) {
  const int n = static_cast<int>(in.size());
  std::vector<cplx> out(in.size());
  std::vector<cplx> buffer(in);
  auto* src = reinterpret_cast<fftw_complex*>(buffer.data());
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  const std::unique_ptr<fftw_plan_s, decltype(&fftw_destroy_plan)> plan(
      fftw_plan_dft_1d(n, src, dst, sign, FFTW_ESTIMATE), &fftw_destroy_plan);
  fftw_execute(plan.get());
  return out;
}

MeasureSpace arc_length(std::size_t n) {
  if (!power_of_two(n)) fail_precondition("circle grid size must be a power of two >= 2");
  return MeasureSpace::uniform(n, 2.0 * M_PI / static_cast<double>(n));
}

}  // namespace

CircleGrid::CircleGrid(std::size_t n) : n_(n), space_(arc_length(n)) {}

cplx CircleGrid::node(std::size_t k) const {
  return std::polar(1.0, 2.0 * M_PI * (static_cast<double>(k) + 0.5) / static_cast<double>(n_));
}

// Samples of e^{i m theta} at theta_k = 2 pi (k + 1/2) / N are
// e^{i pi m / N} e^{2 pi i m k / N}; the half-step phase is undone here.
std::vector<cplx> fourier_coefficients(const MVec& f) {
  const std::size_t n = f.size();
  if (!power_of_two(n)) fail_precondition("grid function length must be a power of two >= 2");
  auto c = dft(f.values(), FFTW_FORWARD);
  for (std::size_t m = 0; m < n; ++m) {
    const double freq = m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
    c[m] *= std::polar(1.0 / static_cast<double>(n), -M_PI * freq / static_cast<double>(n));
  }
  return c;
}

MVec from_fourier_coefficients(const CircleGrid& grid, const std::vector<cplx>& coefficients) {
  const std::size_t n = grid.size();
  if (coefficients.size() != n) fail_dimension("coefficient count does not match grid");
  std::vector<cplx> c(coefficients);
  for (std::size_t m = 0; m < n; ++m) {
    const double freq = m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
    c[m] *= std::polar(1.0, M_PI * freq / static_cast<double>(n));
  }
  return MVec(grid.space(), dft(c, FFTW_BACKWARD));
}

MVec SzegoProjection::apply(const MVec& f) const {
  check_same_space(grid_.space(), f.space(), "project_hardy");
  const std::size_t n = grid_.size();
  auto c = dft(f.values(), FFTW_FORWARD);
  for (std::size_t m = n / 2; m < n; ++m) c[m] = 0.0;
  auto out = dft(c, FFTW_BACKWARD);
  for (auto& v : out) v /= static_cast<double>(n);
  return MVec(grid_.space(), std::move(out));
}

MVec omega1(const MVec& f, const CircleGrid& grid) {
  check_same_space(grid.space(), f.space(), "omega1");
  MVec out(f.space());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k] * std::log(1.0 - grid.node(k));
  return out;
}

MVec omega2(const MVec& f, const CircleGrid& grid) {
  check_same_space(grid.space(), f.space(), "omega2");
  const double nrm = lp_norm(f, 2.0);
  if (nrm == 0.0) fail_precondition("omega2: f must be nonzero");
  MVec out(f.space());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double m = std::abs(f[k]);
    if (m > 0.0) out[k] = f[k] * std::log(m / nrm);
  }
  return out;
}

MVec omega3(const MVec& f, const CircleGrid& grid) {
  check_same_space(grid.space(), f.space(), "omega3");
  return rank_log_apply(f);
}

MVec apply_omega(int which, const MVec& f, const CircleGrid& grid) {
  switch (which) {
    case 1:
      return omega1(f, grid);
    case 2:
      return omega2(f, grid);
    case 3:
      return omega3(f, grid);
    default:
      fail_precondition("omega must be 1, 2 or 3");
  }
}

MVec random_trig_poly(const CircleGrid& grid, std::uint64_t seed, std::uint64_t stream) {
  auto rng = make_rng(seed, stream);
  const std::size_t n = grid.size();
  const auto max_degree = static_cast<long>(std::max<std::size_t>(n / 4, 1));
  const long degree = std::uniform_int_distribution<long>(1, max_degree)(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> c(n, 0.0);
  for (long m = -degree; m <= degree; ++m) {
    const std::size_t slot = m >= 0 ? static_cast<std::size_t>(m) : n - static_cast<std::size_t>(-m);
    c[slot] = cplx(normal(rng), normal(rng));
  }
  MVec f = from_fourier_coefficients(grid, c);
  f *= 1.0 / lp_norm(f, 2.0);
  return f;
}

std::vector<CommutatorRow> commutator_experiment(int which, const std::vector<std::size_t>& sizes, int trials,
                                                 std::uint64_t seed) {
  if (which < 1 || which > 3) fail_precondition("omega must be 1, 2 or 3");
  if (trials < 1) fail_precondition("trials must be >= 1");
  std::vector<CommutatorRow> rows;
  for (std::size_t n : sizes) {
    const CircleGrid grid(n);
    const SzegoProjection p(grid);
    double running = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      const std::uint64_t stream = (static_cast<std::uint64_t>(which) << 48) ^ (static_cast<std::uint64_t>(n) << 16) ^
                                   static_cast<std::uint64_t>(trial);
      const MVec f = random_trig_poly(grid, seed, stream);
      const MVec comm = apply_omega(which, p(f), grid) - p(apply_omega(which, f, grid));
      const double ratio = lp_norm(comm, 2.0) / lp_norm(f, 2.0);
      running = std::max(running, ratio);
      rows.push_back({which, n, trial, ratio, running});
    }
  }
  return rows;
}

double adversarial_raw_ratio(std::size_t n) {
  const CircleGrid grid(n);
  const MVec f = MVec::basis(grid.space(), grid.node_nearest_one());
  return lp_norm(omega1(f, grid), 2.0) / lp_norm(f, 2.0);
}

}  // namespace kothe::circle
