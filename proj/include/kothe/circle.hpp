#pragma once

#include <cstdint>
#include <vector>

#include "kothe/measure.hpp"

namespace kothe::circle {

// Midpoint grid tau_k = exp(2 pi i (k + 1/2) / N) with arc-length masses 2 pi / N.
// N must be a power of two.
class CircleGrid {
 public:
  explicit CircleGrid(std::size_t n);

  std::size_t size() const { return n_; }
  cplx node(std::size_t k) const;
  const MeasureSpace& space() const { return space_; }
  // Index of the node closest to 1.
  std::size_t node_nearest_one() const { return 0; }

 private:
  std::size_t n_;
  MeasureSpace space_;
};

// Orthogonal projection onto the span of the nonnegative frequencies
// 0, ..., N/2 - 1. The Nyquist bin is dropped, which keeps P idempotent and
// self-adjoint on the grid.
class SzegoProjection {
 public:
  explicit SzegoProjection(const CircleGrid& grid) : grid_(grid) {}

  MVec apply(const MVec& f) const;
  MVec operator()(const MVec& f) const { return apply(f); }
  const CircleGrid& grid() const { return grid_; }

 private:
  CircleGrid grid_;
};

// Discrete Fourier coefficients c_m, m = 0..N-1 in standard layout, of the
// trigonometric polynomial sum_m c_m e^{i m theta} matching f on the grid.
std::vector<cplx> fourier_coefficients(const MVec& f);
MVec from_fourier_coefficients(const CircleGrid& grid, const std::vector<cplx>& coefficients);

// f(tau) log(1 - tau).
MVec omega1(const MVec& f, const CircleGrid& grid);
// f(tau) log(|f(tau)| / ||f||_2).
MVec omega2(const MVec& f, const CircleGrid& grid);
// f(tau) log mu{ |f| > |f(tau)| }, zero where that measure vanishes.
MVec omega3(const MVec& f, const CircleGrid& grid);
MVec apply_omega(int which, const MVec& f, const CircleGrid& grid);

// Random trigonometric polynomial of degree <= N/4 with unit L2 norm.
MVec random_trig_poly(const CircleGrid& grid, std::uint64_t seed, std::uint64_t stream);

struct CommutatorRow {
  int omega = 1;
  std::size_t n = 0;
  int trial = 0;
  double ratio = 0.0;      // ||[Omega, P] f||_2 / ||f||_2
  double max_ratio = 0.0;  // running max over trials at this N
};

std::vector<CommutatorRow> commutator_experiment(int which, const std::vector<std::size_t>& sizes, int trials,
                                                 std::uint64_t seed);

// ||Omega_1 f||_2 / ||f||_2 for f the unit spike at the node nearest 1,
// which attains sup_f ||Omega_1 f|| / ||f|| on the grid.
double adversarial_raw_ratio(std::size_t n);

}  // namespace kothe::circle
