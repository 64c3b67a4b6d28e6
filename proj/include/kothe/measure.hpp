#pragma once

#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "kothe/common.hpp"

namespace kothe {

// Finite discrete measure space: n atoms with strictly positive masses.
// Copies share the mass vector.
class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<double> mu);
  static MeasureSpace uniform(std::size_t n, double mass = 1.0);

  std::size_t size() const { return mu_->size(); }
  double mass(std::size_t i) const { return (*mu_)[i]; }
  std::span<const double> masses() const { return *mu_; }
  double total_mass() const;

  bool operator==(const MeasureSpace& other) const;

 private:
  std::shared_ptr<const std::vector<double>> mu_;
};

void to_json(nlohmann::json& j, const MeasureSpace& m);
MeasureSpace measure_space_from_json(const nlohmann::json& j);

// A complex-valued function on a MeasureSpace (an element of L0).
class MVec {
 public:
  explicit MVec(MeasureSpace space);
  MVec(MeasureSpace space, std::vector<cplx> values);

  static MVec from_real(MeasureSpace space, std::span<const double> values);
  static MVec basis(MeasureSpace space, std::size_t i, cplx value = 1.0);

  const MeasureSpace& space() const { return space_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<cplx>& values() const { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }

  std::vector<double> modulus() const;
  std::vector<double> real() const;
  // Largest |imag part|; used to validate "real valued" inputs.
  double max_imag() const;
  bool is_zero() const;
  double sup_norm() const;

  MVec& operator+=(const MVec& other);
  MVec& operator-=(const MVec& other);
  MVec& operator*=(cplx alpha);

  // Pointwise product.
  MVec times(const MVec& other) const;
  MVec times(std::span<const double> factor) const;

 private:
  void check_same(const MVec& other) const;

  MeasureSpace space_;
  std::vector<cplx> values_;
};

MVec operator+(MVec a, const MVec& b);
MVec operator-(MVec a, const MVec& b);
MVec operator*(cplx alpha, MVec x);

void to_json(nlohmann::json& j, const MVec& x);
MVec mvec_from_json(const MeasureSpace& space, const nlohmann::json& j);

// Parses an exponent that may be spelled "inf".
double exponent_from_json(const nlohmann::json& j);
nlohmann::json exponent_to_json(double p);

void check_same_space(const MeasureSpace& a, const MeasureSpace& b, const char* where);

// (sum mu_i w_i |x_i|^p)^(1/p) for p < inf, max_i w_i |x_i| for p = inf.
double lp_norm(const MVec& x, double p, std::span<const double> w);
double lp_norm(const MVec& x, double p);
// Same on a modulus vector; no dimension checks beyond sizes.
double lp_norm_of_modulus(std::span<const double> modulus, std::span<const double> mu,
                          double p, std::span<const double> w);

// mu{ i : |x_i| > lambda }
double measure_of_superlevel(const MVec& x, double lambda);

// sum mu_i min(1, |x_i - y_i|); metrizes convergence in measure.
double l0_distance(const MVec& x, const MVec& y);

// sum mu_i x_i y_i
cplx pairing(const MVec& x, const MVec& y);

}  // namespace kothe
