#include "kothe/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kothe {

MeasureSpace::MeasureSpace(std::vector<double> mu) {
  if (mu.empty()) fail_precondition("measure space needs at least one atom");
  for (double m : mu) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      fail_precondition("atom masses must be finite and strictly positive");
    }
  }
  mu_ = std::make_shared<const std::vector<double>>(std::move(mu));
}

MeasureSpace MeasureSpace::uniform(std::size_t n, double mass) {
  return MeasureSpace(std::vector<double>(n, mass));
}

double MeasureSpace::total_mass() const {
  double s = 0.0;
  for (double m : *mu_) s += m;
  return s;
}

bool MeasureSpace::operator==(const MeasureSpace& other) const {
  return mu_ == other.mu_ || *mu_ == *other.mu_;
}

void to_json(nlohmann::json& j, const MeasureSpace& m) {
  j = nlohmann::json{{"mu", std::vector<double>(m.masses().begin(), m.masses().end())}};
}

MeasureSpace measure_space_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("mu")) fail_precondition("measure space JSON needs \"mu\"");
  return MeasureSpace(j.at("mu").get<std::vector<double>>());
}

void check_same_space(const MeasureSpace& a, const MeasureSpace& b, const char* where) {
  if (!(a == b)) fail_dimension(std::string(where) + ": vectors live on different measure spaces");
}

MVec::MVec(MeasureSpace space) : space_(std::move(space)), values_(space_.size()) {}

MVec::MVec(MeasureSpace space, std::vector<cplx> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.size()) {
    fail_dimension("vector length " + std::to_string(values_.size()) +
                   " does not match atom count " + std::to_string(space_.size()));
  }
}

MVec MVec::from_real(MeasureSpace space, std::span<const double> values) {
  return MVec(std::move(space), std::vector<cplx>(values.begin(), values.end()));
}

MVec MVec::basis(MeasureSpace space, std::size_t i, cplx value) {
  MVec e(std::move(space));
  if (i >= e.size()) fail_dimension("basis index out of range");
  e[i] = value;
  return e;
}

std::vector<double> MVec::modulus() const {
  std::vector<double> m(values_.size());
  std::transform(values_.begin(), values_.end(), m.begin(), [](cplx z) { return std::abs(z); });
  return m;
}

std::vector<double> MVec::real() const {
  std::vector<double> r(values_.size());
  std::transform(values_.begin(), values_.end(), r.begin(), [](cplx z) { return z.real(); });
  return r;
}

double MVec::max_imag() const {
  double m = 0.0;
  for (cplx z : values_) m = std::max(m, std::abs(z.imag()));
  return m;
}

bool MVec::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](cplx z) { return z == cplx{}; });
}

double MVec::sup_norm() const {
  double m = 0.0;
  for (cplx z : values_) m = std::max(m, std::abs(z));
  return m;
}

void MVec::check_same(const MVec& other) const { check_same_space(space_, other.space_, "MVec"); }

MVec& MVec::operator+=(const MVec& other) {
  check_same(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

MVec& MVec::operator-=(const MVec& other) {
  check_same(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

MVec& MVec::operator*=(cplx alpha) {
  for (cplx& z : values_) z *= alpha;
  return *this;
}

MVec MVec::times(const MVec& other) const {
  check_same(other);
  MVec out(space_);
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = values_[i] * other.values_[i];
  return out;
}

MVec MVec::times(std::span<const double> factor) const {
  if (factor.size() != values_.size()) fail_dimension("pointwise factor has wrong length");
  MVec out(space_);
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = values_[i] * factor[i];
  return out;
}

MVec operator+(MVec a, const MVec& b) { return a += b; }
MVec operator-(MVec a, const MVec& b) { return a -= b; }
MVec operator*(cplx alpha, MVec x) { return x *= alpha; }

void to_json(nlohmann::json& j, const MVec& x) {
  std::vector<double> re(x.size()), im(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
  j = nlohmann::json{{"re", re}, {"im", im}};
}

MVec mvec_from_json(const MeasureSpace& space, const nlohmann::json& j) {
  // A bare array is accepted as a real vector.
  if (j.is_array()) return MVec::from_real(space, j.get<std::vector<double>>());
  if (!j.is_object() || !j.contains("re")) fail_precondition("vector JSON needs \"re\"");
  auto re = j.at("re").get<std::vector<double>>();
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
  if (im.size() != re.size()) fail_dimension("\"re\" and \"im\" lengths differ");
  std::vector<cplx> v(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) v[i] = {re[i], im[i]};
  return MVec(space, std::move(v));
}

double exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInf;
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      fail_precondition("cannot parse exponent \"" + s + "\"");
    }
  }
  return j.get<double>();
}

nlohmann::json exponent_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

double lp_norm_of_modulus(std::span<const double> modulus, std::span<const double> mu,
                          double p, std::span<const double> w) {
  if (modulus.size() != mu.size() || w.size() != mu.size()) fail_dimension("lp_norm: length mismatch");
  if (!(p >= 1.0)) fail_precondition("lp_norm: exponent must lie in [1, inf]");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < modulus.size(); ++i) m = std::max(m, w[i] * modulus[i]);
    return m;
  }
  // Scale by the largest entry so large exponents neither overflow nor underflow.
  double scale = 0.0;
  for (double a : modulus) scale = std::max(scale, a);
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < modulus.size(); ++i) {
    if (modulus[i] > 0.0) s += mu[i] * w[i] * std::pow(modulus[i] / scale, p);
  }
  return scale * std::pow(s, 1.0 / p);
}

double lp_norm(const MVec& x, double p, std::span<const double> w) {
  if (w.size() != x.size()) fail_dimension("lp_norm: weight length mismatch");
  for (double wi : w) {
    if (!(wi > 0.0)) fail_precondition("lp_norm: weights must be strictly positive");
  }
  const auto m = x.modulus();
  return lp_norm_of_modulus(m, x.space().masses(), p, w);
}

double lp_norm(const MVec& x, double p) {
  const std::vector<double> ones(x.size(), 1.0);
  return lp_norm(x, p, ones);
}

double measure_of_superlevel(const MVec& x, double lambda) {
  if (lambda < 0.0) fail_precondition("superlevel threshold must be nonnegative");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > lambda) s += x.space().mass(i);
  }
  return s;
}

double l0_distance(const MVec& x, const MVec& y) {
  check_same_space(x.space(), y.space(), "l0_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x.space().mass(i) * std::min(1.0, std::abs(x[i] - y[i]));
  }
  return s;
}

cplx pairing(const MVec& x, const MVec& y) {
  check_same_space(x.space(), y.space(), "pairing");
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x.space().mass(i) * x[i] * y[i];
  return s;
}

}  // namespace kothe
