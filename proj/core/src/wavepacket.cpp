#include "catpacket/wavepacket.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "catpacket/errors.hpp"

namespace catpacket {

Dispersion Dispersion::quadratic(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ArgumentError("quadratic dispersion requires mass > 0");
  }
  return Dispersion(Kind::Quadratic, mass);
}

Dispersion Dispersion::linear(double speed) {
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw ArgumentError("linear dispersion requires speed > 0");
  }
  return Dispersion(Kind::Linear, speed);
}

double Dispersion::mass() const {
  if (kind_ != Kind::Quadratic) throw UnsupportedModelError("linear dispersion has no mass");
  return parameter_;
}

double Dispersion::speed() const {
  if (kind_ != Kind::Linear) throw UnsupportedModelError("quadratic dispersion has no fixed speed");
  return parameter_;
}

namespace {

void require_linear_domain(const Dispersion& disp, double p) {
  if (disp.kind() == Dispersion::Kind::Linear && !(p > 0.0)) {
    throw DomainError("linear dispersion is defined for p > 0 only, got p = " +
                      std::to_string(p));
  }
}

}  // namespace

double energy(const Dispersion& disp, double p) {
  require_linear_domain(disp, p);
  if (disp.is_quadratic()) return p * p / (2.0 * disp.parameter());
  return disp.parameter() * p;
}

double group_velocity(const Dispersion& disp, double p) {
  require_linear_domain(disp, p);
  if (disp.is_quadratic()) return p / disp.parameter();
  return disp.parameter();
}

double momentum_at(const Dispersion& disp, double e) {
  if (disp.is_quadratic()) {
    if (e < 0.0) throw DomainError("negative energy has no real momentum");
    return std::sqrt(2.0 * disp.parameter() * e);
  }
  if (!(e > 0.0)) throw DomainError("linear dispersion needs E > 0");
  return e / disp.parameter();
}

GaussianProfile::GaussianProfile(double p0, double sigma) : p0_(p0), sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ArgumentError("Gaussian profile requires sigma > 0");
  }
  if (!(p0 > 0.0) || !std::isfinite(p0)) {
    throw ArgumentError("Gaussian profile requires central momentum p0 > 0");
  }
}

double density(const GaussianProfile& profile, double p) {
  const double s = profile.sigma();
  const double u = (p - profile.p0()) * s;
  return s / std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * u * u);
}

double amplitude(const GaussianProfile& profile, double p) {
  // Evaluated directly rather than sqrt(density) so the symmetry about p0 is
  // exact in floating point.
  const double s = profile.sigma();
  const double u = (p - profile.p0()) * s;
  return std::sqrt(s) * std::pow(2.0 * std::numbers::pi, -0.25) * std::exp(-0.25 * u * u);
}

CatStateSpec::CatStateSpec(GaussianProfile profile, std::vector<double> delays)
    : profile_(profile), delays_(std::move(delays)) {
  if (delays_.empty()) throw ArgumentError("cat state needs at least one mode");
  if (delays_.front() != 0.0) throw ArgumentError("first delay t_1 must be 0");
  for (std::size_t i = 1; i < delays_.size(); ++i) {
    if (!(delays_[i] > delays_[i - 1])) {
      throw ArgumentError("delays must be strictly increasing (t_" + std::to_string(i + 1) +
                          " <= t_" + std::to_string(i) + ")");
    }
  }
}

CatStateSpec CatStateSpec::equally_spaced(GaussianProfile profile, std::size_t modes,
                                          double tau) {
  if (modes == 0) throw ArgumentError("cat state needs at least one mode");
  std::vector<double> delays(modes);
  for (std::size_t n = 0; n < modes; ++n) delays[n] = static_cast<double>(n) * tau;
  return CatStateSpec(profile, std::move(delays));
}

}  // namespace catpacket
