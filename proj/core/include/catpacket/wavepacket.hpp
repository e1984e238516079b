#pragma once

// Dispersion laws, Gaussian momentum profiles and the delayed-mode "cat"
// state. Natural units, hbar = 1.

#include <cstddef>
#include <span>
#include <vector>

namespace catpacket {

/// Energy-momentum law: E = p^2 / (2 mu) for a massive particle, E = c p for
/// a massless one. The linear law is only defined for right-moving p > 0.
class Dispersion {
 public:
  enum class Kind { Quadratic, Linear };

  static Dispersion quadratic(double mass);
  static Dispersion linear(double speed);

  Kind kind() const noexcept { return kind_; }
  bool is_quadratic() const noexcept { return kind_ == Kind::Quadratic; }
  /// Mass for Quadratic, speed for Linear.
  double parameter() const noexcept { return parameter_; }
  double mass() const;
  double speed() const;

 private:
  Dispersion(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}

  Kind kind_;
  double parameter_;
};

double energy(const Dispersion& disp, double p);
double group_velocity(const Dispersion& disp, double p);

/// Non-negative momentum carrying energy e (inverse of energy() on p >= 0).
double momentum_at(const Dispersion& disp, double e);

/// |A(p)|^2 = (2 pi)^{-1/2} sigma exp[-(p - p0)^2 sigma^2 / 2], normalized
/// over the real line. sigma is the spatial width.
class GaussianProfile {
 public:
  GaussianProfile(double p0, double sigma);

  double p0() const noexcept { return p0_; }
  double sigma() const noexcept { return sigma_; }

 private:
  double p0_;
  double sigma_;
};

/// Real, non-negative A(p).
double amplitude(const GaussianProfile& profile, double p);
/// A(p)^2.
double density(const GaussianProfile& profile, double p);

/// N identical modes launched at 0 = t_1 < t_2 < ... < t_N.
class CatStateSpec {
 public:
  CatStateSpec(GaussianProfile profile, std::vector<double> delays);

  /// t_n = (n - 1) tau. Requires tau > 0 when modes > 1.
  static CatStateSpec equally_spaced(GaussianProfile profile, std::size_t modes,
                                     double tau);

  const GaussianProfile& profile() const noexcept { return profile_; }
  std::span<const double> delays() const noexcept { return delays_; }
  std::size_t modes() const noexcept { return delays_.size(); }
  /// tau_mn = t_m - t_n (zero-based indices).
  double lag(std::size_t m, std::size_t n) const { return delays_.at(m) - delays_.at(n); }

 private:
  GaussianProfile profile_;
  std::vector<double> delays_;
};

}  // namespace catpacket
