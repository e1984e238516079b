#pragma once

// Transmission models: exact rectangular barrier, Breit-Wigner resonance sum,
// and transfer-matrix scattering on piecewise-constant potentials.

#include <complex>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "catpacket/wavepacket.hpp"

namespace catpacket {

/// V(x) = height on [left, right), zero elsewhere.
class RectangularBarrier {
 public:
  RectangularBarrier(double height, double left, double right);

  double height() const noexcept { return height_; }
  double left() const noexcept { return left_; }
  double right() const noexcept { return right_; }
  double width() const noexcept { return right_ - left_; }

 private:
  double height_;
  double left_;
  double right_;
};

/// A Lorentzian transmission peak at energy E_r with half-width Gamma.
class Resonance {
 public:
  Resonance(double energy, double width);

  double energy() const noexcept { return energy_; }
  double width() const noexcept { return width_; }
  /// E_r - i Gamma.
  std::complex<double> complex_energy() const noexcept { return {energy_, -width_}; }

 private:
  double energy_;
  double width_;
};

/// Resonances sorted by strictly increasing energy.
class BreitWignerModel {
 public:
  explicit BreitWignerModel(std::vector<Resonance> resonances);

  std::span<const Resonance> resonances() const noexcept { return resonances_; }

 private:
  std::vector<Resonance> resonances_;
};

struct Segment {
  double left;
  double right;
  double height;
};

/// Contiguous constant-height segments; V = 0 outside [front, back).
class PiecewiseConstantPotential {
 public:
  PiecewiseConstantPotential() = default;
  explicit PiecewiseConstantPotential(std::vector<Segment> segments);

  /// Two barriers of equal height and width around a well of width `gap`,
  /// starting at x = 0.
  static PiecewiseConstantPotential double_barrier(double height, double barrier_width,
                                                   double gap);

  std::span<const Segment> segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }
  double max_height() const noexcept;

 private:
  std::vector<Segment> segments_;
};

using BarrierModel = std::variant<RectangularBarrier, BreitWignerModel, PiecewiseConstantPotential>;

struct ScatteringAmplitudes {
  std::complex<double> transmission;
  std::complex<double> reflection;
};

/// Exact |T(p)|^2 of a rectangular barrier, continued above the barrier top.
/// Quadratic dispersion only.
double rect_transmission_prob(const RectangularBarrier& barrier, const Dispersion& disp, double p);

/// Unclamped sum of Lorentzians, sum_j Gamma_j^2 / [(E - E_j)^2 + Gamma_j^2].
double bw_lorentzian_sum(std::span<const Resonance> resonances, const Dispersion& disp, double p);

/// bw_lorentzian_sum clamped to 1. Every clamp increments bw_clamp_count().
double bw_transmission_prob(std::span<const Resonance> resonances, const Dispersion& disp,
                            double p);

/// Process-wide number of clamped Breit-Wigner evaluations.
std::uint64_t bw_clamp_count() noexcept;
void reset_bw_clamp_count() noexcept;

/// i Gamma / [(E - E_r) + i Gamma].
std::complex<double> bw_transmission_amp(const Resonance& res, const Dispersion& disp, double p);

/// Transmission and reflection amplitudes for a plane wave exp(ipx) incident
/// from the left, normalized so that |T|^2 + |R|^2 = 1.
///
/// An energy exactly equal to a segment height is shifted by 1e-12 E, since
/// the plane-wave basis degenerates at zero local wavenumber.
ScatteringAmplitudes exact_scattering(const PiecewiseConstantPotential& potential, double mass,
                                      double p);

/// |T|^2 of an exact potential as a function of energy.
double exact_transmission_prob(const PiecewiseConstantPotential& potential, double mass,
                               double e);

/// |T(p)|^2 for any model. Rectangular and piecewise models require a
/// quadratic dispersion law; momenta p < 0 use reciprocity (|T(-p)| = |T(p)|).
double transmission_prob(const BarrierModel& model, const Dispersion& disp, double p);

struct ResonanceSearchOptions {
  /// Uniform energy samples used to bracket peaks.
  int scan_points = 20001;
};

/// A located transmission peak and how well a Lorentzian describes it.
struct ResonancePeak {
  Resonance resonance;
  double peak_transmission;
  /// RMS of |T|^2 - L(E) over E_r +- 3 Gamma, L scaled to the peak height.
  double fit_rms;
};

std::vector<ResonancePeak> find_resonance_peaks(const PiecewiseConstantPotential& potential,
                                                double mass, double e_min, double e_max,
                                                const ResonanceSearchOptions& options = {});

std::vector<Resonance> find_resonances(const PiecewiseConstantPotential& potential, double mass,
                                       double e_min, double e_max,
                                       const ResonanceSearchOptions& options = {});

}  // namespace catpacket
