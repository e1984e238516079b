#pragma once

// Delay sweeps over equally spaced cat states and the signal diagnostics run
// on them (overlap threshold, oscillation frequency and decay, beat
// modulation, peak trains).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catpacket/analytic.hpp"
#include "catpacket/barrier.hpp"
#include "catpacket/overlap.hpp"
#include "catpacket/quadrature.hpp"
#include "catpacket/wavepacket.hpp"

namespace catpacket {

struct SweepOverlays {
  /// [sum_j F_j(tau)] / N from the geometric-progression closed form.
  bool closed_form = false;
  /// Large-N form of the same correction.
  bool large_n = false;
  /// Two-resonance beat envelope 2 C exp(-Gamma_1 tau) cos(dw tau).
  bool beat_envelope = false;

  bool any() const noexcept { return closed_form || large_n || beat_envelope; }
};

struct SweepSpec {
  double tau_min = 0.0;
  double tau_max = 1.0;
  std::size_t n_tau = 16;
  GaussianProfile profile{1.0, 1.0};
  std::size_t modes = 2;
  /// Delays in units of tau (t_n = pattern[n] * tau). Empty: the equal ladder
  /// 0, 1, ..., modes - 1. When set, it fixes the mode count.
  std::vector<double> delay_pattern{};
  BarrierModel barrier = RectangularBarrier(1.0, 0.0, 1.0);
  Dispersion disp = Dispersion::quadratic(1.0);
  QuadratureConfig quadrature{};
  SweepOverlays overlays{};
  /// Resonances for the analytic overlays. Empty: take them from a
  /// Breit-Wigner barrier, or fit them from a piecewise potential.
  std::vector<Resonance> overlay_resonances{};
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
  std::size_t mode_count() const noexcept;
};

struct SweepRecord {
  double tau;
  double p_t;
  double p_t_ind;
  double delta_p;
  double offdiag_overlap;
  std::vector<double> analytic;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<std::string> overlay_names;
  double weight = 0.0;
  std::vector<Resonance> overlay_resonances;
  std::vector<ResonanceCoupling> couplings;

  std::vector<double> taus() const;
  std::vector<double> delta_p() const;
  /// Column of analytic overlay `name`; throws if absent.
  std::vector<double> overlay(const std::string& name) const;
};

/// Evaluates P^T, P^T_ind, dP^T and the off-diagonal overlap mass on a uniform
/// tau grid. Bitwise deterministic for a fixed spec, independent of threads.
SweepResult run_sweep(const SweepSpec& spec);

struct TauWindow {
  double lo;
  double hi;
};

struct Oscillation {
  double frequency;
  double decay_rate;
};

struct Peak {
  double position;
  double height;
};

/// Smallest grid tau beyond which every record has offdiag_overlap < eps.
std::optional<double> overlap_threshold(const SweepResult& result, double eps);

/// Frequency from mean zero-crossing spacing (pi / spacing) and decay rate
/// from a log-linear fit of successive extremum magnitudes.
Oscillation extract_oscillation(std::span<const double> tau, std::span<const double> values,
                                TauWindow window);
Oscillation extract_oscillation(const SweepResult& result, TauWindow window);

/// Half the carrier-frequency splitting, from the spacing of envelope nodes
/// (node spacing = pi / dw).
double extract_beat(std::span<const double> tau, std::span<const double> values,
                    std::optional<TauWindow> window = std::nullopt);
/// Uses the post-overlap window (eps = 0.005) when the sweep reaches it.
double extract_beat(const SweepResult& result);

/// Local maxima above 3x the median absolute level, refined parabolically.
std::vector<Peak> locate_peaks(std::span<const double> tau, std::span<const double> values);
std::vector<Peak> locate_peaks(const SweepResult& result);

/// Largest sample inside `window`, refined parabolically; empty when that
/// sample sits on the window edge (no interior maximum).
std::optional<Peak> peak_in_window(std::span<const double> tau, std::span<const double> values,
                                   TauWindow window);

struct SweepDiagnostics {
  std::optional<double> overlap_threshold_tau;
  std::optional<Oscillation> oscillation;
  std::optional<double> beat_frequency;
  std::vector<Peak> peaks;
  std::vector<std::string> notes;
};

/// Runs every extractor that applies; failures are recorded as notes.
SweepDiagnostics diagnose(const SweepResult& result, double overlap_eps = 0.005,
                          std::optional<TauWindow> window = std::nullopt);

}  // namespace catpacket
