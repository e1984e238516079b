#pragma once

// Overlap matrices between cat-state components before (I_mn) and after
// (T_mn) transmission, and the probabilities built from them.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "catpacket/barrier.hpp"
#include "catpacket/quadrature.hpp"
#include "catpacket/wavepacket.hpp"

namespace catpacket {

/// Dense Hermitian n x n complex matrix. Filled through set(), which writes
/// the mirrored conjugate entry as well.
class OverlapMatrix {
 public:
  OverlapMatrix() = default;
  explicit OverlapMatrix(std::size_t n) : n_(n), entries_(n * n) {}

  std::size_t size() const noexcept { return n_; }
  std::complex<double> operator()(std::size_t m, std::size_t n) const {
    return entries_[m * n_ + n];
  }
  /// Sets entry (m, n) and (n, m) = conj(value). Diagonal values keep only
  /// their real part.
  void set(std::size_t m, std::size_t n, std::complex<double> value);

  std::complex<double> sum() const noexcept;
  double trace() const noexcept;
  /// max |a_mn - conj(a_nm)|.
  double hermitian_defect() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<std::complex<double>> entries_;
};

class MixedCatSpec {
 public:
  explicit MixedCatSpec(double mixing);
  double mixing() const noexcept { return mixing_; }

 private:
  double mixing_;
};

/// Precomputed momentum quadrature for one profile, dispersion and
/// (optionally) barrier. Build it once for the largest delay of interest and
/// evaluate overlaps for any delays up to that bound.
class OverlapEngine {
 public:
  OverlapEngine(const GaussianProfile& profile, const Dispersion& disp,
                std::optional<BarrierModel> barrier, const QuadratureConfig& cfg,
                double max_delay);

  const MomentumGrid& grid() const noexcept { return grid_; }
  double max_delay() const noexcept { return max_delay_; }
  bool has_barrier() const noexcept { return has_barrier_; }

  /// int A^2 exp(i E tau) dp (initial) or int |T|^2 A^2 exp(i E tau) dp.
  std::complex<double> initial_entry(double tau) const;
  std::complex<double> transmitted_entry(double tau) const;

  OverlapMatrix initial(std::span<const double> delays) const;
  OverlapMatrix transmitted(std::span<const double> delays) const;

  /// Toeplitz matrices for the ladder t_n = (n - 1) tau; one quadrature per lag.
  OverlapMatrix initial_ladder(std::size_t modes, double tau) const;
  OverlapMatrix transmitted_ladder(std::size_t modes, double tau) const;

  /// w = int |T|^2 A^2 dp.
  double weight() const noexcept { return weight_; }

 private:
  std::complex<double> entry(std::span<const double> primary, std::span<const double> check,
                             double tau) const;
  OverlapMatrix matrix(std::span<const double> primary, std::span<const double> check,
                       std::span<const double> delays) const;
  OverlapMatrix ladder(std::span<const double> primary, std::span<const double> check,
                       std::size_t modes, double tau) const;

  Dispersion disp_;
  QuadratureConfig cfg_;
  double max_delay_;
  bool has_barrier_;
  MomentumGrid grid_;
  double tail_mass_;
  std::vector<double> initial_primary_;
  std::vector<double> initial_check_;
  std::vector<double> transmitted_primary_;
  std::vector<double> transmitted_check_;
  double weight_ = 1.0;
};

OverlapMatrix initial_overlap(const CatStateSpec& cat, const Dispersion& disp,
                              const QuadratureConfig& cfg = {});
OverlapMatrix transmitted_overlap(const CatStateSpec& cat, const Dispersion& disp,
                                  const BarrierModel& barrier, const QuadratureConfig& cfg = {});
double mode_weight(const GaussianProfile& profile, const Dispersion& disp,
                   const BarrierModel& barrier, const QuadratureConfig& cfg = {});

/// Re(sum T_mn) / Re(sum I_mn).
double transmission_probability(const OverlapMatrix& initial, const OverlapMatrix& transmitted);

/// (sum_n T_nn) / N, for identical normalized modes.
double independent_probability(const OverlapMatrix& transmitted);
/// (sum_n T_nn) / (sum_n I_nn): the no-overlap limit of
/// transmission_probability, so the interference correction vanishes there.
double independent_probability(const OverlapMatrix& initial, const OverlapMatrix& transmitted);

/// transmission_probability - independent_probability(initial, transmitted).
double interference_correction(const OverlapMatrix& initial, const OverlapMatrix& transmitted);

/// sum_{m != n} |I_mn|.
double offdiag_overlap_mass(const OverlapMatrix& initial);

/// Two-component mixed state: (w1 + w2)/2 + (1 - p) Re T12.
double mixed_transmission(double w1, double w2, std::complex<double> t12, const MixedCatSpec& mix);

/// N-component generalization: with probability p the particle sits in one
/// mode chosen uniformly, otherwise in the equal-weight superposition of
/// non-overlapping modes: tr(T)/N + (1 - p) sum_{m != n} T_mn / N.
double mixed_transmission(const OverlapMatrix& transmitted, const MixedCatSpec& mix);

}  // namespace catpacket
