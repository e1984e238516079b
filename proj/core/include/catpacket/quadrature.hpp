#pragma once

// Composite Gauss-Legendre momentum grids for integrals of the form
//   int dp f(p) exp[i E(p) tau],
// with panels sized to resolve both the phase oscillation up to a maximum
// delay and any narrow transmission peaks.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "catpacket/barrier.hpp"
#include "catpacket/wavepacket.hpp"

namespace catpacket {

struct QuadratureConfig {
  /// Momentum window half-width, in units of 1/sigma.
  double k_sigma = 10.0;
  /// Base node count (power of two >= 256); panels only ever get finer.
  int n_points = 4096;
  /// Relative error target; exceeding it raises AccuracyError.
  double rel_tol = 1e-8;

  void validate() const;
};

/// A narrow feature in |T(p)|^2: center momentum and momentum half-width.
/// A zero half-width marks a kink, which becomes a single panel break.
struct SharpFeature {
  double center;
  double half_width;
};

/// Nodes and weights of a primary rule and an embedded lower-order check rule
/// on the same panel partition.
struct MomentumRule {
  std::vector<double> momentum;
  std::vector<double> weight;
  std::vector<double> energy;
};

class MomentumGrid {
 public:
  /// Builds panels over [lo, hi] able to resolve exp(i E tau) for
  /// |tau| <= max_delay and the given sharp features.
  MomentumGrid(const Dispersion& disp, double lo, double hi, double max_delay,
               std::span<const SharpFeature> features, int base_panels);

  const MomentumRule& primary() const noexcept { return primary_; }
  const MomentumRule& check() const noexcept { return check_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t panels() const noexcept { return panels_; }

 private:
  double lo_;
  double hi_;
  std::size_t panels_ = 0;
  MomentumRule primary_;
  MomentumRule check_;
};

/// sum_i w_i f_i exp(i E_i tau) over a rule; `values` is f at the rule nodes.
std::complex<double> phase_sum(const MomentumRule& rule, std::span<const double> values,
                               double tau);

/// Sharp features of a barrier model inside the momentum window [lo, hi].
std::vector<SharpFeature> sharp_features(const BarrierModel& model, const Dispersion& disp,
                                         double lo, double hi);

}  // namespace catpacket
