#include "catpacket/barrier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <utility>

#include "catpacket/errors.hpp"

namespace catpacket {

namespace {

std::atomic<std::uint64_t> g_bw_clamps{0};

// sinh(x)/x and sin(x)/x, accurate near x = 0.
double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

RectangularBarrier::RectangularBarrier(double height, double left, double right)
    : height_(height), left_(left), right_(right) {
  if (!(height > 0.0) || !std::isfinite(height)) {
    throw ArgumentError("rectangular barrier requires height > 0");
  }
  if (!(right > left)) throw ArgumentError("rectangular barrier requires right > left");
}

Resonance::Resonance(double energy, double width) : energy_(energy), width_(width) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw ArgumentError("resonance energy must be > 0");
  }
  if (!(width > 0.0)) throw ArgumentError("resonance width must be > 0");
  if (!(width < energy)) throw ArgumentError("resonance width must be below its energy");
}

BreitWignerModel::BreitWignerModel(std::vector<Resonance> resonances)
    : resonances_(std::move(resonances)) {
  if (resonances_.empty()) throw ArgumentError("Breit-Wigner model needs at least one resonance");
  for (std::size_t j = 1; j < resonances_.size(); ++j) {
    if (!(resonances_[j].energy() > resonances_[j - 1].energy())) {
      throw ArgumentError("Breit-Wigner resonances must be sorted by strictly increasing energy");
    }
  }
}

PiecewiseConstantPotential::PiecewiseConstantPotential(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(s.right > s.left)) {
      throw ArgumentError("segment " + std::to_string(i) + " has non-positive width");
    }
    if (!std::isfinite(s.height) || !std::isfinite(s.left) || !std::isfinite(s.right)) {
      throw ArgumentError("segment " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && s.left != segments_[i - 1].right) {
      throw ArgumentError("segments must be contiguous (gap or overlap before segment " +
                          std::to_string(i) + ")");
    }
  }
}

PiecewiseConstantPotential PiecewiseConstantPotential::double_barrier(double height,
                                                                      double barrier_width,
                                                                      double gap) {
  const double a = barrier_width;
  const double b = barrier_width + gap;
  return PiecewiseConstantPotential(
      {{0.0, a, height}, {a, b, 0.0}, {b, b + barrier_width, height}});
}

double PiecewiseConstantPotential::max_height() const noexcept {
  double v = 0.0;
  for (const auto& s : segments_) v = std::max(v, s.height);
  return v;
}

double rect_transmission_prob(const RectangularBarrier& barrier, const Dispersion& disp,
                              double p) {
  if (!disp.is_quadratic()) {
    throw UnsupportedModelError("rectangular barrier needs a quadratic (massive) dispersion");
  }
  const double mu = disp.parameter();
  const double e = energy(disp, p);
  if (e <= 0.0) return 0.0;
  const double v = barrier.height();
  const double d = barrier.width();
  // 1 / {1 + V^2 sinh^2(q d) / [4 E (V - E)]}, written with sinh(qd)/(qd) so
  // that E = V and the above-barrier continuation need no special cases.
  const double q2 = 2.0 * mu * (v - e);
  const double shape = q2 >= 0.0 ? sinhc(std::sqrt(q2) * d) : sinc(std::sqrt(-q2) * d);
  const double denom = 1.0 + v * v * mu * d * d * shape * shape / (2.0 * e);
  return 1.0 / denom;
}

double bw_lorentzian_sum(std::span<const Resonance> resonances, const Dispersion& disp,
                         double p) {
  if (resonances.empty()) throw ArgumentError("Breit-Wigner evaluation needs a resonance");
  const double e = energy(disp, p);
  double sum = 0.0;
  for (const auto& r : resonances) {
    const double g = r.width();
    const double de = e - r.energy();
    sum += g * g / (de * de + g * g);
  }
  return sum;
}

double bw_transmission_prob(std::span<const Resonance> resonances, const Dispersion& disp,
                            double p) {
  const double sum = bw_lorentzian_sum(resonances, disp, p);
  if (sum > 1.0) {
    g_bw_clamps.fetch_add(1, std::memory_order_relaxed);
    return 1.0;
  }
  return sum;
}

std::uint64_t bw_clamp_count() noexcept { return g_bw_clamps.load(std::memory_order_relaxed); }
void reset_bw_clamp_count() noexcept { g_bw_clamps.store(0, std::memory_order_relaxed); }

std::complex<double> bw_transmission_amp(const Resonance& res, const Dispersion& disp, double p) {
  const std::complex<double> ig{0.0, res.width()};
  return ig / (energy(disp, p) - res.energy() + ig);
}

double transmission_prob(const BarrierModel& model, const Dispersion& disp, double p) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, RectangularBarrier>) {
          return rect_transmission_prob(m, disp, p);
        } else if constexpr (std::is_same_v<M, BreitWignerModel>) {
          return bw_transmission_prob(m.resonances(), disp, p);
        } else {
          if (!disp.is_quadratic()) {
            throw UnsupportedModelError("piecewise potential needs a quadratic dispersion");
          }
          if (m.empty()) return 1.0;
          if (p == 0.0) return 0.0;
          return std::norm(exact_scattering(m, disp.parameter(), std::abs(p)).transmission);
        }
      },
      model);
}

}  // namespace catpacket
