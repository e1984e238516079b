#include "catpacket/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <type_traits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "catpacket/errors.hpp"

namespace catpacket {

namespace {

constexpr unsigned kPrimaryOrder = 15;
constexpr unsigned kCheckOrder = 10;

// Inner refinement covers +-20 half-widths with panels of half a half-width,
// then panels grow geometrically until they match the base spacing.
constexpr double kFeatureSpan = 20.0;
constexpr double kFeaturePanel = 0.5;
constexpr double kGrowth = 1.3;

struct ReferenceRule {
  std::vector<double> x;
  std::vector<double> w;
};

template <unsigned Order>
ReferenceRule reference_rule() {
  using G = boost::math::quadrature::gauss<double, Order>;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  ReferenceRule r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(w[i]);
    } else {
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
    }
  }
  return r;
}

const ReferenceRule& primary_reference() {
  static const ReferenceRule r = reference_rule<kPrimaryOrder>();
  return r;
}

const ReferenceRule& check_reference() {
  static const ReferenceRule r = reference_rule<kCheckOrder>();
  return r;
}

void fill_rule(MomentumRule& rule, const ReferenceRule& ref, std::span<const double> breaks,
               const Dispersion& disp) {
  const std::size_t n = (breaks.size() - 1) * ref.x.size();
  rule.momentum.reserve(n);
  rule.weight.reserve(n);
  rule.energy.reserve(n);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double mid = 0.5 * (breaks[k] + breaks[k + 1]);
    const double half = 0.5 * (breaks[k + 1] - breaks[k]);
    for (std::size_t i = 0; i < ref.x.size(); ++i) {
      const double p = mid + half * ref.x[i];
      rule.momentum.push_back(p);
      rule.weight.push_back(half * ref.w[i]);
      rule.energy.push_back(energy(disp, p));
    }
  }
}

// Momenta in [lo, hi] where the Lorentzian sum crosses 1 and the clamped
// transmission has a kink.
std::vector<double> clamp_kinks(std::span<const Resonance> resonances, const Dispersion& disp,
                                double lo, double hi) {
  std::vector<double> out;
  auto excess = [&](double p) { return bw_lorentzian_sum(resonances, disp, p) - 1.0; };
  // Lorentzians narrower than the scan step are still resolved because every
  // resonance center is a scan node.
  std::vector<double> nodes;
  constexpr int kScan = 4096;
  for (int i = 0; i <= kScan; ++i) nodes.push_back(lo + (hi - lo) * i / kScan);
  for (const auto& r : resonances) {
    for (double c : {momentum_at(disp, r.energy()), -momentum_at(disp, r.energy())}) {
      if (c > lo && c < hi) nodes.push_back(c);
    }
  }
  std::sort(nodes.begin(), nodes.end());
  const boost::math::tools::eps_tolerance<double> tol(50);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double fa = excess(nodes[i]);
    const double fb = excess(nodes[i + 1]);
    if (fa == 0.0) {
      out.push_back(nodes[i]);
    } else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
      const auto [a, b] = boost::math::tools::bisect(excess, nodes[i], nodes[i + 1], tol);
      out.push_back(0.5 * (a + b));
    }
  }
  return out;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(k_sigma >= 6.0)) throw ArgumentError("quadrature k_sigma must be >= 6");
  if (n_points < 256 || !std::has_single_bit(static_cast<unsigned>(n_points))) {
    throw ArgumentError("quadrature n_points must be a power of two >= 256");
  }
  if (!(rel_tol > 0.0)) throw ArgumentError("quadrature rel_tol must be > 0");
}

MomentumGrid::MomentumGrid(const Dispersion& disp, double lo, double hi, double max_delay,
                           std::span<const SharpFeature> features, int base_panels)
    : lo_(lo), hi_(hi) {
  if (!(hi > lo)) throw ArgumentError("momentum window is empty");
  if (base_panels < 1) throw ArgumentError("momentum grid needs at least one panel");
  const double span = hi - lo;
  double h = span / base_panels;
  if (max_delay > 0.0) {
    const double vmax = disp.is_quadratic() ? std::max(std::abs(lo), std::abs(hi)) / disp.mass()
                                            : disp.speed();
    // Half an oscillation of exp(i E tau) per panel.
    h = std::min(h, std::numbers::pi / (max_delay * vmax));
  }
  const auto uniform = static_cast<std::size_t>(std::ceil(span / h));
  std::vector<double> breaks;
  breaks.reserve(uniform + 1);
  for (std::size_t i = 0; i <= uniform; ++i) {
    breaks.push_back(lo + span * static_cast<double>(i) / static_cast<double>(uniform));
  }
  breaks.back() = hi;

  for (const auto& f : features) {
    const double g = f.half_width;
    auto add = [&](double x) {
      if (x > lo && x < hi) breaks.push_back(x);
    };
    if (g == 0.0) {
      add(f.center);
      continue;
    }
    if (!(g > 0.0)) continue;
    const double step = kFeaturePanel * g;
    const int inner = static_cast<int>(std::round(kFeatureSpan / kFeaturePanel));
    for (int i = -inner; i <= inner; ++i) add(f.center + i * step);
    double offset = kFeatureSpan * g;
    double width = step;
    while (width < h && offset < span) {
      width *= kGrowth;
      offset += width;
      add(f.center - offset);
      add(f.center + offset);
    }
  }

  std::sort(breaks.begin(), breaks.end());
  const double min_gap = 1e-12 * span;
  std::vector<double> merged;
  merged.reserve(breaks.size());
  for (double b : breaks) {
    if (merged.empty() || b - merged.back() > min_gap) merged.push_back(b);
  }
  merged.back() = hi;
  panels_ = merged.size() - 1;

  fill_rule(primary_, primary_reference(), merged, disp);
  fill_rule(check_, check_reference(), merged, disp);
}

std::complex<double> phase_sum(const MomentumRule& rule, std::span<const double> values,
                               double tau) {
  double re = 0.0;
  double im = 0.0;
  const std::size_t n = values.size();
  if (tau == 0.0) {
    for (std::size_t i = 0; i < n; ++i) re += rule.weight[i] * values[i];
    return {re, 0.0};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = rule.energy[i] * tau;
    const double a = rule.weight[i] * values[i];
    re += a * std::cos(phase);
    im += a * std::sin(phase);
  }
  return {re, im};
}

std::vector<SharpFeature> sharp_features(const BarrierModel& model, const Dispersion& disp,
                                         double lo, double hi) {
  std::vector<SharpFeature> out;
  auto push_pair = [&](double e, double gamma) {
    const double pc = momentum_at(disp, e);
    const double v = std::abs(group_velocity(disp, pc));
    if (!(v > 0.0)) return;
    const double g = gamma / v;
    const double margin = 2.0 * kFeatureSpan * g;
    for (double c : {pc, -pc}) {
      if (c + margin > lo && c - margin < hi) out.push_back({c, g});
      if (!disp.is_quadratic()) break;
    }
  };

  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BreitWignerModel>) {
          for (const auto& r : m.resonances()) push_pair(r.energy(), r.width());
          if (!disp.is_quadratic()) lo = std::max(lo, 1e-9 * hi);
          if (hi > lo) {
            for (double k : clamp_kinks(m.resonances(), disp, lo, hi)) out.push_back({k, 0.0});
          }
        } else if constexpr (std::is_same_v<M, PiecewiseConstantPotential>) {
          if (m.empty() || !disp.is_quadratic()) return;
          const double e_lo = (lo < 0.0 && hi > 0.0) ? 0.0
                                                    : std::min(energy(disp, lo), energy(disp, hi));
          const double e_hi = std::min(std::max(energy(disp, lo), energy(disp, hi)), m.max_height());
          if (!(e_hi > e_lo)) return;
          for (const auto& r : find_resonances(m, disp.mass(), e_lo, e_hi)) {
            push_pair(r.energy(), r.width());
          }
        }
      },
      model);
  return out;
}

}  // namespace catpacket
