#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "catpacket/barrier.hpp"
#include "catpacket/errors.hpp"

namespace catpacket {

namespace {

// Energy where |T|^2 falls to `level`, searching outward from the peak in
// grid steps of `step`. Gives up after leaving [lo, hi].
std::optional<double> half_level_crossing(const PiecewiseConstantPotential& pot, double mass,
                                          double peak, double level, double step, double lo,
                                          double hi) {
  double inner = peak;
  double outer = peak + step;
  while (outer > lo && outer < hi) {
    if (exact_transmission_prob(pot, mass, outer) < level) {
      auto f = [&](double e) { return exact_transmission_prob(pot, mass, e) - level; };
      boost::math::tools::eps_tolerance<double> tol(48);
      std::uintmax_t iters = 200;
      auto [a, b] = boost::math::tools::bisect(f, std::min(inner, outer), std::max(inner, outer),
                                               tol, iters);
      return 0.5 * (a + b);
    }
    inner = outer;
    outer += step;
  }
  return std::nullopt;
}

double lorentz_fit_rms(const PiecewiseConstantPotential& pot, double mass, double er, double gamma,
                       double peak) {
  constexpr int kSamples = 61;
  double acc = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double e = er + gamma * (-3.0 + 6.0 * i / (kSamples - 1));
    const double lorentz = peak * gamma * gamma / ((e - er) * (e - er) + gamma * gamma);
    const double diff = exact_transmission_prob(pot, mass, e) - lorentz;
    acc += diff * diff;
  }
  return std::sqrt(acc / kSamples);
}

}  // namespace

std::vector<ResonancePeak> find_resonance_peaks(const PiecewiseConstantPotential& potential,
                                                double mass, double e_min, double e_max,
                                                const ResonanceSearchOptions& options) {
  if (!(e_max > e_min)) throw ArgumentError("resonance search needs e_min < e_max");
  if (!(mass > 0.0)) throw ArgumentError("resonance search needs mass > 0");
  if (options.scan_points < 16) throw ArgumentError("resonance scan needs >= 16 points");
  std::vector<ResonancePeak> peaks;
  if (potential.empty()) return peaks;

  const double lo = std::max(e_min, 0.0);
  const int n = options.scan_points;
  const double step = (e_max - lo) / (n - 1);
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[i] = exact_transmission_prob(potential, mass, lo + i * step);

  for (int i = 1; i + 1 < n; ++i) {
    if (!(t[i] > t[i - 1] && t[i] >= t[i + 1])) continue;

    auto neg_t = [&](double e) { return -exact_transmission_prob(potential, mass, e); };
    std::uintmax_t iters = 200;
    const auto [e_peak, neg_peak] = boost::math::tools::brent_find_minima(
        neg_t, lo + (i - 1) * step, lo + (i + 1) * step, 26, iters);
    const double t_peak = -neg_peak;

    const double level = 0.5 * t_peak;
    const auto left = half_level_crossing(potential, mass, e_peak, level, -step, lo, e_max);
    const auto right = half_level_crossing(potential, mass, e_peak, level, step, lo, e_max);
    if (!left || !right) continue;

    const double gamma = 0.5 * (*right - *left);
    if (!(gamma > 0.0) || !(gamma < e_peak)) continue;
    if (!peaks.empty() && std::abs(peaks.back().resonance.energy() - e_peak) < 0.1 * gamma) {
      continue;
    }
    peaks.push_back({Resonance(e_peak, gamma), t_peak,
                     lorentz_fit_rms(potential, mass, e_peak, gamma, t_peak)});
  }
  std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) {
    return a.resonance.energy() < b.resonance.energy();
  });
  return peaks;
}

std::vector<Resonance> find_resonances(const PiecewiseConstantPotential& potential, double mass,
                                       double e_min, double e_max,
                                       const ResonanceSearchOptions& options) {
  std::vector<Resonance> out;
  for (const auto& peak : find_resonance_peaks(potential, mass, e_min, e_max, options)) {
    out.push_back(peak.resonance);
  }
  return out;
}

}  // namespace catpacket
