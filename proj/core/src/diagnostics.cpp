#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "catpacket/errors.hpp"
#include "catpacket/sweep.hpp"

namespace catpacket {

namespace {

struct Vertex {
  double x;
  double y;
};

// Vertex of the parabola through three points; falls back to the middle point
// when they are collinear.
Vertex parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double a0 = x0 - x1;
  const double a2 = x2 - x1;
  const double denom = a0 * a2 * (a0 - a2);
  if (denom == 0.0) return {x1, y1};
  const double a = (a2 * (y0 - y1) - a0 * (y2 - y1)) / denom;
  const double b = (a0 * a0 * (y2 - y1) - a2 * a2 * (y0 - y1)) / denom;
  if (a == 0.0) return {x1, y1};
  const double dx = std::clamp(-b / (2.0 * a), std::min(a0, a2), std::max(a0, a2));
  return {x1 + dx, y1 + b * dx + a * dx * dx};
}

struct Series {
  std::vector<double> tau;
  std::vector<double> value;
};

Series restrict(std::span<const double> tau, std::span<const double> values,
                std::optional<TauWindow> window) {
  if (tau.size() != values.size()) throw ArgumentError("tau and value columns differ in length");
  Series s;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (window && (tau[i] < window->lo || tau[i] > window->hi)) continue;
    s.tau.push_back(tau[i]);
    s.value.push_back(values[i]);
  }
  return s;
}

std::vector<double> zero_crossings(const Series& s) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < s.value.size(); ++i) {
    const double a = s.value[i];
    const double b = s.value[i + 1];
    if (a == 0.0) {
      out.push_back(s.tau[i]);
    } else if (a * b < 0.0) {
      out.push_back(s.tau[i] + (s.tau[i + 1] - s.tau[i]) * a / (a - b));
    }
  }
  return out;
}

// Extrema of the signed signal: local maxima of |v|, refined on v itself.
std::vector<Vertex> extrema(const Series& s) {
  std::vector<Vertex> out;
  for (std::size_t i = 1; i + 1 < s.value.size(); ++i) {
    const double m = std::abs(s.value[i]);
    if (!(m >= std::abs(s.value[i - 1]) && m > std::abs(s.value[i + 1]))) continue;
    const auto v = parabola_vertex(s.tau[i - 1], s.value[i - 1], s.tau[i], s.value[i],
                                   s.tau[i + 1], s.value[i + 1]);
    out.push_back({v.x, std::abs(v.y)});
  }
  return out;
}

double mean_rate(const std::vector<double>& marks) {
  return std::numbers::pi * static_cast<double>(marks.size() - 1) / (marks.back() - marks.front());
}

}  // namespace

std::optional<double> overlap_threshold(const SweepResult& result, double eps) {
  if (!(eps > 0.0) || result.records.empty()) return std::nullopt;
  const auto& recs = result.records;
  std::size_t first_below = recs.size();
  for (std::size_t i = recs.size(); i-- > 0;) {
    if (!(recs[i].offdiag_overlap < eps)) break;
    first_below = i;
  }
  if (first_below == recs.size()) return std::nullopt;
  return recs[first_below].tau;
}

Oscillation extract_oscillation(std::span<const double> tau, std::span<const double> values,
                                TauWindow window) {
  const auto s = restrict(tau, values, window);
  const auto zeros = zero_crossings(s);
  if (zeros.size() < 4) {
    throw InsufficientDataError("oscillation extraction needs >= 4 zero crossings, found " +
                                std::to_string(zeros.size()));
  }
  const auto ext = extrema(s);
  if (ext.size() < 2) throw InsufficientDataError("oscillation extraction needs >= 2 extrema");

  // Least-squares slope of log |extremum| against tau.
  const double n = static_cast<double>(ext.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& e : ext) {
    const double y = std::log(std::max(e.y, 1e-300));
    sx += e.x;
    sy += y;
    sxx += e.x * e.x;
    sxy += e.x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {mean_rate(zeros), -slope};
}

Oscillation extract_oscillation(const SweepResult& result, TauWindow window) {
  const auto t = result.taus();
  const auto d = result.delta_p();
  return extract_oscillation(t, d, window);
}

double extract_beat(std::span<const double> tau, std::span<const double> values,
                    std::optional<TauWindow> window) {
  const auto s = restrict(tau, values, window);
  const auto ext = extrema(s);
  // Envelope nodes are minima of the extremum magnitudes; the squared
  // envelope is smooth through a node, so refine on h^2.
  std::vector<double> nodes;
  for (std::size_t k = 1; k + 1 < ext.size(); ++k) {
    if (!(ext[k].y < ext[k - 1].y && ext[k].y <= ext[k + 1].y)) continue;
    const auto v = parabola_vertex(ext[k - 1].x, ext[k - 1].y * ext[k - 1].y, ext[k].x,
                                   ext[k].y * ext[k].y, ext[k + 1].x, ext[k + 1].y * ext[k + 1].y);
    nodes.push_back(v.x);
  }
  if (nodes.size() < 2) {
    throw InsufficientDataError("beat extraction needs >= 2 envelope nodes, found " +
                                std::to_string(nodes.size()));
  }
  return mean_rate(nodes);
}

double extract_beat(const SweepResult& result) {
  const auto t = result.taus();
  const auto d = result.delta_p();
  std::optional<TauWindow> window;
  if (const auto start = overlap_threshold(result, 0.005)) window = TauWindow{*start, t.back()};
  return extract_beat(t, d, window);
}

std::vector<Peak> locate_peaks(std::span<const double> tau, std::span<const double> values) {
  if (tau.size() != values.size()) throw ArgumentError("tau and value columns differ in length");
  std::vector<Peak> peaks;
  if (values.size() < 3) return peaks;
  std::vector<double> mags(values.size());
  std::transform(values.begin(), values.end(), mags.begin(), [](double v) { return std::abs(v); });
  auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
  std::nth_element(mags.begin(), mid, mags.end());
  // Absolute floor keeps quadrature noise on a flat curve from registering.
  const double floor = std::max(3.0 * *mid, 1e-9);
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (!(values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > floor)) continue;
    const auto v = parabola_vertex(tau[i - 1], values[i - 1], tau[i], values[i], tau[i + 1],
                                   values[i + 1]);
    peaks.push_back({v.x, v.y});
  }
  return peaks;
}

std::vector<Peak> locate_peaks(const SweepResult& result) {
  const auto t = result.taus();
  const auto d = result.delta_p();
  return locate_peaks(t, d);
}

std::optional<Peak> peak_in_window(std::span<const double> tau, std::span<const double> values,
                                   TauWindow window) {
  const auto s = restrict(tau, values, window);
  if (s.value.size() < 3) return std::nullopt;
  const auto it = std::max_element(s.value.begin(), s.value.end());
  const auto i = static_cast<std::size_t>(it - s.value.begin());
  if (i == 0 || i + 1 == s.value.size()) return std::nullopt;
  const auto v = parabola_vertex(s.tau[i - 1], s.value[i - 1], s.tau[i], s.value[i],
                                 s.tau[i + 1], s.value[i + 1]);
  return Peak{v.x, v.y};
}

SweepDiagnostics diagnose(const SweepResult& result, double overlap_eps,
                          std::optional<TauWindow> window) {
  SweepDiagnostics out;
  if (result.records.empty()) return out;
  out.overlap_threshold_tau = overlap_threshold(result, overlap_eps);
  const auto t = result.taus();
  const auto d = result.delta_p();
  TauWindow w = window.value_or(TauWindow{out.overlap_threshold_tau.value_or(t.front()), t.back()});
  if (!window && !out.overlap_threshold_tau) {
    out.notes.emplace_back("overlap threshold not reached; diagnostics use the full sweep");
  }
  try {
    out.oscillation = extract_oscillation(t, d, w);
  } catch (const InsufficientDataError& e) {
    out.notes.emplace_back(std::string("oscillation: ") + e.what());
  }
  try {
    out.beat_frequency = extract_beat(t, d, w);
  } catch (const InsufficientDataError& e) {
    out.notes.emplace_back(std::string("beat: ") + e.what());
  }
  out.peaks = locate_peaks(t, d);
  return out;
}

}  // namespace catpacket
