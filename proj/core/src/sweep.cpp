#include "catpacket/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "catpacket/errors.hpp"

namespace catpacket {

void SweepSpec::validate() const {
  if (!(tau_min >= 0.0)) throw ArgumentError("sweep tau_min must be >= 0");
  if (!(tau_max > tau_min)) throw ArgumentError("sweep requires tau_min < tau_max");
  if (n_tau < 16) throw ArgumentError("sweep needs at least 16 tau points");
  if (modes < 1) throw ArgumentError("sweep needs at least one mode");
  if (!delay_pattern.empty()) {
    (void)CatStateSpec(profile, delay_pattern);
    if (overlays.any()) {
      for (std::size_t n = 0; n < delay_pattern.size(); ++n) {
        if (delay_pattern[n] != static_cast<double>(n)) {
          throw ArgumentError("analytic overlays need equally spaced delays");
        }
      }
    }
  }
  quadrature.validate();
}

std::size_t SweepSpec::mode_count() const noexcept {
  return delay_pattern.empty() ? modes : delay_pattern.size();
}

std::vector<double> SweepResult::taus() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.tau);
  return out;
}

std::vector<double> SweepResult::delta_p() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.delta_p);
  return out;
}

std::vector<double> SweepResult::overlay(const std::string& name) const {
  const auto it = std::find(overlay_names.begin(), overlay_names.end(), name);
  if (it == overlay_names.end()) throw ArgumentError("sweep has no overlay '" + name + "'");
  const auto k = static_cast<std::size_t>(it - overlay_names.begin());
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.analytic[k]);
  return out;
}

namespace {

std::vector<Resonance> resolve_overlay_resonances(const SweepSpec& spec, double lo_energy,
                                                  double hi_energy) {
  if (!spec.overlay_resonances.empty()) return spec.overlay_resonances;
  if (const auto* bw = std::get_if<BreitWignerModel>(&spec.barrier)) {
    return {bw->resonances().begin(), bw->resonances().end()};
  }
  if (const auto* pot = std::get_if<PiecewiseConstantPotential>(&spec.barrier)) {
    if (!spec.disp.is_quadratic()) return {};
    const double top = std::min(hi_energy, pot->max_height());
    if (!(top > lo_energy)) return {};
    return find_resonances(*pot, spec.disp.mass(), lo_energy, top);
  }
  return {};
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_tau;
  const double step = (spec.tau_max - spec.tau_min) / static_cast<double>(n - 1);
  const std::size_t mode_count = spec.mode_count();
  const double span = spec.delay_pattern.empty() ? static_cast<double>(mode_count - 1)
                                                 : spec.delay_pattern.back();
  const double max_delay = spec.tau_max * span;

  const OverlapEngine engine(spec.profile, spec.disp, spec.barrier, spec.quadrature, max_delay);

  SweepResult result;
  result.weight = engine.weight();
  if (spec.overlays.any()) {
    const double window_hi = spec.profile.p0() + spec.quadrature.k_sigma / spec.profile.sigma();
    result.overlay_resonances = resolve_overlay_resonances(spec, 0.0, energy(spec.disp, window_hi));
    if (result.overlay_resonances.empty()) {
      throw ArgumentError("analytic overlays need resonances (Breit-Wigner model, fitted "
                          "piecewise resonances, or explicit overlay_resonances)");
    }
    if (spec.overlays.beat_envelope && result.overlay_resonances.size() != 2) {
      throw ArgumentError("beat envelope overlay needs exactly two resonances");
    }
    for (const auto& r : result.overlay_resonances) {
      result.couplings.push_back(coupling(r, spec.profile, spec.disp));
    }
    if (spec.overlays.closed_form) result.overlay_names.emplace_back("analytic_delta_p");
    if (spec.overlays.large_n) result.overlay_names.emplace_back("analytic_large_n");
    if (spec.overlays.beat_envelope) result.overlay_names.emplace_back("analytic_envelope");
  }

  result.records.resize(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  const auto modes = static_cast<long>(mode_count);
  const double norm = static_cast<double>(mode_count);
  const bool ladder = spec.delay_pattern.empty();

  auto evaluate = [&](std::size_t i) {
    const double tau = i + 1 == n ? spec.tau_max : spec.tau_min + step * static_cast<double>(i);
    SweepRecord rec{};
    rec.tau = tau;
    OverlapMatrix initial;
    OverlapMatrix transmitted;
    if (ladder) {
      initial = engine.initial_ladder(mode_count, tau);
      transmitted = engine.transmitted_ladder(mode_count, tau);
    } else {
      std::vector<double> delays(spec.delay_pattern);
      for (auto& d : delays) d *= tau;
      initial = engine.initial(delays);
      transmitted = engine.transmitted(delays);
    }
    rec.p_t = transmission_probability(initial, transmitted);
    rec.p_t_ind = independent_probability(initial, transmitted);
    rec.delta_p = rec.p_t - rec.p_t_ind;
    rec.offdiag_overlap = offdiag_overlap_mass(initial);

    const auto& res = result.overlay_resonances;
    const auto& cpl = result.couplings;
    if (spec.overlays.closed_form) {
      double f = 0.0;
      for (std::size_t j = 0; j < res.size(); ++j) {
        f += closed_form_correction(res[j], cpl[j], modes, tau);
      }
      rec.analytic.push_back(f / norm);
    }
    if (spec.overlays.large_n) {
      double f = 0.0;
      for (std::size_t j = 0; j < res.size(); ++j) {
        f += large_n_correction(res[j], cpl[j], modes, tau).value;
      }
      rec.analytic.push_back(f / norm);
    }
    if (spec.overlays.beat_envelope) {
      const ResonanceCoupling mean{0.5 * (cpl[0].value + cpl[1].value)};
      rec.analytic.push_back(two_res_envelope(res[0], res[1], mean, tau));
    }
    result.records[i] = std::move(rec);
  };

  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        evaluate(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const unsigned workers = worker_count(spec.threads, n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const AccuracyError& e) {
      const double tau = i + 1 == n ? spec.tau_max : spec.tau_min + step * static_cast<double>(i);
      std::ostringstream msg;
      msg << e.what() << " (sweep tau = " << tau << ")";
      throw AccuracyError(msg.str(), e.estimate(), tau);
    }
  }
  return result;
}

}  // namespace catpacket
