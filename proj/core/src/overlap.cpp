#include "catpacket/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "catpacket/errors.hpp"

namespace catpacket {

void OverlapMatrix::set(std::size_t m, std::size_t n, std::complex<double> value) {
  if (m >= n_ || n >= n_) throw ArgumentError("overlap matrix index out of range");
  if (m == n) {
    entries_[m * n_ + m] = {value.real(), 0.0};
    return;
  }
  entries_[m * n_ + n] = value;
  entries_[n * n_ + m] = std::conj(value);
}

std::complex<double> OverlapMatrix::sum() const noexcept {
  // Pairwise (m, n) + (n, m) accumulation keeps the imaginary part at exact
  // cancellation.
  std::complex<double> s{0.0, 0.0};
  for (std::size_t m = 0; m < n_; ++m) {
    s += entries_[m * n_ + m];
    for (std::size_t n = m + 1; n < n_; ++n) s += entries_[m * n_ + n] + entries_[n * n_ + m];
  }
  return s;
}

double OverlapMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t m = 0; m < n_; ++m) t += entries_[m * n_ + m].real();
  return t;
}

double OverlapMatrix::hermitian_defect() const noexcept {
  double d = 0.0;
  for (std::size_t m = 0; m < n_; ++m) {
    for (std::size_t n = 0; n < n_; ++n) {
      d = std::max(d, std::abs(entries_[m * n_ + n] - std::conj(entries_[n * n_ + m])));
    }
  }
  return d;
}

MixedCatSpec::MixedCatSpec(double mixing) : mixing_(mixing) {
  if (!(mixing >= 0.0 && mixing <= 1.0)) throw ArgumentError("mixing probability must be in [0, 1]");
}

namespace {

std::pair<double, double> momentum_window(const GaussianProfile& profile, const Dispersion& disp,
                                          const QuadratureConfig& cfg) {
  const double half = cfg.k_sigma / profile.sigma();
  double lo = profile.p0() - half;
  const double hi = profile.p0() + half;
  if (!disp.is_quadratic()) {
    if (profile.p0() * profile.sigma() < 5.0) {
      throw ArgumentError("linear dispersion requires p0 * sigma >= 5 (truncated profile)");
    }
    lo = std::max(lo, 0.0);
  }
  return {lo, hi};
}

double truncated_mass(const GaussianProfile& profile, const Dispersion& disp,
                      const QuadratureConfig& cfg) {
  const double tails = std::erfc(cfg.k_sigma / std::sqrt(2.0));
  if (disp.is_quadratic()) return tails;
  return 0.5 * tails + 0.5 * std::erfc(profile.p0() * profile.sigma() / std::sqrt(2.0));
}

double absolute_sum(const MomentumRule& rule, std::span<const double> values) {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += rule.weight[i] * std::abs(values[i]);
  return s;
}

}  // namespace

OverlapEngine::OverlapEngine(const GaussianProfile& profile, const Dispersion& disp,
                             std::optional<BarrierModel> barrier, const QuadratureConfig& cfg,
                             double max_delay)
    : disp_(disp),
      cfg_(cfg),
      max_delay_(std::abs(max_delay)),
      has_barrier_(barrier.has_value()),
      grid_([&] {
        cfg.validate();
        const auto [lo, hi] = momentum_window(profile, disp, cfg);
        std::vector<SharpFeature> features;
        if (barrier) {
          // Surfaces unsupported (dispersion, barrier) pairs before any work.
          (void)transmission_prob(*barrier, disp, profile.p0());
          features = sharp_features(*barrier, disp, lo, hi);
        }
        return MomentumGrid(disp, lo, hi, std::abs(max_delay), features, cfg.n_points / 16);
      }()),
      tail_mass_(truncated_mass(profile, disp, cfg)) {
  auto fill = [&](const MomentumRule& rule, std::vector<double>& init, std::vector<double>& trans) {
    init.resize(rule.momentum.size());
    trans.resize(rule.momentum.size());
    for (std::size_t i = 0; i < rule.momentum.size(); ++i) {
      const double p = rule.momentum[i];
      init[i] = density(profile, p);
      trans[i] = barrier ? init[i] * transmission_prob(*barrier, disp, p) : init[i];
    }
  };
  fill(grid_.primary(), initial_primary_, transmitted_primary_);
  fill(grid_.check(), initial_check_, transmitted_check_);
  weight_ = transmitted_entry(0.0).real();
}

std::complex<double> OverlapEngine::entry(std::span<const double> primary,
                                          std::span<const double> check, double tau) const {
  if (std::abs(tau) > max_delay_ * (1.0 + 1e-12) + 1e-300) {
    std::ostringstream msg;
    msg << "delay " << tau << " exceeds the grid's resolved maximum " << max_delay_;
    throw ArgumentError(msg.str());
  }
  const auto value = phase_sum(grid_.primary(), primary, tau);
  const auto check_value = phase_sum(grid_.check(), check, tau);
  const double magnitude = absolute_sum(grid_.primary(), primary);
  const double error = std::abs(value - check_value) + tail_mass_;
  if (error > cfg_.rel_tol * magnitude + 1e-15) {
    std::ostringstream msg;
    msg << "overlap quadrature error " << error << " exceeds tolerance at tau = " << tau;
    throw AccuracyError(msg.str(), magnitude > 0.0 ? error / magnitude : error, tau);
  }
  return value;
}

std::complex<double> OverlapEngine::initial_entry(double tau) const {
  return entry(initial_primary_, initial_check_, tau);
}

std::complex<double> OverlapEngine::transmitted_entry(double tau) const {
  return entry(transmitted_primary_, transmitted_check_, tau);
}

OverlapMatrix OverlapEngine::matrix(std::span<const double> primary, std::span<const double> check,
                                    std::span<const double> delays) const {
  const std::size_t n = delays.size();
  OverlapMatrix out(n);
  const auto diag = entry(primary, check, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    out.set(m, m, diag);
    for (std::size_t k = m + 1; k < n; ++k) {
      out.set(m, k, entry(primary, check, delays[m] - delays[k]));
    }
  }
  return out;
}

OverlapMatrix OverlapEngine::ladder(std::span<const double> primary, std::span<const double> check,
                                    std::size_t modes, double tau) const {
  OverlapMatrix out(modes);
  const auto diag = entry(primary, check, 0.0);
  for (std::size_t m = 0; m < modes; ++m) out.set(m, m, diag);
  for (std::size_t lag = 1; lag < modes; ++lag) {
    const auto value = entry(primary, check, static_cast<double>(lag) * tau);
    for (std::size_t n = 0; n + lag < modes; ++n) out.set(n + lag, n, value);
  }
  return out;
}

OverlapMatrix OverlapEngine::initial(std::span<const double> delays) const {
  return matrix(initial_primary_, initial_check_, delays);
}

OverlapMatrix OverlapEngine::transmitted(std::span<const double> delays) const {
  return matrix(transmitted_primary_, transmitted_check_, delays);
}

OverlapMatrix OverlapEngine::initial_ladder(std::size_t modes, double tau) const {
  return ladder(initial_primary_, initial_check_, modes, tau);
}

OverlapMatrix OverlapEngine::transmitted_ladder(std::size_t modes, double tau) const {
  return ladder(transmitted_primary_, transmitted_check_, modes, tau);
}

OverlapMatrix initial_overlap(const CatStateSpec& cat, const Dispersion& disp,
                              const QuadratureConfig& cfg) {
  const OverlapEngine engine(cat.profile(), disp, std::nullopt, cfg, cat.delays().back());
  return engine.initial(cat.delays());
}

OverlapMatrix transmitted_overlap(const CatStateSpec& cat, const Dispersion& disp,
                                  const BarrierModel& barrier, const QuadratureConfig& cfg) {
  const OverlapEngine engine(cat.profile(), disp, barrier, cfg, cat.delays().back());
  return engine.transmitted(cat.delays());
}

double mode_weight(const GaussianProfile& profile, const Dispersion& disp,
                   const BarrierModel& barrier, const QuadratureConfig& cfg) {
  return OverlapEngine(profile, disp, barrier, cfg, 0.0).weight();
}

double transmission_probability(const OverlapMatrix& initial, const OverlapMatrix& transmitted) {
  if (initial.size() != transmitted.size() || initial.size() == 0) {
    throw ArgumentError("overlap matrices must be non-empty and of equal size");
  }
  const auto k = initial.sum();
  if (std::abs(k.imag()) > 1e-8 * std::max(1.0, std::abs(k))) {
    throw AccuracyError("sum of initial overlaps has a non-negligible imaginary part",
                        std::abs(k.imag()));
  }
  if (!(k.real() > 1e-12)) {
    throw DegenerateNormalizationError(
        "sum of initial overlaps vanishes: the cat components interfere destructively");
  }
  return transmitted.sum().real() / k.real();
}

double independent_probability(const OverlapMatrix& transmitted) {
  if (transmitted.size() == 0) throw ArgumentError("empty overlap matrix");
  return transmitted.trace() / static_cast<double>(transmitted.size());
}

double independent_probability(const OverlapMatrix& initial, const OverlapMatrix& transmitted) {
  if (initial.size() != transmitted.size() || initial.size() == 0) {
    throw ArgumentError("overlap matrices must be non-empty and of equal size");
  }
  return transmitted.trace() / initial.trace();
}

double interference_correction(const OverlapMatrix& initial, const OverlapMatrix& transmitted) {
  return transmission_probability(initial, transmitted) -
         independent_probability(initial, transmitted);
}

double offdiag_overlap_mass(const OverlapMatrix& initial) {
  double s = 0.0;
  for (std::size_t m = 0; m < initial.size(); ++m) {
    for (std::size_t n = 0; n < initial.size(); ++n) {
      if (m != n) s += std::abs(initial(m, n));
    }
  }
  return s;
}

double mixed_transmission(double w1, double w2, std::complex<double> t12, const MixedCatSpec& mix) {
  return 0.5 * (w1 + w2) + (1.0 - mix.mixing()) * t12.real();
}

double mixed_transmission(const OverlapMatrix& transmitted, const MixedCatSpec& mix) {
  const double n = static_cast<double>(transmitted.size());
  if (n == 0.0) throw ArgumentError("empty overlap matrix");
  const double diag = transmitted.trace();
  const double offdiag = transmitted.sum().real() - diag;
  return diag / n + (1.0 - mix.mixing()) * offdiag / n;
}

}  // namespace catpacket
