#include "catpacket/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "catpacket/errors.hpp"

namespace catpacket {

namespace {

using cplx = std::complex<double>;

// Damped per-lag phase factor exp[i (E + i Gamma) tau].
cplx lag_factor(const Resonance& res, double tau) {
  return std::exp(cplx{-res.width() * tau, res.energy() * tau});
}

void require_modes(long modes) {
  if (modes < 1) throw ArgumentError("mode count must be >= 1");
}

}  // namespace

ResonanceCoupling coupling(const Resonance& res, const GaussianProfile& profile,
                           const Dispersion& disp) {
  const double p = momentum_at(disp, res.energy());
  const double v = group_velocity(disp, p);
  if (!(v > 0.0)) throw DomainError("resonance at zero group velocity has no finite coupling");
  return {std::numbers::pi * res.width() * density(profile, p) / v};
}

std::complex<double> bw_overlap_entry(std::span<const Resonance> resonances,
                                      std::span<const ResonanceCoupling> couplings, long m, long n,
                                      double tau) {
  if (resonances.size() != couplings.size()) {
    throw ArgumentError("resonance and coupling lists differ in length");
  }
  if (tau < 0.0) throw ArgumentError("delay must be >= 0");
  const double lag = static_cast<double>(m - n);
  cplx sum{0.0, 0.0};
  for (std::size_t j = 0; j < resonances.size(); ++j) {
    const auto& r = resonances[j];
    sum += couplings[j].value * std::exp(cplx{-r.width() * std::abs(lag) * tau,
                                              r.energy() * lag * tau});
  }
  return sum;
}

double two_mode_single_res_correction(const Resonance& res, ResonanceCoupling c, double tau) {
  return c.value * std::exp(-res.width() * tau) * std::cos(res.energy() * tau);
}

double two_res_envelope(const Resonance& res1, const Resonance& res2, ResonanceCoupling c,
                        double tau) {
  const double dw = 0.5 * (res2.energy() - res1.energy());
  return 2.0 * c.value * std::exp(-res1.width() * tau) * std::cos(dw * tau);
}

CheckedValue two_res_envelope_correction(const Resonance& res1, const Resonance& res2,
                                         ResonanceCoupling c, double tau) {
  const double wbar = 0.5 * (res1.energy() + res2.energy());
  CheckedValue out{two_res_envelope(res1, res2, c, tau) * std::cos(wbar * tau), std::nullopt};
  const double mismatch = std::abs(tau * (res1.width() - res2.width()));
  if (mismatch > 0.3) {
    std::ostringstream msg;
    msg << "|tau (Gamma1 - Gamma2)| = " << mismatch << " > 0.3: equal-width envelope invalid";
    out.warning = msg.str();
  }
  return out;
}

double pair_sum_correction(const Resonance& res, ResonanceCoupling c, long modes, double tau) {
  require_modes(modes);
  const cplx z = lag_factor(res, tau);
  cplx sum{0.0, 0.0};
  cplx zj = z;
  for (long j = 1; j < modes; ++j) {
    sum += static_cast<double>(modes - j) * zj;
    zj *= z;
  }
  return 2.0 * c.value * sum.real();
}

double closed_form_correction(const Resonance& res, ResonanceCoupling c, long modes, double tau) {
  require_modes(modes);
  if (modes == 1) return 0.0;
  const double n = static_cast<double>(modes);
  const cplx u = 1.0 / lag_factor(res, tau);  // exp(-i calE tau)
  const cplx um1 = u - 1.0;
  if (std::abs(um1) < 1e-9) return pair_sum_correction(res, c, modes, tau);
  const cplx tail = lag_factor(res, (n - 1.0) * tau);  // exp(i calE (N - 1) tau)
  const cplx bracket = n / um1 + (tail - u) / (um1 * um1);
  return 2.0 * c.value * bracket.real();
}

CheckedValue large_n_correction(const Resonance& res, ResonanceCoupling c, long modes, double tau) {
  require_modes(modes);
  CheckedValue out{0.0, std::nullopt};
  if (modes < 20) out.warning = "large-N form used with N < 20";
  const double gt = res.width() * tau;
  const double cs = std::cos(res.energy() * tau);
  const double denom = cs - std::cosh(gt);
  if (gt == 0.0 || denom == 0.0) {
    out.value = std::numeric_limits<double>::infinity();
    out.warning = "large-N form is singular at Gamma tau = 0";
    return out;
  }
  out.value = -c.value * static_cast<double>(modes) * (cs - std::exp(-gt)) / denom;
  return out;
}

CheckedValue n_mode_probability(std::span<const Resonance> resonances,
                                std::span<const ResonanceCoupling> couplings, double w, long modes,
                                double tau) {
  if (resonances.size() != couplings.size()) {
    throw ArgumentError("resonance and coupling lists differ in length");
  }
  require_modes(modes);
  const double n = static_cast<double>(modes);
  double f = 0.0;
  for (std::size_t j = 0; j < resonances.size(); ++j) {
    f += closed_form_correction(resonances[j], couplings[j], modes, tau);
  }
  CheckedValue out{(n * w + f) / n, std::nullopt};
  if (out.value < 0.0 || out.value > 1.0 + 1e-6) {
    std::ostringstream msg;
    msg << "P^T = " << out.value << " outside [0, 1]: Breit-Wigner approximation breaks down";
    out.warning = msg.str();
  }
  return out;
}

std::complex<double> transmitted_waveform(const Resonance& res, double c, double amplitude_at_res,
                                          double y) {
  if (!(c > 0.0)) throw ArgumentError("waveform needs c > 0");
  if (y > 0.0) return {0.0, 0.0};
  const double pr = res.energy() / c;
  const double front = 2.0 * std::numbers::pi * res.width() * amplitude_at_res / c;
  return front * std::exp(cplx{res.width() * y / c, pr * y});
}

std::complex<double> waveform_overlap(const Resonance& res, double c, double tau) {
  if (!(c > 0.0)) throw ArgumentError("waveform needs c > 0");
  const double pr = res.energy() / c;
  const double scale = c / (2.0 * res.width()) * std::exp(-res.width() * std::abs(tau));
  return scale * std::exp(cplx{0.0, -pr * c * tau});
}

}  // namespace catpacket
