#pragma once

// Closed-form Breit-Wigner results for cat states: overlap entries of the
// transmitted modes, interference corrections for two and N modes, and the
// non-spreading transmitted waveform of a massless particle.
//
// Conventions used throughout:
//  * Couplings are C_j = pi Gamma_j A(p_j)^2 / v(p_j), the Lorentzian integral
//    of |T|^2 A^2 over one peak, so that a transmitted diagonal entry equals
//    sum_j C_j.
//  * Lagged entries decay as exp(-Gamma |m - n| tau).
//  * Two-mode corrections are normalized by sum I_mn = 2, N-mode pair sums are
//    the raw sum_{m != n} T_mn (n_mode_probability divides by N).

#include <complex>
#include <optional>
#include <span>
#include <string>

#include "catpacket/barrier.hpp"
#include "catpacket/wavepacket.hpp"

namespace catpacket {

struct ResonanceCoupling {
  double value;
};

/// A value together with a note when it is evaluated outside the regime its
/// approximation assumes.
struct CheckedValue {
  double value;
  std::optional<std::string> warning;
};

ResonanceCoupling coupling(const Resonance& res, const GaussianProfile& profile,
                           const Dispersion& disp);

/// sum_j C_j exp(-Gamma_j |m - n| tau) exp[i E_j (m - n) tau].
std::complex<double> bw_overlap_entry(std::span<const Resonance> resonances,
                                      std::span<const ResonanceCoupling> couplings, long m, long n,
                                      double tau);

/// C exp(-Gamma tau) cos(E_r tau).
double two_mode_single_res_correction(const Resonance& res, ResonanceCoupling c, double tau);

/// 2 C exp(-Gamma_1 tau) cos(dw tau) cos(wbar tau), wbar = (E1 + E2)/2 and
/// dw = (E2 - E1)/2. Warns when |tau (Gamma_1 - Gamma_2)| > 0.3.
CheckedValue two_res_envelope_correction(const Resonance& res1, const Resonance& res2,
                                         ResonanceCoupling c, double tau);

/// The slow envelope 2 C exp(-Gamma_1 tau) cos(dw tau).
double two_res_envelope(const Resonance& res1, const Resonance& res2, ResonanceCoupling c,
                        double tau);

/// 2 C Re sum_{J=1}^{N-1} (N - J) z^J with z = exp[(i E_r - Gamma) tau].
double pair_sum_correction(const Resonance& res, ResonanceCoupling c, long modes, double tau);

/// Geometric-progression form of pair_sum_correction. Falls back to the
/// direct sum where |exp(-i calE tau) - 1| < 1e-9.
double closed_form_correction(const Resonance& res, ResonanceCoupling c, long modes, double tau);

/// Leading large-N term, -C N [cos(E tau) - e^{-G tau}] / [cos(E tau) - cosh(G tau)].
/// Returns +inf at the singular points G tau = 0, cos(E tau) = 1.
CheckedValue large_n_correction(const Resonance& res, ResonanceCoupling c, long modes, double tau);

/// [N w + sum_j F_j(tau)] / N.
CheckedValue n_mode_probability(std::span<const Resonance> resonances,
                                std::span<const ResonanceCoupling> couplings, double w, long modes,
                                double tau);

/// [2 pi Gamma A(p_r) / c] theta(-y) exp(i p_r y + Gamma y / c), theta(0) = 1,
/// y = x - c t - c t_n, p_r = E_r / c.
std::complex<double> transmitted_waveform(const Resonance& res, double c, double amplitude_at_res,
                                          double y);

/// Analytic int Phi*(y) Phi(y - c tau) dy for the unit-prefactor waveform
/// Phi(y) = theta(-y) exp(i p_r y + Gamma y / c).
std::complex<double> waveform_overlap(const Resonance& res, double c, double tau);

}  // namespace catpacket
