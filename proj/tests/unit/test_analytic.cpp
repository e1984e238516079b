#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "catpacket/analytic.hpp"
#include "catpacket/errors.hpp"
#include "catpacket/overlap.hpp"

using namespace catpacket;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Sum of Re T_mn over m != n, entry by entry.
double offdiag_sum(const Resonance& r, ResonanceCoupling c, long modes, double tau) {
  const std::vector<Resonance> rs{r};
  const std::vector<ResonanceCoupling> cs{c};
  double s = 0.0;
  for (long m = 0; m < modes; ++m) {
    for (long n = 0; n < modes; ++n) {
      if (m != n) s += bw_overlap_entry(rs, cs, m, n, tau).real();
    }
  }
  return s;
}

}  // namespace

TEST_CASE("geometric-progression form equals the pair sum") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> modes(2, 50);
  std::uniform_real_distribution<double> phase(0.1, 20.0);
  std::uniform_real_distribution<double> damping(0.01, 2.0);
  std::uniform_real_distribution<double> strength(0.01, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const long n = modes(rng);
    const double tau = 1.0 + draw * 0.37;
    const double e = phase(rng) / tau;
    const double g = std::min(damping(rng) / tau, 0.99 * e);
    const Resonance r(e, g);
    const ResonanceCoupling c{strength(rng)};
    const double scale = c.value * static_cast<double>(n * n);
    const double closed = closed_form_correction(r, c, n, tau);
    worst = std::max(worst, std::abs(pair_sum_correction(r, c, n, tau) - closed) / scale);
    CHECK(std::abs(offdiag_sum(r, c, n, tau) - closed) < 1e-10 * scale);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("closed form near the removable singularity") {
  // exp(-i calE tau) -> 1 when E tau is a multiple of 2 pi and Gamma tau -> 0.
  const Resonance r(1.0, 1e-13);
  const ResonanceCoupling c{0.3};
  const double tau = 2.0 * kPi;
  CHECK(closed_form_correction(r, c, 6, tau) == doctest::Approx(pair_sum_correction(r, c, 6, tau)).epsilon(1e-9));
  CHECK(closed_form_correction(r, c, 1, tau) == 0.0);
  CHECK_THROWS_AS(closed_form_correction(r, c, 0, tau), ArgumentError);
}

TEST_CASE("N = 2 forms reduce to the two-mode correction") {
  const Resonance r(1.3, 0.02);
  const ResonanceCoupling c{0.05};
  for (double tau : {0.5, 3.0, 17.0, 60.0}) {
    const double two = two_mode_single_res_correction(r, c, tau);
    CHECK(closed_form_correction(r, c, 2, tau) / 2.0 == doctest::Approx(two).epsilon(1e-13));
    CHECK(pair_sum_correction(r, c, 2, tau) / 2.0 == doctest::Approx(two).epsilon(1e-13));
    const std::vector<Resonance> rs{r};
    const std::vector<ResonanceCoupling> cs{c};
    const double w = 0.2;
    CHECK(n_mode_probability(rs, cs, w, 2, tau).value == doctest::Approx(w + two).epsilon(1e-13));
  }
}

TEST_CASE("large-N form") {
  const Resonance r(1.0, 0.01);
  const ResonanceCoupling c{0.02};
  const long n = 200;

  SUBCASE("agrees with the closed form away from peak cores") {
    for (double x = 0.2; x <= 1.0; x += 0.01) {
      const double tau = x / r.width();
      if (std::cos(r.energy() * tau) > 0.5) continue;
      const double exact = closed_form_correction(r, c, n, tau);
      const double approx = large_n_correction(r, c, n, tau).value;
      CHECK(std::abs(approx - exact) < 0.05 * std::abs(exact));
    }
  }
  SUBCASE("peak height 2 C N / (Gamma tau)") {
    const Resonance sharp(1.0, 1e-4);
    const double tau = 2.0 * kPi;
    const double gt = sharp.width() * tau;
    CHECK(large_n_correction(sharp, c, n, tau).value ==
          doctest::Approx(2.0 * c.value * n / gt).epsilon(1e-3));
  }
  SUBCASE("trough -C N midway between peaks") {
    const Resonance sharp(1.0, 1e-4);
    CHECK(large_n_correction(sharp, c, n, 3.0 * kPi).value ==
          doctest::Approx(-c.value * n).epsilon(1e-3));
  }
  SUBCASE("warnings") {
    CHECK(large_n_correction(r, c, 5, 10.0).warning.has_value());
    CHECK(!large_n_correction(r, c, n, 10.0).warning.has_value());
    const auto singular = large_n_correction(r, c, n, 0.0);
    CHECK(std::isinf(singular.value));
    CHECK(singular.warning.has_value());
  }
}

TEST_CASE("two-resonance envelope") {
  const Resonance r1(0.9, 0.035);
  const Resonance r2(1.1, 0.035);
  const ResonanceCoupling c{0.1};
  for (double tau : {1.0, 5.0, 7.5}) {
    const double separate = two_mode_single_res_correction(r1, c, tau) +
                            two_mode_single_res_correction(r2, c, tau);
    const auto product = two_res_envelope_correction(r1, r2, c, tau);
    CHECK(product.value == doctest::Approx(separate).epsilon(1e-12));
    CHECK(!product.warning.has_value());
  }
  // Envelope nodes at (2k + 1) pi / (2 dw) with dw = 0.1.
  CHECK(std::abs(two_res_envelope(r1, r2, c, 5.0 * kPi)) < 1e-15);
  const Resonance r3(1.1, 0.045);
  CHECK(two_res_envelope_correction(r1, r3, c, 40.0).warning.has_value());
}

TEST_CASE("dominant frequency of the two-mode correction") {
  const Resonance r(1.7, 0.02);
  const ResonanceCoupling c{1.0};
  const std::size_t n = 1024;
  const double span = 20.0 * kPi / r.energy();
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = two_mode_single_res_correction(r, c, span * static_cast<double>(i) / n);
  }
  std::size_t best = 0;
  double best_power = 0.0;
  for (std::size_t k = 1; k < n / 2; ++k) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      s += samples[i] * std::exp(cplx{0.0, -2.0 * kPi * static_cast<double>(k * i) / n});
    }
    if (std::norm(s) > best_power) {
      best_power = std::norm(s);
      best = k;
    }
  }
  const double bin = 2.0 * kPi / span;
  CHECK(std::abs(static_cast<double>(best) * bin - r.energy()) <= bin);
}

TEST_CASE("breit-wigner overlap entries") {
  const std::vector<Resonance> rs{Resonance(1.0, 0.02)};
  const std::vector<ResonanceCoupling> cs{{0.05}};
  double prev = std::abs(bw_overlap_entry(rs, cs, 0, 0, 3.0));
  CHECK(prev == doctest::Approx(0.05));
  for (long lag = 1; lag < 10; ++lag) {
    const double now = std::abs(bw_overlap_entry(rs, cs, lag, 0, 3.0));
    CHECK(now <= prev);
    prev = now;
  }
  CHECK(bw_overlap_entry(rs, cs, 2, 5, 1.5) == std::conj(bw_overlap_entry(rs, cs, 5, 2, 1.5)));
  CHECK_THROWS_AS(bw_overlap_entry(rs, cs, 0, 1, -1.0), ArgumentError);
}

TEST_CASE("breit-wigner entries track quadrature for a narrow resonance") {
  const GaussianProfile g(std::sqrt(2.0), 6.0 / std::sqrt(2.0));
  const Resonance r(1.0, 0.01);
  const auto disp = Dispersion::quadratic(1.0);
  const auto c = coupling(r, g, disp);
  const OverlapEngine engine(g, disp, BreitWignerModel({r}), QuadratureConfig{}, 200.0);
  const std::vector<Resonance> rs{r};
  const std::vector<ResonanceCoupling> cs{c};
  CHECK(engine.weight() == doctest::Approx(c.value).epsilon(0.05));
  for (double tau : {30.0, 60.0, 120.0, 200.0}) {
    const auto quad = engine.transmitted_entry(tau);
    const auto bw = bw_overlap_entry(rs, cs, 1, 0, tau);
    CHECK(std::abs(quad - bw) < 0.05 * std::abs(bw));
  }
}

TEST_CASE("coupling uses the group velocity at the resonance") {
  const GaussianProfile g(2.0, 5.0);
  const Resonance r(3.0, 0.1);
  const auto lin = coupling(r, g, Dispersion::linear(1.5));
  CHECK(lin.value == doctest::Approx(kPi * 0.1 * density(g, 2.0) / 1.5));
  const auto quad = coupling(r, g, Dispersion::quadratic(1.0));
  const double pr = std::sqrt(6.0);
  CHECK(quad.value == doctest::Approx(kPi * 0.1 * density(g, pr) / pr));
}

TEST_CASE("n-mode probability flags a breakdown") {
  const std::vector<Resonance> rs{Resonance(1.0, 0.2)};
  const std::vector<ResonanceCoupling> cs{{0.9}};
  const auto p = n_mode_probability(rs, cs, 0.9, 5, 2.0 * kPi);
  CHECK(p.warning.has_value());
  const auto single = n_mode_probability(rs, cs, 0.4, 1, 3.0);
  CHECK(single.value == 0.4);
  CHECK(!single.warning.has_value());
}

TEST_CASE("transmitted waveform") {
  const Resonance r(1.0, 0.05);
  const double c = 1.0;
  const double a = 2.2;
  const double front = 2.0 * kPi * r.width() * a / c;
  for (double y : {0.1, 1.0, 50.0}) CHECK(transmitted_waveform(r, c, a, y) == cplx{0.0, 0.0});
  CHECK(std::abs(transmitted_waveform(r, c, a, 0.0)) == doctest::Approx(front).epsilon(1e-15));
  const double span = 5.0 * c / r.width();
  for (double y : {-0.3, -7.0, -span}) {
    const double slope = std::log(std::abs(transmitted_waveform(r, c, a, y)) / front) / y;
    CHECK(std::abs(slope - r.width() / c) < 1e-10);
    const auto phase = transmitted_waveform(r, c, a, y) / std::abs(transmitted_waveform(r, c, a, y));
    CHECK(std::abs(phase - std::exp(cplx{0.0, r.energy() / c * y})) < 1e-12);
  }
  CHECK_THROWS_AS(transmitted_waveform(r, 0.0, a, -1.0), ArgumentError);
}

TEST_CASE("waveform overlap matches direct integration") {
  const Resonance r(1.2, 0.1);
  const double c = 2.0;
  const double front = 2.0 * kPi * r.width() / c;
  for (double tau : {0.0, 0.7, 3.0, -1.1}) {
    // Trapezoid over the tail; the integrand has kinks only at the fronts.
    const double shift = c * tau;
    const double hi = std::min(0.0, shift);
    const double lo = hi - 40.0 * c / r.width();
    const int n = 400000;
    const double h = (hi - lo) / n;
    cplx sum{0.0, 0.0};
    for (int i = 0; i <= n; ++i) {
      const double y = lo + h * i;
      const cplx f = std::conj(transmitted_waveform(r, c, 1.0, y)) *
                     transmitted_waveform(r, c, 1.0, y - shift) / (front * front);
      sum += (i == 0 || i == n ? 0.5 : 1.0) * h * f;
    }
    CHECK(std::abs(sum - waveform_overlap(r, c, tau)) < 1e-5 * std::abs(waveform_overlap(r, c, tau)));
  }
}
