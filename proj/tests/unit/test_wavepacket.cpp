#include <doctest.h>

#include <cmath>
#include <numbers>

#include "catpacket/errors.hpp"
#include "catpacket/wavepacket.hpp"

using namespace catpacket;

TEST_CASE("quadratic dispersion energy and velocity") {
  const auto d = Dispersion::quadratic(2.0);
  CHECK(energy(d, 3.0) == doctest::Approx(2.25));
  CHECK(group_velocity(d, 3.0) == doctest::Approx(1.5));
  CHECK(momentum_at(d, 2.25) == doctest::Approx(3.0));
  CHECK(energy(d, -3.0) == energy(d, 3.0));
  CHECK_THROWS_AS(momentum_at(d, -1.0), DomainError);
}

TEST_CASE("linear dispersion is defined for positive momentum only") {
  const auto d = Dispersion::linear(3.0);
  CHECK(energy(d, 2.0) == doctest::Approx(6.0));
  CHECK(group_velocity(d, 0.5) == 3.0);
  CHECK(momentum_at(d, 6.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(energy(d, 0.0), DomainError);
  CHECK_THROWS_AS(energy(d, -1.0), DomainError);
  CHECK_THROWS_AS(d.mass(), UnsupportedModelError);
}

TEST_CASE("dispersion parameters must be positive") {
  CHECK_THROWS_AS(Dispersion::quadratic(0.0), ArgumentError);
  CHECK_THROWS_AS(Dispersion::linear(-1.0), ArgumentError);
  CHECK_THROWS_AS(GaussianProfile(0.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(GaussianProfile(1.0, 0.0), ArgumentError);
}

TEST_CASE("gaussian amplitude peak, symmetry and normalization") {
  const GaussianProfile g(1.4, 4.5);
  const double peak = std::pow(2.0 * std::numbers::pi, -0.25) * std::sqrt(4.5);
  CHECK(amplitude(g, 1.4) == doctest::Approx(peak).epsilon(1e-14));
  for (double dp : {0.01, 0.1, 0.37, 1.0}) {
    CHECK(amplitude(g, 1.4 + dp) == amplitude(g, 1.4 - dp));
    CHECK(density(g, 1.4 + dp) == doctest::Approx(amplitude(g, 1.4 + dp) * amplitude(g, 1.4 + dp)));
  }
  // Trapezoid on a fine grid is spectrally accurate for a Gaussian.
  double sum = 0.0;
  const double h = 1e-3;
  for (int i = -20000; i <= 20000; ++i) sum += density(g, 1.4 + i * h) * h;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cat state delays") {
  const GaussianProfile g(1.0, 5.0);
  const auto cat = CatStateSpec::equally_spaced(g, 4, 2.5);
  REQUIRE(cat.modes() == 4);
  CHECK(cat.delays()[0] == 0.0);
  CHECK(cat.delays()[3] == doctest::Approx(7.5));
  CHECK(cat.lag(3, 1) == doctest::Approx(5.0));
  CHECK_THROWS_AS(CatStateSpec(g, {0.0, 2.0, 1.0}), ArgumentError);
  CHECK_THROWS_AS(CatStateSpec(g, {0.5, 1.0}), ArgumentError);
  CHECK_THROWS_AS(CatStateSpec(g, {}), ArgumentError);
  CHECK_THROWS_AS(CatStateSpec::equally_spaced(g, 3, 0.0), ArgumentError);
}
