// Scattering on piecewise-constant potentials.
//
// Each interface and each layer is represented by its 2x2 scattering matrix
// (t, r for incidence from the left; t', r' from the right) and the pieces are
// chained with the Redheffer star product. Layer propagators are exp(i k L)
// with Im k >= 0, so evanescent layers only ever contribute decaying factors
// and thick or tall barriers cannot overflow the way a raw transfer-matrix
// product does.

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "catpacket/barrier.hpp"
#include "catpacket/errors.hpp"

namespace catpacket {

namespace {

using cplx = std::complex<double>;

struct SMatrix {
  cplx t{1.0};
  cplx r{0.0};
  cplx tp{1.0};
  cplx rp{0.0};
};

// Left block a followed by right block b.
SMatrix star(const SMatrix& a, const SMatrix& b) {
  const cplx d = 1.0 - a.rp * b.r;
  SMatrix s;
  s.t = b.t * a.t / d;
  s.r = a.r + a.tp * b.r * a.t / d;
  s.tp = a.tp * b.tp / d;
  s.rp = b.rp + b.t * a.rp * b.tp / d;
  return s;
}

// Step from wavenumber k1 to k2, amplitudes referenced at the step.
SMatrix interface(cplx k1, cplx k2) {
  const cplx sum = k1 + k2;
  SMatrix s;
  s.t = 2.0 * k1 / sum;
  s.r = (k1 - k2) / sum;
  s.tp = 2.0 * k2 / sum;
  s.rp = (k2 - k1) / sum;
  return s;
}

SMatrix layer(cplx k, double length) {
  const cplx phase = std::exp(cplx{0.0, 1.0} * k * length);
  return SMatrix{phase, 0.0, phase, 0.0};
}

// Flat layer of length L at exactly the particle energy (k = 0, psi = A + B x)
// between media k1 and k2, including both of its interfaces.
SMatrix flat_layer(cplx k1, cplx k2, double length) {
  const cplx i{0.0, 1.0};
  const cplx d = k1 + k2 - i * k1 * k2 * length;
  SMatrix s;
  s.t = 2.0 * k1 / d;
  s.r = s.t * (1.0 - i * k2 * length) - 1.0;
  s.tp = 2.0 * k2 / d;
  s.rp = s.tp * (1.0 - i * k1 * length) - 1.0;
  return s;
}

// Adjacent segments of equal height act as one.
std::vector<Segment> merged(std::span<const Segment> segments) {
  std::vector<Segment> out;
  for (const auto& s : segments) {
    if (!out.empty() && out.back().height == s.height) {
      out.back().right = s.right;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

cplx local_wavenumber(double mass, double e, double v) {
  // Principal root: Im k >= 0 in classically forbidden layers.
  return std::sqrt(cplx{2.0 * mass * (e - v), 0.0});
}

}  // namespace

ScatteringAmplitudes exact_scattering(const PiecewiseConstantPotential& potential, double mass,
                                      double p) {
  if (!(mass > 0.0)) throw ArgumentError("exact scattering needs mass > 0");
  if (!(p > 0.0)) throw DomainError("exact scattering needs p > 0");
  if (potential.empty()) return {cplx{1.0}, cplx{0.0}};
  const auto segments = merged(potential.segments());

  const double e = p * p / (2.0 * mass);
  const cplx k0 = local_wavenumber(mass, e, 0.0);

  SMatrix total;
  cplx k_prev = k0;
  for (std::size_t j = 0; j < segments.size(); ++j) {
    const auto& s = segments[j];
    if (e == s.height) {
      // The following interface becomes trivial: interface(k, k) is the identity.
      const cplx k_next = j + 1 < segments.size() ? local_wavenumber(mass, e, segments[j + 1].height) : k0;
      total = star(total, flat_layer(k_prev, k_next, s.right - s.left));
      k_prev = k_next;
      continue;
    }
    const cplx k = local_wavenumber(mass, e, s.height);
    total = star(total, interface(k_prev, k));
    total = star(total, layer(k, s.right - s.left));
    k_prev = k;
  }
  total = star(total, interface(k_prev, k0));

  // Re-reference from local interface phases to plane waves exp(+-ikx) in
  // global coordinates.
  const double x0 = segments.front().left;
  const double x1 = segments.back().right;
  const cplx i{0.0, 1.0};
  return {total.t * std::exp(i * k0 * (x0 - x1)), total.r * std::exp(2.0 * i * k0 * x0)};
}

double exact_transmission_prob(const PiecewiseConstantPotential& potential, double mass,
                               double e) {
  if (potential.empty()) return 1.0;
  if (!(e > 0.0)) return 0.0;
  return std::norm(exact_scattering(potential, mass, std::sqrt(2.0 * mass * e)).transmission);
}

}  // namespace catpacket
