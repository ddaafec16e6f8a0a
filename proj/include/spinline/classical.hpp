// classical.hpp: zero-damping classical absorption line for a uniaxial spin,
// the large-S reference the quantum spectra are compared against.
#pragma once

#include "spinline/response.hpp"

namespace spinline {

// Scaled classical absorption curve at reduced barrier sigma = D S^2 / T:
//   chi''(u) / chi0 = C(sigma) u (1 - u^2) exp(sigma u^2)   for u in (0, 1],
// zero outside; u = Omega / (2 D S). Precession frequencies of a classical
// moment cover (0, 2DS] only, so the support ends exactly at u = 1.
class ClassicalLine {
  public:
    explicit ClassicalLine(double sigma);

    double operator()(double u) const;

    double sigma() const { return sigma_; }
    // C(sigma), fixed by the static sum rule against the equilibrium average.
    double normalization() const { return norm_; }
    // Classical isothermal chi'(0) / chi0 = <1 - z^2> / 2 over the well z in [0, 1].
    double static_scaled() const { return static_; }
    // Unique interior maximum of the curve; closed form of the cubic-in-u^2 root.
    double peak_location() const;

  private:
    double sigma_;
    double norm_;
    double static_;
};

double classical_static_susceptibility_scaled(double sigma);

// RMS mismatch between the scaled spectrum and the classical curve over grid
// points with u in [u_min, u_max], divided by the RMS of the curve there.
// Throws when the window misses the grid or has no classical weight.
double crossover_distance(const Spectrum& spec, const ClassicalLine& curve, double u_min,
                          double u_max);

double crossover_distance(const Spectrum& spec, double sigma, double u_min, double u_max);

} // namespace spinline
