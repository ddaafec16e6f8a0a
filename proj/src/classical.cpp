#include "spinline/classical.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace spinline {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double sum = left + right;
    if (depth <= 0 || std::abs(sum - whole) <= 15.0 * tol) return sum + (sum - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace

ClassicalLine::ClassicalLine(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("classical curve needs sigma > 0");
    const double tol = 1e-13 * std::exp(sigma);
    const double iz = integrate([sigma](double z) { return std::exp(sigma * z * z); }, 0.0, 1.0, tol);
    const double iw = integrate(
        [sigma](double z) { return (1.0 - z * z) * std::exp(sigma * z * z); }, 0.0, 1.0, tol);
    static_ = 0.5 * iw / iz;
    norm_ = 0.5 * M_PI * static_ / iw; // identical to pi / (4 iz)
}

double ClassicalLine::operator()(double u) const {
    if (!(u > 0.0) || u > 1.0) return 0.0;
    return norm_ * u * (1.0 - u * u) * std::exp(sigma_ * u * u);
}

double ClassicalLine::peak_location() const {
    // d/du [u (1 - u^2) e^{s u^2}] = 0 is quadratic in t = u^2:
    //   -2 s t^2 + (2 s - 3) t + 1 = 0, one root in (0, 1).
    const double s = sigma_;
    const double t = ((2.0 * s - 3.0) + std::sqrt((2.0 * s - 3.0) * (2.0 * s - 3.0) + 8.0 * s)) /
                     (4.0 * s);
    return std::sqrt(t);
}

double classical_static_susceptibility_scaled(double sigma) {
    return ClassicalLine(sigma).static_scaled();
}

double crossover_distance(const Spectrum& spec, const ClassicalLine& curve, double u_min,
                          double u_max) {
    if (!(u_min > 0.0) || !(u_max > u_min))
        throw std::invalid_argument("crossover window must satisfy 0 < u_min < u_max");
    double diff2 = 0.0, ref2 = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double u = spec.omega_scaled(i);
        if (u < u_min || u > u_max) continue;
        const double ref = curve(u);
        const double d = spec.chi_imag_scaled(i) - ref;
        diff2 += d * d;
        ref2 += ref * ref;
        ++count;
    }
    if (count == 0) throw std::invalid_argument("crossover window contains no grid points");
    if (!(ref2 > 0.0)) throw std::invalid_argument("crossover window has no classical weight");
    return std::sqrt(diff2 / static_cast<double>(count)) / std::sqrt(ref2 / static_cast<double>(count));
}

double crossover_distance(const Spectrum& spec, double sigma, double u_min, double u_max) {
    return crossover_distance(spec, ClassicalLine(sigma), u_min, u_max);
}

} // namespace spinline
