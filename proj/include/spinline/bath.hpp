// bath.hpp: bosonic bath spectral density, golden-rule rates, and the
// coefficients of the weak-coupling relaxation term in the level basis.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinline/spin_model.hpp"

namespace spinline {

// J(w) = lambda * w^s for w > 0, zero otherwise. s odd: 1 = Ohmic, 3 = super-Ohmic.
struct BathSpec {
    double lambda = 0.0; // coupling strength, >= 0
    int exponent = 1;    // s

    BathSpec(double lam, int s) : lambda(lam), exponent(s) {
        if (!(lam >= 0.0)) throw std::invalid_argument("BathSpec: lambda must be >= 0");
        if (s < 1 || s % 2 == 0) throw std::invalid_argument("BathSpec: s must be odd and >= 1");
    }
};

inline double spectral_density(const BathSpec& bath, double omega) {
    return omega > 0.0 ? bath.lambda * std::pow(omega, bath.exponent) : 0.0;
}

// W(Delta) = J(Delta) n_Delta + J(-Delta)(n_{-Delta} + 1): absorption for Delta > 0,
// stimulated plus spontaneous emission for Delta < 0. Satisfies detailed balance
// W(Delta) = exp(-Delta/T) W(-Delta). Below |Delta|/T = 1e-8 the analytic small-Delta
// limit lambda T |Delta|^{s-1} is used; it is the exact limit for both signs.
inline double rate(const BathSpec& bath, double delta, double temperature) {
    if (!(temperature > 0.0)) throw std::invalid_argument("rate: T must be > 0");
    const double a = std::abs(delta);
    if (a / temperature < 1e-8) {
        if (bath.exponent == 1) return bath.lambda * temperature;
        return bath.lambda * temperature * std::pow(a, bath.exponent - 1);
    }
    const double j = bath.lambda * std::pow(a, bath.exponent);
    if (delta > 0.0) return j / std::expm1(delta / temperature);
    return j / (-std::expm1(-a / temperature));
}

// Which diagonal function v(S_z) multiplies the ladder operators in the coupling
// F = eta_+ {v(S_z), S_-} + eta_- {v(S_z), S_+}.
enum class VKind {
    Constant,   // v(m) = v_const; at v = 1/2 the coupling is eta (S_- + S_+)
    LinearInSz, // v(m) = m; vanishes near the barrier top, grows toward the wells
};

struct CouplingSpec {
    VKind v_kind = VKind::Constant;
    double v_const = 0.5;
    double eta_plus = 0.5;
    double eta_minus = 0.5;
    // Multiplies every amplitude by the anisotropy D, so relaxation coefficients
    // carry the D^2 characteristic of strain-mediated (phonon) coupling.
    bool anisotropy_prefactor = false;

    double v(double m) const { return v_kind == VKind::Constant ? v_const : m; }

    void validate() const {
        if (eta_plus != eta_minus)
            throw std::invalid_argument("CouplingSpec: eta_plus must equal eta_minus "
                                        "(F is Hermitian with real v)");
        if (!std::isfinite(eta_plus) || !std::isfinite(v_const))
            throw std::invalid_argument("CouplingSpec: parameters must be finite");
    }
};

// F = 1/2 (S_- + S_+) = S_x with the default eta = 1/2.
inline CouplingSpec electron_hole_coupling() { return {VKind::Constant, 0.5, 0.5, 0.5, false}; }

// v(m) = m with amplitude prefactor D; pairs with a super-Ohmic bath.
inline CouplingSpec phonon_coupling() { return {VKind::LinearInSz, 0.5, 1.0, 1.0, true}; }

// Bilinear coupling like electron_hole_coupling(); callers pair it with s = 3.
inline CouplingSpec hybrid_coupling() { return {VKind::Constant, 0.5, 0.5, 0.5, false}; }

// Amplitudes L_{m,m-1} = pref * eta_+ [v(m) + v(m-1)] l_{m,m-1} for m = -S+1..S.
// Real because eta and v are real. L at the window ends vanishes with the ladder factor.
struct CouplingElements {
    double spin = 0.5;
    std::vector<double> up; // up[j] = L_{m_j, m_j - 1}, j = index_of(m_j), up[0] unused

    // L_{m,m-1}; zero outside the physical window.
    double l_up(double m) const {
        const double x = m + spin;
        const long long j = std::llround(x);
        if (std::abs(x - j) > 1e-9) throw std::domain_error("CouplingElements: misaligned m");
        if (j < 1 || j >= static_cast<long long>(up.size())) return 0.0;
        return up[static_cast<std::size_t>(j)];
    }
};

inline CouplingElements coupling_elements(const SpinModel& model, const CouplingSpec& cpl) {
    cpl.validate();
    const double pref = cpl.anisotropy_prefactor ? model.anisotropy : 1.0;
    CouplingElements out;
    out.spin = model.spin;
    out.up.assign(static_cast<std::size_t>(model.dim()), 0.0);
    for (int j = 1; j < model.dim(); ++j) {
        const double m = model.level_m(j);
        out.up[static_cast<std::size_t>(j)] =
            pref * cpl.eta_plus * (cpl.v(m) + cpl.v(m - 1.0)) * model.ladder(m - 1.0);
    }
    return out;
}

// Coefficients of the relaxation term in d<X_n^m>/dt:
//   gain_up   multiplies <X_{n-1}^{m-1}>,
//   loss      (sum of the four loss_parts) multiplies <X_n^m>,
//   gain_down multiplies <X_{n+1}^{m+1}>.
// All real for real coupling amplitudes.
struct RedfieldCoefficients {
    double gain_up = 0.0;
    double gain_down = 0.0;
    std::array<double, 4> loss_parts{}; // {up from n, up from m, down from n, down from m}

    double loss() const {
        return -(loss_parts[0] + loss_parts[1] + loss_parts[2] + loss_parts[3]);
    }
};

inline RedfieldCoefficients redfield_coefficients(const SpinModel& model,
                                                  const CouplingElements& elems,
                                                  const BathSpec& bath, double n, double m) {
    (void)model.index_of(n);
    (void)model.index_of(m);
    const double T = model.temperature;
    auto w = [&](double a, double b) { return rate(bath, model.transition_frequency(a, b), T); };

    RedfieldCoefficients out;
    const double l_n = elems.l_up(n);       // L_{n,n-1}
    const double l_m = elems.l_up(m);       // L_{m,m-1}
    const double l_n1 = elems.l_up(n + 1.0); // L_{n+1,n}
    const double l_m1 = elems.l_up(m + 1.0); // L_{m+1,m}

    if (l_n != 0.0 && l_m != 0.0)
        out.gain_up = l_n * l_m * (w(n, n - 1.0) + w(m, m - 1.0));
    if (l_n1 != 0.0 && l_m1 != 0.0)
        out.gain_down = l_n1 * l_m1 * (w(n, n + 1.0) + w(m, m + 1.0));
    if (l_n1 != 0.0) out.loss_parts[0] = l_n1 * l_n1 * w(n + 1.0, n);
    if (l_m1 != 0.0) out.loss_parts[1] = l_m1 * l_m1 * w(m + 1.0, m);
    if (l_n != 0.0) out.loss_parts[2] = l_n * l_n * w(n - 1.0, n);
    if (l_m != 0.0) out.loss_parts[3] = l_m * l_m * w(m - 1.0, m);
    return out;
}

} // namespace spinline
