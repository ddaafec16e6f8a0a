// spin_model.hpp: uniaxial spin multiplet, ladder factors, level energies, S_x elements.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinline {

// Ladder factor l_m = sqrt(S(S+1) - m(m+1)), the S_+ matrix element <m+1|S_+|m>.
// Valid for m in {-S-1, ..., S}; exactly zero at both ends of that window.
inline double ladder_factor(double spin, double m) {
    const double x = m + spin;
    if (x < -1.5 || x > 2.0 * spin + 0.5 || std::abs(x - std::llround(x)) > 1e-9)
        throw std::domain_error("ladder_factor: m outside {-S-1, ..., S} for S=" +
                                std::to_string(spin));
    const double v = spin * (spin + 1.0) - m * (m + 1.0);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

// Spin S in the potential -D S_z^2 - B.S at temperature T (hbar = k_B = 1).
// Levels are labeled by m = -S..S; storage index i = m + S. Immutable after construction.
struct SpinModel {
    double spin = 0.5;             // S, half-integer, 2S >= 1
    double anisotropy = 0.0;       // D >= 0
    std::array<double, 3> field{}; // B = (Bx, By, Bz)
    double temperature = 1.0;      // T > 0

    SpinModel(double S, double D, std::array<double, 3> B, double T)
        : spin(S), anisotropy(D), field(B), temperature(T) {
        const double two_s = 2.0 * S;
        if (!(two_s >= 1.0) || std::abs(two_s - std::llround(two_s)) > 1e-9)
            throw std::invalid_argument("SpinModel: 2S must be a positive integer");
        if (!(D >= 0.0)) throw std::invalid_argument("SpinModel: D must be >= 0");
        if (!(T > 0.0)) throw std::invalid_argument("SpinModel: T must be > 0");
        for (double b : field)
            if (!std::isfinite(b)) throw std::invalid_argument("SpinModel: B must be finite");
        if (two_s > 10000.0) throw std::invalid_argument("SpinModel: S too large");
        dim_ = static_cast<int>(std::llround(two_s)) + 1;
    }

    int dim() const { return dim_; }

    double level_m(int i) const {
        if (i < 0 || i >= dim_) throw std::domain_error("SpinModel: level index out of range");
        return static_cast<double>(i) - spin;
    }

    int index_of(double m) const {
        const double x = m + spin;
        const long long i = std::llround(x);
        if (std::abs(x - i) > 1e-9 || i < 0 || i >= dim_)
            throw std::domain_error("SpinModel: m is not a level of this multiplet");
        return static_cast<int>(i);
    }

    // eps_m = -D m^2 - Bz m, the diagonal part of the Hamiltonian.
    double level_energy(double m) const {
        (void)index_of(m);
        return -anisotropy * m * m - field[2] * m;
    }

    // Delta_{nm} = eps_n - eps_m. Adjacent levels: Delta_{m,m+1} = D(2m+1) + Bz.
    double transition_frequency(double n, double m) const {
        return level_energy(n) - level_energy(m);
    }

    double ladder(double m) const { return ladder_factor(spin, m); }

    double sigma() const { return anisotropy * spin * spin / temperature; }
    double xi() const {
        const double b = std::sqrt(field[0] * field[0] + field[1] * field[1] +
                                   field[2] * field[2]);
        return spin * b / temperature;
    }

    // True when the static field has no transverse component; the generator then
    // conserves the coherence sector k = n - m.
    bool longitudinal() const { return field[0] == 0.0 && field[1] == 0.0; }

  private:
    int dim_ = 2;
};

// One matrix element of S_x; only |m_row - m_col| = 1 entries exist.
struct SxElement {
    double m_row = 0.0;
    double m_col = 0.0;
    double value = 0.0;
};

// <m|S_x|m+1> = l_m / 2 and its transpose; 2*(2S) entries in ascending row order.
inline std::vector<SxElement> sx_matrix_elements(const SpinModel& model) {
    std::vector<SxElement> out;
    out.reserve(2 * (model.dim() - 1));
    for (int i = 0; i + 1 < model.dim(); ++i) {
        const double m = model.level_m(i);
        const double half_l = 0.5 * model.ladder(m);
        out.push_back({m, m + 1.0, half_l});
        out.push_back({m + 1.0, m, half_l});
    }
    return out;
}

// Gibbs populations p_m of the diagonal Hamiltonian, normalized to sum 1.
// Energies are shifted by their minimum before exponentiation so large sigma stays finite.
inline std::vector<double> boltzmann_populations(const SpinModel& model) {
    std::vector<double> p(model.dim());
    double emin = model.level_energy(model.level_m(0));
    for (int i = 1; i < model.dim(); ++i)
        emin = std::min(emin, model.level_energy(model.level_m(i)));
    double z = 0.0;
    for (int i = 0; i < model.dim(); ++i) {
        p[i] = std::exp(-(model.level_energy(model.level_m(i)) - emin) / model.temperature);
        z += p[i];
    }
    for (double& v : p) v /= z;
    return p;
}

} // namespace spinline
