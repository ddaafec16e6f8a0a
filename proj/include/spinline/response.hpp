// response.hpp: transverse dynamical susceptibility chi(Omega) by direct
// linearization of the driven master equation about the stationary state.
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "spinline/mcf_solver.hpp"

namespace spinline {

// Harmonic transverse drive b cos(Omega t) along the given axis; linear response
// is computed per unit amplitude. Only the x axis is supported.
struct DriveSpec {
    double omega = 0.0;
    char axis = 'x';
};

// chi over a strictly increasing positive frequency grid, with the scaled views
// used for cross-spin comparisons: u = Omega / (2 D S) and chi / (S(S+1)/T).
struct Spectrum {
    std::vector<double> omega;
    std::vector<Complex> chi;
    double omega_scale = 1.0; // 2 D S, or 1 when the model has no anisotropy
    double chi0 = 1.0;        // S(S+1)/T
    std::string fingerprint;

    std::size_t size() const { return omega.size(); }
    double omega_scaled(std::size_t i) const { return omega[i] / omega_scale; }
    double chi_imag_scaled(std::size_t i) const { return chi[i].imag() / chi0; }

    // Most negative chi'' relative to the largest; passive spectra keep this
    // above -1e-8.
    double passivity_defect() const;
};

struct SweepError : std::runtime_error {
    double omega;          // frequency of the failing point
    std::size_t completed; // points that had finished when the sweep aborted
    SweepError(const std::string& what, double w, std::size_t done)
        : std::runtime_error(what), omega(w), completed(done) {}
};

// Everything reusable across frequencies: the drive-free generator (full blocks or
// the two decoupled coherence chains), the stationary state, and the negated
// forcing -f = -(drive generator applied to the equilibrium).
struct LinearResponseProblem {
    SpinModel model;
    SolveRoute route = SolveRoute::FullBlock;
    std::shared_ptr<const BlockSystem> blocks; // FullBlock route
    std::shared_ptr<const BlockSystem> chain_up, chain_down; // SectorChains route, k = +1/-1
    CoefficientVectorSet equilibrium;
    std::vector<Eigen::VectorXcd> forcing_neg;                 // FullBlock layout
    std::vector<Eigen::VectorXcd> forcing_up_neg, forcing_down_neg; // chain layout
};

LinearResponseProblem build_response_problem(const SpinModel& model, const CouplingSpec& cpl,
                                             const BathSpec& bath,
                                             SolveRoute route = SolveRoute::Auto);

// One frequency: solve (i Omega I + Q0) c1 = -f and trace c1 against S_x.
Complex susceptibility_at(const LinearResponseProblem& problem, double omega,
                          SweepDirection dir = SweepDirection::Descending);

// The same system packaged for external inspection; always the full block layout.
ShiftedSystem linear_response_system(const SpinModel& model, const CouplingSpec& cpl,
                                     const BathSpec& bath, const DriveSpec& drive);

Complex susceptibility(const SpinModel& model, const CouplingSpec& cpl, const BathSpec& bath,
                       double omega, SolveRoute route = SolveRoute::Auto);

// Frequency points are independent; threads > 1 splits them across workers.
// threads = 0 picks the hardware count. Results are merged in grid order, so the
// output is identical for any thread count.
Spectrum sweep(const SpinModel& model, const CouplingSpec& cpl, const BathSpec& bath,
               const std::vector<double>& grid, SolveRoute route = SolveRoute::Auto,
               int threads = 0);

// 600 uniform points on Omega/(2DS) in (0, 1.2] unless overridden.
std::vector<double> default_grid(const SpinModel& model, int count = 600, double span = 1.2);

// Uniform base grid plus geometric refinement fans around every adjacent-level
// frequency |D(2m+1) + Bz|, sized by the predicted coherence decay widths. Needed
// when linewidths are far below the uniform spacing (small lambda).
struct ResonanceGridOptions {
    int base_count = 600;
    double span = 1.2;              // in units of 2DS
    double width_floor_factor = 0.02; // innermost offset, in units of the width
    double width_span_factor = 100.0; // outermost offset, in units of the width
    double ratio = 1.35;            // geometric step between offsets
};
std::vector<double> make_resonance_grid(const SpinModel& model, const CouplingSpec& cpl,
                                        const BathSpec& bath,
                                        const ResonanceGridOptions& opts = {});

// Same refinement fans appended to a caller-provided base grid (sorted, positive).
std::vector<double> make_resonance_grid(const SpinModel& model, const CouplingSpec& cpl,
                                        const BathSpec& bath, std::vector<double> base,
                                        const ResonanceGridOptions& opts);

// Predicted half-width of the coherence between levels m and m+1: the total
// relaxation loss on that matrix element.
double coherence_width(const SpinModel& model, const CouplingSpec& cpl, const BathSpec& bath,
                       double m);

// Thermodynamic isothermal transverse susceptibility
//   chi_T = sum_{n != m} |<n|S_x|m>|^2 (p_m - p_n)/(eps_n - eps_m)
// with |<n|S_x|m>|^2 p_m / T for degenerate pairs. The solver's chi'(Omega -> 0)
// must approach this; the agreement pins the amplitude convention.
double thermodynamic_susceptibility(const SpinModel& model);

// Solver chi' at a probe frequency far below every transition, next to the
// independent thermodynamic value. The pair quantifies the static anchor.
struct StaticCheck {
    double chi_low_frequency = 0.0;
    double chi_thermo = 0.0;
    double probe_omega = 0.0;
};
StaticCheck static_susceptibility_check(const SpinModel& model, const CouplingSpec& cpl,
                                        const BathSpec& bath,
                                        SolveRoute route = SolveRoute::Auto);

// (2/pi) integral of chi''/Omega by trapezoid on the spectrum grid, the
// Kramers-Kronig value of chi'(0). support_ok is false when chi'' has clearly
// not decayed by the end of the grid.
struct SumRuleResult {
    double value = 0.0;
    bool support_ok = true;
};
SumRuleResult sum_rule(const Spectrum& spec);

// Indices of strict interior maxima of chi'' at least floor_rel times the global max.
std::vector<std::size_t> find_local_maxima(const Spectrum& spec, double floor_rel = 1e-6);

// Full width at half maximum around the peak at index i_peak, by linear
// interpolation of the half-height crossings. Throws if a crossing is not bracketed.
double peak_fwhm(const Spectrum& spec, std::size_t i_peak);

} // namespace spinline
