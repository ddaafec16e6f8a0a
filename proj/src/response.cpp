#include "spinline/response.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "spinline/bath.hpp"

namespace spinline {

namespace {

std::string make_fingerprint(const SpinModel& model, const CouplingSpec& cpl,
                             const BathSpec& bath) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "S=%.17g D=%.17g B=(%.17g,%.17g,%.17g) T=%.17g v=%s eta=%.17g pref=%d "
                  "s=%d lambda=%.17g",
                  model.spin, model.anisotropy, model.field[0], model.field[1], model.field[2],
                  model.temperature, cpl.v_kind == VKind::Constant ? "const" : "sz",
                  cpl.eta_plus, cpl.anisotropy_prefactor ? 1 : 0, bath.exponent, bath.lambda);
    return buf;
}

// chi = sum_m (l_m / 2) [ (c_{m+1})_m + (c_m)_{m+1} ], the S_x trace of the
// first-order state in the full block layout.
Complex trace_sx_full(const SpinModel& model, const std::vector<Eigen::VectorXcd>& c) {
    Complex chi = 0.0;
    for (int j = 0; j + 1 < model.dim(); ++j) {
        const double w = 0.5 * model.ladder(model.level_m(j));
        chi += w * (c[static_cast<std::size_t>(j) + 1](j) + c[static_cast<std::size_t>(j)](j + 1));
    }
    return chi;
}

SolveRoute resolve_route(const SpinModel& model, SolveRoute route) {
    if (route == SolveRoute::Auto)
        return model.longitudinal() ? SolveRoute::SectorChains : SolveRoute::FullBlock;
    if (route == SolveRoute::SectorChains && !model.longitudinal())
        throw std::invalid_argument("sector route needs a longitudinal field");
    return route;
}

} // namespace

double Spectrum::passivity_defect() const {
    double peak = 0.0, dip = 0.0;
    for (const Complex& v : chi) {
        peak = std::max(peak, std::abs(v.imag()));
        dip = std::min(dip, v.imag());
    }
    return peak > 0.0 ? -dip / peak : 0.0;
}

LinearResponseProblem build_response_problem(const SpinModel& model, const CouplingSpec& cpl,
                                             const BathSpec& bath, SolveRoute route) {
    LinearResponseProblem p{model, resolve_route(model, route), nullptr, nullptr, nullptr,
                            stationary_state(model, cpl, bath, route), {}, {}, {}};
    const CoefficientVectorSet f = apply_transverse_drive(model, p.equilibrium);
    const int dim = model.dim();
    if (p.route == SolveRoute::FullBlock) {
        p.blocks = std::make_shared<const BlockSystem>(build_blocks(model, cpl, bath));
        p.forcing_neg.resize(static_cast<std::size_t>(dim));
        for (int n = 0; n < dim; ++n) p.forcing_neg[static_cast<std::size_t>(n)] = -f.c[static_cast<std::size_t>(n)];
        return p;
    }
    // The drive applied to a diagonal state forces only the two coherence chains
    // adjacent to the diagonal; each chain entry j sits at levels (m_{j+k}, m_j).
    p.chain_up = std::make_shared<const BlockSystem>(build_sector_chain(model, cpl, bath, +1));
    p.chain_down = std::make_shared<const BlockSystem>(build_sector_chain(model, cpl, bath, -1));
    const int len = sector_chain_length(dim, +1);
    p.forcing_up_neg.resize(static_cast<std::size_t>(len));
    p.forcing_down_neg.resize(static_cast<std::size_t>(len));
    for (int j = 0; j < len; ++j) {
        p.forcing_up_neg[static_cast<std::size_t>(j)] = Eigen::VectorXcd::Constant(1, -f.c[static_cast<std::size_t>(j) + 1](j));
        p.forcing_down_neg[static_cast<std::size_t>(j)] = Eigen::VectorXcd::Constant(1, -f.c[static_cast<std::size_t>(j)](j + 1));
    }
    return p;
}

Complex susceptibility_at(const LinearResponseProblem& problem, double omega,
                          SweepDirection dir) {
    if (!std::isfinite(omega)) throw std::invalid_argument("susceptibility: omega must be finite");
    const Complex shift(0.0, omega);
    try {
        if (problem.route == SolveRoute::FullBlock) {
            const auto x = solve_shifted(*problem.blocks, shift, problem.forcing_neg, dir);
            return trace_sx_full(problem.model, x);
        }
        const auto up = solve_shifted(*problem.chain_up, shift, problem.forcing_up_neg, dir);
        const auto down = solve_shifted(*problem.chain_down, shift, problem.forcing_down_neg, dir);
        Complex chi = 0.0;
        for (std::size_t j = 0; j < up.size(); ++j) {
            const double w = 0.5 * problem.model.ladder(problem.model.level_m(static_cast<int>(j)));
            chi += w * (up[j](0) + down[j](0));
        }
        return chi;
    } catch (const SolverError& e) {
        throw SolverError(std::string(e.what()) + " at omega = " + std::to_string(omega),
                          e.block_index);
    }
}

ShiftedSystem linear_response_system(const SpinModel& model, const CouplingSpec& cpl,
                                     const BathSpec& bath, const DriveSpec& drive) {
    if (drive.axis != 'x') throw std::invalid_argument("drive axis must be 'x'");
    if (!std::isfinite(drive.omega)) throw std::invalid_argument("drive omega must be finite");
    LinearResponseProblem p = build_response_problem(model, cpl, bath, SolveRoute::FullBlock);
    return {p.blocks, Complex(0.0, drive.omega), std::move(p.forcing_neg)};
}

Complex susceptibility(const SpinModel& model, const CouplingSpec& cpl, const BathSpec& bath,
                       double omega, SolveRoute route) {
    return susceptibility_at(build_response_problem(model, cpl, bath, route), omega);
}

Spectrum sweep(const SpinModel& model, const CouplingSpec& cpl, const BathSpec& bath,
               const std::vector<double>& grid, SolveRoute route, int threads) {
    Spectrum spec;
    spec.omega = grid;
    spec.omega_scale = model.anisotropy > 0.0 ? 2.0 * model.anisotropy * model.spin : 1.0;
    spec.chi0 = model.spin * (model.spin + 1.0) / model.temperature;
    spec.fingerprint = make_fingerprint(model, cpl, bath);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
            throw std::invalid_argument("sweep: grid must be positive and finite");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw std::invalid_argument("sweep: grid must be strictly increasing");
    }
    spec.chi.assign(grid.size(), Complex(0.0));
    if (grid.empty()) return spec;

    const LinearResponseProblem problem = build_response_problem(model, cpl, bath, route);
    int want = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (want < 1) want = 1;
    const int nthreads = static_cast<int>(std::min<std::size_t>(grid.size(), static_cast<std::size_t>(want)));

    std::atomic<std::size_t> completed{0};
    std::mutex fail_mutex;
    std::string fail_what;
    double fail_omega = 0.0;
    bool failed = false;

    auto work = [&](int tid) {
        for (std::size_t i = static_cast<std::size_t>(tid); i < grid.size();
             i += static_cast<std::size_t>(nthreads)) {
            try {
                spec.chi[i] = susceptibility_at(problem, grid[i]);
                completed.fetch_add(1, std::memory_order_relaxed);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failed || grid[i] < fail_omega) {
                    failed = true;
                    fail_what = e.what();
                    fail_omega = grid[i];
                }
            }
        }
    };

    if (nthreads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
        for (std::thread& t : pool) t.join();
    }
    if (failed)
        throw SweepError("sweep failed at omega = " + std::to_string(fail_omega) + ": " + fail_what,
                         fail_omega, completed.load());
    return spec;
}

std::vector<double> default_grid(const SpinModel& model, int count, double span) {
    if (count < 1) throw std::invalid_argument("grid count must be >= 1");
    if (!(span > 0.0)) throw std::invalid_argument("grid span must be > 0");
    const double scale = 2.0 * model.anisotropy * model.spin;
    if (!(scale > 0.0)) throw std::invalid_argument("scaled grid needs anisotropy > 0");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] = span * scale * (i + 1) / count;
    return grid;
}

double coherence_width(const SpinModel& model, const CouplingSpec& cpl, const BathSpec& bath,
                       double m) {
    model.index_of(m);
    model.index_of(m + 1.0);
    const CouplingElements elems = coupling_elements(model, cpl);
    return -redfield_coefficients(model, elems, bath, m + 1.0, m).loss();
}

std::vector<double> make_resonance_grid(const SpinModel& model, const CouplingSpec& cpl,
                                        const BathSpec& bath, const ResonanceGridOptions& opts) {
    return make_resonance_grid(model, cpl, bath, default_grid(model, opts.base_count, opts.span),
                               opts);
}

std::vector<double> make_resonance_grid(const SpinModel& model, const CouplingSpec& cpl,
                                        const BathSpec& bath, std::vector<double> base,
                                        const ResonanceGridOptions& opts) {
    if (!(opts.ratio > 1.0)) throw std::invalid_argument("refinement ratio must be > 1");
    if (!(opts.width_floor_factor > 0.0) || !(opts.width_span_factor >= opts.width_floor_factor))
        throw std::invalid_argument("refinement span is empty");
    if (base.empty() || !(base.front() > 0.0))
        throw std::invalid_argument("refinement needs a positive base grid");
    std::vector<double> grid = std::move(base);
    const double top = grid.back();
    for (int j = 0; j + 1 < model.dim(); ++j) {
        const double m = model.level_m(j);
        const double locus = std::abs(model.transition_frequency(m + 1.0, m));
        if (!(locus > 0.0) || locus > top) continue;
        const double width = std::max(coherence_width(model, cpl, bath, m), 1e-13 * top);
        grid.push_back(locus);
        for (double d = width * opts.width_floor_factor; d <= width * opts.width_span_factor;
             d *= opts.ratio) {
            if (locus - d > 0.0) grid.push_back(locus - d);
            if (locus + d <= top) grid.push_back(locus + d);
        }
    }
    std::sort(grid.begin(), grid.end());
    std::vector<double> out;
    out.reserve(grid.size());
    const double tol = 1e-12 * top;
    for (double w : grid)
        if (out.empty() || w - out.back() > tol) out.push_back(w);
    return out;
}

double thermodynamic_susceptibility(const SpinModel& model) {
    const std::vector<double> p = boltzmann_populations(model);
    double chi = 0.0;
    for (const SxElement& e : sx_matrix_elements(model)) {
        const int ni = model.index_of(e.m_row);
        const int mi = model.index_of(e.m_col);
        const double en = model.level_energy(e.m_row);
        const double em = model.level_energy(e.m_col);
        const double gap = en - em;
        const double w2 = e.value * e.value;
        if (std::abs(gap) <= 1e-12 * (std::abs(en) + std::abs(em) + model.temperature))
            chi += w2 * p[static_cast<std::size_t>(mi)] / model.temperature;
        else
            chi += w2 * (p[static_cast<std::size_t>(mi)] - p[static_cast<std::size_t>(ni)]) / gap;
    }
    return chi;
}

StaticCheck static_susceptibility_check(const SpinModel& model, const CouplingSpec& cpl,
                                        const BathSpec& bath, SolveRoute route) {
    // Probe far below the smallest level spacing; with no anisotropy fall back
    // to the field scale, then the temperature.
    double scale = model.anisotropy;
    if (!(scale > 0.0)) scale = std::abs(model.field[2]);
    if (!(scale > 0.0)) scale = model.temperature;
    StaticCheck out;
    out.probe_omega = 1e-4 * scale;
    out.chi_thermo = thermodynamic_susceptibility(model);
    out.chi_low_frequency = susceptibility(model, cpl, bath, out.probe_omega, route).real();
    return out;
}

SumRuleResult sum_rule(const Spectrum& spec) {
    if (spec.size() < 2) throw std::invalid_argument("sum rule needs at least two points");
    SumRuleResult out;
    const auto y = [&](std::size_t i) { return spec.chi[i].imag() / spec.omega[i]; };
    // Flat extrapolation of chi''/Omega across the leading gap [0, omega_0].
    double integral = y(0) * spec.omega[0];
    double peak = 0.0;
    for (std::size_t i = 0; i + 1 < spec.size(); ++i) {
        integral += 0.5 * (y(i) + y(i + 1)) * (spec.omega[i + 1] - spec.omega[i]);
        peak = std::max(peak, std::abs(spec.chi[i].imag()));
    }
    peak = std::max(peak, std::abs(spec.chi.back().imag()));
    out.value = integral * 2.0 / M_PI;
    out.support_ok = peak == 0.0 || std::abs(spec.chi.back().imag()) <= 1e-2 * peak;
    return out;
}

std::vector<std::size_t> find_local_maxima(const Spectrum& spec, double floor_rel) {
    std::vector<std::size_t> out;
    if (spec.size() < 3) return out;
    double peak = 0.0;
    for (const Complex& v : spec.chi) peak = std::max(peak, v.imag());
    for (std::size_t i = 1; i + 1 < spec.size(); ++i) {
        const double v = spec.chi[i].imag();
        if (v > spec.chi[i - 1].imag() && v > spec.chi[i + 1].imag() && v >= floor_rel * peak)
            out.push_back(i);
    }
    return out;
}

double peak_fwhm(const Spectrum& spec, std::size_t i_peak) {
    if (i_peak >= spec.size()) throw std::invalid_argument("peak index out of range");
    const double half = 0.5 * spec.chi[i_peak].imag();
    if (!(half > 0.0)) throw std::invalid_argument("peak height must be positive");
    const auto v = [&](std::size_t i) { return spec.chi[i].imag(); };
    const auto cross = [&](std::size_t lo, std::size_t hi) {
        // Linear interpolation of the half-height crossing between two grid points.
        const double t = (half - v(lo)) / (v(hi) - v(lo));
        return spec.omega[lo] + t * (spec.omega[hi] - spec.omega[lo]);
    };
    std::size_t i = i_peak;
    while (i > 0 && v(i) >= half) --i;
    if (v(i) >= half) throw std::runtime_error("left half-height crossing not bracketed");
    const double left = cross(i, i + 1);
    std::size_t j = i_peak;
    while (j + 1 < spec.size() && v(j) >= half) ++j;
    if (v(j) >= half) throw std::runtime_error("right half-height crossing not bracketed");
    const double right = cross(j - 1, j);
    return right - left;
}

} // namespace spinline
