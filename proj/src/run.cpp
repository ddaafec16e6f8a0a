#include "spinline/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "spinline/classical.hpp"

namespace spinline {

namespace {

using nlohmann::ordered_json;

std::string format_suffix_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::vector<double> build_grid(const RunConfig& cfg, const SpinModel& model,
                               const CouplingSpec& cpl, const BathSpec& bath) {
    const double unit = cfg.grid.scaled ? 2.0 * model.anisotropy * model.spin : 1.0;
    std::vector<double> base(static_cast<std::size_t>(cfg.grid.count));
    for (int i = 0; i < cfg.grid.count; ++i)
        base[static_cast<std::size_t>(i)] =
            unit * (cfg.grid.min + (cfg.grid.max - cfg.grid.min) * (i + 1) / cfg.grid.count);
    if (!cfg.refine) return base;
    return make_resonance_grid(model, cpl, bath, base, {});
}

// Height of the highest-frequency (deepest-level) peak: the largest chi'' above
// the midpoint between the top two transition frequencies.
double ground_peak_height(const Spectrum& spec, double spin) {
    const double u_min = 1.0 - 1.0 / spin;
    double h = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (spec.omega_scaled(i) > u_min) h = std::max(h, spec.chi[i].imag());
    if (!(h > 0.0)) throw std::runtime_error("ground-state peak not found on the grid");
    return h;
}

struct MemberResult {
    MemberReport report;
    Spectrum spec;
};

MemberResult run_member(const RunConfig& cfg) {
    const SpinModel model = cfg.model();
    const CouplingSpec cpl = cfg.coupling_spec();
    const BathSpec bath = cfg.bath();
    MemberResult out;
    out.spec = sweep(model, cpl, bath, build_grid(cfg, model, cpl, bath), SolveRoute::Auto,
                     cfg.threads);
    out.report.file = cfg.output;
    out.report.spin = cfg.spin;
    out.report.lambda = cfg.lambda;
    out.report.coupling = cfg.coupling;
    out.report.omega_scale = out.spec.omega_scale;
    out.report.chi0 = out.spec.chi0;
    if (cfg.distance_window)
        out.report.distance = crossover_distance(out.spec, model.sigma(), (*cfg.distance_window)[0],
                                                 (*cfg.distance_window)[1]);
    return out;
}

void verify_member(const RunConfig& cfg, const Spectrum& spec, MemberReport& report) {
    const SpinModel model = cfg.model();
    const CouplingSpec cpl = cfg.coupling_spec();
    const BathSpec bath = cfg.bath();
    // Subsample to keep the dense solves cheap; 20 points pin the whole sweep.
    const std::size_t stride = std::max<std::size_t>(1, spec.size() / 20);
    std::vector<double> omega;
    std::vector<Complex> block_chi, dense_chi;
    for (std::size_t i = 0; i < spec.size(); i += stride) {
        omega.push_back(spec.omega[i]);
        block_chi.push_back(spec.chi[i]);
        dense_chi.push_back(oracle_susceptibility(model, cpl, bath, spec.omega[i]));
    }
    report.oracle = compare(omega, block_chi, dense_chi);
}

// Secant iteration on ln(lambda) matching the ground-peak height of `coupling`
// to the reference height; peak heights scale roughly as 1/lambda, so the first
// corrected guess is already close.
MemberResult match_intensity(const RunConfig& base, const std::string& coupling,
                             double reference_height) {
    RunConfig cfg = base;
    cfg.coupling = coupling;
    cfg.bath_exponent = coupling == "electron-hole" ? 1 : 3;
    const double rel_tol = 1e-4;
    double x_prev = 0.0, g_prev = 0.0;
    bool have_prev = false;
    double x = std::log(base.lambda);
    for (int iter = 0; iter < 40; ++iter) {
        cfg.lambda = std::exp(x);
        cfg.lambda_over_s = cfg.lambda / cfg.spin;
        MemberResult r = run_member(cfg);
        const double h = ground_peak_height(r.spec, cfg.spin);
        r.report.peak_height = h;
        const double g = std::log(h / reference_height);
        if (std::abs(h / reference_height - 1.0) <= rel_tol) return r;
        double x_next;
        if (!have_prev || g == g_prev) {
            x_next = x + g; // first step assumes height proportional to 1/lambda
        } else {
            x_next = x - g * (x - x_prev) / (g - g_prev);
        }
        x_prev = x;
        g_prev = g;
        have_prev = true;
        x = x_next;
    }
    throw std::runtime_error("intensity match for coupling '" + coupling +
                             "' did not converge in 40 iterations");
}

ordered_json member_json(const MemberReport& m) {
    ordered_json o;
    o["file"] = m.file;
    o["spin"] = m.spin;
    o["lambda"] = m.lambda;
    o["coupling"] = m.coupling;
    o["omega_scale"] = m.omega_scale;
    o["chi0"] = m.chi0;
    if (m.distance) o["distance"] = *m.distance;
    if (m.peak_height) o["peak_height"] = *m.peak_height;
    if (m.peak_width) o["peak_width"] = *m.peak_width;
    if (m.oracle) {
        o["oracle"] = {{"max_rel", m.oracle->max_rel},
                       {"mean_rel", m.oracle->mean_rel},
                       {"omega_at_max", m.oracle->omega_at_max}};
    }
    return o;
}

} // namespace

std::string format_csv(const Spectrum& spec) {
    std::string out = "# spinline v1\nomega,omega_scaled,chi_real,chi_imag,chi_imag_scaled\n";
    char row[200];
    for (std::size_t i = 0; i < spec.size(); ++i) {
        std::snprintf(row, sizeof row, "%.14e,%.14e,%.14e,%.14e,%.14e\n", spec.omega[i],
                      spec.omega_scaled(i), spec.chi[i].real(), spec.chi[i].imag(),
                      spec.chi_imag_scaled(i));
        out += row;
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing", path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed", path);
}

std::string output_with_suffix(const std::string& path, const std::string& suffix) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

std::string sidecar_path(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ".json";
    return path.substr(0, dot) + ".json";
}

RunReport run(const RunConfig& config) {
    RunReport report;
    report.config = config;
    std::vector<MemberResult> results;

    switch (config.protocol) {
        case Protocol::Single: {
            results.push_back(run_member(config));
            break;
        }
        case Protocol::CrossoverSequence: {
            for (double s : config.sequence_spins) {
                RunConfig m = sequence_member(config, s);
                m.output = output_with_suffix(config.output, "-S" + format_suffix_number(s));
                results.push_back(run_member(m));
            }
            break;
        }
        case Protocol::DampingLadder: {
            for (double los : config.sequence_lambda_over_s) {
                RunConfig m = config;
                m.protocol = Protocol::Single;
                m.lambda_over_s = los;
                m.lambda = los * m.spin;
                m.sequence_lambda_over_s.clear();
                m.output = output_with_suffix(config.output, "-l" + format_suffix_number(los));
                results.push_back(run_member(m));
                MemberResult& r = results.back();
                // The damping ladder is about peak heights and widths.
                try {
                    r.report.peak_height = ground_peak_height(r.spec, m.spin);
                    const double u_min = 1.0 - 1.0 / m.spin;
                    std::size_t best = 0;
                    double h = 0.0;
                    for (std::size_t i = 0; i < r.spec.size(); ++i)
                        if (r.spec.omega_scaled(i) > u_min && r.spec.chi[i].imag() > h) {
                            h = r.spec.chi[i].imag();
                            best = i;
                        }
                    r.report.peak_width = peak_fwhm(r.spec, best);
                } catch (const std::exception&) {
                    // Peak statistics stay unset when the grid cannot resolve them.
                }
            }
            break;
        }
        case Protocol::MatchedCouplings: {
            RunConfig ref = config;
            ref.protocol = Protocol::Single;
            ref.output = output_with_suffix(config.output, "-" + config.coupling);
            results.push_back(run_member(ref));
            const double href = ground_peak_height(results.front().spec, ref.spin);
            results.front().report.peak_height = href;
            for (const std::string& name : {std::string("phonon"), std::string("hybrid"),
                                            std::string("electron-hole")}) {
                if (name == config.coupling) continue;
                RunConfig m = config;
                m.protocol = Protocol::Single;
                m.output = output_with_suffix(config.output, "-" + name);
                MemberResult r = match_intensity(m, name, href);
                results.push_back(std::move(r));
            }
            break;
        }
    }

    for (MemberResult& r : results) {
        if (config.verify) {
            if (r.report.spin > 8.0) {
                report.verify_skipped = true;
            } else {
                RunConfig m = config;
                m.protocol = Protocol::Single;
                m.spin = r.report.spin;
                m.lambda = r.report.lambda;
                m.lambda_over_s = m.lambda / m.spin;
                m.coupling = r.report.coupling;
                m.bath_exponent = r.report.coupling == "electron-hole" ? 1 : 3;
                if (config.protocol == Protocol::CrossoverSequence)
                    m.anisotropy = config.sigma * config.temperature / (m.spin * m.spin);
                verify_member(m, r.spec, r.report);
            }
        }
        write_file(r.report.file, format_csv(r.spec));
        report.members.push_back(r.report);
    }

    ordered_json summary;
    summary["config"] = ordered_json::parse(echo_config(config));
    summary["members"] = ordered_json::array();
    for (const MemberReport& m : report.members) summary["members"].push_back(member_json(m));
    if (report.verify_skipped) summary["verify_skipped"] = true;
    report.summary_path = sidecar_path(config.output);
    write_file(report.summary_path, summary.dump(2) + "\n");
    return report;
}

} // namespace spinline
