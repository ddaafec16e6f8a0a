#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinline/run.hpp"

namespace {

using nlohmann::ordered_json;
using namespace spinline;

// "MIN:MAX:N" with an optional ",scaled" suffix; bare frequency units otherwise.
ordered_json parse_grid_flag(const std::string& flag) {
    std::string spec = flag;
    bool scaled = false;
    if (const auto comma = spec.find(','); comma != std::string::npos) {
        const std::string suffix = spec.substr(comma + 1);
        if (suffix != "scaled")
            throw ConfigError("grid flag suffix must be 'scaled', got '" + suffix + "'", "grid");
        scaled = true;
        spec = spec.substr(0, comma);
    }
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? std::string::npos : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError("grid flag must be MIN:MAX:N[,scaled], got '" + flag + "'", "grid");
    try {
        std::size_t used = 0;
        const std::string s_min = spec.substr(0, c1);
        const std::string s_max = spec.substr(c1 + 1, c2 - c1 - 1);
        const std::string s_count = spec.substr(c2 + 1);
        const double lo = std::stod(s_min, &used);
        if (used != s_min.size()) throw std::invalid_argument(s_min);
        const double hi = std::stod(s_max, &used);
        if (used != s_max.size()) throw std::invalid_argument(s_max);
        const int count = std::stoi(s_count, &used);
        if (used != s_count.size()) throw std::invalid_argument(s_count);
        return ordered_json{{"min", lo}, {"max", hi}, {"count", count}, {"scaled", scaled}};
    } catch (const std::exception&) {
        throw ConfigError("grid flag must be MIN:MAX:N[,scaled], got '" + flag + "'", "grid");
    }
}

ordered_json parse_window_flag(const std::string& flag) {
    const auto colon = flag.find(':');
    if (colon == std::string::npos)
        throw ConfigError("distance window must be A:B, got '" + flag + "'", "distance_window");
    try {
        std::size_t used = 0;
        const std::string s_a = flag.substr(0, colon);
        const std::string s_b = flag.substr(colon + 1);
        const double a = std::stod(s_a, &used);
        if (used != s_a.size()) throw std::invalid_argument(s_a);
        const double b = std::stod(s_b, &used);
        if (used != s_b.size()) throw std::invalid_argument(s_b);
        return ordered_json::array({a, b});
    } catch (const std::exception&) {
        throw ConfigError("distance window must be A:B, got '" + flag + "'", "distance_window");
    }
}

void print_report(const RunReport& report) {
    for (const MemberReport& m : report.members) {
        std::printf("wrote %s  (S=%g, coupling=%s, lambda=%g)\n", m.file.c_str(), m.spin,
                    m.coupling.c_str(), m.lambda);
        if (m.peak_height) std::printf("  ground-state peak height: %.6g\n", *m.peak_height);
        if (m.peak_width) std::printf("  ground-state peak FWHM:   %.6g\n", *m.peak_width);
        if (m.distance) std::printf("  classical-curve distance:  %.6g\n", *m.distance);
        if (m.oracle)
            std::printf("  verify: max relative deviation %.3e at omega = %.6g\n",
                        m.oracle->max_rel, m.oracle->omega_at_max);
    }
    if (report.verify_skipped)
        std::printf("verify skipped: dense oracle is capped at S <= 8\n");
    std::printf("wrote %s\n", report.summary_path.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinline: absorption spectra of a uniaxial spin coupled to a bosonic bath"};
    std::string preset, config_path, output, grid_flag, window_flag;
    bool verify = false;
    app.add_option("--preset", preset, "preset name: fig1, fig2-top[:S=NN], fig2-bottom, fig3");
    app.add_option("--config", config_path, "JSON config file; flags override its keys");
    app.add_option("--output", output, "spectrum CSV path (protocols add member suffixes)");
    app.add_option("--grid", grid_flag, "frequency grid MIN:MAX:N[,scaled]");
    app.add_flag("--verify", verify, "compare against the dense oracle (S <= 8)");
    app.add_option("--distance-window", window_flag,
                   "scaled-frequency window A:B for the classical-curve distance");

    if (argc == 1) {
        std::cout << app.help();
        return 1;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        ordered_json doc = ordered_json::object();
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw IoError("cannot open config '" + config_path + "'", config_path);
            std::ostringstream buf;
            buf << f.rdbuf();
            try {
                doc = ordered_json::parse(buf.str());
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(std::string("config parse error: ") + e.what());
            }
            if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
        }
        if (!preset.empty()) doc["preset"] = preset;
        if (!output.empty()) doc["output"] = output;
        if (!grid_flag.empty()) doc["grid"] = parse_grid_flag(grid_flag);
        if (verify) doc["verify"] = true;
        if (!window_flag.empty()) doc["distance_window"] = parse_window_flag(window_flag);

        const RunConfig cfg = parse_config(doc.dump());
        const RunReport report = run(cfg);
        print_report(report);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
