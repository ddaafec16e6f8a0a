// run.hpp: executes a RunConfig end to end: sweeps, intensity matching, distance
// reports, oracle verification, CSV/JSON artifacts.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinline/config.hpp"
#include "spinline/oracle.hpp"
#include "spinline/response.hpp"

namespace spinline {

struct IoError : std::runtime_error {
    std::string path;
    IoError(const std::string& what, std::string p) : std::runtime_error(what), path(std::move(p)) {}
};

// One spectrum within a run (protocols may produce several).
struct MemberReport {
    std::string file;
    double spin = 0.0;
    double lambda = 0.0;
    std::string coupling;
    double omega_scale = 1.0;
    double chi0 = 1.0;
    std::optional<double> distance;    // crossover distance over the config window
    std::optional<double> peak_height; // ground-state peak, when the protocol uses it
    std::optional<double> peak_width;
    std::optional<ComparisonReport> oracle;
};

struct RunReport {
    RunConfig config;
    std::vector<MemberReport> members;
    std::string summary_path;
    bool verify_skipped = false; // verify requested but spin above the oracle cap
};

// Runs the configured protocol and writes every artifact. Throws ConfigError,
// IoError, or solver errors; the CLI maps these to exit codes.
RunReport run(const RunConfig& config);

// The stable spectrum document: magic line, column header, then one
// 15-significant-digit scientific row per frequency.
std::string format_csv(const Spectrum& spec);

void write_file(const std::string& path, const std::string& content);

// "dir/name.csv" + "-S5" -> "dir/name-S5.csv"; no extension appends the suffix.
std::string output_with_suffix(const std::string& path, const std::string& suffix);

// "dir/name.csv" -> "dir/name.json"
std::string sidecar_path(const std::string& path);

} // namespace spinline
