// config.hpp: run configuration, JSON parsing with full-default echo, and the
// figure presets.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinline/bath.hpp"
#include "spinline/spin_model.hpp"

namespace spinline {

struct ConfigError : std::runtime_error {
    std::string key; // offending key or preset name, empty for document-level errors
    ConfigError(const std::string& what, std::string k = {})
        : std::runtime_error(what), key(std::move(k)) {}
};

// How a run turns one config into spectra.
enum class Protocol {
    Single,            // one model, one spectrum
    CrossoverSequence, // one spectrum per spin in sequence_spins at fixed sigma
    DampingLadder,     // one spectrum per coupling strength in sequence_lambda_over_s
    MatchedCouplings,  // three couplings with ground-peak intensities matched
};

const char* protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

struct GridSpec {
    double min = 0.0;
    double max = 1.2;
    int count = 600;
    bool scaled = true; // frequencies as Omega/(2DS) rather than bare Omega

    bool operator==(const GridSpec&) const = default;
};

// Fully resolved run description. Temperature, anisotropy, and sigma are tied by
// sigma = D S^2 / T: any two determine the third, and supplying all three
// consistently is allowed (the echo does exactly that).
struct RunConfig {
    std::string preset;
    Protocol protocol = Protocol::Single;

    double spin = 10.0;
    double anisotropy = 0.0;
    std::array<double, 3> field{0.0, 0.0, 0.0};
    double temperature = 1.0;
    double sigma = 0.0;          // D S^2 / T
    double xi = 0.0;             // S |B| / T
    std::string coupling = "phonon";
    int bath_exponent = 3;
    double lambda = 0.0;
    double lambda_over_s = 0.0;

    GridSpec grid;
    bool refine = false; // add resonance refinement fans to the grid
    std::string output = "spectrum.csv";
    bool verify = false;
    std::optional<std::array<double, 2>> distance_window;
    std::vector<double> sequence_spins;
    std::vector<double> sequence_lambda_over_s;
    int threads = 0; // 0 = hardware count

    bool operator==(const RunConfig&) const = default;

    SpinModel model() const { return {spin, anisotropy, field, temperature}; }
    CouplingSpec coupling_spec() const;
    BathSpec bath() const { return {lambda, bath_exponent}; }
};

// Names understood by the preset resolver; "fig2-top" also accepts the modifier
// form "fig2-top:S=NN" selecting a single member of the sequence.
std::vector<std::string> preset_names();
RunConfig preset_config(const std::string& name);

// Parses a JSON document, applies the preset named inside it first (explicit keys
// override preset values), resolves derived quantities, and validates. Unknown
// keys are rejected with the key name in the error.
RunConfig parse_config(const std::string& text);

// Serializes with every field explicit, so parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& config);

// Derives the sequence member at spin s: anisotropy from sigma at fixed
// temperature, coupling strength from lambda_over_s.
RunConfig sequence_member(const RunConfig& base, double s);

} // namespace spinline
