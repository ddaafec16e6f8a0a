#include "spinline/config.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

#include "json.hpp"

namespace spinline {

namespace {

using nlohmann::ordered_json;

// Everything a document or preset may specify, before derived values are filled.
struct Draft {
    std::optional<std::string> preset;
    std::optional<Protocol> protocol;
    std::optional<double> spin, anisotropy, temperature, sigma, xi, lambda, lambda_over_s;
    std::optional<std::array<double, 3>> field;
    std::optional<std::string> coupling, output;
    std::optional<int> bath_exponent, threads;
    std::optional<double> grid_min, grid_max;
    std::optional<int> grid_count;
    std::optional<bool> grid_scaled, refine, verify;
    std::optional<std::optional<std::array<double, 2>>> distance_window;
    std::optional<std::vector<double>> sequence_spins, sequence_lambda_over_s;
};

// base, with every member the user set replacing the preset's choice
void merge_over(Draft& base, const Draft& user) {
    const auto take = [](auto& dst, const auto& src) {
        if (src) dst = src;
    };
    take(base.protocol, user.protocol);
    take(base.spin, user.spin);
    take(base.anisotropy, user.anisotropy);
    take(base.temperature, user.temperature);
    take(base.sigma, user.sigma);
    take(base.xi, user.xi);
    take(base.lambda, user.lambda);
    take(base.lambda_over_s, user.lambda_over_s);
    take(base.field, user.field);
    take(base.coupling, user.coupling);
    take(base.output, user.output);
    take(base.bath_exponent, user.bath_exponent);
    take(base.threads, user.threads);
    take(base.grid_min, user.grid_min);
    take(base.grid_max, user.grid_max);
    take(base.grid_count, user.grid_count);
    take(base.grid_scaled, user.grid_scaled);
    take(base.refine, user.refine);
    take(base.verify, user.verify);
    take(base.distance_window, user.distance_window);
    take(base.sequence_spins, user.sequence_spins);
    take(base.sequence_lambda_over_s, user.sequence_lambda_over_s);
}

int default_exponent(const std::string& coupling) {
    return coupling == "electron-hole" ? 1 : 3;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

double field_norm(const std::array<double, 3>& b) {
    return std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

RunConfig resolve(Draft d) {
    RunConfig cfg;
    cfg.preset = d.preset.value_or("");
    cfg.protocol = d.protocol.value_or(Protocol::Single);
    cfg.spin = d.spin.value_or(10.0);
    cfg.coupling = d.coupling.value_or("phonon");
    cfg.bath_exponent = d.bath_exponent.value_or(default_exponent(cfg.coupling));

    // sigma = D S^2 / T ties the triple; any two fix the third.
    const double s2 = cfg.spin * cfg.spin;
    if (d.anisotropy && d.temperature && d.sigma) {
        if (!close(*d.sigma, *d.anisotropy * s2 / *d.temperature))
            throw ConfigError("anisotropy, temperature, and sigma are mutually inconsistent",
                              "sigma");
        cfg.anisotropy = *d.anisotropy;
        cfg.temperature = *d.temperature;
        cfg.sigma = *d.sigma;
    } else if (d.anisotropy && d.temperature) {
        cfg.anisotropy = *d.anisotropy;
        cfg.temperature = *d.temperature;
        cfg.sigma = cfg.anisotropy * s2 / cfg.temperature;
    } else if (d.anisotropy && d.sigma) {
        cfg.anisotropy = *d.anisotropy;
        cfg.sigma = *d.sigma;
        if (cfg.sigma > 0.0) {
            cfg.temperature = cfg.anisotropy * s2 / cfg.sigma;
        } else if (cfg.anisotropy == 0.0) {
            cfg.temperature = 1.0;
        } else {
            throw ConfigError("sigma = 0 contradicts anisotropy > 0", "sigma");
        }
    } else if (d.temperature && d.sigma) {
        cfg.temperature = *d.temperature;
        cfg.sigma = *d.sigma;
        cfg.anisotropy = cfg.sigma * cfg.temperature / s2;
    } else if (d.anisotropy) {
        cfg.anisotropy = *d.anisotropy;
        cfg.temperature = 1.0;
        cfg.sigma = cfg.anisotropy * s2;
    } else if (d.sigma) {
        cfg.sigma = *d.sigma;
        cfg.temperature = 1.0;
        cfg.anisotropy = cfg.sigma / s2;
    } else {
        cfg.temperature = d.temperature.value_or(1.0);
        cfg.anisotropy = 0.0;
        cfg.sigma = 0.0;
    }

    // xi = S |B| / T, same scheme for the field pair.
    if (d.field && d.xi) {
        if (!close(*d.xi, cfg.spin * field_norm(*d.field) / cfg.temperature))
            throw ConfigError("field and xi are mutually inconsistent", "xi");
        cfg.field = *d.field;
        cfg.xi = *d.xi;
    } else if (d.field) {
        cfg.field = *d.field;
        cfg.xi = cfg.spin * field_norm(cfg.field) / cfg.temperature;
    } else if (d.xi) {
        if (*d.xi < 0.0) throw ConfigError("xi must be >= 0", "xi");
        cfg.xi = *d.xi;
        cfg.field = {0.0, 0.0, cfg.xi * cfg.temperature / cfg.spin};
    }

    if (d.lambda && d.lambda_over_s) {
        if (!close(*d.lambda, *d.lambda_over_s * cfg.spin))
            throw ConfigError("lambda and lambda_over_s are mutually inconsistent", "lambda");
        cfg.lambda = *d.lambda;
        cfg.lambda_over_s = *d.lambda_over_s;
    } else if (d.lambda) {
        cfg.lambda = *d.lambda;
        cfg.lambda_over_s = cfg.lambda / cfg.spin;
    } else {
        cfg.lambda_over_s = d.lambda_over_s.value_or(1e-2);
        cfg.lambda = cfg.lambda_over_s * cfg.spin;
    }

    cfg.grid.min = d.grid_min.value_or(cfg.grid.min);
    cfg.grid.max = d.grid_max.value_or(cfg.grid.max);
    cfg.grid.count = d.grid_count.value_or(cfg.grid.count);
    cfg.grid.scaled = d.grid_scaled.value_or(cfg.grid.scaled);
    cfg.refine = d.refine.value_or(false);
    cfg.output = d.output.value_or("spectrum.csv");
    cfg.verify = d.verify.value_or(false);
    if (d.distance_window) cfg.distance_window = *d.distance_window;
    if (d.sequence_spins) cfg.sequence_spins = *d.sequence_spins;
    if (d.sequence_lambda_over_s) cfg.sequence_lambda_over_s = *d.sequence_lambda_over_s;
    cfg.threads = d.threads.value_or(0);

    // Validation through the domain constructors, with errors folded into one type.
    try {
        (void)cfg.model();
        cfg.coupling_spec();
        (void)cfg.bath();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (cfg.grid.count < 1) throw ConfigError("grid count must be >= 1", "grid");
    if (!(cfg.grid.max > cfg.grid.min) || !(cfg.grid.min >= 0.0))
        throw ConfigError("grid must satisfy 0 <= min < max", "grid");
    if (cfg.grid.scaled && !(cfg.anisotropy > 0.0))
        throw ConfigError("a scaled grid needs anisotropy > 0", "grid");
    if (cfg.distance_window) {
        const auto& w = *cfg.distance_window;
        if (!(w[0] > 0.0) || !(w[1] > w[0]))
            throw ConfigError("distance window must satisfy 0 < a < b", "distance_window");
    }
    if (cfg.threads < 0) throw ConfigError("threads must be >= 0", "threads");
    if (cfg.protocol == Protocol::CrossoverSequence && cfg.sequence_spins.empty())
        throw ConfigError("crossover-sequence needs sequence_spins", "sequence_spins");
    if (cfg.protocol == Protocol::DampingLadder && cfg.sequence_lambda_over_s.empty())
        throw ConfigError("damping-ladder needs sequence_lambda_over_s", "sequence_lambda_over_s");
    for (double s : cfg.sequence_spins)
        if (!(s > 0.0)) throw ConfigError("sequence_spins entries must be > 0", "sequence_spins");
    for (double l : cfg.sequence_lambda_over_s)
        if (!(l > 0.0))
            throw ConfigError("sequence_lambda_over_s entries must be > 0",
                              "sequence_lambda_over_s");
    return cfg;
}

Draft preset_draft(const std::string& name) {
    Draft d;
    std::string base = name;
    std::string mods;
    if (const auto colon = name.find(':'); colon != std::string::npos) {
        base = name.substr(0, colon);
        mods = name.substr(colon + 1);
    }
    d.preset = name;
    if (base == "fig1") {
        d.protocol = Protocol::Single;
        d.spin = 10.0;
        d.anisotropy = 0.5;
        d.sigma = 5.0;
        d.coupling = "phonon";
        d.lambda = 3e-8;
        d.refine = true;
        d.output = "fig1.csv";
    } else if (base == "fig2-top") {
        d.protocol = Protocol::CrossoverSequence;
        d.spin = 50.0;
        d.temperature = 1.0;
        d.sigma = 1.0;
        d.coupling = "phonon";
        d.lambda_over_s = 1e-2;
        d.sequence_spins = std::vector<double>{5.0, 25.0, 50.0, 100.0};
        d.distance_window = std::optional<std::array<double, 2>>({0.5, 1.1});
        d.output = "fig2-top.csv";
    } else if (base == "fig2-bottom") {
        d.protocol = Protocol::DampingLadder;
        d.spin = 50.0;
        d.temperature = 1.0;
        d.sigma = 1.0;
        d.coupling = "phonon";
        d.lambda_over_s = 1e-2;
        d.sequence_lambda_over_s = std::vector<double>{1e-2, 3e-2, 1e-1};
        d.distance_window = std::optional<std::array<double, 2>>({0.5, 1.1});
        d.output = "fig2-bottom.csv";
    } else if (base == "fig3") {
        d.protocol = Protocol::MatchedCouplings;
        d.spin = 10.0;
        d.temperature = 1.0;
        d.sigma = 1.0;
        d.coupling = "phonon";
        d.lambda_over_s = 1e-2;
        d.distance_window = std::optional<std::array<double, 2>>({0.05, 0.4});
        d.output = "fig3.csv";
    } else {
        throw ConfigError("unknown preset '" + name +
                              "'; available: fig1, fig2-top[:S=NN], fig2-bottom, fig3",
                          name);
    }
    if (mods.empty()) return d;
    // Modifier form "name:key=value,..."; only S (a single sequence member) exists.
    std::size_t pos = 0;
    while (pos < mods.size()) {
        const auto comma = mods.find(',', pos);
        const std::string item = mods.substr(pos, comma == std::string::npos ? mods.size() - pos
                                                                             : comma - pos);
        pos = comma == std::string::npos ? mods.size() : comma + 1;
        const auto eq = item.find('=');
        if (eq == std::string::npos || item.substr(0, eq) != "S")
            throw ConfigError("unsupported preset modifier '" + item + "'", name);
        double s = 0.0;
        try {
            std::size_t used = 0;
            s = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ConfigError("preset modifier '" + item + "' needs a numeric value", name);
        }
        if (base != "fig2-top")
            throw ConfigError("preset '" + base + "' has no S modifier", name);
        d.protocol = Protocol::Single;
        d.spin = s;
        d.sequence_spins = std::vector<double>{};
        d.output = "fig2-top-S" + format_number(s) + ".csv";
    }
    return d;
}

double need_number(const ordered_json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number", key);
    return v.get<double>();
}

int need_integer(const ordered_json& v, const std::string& key) {
    if (!v.is_number_integer() && !(v.is_number() && v.get<double>() == std::floor(v.get<double>())))
        throw ConfigError("key '" + key + "' must be an integer", key);
    return v.get<int>();
}

bool need_boolean(const ordered_json& v, const std::string& key) {
    if (!v.is_boolean()) throw ConfigError("key '" + key + "' must be a boolean", key);
    return v.get<bool>();
}

std::string need_string(const ordered_json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("key '" + key + "' must be a string", key);
    return v.get<std::string>();
}

std::vector<double> need_number_array(const ordered_json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError("key '" + key + "' must be an array", key);
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(need_number(e, key));
    return out;
}

Draft draft_from_json(const ordered_json& j) {
    if (!j.is_object()) throw ConfigError("config document must be a JSON object");
    Draft d;
    for (const auto& [key, value] : j.items()) {
        if (key == "preset") {
            d.preset = need_string(value, key);
        } else if (key == "protocol") {
            d.protocol = protocol_from_name(need_string(value, key));
        } else if (key == "spin") {
            d.spin = need_number(value, key);
        } else if (key == "anisotropy") {
            d.anisotropy = need_number(value, key);
        } else if (key == "field") {
            const auto v = need_number_array(value, key);
            if (v.size() != 3) throw ConfigError("key 'field' must have three components", key);
            d.field = std::array<double, 3>{v[0], v[1], v[2]};
        } else if (key == "temperature") {
            d.temperature = need_number(value, key);
        } else if (key == "sigma") {
            d.sigma = need_number(value, key);
        } else if (key == "xi") {
            d.xi = need_number(value, key);
        } else if (key == "coupling") {
            d.coupling = need_string(value, key);
        } else if (key == "bath_exponent") {
            d.bath_exponent = need_integer(value, key);
        } else if (key == "lambda") {
            d.lambda = need_number(value, key);
        } else if (key == "lambda_over_s") {
            d.lambda_over_s = need_number(value, key);
        } else if (key == "grid") {
            if (!value.is_object()) throw ConfigError("key 'grid' must be an object", key);
            for (const auto& [gk, gv] : value.items()) {
                if (gk == "min") d.grid_min = need_number(gv, "grid.min");
                else if (gk == "max") d.grid_max = need_number(gv, "grid.max");
                else if (gk == "count") d.grid_count = need_integer(gv, "grid.count");
                else if (gk == "scaled") d.grid_scaled = need_boolean(gv, "grid.scaled");
                else throw ConfigError("unknown config key 'grid." + gk + "'", "grid." + gk);
            }
        } else if (key == "refine") {
            d.refine = need_boolean(value, key);
        } else if (key == "output") {
            d.output = need_string(value, key);
        } else if (key == "verify") {
            d.verify = need_boolean(value, key);
        } else if (key == "distance_window") {
            if (value.is_null()) {
                d.distance_window = std::optional<std::array<double, 2>>{};
            } else {
                const auto v = need_number_array(value, key);
                if (v.size() != 2)
                    throw ConfigError("key 'distance_window' must be [min, max] or null", key);
                d.distance_window = std::optional<std::array<double, 2>>({v[0], v[1]});
            }
        } else if (key == "sequence_spins") {
            d.sequence_spins = need_number_array(value, key);
        } else if (key == "sequence_lambda_over_s") {
            d.sequence_lambda_over_s = need_number_array(value, key);
        } else if (key == "threads") {
            d.threads = need_integer(value, key);
        } else {
            throw ConfigError("unknown config key '" + key + "'", key);
        }
    }
    return d;
}

} // namespace

const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Single: return "single";
        case Protocol::CrossoverSequence: return "crossover-sequence";
        case Protocol::DampingLadder: return "damping-ladder";
        case Protocol::MatchedCouplings: return "matched-couplings";
    }
    return "single";
}

Protocol protocol_from_name(const std::string& name) {
    if (name == "single") return Protocol::Single;
    if (name == "crossover-sequence") return Protocol::CrossoverSequence;
    if (name == "damping-ladder") return Protocol::DampingLadder;
    if (name == "matched-couplings") return Protocol::MatchedCouplings;
    throw ConfigError("unknown protocol '" + name + "'", "protocol");
}

CouplingSpec RunConfig::coupling_spec() const {
    if (coupling == "phonon") return phonon_coupling();
    if (coupling == "electron-hole") return electron_hole_coupling();
    if (coupling == "hybrid") return hybrid_coupling();
    throw ConfigError("unknown coupling '" + coupling +
                          "'; available: phonon, electron-hole, hybrid",
                      "coupling");
}

std::vector<std::string> preset_names() { return {"fig1", "fig2-top", "fig2-bottom", "fig3"}; }

RunConfig preset_config(const std::string& name) { return resolve(preset_draft(name)); }

RunConfig parse_config(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    Draft user = draft_from_json(j);
    if (!user.preset || user.preset->empty()) return resolve(user);
    Draft base = preset_draft(*user.preset);
    merge_over(base, user);
    return resolve(base);
}

std::string echo_config(const RunConfig& c) {
    ordered_json o;
    o["preset"] = c.preset;
    o["protocol"] = protocol_name(c.protocol);
    o["spin"] = c.spin;
    o["anisotropy"] = c.anisotropy;
    o["field"] = {c.field[0], c.field[1], c.field[2]};
    o["temperature"] = c.temperature;
    o["sigma"] = c.sigma;
    o["xi"] = c.xi;
    o["coupling"] = c.coupling;
    o["bath_exponent"] = c.bath_exponent;
    o["lambda"] = c.lambda;
    o["lambda_over_s"] = c.lambda_over_s;
    o["grid"] = {{"min", c.grid.min}, {"max", c.grid.max}, {"count", c.grid.count},
                 {"scaled", c.grid.scaled}};
    o["refine"] = c.refine;
    o["output"] = c.output;
    o["verify"] = c.verify;
    if (c.distance_window)
        o["distance_window"] = {(*c.distance_window)[0], (*c.distance_window)[1]};
    else
        o["distance_window"] = nullptr;
    o["sequence_spins"] = c.sequence_spins;
    o["sequence_lambda_over_s"] = c.sequence_lambda_over_s;
    o["threads"] = c.threads;
    return o.dump(2) + "\n";
}

RunConfig sequence_member(const RunConfig& base, double s) {
    RunConfig m = base;
    m.protocol = Protocol::Single;
    m.spin = s;
    m.anisotropy = base.sigma * base.temperature / (s * s);
    m.lambda = base.lambda_over_s * s;
    m.xi = s * field_norm(m.field) / m.temperature;
    m.sequence_spins.clear();
    m.sequence_lambda_over_s.clear();
    return m;
}

} // namespace spinline
