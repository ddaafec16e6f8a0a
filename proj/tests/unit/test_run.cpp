#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spinline/run.hpp"

using namespace spinline;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::filesystem::path fresh_dir(const char* leaf) {
    const auto dir = std::filesystem::temp_directory_path() / "spinline_tests" / leaf;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("csv document carries the magic line, header, and fixed-width rows") {
    Spectrum spec;
    spec.omega = {0.5, 1.0};
    spec.chi = {Complex(1.25, 0.5), Complex(-0.125, 3.0)};
    spec.omega_scale = 2.0;
    spec.chi0 = 4.0;
    const std::string text = format_csv(spec);
    std::istringstream lines(text);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "# spinline v1");
    REQUIRE(std::getline(lines, line));
    CHECK(line == "omega,omega_scaled,chi_real,chi_imag,chi_imag_scaled");
    REQUIRE(std::getline(lines, line));
    CHECK(line == "5.00000000000000e-01,2.50000000000000e-01,1.25000000000000e+00,"
                  "5.00000000000000e-01,1.25000000000000e-01");
    REQUIRE(std::getline(lines, line));
    CHECK(line == "1.00000000000000e+00,5.00000000000000e-01,-1.25000000000000e-01,"
                  "3.00000000000000e+00,7.50000000000000e-01");
    CHECK_FALSE(std::getline(lines, line));
    CHECK(format_csv(spec) == text);
}

TEST_CASE("artifact paths splice suffixes before the extension") {
    CHECK(output_with_suffix("dir/name.csv", "-S5") == "dir/name-S5.csv");
    CHECK(output_with_suffix("name.csv", "-l0.01") == "name-l0.01.csv");
    CHECK(output_with_suffix("noext", "-S5") == "noext-S5");
    CHECK(output_with_suffix("a.b/c", "-x") == "a.b/c-x");
    CHECK(sidecar_path("dir/name.csv") == "dir/name.json");
    CHECK(sidecar_path("noext") == "noext.json");
    CHECK(sidecar_path("a.b/c") == "a.b/c.json");
}

TEST_CASE("writing into a missing directory raises an io error with the path") {
    const std::string bad = "/nonexistent_spinline_dir/out.csv";
    try {
        write_file(bad, "data");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(e.path == bad);
    }
}

TEST_CASE("a small verified run produces matching artifacts") {
    const auto dir = fresh_dir("single");
    RunConfig cfg = parse_config(R"({
        "spin": 1.0, "anisotropy": 0.5, "temperature": 0.5,
        "coupling": "phonon", "lambda": 1e-3,
        "grid": {"min": 0.0, "max": 1.4, "count": 24, "scaled": true},
        "verify": true
    })");
    cfg.output = (dir / "s1.csv").string();
    cfg.distance_window = std::array<double, 2>{0.3, 0.9};

    const RunReport report = run(cfg);
    REQUIRE(report.members.size() == 1);
    CHECK_FALSE(report.verify_skipped);
    const MemberReport& m = report.members.front();
    CHECK(m.file == cfg.output);
    CHECK(m.spin == 1.0);
    REQUIRE(m.oracle.has_value());
    CHECK(m.oracle->max_rel <= 1e-10);
    REQUIRE(m.distance.has_value());
    CHECK(*m.distance > 0.0);

    const std::string csv = slurp(cfg.output);
    CHECK(csv.rfind("# spinline v1\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 26);

    const auto summary = nlohmann::json::parse(slurp(report.summary_path));
    CHECK(summary.at("members").size() == 1);
    CHECK(summary.at("config").at("spin").get<double>() == 1.0);
    CHECK_FALSE(summary.value("verify_skipped", false));

    // rerunning yields byte-identical artifacts
    const RunReport again = run(cfg);
    CHECK(slurp(cfg.output) == csv);
    CHECK(slurp(again.summary_path) == slurp(report.summary_path));
}

TEST_CASE("verification is skipped above the dense-reference cap") {
    const auto dir = fresh_dir("skip");
    RunConfig cfg = parse_config(R"({
        "spin": 9.0, "anisotropy": 0.1, "temperature": 1.0,
        "lambda_over_s": 1e-2,
        "grid": {"min": 0.0, "max": 1.2, "count": 8, "scaled": true},
        "verify": true
    })");
    cfg.output = (dir / "s9.csv").string();
    const RunReport report = run(cfg);
    CHECK(report.verify_skipped);
    CHECK_FALSE(report.members.front().oracle.has_value());
}

TEST_CASE("the crossover sequence writes one suffixed spectrum per spin") {
    const auto dir = fresh_dir("sequence");
    RunConfig cfg = parse_config(R"({
        "protocol": "crossover-sequence",
        "sequence_spins": [1.0, 2.0],
        "sigma": 1.0, "temperature": 1.0, "lambda_over_s": 1e-2,
        "spin": 2.0,
        "grid": {"min": 0.0, "max": 1.2, "count": 16, "scaled": true},
        "distance_window": [0.5, 1.1]
    })");
    cfg.output = (dir / "seq.csv").string();
    const RunReport report = run(cfg);
    REQUIRE(report.members.size() == 2);
    CHECK(report.members[0].file == (dir / "seq-S1.csv").string());
    CHECK(report.members[1].file == (dir / "seq-S2.csv").string());
    CHECK(std::filesystem::exists(report.members[0].file));
    CHECK(std::filesystem::exists(report.members[1].file));
    REQUIRE(report.members[0].distance.has_value());
    REQUIRE(report.members[1].distance.has_value());
    // larger spin sits closer to the classical curve
    CHECK(*report.members[1].distance < *report.members[0].distance);
    CHECK(std::filesystem::exists(report.summary_path));
}

TEST_CASE("matched couplings equalize the ground peak across baths") {
    const auto dir = fresh_dir("matched");
    RunConfig cfg = preset_config("fig3");
    cfg.spin = 4.0;
    cfg.anisotropy = 1.0 / 16.0;
    cfg.lambda = 0.04;
    cfg.grid.count = 160;
    cfg.output = (dir / "match.csv").string();
    const RunReport report = run(cfg);
    REQUIRE(report.members.size() == 3);
    REQUIRE(report.members[0].peak_height.has_value());
    const double ref = *report.members[0].peak_height;
    CHECK(report.members[0].coupling == "phonon");
    for (const auto& m : report.members) {
        REQUIRE(m.peak_height.has_value());
        CHECK(*m.peak_height == doctest::Approx(ref).epsilon(5e-4));
        CHECK(std::filesystem::exists(m.file));
    }
    // matched strengths genuinely differ between coupling mechanisms
    CHECK(report.members[1].lambda != report.members[0].lambda);
}
