#include "sunburst/experiments.hpp"

#include "sunburst/operators.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

using namespace sunburst;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text) lines += c == '\n';
    return lines;
}

const char* kTinyRatioConfig = R"json({
  "experiment": "rratio_sweep",
  "spec": {"model": "SunburstIsing", "L": 4, "n": 1, "b": 1, "J": 1.0,
           "h": [0.8, 1.0], "delta": 1.0, "kappa": 1.0, "D": 0.0, "seed": 9},
  "spec_xxz": {"model": "SunburstXXZ", "L": 4, "n": 1, "b": 1, "D": 4.0},
  "kappa_grid": [0.4, 1.0],
  "realizations": 2,
  "trim_fraction": 0.0,
  "seed": 9,
  "out": "OUTDIR"
})json";

RunConfig tiny_ratio_config(const fs::path& out) {
    std::string text = kTinyRatioConfig;
    text.replace(text.find("OUTDIR"), 6, out.string());
    return parse_config(text);
}

}  // namespace

TEST_CASE("config parsing honors exact field names and both h forms") {
    const RunConfig c = parse_config(R"json({
      "experiment": "quench_limits",
      "spec": {"model": "SunburstIsing", "L": 5, "n": 1, "b": 2, "J": 0.7,
               "h": 0.3, "delta": 0.9, "kappa": 1.1, "D": 0.0, "seed": 4},
      "seed": 4
    })json");
    CHECK(c.spec.L == 5);
    CHECK(c.spec.n == 1);
    CHECK(c.spec.b == 2);
    CHECK(c.spec.J == 0.7);
    CHECK(c.spec.h_lo == 0.3);
    CHECK(c.spec.h_hi == 0.3);
    CHECK(c.spec.delta == 0.9);
    CHECK(c.spec.kappa == 1.1);
    CHECK(c.seed == 4);
    // quench_limits defaults
    CHECK(c.time_grid.t_max == 10.0);
    CHECK(c.time_grid.points == 1000);

    const RunConfig d = parse_config(R"json({
      "experiment": "rratio_sweep",
      "spec": {"h": [0.8, 1.0]}
    })json");
    CHECK(d.spec.h_lo == 0.8);
    CHECK(d.spec.h_hi == 1.0);
    CHECK(d.spec.field_disordered());
    CHECK_FALSE(d.kappa_grid.empty());  // default grid applied

    CHECK_THROWS_AS(parse_config("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"json({"experiment": "nope"})json").validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_config(R"json({"experiment": "rratio_sweep",
                             "spec": {"model": "Heisenberg"}})json"),
        std::invalid_argument);
}

TEST_CASE("round trip through config_to_json preserves the run") {
    const RunConfig a = tiny_ratio_config("/tmp/sunburst_test_na");
    const RunConfig b = parse_config(config_to_json(a));
    CHECK(config_to_json(a) == config_to_json(b));
}

TEST_CASE("over-budget configs fail fast with a resource error") {
    RunConfig c = tiny_ratio_config("/tmp/sunburst_test_na");
    c.spec.L = 15;
    CHECK_THROWS_AS(c.validate(), resource_error);
    CHECK_THROWS_AS(cmd_rratio(c), resource_error);
}

TEST_CASE("dimension cap env override is honored") {
    HamiltonianSpec spec;
    spec.L = 13;
    spec.n = 2;
    spec.b = 1;
    CHECK_THROWS_AS(spec.validate(), resource_error);
    setenv("SUNBURST_DIM_CAP", "16", 1);
    CHECK_NOTHROW(spec.validate());
    unsetenv("SUNBURST_DIM_CAP");
    CHECK_THROWS_AS(spec.validate(), resource_error);
}

TEST_CASE("rratio command emits both model curves with byte-identical reruns") {
    const fs::path out1 = "/tmp/sunburst_test_rratio_a";
    const fs::path out2 = "/tmp/sunburst_test_rratio_b";
    fs::remove_all(out1);
    fs::remove_all(out2);

    RunConfig c1 = tiny_ratio_config(out1);
    cmd_rratio(c1);
    RunConfig c2 = tiny_ratio_config(out2);
    cmd_rratio(c2);

    const std::string csv = slurp(out1 / "rratio.csv");
    CHECK(csv == slurp(out2 / "rratio.csv"));

    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "model,kappa,mean_r,stderr,realizations,sector");
    CHECK(count_lines(csv) == 1 + 2 * 2);  // two models x two kappa rows

    // manifest checksum matches the emitted file
    const auto manifest = nlohmann::json::parse(slurp(out1 / "manifest.json"));
    char expected[32];
    std::snprintf(expected, sizeof(expected), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(csv)));
    CHECK(manifest.at("outputs").at("rratio.csv").get<std::string>() == expected);
    CHECK(manifest.at("seed").get<std::uint64_t>() == 9);
    CHECK(manifest.at("config").at("spec").at("seed").get<std::uint64_t>() == 9);
}

TEST_CASE("sweep csv writer uses the documented header") {
    const fs::path out = "/tmp/sunburst_test_sweep.csv";
    std::vector<SweepRow> rows(1);
    rows[0].kappa = 0.25;
    rows[0].mean_r = 0.5;
    rows[0].realizations = 3;
    write_sweep_csv(out, rows);
    const std::string csv = slurp(out);
    CHECK(csv == "kappa,mean_r,stderr,realizations,sector\n0.25,0.5,0,3,+1\n");
}

TEST_CASE("quench_limits control run with kappa = 0 stays at zero entropy") {
    const fs::path out = "/tmp/sunburst_test_limits";
    fs::remove_all(out);
    RunConfig c = parse_config(R"json({
      "experiment": "quench_limits",
      "spec": {"L": 4, "n": 1, "b": 1, "kappa": 0.0, "delta": 1.0, "h": 0.5},
      "time_grid": {"t_max": 2.0, "points": 40},
      "seed": 3,
      "out": "OUT"
    })json");
    c.out = out.string();
    cmd_quench_limits(c);

    for (const char* name : {"quench_weak_field.csv", "quench_strong_field.csv"}) {
        const std::string csv = slurp(out / name);
        std::istringstream lines(csv);
        std::string line;
        std::getline(lines, line);
        CHECK(line == "t,S_L,purity,ipr,analytic");
        int rows = 0;
        while (std::getline(lines, line)) {
            ++rows;
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            const double s = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
            CHECK(std::abs(s) <= 1e-12);
        }
        CHECK(rows == 40);
    }
}

TEST_CASE("trace csv leaves missing optional columns empty") {
    QuenchTrace trace;
    trace.times = RealVector::LinSpaced(3, 0.0, 1.0);
    trace.linear_entropy = RealVector::Constant(3, 0.25);
    trace.purity = RealVector::Constant(3, 0.75);
    const fs::path out = "/tmp/sunburst_test_trace.csv";
    write_trace_csv(out, trace);
    const std::string csv = slurp(out);
    CHECK(csv.substr(0, 26) == "t,S_L,purity,ipr,analytic\n");
    CHECK(csv.find("0,0.25,0.75,,\n") != std::string::npos);
}

TEST_CASE("explicitly empty grids are an argument error, not a default") {
    RunConfig c = parse_config(R"json({
      "experiment": "rratio_sweep",
      "spec": {"L": 4, "n": 1, "b": 1},
      "kappa_grid": []
    })json");
    CHECK(c.kappa_grid.empty());
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    RunConfig d = parse_config(R"json({
      "experiment": "coherence_table",
      "spec": {"L": 4, "n": 1, "b": 1},
      "coherence_ladder": []
    })json");
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("coherence table command emits the pinned schema at toy scale") {
    const fs::path out = "/tmp/sunburst_test_cohtable";
    fs::remove_all(out);
    RunConfig c = parse_config(R"json({
      "experiment": "coherence_table",
      "spec": {"L": 4, "n": 1, "b": 1, "J": 1.0, "h": 0.95, "delta": 1.0,
               "kappa": 1.0},
      "time_grid": {"t_max": 20.0, "points": 200},
      "window": [4.0, 20.0],
      "coherence_ladder": [2, 8, 16],
      "seed": 11
    })json");
    c.out = out.string();
    cmd_coherence_table(c);

    const std::string csv = slurp(out / "coherence_table.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "coherence,mean_SL_n1,var_SL_n1,mean_SL_n3,var_SL_n3");
    int rows = 0;
    std::string line;
    double first_col[3];
    while (std::getline(lines, line)) {
        first_col[rows] = std::stod(line.substr(0, line.find(',')));
        ++rows;
    }
    CHECK(rows == 3);
    CHECK(first_col[0] == 0.5);     // (N-1)/N exactly
    CHECK(first_col[1] == 0.875);
    CHECK(first_col[2] == 0.9375);
    // phase-stream seeds logged for reproducibility
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest.at("extras").contains("phase_stream_seeds"));
}

TEST_CASE("ipr trace command emits entropy and participation columns") {
    const fs::path out = "/tmp/sunburst_test_iprtrace";
    fs::remove_all(out);
    RunConfig c = parse_config(R"json({
      "experiment": "ipr_trace",
      "spec": {"L": 4, "n": 1, "b": 1, "h": 0.95, "kappa": 1.0},
      "time_grid": {"t_max": 10.0, "points": 50},
      "seed": 2
    })json");
    c.out = out.string();
    cmd_ipr_trace(c);

    const std::string csv = slurp(out / "ipr_trace.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "t,SL_incoh_n1,one_minus_ipr_incoh_n1,SL_incoh_n3,one_minus_ipr_incoh_n3,"
          "ipr_coherent_n1");
    CHECK(count_lines(csv) == 1 + 50);
}

TEST_CASE("transition curve command covers both models and qubit counts") {
    const fs::path out = "/tmp/sunburst_test_transition";
    fs::remove_all(out);
    RunConfig c = parse_config(R"json({
      "experiment": "transition_curve",
      "spec": {"L": 4, "n": 1, "b": 1, "h": 0.95, "kappa": 1.5},
      "time_grid": {"t_max": 3.0, "points": 60},
      "seed": 2
    })json");
    c.out = out.string();
    cmd_transition_curve(c);

    const std::string csv = slurp(out / "transition_curve.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "model,n,t,S_L,analytic");
    CHECK(count_lines(csv) == 1 + 4 * 60);
    CHECK(csv.find("ising,1,") != std::string::npos);
    CHECK(csv.find("ising,3,") != std::string::npos);
    CHECK(csv.find("xxz,1,") != std::string::npos);
    CHECK(csv.find("xxz,3,") != std::string::npos);
}

TEST_CASE("format_double renders shortest round-trip decimals") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.01) == "0.01");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
