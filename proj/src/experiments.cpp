#include "sunburst/experiments.hpp"

#include "sunburst/operators.hpp"
#include "sunburst/theory.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

namespace sunburst {

using nlohmann::json;

const char* version_tag() { return "0.1.0"; }

RealVector TimeGridSpec::materialize() const {
    if (points < 1)
        throw std::invalid_argument("time grid needs at least one point");
    if (!(t_max >= t_min))
        throw std::invalid_argument("time grid has t_max < t_min");
    if (points == 1) return RealVector::Constant(1, t_min);
    return RealVector::LinSpaced(points, t_min, t_max);
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = kFnvOffset;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= kFnvPrime;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

// Collects CSV outputs and writes the manifest only once every file landed.
class RunOutputs {
  public:
    RunOutputs(const RunConfig& config) : config_(config), t0_(clock::now()) {
        std::filesystem::create_directories(config.out);
    }

    void emit(const std::string& filename, const std::string& content) {
        write_file(std::filesystem::path(config_.out) / filename, content);
        checksums_[filename] = fnv1a64_hex(content);
    }

    void note(const std::string& key, const json& value) { extras_[key] = value; }

    void finalize() {
        json manifest;
        manifest["experiment"] = config_.experiment;
        manifest["config"] = json::parse(config_to_json(config_));
        manifest["version"] = version_tag();
        manifest["seed"] = config_.seed;
        manifest["duration_seconds"] =
            std::chrono::duration<double>(clock::now() - t0_).count();
        manifest["outputs"] = checksums_;
        if (!extras_.empty()) manifest["extras"] = extras_;
        write_file(std::filesystem::path(config_.out) / "manifest.json",
                   manifest.dump(2) + "\n");
    }

  private:
    using clock = std::chrono::steady_clock;
    const RunConfig& config_;
    clock::time_point t0_;
    std::map<std::string, std::string> checksums_;
    json extras_;
};

Model parse_model(const std::string& name) {
    if (name == "SunburstIsing") return Model::SunburstIsing;
    if (name == "SunburstXXZ") return Model::SunburstXXZ;
    throw std::invalid_argument("unknown model '" + name + "'");
}

HamiltonianSpec parse_spec(const json& j) {
    HamiltonianSpec spec;
    if (j.contains("model")) spec.model = parse_model(j.at("model").get<std::string>());
    spec.L = j.value("L", spec.L);
    spec.n = j.value("n", spec.n);
    spec.b = j.value("b", spec.b);
    spec.J = j.value("J", spec.J);
    if (j.contains("h")) {
        const json& h = j.at("h");
        if (h.is_array()) {
            if (h.size() != 2)
                throw std::invalid_argument("spec field 'h' interval needs two entries");
            spec.h_lo = h[0].get<double>();
            spec.h_hi = h[1].get<double>();
        } else {
            spec.h_lo = spec.h_hi = h.get<double>();
        }
    }
    spec.delta = j.value("delta", spec.delta);
    spec.kappa = j.value("kappa", spec.kappa);
    spec.D = j.value("D", spec.D);
    spec.seed = j.value("seed", spec.seed);
    return spec;
}

json spec_to_json(const HamiltonianSpec& spec) {
    json j;
    j["model"] = to_string(spec.model);
    j["L"] = spec.L;
    j["n"] = spec.n;
    j["b"] = spec.b;
    j["J"] = spec.J;
    if (spec.field_disordered())
        j["h"] = json::array({spec.h_lo, spec.h_hi});
    else
        j["h"] = spec.h_lo;
    j["delta"] = spec.delta;
    j["kappa"] = spec.kappa;
    j["D"] = spec.D;
    j["seed"] = spec.seed;
    return j;
}

const std::vector<int> kDefaultLadder = {2, 4, 8, 16, 32, 64, 128, 256, 512};
const std::vector<double> kDefaultKappaGrid = {0.01, 0.02, 0.05, 0.1,  0.15, 0.2,
                                               0.3,  0.4,  0.5,  0.75, 1.0,  1.25,
                                               1.5};

void apply_experiment_defaults(RunConfig& c, const json& j) {
    // Saturation studies default to a long grid, oscillation and transition
    // studies to short ones.
    if (!j.contains("time_grid")) {
        if (c.experiment == "coherence_table" || c.experiment == "ipr_trace") {
            c.time_grid = {0.0, 100.0, 2000};
        } else if (c.experiment == "transition_curve") {
            c.time_grid = {0.0, 5.0, 500};
        } else {
            c.time_grid = {0.0, 10.0, 1000};
        }
    }
    if (!j.contains("window")) {
        c.window_lo = 0.2 * c.time_grid.t_max;
        c.window_hi = c.time_grid.t_max;
    }
    // defaults apply only when the key is absent; an explicitly empty grid
    // stays empty and fails validation
    if (!j.contains("kappa_grid") && c.experiment == "rratio_sweep")
        c.kappa_grid = kDefaultKappaGrid;
    if (!j.contains("coherence_ladder")) c.coherence_ladder = kDefaultLadder;
}

}  // namespace

void RunConfig::validate() const {
    static const char* kNames[] = {"rratio_sweep", "quench_limits", "coherence_table",
                                   "ipr_trace", "transition_curve"};
    bool known = false;
    for (const char* n : kNames) known |= experiment == n;
    if (!known)
        throw std::invalid_argument("unknown experiment '" + experiment + "'");
    if (realizations < 1)
        throw std::invalid_argument("realizations must be >= 1");
    if (experiment == "rratio_sweep" && kappa_grid.empty())
        throw std::invalid_argument("rratio_sweep needs a non-empty kappa grid");
    if (experiment == "coherence_table" && coherence_ladder.empty())
        throw std::invalid_argument("coherence_table needs a non-empty ladder");
    if (time_grid.points < 1)
        throw std::invalid_argument("time grid needs at least one point");
    spec.validate();
    if (spec_xxz) spec_xxz->validate();
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    try {
        c.experiment = j.value("experiment", "");
        if (j.contains("spec")) c.spec = parse_spec(j.at("spec"));
        if (j.contains("spec_xxz")) c.spec_xxz = parse_spec(j.at("spec_xxz"));
        if (j.contains("kappa_grid"))
            c.kappa_grid = j.at("kappa_grid").get<std::vector<double>>();
        if (j.contains("time_grid")) {
            const json& t = j.at("time_grid");
            c.time_grid.t_min = t.value("t_min", 0.0);
            c.time_grid.t_max = t.at("t_max").get<double>();
            c.time_grid.points = t.at("points").get<int>();
        }
        if (j.contains("window")) {
            const json& w = j.at("window");
            if (!w.is_array() || w.size() != 2)
                throw std::invalid_argument("window must be [lo, hi]");
            c.window_lo = w[0].get<double>();
            c.window_hi = w[1].get<double>();
        }
        if (j.contains("coherence_ladder"))
            c.coherence_ladder = j.at("coherence_ladder").get<std::vector<int>>();
        c.realizations = j.value("realizations", c.realizations);
        c.trim_fraction = j.value("trim_fraction", c.trim_fraction);
        c.seed = j.value("seed", c.spec.seed);
        c.out = j.value("out", c.out);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed config field: ") + e.what());
    }
    // the run seed feeds every stream; keep the spec in sync
    c.spec.seed = c.seed;
    if (c.spec_xxz) c.spec_xxz->seed = c.seed;
    apply_experiment_defaults(c, j);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["spec"] = spec_to_json(c.spec);
    if (c.spec_xxz) j["spec_xxz"] = spec_to_json(*c.spec_xxz);
    if (!c.kappa_grid.empty()) j["kappa_grid"] = c.kappa_grid;
    j["time_grid"] = {{"t_min", c.time_grid.t_min},
                      {"t_max", c.time_grid.t_max},
                      {"points", c.time_grid.points}};
    j["window"] = json::array({c.window_lo, c.window_hi});
    if (!c.coherence_ladder.empty()) j["coherence_ladder"] = c.coherence_ladder;
    j["realizations"] = c.realizations;
    j["trim_fraction"] = c.trim_fraction;
    j["seed"] = c.seed;
    j["out"] = c.out;
    return j.dump(2);
}

namespace {

std::string sector_label(ParitySector s) { return s == ParitySector::Minus ? "-1" : "+1"; }

std::string sweep_rows_csv(const std::vector<SweepRow>& rows, bool with_model,
                           const std::string& model) {
    std::string out;
    for (const auto& row : rows) {
        if (with_model) out += model + ",";
        out += format_double(row.kappa) + "," + format_double(row.mean_r) + "," +
               format_double(row.stderr_mean) + "," + std::to_string(row.realizations) +
               "," + sector_label(row.sector) + "\n";
    }
    return out;
}

std::string trace_csv(const QuenchTrace& trace) {
    std::string out = "t,S_L,purity,ipr,analytic\n";
    for (Index i = 0; i < trace.times.size(); ++i) {
        out += format_double(trace.times[i]) + "," +
               format_double(trace.linear_entropy[i]) + "," +
               format_double(trace.purity[i]) + ",";
        if (trace.ipr) out += format_double((*trace.ipr)[i]);
        out += ",";
        if (trace.analytic) out += format_double((*trace.analytic)[i]);
        out += "\n";
    }
    return out;
}

// n-qubit variant of a base spec with the qubits spread evenly when possible.
HamiltonianSpec with_qubits(const HamiltonianSpec& base, int n) {
    HamiltonianSpec spec = base;
    spec.n = n;
    spec.b = std::max(1, base.L / n);
    return spec;
}

HamiltonianSpec derived_xxz(const RunConfig& config) {
    if (config.spec_xxz) return *config.spec_xxz;
    HamiltonianSpec spec = config.spec;
    spec.model = Model::SunburstXXZ;
    spec.D = 4.0;
    return spec;
}

}  // namespace

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows) {
    write_file(path, "kappa,mean_r,stderr,realizations,sector\n" +
                         sweep_rows_csv(rows, false, ""));
}

void write_trace_csv(const std::filesystem::path& path, const QuenchTrace& trace) {
    write_file(path, trace_csv(trace));
}

void cmd_rratio(const RunConfig& config) {
    config.validate();
    RunOutputs outputs(config);

    SweepOptions options;
    options.trim_fraction = config.trim_fraction;

    std::string csv = "model,kappa,mean_r,stderr,realizations,sector\n";
    const auto ising_rows =
        rratio_sweep(config.spec, config.kappa_grid, config.realizations, options);
    csv += sweep_rows_csv(ising_rows, true, "ising");
    const auto xxz_rows = rratio_sweep(derived_xxz(config), config.kappa_grid,
                                       config.realizations, options);
    csv += sweep_rows_csv(xxz_rows, true, "xxz");

    outputs.emit("rratio.csv", csv);
    outputs.finalize();
}

void cmd_quench_limits(const RunConfig& config) {
    config.validate();
    RunOutputs outputs(config);
    const RealVector times = config.time_grid.materialize();

    // Fixed (J, h) pairs of the two solvable limits; gap, coupling and size
    // come from the configured spec. The limiting analysis is single qubit.
    auto regime_spec = [&](double J, double h) {
        HamiltonianSpec spec = with_qubits(config.spec, 1);
        spec.model = Model::SunburstIsing;
        spec.J = J;
        spec.h_lo = spec.h_hi = h;
        spec.seed = config.seed;
        return spec;
    };

    InitialStateRecipe ground;
    QuenchOptions options;
    options.analytic = AnalyticKind::LimitingCase;

    outputs.emit("quench_weak_field.csv",
                 trace_csv(run_quench(regime_spec(1.0, 0.1), ground, times, options)));
    outputs.emit("quench_strong_field.csv",
                 trace_csv(run_quench(regime_spec(0.1, 1.0), ground, times, options)));
    outputs.finalize();
}

void cmd_coherence_table(const RunConfig& config) {
    config.validate();
    RunOutputs outputs(config);
    const RealVector times = config.time_grid.materialize();

    std::string csv = "coherence,mean_SL_n1,var_SL_n1,mean_SL_n3,var_SL_n3\n";
    std::vector<std::array<double, 2>> stats_n1, stats_n3;
    json seeds_note;

    for (int n : {1, 3}) {
        const QuenchSystem sys = prepare_quench_system(with_qubits(config.spec, n));
        for (int N : config.coherence_ladder) {
            InitialStateRecipe recipe;
            recipe.kind = InitialStateRecipe::Kind::MaximallyCoherent;
            recipe.coherent_levels = N;
            seeds_note["n" + std::to_string(n) + "_N" + std::to_string(N)] =
                derive_seed(sys.spec.seed, 0x2, std::uint64_t(N));
            QuenchOptions options;
            options.analytic = AnalyticKind::None;
            const QuenchTrace trace = run_quench(sys, recipe, times, options);
            const auto [mean, var] =
                time_statistics(trace, config.window_lo, config.window_hi);
            (n == 1 ? stats_n1 : stats_n3).push_back({mean, var});
        }
    }

    for (size_t i = 0; i < config.coherence_ladder.size(); ++i) {
        const int N = config.coherence_ladder[i];
        const double c2 = double(N - 1) / double(N);
        csv += format_double(c2) + "," + format_double(stats_n1[i][0]) + "," +
               format_double(stats_n1[i][1]) + "," + format_double(stats_n3[i][0]) +
               "," + format_double(stats_n3[i][1]) + "\n";
    }
    outputs.emit("coherence_table.csv", csv);
    outputs.note("phase_stream_seeds", seeds_note);
    outputs.finalize();
}

void cmd_ipr_trace(const RunConfig& config) {
    config.validate();
    RunOutputs outputs(config);
    const RealVector times = config.time_grid.materialize();

    QuenchOptions options;
    options.record_ipr = true;
    options.analytic = AnalyticKind::None;
    InitialStateRecipe ground;

    const QuenchSystem sys1 = prepare_quench_system(with_qubits(config.spec, 1));
    const QuenchTrace incoh1 = run_quench(sys1, ground, times, options);

    InitialStateRecipe coherent;
    coherent.kind = InitialStateRecipe::Kind::MaximallyCoherent;
    coherent.coherent_levels = int(sys1.ring.dim());
    const QuenchTrace coh1 = run_quench(sys1, coherent, times, options);

    const QuenchSystem sys3 = prepare_quench_system(with_qubits(config.spec, 3));
    const QuenchTrace incoh3 = run_quench(sys3, ground, times, options);

    std::string csv =
        "t,SL_incoh_n1,one_minus_ipr_incoh_n1,SL_incoh_n3,one_minus_ipr_incoh_n3,"
        "ipr_coherent_n1\n";
    for (Index i = 0; i < times.size(); ++i) {
        csv += format_double(times[i]) + "," + format_double(incoh1.linear_entropy[i]) +
               "," + format_double(1.0 - (*incoh1.ipr)[i]) + "," +
               format_double(incoh3.linear_entropy[i]) + "," +
               format_double(1.0 - (*incoh3.ipr)[i]) + "," +
               format_double((*coh1.ipr)[i]) + "\n";
    }
    outputs.emit("ipr_trace.csv", csv);
    outputs.finalize();
}

void cmd_transition_curve(const RunConfig& config) {
    config.validate();
    RunOutputs outputs(config);
    const RealVector times = config.time_grid.materialize();

    std::string csv = "model,n,t,S_L,analytic\n";
    for (const auto& [label, base] :
         {std::pair<std::string, HamiltonianSpec>{"ising", config.spec},
          std::pair<std::string, HamiltonianSpec>{"xxz", derived_xxz(config)}}) {
        for (int n : {1, 3}) {
            const QuenchSystem sys = prepare_quench_system(with_qubits(base, n));
            InitialStateRecipe recipe;
            recipe.kind = InitialStateRecipe::Kind::MaximallyCoherent;
            recipe.coherent_levels = int(sys.ring.dim());
            QuenchOptions options;
            options.analytic = AnalyticKind::TransitionCurve;
            const QuenchTrace trace = run_quench(sys, recipe, times, options);
            for (Index i = 0; i < times.size(); ++i)
                csv += label + "," + std::to_string(n) + "," +
                       format_double(times[i]) + "," +
                       format_double(trace.linear_entropy[i]) + "," +
                       format_double((*trace.analytic)[i]) + "\n";
        }
    }
    outputs.emit("transition_curve.csv", csv);
    outputs.finalize();
}

void run_experiment(const RunConfig& config) {
    if (config.experiment == "rratio_sweep") return cmd_rratio(config);
    if (config.experiment == "quench_limits") return cmd_quench_limits(config);
    if (config.experiment == "coherence_table") return cmd_coherence_table(config);
    if (config.experiment == "ipr_trace") return cmd_ipr_trace(config);
    if (config.experiment == "transition_curve") return cmd_transition_curve(config);
    throw std::invalid_argument("unknown experiment '" + config.experiment + "'");
}

}  // namespace sunburst
