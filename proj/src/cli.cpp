#include "aoidl/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "aoidl/error.hpp"
#include "aoidl/report_io.hpp"
#include "aoidl/scenario.hpp"
#include "aoidl/validation.hpp"

namespace aoidl::cli {

namespace {

namespace fs = std::filesystem;

struct SimFlags {
    std::optional<std::uint64_t> slots;
    std::optional<std::uint64_t> warmup;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> replications;
    std::optional<std::string> mode;

    void attach(CLI::App* cmd) {
        cmd->add_option("--slots", slots, "Slots per replication")->check(CLI::PositiveNumber);
        cmd->add_option("--warmup", warmup, "Warm-up slots discarded per replication (default 10%)");
        cmd->add_option("--seed", seed, "Base seed; replication r uses seed + r");
        cmd->add_option("--replications", replications, "Independent replications")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--mode", mode, "coupled or decoupled")
            ->check(CLI::IsMember({"coupled", "decoupled"}));
    }

    void apply(SimConfig& cfg) const {
        if (slots) {
            cfg.slots = *slots;
            if (!warmup) cfg.warmup_slots = *slots / 10;
        }
        if (warmup) cfg.warmup_slots = *warmup;
        if (seed) cfg.seed = *seed;
        if (replications) cfg.replications = *replications;
        if (mode) cfg.mode = parse_sim_mode(*mode);
        cfg.validate();
    }
};

// --out names a path stem; both <stem>.csv and <stem>.json are written.
fs::path output_stem(const std::string& out, const char* command) {
    if (!out.empty()) {
        fs::path p(out);
        if (p.extension() == ".csv" || p.extension() == ".json") p.replace_extension();
        return p;
    }
    const char* dir = std::getenv(kOutDirEnv);
    return fs::path(dir && *dir ? dir : ".") / command;
}

void write_rows(const fs::path& stem, const std::vector<ResultRow>& rows, std::ostream& out) {
    if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
    auto csv = stem;
    csv += ".csv";
    auto json = stem;
    json += ".json";
    write_file_atomic(csv, rows_to_csv(rows));
    write_file_atomic(json, rows_to_json(rows));
    fmt::print(out, "wrote {} and {}\n", csv.string(), json.string());
}

std::string fmt_aoi(double v) { return std::isinf(v) ? "unbounded" : fmt::format("{:.4f}", v); }

void print_summary(std::ostream& out, const SystemParams& p, const AnalyticalReport& a) {
    fmt::print(out, "scenario   q1={} q2={} lambda={} d={} gamma1={:.2f}dB gamma2={:.2f}dB\n", p.q1, p.q2,
               p.arrival_prob, p.deadline, linear_to_db(p.link1.sinr_threshold),
               linear_to_db(p.link2.sinr_threshold));
    fmt::print(out, "links      P11={:.7f} P11,2={:.7f} P22={:.7f} P22,1={:.7f}\n", a.sp.p_1_solo,
               a.sp.p_1_joint, a.sp.p_2_solo, a.sp.p_2_joint);
    fmt::print(out, "MPR        delta={:.4f} ({})\n", a.delta, to_string(a.mpr));
    fmt::print(out, "service    mu1={:.6f} mu2={:.6f} p1={:.6f} p2={:.6f}\n", a.mu1, a.mu2, a.p1, a.p2);
    fmt::print(out, "user 1     drop_rate={:.6f} per_packet_drop={:.6f} throughput={:.6f} (derived) "
                    "busy={:.6f}\n",
               a.queue.drop_rate, a.queue.per_packet_drop_prob, a.queue.throughput, a.queue.busy_prob);
    fmt::print(out, "user 2     average_aoi={} P(A>1)={:.6f} P(A>5)={:.6f} P(A>10)={:.6f}\n",
               fmt_aoi(a.aoi_average), a.aoi_violation[1], a.aoi_violation[5], a.aoi_violation[10]);
}

void print_simulation(std::ostream& out, const SimulationReport& s) {
    fmt::print(out, "simulation mode={} seed={} slots={} warmup={} replications={}\n", to_string(s.mode),
               s.seed, s.slots, s.warmup_slots, s.replications);
    fmt::print(out, "user 1     drop_rate={:.6f}±{:.6f} throughput={:.6f}±{:.6f} busy={:.6f}±{:.6f}\n",
               s.drop_rate, s.drop_rate_ci, s.throughput, s.throughput_ci, s.busy_prob, s.busy_prob_ci);
    fmt::print(out, "user 2     average_aoi={:.4f}±{:.4f} P(A>5)={:.6f}\n", s.aoi_average, s.aoi_average_ci,
               s.aoi_violation[5]);
}

int cmd_analyze(const std::string& scenario_path, const std::string& out_opt, std::ostream& out) {
    const auto scenario = load_scenario(scenario_path);
    ResultRow row{.axis = "", .axis_value = 0.0, .params = scenario.params,
                  .analytical = analyze(scenario.params), .simulation = std::nullopt};
    print_summary(out, row.params, row.analytical);
    write_rows(output_stem(out_opt, "analyze"), {row}, out);
    return kExitOk;
}

int cmd_simulate(const std::string& scenario_path, const SimFlags& flags, const std::string& out_opt,
                 std::ostream& out) {
    const auto scenario = load_scenario(scenario_path);
    SimConfig cfg = scenario.sim;
    flags.apply(cfg);
    ResultRow row{.axis = "", .axis_value = 0.0, .params = scenario.params,
                  .analytical = analyze(scenario.params), .simulation = simulate(cfg)};
    print_summary(out, row.params, row.analytical);
    print_simulation(out, *row.simulation);
    fmt::print(out, "seed {}\n", cfg.seed);
    write_rows(output_stem(out_opt, "simulate"), {row}, out);
    return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const std::optional<std::string>& axis_opt,
              const std::optional<std::string>& values_opt, bool with_sim_flag, const SimFlags& flags,
              const std::string& out_opt, std::ostream& out) {
    const auto scenario = load_scenario(scenario_path);
    const auto axis = axis_opt ? std::optional(parse_axis(*axis_opt)) : scenario.sweep.axis;
    if (!axis) throw Error(ErrorKind::unknown_axis, "no sweep axis given (--axis or [sweep] axis)");
    const auto values = values_opt ? parse_value_list(*values_opt) : scenario.sweep.values;
    if (values.empty()) throw Error(ErrorKind::invalid_config, "no sweep values given (--values or [sweep] values)");
    const bool with_sim = with_sim_flag || scenario.sweep.with_sim;

    SimConfig sim_cfg = scenario.sim;
    flags.apply(sim_cfg);

    std::vector<ResultRow> rows;
    for (double v : values) {
        ResultRow row;
        row.axis = std::string(to_string(*axis));
        row.axis_value = v;
        row.params = with_axis_value(scenario.params, *axis, v);
        row.analytical = analyze(row.params);
        if (with_sim) {
            SimConfig cfg = sim_cfg;
            cfg.params = row.params;
            row.simulation = simulate(cfg);
        }
        fmt::print(out, "{}={:<8} drop_rate={:.6f} throughput={:.6f} average_aoi={}{}\n", row.axis, v,
                   row.analytical.queue.drop_rate, row.analytical.queue.throughput,
                   fmt_aoi(row.analytical.aoi_average),
                   row.simulation ? fmt::format(" (sim {:.4f})", row.simulation->aoi_average) : "");
        rows.push_back(std::move(row));
    }
    write_rows(output_stem(out_opt, "sweep"), rows, out);
    return kExitOk;
}

int cmd_validate(const validation::Options& opts, bool verbose, const std::string& out_opt,
                 std::ostream& out) {
    const auto results = validation::run_all(opts, [&](const validation::CheckResult& r) {
        fmt::print(out, "{} [{}] {}: {}\n", r.passed ? "PASS" : "FAIL", r.id, r.name, r.summary);
        for (const auto& line : r.details) {
            if (verbose || line.starts_with("FAIL")) fmt::print(out, "       {}\n", line);
        }
        out.flush();
    });
    auto path = output_stem(out_opt, "validate");
    path += ".json";
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file_atomic(path, validation::verdict_json(results));
    const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    fmt::print(out, "{} ({} checks); verdict written to {}\n", ok ? "all checks passed" : "CHECKS FAILED",
               results.size(), path.string());
    return ok ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deadline-constrained traffic and age of information on a two-user random-access channel"};
    app.name("aoidl");
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_opt;
    SimFlags sim_flags;

    auto* analyze_cmd = app.add_subcommand("analyze", "Closed-form report for a scenario");
    analyze_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    analyze_cmd->add_option("--out", out_opt, "Output path stem (writes .csv and .json)");

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo run for a scenario");
    simulate_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    simulate_cmd->add_option("--out", out_opt, "Output path stem (writes .csv and .json)");
    sim_flags.attach(simulate_cmd);

    std::optional<std::string> axis;
    std::optional<std::string> values;
    bool with_sim = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "Analytical (and optionally simulated) parameter sweep");
    sweep_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    sweep_cmd->add_option("--axis", axis, "q1, q2, arrival_prob, deadline or sinr_threshold_db");
    sweep_cmd->add_option("--values", values, "Comma list or start:step:stop");
    sweep_cmd->add_flag("--with-sim", with_sim, "Also simulate every point");
    sweep_cmd->add_option("--out", out_opt, "Output path stem (writes .csv and .json)");
    sim_flags.attach(sweep_cmd);

    validation::Options vopts;
    std::string deadlines;
    std::string gammas;
    bool verbose = false;
    std::string fault;
    auto* validate_cmd = app.add_subcommand("validate", "Run the cross-check suite over a scenario grid");
    validate_cmd->add_option("--slots", vopts.slots, "Slots per replication")->check(CLI::PositiveNumber);
    validate_cmd->add_option("--seed", vopts.seed, "Base seed");
    validate_cmd->add_option("--replications", vopts.decoupled_replications, "Decoupled-mode replications")
        ->check(CLI::PositiveNumber);
    validate_cmd->add_option("--coupled-replications", vopts.coupled_replications,
                             "Coupled-mode replications (at least 2 for confidence intervals)")
        ->check(CLI::Range(2u, 100000u));
    validate_cmd->add_option("--deadlines", deadlines, "Comma list of deadlines in the grid");
    validate_cmd->add_option("--gammas-db", gammas, "Comma list of SINR thresholds (dB) in the grid");
    validate_cmd->add_option("--max-scenarios", vopts.max_scenarios, "Truncate the grid (0 = full)");
    validate_cmd->add_flag("--verbose", verbose, "Print every per-scenario line");
    validate_cmd->add_option("--out", out_opt, "Verdict path stem (writes .json)");
    validate_cmd->add_option("--inject-fault", fault)->group("")->check(CLI::IsMember({"negate-drop-rate"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(scenario_path, out_opt, out);
        if (*simulate_cmd) return cmd_simulate(scenario_path, sim_flags, out_opt, out);
        if (*sweep_cmd) return cmd_sweep(scenario_path, axis, values, with_sim, sim_flags, out_opt, out);
        if (*validate_cmd) {
            if (!deadlines.empty()) {
                vopts.deadlines.clear();
                for (double d : parse_value_list(deadlines)) {
                    if (d < 1.0 || d != std::floor(d)) {
                        fmt::print(err, "--deadlines takes positive integers\n");
                        return kExitUsage;
                    }
                    vopts.deadlines.push_back(static_cast<int>(d));
                }
            }
            if (!gammas.empty()) vopts.sinr_thresholds_db = parse_value_list(gammas);
            vopts.inject_negated_drop_rate = fault == "negate-drop-rate";
            return cmd_validate(vopts, verbose, out_opt, out);
        }
    } catch (const Error& e) {
        fmt::print(err, "error ({}): {}\n", to_string(e.kind()), e.what());
        return e.kind() == ErrorKind::unknown_axis ? kExitUsage : kExitFailure;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace aoidl::cli
