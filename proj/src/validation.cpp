#include "aoidl/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "aoidl/aoi.hpp"
#include "aoidl/channel.hpp"
#include "aoidl/deadline_queue.hpp"
#include "aoidl/markov.hpp"
#include "aoidl/report_io.hpp"

namespace aoidl::validation {

namespace {

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<double> tenths() {
    std::vector<double> v;
    for (int i = 1; i <= 10; ++i) v.push_back(i / 10.0);
    return v;
}

CheckResult start(int id, std::string name) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    r.passed = true;
    return r;
}

// Failing lines go before passing ones so the first detail is the useful one.
void note(CheckResult& r, bool ok, std::string line) {
    if (ok) {
        r.details.push_back("ok   " + line);
    } else {
        r.passed = false;
        auto first_pass = std::find_if(r.details.begin(), r.details.end(),
                                       [](const std::string& s) { return s.starts_with("ok"); });
        r.details.insert(first_pass, "FAIL " + line);
    }
}

double analytical_drop_rate(const ScenarioRun& run, const Options& opts) {
    const double d = run.analytical.queue.drop_rate;
    return opts.inject_negated_drop_rate ? -d : d;
}

}  // namespace

std::vector<SystemParams> scenario_grid(const Options& opts) {
    std::vector<SystemParams> grid;
    const auto& L = opts.levels;
    const auto nd = opts.deadlines.size();
    const auto ng = opts.sinr_thresholds_db.size();
    for (std::size_t i = 0; i < L.size(); ++i) {
        for (std::size_t j = 0; j < L.size(); ++j) {
            for (std::size_t k = 0; k < L.size(); ++k) {
                const int d = opts.deadlines[(i + j + k) % nd];
                const double gamma = opts.sinr_thresholds_db[(i + 2 * j) % ng];
                grid.push_back(reference_scenario(gamma, L[i], L[j], L[k], d));
            }
        }
    }
    if (opts.max_scenarios > 0 && grid.size() > opts.max_scenarios) grid.resize(opts.max_scenarios);
    return grid;
}

std::vector<ScenarioRun> run_scenarios(const Options& opts) {
    std::vector<ScenarioRun> runs;
    std::uint64_t seed = opts.seed;
    for (const auto& params : scenario_grid(opts)) {
        ScenarioRun run;
        run.params = params;
        run.analytical = analyze(params);

        SimConfig cfg;
        cfg.params = params;
        cfg.slots = opts.slots;
        cfg.warmup_slots = opts.slots / 10;
        cfg.seed = seed;
        cfg.mode = SimMode::decoupled;
        cfg.replications = opts.decoupled_replications;
        run.decoupled = simulate(cfg);

        cfg.mode = SimMode::coupled;
        cfg.replications = opts.coupled_replications;
        cfg.seed = seed + 1000;
        run.coupled = simulate(cfg);

        seed += 10'000;
        runs.push_back(std::move(run));
    }
    return runs;
}

bool within_tolerance(double simulated, double analytical) {
    return std::abs(simulated - analytical) <= std::max(0.01 * std::abs(analytical), 0.005);
}

std::string describe(const SystemParams& p) {
    return fmt::format("q1={:.1f} q2={:.1f} lambda={:.1f} d={} gamma={:+.0f}dB", p.q1, p.q2,
                       p.arrival_prob, p.deadline, linear_to_db(p.link1.sinr_threshold));
}

CheckResult check_mpr_strength() {
    auto r = start(1, "MPR strength reproduction");
    const std::pair<double, double> published[] = {
        {-5.0, 1.5195}, {-3.0, 1.3323}, {0.0, 1.0000}, {1.0, 0.8854}};
    for (const auto& [gamma_db, expected] : published) {
        const auto p = reference_scenario(gamma_db, 0.5, 0.5, 0.5, 3);
        const double delta = mpr_strength(success_probs(p.link1, p.link2, p.rx));
        note(r, std::abs(delta - expected) <= 5e-4,
             fmt::format("gamma={:+.0f}dB delta={:.6f} published={:.4f} ({})", gamma_db, delta,
                         expected, to_string(classify_mpr(delta))));
    }
    r.summary = "4 published values within 5e-4";
    return r;
}

CheckResult check_printed_matrix(std::uint64_t seed) {
    auto r = start(2, "d=3 waiting-time matrix equals the printed matrix");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double l = unit(rng);
        const double m = unit(rng);
        const double lb = 1.0 - l;
        const double mb = 1.0 - m;
        const double printed[4][4] = {
            {lb, l, 0.0, 0.0},
            {m * lb, m * l, mb, 0.0},
            {m * lb * lb, m * l * lb, m * l, mb},
            {lb * lb * lb, l * lb * lb, l * lb, l},
        };
        const auto built = build_waiting_time_matrix({.arrival_prob = l, .service_prob = m, .deadline = 3});
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) worst = std::max(worst, std::abs(built(i, j) - printed[i][j]));
        }
    }
    note(r, worst <= 1e-15, fmt::format("20 random (lambda, mu1) pairs, max entry error {:.3g}", worst));
    r.summary = fmt::format("max |entry error| = {:.3g} (tol 1e-15)", worst);
    return r;
}

CheckResult check_aoi_closed_forms() {
    auto r = start(3, "AoI distribution, mean and violation closed forms");
    double worst = 0.0;
    for (int k = 1; k <= 19; ++k) {
        const double mu = 0.05 * k;
        const AoiParams p{.update_success_prob = mu};
        // Truncate where the geometric tail drops below 1e-13.
        const auto n = static_cast<std::int64_t>(std::ceil(std::log(1e-13) / std::log1p(-mu))) + 1;
        double mass = 0.0;
        double mean = 0.0;
        double cdf = 0.0;
        double viol_err = 0.0;
        for (std::int64_t i = 1; i <= n; ++i) {
            const double pmf = aoi_pmf(p, i);
            mass += pmf;
            mean += static_cast<double>(i) * pmf;
            if (i <= 30) {
                cdf += pmf;
                viol_err = std::max(viol_err, std::abs(aoi_violation(p, i) - (1.0 - cdf)));
            }
        }
        // The truncated age chain, solved numerically, must reproduce the pmf.
        const auto pi = stationary(build_aoi_matrix_truncated(p, 60));
        double chain_err = 0.0;
        for (std::size_t i = 0; i + 1 < pi.size(); ++i) {
            chain_err = std::max(chain_err, std::abs(pi[i] - aoi_pmf(p, static_cast<std::int64_t>(i) + 1)));
        }
        const double err = std::max({std::abs(mass - 1.0), std::abs(mean - average_aoi(p)), viol_err, chain_err});
        worst = std::max(worst, err);
        note(r, err <= 1e-8, fmt::format("mu2={:.2f} mass-1={:.2g} mean err={:.2g} violation err={:.2g} chain err={:.2g}",
                                         mu, mass - 1.0, mean - average_aoi(p), viol_err, chain_err));
    }
    r.summary = fmt::format("19 values of mu2, worst error {:.3g} (tol 1e-8)", worst);
    return r;
}

CheckResult check_lumpability() {
    auto r = start(4, "2D action chain lumps onto the waiting-time chain");
    int combos = 0;
    double worst_lump = 0.0;
    double worst_busy = 0.0;
    for (double lambda : {0.1, 0.5, 0.9}) {
        for (double q1 : {0.3, 0.8}) {
            for (double q2 : {0.2, 0.7}) {
                for (double gamma : {-5.0, 1.0}) {
                    for (int d = 1; d <= 6; ++d) {
                        ++combos;
                        const auto params = reference_scenario(gamma, q1, q2, lambda, d);
                        const auto sp = success_probs(params.link1, params.link2, params.rx);
                        const double mu1 = service_prob_user1(params, sp);
                        const QueueParams qp{.arrival_prob = lambda, .service_prob = mu1, .deadline = d};
                        const auto chain2d = build_2d_action_chain(qp, q2, sp, q1);
                        const auto report = verify_lumpability(chain2d, waiting_time_partition(d));
                        const auto chain1d = build_waiting_time_matrix(qp);

                        double lump_err = report.max_discrepancy;
                        if (report.lumped) {
                            lump_err = std::max(lump_err,
                                                (report.lumped->entries() - chain1d.entries()).cwiseAbs().maxCoeff());
                        }
                        const auto pi2d = stationary(chain2d);
                        const double busy2d = 1.0 - pi2d[action_chain_index(0, 0, d)] -
                                              pi2d[action_chain_index(1, 0, d)];
                        const double busy1d = queue_metrics(qp).busy_prob;
                        const double busy_err = std::abs(busy2d - busy1d);
                        worst_lump = std::max(worst_lump, lump_err);
                        worst_busy = std::max(worst_busy, busy_err);
                        const bool ok = report.lumpable && lump_err <= 1e-12 && busy_err <= 1e-10;
                        if (!ok) {
                            note(r, false, fmt::format("{} lump err {:.3g} busy err {:.3g}", describe(params),
                                                       lump_err, busy_err));
                        }
                    }
                }
            }
        }
    }
    r.summary = fmt::format("{} combinations, worst lump error {:.3g} (tol 1e-12), worst busy error {:.3g} (tol 1e-10)",
                            combos, worst_lump, worst_busy);
    return r;
}

CheckResult check_decoupled_agreement(const std::vector<ScenarioRun>& runs, const Options& opts) {
    auto r = start(5, "analytical vs decoupled simulation");
    for (const auto& run : runs) {
        const auto& a = run.analytical;
        const auto& s = run.decoupled;
        const double drop = analytical_drop_rate(run, opts);
        const std::pair<double, double> metrics[] = {
            {s.drop_rate, drop},
            {s.busy_prob, a.queue.busy_prob},
            {s.throughput, a.queue.throughput},
            {s.aoi_average, a.aoi_average},
            {s.aoi_violation[1], a.aoi_violation[1]},
            {s.aoi_violation[5], a.aoi_violation[5]},
            {s.aoi_violation[10], a.aoi_violation[10]},
        };
        bool ok = true;
        for (const auto& [sim, ana] : metrics) {
            ok = ok && within_tolerance(sim, ana);
        }
        note(r, ok,
             fmt::format("{} drop {:.4f}/{:.4f} busy {:.4f}/{:.4f} thr {:.4f}/{:.4f} aoi {:.3f}/{:.3f} "
                         "P(A>1,5,10) {:.4f}/{:.4f} {:.4f}/{:.4f} {:.4f}/{:.4f}",
                         describe(run.params), s.drop_rate, drop, s.busy_prob, a.queue.busy_prob,
                         s.throughput, a.queue.throughput, s.aoi_average, a.aoi_average,
                         s.aoi_violation[1], a.aoi_violation[1], s.aoi_violation[5], a.aoi_violation[5],
                         s.aoi_violation[10], a.aoi_violation[10]));
    }
    r.summary = fmt::format("{} scenarios x 7 metrics (sim/analytical), tol max(1% rel, 0.005 abs)",
                            runs.size());
    if (runs.size() < 27) r.summary += fmt::format(" [reduced grid: {} scenarios]", runs.size());
    return r;
}

CheckResult check_coupled_user1(const std::vector<ScenarioRun>& runs, const Options& opts) {
    auto r = start(6, "coupled simulation, user-1 metrics within 3 CI half-widths");
    double worst = 0.0;
    for (const auto& run : runs) {
        const auto& a = run.analytical;
        const auto& s = run.coupled;
        const double drop = analytical_drop_rate(run, opts);
        const std::tuple<double, double, double> metrics[] = {
            {s.drop_rate, drop, s.drop_rate_ci},
            {s.busy_prob, a.queue.busy_prob, s.busy_prob_ci},
            {s.throughput, a.queue.throughput, s.throughput_ci},
        };
        bool ok = true;
        double ratio = 0.0;
        for (const auto& [sim, ana, ci] : metrics) {
            const double err = std::abs(sim - ana);
            ok = ok && std::isfinite(ci) && err <= 3.0 * ci;
            ratio = std::max(ratio, ci > 0.0 ? err / ci : (err > 0.0 ? INFINITY : 0.0));
        }
        worst = std::max(worst, ratio);
        note(r, ok,
             fmt::format("{} drop {:.5f}/{:.5f}±{:.5f} busy {:.5f}/{:.5f}±{:.5f} thr {:.5f}/{:.5f}±{:.5f} "
                         "worst err/ci {:.2f}",
                         describe(run.params), s.drop_rate, drop, s.drop_rate_ci, s.busy_prob,
                         a.queue.busy_prob, s.busy_prob_ci, s.throughput, a.queue.throughput,
                         s.throughput_ci, ratio));
    }
    r.summary = fmt::format("{} scenarios, {} replications, worst |err|/CI = {:.2f} (limit 3)", runs.size(),
                            opts.coupled_replications, worst);
    return r;
}

CheckResult check_coupled_aoi_and_tradeoffs(const std::vector<ScenarioRun>& runs) {
    auto r = start(7, "coupled AoI gap and trade-off shapes");
    double worst_gap = 0.0;
    for (const auto& run : runs) {
        const double ana = run.analytical.aoi_average;
        const double gap = (run.coupled.aoi_average - ana) / ana;
        worst_gap = std::max(worst_gap, std::abs(gap));
        note(r, std::abs(gap) <= 0.05,
             fmt::format("{} coupled AoI {:.4f} vs 1/mu2 {:.4f}, gap {:+.2f}%", describe(run.params),
                         run.coupled.aoi_average, ana, 100.0 * gap));
    }

    const auto values = tenths();
    auto spread = [&](double gamma_db) {
        const auto reports = sweep(reference_scenario(gamma_db, 0.5, 0.5, 0.8, 3), SweepAxis::q1, values);
        double lo = INFINITY;
        double hi = -INFINITY;
        for (const auto& rep : reports) {
            lo = std::min(lo, rep.aoi_average);
            hi = std::max(hi, rep.aoi_average);
        }
        return hi - lo;
    };
    const double strong = spread(-5.0);
    const double weak = spread(1.0);
    note(r, strong < 0.5 * weak,
         fmt::format("q1 sweep (q2=0.5, lambda=0.8, d=3): AoI spread {:.4f} at -5dB vs {:.4f} at +1dB",
                     strong, weak));

    for (double gamma : {-5.0, 0.0, 1.0}) {
        const auto reports = sweep(reference_scenario(gamma, 0.5, 0.5, 0.5, 3), SweepAxis::q2, values);
        bool aoi_down = true;
        bool drop_up = true;
        for (std::size_t i = 1; i < reports.size(); ++i) {
            aoi_down = aoi_down && reports[i].aoi_average < reports[i - 1].aoi_average;
            drop_up = drop_up && reports[i].queue.drop_rate >= reports[i - 1].queue.drop_rate;
        }
        note(r, aoi_down && drop_up,
             fmt::format("q2 sweep (q1=0.5, lambda=0.5, d=3, gamma={:+.0f}dB): AoI {:.3f}->{:.3f} "
                         "decreasing={}, drop {:.4f}->{:.4f} non-decreasing={}",
                         gamma, reports.front().aoi_average, reports.back().aoi_average, aoi_down,
                         reports.front().queue.drop_rate, reports.back().queue.drop_rate, drop_up));
    }
    r.summary = fmt::format("worst coupled AoI gap {:.2f}% (limit 5%); strong/weak q1-spread {:.3f}/{:.3f}",
                            100.0 * worst_gap, strong, weak);
    return r;
}

CheckResult check_dtmc_empirical(const Options& opts) {
    auto r = start(8, "waiting-time DTMC vs coupled simulation");
    SimConfig cfg;
    cfg.params = reference_scenario(0.0, 0.5, 0.5, 0.5, 3);
    cfg.slots = opts.slots;
    cfg.warmup_slots = opts.slots / 10;
    cfg.seed = opts.seed + 7;
    cfg.mode = SimMode::coupled;

    const auto occ = occupancy_vs_stationary(cfg);
    note(r, occ.max_deviation < 0.005,
         fmt::format("occupancy max deviation {:.5f} (limit 0.005)", occ.max_deviation));

    const auto tf = transition_frequency_check(cfg);
    int failed = 0;
    for (const auto& c : tf.cells) {
        if (!c.passed) {
            ++failed;
            note(r, false, fmt::format("cell {}->{} empirical {:.5f} analytical {:.5f}", c.from, c.to,
                                       c.empirical, c.analytical));
        }
    }
    note(r, tf.insufficient.empty(),
         fmt::format("{} states with too few visits", tf.insufficient.size()));
    note(r, tf.all_passed && tf.cells.size() == 16,
         fmt::format("{} of {} transition cells pass", tf.cells.size() - failed, tf.cells.size()));
    r.summary = fmt::format("occupancy deviation {:.5f}; {}/{} transition cells pass", occ.max_deviation,
                            tf.cells.size() - failed, tf.cells.size());
    return r;
}

CheckResult check_determinism(const Options& opts) {
    auto r = start(9, "determinism under a fixed seed");
    auto render = [&](SimMode mode) {
        SimConfig cfg;
        cfg.params = reference_scenario(-5.0, 0.5, 0.5, 0.5, 3);
        cfg.slots = std::min<std::uint64_t>(opts.slots, 200'000);
        cfg.warmup_slots = cfg.slots / 10;
        cfg.seed = opts.seed;
        cfg.replications = 3;
        cfg.mode = mode;
        const ResultRow row{.axis = "", .axis_value = 0.0, .params = cfg.params,
                            .analytical = analyze(cfg.params), .simulation = simulate(cfg)};
        const std::vector<ResultRow> rows{row};
        return rows_to_csv(rows) + rows_to_json(rows);
    };
    for (auto mode : {SimMode::coupled, SimMode::decoupled}) {
        const auto first = render(mode);
        const auto second = render(mode);
        note(r, first == second,
             fmt::format("{} mode: hashes {:016x} / {:016x}", to_string(mode), fnv1a(first), fnv1a(second)));
    }
    r.summary = "two runs per mode, byte-identical CSV+JSON";
    return r;
}

std::vector<CheckResult> run_all(const Options& opts,
                                 const std::function<void(const CheckResult&)>& on_result) {
    std::vector<CheckResult> out;
    auto push = [&](CheckResult r) {
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    };
    push(check_mpr_strength());
    push(check_printed_matrix(opts.seed));
    push(check_aoi_closed_forms());
    push(check_lumpability());
    const auto runs = run_scenarios(opts);
    push(check_decoupled_agreement(runs, opts));
    push(check_coupled_user1(runs, opts));
    push(check_coupled_aoi_and_tradeoffs(runs));
    push(check_dtmc_empirical(opts));
    push(check_determinism(opts));
    return out;
}

std::string verdict_json(const std::vector<CheckResult>& results) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["passed"] = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    doc["checks"] = nlohmann::json::array();
    for (const auto& r : results) {
        doc["checks"].push_back({{"id", r.id},
                                 {"name", r.name},
                                 {"passed", r.passed},
                                 {"summary", r.summary},
                                 {"details", r.details}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace aoidl::validation
