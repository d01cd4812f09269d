#include "aoidl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <numeric>
#include <random>
#include <string>

#include "aoidl/error.hpp"

namespace aoidl {

namespace {

class SlotRng {
public:
    explicit SlotRng(std::uint64_t seed) : engine_(seed) {}

    // 53-bit uniform in [0,1); avoids the implementation-defined
    // std::uniform_real_distribution so streams are portable.
    bool bernoulli(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

private:
    std::mt19937_64 engine_;
};

SuccessProbs effective_success_probs(const SimConfig& cfg) {
    if (cfg.success_override) return *cfg.success_override;
    return success_probs(cfg.params.link1, cfg.params.link2, cfg.params.rx);
}

struct Estimates {
    double drop_rate, throughput, busy_prob, per_packet_drop_prob, aoi_average;
    std::vector<double> aoi_violation;
};

Estimates estimate(const SimCounters& c) {
    const auto slots = static_cast<double>(c.measured_slots);
    Estimates e{
        .drop_rate = static_cast<double>(c.drops) / slots,
        .throughput = static_cast<double>(c.deliveries) / slots,
        .busy_prob = static_cast<double>(c.busy_slots) / slots,
        .per_packet_drop_prob =
            c.arrivals > 0 ? static_cast<double>(c.drops) / static_cast<double>(c.arrivals) : 0.0,
        .aoi_average = static_cast<double>(c.aoi_sum) / slots,
        .aoi_violation = {},
    };
    std::uint64_t at_most = 0;
    for (int x = 0; x <= kViolationHorizon; ++x) {
        if (static_cast<std::size_t>(x) < c.aoi_histogram.size()) at_most += c.aoi_histogram[x];
        e.aoi_violation.push_back(static_cast<double>(c.measured_slots - at_most) / slots);
    }
    return e;
}

template <typename Get>
double half_width(const std::vector<Estimates>& reps, Get get) {
    const auto n = reps.size();
    if (n < 2) return std::nan("");
    double mean = 0.0;
    for (const auto& r : reps) mean += get(r);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& r : reps) ss += (get(r) - mean) * (get(r) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return 1.96 * sd / std::sqrt(static_cast<double>(n));
}

template <typename T>
void add_into(std::vector<T>& into, const std::vector<T>& from) {
    if (into.size() < from.size()) into.resize(from.size(), T{});
    for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
}

}  // namespace

SimMode parse_sim_mode(std::string_view name) {
    if (name == "coupled") return SimMode::coupled;
    if (name == "decoupled") return SimMode::decoupled;
    throw Error(ErrorKind::invalid_config,
                "unknown simulation mode '" + std::string(name) + "' (expected coupled or decoupled)");
}

const char* to_string(SimMode mode) { return mode == SimMode::coupled ? "coupled" : "decoupled"; }

void SimConfig::validate() const {
    params.validate();
    detail::require(slots > warmup_slots, ErrorKind::invalid_config,
                    "slots must exceed warmup_slots");
    detail::require(replications >= 1, ErrorKind::invalid_config, "replications must be >= 1");
    if (success_override) success_override->validate();
}

void SimCounters::merge(const SimCounters& other) {
    measured_slots += other.measured_slots;
    arrivals += other.arrivals;
    deliveries += other.deliveries;
    drops += other.drops;
    busy_slots += other.busy_slots;
    aoi_sum += other.aoi_sum;
    add_into(aoi_histogram, other.aoi_histogram);
    add_into(state_visits, other.state_visits);
    add_into(transition_counts, other.transition_counts);
    total_arrivals += other.total_arrivals;
    total_deliveries += other.total_deliveries;
    total_drops += other.total_drops;
    residual_queue += other.residual_queue;
}

SimCounters run_replication(const SimConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const SystemParams& p = cfg.params;
    const SuccessProbs sp = effective_success_probs(cfg);
    const double mu2 = cfg.mode == SimMode::decoupled ? analyze(p, sp).mu2 : 0.0;

    const auto d = static_cast<std::uint64_t>(p.deadline);
    const std::size_t states = static_cast<std::size_t>(d) + 1;

    SimCounters c;
    c.aoi_histogram.assign(kAoiHistogramCap + 1, 0);
    c.state_visits.assign(states, 0);
    c.transition_counts.assign(states * states, 0);

    SlotRng rng(seed);
    std::deque<std::uint64_t> queue;  // arrival slot of each queued packet, oldest first
    std::uint64_t aoi = 1;
    std::size_t previous_state = 0;

    for (std::uint64_t t = 0; t < cfg.slots; ++t) {
        const bool measuring = t >= cfg.warmup_slots;
        const std::uint64_t head_age = queue.empty() ? 0 : t - queue.front();
        const auto state = static_cast<std::size_t>(head_age);
        const bool busy = head_age > 0;

        if (measuring) {
            ++c.measured_slots;
            ++c.state_visits[state];
            if (busy) ++c.busy_slots;
            if (t > cfg.warmup_slots) ++c.transition_counts[previous_state * states + state];
        }
        previous_state = state;

        // Attempts, then outcomes.
        const bool tx1 = busy && rng.bernoulli(p.q1);
        const bool tx2 = rng.bernoulli(p.q2);
        const bool ok1 = tx1 && rng.bernoulli(tx2 ? sp.p_1_joint : sp.p_1_solo);
        bool ok2 = false;
        if (cfg.mode == SimMode::coupled) {
            ok2 = tx2 && rng.bernoulli(tx1 ? sp.p_2_joint : sp.p_2_solo);
        } else {
            ok2 = rng.bernoulli(mu2);
        }

        // Early departure: delivery, or drop after a failed slot at age d.
        if (ok1) {
            queue.pop_front();
            ++c.total_deliveries;
            if (measuring) ++c.deliveries;
        } else if (busy && head_age == d) {
            queue.pop_front();
            ++c.total_drops;
            if (measuring) ++c.drops;
        }

        aoi = ok2 ? 1 : aoi + 1;
        if (measuring) {
            c.aoi_sum += aoi;
            ++c.aoi_histogram[std::min<std::uint64_t>(aoi, kAoiHistogramCap)];
        }

        // Late arrival: first eligible for transmission next slot, at age 1.
        if (rng.bernoulli(p.arrival_prob)) {
            queue.push_back(t);
            ++c.total_arrivals;
            if (measuring) ++c.arrivals;
        }
    }
    c.residual_queue = queue.size();
    return c;
}

SimulationRun simulate_detailed(const SimConfig& cfg) {
    cfg.validate();

    std::vector<std::future<SimCounters>> pending;
    pending.reserve(cfg.replications);
    for (std::uint32_t r = 0; r < cfg.replications; ++r) {
        pending.push_back(std::async(std::launch::async, [&cfg, r] {
            return run_replication(cfg, cfg.seed + r);
        }));
    }
    std::vector<SimCounters> reps;
    reps.reserve(pending.size());
    for (auto& f : pending) reps.push_back(f.get());

    SimulationRun run;
    std::vector<Estimates> per_rep;
    for (const auto& r : reps) {
        run.counters.merge(r);
        per_rep.push_back(estimate(r));
    }

    SimulationReport& out = run.report;
    out.mode = cfg.mode;
    out.seed = cfg.seed;
    out.slots = cfg.slots;
    out.warmup_slots = cfg.warmup_slots;
    out.replications = cfg.replications;

    const Estimates pooled = estimate(run.counters);
    out.drop_rate = pooled.drop_rate;
    out.throughput = pooled.throughput;
    out.busy_prob = pooled.busy_prob;
    out.per_packet_drop_prob = pooled.per_packet_drop_prob;
    out.aoi_average = pooled.aoi_average;
    out.aoi_violation = pooled.aoi_violation;

    out.drop_rate_ci = half_width(per_rep, [](const Estimates& e) { return e.drop_rate; });
    out.throughput_ci = half_width(per_rep, [](const Estimates& e) { return e.throughput; });
    out.busy_prob_ci = half_width(per_rep, [](const Estimates& e) { return e.busy_prob; });
    out.per_packet_drop_prob_ci =
        half_width(per_rep, [](const Estimates& e) { return e.per_packet_drop_prob; });
    out.aoi_average_ci = half_width(per_rep, [](const Estimates& e) { return e.aoi_average; });
    for (int x = 0; x <= kViolationHorizon; ++x) {
        out.aoi_violation_ci.push_back(
            half_width(per_rep, [x](const Estimates& e) { return e.aoi_violation[x]; }));
    }

    out.aoi_histogram = run.counters.aoi_histogram;
    while (!out.aoi_histogram.empty() && out.aoi_histogram.back() == 0) out.aoi_histogram.pop_back();

    const auto measured = static_cast<double>(run.counters.measured_slots);
    for (auto v : run.counters.state_visits) {
        out.waiting_time_occupancy.push_back(static_cast<double>(v) / measured);
    }
    return run;
}

SimulationReport simulate(const SimConfig& cfg) { return simulate_detailed(cfg).report; }

OccupancyComparison occupancy_vs_stationary(const SimConfig& cfg) {
    detail::require(cfg.mode == SimMode::coupled, ErrorKind::invalid_config,
                    "occupancy comparison requires coupled mode");
    const AnalyticalReport analytical = analyze(cfg.params, effective_success_probs(cfg));
    const SimulationReport sim = simulate(cfg);

    OccupancyComparison out;
    out.empirical = sim.waiting_time_occupancy;
    out.analytical = analytical.queue.stationary.probs;
    for (std::size_t i = 0; i < out.empirical.size(); ++i) {
        out.max_deviation = std::max(out.max_deviation, std::abs(out.empirical[i] - out.analytical[i]));
    }
    return out;
}

TransitionCheck transition_frequency_check(const SimConfig& cfg, std::uint64_t min_visits) {
    detail::require(cfg.mode == SimMode::coupled, ErrorKind::invalid_config,
                    "transition check requires coupled mode");
    const AnalyticalReport analytical = analyze(cfg.params, effective_success_probs(cfg));
    const StochasticMatrix matrix = build_waiting_time_matrix(QueueParams{
        .arrival_prob = cfg.params.arrival_prob,
        .service_prob = analytical.mu1,
        .deadline = cfg.params.deadline,
    });
    const SimCounters counts = simulate_detailed(cfg).counters;
    const std::size_t n = matrix.size();

    TransitionCheck out;
    for (std::size_t from = 0; from < n; ++from) {
        std::uint64_t row_total = 0;
        for (std::size_t to = 0; to < n; ++to) row_total += counts.transition_counts[from * n + to];
        out.visits.push_back(row_total);
        if (row_total < min_visits) {
            out.insufficient.push_back(from);
            continue;
        }
        const auto visits = static_cast<double>(row_total);
        for (std::size_t to = 0; to < n; ++to) {
            TransitionCell cell;
            cell.from = from;
            cell.to = to;
            cell.analytical = matrix(from, to);
            cell.empirical = static_cast<double>(counts.transition_counts[from * n + to]) / visits;
            cell.standard_error = std::sqrt(cell.analytical * (1.0 - cell.analytical) / visits);
            cell.passed = std::abs(cell.empirical - cell.analytical) <=
                          3.0 * cell.standard_error + 0.005;
            out.all_passed = out.all_passed && cell.passed;
            out.cells.push_back(cell);
        }
    }
    return out;
}

}  // namespace aoidl
