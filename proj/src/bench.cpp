#include "opacity/bench.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace opacity {

std::string bench_method_name(BenchMethod m) {
    switch (m) {
        case BenchMethod::Forward: return "forward";
        case BenchMethod::Reverse: return "reverse";
        case BenchMethod::SecretObserver: return "so";
        case BenchMethod::Auto: return "auto";
        case BenchMethod::StateEstimator: return "state-est";
        case BenchMethod::TrajectoryEstimator: return "traj-est";
    }
    return "?";
}

std::optional<BenchMethod> bench_method_from(const std::string& name) {
    if (name == "forward") return BenchMethod::Forward;
    if (name == "reverse") return BenchMethod::Reverse;
    if (name == "so") return BenchMethod::SecretObserver;
    if (name == "auto") return BenchMethod::Auto;
    if (name == "state-est") return BenchMethod::StateEstimator;
    if (name == "traj-est") return BenchMethod::TrajectoryEstimator;
    return std::nullopt;
}

std::string BenchRow::csv() const {
    std::ostringstream out;
    out << family << "," << n << "," << k << "," << notion << "," << method << "," << opaque << ","
        << verifier_states << "," << elapsed_ns << "," << seed;
    return out.str();
}

LabeledSystem gen_family(const std::string& family, std::uint32_t n, std::uint64_t seed) {
    if (family == "dense") return gen_dense(n, seed);
    if (family == "grid") return gen_grid(n, seed);
    if (family == "cyclic") return gen_cyclic(n);
    if (family == "reset") return gen_reset(n);
    throw PreconditionError("unknown family '" + family + "'");
}

namespace {

struct Task {
    std::uint32_t n;
    int k;
    OpacityNotion notion;
    BenchMethod method;
    std::uint64_t seed;
};

Method to_method(BenchMethod m) {
    switch (m) {
        case BenchMethod::Forward: return Method::Forward;
        case BenchMethod::Reverse: return Method::Reverse;
        case BenchMethod::SecretObserver: return Method::SecretObserver;
        default: return Method::Auto;
    }
}

BenchRow run_one(const BenchSpec& spec, const Task& task) {
    BenchRow row;
    row.family = spec.family;
    row.n = task.n;
    row.k = task.k;
    OpacityNotion spec_notion = task.notion;
    if (spec_notion.kind == NotionKind::KStep) spec_notion.k = task.k;
    row.notion = spec_notion.to_string();
    row.method = bench_method_name(task.method);
    row.seed = std::to_string(task.seed);

    VerifyOptions opts;
    opts.max_states = spec.budget;
    opts.timeout_ms = spec.timeout_ms;

    auto start = std::chrono::steady_clock::now();
    try {
        if (spec.family == "revblow") {
            Nfa g = gen_revblow(task.n);
            ExploreLimits limits = opts.limits();
            std::size_t states = task.method == BenchMethod::Reverse
                                     ? determinize(reverse(g), limits).num_live_states()
                                     : determinize(g, limits).num_live_states();
            row.opaque = "-";
            row.notion = "detsize";
            row.verifier_states = std::to_string(states);
        } else {
            LabeledSystem sys = gen_family(spec.family, task.n, task.seed);
            OpacityNotion notion = task.notion;
            if (notion.kind == NotionKind::KStep) notion.k = task.k;
            if (task.method == BenchMethod::StateEstimator ||
                task.method == BenchMethod::TrajectoryEstimator) {
                DelayEstimator est = task.method == BenchMethod::StateEstimator
                                         ? k_delay_state_estimator(sys, task.k, opts)
                                         : k_delay_trajectory_estimator(sys, task.k, opts);
                row.opaque = est.opaque ? "true" : "false";
                row.verifier_states = std::to_string(est.num_states());
            } else {
                Verdict verdict = verify_state_based(sys, notion, to_method(task.method), opts);
                row.opaque = verdict.opaque ? "true" : "false";
                row.verifier_states = std::to_string(verdict.stats.verifier_states);
            }
        }
    } catch (const BudgetExceededError&) {
        row.opaque = "-";
        row.verifier_states = "T/O";
    } catch (const TimeoutError&) {
        row.opaque = "-";
        row.verifier_states = "T/O";
    }
    row.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return row;
}

}  // namespace

void run_bench(const BenchSpec& spec, std::ostream& out) {
    std::vector<Task> tasks;
    bool deterministic_family =
        spec.family == "cyclic" || spec.family == "reset" || spec.family == "revblow";
    for (std::uint32_t n : spec.sizes)
        for (int k : spec.ks)
            for (const auto& notion : spec.notions)
                for (BenchMethod method : spec.methods) {
                    int reps = deterministic_family ? 1 : std::max(1, spec.reps);
                    for (int r = 0; r < reps; ++r)
                        tasks.push_back({n, k, notion, method, spec.seed + std::uint64_t(r)});
                }

    std::vector<BenchRow> rows(tasks.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= tasks.size()) break;
            rows[i] = run_one(spec, tasks[i]);
        }
    };
    int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    out << kBenchCsvHeader << "\n";
    // group rows (reps are adjacent by construction) and append one
    // aggregate row per group
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        while (j < rows.size() && rows[j].family == rows[i].family && rows[j].n == rows[i].n &&
               rows[j].k == rows[i].k && rows[j].notion == rows[i].notion &&
               rows[j].method == rows[i].method)
            ++j;
        double sum_states = 0, sum_elapsed = 0, opaque_count = 0;
        std::size_t ok = 0;
        for (std::size_t r = i; r < j; ++r) {
            out << rows[r].csv() << "\n";
            if (rows[r].verifier_states != "T/O") {
                ++ok;
                sum_states += std::stod(rows[r].verifier_states);
                sum_elapsed += double(rows[r].elapsed_ns);
                if (rows[r].opaque == "true") opaque_count += 1;
            }
        }
        BenchRow agg = rows[i];
        agg.seed = "agg";
        char buf[64];
        if (ok == 0) {
            agg.opaque = "-";
            agg.verifier_states = "T/O";
            agg.elapsed_ns = 0;
        } else {
            std::snprintf(buf, sizeof buf, "%.2f", opaque_count / double(ok));
            agg.opaque = buf;
            std::snprintf(buf, sizeof buf, "%.2f", sum_states / double(ok));
            agg.verifier_states = buf;
            agg.elapsed_ns = static_cast<long long>(sum_elapsed / double(ok));
        }
        out << agg.csv() << "\n";
        i = j;
    }
}

}  // namespace opacity
