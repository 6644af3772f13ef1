#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "opacity/estimators.hpp"
#include "opacity/generators.hpp"

namespace opacity {

/// How one benchmark run is verified. The estimator rows exist so the
/// baseline verifiers appear in the same sweeps as ours.
enum class BenchMethod { Forward, Reverse, SecretObserver, Auto, StateEstimator, TrajectoryEstimator };

std::string bench_method_name(BenchMethod m);
std::optional<BenchMethod> bench_method_from(const std::string& name);

struct BenchSpec {
    std::string family;                 // dense | grid | cyclic | reset | revblow
    std::vector<std::uint32_t> sizes;
    std::vector<int> ks;
    std::vector<OpacityNotion> notions;
    std::vector<BenchMethod> methods;
    int reps = 1;
    std::uint64_t seed = 0;
    std::size_t budget = 5'000'000;
    std::optional<double> timeout_ms;
    int jobs = 1;
};

inline const char* kBenchCsvHeader = "family,n,K,notion,method,opaque,verifier_states,elapsed_ns,seed";

struct BenchRow {
    std::string family;
    std::uint32_t n = 0;
    int k = 0;
    std::string notion;
    std::string method;
    std::string opaque;           // true | false | - (not applicable)
    std::string verifier_states;  // count or T/O
    long long elapsed_ns = 0;
    std::string seed;

    std::string csv() const;
};

LabeledSystem gen_family(const std::string& family, std::uint32_t n, std::uint64_t seed);

/// Runs the sweep and streams CSV rows (then one aggregate row per group) in
/// deterministic config order regardless of worker completion order.
void run_bench(const BenchSpec& spec, std::ostream& out);

}  // namespace opacity
