#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "opacity/aut_format.hpp"
#include "opacity/bench.hpp"

using namespace opacity;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::optional<OpacityNotion> notion_from(const std::string& token) {
    if (token == "cso") return OpacityNotion::cso();
    if (token == "iso") return OpacityNotion::iso();
    auto k_step = [&](SecretMode mode, int type) { return OpacityNotion::k_step(0, mode, type); };
    if (token == "joint-1") return k_step(SecretMode::Joint, 1);
    if (token == "joint-2") return k_step(SecretMode::Joint, 2);
    if (token == "separate-1") return k_step(SecretMode::Separate, 1);
    if (token == "separate-2") return k_step(SecretMode::Separate, 2);
    if (token == "inf-joint-1") return OpacityNotion::infinite_step(SecretMode::Joint, 1);
    if (token == "inf-joint-2") return OpacityNotion::infinite_step(SecretMode::Joint, 2);
    if (token == "inf-separate-1") return OpacityNotion::infinite_step(SecretMode::Separate, 1);
    if (token == "inf-separate-2") return OpacityNotion::infinite_step(SecretMode::Separate, 2);
    return std::nullopt;
}

int run_verify(const std::string& input, const std::string& notion_name, const std::string& mode_name,
               int secret_type, int k, const std::string& method_name_, bool print_witness,
               bool print_stats, std::size_t budget, std::optional<double> timeout_ms) {
    OpacityNotion notion;
    if (notion_name == "cso") {
        notion = OpacityNotion::cso();
    } else if (notion_name == "iso") {
        notion = OpacityNotion::iso();
    } else if (notion_name == "kstep") {
        notion = OpacityNotion::k_step(
            k, mode_name == "separate" ? SecretMode::Separate : SecretMode::Joint, secret_type);
    } else if (notion_name == "inf") {
        notion = OpacityNotion::infinite_step(
            mode_name == "separate" ? SecretMode::Separate : SecretMode::Joint, secret_type);
    } else {
        std::cerr << "error: unknown notion '" << notion_name << "'\n";
        return 2;
    }

    Method method;
    if (method_name_ == "forward")
        method = Method::Forward;
    else if (method_name_ == "reverse")
        method = Method::Reverse;
    else if (method_name_ == "so")
        method = Method::SecretObserver;
    else if (method_name_ == "auto")
        method = Method::Auto;
    else {
        std::cerr << "error: unknown method '" << method_name_ << "'\n";
        return 2;
    }

    LabeledSystem sys = parse_aut(read_input(input));
    VerifyOptions opts;
    opts.max_states = budget;
    opts.timeout_ms = timeout_ms;

    Verdict verdict = verify_state_based(sys, notion, method, opts);
    std::cout << "opaque=" << (verdict.opaque ? "true" : "false") << "\n";
    std::cout << "notion=" << notion.to_string() << "\n";
    std::cout << "method=" << method_name(verdict.stats.method) << "\n";
    if (print_witness && verdict.witness) std::cout << "witness=" << verdict.witness_string() << "\n";
    if (verdict.violated_level) std::cout << "violated_level=" << *verdict.violated_level << "\n";
    if (print_stats) {
        std::cout << "verifier_states=" << verdict.stats.verifier_states << "\n";
        std::cout << "elapsed_ns=" << verdict.stats.elapsed.count() << "\n";
    }
    return verdict.opaque ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"opacity: specify and verify opacity notions over finite automata"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "verify one notion on one system");
    std::string input = "-", notion = "cso", mode = "joint", method = "auto";
    int secret_type = 1, k = 0;
    bool witness = false, stats = false;
    std::size_t budget = 5'000'000;
    double timeout_ms = 0;
    verify->add_option("input", input, "automaton file, or - for stdin");
    verify->add_option("--notion", notion, "cso|iso|kstep|inf");
    verify->add_option("--mode", mode, "joint|separate")->check(CLI::IsMember({"joint", "separate"}));
    verify->add_option("--type", secret_type, "secret type 1|2")->check(CLI::IsMember({1, 2}));
    verify->add_option("-K,--steps", k, "delay bound for kstep");
    verify->add_option("--method", method, "forward|reverse|so|auto");
    verify->add_flag("--witness", witness, "print a shortest violating observation");
    verify->add_flag("--stats", stats, "print verifier size and elapsed time");
    verify->add_option("--budget", budget, "verifier state budget");
    verify->add_option("--timeout-ms", timeout_ms, "wall-clock limit per verification");

    // bench
    auto* bench = app.add_subcommand("bench", "sweep benchmark families, CSV on stdout");
    BenchSpec spec;
    std::vector<std::string> notion_tokens{"joint-1"}, method_tokens{"auto"};
    double bench_timeout = 0;
    bench->add_option("--family", spec.family, "dense|grid|cyclic|reset|revblow")->required();
    bench->add_option("--sizes", spec.sizes, "system sizes")->required()->delimiter(',');
    bench->add_option("--ks", spec.ks, "K sweep")->delimiter(',');
    bench->add_option("--notions", notion_tokens, "notion list")->delimiter(',');
    bench->add_option("--methods", method_tokens, "method list")->delimiter(',');
    bench->add_option("--reps", spec.reps, "instances per configuration");
    bench->add_option("--seed", spec.seed, "base seed");
    bench->add_option("--budget", spec.budget, "per-run state budget");
    bench->add_option("--timeout-ms", bench_timeout, "per-run wall-clock limit");
    bench->add_option("--jobs", spec.jobs, "worker threads");

    // gen
    auto* gen = app.add_subcommand("gen", "emit one generated system");
    std::string gen_family_name, gen_out = "-";
    std::uint32_t gen_n = 0;
    std::uint64_t gen_seed = 0;
    gen->add_option("--family", gen_family_name, "dense|grid|cyclic|reset")->required();
    gen->add_option("-n,--size", gen_n, "family size parameter")->required();
    gen->add_option("--seed", gen_seed, "seed (random families)");
    gen->add_option("-o,--output", gen_out, "output file, or - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*verify) {
            return run_verify(input, notion, mode, secret_type, k, method, witness, stats, budget,
                              timeout_ms > 0 ? std::optional<double>(timeout_ms) : std::nullopt);
        }
        if (*bench) {
            if (spec.ks.empty()) spec.ks = {0};
            if (bench_timeout > 0) spec.timeout_ms = bench_timeout;
            for (const auto& token : notion_tokens) {
                auto n = notion_from(token);
                if (!n) {
                    std::cerr << "error: unknown notion token '" << token << "'\n";
                    return 2;
                }
                spec.notions.push_back(*n);
            }
            for (const auto& token : method_tokens) {
                auto m = bench_method_from(token);
                if (!m) {
                    std::cerr << "error: unknown method token '" << token << "'\n";
                    return 2;
                }
                spec.methods.push_back(*m);
            }
            run_bench(spec, std::cout);
            return 0;
        }
        if (*gen) {
            LabeledSystem sys = gen_family(gen_family_name, gen_n, gen_seed);
            std::string text = serialize_aut(sys);
            if (gen_out == "-") {
                std::cout << text;
            } else {
                std::ofstream out(gen_out);
                if (!out) throw std::runtime_error("cannot open '" + gen_out + "'");
                out << text;
            }
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const TimeoutError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
