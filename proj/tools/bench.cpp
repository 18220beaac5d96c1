// Times the OpenMP-parallel kernels against their serial reference
// implementations and verifies both produce identical results.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "lll/conditions.hpp"
#include "lll/matching.hpp"
#include "lll/parallel.hpp"
#include "lll/rainbow.hpp"
#include "lll/rng.hpp"
#include "lll/verify.hpp"

using namespace lll;

namespace {

template <class F>
double run_ms(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool equal) {
    std::cout << std::left << std::setw(34) << name << std::right << std::fixed
              << std::setprecision(1) << std::setw(10) << serial_ms << " ms" << std::setw(10)
              << parallel_ms << " ms" << std::setw(9) << std::setprecision(2)
              << (parallel_ms > 0 ? serial_ms / parallel_ms : 0.0) << "x   "
              << (equal ? "results equal" : "RESULTS DIFFER") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    int jobs = 0; // all cores
    size_t trials = 400;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--jobs" && i + 1 < argc)
            jobs = std::atoi(argv[++i]);
        else if (arg == "--trials" && i + 1 < argc)
            trials = static_cast<size_t>(std::atoll(argv[++i]));
        else {
            std::cout << "usage: lll_bench [--jobs N] [--trials N]\n";
            return 2;
        }
    }
    std::cout << "threads: " << effective_jobs(jobs) << "\n\n";
    std::cout << std::left << std::setw(34) << "kernel" << std::right << std::setw(13) << "serial"
              << std::setw(13) << "parallel" << std::setw(10) << "speedup" << "\n";
    std::cout << std::string(78, '-') << "\n";
    bool all_equal = true;

    { // Monte Carlo trial batch on the K_40 coloring experiment
        const ColoredGraph g = random_coloring(20, 4, 1);
        ExperimentOptions serial_opt, parallel_opt;
        serial_opt.jobs = 1;
        parallel_opt.jobs = jobs;
        ExperimentStats serial_stats, parallel_stats;
        const double s = run_ms(
            [&] { serial_stats = run_rainbow_experiment(g, trials, 7, "pi_stable", serial_opt); });
        const double p = run_ms(
            [&] { parallel_stats = run_rainbow_experiment(g, trials, 7, "pi_stable", parallel_opt); });
        const bool equal = trial_rows_csv(serial_stats.rows) == trial_rows_csv(parallel_stats.rows);
        all_equal &= equal;
        report("monte carlo (" + std::to_string(trials) + " trials)", s, p, equal);
    }

    { // signed independent-set sums on a random 18-flaw graph
        const uint32_t n = 18;
        DependencyGraph dep(n);
        Rng rng(3);
        for (uint32_t f = 0; f < n; ++f)
            for (uint32_t h = f + 1; h < n; ++h)
                if (rng.below(4) == 0) dep.add_edge(static_cast<int>(f), static_cast<int>(h));
        std::vector<Rat> p_vec;
        for (uint32_t f = 0; f < n; ++f) p_vec.push_back(rat(1, 4 + f % 5));
        ShearerTable serial_table, parallel_table;
        const size_t cap = 5000000;
        const double s = run_ms([&] { serial_table = shearer_q(dep, p_vec, cap); });
        const double p = run_ms([&] { parallel_table = shearer_q_parallel(dep, p_vec, cap, jobs); });
        bool equal = serial_table.entries().size() == parallel_table.entries().size();
        if (equal)
            for (const auto& [mask, qv] : serial_table.entries())
                if (parallel_table.q(mask) != qv) {
                    equal = false;
                    break;
                }
        all_equal &= equal;
        report("signed sums (" + std::to_string(serial_table.entries().size()) + " sets)", s, p,
               equal);
    }

    { // commutativity suite on K_8 single-edge flaws
        MatchingInstanceSpec spec;
        spec.host = HostGraph::complete(8);
        for (const Edge& e : spec.host.all_edges()) spec.flaw_patterns.push_back({e});
        const BuiltInstance built = build_matching_instance(spec);
        CheckResult serial_res, parallel_res;
        const double s =
            run_ms([&] { serial_res = check_strong_commutativity(built.inst, built.dep, 1); });
        const double p =
            run_ms([&] { parallel_res = check_strong_commutativity(built.inst, built.dep, jobs); });
        const bool equal = serial_res.ok == parallel_res.ok &&
                           serial_res.cases_checked == parallel_res.cases_checked;
        all_equal &= equal;
        report("strong commutativity (K_8)", s, p, equal && serial_res.ok);
    }

    return all_equal ? 0 : 1;
}
