// Compares the OpenMP-parallel entry points against their serial reference
// implementations on generated instances. Wall-clock only, best of three.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hkd/harness.hpp"
#include "hkd/kernel.hpp"
#include "hkd/reachability.hpp"

using namespace hkd;

namespace {

double best_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const std::string& label, int n, double serial, double parallel) {
    std::printf("%-28s %4d %12.3f %12.3f %10.2fx\n", label.c_str(), n, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("%-28s %4s %12s %12s %10s\n", "workload", "|V|", "serial ms", "parallel ms",
                "speedup");

    Caps caps;
    caps.max_paths = 50000000;
    caps.max_cycles = 50000000;

    // Dense reachability: the pair space dominates.
    for (int n : {9, 11, 13}) {
        GenConfig cfg;
        cfg.n_min = cfg.n_max = n;
        cfg.density = 0.5;
        cfg.colors = 4;
        cfg.classes = 2;
        cfg.seed = 42;
        Instance inst = draw_candidate(cfg, derive_seed(cfg.seed, 0));
        volatile char sink = 0;
        double s = best_ms([&] { sink = sink ^ reach_matrix_serial(inst, {}, caps).at[0][0]; });
        double p = best_ms([&] { sink = sink ^ reach_matrix(inst, {}, caps).at[0][0]; });
        row("reach-matrix", n, s, p);
    }

    // Brute-force kernel scan: the subset space dominates.
    for (int n : {12, 14, 16}) {
        GenConfig cfg;
        cfg.n_min = cfg.n_max = n;
        cfg.density = 0.25;
        cfg.colors = 3;
        cfg.classes = 2;
        cfg.seed = 7;
        cfg.shape = PatternShape::Empty; // plain-kernel search, usually kernel-free
        Caps wide = caps;
        wide.max_vertices = 20;
        Instance inst = draw_candidate(cfg, derive_seed(cfg.seed, 0));
        volatile bool sink = false;
        double s = best_ms([&] { sink = find_h_kernel_serial(inst, wide).has_value(); });
        double p = best_ms([&] { sink = find_h_kernel(inst, wide).has_value(); });
        row("kernel-subset-scan", n, s, p);
    }

    // Semikernel family enumeration: subset space times predicate cost.
    for (int n : {10, 12}) {
        GenConfig cfg;
        cfg.n_min = cfg.n_max = n;
        cfg.density = 0.35;
        cfg.colors = 4;
        cfg.classes = 2;
        cfg.seed = 11;
        Instance inst = draw_candidate(cfg, derive_seed(cfg.seed, 0));
        volatile std::size_t sink = 0;
        double s = best_ms([&] { sink = semikernel_family_serial(inst, caps).size(); });
        double p = best_ms([&] { sink = semikernel_family(inst, caps).size(); });
        row("semikernel-family", n, s, p);
    }
    return 0;
}
