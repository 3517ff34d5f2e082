// Timing harness for the data-parallel kernels against their serial
// reference paths. Outputs are compared for exact equality first: the
// parallel kernels write one slot per work item, so every mode must agree
// bit for bit before any timing is trusted.

#include <chrono>
#include <cstdio>
#include <vector>

#include "gammadyn/certify.hpp"
#include "gammadyn/parallel.hpp"
#include "gammadyn/rng.hpp"
#include "gammadyn/serialize.hpp"

using namespace gammadyn;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

ScalarSet sequence_sample(std::size_t n) {
    ScalarSet set;
    set.ambient = Ambient::Sequence;
    set.asymptotics = {AsymKind::DirectionsAccumulate, -1};
    for (std::size_t i = 1; i <= n; ++i) {
        CVec v(n + 1, cplx(0.0, 0.0));
        v[0] = 1.0;
        v[i] = 1.0 / static_cast<double>(i);
        set.vectors.push_back(std::move(v));
    }
    return set;
}

template <class F>
double best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

} // namespace

int main() {
    std::printf("gammadyn kernel benchmark (threads: %d)\n", par::max_threads());
    std::printf("%-28s %10s %12s %12s %8s %6s\n", "kernel", "items", "serial ms", "parallel ms",
                "speedup", "equal");

    // counterexample bundle workload
    BuildOptions opts;
    opts.K = 12;
    opts.seed = 42;
    const ScalarSet set = sequence_sample(192);
    const CounterexampleBundle bundle = build_counterexample(set, opts.K, opts);

    {
        ConditionReport rs, rp;
        const double ts = best_of(3, [&] { rs = verify_conditions(bundle, par::Exec::Serial); });
        const double tp = best_of(3, [&] { rp = verify_conditions(bundle, par::Exec::Parallel); });
        const bool equal = encode(rs).dump() == encode(rp).dump();
        std::printf("%-28s %10zu %12.3f %12.3f %8.2f %6s\n", "verify_conditions",
                    rs.instances.size(), ts, tp, ts / tp, equal ? "yes" : "NO");
    }
    {
        OrbitErrorReport rs, rp;
        const double ts = best_of(3, [&] { rs = measure_orbit_errors(bundle, par::Exec::Serial); });
        const double tp = best_of(3, [&] { rp = measure_orbit_errors(bundle, par::Exec::Parallel); });
        const bool equal = encode(rs).dump() == encode(rp).dump();
        std::printf("%-28s %10zu %12.3f %12.3f %8.2f %6s\n", "measure_orbit_errors",
                    rs.rows.size(), ts, tp, ts / tp, equal ? "yes" : "NO");
    }
    {
        const ScalarSet big = sequence_sample(1200);
        CoverReport rs, rp;
        const double ts =
            best_of(3, [&] { rs = classify_cover(big, 1e-6, {}, par::Exec::Serial); });
        const double tp =
            best_of(3, [&] { rp = classify_cover(big, 1e-6, {}, par::Exec::Parallel); });
        const bool equal = encode(rs).dump() == encode(rp).dump();
        std::printf("%-28s %10zu %12.3f %12.3f %8.2f %6s\n", "classify_cover",
                    big.vectors.size(), ts, tp, ts / tp, equal ? "yes" : "NO");
    }
    return 0;
}
