#include <doctest.h>

#include "gammadyn/certify.hpp"
#include "gammadyn/serialize.hpp"

using namespace gammadyn;

// The OpenMP kernels write one slot per work item, so their output must be
// bit-identical to the serial reference paths.

namespace {

CounterexampleBundle reference_bundle() {
    ScalarSet set;
    set.ambient = Ambient::Sequence;
    set.asymptotics = {AsymKind::DirectionsAccumulate, -1};
    for (int n = 1; n <= 72; ++n) {
        CVec x(73, cplx(0.0, 0.0));
        x[0] = 1.0;
        x[static_cast<std::size_t>(n)] = 1.0 / n;
        set.vectors.push_back(std::move(x));
    }
    BuildOptions opts;
    opts.K = 6;
    opts.seed = 99;
    return build_counterexample(set, opts.K, opts);
}

} // namespace

TEST_CASE("parallel kernels match their serial reference bitwise") {
    const CounterexampleBundle bundle = reference_bundle();

    const ConditionReport cs = verify_conditions(bundle, par::Exec::Serial);
    const ConditionReport cp = verify_conditions(bundle, par::Exec::Parallel);
    CHECK(encode(cs).dump() == encode(cp).dump());
    CHECK(cs.all_pass);

    const OrbitErrorReport os = measure_orbit_errors(bundle, par::Exec::Serial);
    const OrbitErrorReport op = measure_orbit_errors(bundle, par::Exec::Parallel);
    CHECK(encode(os).dump() == encode(op).dump());
    CHECK(os.all_pass);

    ScalarSet cloud;
    cloud.ambient = Ambient::Finite;
    cloud.dim = 3;
    for (int n = 1; n <= 300; ++n)
        cloud.vectors.push_back(
            {cplx(1.0, 0.1 * (n % 7)), cplx(1.0 / n, 0.0), cplx(0.25 * (n % 3), -0.5)});
    const CoverReport rs = classify_cover(cloud, 1e-6, {}, par::Exec::Serial);
    const CoverReport rp = classify_cover(cloud, 1e-6, {}, par::Exec::Parallel);
    CHECK(encode(rs).dump() == encode(rp).dump());
}

TEST_CASE("thread count helper stays positive") { CHECK(par::max_threads() >= 1); }
