#include <doctest.h>

#include <cmath>

#include "gammadyn/certify.hpp"
#include "gammadyn/rng.hpp"
#include "gammadyn/serialize.hpp"

using namespace gammadyn;

namespace {

ScalarSet anchored_decay_set(int n_max) {
    ScalarSet set;
    set.ambient = Ambient::Sequence;
    set.asymptotics = {AsymKind::DirectionsAccumulate, -1};
    for (int n = 1; n <= n_max; ++n) {
        CVec x(static_cast<std::size_t>(n_max) + 1, cplx(0.0, 0.0));
        x[0] = 1.0;
        x[static_cast<std::size_t>(n)] = 1.0 / n;
        set.vectors.push_back(std::move(x));
    }
    return set;
}

CounterexampleBundle small_bundle(int K = 5, std::uint64_t seed = 8) {
    BuildOptions opts;
    opts.K = K;
    opts.seed = seed;
    return build_counterexample(anchored_decay_set(64), K, opts);
}

} // namespace

TEST_CASE("verification passes on a fresh bundle and ignores stored margins") {
    CounterexampleBundle bundle = small_bundle();
    const ConditionReport base = verify_conditions(bundle);
    CHECK(base.all_pass);
    CHECK(base.first_violation.empty());

    // corrupting every stored margin leaves the verdict untouched
    for (auto& c : bundle.schedule.conditions) c.margin = -99.0;
    const ConditionReport again = verify_conditions(bundle);
    CHECK(again.all_pass);
}

TEST_CASE("decrementing a scheduled power is detected at that step") {
    CounterexampleBundle bundle = small_bundle();
    bundle.schedule.m[3] -= 1;
    bundle.family = assemble_family(bundle.schedule, construction_view(bundle.extraction),
                                    bundle.targets); // keep the family consistent with the tamper
    const ConditionReport report = verify_conditions(bundle);
    CHECK_FALSE(report.all_pass);
    bool failed_at_3 = false;
    for (const auto& inst : report.instances) failed_at_3 |= (!inst.pass && inst.k == 3);
    bool structural_failed = false;
    for (const auto& s : report.structural) structural_failed |= !s.pass;
    CHECK((failed_at_3 || structural_failed));
}

TEST_CASE("tampered family vectors are detected by re-assembly") {
    CounterexampleBundle bundle = small_bundle();
    auto blocks = bundle.family.z_tilde[1].blocks();
    blocks[0].second = ss_add(blocks[0].second, SparseSeq::basis(3, 0.125));
    bundle.family.z_tilde[1] = DirectSumVec::from_blocks(std::move(blocks));
    const ConditionReport report = verify_conditions(bundle);
    CHECK_FALSE(report.all_pass);
}

TEST_CASE("orbit errors respect the closed-form bounds") {
    const CounterexampleBundle bundle = small_bundle();
    const OrbitErrorReport report = measure_orbit_errors(bundle);
    CHECK(report.all_pass);
    REQUIRE(report.rows.size() == 6);
    CHECK(report.slack == std::exp2(-5));
    for (const auto& row : report.rows) {
        CHECK(row.pass);
        CHECK(row.e <= row.b + report.slack);
        CHECK(row.margin > 0.0);
    }
}

TEST_CASE("closed-form bound values") {
    CHECK(orbit_error_bound(Mode::FiniteDim, Regime::ToZero, 3, 12, 40, 0.1, 1.0) ==
          doctest::Approx(3.0 * 13.0 / 4096.0).epsilon(1e-15)); // about 0.009521
    CHECK(orbit_error_bound(Mode::FiniteDim, Regime::ToZero, 1, 0, 1, 0.5, 0.0) == 1.0);
    // the sequence-mode bound decays once the pivot does
    double prev = 1e9;
    for (int k = 1; k <= 12; ++k) {
        const double b =
            orbit_error_bound(Mode::Infinite, Regime::ToZero, 4, k, 10 + 3 * k, 0.5 / k, 2.0);
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("theta rationality gate") {
    CHECK(theta_over_pi_rational(3.141592653589793 / 2.0));
    CHECK(theta_over_pi_rational(0.75 * 3.141592653589793));
    const double golden = 2.0 * 3.141592653589793238462643 * (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK_FALSE(theta_over_pi_rational(golden));
}

TEST_CASE("rotation-times-shift demo hits its targets") {
    BfDemoConfig cfg;
    cfg.theta = 2.0 * 3.141592653589793238462643 * (std::sqrt(5.0) - 1.0) / 2.0;
    for (int t = 0; t <= 100; ++t) cfg.gamma_sample.emplace_back(1.0 + t / 100.0, 0.0);
    cfg.a_targets = {std::polar(1.3, 0.4), std::polar(1.7, -2.0), std::polar(1.1, 2.9)};
    cfg.eps = 0.1;
    cfg.k0 = 12;
    cfg.m_cap = 900;
    const BFDemoReport report = bf_counterexample_demo(cfg);
    CHECK(report.all_ok);
    REQUIRE(report.rows.size() == 3);
    for (const auto& row : report.rows) {
        CHECK(row.within_eps);
        CHECK(row.audit_ok);
        CHECK(row.achieved <= row.shift_err + row.phase_contrib + row.modulus_gap + 1e-12);
    }

    SUBCASE("rational angle is rejected") {
        cfg.theta = 3.141592653589793 / 2.0;
        CHECK_THROWS_AS(bf_counterexample_demo(cfg), Error);
    }
    SUBCASE("unreachable modulus is rejected") {
        cfg.a_targets = {std::polar(20.0, 0.0)};
        CHECK_THROWS_AS(bf_counterexample_demo(cfg), Error);
    }
}

TEST_CASE("conjugacy transport by tail permutations") {
    const CounterexampleBundle bundle = small_bundle();
    const int B = static_cast<int>(bundle.family.size());
    REQUIRE(B >= 3);

    SUBCASE("identity transport is bitwise") {
        std::vector<int> id(static_cast<std::size_t>(B));
        for (int i = 0; i < B; ++i) id[static_cast<std::size_t>(i)] = i;
        const TransportReport r = conjugacy_transport(bundle, id);
        CHECK(r.pass);
        CHECK(r.max_error_delta == 0.0);
    }
    SUBCASE("swapping tail blocks preserves errors and verdicts") {
        std::vector<int> perm(static_cast<std::size_t>(B));
        for (int i = 0; i < B; ++i) perm[static_cast<std::size_t>(i)] = i;
        std::swap(perm[1], perm[2]);
        const TransportReport r = conjugacy_transport(bundle, perm);
        CHECK(r.pass);
        CHECK(r.errors_equal);
        CHECK(r.verdicts_equal);
        CHECK(r.max_error_delta <= 1e-12);
    }
    SUBCASE("moving block 0 is not a symmetry") {
        std::vector<int> perm(static_cast<std::size_t>(B));
        for (int i = 0; i < B; ++i) perm[static_cast<std::size_t>(i)] = i;
        std::swap(perm[0], perm[1]);
        CHECK_THROWS_AS(conjugacy_transport(bundle, perm), Error);
    }
}

TEST_CASE("random mutations flip a verdict") {
    const CounterexampleBundle bundle = small_bundle();
    Rng rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        CounterexampleBundle mutant = bundle;
        const int K = mutant.schedule.last_step();
        const std::size_t k = 1 + rng.next_below(static_cast<std::uint64_t>(K));
        if (rng.next_below(2) == 0) {
            mutant.schedule.m[k] -= 1;
        } else {
            const std::size_t row = mutant.schedule.phi[k];
            mutant.extraction.coords[row][mutant.extraction.pivot] *= 4.0;
        }
        const ConditionReport report = verify_conditions(mutant);
        CHECK_FALSE(report.all_pass);
    }
}

TEST_CASE("empty schedule verifies trivially") {
    CounterexampleBundle bundle = small_bundle();
    bundle.schedule.phi.clear();
    bundle.schedule.m.clear();
    bundle.schedule.conditions.clear();
    bundle.schedule.uniform_bound.clear();
    bundle.targets.entries.clear();
    bundle.targets.degrees.clear();
    bundle.family =
        assemble_family(bundle.schedule, construction_view(bundle.extraction), bundle.targets);
    bundle.normalizer = diagonal_normalizer(bundle.family);
    const ConditionReport report = verify_conditions(bundle);
    CHECK(report.instances.empty());
    CHECK(report.all_pass);
    const OrbitErrorReport orbit = measure_orbit_errors(bundle);
    CHECK(orbit.rows.empty());
    CHECK(orbit.all_pass);
}

TEST_CASE("diagonal normalizer commutes with the operator") {
    const CounterexampleBundle bundle = small_bundle();
    const std::vector<double> d = bundle.normalizer;
    REQUIRE(static_cast<int>(d.size()) == bundle.op.blocks);
    auto apply_diag = [&](const DirectSumVec& v) {
        std::vector<DirectSumVec::Block> blocks;
        for (const auto& [i, seq] : v.blocks())
            blocks.emplace_back(i, ss_scale(d[static_cast<std::size_t>(i)], seq));
        return DirectSumVec::from_blocks(std::move(blocks));
    };
    Rng rng(321);
    for (int t = 0; t < 50; ++t) {
        std::vector<DirectSumVec::Block> blocks;
        for (int b = 0; b < bundle.op.blocks; ++b) {
            if (rng.next_below(2) == 0) continue;
            std::vector<SparseSeq::Entry> entries;
            for (int s = 0; s < 3; ++s)
                entries.emplace_back(static_cast<std::int64_t>(rng.next_below(21)) - 10,
                                     cplx(rng.next_gauss(), rng.next_gauss()));
            blocks.emplace_back(b, SparseSeq::from_entries(std::move(entries)));
        }
        const DirectSumVec x = DirectSumVec::from_blocks(std::move(blocks));
        const DirectSumVec a = apply_diag(apply_direct_sum(bundle.op, x));
        const DirectSumVec b = apply_direct_sum(bundle.op, apply_diag(x));
        CHECK(ds_norm(ds_sub(a, b)) <= 1e-12);
        // dense-range evidence: every entry sits in [1/3, 1]
    }
    for (double v : d) {
        CHECK(v >= 1.0 / 3.0);
        CHECK(v <= 1.0);
    }
}
