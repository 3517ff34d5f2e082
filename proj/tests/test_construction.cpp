#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gammadyn/construction.hpp"
#include "gammadyn/serialize.hpp"

using namespace gammadyn;

namespace {

ConstructionCoords inverse_decay_coords(int rows, Mode mode, Regime regime, int blocks) {
    // pivot 1/n with constant unit tail coordinates
    ConstructionCoords cc;
    cc.mode = mode;
    cc.regime = regime;
    for (int n = 1; n <= rows; ++n) {
        const double piv = regime == Regime::ToZero ? 1.0 / n : static_cast<double>(n);
        cc.pivot.emplace_back(piv, 0.0);
        std::vector<cplx> tail;
        for (int i = 1; i < blocks; ++i) tail.emplace_back(1.0, 0.0);
        cc.tail.push_back(std::move(tail));
        cc.tail_l2.push_back(std::sqrt(static_cast<double>(blocks - 1)));
    }
    return cc;
}

// brute-force oracle: the lexicographically least admissible (phi, m) per
// step, scanning every pair and evaluating every condition exactly
Schedule brute_force_schedule(const ConstructionCoords& coords, const TargetSequence& targets,
                              int K, std::size_t phi_max, std::int64_t m_max, double margin_rel) {
    Schedule s;
    s.mode = coords.mode;
    s.regime = coords.regime;
    s.margin_rel = margin_rel;
    for (int k = 0; k <= K; ++k) {
        bool placed = false;
        const std::size_t phi_lo = k == 0 ? 0 : s.phi.back() + 1;
        const std::int64_t m_lo = k == 0 ? 1 : s.m.back() + 1;
        for (std::size_t cand = phi_lo; cand < phi_max && !placed; ++cand) {
            for (std::int64_t mm = m_lo; mm <= m_max && !placed; ++mm) {
                s.phi.push_back(cand);
                s.m.push_back(mm);
                const auto insts = step_conditions(coords, targets, s.phi, s.m, k, margin_rel);
                if (std::all_of(insts.begin(), insts.end(),
                                [](const ConditionInstance& c) { return c.pass; })) {
                    placed = true;
                } else {
                    s.phi.pop_back();
                    s.m.pop_back();
                }
            }
        }
        REQUIRE(placed);
    }
    return s;
}

} // namespace

TEST_CASE("target sequence obeys its slot constraints") {
    for (const Mode mode : {Mode::FiniteDim, Mode::Infinite}) {
        const int limit = mode == Mode::FiniteDim ? 2 : 16;
        const TargetSequence ts = gen_target_sequence(16, mode, limit, -4);
        REQUIRE(ts.entries.size() == 17);
        CHECK(ts.entries[0].is_zero());
        for (int n = 0; n <= 16; ++n) {
            const auto& y = ts.entries[static_cast<std::size_t>(n)];
            for (const auto& [b, seq] : y.blocks()) {
                CHECK(b < n);
                if (mode == Mode::FiniteDim) CHECK(b < limit);
                for (const auto& [j, c] : seq.entries()) {
                    CHECK(std::llabs(j) < n);
                    CHECK(std::abs(c) <= static_cast<double>(n));
                }
            }
            CHECK(ts.degrees[static_cast<std::size_t>(n)] <= n);
        }
        // enough nonzero entries to exercise the machinery
        int nonzero = 0;
        for (const auto& y : ts.entries) nonzero += y.is_zero() ? 0 : 1;
        CHECK(nonzero >= 8);
    }
}

TEST_CASE("target enumeration is deterministic and covers fresh vectors") {
    const TargetSequence a = gen_target_sequence(12, Mode::Infinite, 12, -6);
    const TargetSequence b = gen_target_sequence(12, Mode::Infinite, 12, -6);
    for (std::size_t n = 0; n < a.entries.size(); ++n) CHECK(a.entries[n] == b.entries[n]);
    // master decode walks distinct vectors
    int distinct = 0;
    for (std::uint64_t i = 1; i <= 40; ++i) {
        const DirectSumVec v = decode_master_vector(i, Mode::Infinite, 12, -6);
        const DirectSumVec w = decode_master_vector(i + 1, Mode::Infinite, 12, -6);
        if (!(v == w)) ++distinct;
    }
    CHECK(distinct >= 35);
}

TEST_CASE("greedy schedule equals the brute-force least admissible pair") {
    const ConstructionCoords coords = inverse_decay_coords(200, Mode::FiniteDim, Regime::ToZero, 2);
    const TargetSequence targets = gen_target_sequence(3, Mode::FiniteDim, 2, -11);
    ScheduleOptions opts;
    opts.m_cap = 200;
    const Schedule greedy = build_schedule(coords, targets, 3, opts);
    const Schedule brute = brute_force_schedule(coords, targets, 3, 200, 200, opts.margin_rel);
    CHECK(greedy.phi == brute.phi);
    CHECK(greedy.m == brute.m);
    for (const auto& c : greedy.conditions) CHECK(c.pass);
}

TEST_CASE("schedule conditions all pass with positive margins in both regimes") {
    for (const Regime regime : {Regime::ToZero, Regime::ToInfinity}) {
        const ConstructionCoords coords = inverse_decay_coords(128, Mode::Infinite, regime, 6);
        const TargetSequence targets = gen_target_sequence(6, Mode::Infinite, 6, -14);
        const Schedule sched = build_schedule(coords, targets, 6, {});
        CHECK(sched.last_step() == 6);
        for (const auto& c : sched.conditions) {
            CHECK(c.pass);
            if (!c.equality) CHECK(c.margin > 0.0);
        }
        for (const auto& ub : sched.uniform_bound) CHECK(ub.holds);
        // support-shift implication: once m_k clears twice the degree, the
        // zero-at-origin conditions hold automatically
        for (int k = 0; k <= 6; ++k) {
            if (sched.m[static_cast<std::size_t>(k)] >
                2 * targets.degrees[static_cast<std::size_t>(k)]) {
                for (const auto& c : sched.conditions)
                    if (c.k == k && c.equality) CHECK(c.pass);
            }
        }
    }
}

TEST_CASE("coverable-style coordinates exhaust the row scan") {
    // pivot moduli confined to [1, 2]: no admissible decay for later steps
    ConstructionCoords cc;
    cc.mode = Mode::FiniteDim;
    cc.regime = Regime::ToZero;
    for (int n = 0; n < 64; ++n) {
        cc.pivot.emplace_back(1.0 + (n % 5) * 0.25, 0.0);
        cc.tail.push_back({cplx(1.0, 0.0)});
        cc.tail_l2.push_back(1.0);
    }
    const TargetSequence targets = gen_target_sequence(8, Mode::FiniteDim, 2, 0);
    CHECK_THROWS_AS(build_schedule(cc, targets, 8, {}), Error);
}

TEST_CASE("assembled family: anchors, norms and disjoint blocks") {
    const ConstructionCoords coords = inverse_decay_coords(128, Mode::Infinite, Regime::ToZero, 5);
    const TargetSequence targets = gen_target_sequence(5, Mode::Infinite, 5, -13);
    const Schedule sched = build_schedule(coords, targets, 5, {});
    const ConstructedFamily fam = assemble_family(sched, coords, targets);
    REQUIRE(fam.size() == 5);
    CHECK(fam.includes_e0);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        CHECK(fam.norms[i] >= 1.0);
        CHECK(fam.norms[i] < 3.0);
        CHECK(fam.z_tilde[i].block(static_cast<int>(i)).at(0) == cplx(1.0, 0.0));
        for (std::size_t j = i + 1; j < fam.size(); ++j)
            CHECK(ds_inner(fam.z_tilde[i], fam.z_tilde[j]) == cplx(0.0, 0.0));
        CHECK(ds_norm(fam.z[i]) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto d = diagonal_normalizer(fam);
    for (double v : d) {
        CHECK(v <= 1.0);
        CHECK(v >= 1.0 / 3.0);
    }
}

TEST_CASE("empty schedule leaves only the anchor") {
    ConstructionCoords coords = inverse_decay_coords(4, Mode::Infinite, Regime::ToZero, 2);
    Schedule empty;
    empty.mode = Mode::Infinite;
    empty.regime = Regime::ToZero;
    TargetSequence targets = gen_target_sequence(0, Mode::Infinite, 2, 0);
    targets.entries.clear();
    targets.degrees.clear();
    const ConstructedFamily fam = assemble_family(empty, coords, targets);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        CHECK(fam.norms[i] == 1.0);
        CHECK(fam.z_tilde[i].block(static_cast<int>(i)) == SparseSeq::basis(0));
    }
}

TEST_CASE("finite-mode family keeps term norms below their geometric bound") {
    const ConstructionCoords coords = inverse_decay_coords(200, Mode::FiniteDim, Regime::ToZero, 2);
    const TargetSequence targets = gen_target_sequence(4, Mode::FiniteDim, 2, -12);
    const Schedule sched = build_schedule(coords, targets, 4, {});
    const ConstructedFamily fam = assemble_family(sched, coords, targets);
    CHECK_FALSE(fam.includes_e0);
    // per-term restatement of the first-term conditions
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j <= 4; ++j) {
            const SparseSeq& yji = targets.entries[static_cast<std::size_t>(j)].block(i);
            if (yji.is_zero()) continue;
            const std::size_t rj = sched.phi[static_cast<std::size_t>(j)];
            const cplx lam = i == 0 ? coords.pivot[rj] : coords.tail[rj][0];
            const WeightProfile fwd =
                i == 0 ? pivot_forward_profile(Regime::ToZero) : WeightProfile::NU;
            const double term =
                ss_norm(ss_scale(cplx(1.0, 0.0) / lam,
                                 power_apply(fwd, sched.m[static_cast<std::size_t>(j)], yji)));
            CHECK(term < std::exp2(-j));
        }
    }
    CHECK(ds_inner(fam.z_tilde[0], fam.z_tilde[1]) == cplx(0.0, 0.0));
}

TEST_CASE("full pipeline is deterministic") {
    ScalarSet set;
    set.ambient = Ambient::Sequence;
    set.asymptotics = {AsymKind::DirectionsAccumulate, -1};
    for (int n = 1; n <= 48; ++n) {
        CVec x(49, cplx(0.0, 0.0));
        x[0] = 1.0;
        x[static_cast<std::size_t>(n)] = 1.0 / n;
        set.vectors.push_back(std::move(x));
    }
    BuildOptions opts;
    opts.K = 4;
    opts.seed = 12345;
    const CounterexampleBundle a = build_counterexample(set, opts.K, opts);
    const CounterexampleBundle b = build_counterexample(set, opts.K, opts);
    CHECK(encode(a).dump() == encode(b).dump());
    CHECK(a.certificate.verdict == NonHypVerdict::Expansive);
    CHECK(a.op.block0 == WeightProfile::W1);
}

TEST_CASE("scheduled approximant for the plain V-profile shift") {
    std::vector<SparseSeq> targets;
    const TargetSequence ts = gen_target_sequence(8, Mode::FiniteDim, 1, 0);
    for (const auto& y : ts.entries) targets.push_back(y.block(0));

    const HcVector hv = build_hypercyclic_vector(targets, {}, 0.0, 900);
    REQUIRE(hv.m.size() == 9);
    for (int k = 0; k <= 8; ++k) {
        CHECK(hv.errors[static_cast<std::size_t>(k)] <= hv.bounds[static_cast<std::size_t>(k)]);
        CHECK(hv.bounds[static_cast<std::size_t>(k)] ==
              doctest::Approx((k + 1) * std::exp2(-k)).epsilon(1e-15));
    }

    SUBCASE("phase goals pin the rotation angle") {
        const double theta = 2.0 * 3.141592653589793238462643 * (std::sqrt(5.0) - 1.0) / 2.0;
        std::map<int, PhaseGoal> goals{{4, PhaseGoal{0.0, 0.1}}};
        const HcVector pinned = build_hypercyclic_vector(targets, goals, theta, 2000);
        CHECK(std::abs(wrap_angle(theta * static_cast<double>(pinned.m[4]))) < 0.1);
        // oracle: pinned.m[4] is the least admissible power in the window
        for (std::int64_t mm = pinned.m[3] + 1; mm < pinned.m[4]; ++mm) {
            const bool in_window = std::abs(wrap_angle(theta * static_cast<double>(mm))) <= 0.1;
            if (!in_window) continue;
            bool admissible = true;
            for (int j = 0; j < 4 && admissible; ++j) {
                admissible =
                    ss_norm(power_apply(WeightProfile::NU, mm - pinned.m[static_cast<std::size_t>(j)],
                                        targets[4])) < std::exp2(-4) &&
                    ss_norm(power_apply(WeightProfile::V, mm - pinned.m[static_cast<std::size_t>(j)],
                                        targets[static_cast<std::size_t>(j)])) < std::exp2(-4);
            }
            admissible = admissible &&
                         ss_norm(power_apply(WeightProfile::NU, mm, targets[4])) < std::exp2(-4);
            CHECK_FALSE(admissible);
        }
    }

    SUBCASE("empty target list gives the zero vector") {
        const HcVector none = build_hypercyclic_vector({}, {}, 0.0, 10);
        CHECK(none.x.is_zero());
        CHECK(none.m.empty());
    }
}

TEST_CASE("one-line samples route through the single-block construction") {
    // geometric moduli on a single complex line, both regimes
    for (const bool to_zero : {true, false}) {
        ScalarSet set;
        set.ambient = Ambient::Finite;
        set.dim = 2;
        set.asymptotics = {to_zero ? AsymKind::ModulusToZero : AsymKind::ModulusToInfinity, -1};
        for (int n = 1; n <= 20; ++n) {
            const double mod = std::ldexp(1.0, to_zero ? -n : n);
            set.vectors.push_back({cplx(0.6 * mod, 0.0), cplx(0.8 * mod, 0.0)});
        }
        BuildOptions opts;
        opts.K = 3;
        const CounterexampleBundle bundle = build_counterexample(set, opts.K, opts);
        CHECK(bundle.extraction.L == 1);
        CHECK(bundle.op.blocks == 1);
        CHECK(bundle.op.block0 == (to_zero ? WeightProfile::W1 : WeightProfile::W2));
        CHECK(bundle.certificate.verdict ==
              (to_zero ? NonHypVerdict::Expansive : NonHypVerdict::PowerBounded));
    }
}

TEST_CASE("row exhaustion carries the coordinate-exhausted code") {
    ConstructionCoords cc;
    cc.mode = Mode::FiniteDim;
    cc.regime = Regime::ToZero;
    for (int n = 0; n < 64; ++n) {
        cc.pivot.emplace_back(1.0 + (n % 5) * 0.25, 0.0);
        cc.tail.push_back({cplx(1.0, 0.0)});
        cc.tail_l2.push_back(1.0);
    }
    const TargetSequence targets = gen_target_sequence(8, Mode::FiniteDim, 2, 0);
    try {
        build_schedule(cc, targets, 8, {});
        FAIL("expected a scheduling failure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CoordinateExhausted);
    }
}
