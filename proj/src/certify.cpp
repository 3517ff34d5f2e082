#include "gammadyn/certify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

namespace gammadyn {

namespace {

void add_check(std::vector<CheckRow>& rows, std::string name, bool pass, double value, double limit,
               std::string note = {}) {
    rows.push_back({std::move(name), pass, value, limit, std::move(note)});
}

DirectSumVec scheduled_combination(const CounterexampleBundle& bundle,
                                   const ConstructionCoords& coords, int k) {
    const std::size_t rk = bundle.schedule.phi[static_cast<std::size_t>(k)];
    std::vector<DirectSumVec::Block> blocks;
    for (std::size_t i = 0; i < bundle.family.z_tilde.size(); ++i) {
        const cplx lam = i == 0 ? coords.pivot[rk] : coords.tail[rk][i - 1];
        const SparseSeq& zi = bundle.family.z_tilde[i].block(static_cast<int>(i));
        if (zi.is_zero()) continue;
        SparseSeq s = ss_scale(lam, zi);
        if (!s.is_zero()) blocks.emplace_back(static_cast<int>(i), std::move(s));
    }
    return DirectSumVec::from_blocks(std::move(blocks));
}

} // namespace

double orbit_error_bound(Mode mode, Regime regime, int blocks, int k, std::int64_t m_k,
                         double pivot_abs, double tail_l2) {
    const double geo = static_cast<double>(k + 1) * std::exp2(-k);
    if (mode == Mode::FiniteDim) return static_cast<double>(blocks) * geo;
    const double tail_term = tail_l2 * std::exp2(static_cast<double>(1 - m_k));
    if (regime == Regime::ToZero) return 2.0 * pivot_abs + (7.0 / 3.0) * geo + tail_term;
    return pivot_abs * std::exp2(static_cast<double>(1 - m_k)) + (7.0 / 3.0) * geo + tail_term;
}

ConditionReport verify_conditions(const CounterexampleBundle& bundle, par::Exec exec) {
    ConditionReport report;
    const auto& sched = bundle.schedule;
    const int K = sched.last_step();
    auto& st = report.structural;

    // schedule shape (an empty schedule verifies trivially)
    bool phi_incr = sched.phi.size() == sched.m.size();
    for (std::size_t t = 1; t < sched.phi.size(); ++t)
        phi_incr = phi_incr && sched.phi[t] > sched.phi[t - 1];
    add_check(st, "schedule.phi_strictly_increasing", phi_incr, 0, 0);
    bool m_incr = sched.m.empty() || sched.m.front() >= 1;
    for (std::size_t t = 1; t < sched.m.size(); ++t) m_incr = m_incr && sched.m[t] > sched.m[t - 1];
    add_check(st, "schedule.m_strictly_increasing", m_incr, 0, 0);

    // coordinates against the stored sample vectors and basis
    const auto& ex = bundle.extraction;
    double coord_dev = 0.0;
    bool coord_shape = ex.coords.size() == ex.samples.size();
    if (coord_shape) {
        for (std::size_t r = 0; r < ex.coords.size(); ++r) {
            if (ex.coords[r].size() < ex.basis.size()) {
                coord_shape = false;
                break;
            }
            for (std::size_t i = 0; i < ex.basis.size(); ++i)
                coord_dev = std::max(coord_dev,
                                     std::abs(ex.coords[r][i] - cv_inner(ex.samples[r], ex.basis[i])));
        }
    }
    add_check(st, "coords.match_samples_in_basis", coord_shape && coord_dev <= 1e-12, coord_dev,
              1e-12);

    double tail_dev = 0.0;
    for (std::size_t r = 0; r < ex.coords.size() && coord_shape; ++r) {
        if (ex.mode == Ambient::Sequence) {
            const double want_sq =
                std::max(0.0, cv_norm_sq(ex.samples[r]) - std::norm(ex.coords[r][ex.pivot]));
            tail_dev = std::max(tail_dev, std::abs(ex.tail_l2[r] - std::sqrt(want_sq)));
        } else {
            double sum = 0.0;
            for (std::size_t i = 0; i < ex.coords[r].size(); ++i)
                if (i != ex.pivot) sum += std::norm(ex.coords[r][i]);
            tail_dev = std::max(tail_dev, std::abs(ex.tail_l2[r] - std::sqrt(sum)));
        }
    }
    add_check(st, "coords.tail_l2_consistent", tail_dev <= 1e-10, tail_dev, 1e-10);

    bool extraction_ok = true;
    std::string extraction_note;
    try {
        ex.validate(bundle.config.set.nonzero_tol, bundle.config.set.trend_factor);
    } catch (const Error& e) {
        extraction_ok = false;
        extraction_note = e.what();
    }
    add_check(st, "extraction.invariants", extraction_ok, 0, 0, extraction_note);

    bool targets_ok = true;
    std::string target_note;
    try {
        bundle.targets.validate();
    } catch (const Error& e) {
        targets_ok = false;
        target_note = e.what();
    }
    if (bundle.targets.entries.size() < sched.phi.size()) {
        targets_ok = false;
        target_note = "fewer targets than schedule steps";
    }
    add_check(st, "targets.slot_invariants", targets_ok, 0, 0, target_note);

    const ConstructionCoords coords = construction_view(ex);
    bool rows_ok = true;
    for (std::size_t t = 0; t < sched.phi.size(); ++t)
        rows_ok = rows_ok && sched.phi[t] < coords.rows();
    add_check(st, "schedule.rows_in_range", rows_ok, 0, 0);

    bool family_ok = false;
    std::string family_note;
    if (phi_incr && m_incr && rows_ok && targets_ok) {
        try {
            const ConstructedFamily rebuilt = assemble_family(sched, coords, bundle.targets);
            family_ok = rebuilt.z_tilde.size() == bundle.family.z_tilde.size();
            for (std::size_t i = 0; family_ok && i < rebuilt.z_tilde.size(); ++i)
                family_ok = rebuilt.z_tilde[i] == bundle.family.z_tilde[i];
            if (!family_ok) family_note = "stored family differs from re-assembly";
        } catch (const Error& e) {
            family_note = e.what();
        }
    }
    add_check(st, "family.matches_reassembly", family_ok, 0, 0, family_note);

    if (bundle.family.includes_e0) {
        bool norms_ok = true;
        double worst = 1.0;
        for (double n : bundle.family.norms) {
            norms_ok = norms_ok && n >= 1.0 && n < 3.0;
            worst = std::max(worst, n);
        }
        add_check(st, "family.norms_in_unit_to_three", norms_ok, worst, 3.0);
        bool anchors_ok = true;
        for (std::size_t i = 0; i < bundle.family.z_tilde.size(); ++i)
            anchors_ok = anchors_ok &&
                         bundle.family.z_tilde[i].block(static_cast<int>(i)).at(0) == cplx(1.0, 0.0);
        add_check(st, "family.anchors_exactly_one", anchors_ok, 0, 0);
    }

    // every condition instance, recomputed; one slot per step
    std::vector<std::vector<ConditionInstance>> per_step(static_cast<std::size_t>(K + 1));
    if (phi_incr && m_incr && rows_ok && targets_ok) {
        par::for_index(static_cast<std::size_t>(K + 1), exec, [&](std::size_t k) {
            per_step[k] = step_conditions(coords, bundle.targets, sched.phi, sched.m,
                                          static_cast<int>(k), sched.margin_rel);
        });
    }
    for (auto& v : per_step)
        report.instances.insert(report.instances.end(), v.begin(), v.end());

    report.all_pass = true;
    for (const auto& row : st)
        if (!row.pass && report.all_pass) {
            report.all_pass = false;
            report.first_violation = row.name;
        }
    for (const auto& inst : report.instances)
        if (!inst.pass && report.all_pass) {
            report.all_pass = false;
            report.first_violation = inst.id + " at k=" + std::to_string(inst.k);
        }
    if ((!phi_incr || !m_incr || !rows_ok || !targets_ok) && report.all_pass) {
        report.all_pass = false;
        report.first_violation = "structural";
    }
    return report;
}

OrbitErrorReport measure_orbit_errors(const CounterexampleBundle& bundle, par::Exec exec) {
    OrbitErrorReport report;
    const int K = bundle.schedule.last_step();
    if (K < 0) {
        report.all_pass = true;
        return report;
    }
    const ConstructionCoords coords = construction_view(bundle.extraction);
    report.slack = std::exp2(-K);
    report.rows.resize(static_cast<std::size_t>(K + 1));
    par::for_index(static_cast<std::size_t>(K + 1), exec, [&](std::size_t k) {
        OrbitErrorRow row;
        row.k = static_cast<int>(k);
        row.m = bundle.schedule.m[k];
        const DirectSumVec u = scheduled_combination(bundle, coords, static_cast<int>(k));
        const DirectSumVec shifted = apply_direct_sum_power(bundle.op, row.m, u);
        row.e = ds_norm(ds_sub(shifted, bundle.targets.entries[k]));
        const std::size_t rk = bundle.schedule.phi[k];
        row.b = orbit_error_bound(coords.mode, coords.regime, coords.blocks(), static_cast<int>(k),
                                  row.m, std::abs(coords.pivot[rk]), coords.tail_l2[rk]);
        const double budget = row.b + report.slack;
        row.pass = row.e <= budget;
        row.margin = budget > 0.0 ? (budget - row.e) / budget : -1.0;
        report.rows[k] = row;
    });
    report.all_pass = std::all_of(report.rows.begin(), report.rows.end(),
                                  [](const OrbitErrorRow& r) { return r.pass; });
    return report;
}

bool theta_over_pi_rational(double theta, std::int64_t max_den, double tol) {
    const double x = theta / 3.141592653589793238462643;
    for (std::int64_t q = 1; q <= max_den; ++q) {
        const double scaled = x * static_cast<double>(q);
        if (std::abs(scaled - std::nearbyint(scaled)) < tol) return true;
    }
    return false;
}

BFDemoReport bf_counterexample_demo(const BfDemoConfig& cfg) {
    if (theta_over_pi_rational(cfg.theta))
        fail(ErrorCode::RationalAngle, "theta is a rational multiple of pi at working resolution");
    if (cfg.gamma_sample.empty()) fail(ErrorCode::InvalidInput, "empty scalar sample");
    if (cfg.a_targets.empty()) fail(ErrorCode::InvalidInput, "no targets");
    if (!(cfg.lambda > 0.0)) fail(ErrorCode::InvalidInput, "lambda must be positive");
    double mod_min = std::abs(cfg.gamma_sample.front()), mod_max = mod_min;
    for (cplx g : cfg.gamma_sample) {
        const double m = std::abs(g);
        if (m <= 0.0) fail(ErrorCode::InvalidInput, "zero element in the scalar sample");
        mod_min = std::min(mod_min, m);
        mod_max = std::max(mod_max, m);
    }

    BFDemoReport report;
    report.theta = cfg.theta;
    report.lambda = cfg.lambda;
    report.eps = cfg.eps;
    report.k0 = cfg.k0;

    const int T = static_cast<int>(cfg.a_targets.size());
    const int K = cfg.k0 + T - 1;
    const TargetSequence targets = gen_target_sequence(K, Mode::FiniteDim, 1, 0);

    struct Pick {
        cplx a;
        cplx gamma;
        double goal;
        double mod_gap;
        std::int64_t first_hit;
        int slot = -1;
    };
    std::vector<Pick> picks;
    for (cplx a : cfg.a_targets) {
        Pick p;
        p.a = a;
        const double want = std::abs(a) / cfg.lambda;
        if (want < mod_min - cfg.eps / (2.0 * cfg.lambda) ||
            want > mod_max + cfg.eps / (2.0 * cfg.lambda))
            fail(ErrorCode::TargetUnreachable,
                 "target modulus " + std::to_string(std::abs(a)) + " outside the reachable band");
        p.gamma = cfg.gamma_sample.front();
        for (cplx g : cfg.gamma_sample)
            if (std::abs(std::abs(g) - want) < std::abs(std::abs(p.gamma) - want)) p.gamma = g;
        p.mod_gap = std::abs(cfg.lambda * std::abs(p.gamma) - std::abs(a));
        p.goal = std::arg(a) - std::arg(p.gamma);
        picks.push_back(p);
    }

    // Phase windows: whatever eps leaves after the worst-case shift error and
    // the modulus gap, spent against lambda*|gamma|.
    auto window_for = [&](const Pick& p, int k) {
        const double shift_bound = std::abs(p.gamma) * static_cast<double>(k + 1) * std::exp2(-k);
        const double budget = 0.9 * (cfg.eps - p.mod_gap - shift_bound);
        return budget / (cfg.lambda * std::abs(p.gamma));
    };
    for (auto& p : picks) {
        const double delta = window_for(p, cfg.k0);
        if (!(delta > 0.0))
            fail(ErrorCode::PhaseBudgetExceeded, "eps leaves no room for the phase window");
        p.first_hit = cfg.m_cap + 1;
        for (std::int64_t mm = 1; mm <= cfg.m_cap; ++mm) {
            if (std::abs(wrap_angle(cfg.theta * static_cast<double>(mm) - p.goal)) <= delta) {
                p.first_hit = mm;
                break;
            }
        }
        if (p.first_hit > cfg.m_cap)
            fail(ErrorCode::PhaseBudgetExceeded, "no power below the cap enters the phase window");
    }
    // Assign targets to consecutive steps in first-hit order so the scans in
    // the schedule stay short.
    std::vector<std::size_t> order(picks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return picks[a].first_hit < picks[b].first_hit;
    });
    for (int idx = 0; idx < T; ++idx) picks[order[static_cast<std::size_t>(idx)]].slot = cfg.k0 + idx;

    std::vector<SparseSeq> scheduled(static_cast<std::size_t>(K + 1));
    for (int kk = 0; kk <= K; ++kk) scheduled[static_cast<std::size_t>(kk)] = targets.entries[static_cast<std::size_t>(kk)].block(0);
    std::map<int, PhaseGoal> goals;
    for (const auto& p : picks) {
        scheduled[static_cast<std::size_t>(p.slot)] =
            ss_scale(cplx(1.0, 0.0) / p.gamma, scheduled[static_cast<std::size_t>(p.slot)]);
        goals[p.slot] = {p.goal, window_for(p, p.slot)};
    }

    const HcVector hv = build_hypercyclic_vector(scheduled, goals, cfg.theta, cfg.m_cap);
    report.schedule_m = hv.m;

    for (const auto& p : picks) {
        BfTargetRow row;
        row.a = p.a;
        row.k = p.slot;
        row.gamma = p.gamma;
        row.n = hv.m[static_cast<std::size_t>(p.slot)];
        const SparseSeq& yk = targets.entries[static_cast<std::size_t>(p.slot)].block(0);
        report.target_norms.push_back(ss_norm(yk));

        const SparseSeq reached = ss_scale(p.gamma, power_apply(WeightProfile::V, row.n, hv.x));
        row.shift_err = ss_norm(ss_sub(reached, yk));
        const double ang = cfg.theta * static_cast<double>(row.n);
        const cplx first = cfg.lambda * p.gamma * std::polar(1.0, ang);
        const double first_err = std::abs(first - p.a);
        row.achieved = std::hypot(first_err, row.shift_err);
        row.phase_chord = 2.0 * std::abs(std::sin(wrap_angle(ang - std::arg(p.a) + std::arg(p.gamma)) / 2.0));
        row.phase_contrib = cfg.lambda * std::abs(p.gamma) * row.phase_chord;
        row.modulus_gap = p.mod_gap;
        row.audit_ok =
            row.achieved <= row.shift_err + row.phase_contrib + row.modulus_gap + 1e-12;
        row.within_eps = row.achieved <= cfg.eps;
        report.rows.push_back(row);
    }
    report.all_ok = std::all_of(report.rows.begin(), report.rows.end(),
                                [](const BfTargetRow& r) { return r.audit_ok && r.within_eps; });
    return report;
}

CounterexampleBundle transport_bundle(const CounterexampleBundle& bundle,
                                      const std::vector<int>& perm) {
    const int B = static_cast<int>(bundle.family.z_tilde.size());
    if (static_cast<int>(perm.size()) != B)
        fail(ErrorCode::NotASymmetry, "permutation size differs from the block count");
    std::vector<char> seen(static_cast<std::size_t>(B), 0);
    for (int p : perm) {
        if (p < 0 || p >= B || seen[static_cast<std::size_t>(p)])
            fail(ErrorCode::NotASymmetry, "not a permutation of the blocks");
        seen[static_cast<std::size_t>(p)] = 1;
    }
    if (perm[0] != 0)
        fail(ErrorCode::NotASymmetry, "block 0 carries a different profile than the tail");

    auto permute_vec = [&](const DirectSumVec& v) {
        std::vector<DirectSumVec::Block> blocks;
        for (const auto& [i, seq] : v.blocks()) {
            if (i >= B) fail(ErrorCode::NotASymmetry, "vector touches a block beyond the permutation");
            blocks.emplace_back(perm[static_cast<std::size_t>(i)], seq);
        }
        return DirectSumVec::from_blocks(std::move(blocks));
    };
    std::vector<int> inv(perm.size());
    for (int i = 0; i < B; ++i) inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;

    CounterexampleBundle out = bundle;
    for (auto& y : out.targets.entries) y = permute_vec(y);
    for (int i = 0; i < B; ++i) {
        const int src = inv[static_cast<std::size_t>(i)];
        out.family.z_tilde[static_cast<std::size_t>(i)] =
            permute_vec(bundle.family.z_tilde[static_cast<std::size_t>(src)]);
        out.family.z[static_cast<std::size_t>(i)] = permute_vec(bundle.family.z[static_cast<std::size_t>(src)]);
        out.family.norms[static_cast<std::size_t>(i)] = bundle.family.norms[static_cast<std::size_t>(src)];
        if (!out.normalizer.empty())
            out.normalizer[static_cast<std::size_t>(i)] = bundle.normalizer[static_cast<std::size_t>(src)];
    }

    // Tail coordinates relabel with the blocks; the extraction's basis rows
    // and coordinate columns move together so the sample consistency check
    // still holds on the transported bundle.
    const auto& ex = bundle.extraction;
    std::vector<std::size_t> block_to_col(static_cast<std::size_t>(B));
    block_to_col[0] = ex.pivot;
    {
        std::size_t next = 1;
        for (int c : ex.I1)
            if (static_cast<std::size_t>(c) != ex.pivot) block_to_col[next++] = static_cast<std::size_t>(c);
    }
    auto& tex = out.extraction;
    for (int i = 0; i < B; ++i) {
        const int src = inv[static_cast<std::size_t>(i)];
        const std::size_t to_col = block_to_col[static_cast<std::size_t>(i)];
        const std::size_t from_col = block_to_col[static_cast<std::size_t>(src)];
        tex.basis[to_col] = ex.basis[from_col];
        for (std::size_t r = 0; r < ex.coords.size(); ++r)
            tex.coords[r][to_col] = ex.coords[r][from_col];
    }
    return out;
}

TransportReport conjugacy_transport(const CounterexampleBundle& bundle,
                                    const std::vector<int>& perm, par::Exec exec) {
    TransportReport report;
    report.perm = perm;
    const CounterexampleBundle moved = transport_bundle(bundle, perm);

    const OrbitErrorReport orig = measure_orbit_errors(bundle, exec);
    const OrbitErrorReport trans = measure_orbit_errors(moved, exec);
    for (const auto& r : orig.rows) report.original_errors.push_back(r.e);
    for (const auto& r : trans.rows) report.transported_errors.push_back(r.e);
    report.max_error_delta = 0.0;
    for (std::size_t k = 0; k < report.original_errors.size(); ++k)
        report.max_error_delta = std::max(
            report.max_error_delta,
            std::abs(report.original_errors[k] - report.transported_errors[k]));
    report.errors_equal = report.max_error_delta <= 1e-12;

    const ConditionReport co = verify_conditions(bundle, exec);
    const ConditionReport ct = verify_conditions(moved, exec);
    std::map<std::tuple<int, std::string, int, int>, bool> trans_pass;
    for (const auto& inst : ct.instances)
        trans_pass[{inst.k, inst.id, inst.i, inst.j}] = inst.pass;
    report.verdicts_equal = co.instances.size() == ct.instances.size();
    for (const auto& inst : co.instances) {
        if (!report.verdicts_equal) break;
        const int mapped_i = inst.i >= 1 ? perm[static_cast<std::size_t>(inst.i)] : inst.i;
        auto it = trans_pass.find({inst.k, inst.id, mapped_i, inst.j});
        report.verdicts_equal = it != trans_pass.end() && it->second == inst.pass;
    }
    report.pass = report.errors_equal && report.verdicts_equal && co.all_pass == ct.all_pass;
    return report;
}

} // namespace gammadyn
