#include "gammadyn/construction.hpp"

#include <algorithm>
#include <cmath>

namespace gammadyn {

const char* mode_name(Mode m) { return m == Mode::FiniteDim ? "finite" : "infinite"; }

namespace {

constexpr const char* kRoman[] = {"", "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x"};

std::pair<std::uint64_t, std::uint64_t> unpair(std::uint64_t z) {
    std::uint64_t t = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
    while ((t + 1) * (t + 2) / 2 <= z) ++t;
    while (t * (t + 1) / 2 > z) --t;
    const std::uint64_t y = z - t * (t + 1) / 2;
    return {t - y, y};
}

std::int64_t zigzag(std::uint64_t v) {
    return (v & 1ULL) ? -static_cast<std::int64_t>((v + 1) / 2) : static_cast<std::int64_t>(v / 2);
}

} // namespace

DirectSumVec decode_master_vector(std::uint64_t index, Mode mode, int block_limit, int scale_log2) {
    if (index == 0) return {};
    auto [grid, rest] = unpair(index - 1);
    const int g = static_cast<int>(std::min<std::uint64_t>(grid, 2000));
    std::map<int, std::vector<SparseSeq::Entry>> per_block;
    // rest encodes a nonempty entry list: (head, 0) terminates, (head, t+1)
    // continues with t. The coefficient code is shifted by one so that every
    // entry carries a nonzero integer pair.
    std::uint64_t cursor = rest;
    while (true) {
        auto [entry_code, next] = unpair(cursor);
        auto [block_code, rem] = unpair(entry_code);
        auto [jz, coeff_code] = unpair(rem);
        auto [az, bz] = unpair(coeff_code + 1);
        int block = static_cast<int>(std::min<std::uint64_t>(block_code, 1u << 20));
        if (mode == Mode::FiniteDim) block %= std::max(1, block_limit);
        const std::int64_t j = zigzag(jz);
        const double re = std::ldexp(static_cast<double>(zigzag(az)), scale_log2 - g);
        const double im = std::ldexp(static_cast<double>(zigzag(bz)), scale_log2 - g);
        if (re != 0.0 || im != 0.0) per_block[block].emplace_back(j, cplx(re, im));
        if (next == 0) break;
        cursor = next - 1;
    }
    std::vector<DirectSumVec::Block> blocks;
    for (auto& [b, entries] : per_block) {
        SparseSeq s = SparseSeq::from_entries(std::move(entries));
        if (!s.is_zero()) blocks.emplace_back(b, std::move(s));
    }
    return DirectSumVec::from_blocks(std::move(blocks));
}

namespace {

bool fits_slot(const DirectSumVec& v, int n, Mode mode, int block_limit) {
    for (const auto& [b, seq] : v.blocks()) {
        if (b >= n) return false;
        if (mode == Mode::FiniteDim && b >= block_limit) return false;
        for (const auto& [j, c] : seq.entries()) {
            if (std::llabs(j) >= n) return false;
            if (std::abs(c) > static_cast<double>(n)) return false;
        }
    }
    return true;
}

int degree_of_prefix(const std::vector<DirectSumVec>& entries, Mode mode) {
    int d = 0;
    for (const auto& v : entries) {
        for (const auto& [b, seq] : v.blocks()) {
            if (mode == Mode::Infinite) d = std::max(d, b);
            for (const auto& [j, c] : seq.entries())
                d = std::max<int>(d, static_cast<int>(std::llabs(j)));
        }
    }
    return d;
}

} // namespace

TargetSequence gen_target_sequence(int K, Mode mode, int block_limit, int scale_log2) {
    if (K < 0) fail(ErrorCode::InvalidInput, "negative step count");
    if (block_limit < 1) fail(ErrorCode::InvalidInput, "block limit must be positive");
    TargetSequence ts;
    ts.mode = mode;
    ts.block_limit = block_limit;
    ts.scale_log2 = scale_log2;
    std::uint64_t cursor = 1;
    for (int n = 0; n <= K; ++n) {
        if (n == 0) {
            ts.entries.emplace_back();
        } else {
            const DirectSumVec cand = decode_master_vector(cursor, mode, block_limit, scale_log2);
            if (fits_slot(cand, n, mode, block_limit)) {
                ts.entries.push_back(cand);
                ++cursor;
            } else {
                ts.entries.emplace_back(); // deferred: the slot stays zero
            }
        }
        ts.degrees.push_back(degree_of_prefix(ts.entries, mode));
    }
    ts.validate();
    return ts;
}

void TargetSequence::validate() const {
    if (entries.size() != degrees.size()) fail(ErrorCode::InvalidInput, "target sizes mismatch");
    for (std::size_t n = 0; n < entries.size(); ++n) {
        if (!fits_slot(entries[n], static_cast<int>(n == 0 ? 0 : n), mode, block_limit) &&
            !(n == 0 && entries[0].is_zero()))
            fail(ErrorCode::InvalidInput, "target " + std::to_string(n) + " violates slot bounds");
        if (degrees[n] > static_cast<int>(n))
            fail(ErrorCode::InvalidInput, "degree bound violated at " + std::to_string(n));
        if (n > 0 && degrees[n] < degrees[n - 1])
            fail(ErrorCode::InvalidInput, "degrees must be non-decreasing");
    }
}

ConstructionCoords construction_view(const BasisExtraction& ex) {
    ConstructionCoords cc;
    cc.mode = ex.mode == Ambient::Finite ? Mode::FiniteDim : Mode::Infinite;
    cc.regime = ex.regime;
    std::vector<std::size_t> tail_cols;
    for (int i : ex.I1)
        if (static_cast<std::size_t>(i) != ex.pivot) tail_cols.push_back(static_cast<std::size_t>(i));
    for (std::size_t r = 0; r < ex.coords.size(); ++r) {
        cc.pivot.push_back(ex.coords[r][ex.pivot]);
        std::vector<cplx> t;
        t.reserve(tail_cols.size());
        for (std::size_t c : tail_cols) t.push_back(ex.coords[r][c]);
        cc.tail.push_back(std::move(t));
        cc.tail_l2.push_back(ex.tail_l2[r]);
    }
    return cc;
}

WeightProfile pivot_backward_profile(Regime r) {
    return r == Regime::ToZero ? WeightProfile::W1 : WeightProfile::W2;
}

WeightProfile pivot_forward_profile(Regime r) {
    return r == Regime::ToZero ? WeightProfile::OMEGA1 : WeightProfile::OMEGA2;
}

std::string condition_prefix(Mode mode, Regime regime) {
    if (mode == Mode::FiniteDim) return "FIN";
    return regime == Regime::ToZero ? "INF0" : "INFinf";
}

namespace {

ConditionInstance make_ineq(int k, const std::string& id, int i, int j, double lhs, double rhs,
                            double margin_rel) {
    ConditionInstance c;
    c.k = k;
    c.id = id;
    c.i = i;
    c.j = j;
    c.lhs = lhs;
    c.rhs = rhs;
    c.equality = false;
    c.pass = lhs < rhs * (1.0 - margin_rel);
    c.margin = rhs > 0.0 ? (rhs - lhs) / rhs : -1.0;
    return c;
}

ConditionInstance make_eq(int k, const std::string& id, int i, double lhs) {
    ConditionInstance c;
    c.k = k;
    c.id = id;
    c.i = i;
    c.j = -1;
    c.lhs = lhs;
    c.rhs = 0.0;
    c.equality = true;
    c.pass = lhs == 0.0;
    c.margin = c.pass ? 1.0 : -1.0;
    return c;
}

} // namespace

std::vector<ConditionInstance> step_conditions(const ConstructionCoords& coords,
                                               const TargetSequence& targets,
                                               const std::vector<std::size_t>& phi,
                                               const std::vector<std::int64_t>& m, int k,
                                               double margin_rel) {
    const std::string pre = condition_prefix(coords.mode, coords.regime) + ".";
    const bool inf = coords.mode == Mode::Infinite;
    const WeightProfile Wb = pivot_backward_profile(coords.regime);
    const WeightProfile Wf = pivot_forward_profile(coords.regime);
    const int B = coords.blocks();
    const std::size_t rk = phi[static_cast<std::size_t>(k)];
    const std::int64_t mk = m[static_cast<std::size_t>(k)];
    const auto& yk = targets.entries[static_cast<std::size_t>(k)];

    std::vector<ConditionInstance> out;
    auto rhs_tail_cross = [&](int i) { return inf ? std::exp2(-(k + i)) : std::exp2(-k); };
    const double rhs_k = std::exp2(-k);

    // (i)/(iii)/(v)/(vii): tail blocks, V-profile shifts
    for (int i = 1; i < B; ++i) {
        const cplx lam_ki = coords.tail[rk][static_cast<std::size_t>(i - 1)];
        const SparseSeq& yki = yk.block(i);
        out.push_back(make_ineq(k, pre + kRoman[1], i, -1,
                                ss_norm(power_apply(WeightProfile::NU, mk, yki)) / std::abs(lam_ki),
                                rhs_k, margin_rel));
        for (int j = 0; j < k; ++j) {
            const std::size_t rj = phi[static_cast<std::size_t>(j)];
            const std::int64_t mj = m[static_cast<std::size_t>(j)];
            const cplx lam_ji = coords.tail[rj][static_cast<std::size_t>(i - 1)];
            out.push_back(make_ineq(
                k, pre + kRoman[3], i, j,
                std::abs(lam_ji / lam_ki) * ss_norm(power_apply(WeightProfile::NU, mk - mj, yki)),
                rhs_tail_cross(i), margin_rel));
            const SparseSeq& yji = targets.entries[static_cast<std::size_t>(j)].block(i);
            out.push_back(make_ineq(
                k, pre + kRoman[5], i, j,
                std::abs(lam_ki / lam_ji) * ss_norm(power_apply(WeightProfile::V, mk - mj, yji)),
                rhs_tail_cross(i), margin_rel));
        }
        if (inf)
            out.push_back(make_eq(k, pre + kRoman[7], i,
                                  std::abs(power_apply(WeightProfile::NU, mk, yki).at(0))));
    }

    // (ii)/(iv)/(vi)/(viii): pivot block with the regime profile
    const cplx lam_k0 = coords.pivot[rk];
    const SparseSeq& yk0 = yk.block(0);
    out.push_back(make_ineq(k, pre + kRoman[2], 0, -1,
                            ss_norm(power_apply(Wf, mk, yk0)) / std::abs(lam_k0), rhs_k, margin_rel));
    for (int j = 0; j < k; ++j) {
        const std::size_t rj = phi[static_cast<std::size_t>(j)];
        const std::int64_t mj = m[static_cast<std::size_t>(j)];
        const cplx lam_j0 = coords.pivot[rj];
        out.push_back(make_ineq(k, pre + kRoman[4], 0, j,
                                std::abs(lam_j0 / lam_k0) * ss_norm(power_apply(Wf, mk - mj, yk0)),
                                rhs_k, margin_rel));
        const SparseSeq& yj0 = targets.entries[static_cast<std::size_t>(j)].block(0);
        out.push_back(make_ineq(k, pre + kRoman[6], 0, j,
                                std::abs(lam_k0 / lam_j0) * ss_norm(power_apply(Wb, mk - mj, yj0)),
                                rhs_k, margin_rel));
    }
    if (inf) {
        out.push_back(make_eq(k, pre + kRoman[8], 0, std::abs(power_apply(Wf, mk, yk0).at(0))));
        if (k >= 1) {
            const double rhs_budget = std::exp2(static_cast<double>(mk - 1)) / static_cast<double>(k);
            if (coords.regime == Regime::ToZero) {
                out.push_back(make_ineq(k, pre + kRoman[9], -1, -1, coords.tail_l2[rk], rhs_budget,
                                        margin_rel));
            } else {
                out.push_back(
                    make_ineq(k, pre + kRoman[9], 0, -1, std::abs(lam_k0), rhs_budget, margin_rel));
                out.push_back(make_ineq(k, pre + kRoman[10], -1, -1, coords.tail_l2[rk], rhs_budget,
                                        margin_rel));
            }
        }
    }
    return out;
}

namespace {

/// Pivot-side conditions whose left sides never decrease as m grows:
/// ToZero couples earlier targets through the expansive backward shift,
/// ToInfinity couples the current target through the expanding forward one.
/// Failing them at the smallest legal power rules the row out for good.
bool pivot_row_admissible(const ConstructionCoords& coords, const TargetSequence& targets,
                          const std::vector<std::size_t>& phi, const std::vector<std::int64_t>& m,
                          int k, std::size_t cand, std::int64_t m_lo, double margin_rel) {
    const WeightProfile Wb = pivot_backward_profile(coords.regime);
    const WeightProfile Wf = pivot_forward_profile(coords.regime);
    const cplx lam_k0 = coords.pivot[cand];
    const double rhs = std::exp2(-k) * (1.0 - margin_rel);
    if (coords.regime == Regime::ToZero) {
        for (int j = 0; j < k; ++j) {
            const SparseSeq& yj0 = targets.entries[static_cast<std::size_t>(j)].block(0);
            if (yj0.is_zero()) continue;
            const double lhs = std::abs(lam_k0 / coords.pivot[phi[static_cast<std::size_t>(j)]]) *
                               ss_norm(power_apply(Wb, m_lo - m[static_cast<std::size_t>(j)], yj0));
            if (!(lhs < rhs)) return false;
        }
        return true;
    }
    const SparseSeq& yk0 = targets.entries[static_cast<std::size_t>(k)].block(0);
    if (!yk0.is_zero()) {
        if (!(ss_norm(power_apply(Wf, m_lo, yk0)) / std::abs(lam_k0) < rhs)) return false;
        for (int j = 0; j < k; ++j) {
            const double lhs = std::abs(coords.pivot[phi[static_cast<std::size_t>(j)]] / lam_k0) *
                               ss_norm(power_apply(Wf, m_lo - m[static_cast<std::size_t>(j)], yk0));
            if (!(lhs < rhs)) return false;
        }
    }
    return true;
}

} // namespace

Schedule build_schedule(const ConstructionCoords& coords, const TargetSequence& targets, int K,
                        const ScheduleOptions& opts) {
    if (K < 0) fail(ErrorCode::InvalidInput, "negative step count");
    if (static_cast<int>(targets.entries.size()) <= K)
        fail(ErrorCode::InvalidInput, "target sequence shorter than the schedule");
    const std::size_t rows = std::min(coords.rows(), opts.phi_cap);

    Schedule sched;
    sched.mode = coords.mode;
    sched.regime = coords.regime;
    sched.margin_rel = opts.margin_rel;

    for (int k = 0; k <= K; ++k) {
        const std::size_t phi_start = k == 0 ? 0 : sched.phi.back() + 1;
        const std::int64_t m_lo = k == 0 ? 1 : sched.m.back() + 1;
        bool placed = false;
        bool attempted_m = false;
        for (std::size_t cand = phi_start; cand < rows && !placed; ++cand) {
            sched.phi.push_back(cand);
            sched.m.push_back(m_lo);
            if (!pivot_row_admissible(coords, targets, sched.phi, sched.m, k, cand, m_lo,
                                      opts.margin_rel)) {
                sched.phi.pop_back();
                sched.m.pop_back();
                continue;
            }
            for (std::int64_t mm = m_lo; mm <= opts.m_cap && !placed; ++mm) {
                attempted_m = true;
                sched.m.back() = mm;
                auto insts = step_conditions(coords, targets, sched.phi, sched.m, k, opts.margin_rel);
                const bool all = std::all_of(insts.begin(), insts.end(),
                                             [](const ConditionInstance& c) { return c.pass; });
                if (all) {
                    sched.conditions.insert(sched.conditions.end(), insts.begin(), insts.end());
                    placed = true;
                }
            }
            if (!placed) {
                sched.phi.pop_back();
                sched.m.pop_back();
            }
        }
        if (!placed) {
            if (attempted_m)
                fail(ErrorCode::MBudgetExceeded,
                     "step " + std::to_string(k) + " found no admissible power below the cap");
            fail(ErrorCode::CoordinateExhausted,
                 "step " + std::to_string(k) + " found no admissible coordinate row");
        }

        // Recorded diagnostic: the uniform pivot-side norm bound that makes
        // the row scan terminate, checked numerically instance by instance.
        const int dk = targets.degrees[static_cast<std::size_t>(k)];
        double max_y0 = 0.0;
        for (int l = 0; l <= k; ++l)
            max_y0 = std::max(max_y0, ss_norm(targets.entries[static_cast<std::size_t>(l)].block(0)));
        for (int j = 0; j < k; ++j) {
            UniformBoundCheck ub;
            ub.k = k;
            ub.j = j;
            const std::int64_t dm =
                sched.m[static_cast<std::size_t>(k)] - sched.m[static_cast<std::size_t>(j)];
            if (coords.regime == Regime::ToZero) {
                ub.lhs = ss_norm(power_apply(WeightProfile::W1, dm,
                                             targets.entries[static_cast<std::size_t>(j)].block(0)));
                ub.rhs = std::exp2(dk + 1) * max_y0;
            } else {
                ub.lhs = ss_norm(power_apply(WeightProfile::OMEGA2, dm,
                                             targets.entries[static_cast<std::size_t>(j)].block(0)));
                ub.rhs = std::exp2(dk) * max_y0;
            }
            // non-strict: the weight-1 plateau attains the bound exactly when a
            // target concentrates at the boundary support index
            ub.holds = ub.lhs <= ub.rhs;
            sched.uniform_bound.push_back(ub);
        }
    }
    return sched;
}

ConstructedFamily assemble_family(const Schedule& schedule, const ConstructionCoords& coords,
                                  const TargetSequence& targets) {
    const int B = coords.blocks();
    const int K = schedule.last_step();
    ConstructedFamily fam;
    fam.includes_e0 = coords.mode == Mode::Infinite;
    const WeightProfile Wf = pivot_forward_profile(coords.regime);

    for (int i = 0; i < B; ++i) {
        SparseSeq acc = fam.includes_e0 ? SparseSeq::basis(0) : SparseSeq();
        for (int j = 0; j <= K; ++j) {
            const SparseSeq& yji = targets.entries[static_cast<std::size_t>(j)].block(i);
            if (yji.is_zero()) continue;
            const std::size_t rj = schedule.phi[static_cast<std::size_t>(j)];
            const cplx lam = i == 0 ? coords.pivot[rj] : coords.tail[rj][static_cast<std::size_t>(i - 1)];
            const WeightProfile fwd = i == 0 ? Wf : WeightProfile::NU;
            const SparseSeq term =
                ss_scale(cplx(1.0, 0.0) / lam,
                         power_apply(fwd, schedule.m[static_cast<std::size_t>(j)], yji));
            // restatement of the first-term conditions: every series term
            // stays below its geometric bound
            if (!(ss_norm(term) < std::exp2(-j)))
                fail(ErrorCode::InvalidInput, "series term at step " + std::to_string(j) +
                                                  " breaks its geometric bound");
            acc = ss_add(acc, term);
        }
        fam.z_tilde.push_back(DirectSumVec::single(i, acc));
        const double n = ss_norm(acc);
        fam.norms.push_back(n);
        fam.z.push_back(n > 0.0 ? ds_scale(1.0 / n, fam.z_tilde.back()) : DirectSumVec());
        if (fam.includes_e0 && !(n >= 1.0 && n < 3.0))
            fail(ErrorCode::InvalidInput, "family norm " + std::to_string(n) + " outside [1, 3)");
    }
    return fam;
}

std::vector<double> diagonal_normalizer(const ConstructedFamily& family) {
    std::vector<double> d;
    d.reserve(family.norms.size());
    for (double n : family.norms) {
        if (!(n >= 1.0)) fail(ErrorCode::InvalidInput, "normalizer needs norms >= 1");
        d.push_back(1.0 / n);
    }
    return d;
}

CounterexampleBundle build_counterexample(const ScalarSet& set, int K, const BuildOptions& opts) {
    if (K < 1) fail(ErrorCode::InvalidInput, "step count must be at least 1");
    const CoverReport cover = classify_cover(set, opts.set.cover_tol, opts.set);
    if (cover.coverable)
        fail(ErrorCode::Coverable, "scalar set is coverable by finitely many annuli");

    SetOptions sopts = opts.set;
    sopts.seed = opts.seed;

    CounterexampleBundle bundle;
    bundle.config = opts;
    bundle.ambient = set.ambient;
    bundle.extraction = set.ambient == Ambient::Finite
                            ? extract_basis_finite(set, sopts)
                            : extract_basis_infinite(set, std::max<std::size_t>(1, static_cast<std::size_t>(K) - 1), sopts);

    const ConstructionCoords coords = construction_view(bundle.extraction);
    const Mode mode = set.ambient == Ambient::Finite ? Mode::FiniteDim : Mode::Infinite;
    const int scale = opts.target_scale_log2 == INT_MIN ? -(K + 8) : opts.target_scale_log2;
    bundle.config.target_scale_log2 = scale;
    bundle.targets = gen_target_sequence(K, mode, coords.blocks(), scale);

    ScheduleOptions sched_opts;
    sched_opts.m_cap = opts.m_cap;
    sched_opts.phi_cap = opts.phi_cap;
    sched_opts.margin_rel = opts.margin_rel;
    bundle.schedule = build_schedule(coords, bundle.targets, K, sched_opts);
    bundle.family = assemble_family(bundle.schedule, coords, bundle.targets);
    if (bundle.family.includes_e0) {
        bundle.normalizer = diagonal_normalizer(bundle.family);
    } else {
        for (double n : bundle.family.norms) bundle.normalizer.push_back(n > 0.0 ? 1.0 / n : 1.0);
    }

    bundle.op.block0 = pivot_backward_profile(bundle.extraction.regime);
    bundle.op.blocks = coords.blocks();
    bundle.certificate = certify_not_hypercyclic(bundle.op, opts.seed);
    if (bundle.certificate.verdict == NonHypVerdict::None)
        fail(ErrorCode::InvalidInput, "operator certificate unexpectedly inconclusive");
    return bundle;
}

double wrap_angle(double x) {
    constexpr double two_pi = 6.283185307179586476925287;
    double r = std::fmod(x, two_pi);
    if (r > 3.141592653589793238462643) r -= two_pi;
    if (r <= -3.141592653589793238462643) r += two_pi;
    return r;
}

HcVector build_hypercyclic_vector(const std::vector<SparseSeq>& targets,
                                  const std::map<int, PhaseGoal>& phase_goals, double theta,
                                  std::int64_t m_cap, double margin_rel) {
    HcVector hv;
    if (targets.empty()) return hv;
    const int K = static_cast<int>(targets.size()) - 1;

    for (int k = 0; k <= K; ++k) {
        const std::int64_t m_lo = k == 0 ? 1 : hv.m.back() + 1;
        const auto goal_it = phase_goals.find(k);
        bool placed = false;
        for (std::int64_t mm = m_lo; mm <= m_cap && !placed; ++mm) {
            if (goal_it != phase_goals.end()) {
                const double resid = std::abs(wrap_angle(theta * static_cast<double>(mm) -
                                                         goal_it->second.angle));
                if (resid > goal_it->second.delta) continue;
            }
            std::vector<ConditionInstance> insts;
            const double rhs = std::exp2(-k);
            insts.push_back(make_ineq(k, "HV.i", 0, -1,
                                      ss_norm(power_apply(WeightProfile::NU, mm, targets[k])), rhs,
                                      margin_rel));
            for (int j = 0; j < k; ++j) {
                insts.push_back(make_ineq(
                    k, "HV.iii", 0, j,
                    ss_norm(power_apply(WeightProfile::NU, mm - hv.m[static_cast<std::size_t>(j)],
                                        targets[k])),
                    rhs, margin_rel));
                insts.push_back(make_ineq(
                    k, "HV.v", 0, j,
                    ss_norm(power_apply(WeightProfile::V, mm - hv.m[static_cast<std::size_t>(j)],
                                        targets[static_cast<std::size_t>(j)])),
                    rhs, margin_rel));
            }
            if (std::all_of(insts.begin(), insts.end(),
                            [](const ConditionInstance& c) { return c.pass; })) {
                hv.m.push_back(mm);
                hv.conditions.insert(hv.conditions.end(), insts.begin(), insts.end());
                hv.phase_residuals.push_back(
                    goal_it == phase_goals.end()
                        ? -1.0
                        : std::abs(wrap_angle(theta * static_cast<double>(mm) - goal_it->second.angle)));
                placed = true;
            }
        }
        if (!placed) {
            if (goal_it != phase_goals.end())
                fail(ErrorCode::PhaseBudgetExceeded,
                     "no power below the cap hits the phase window at step " + std::to_string(k));
            fail(ErrorCode::MBudgetExceeded, "no admissible power at step " + std::to_string(k));
        }
    }

    SparseSeq x;
    for (int j = 0; j <= K; ++j)
        x = ss_add(x, power_apply(WeightProfile::NU, hv.m[static_cast<std::size_t>(j)],
                                  targets[static_cast<std::size_t>(j)]));
    hv.x = x;
    for (int k = 0; k <= K; ++k) {
        hv.errors.push_back(ss_norm(ss_sub(
            power_apply(WeightProfile::V, hv.m[static_cast<std::size_t>(k)], x), targets[static_cast<std::size_t>(k)])));
        hv.bounds.push_back(static_cast<double>(k + 1) * std::exp2(-k));
    }
    return hv;
}

} // namespace gammadyn
