#include "gammadyn/shifts.hpp"

#include <algorithm>
#include <cmath>

#include "gammadyn/parallel.hpp"
#include "gammadyn/rng.hpp"

namespace gammadyn {

const char* profile_name(WeightProfile p) {
    switch (p) {
        case WeightProfile::V: return "V";
        case WeightProfile::NU: return "NU";
        case WeightProfile::W1: return "W1";
        case WeightProfile::OMEGA1: return "OMEGA1";
        case WeightProfile::W2: return "W2";
        case WeightProfile::OMEGA2: return "OMEGA2";
    }
    return "?";
}

WeightProfile profile_from_name(const std::string& name) {
    if (name == "V") return WeightProfile::V;
    if (name == "NU") return WeightProfile::NU;
    if (name == "W1") return WeightProfile::W1;
    if (name == "OMEGA1") return WeightProfile::OMEGA1;
    if (name == "W2") return WeightProfile::W2;
    if (name == "OMEGA2") return WeightProfile::OMEGA2;
    fail(ErrorCode::InvalidInput, "unknown weight profile '" + name + "'");
}

bool is_backward_profile(WeightProfile p) {
    return p == WeightProfile::V || p == WeightProfile::W1 || p == WeightProfile::W2;
}

WeightProfile inverse_profile(WeightProfile p) {
    switch (p) {
        case WeightProfile::V: return WeightProfile::NU;
        case WeightProfile::NU: return WeightProfile::V;
        case WeightProfile::W1: return WeightProfile::OMEGA1;
        case WeightProfile::OMEGA1: return WeightProfile::W1;
        case WeightProfile::W2: return WeightProfile::OMEGA2;
        case WeightProfile::OMEGA2: return WeightProfile::W2;
    }
    fail(ErrorCode::InvalidInput, "bad profile");
}

int weight_log2(WeightProfile p, std::int64_t i) {
    switch (p) {
        case WeightProfile::V: return i > 0 ? 1 : -1;
        case WeightProfile::W1: return i > 0 ? 1 : 0;
        case WeightProfile::W2: return i > 0 ? 0 : -1;
        case WeightProfile::NU: return i >= 0 ? -1 : 1;
        case WeightProfile::OMEGA1: return i >= 0 ? -1 : 0;
        case WeightProfile::OMEGA2: return i >= 0 ? 0 : 1;
    }
    return 0;
}

double weight_at(WeightProfile p, std::int64_t i) { return std::ldexp(1.0, weight_log2(p, i)); }

namespace {

cplx ldexp_c(cplx c, std::int64_t e) {
    const int ei = static_cast<int>(std::clamp<std::int64_t>(e, -4000, 4000));
    return {std::ldexp(c.real(), ei), std::ldexp(c.imag(), ei)};
}

// #{t in [lo, hi] : t > 0} for lo <= hi
std::int64_t count_positive(std::int64_t lo, std::int64_t hi) {
    return std::max<std::int64_t>(hi, 0) - std::max<std::int64_t>(lo - 1, 0);
}

// #{t in [lo, hi] : t >= 0}
std::int64_t count_nonnegative(std::int64_t lo, std::int64_t hi) {
    return std::max<std::int64_t>(hi + 1, 0) - std::max<std::int64_t>(lo, 0);
}

} // namespace

std::int64_t power_log2_multiplier(WeightProfile p, std::int64_t m, std::int64_t j) {
    if (m == 0) return 0;
    if (is_backward_profile(p)) {
        // weights traversed at t = j-m+1 .. j, split at t > 0 vs t <= 0
        const std::int64_t pos = count_positive(j - m + 1, j);
        const std::int64_t a = weight_log2(p, 1), b = weight_log2(p, 0);
        return a * pos + b * (m - pos);
    }
    // forward: weights traversed at t = j .. j+m-1, split at t >= 0 vs t < 0
    const std::int64_t nn = count_nonnegative(j, j + m - 1);
    const std::int64_t a = weight_log2(p, 0), b = weight_log2(p, -1);
    return a * nn + b * (m - nn);
}

SparseSeq backward_apply(WeightProfile p, const SparseSeq& x) {
    if (!is_backward_profile(p))
        fail(ErrorCode::InvalidInput, std::string("backward_apply needs a backward profile, got ") + profile_name(p));
    std::vector<SparseSeq::Entry> out;
    out.reserve(x.entries().size());
    for (const auto& [j, c] : x.entries()) {
        const cplx v = ldexp_c(c, weight_log2(p, j));
        if (v != cplx(0.0, 0.0)) out.emplace_back(j - 1, v);
    }
    return SparseSeq::from_entries(std::move(out));
}

SparseSeq forward_apply(WeightProfile p, const SparseSeq& x) {
    if (is_backward_profile(p))
        fail(ErrorCode::InvalidInput, std::string("forward_apply needs a forward profile, got ") + profile_name(p));
    std::vector<SparseSeq::Entry> out;
    out.reserve(x.entries().size());
    for (const auto& [j, c] : x.entries()) {
        const cplx v = ldexp_c(c, weight_log2(p, j));
        if (v != cplx(0.0, 0.0)) out.emplace_back(j + 1, v);
    }
    return SparseSeq::from_entries(std::move(out));
}

SparseSeq power_apply(WeightProfile p, std::int64_t m, const SparseSeq& x) {
    if (m < 0) fail(ErrorCode::InvalidInput, "negative shift power");
    if (m == 0) return x;
    const std::int64_t step = is_backward_profile(p) ? -m : m;
    std::vector<SparseSeq::Entry> out;
    out.reserve(x.entries().size());
    for (const auto& [j, c] : x.entries()) {
        const cplx v = ldexp_c(c, power_log2_multiplier(p, m, j));
        if (v != cplx(0.0, 0.0)) out.emplace_back(j + step, v);
    }
    return SparseSeq::from_entries(std::move(out));
}

DirectSumVec apply_direct_sum(const OperatorSpec& op, const DirectSumVec& x) {
    return apply_direct_sum_power(op, 1, x);
}

DirectSumVec apply_direct_sum_power(const OperatorSpec& op, std::int64_t m, const DirectSumVec& x) {
    if (x.max_block() >= op.blocks)
        fail(ErrorCode::BlockOutOfRange,
             "vector touches block " + std::to_string(x.max_block()) + " of an operator with " +
                 std::to_string(op.blocks) + " blocks");
    std::vector<DirectSumVec::Block> out;
    out.reserve(x.blocks().size());
    for (const auto& [i, seq] : x.blocks()) {
        const WeightProfile p = (i == 0) ? op.block0 : WeightProfile::V;
        SparseSeq s = power_apply(p, m, seq);
        if (!s.is_zero()) out.emplace_back(i, std::move(s));
    }
    return DirectSumVec::from_blocks(std::move(out));
}

BfPoint bf_apply_power(const OperatorSpec& op, std::int64_t n, const BfPoint& p) {
    if (!op.rotation_theta)
        fail(ErrorCode::InvalidInput, "operator has no rotation prefix");
    const double ang = *op.rotation_theta * static_cast<double>(n);
    return {p.scalar * std::polar(1.0, ang), power_apply(op.block0, n, p.shift_part)};
}

const char* verdict_name(NonHypVerdict v) {
    switch (v) {
        case NonHypVerdict::Expansive: return "Expansive";
        case NonHypVerdict::PowerBounded: return "PowerBounded";
        case NonHypVerdict::None: return "None";
    }
    return "?";
}

NonHypercyclicityCertificate certify_not_hypercyclic(const OperatorSpec& op, std::uint64_t seed,
                                                     int probes) {
    const int lg_pos = weight_log2(op.block0, 1);
    const int lg_nonpos = weight_log2(op.block0, 0);
    NonHypercyclicityCertificate cert;
    cert.witness_block = 0;
    cert.spot_checks = probes;

    const bool all_ge_1 = lg_pos >= 0 && lg_nonpos >= 0;
    const bool all_le_1 = lg_pos <= 0 && lg_nonpos <= 0;
    if (!all_ge_1 && !all_le_1) {
        cert.verdict = NonHypVerdict::None;
        cert.evidence = std::string("block 0 profile ") + profile_name(op.block0) +
                        " mixes expanding and contracting weights; no norm certificate";
        return cert;
    }

    // Random-vector corroboration, one independent stream per probe so the
    // check parallelizes without changing its outcome.
    std::vector<char> ok(static_cast<std::size_t>(probes), 0);
    const Rng base(seed);
    par::for_index(static_cast<std::size_t>(probes), par::Exec::Parallel, [&](std::size_t t) {
        Rng rng = base.split(t);
        std::vector<SparseSeq::Entry> entries;
        const int support = 1 + static_cast<int>(rng.next_below(6));
        for (int s = 0; s < support; ++s) {
            const std::int64_t j = static_cast<std::int64_t>(rng.next_below(41)) - 20;
            const double re = std::ldexp(static_cast<double>(static_cast<std::int64_t>(rng.next_below(2049)) - 1024), -6);
            const double im = std::ldexp(static_cast<double>(static_cast<std::int64_t>(rng.next_below(2049)) - 1024), -6);
            entries.emplace_back(j, cplx(re, im));
        }
        SparseSeq x = SparseSeq::from_entries(std::move(entries));
        bool good = true;
        for (int it = 0; it < 5 && good; ++it) {
            SparseSeq y = backward_apply(op.block0, x);
            const double nx = ss_norm(x), ny = ss_norm(y);
            good = all_ge_1 ? (ny >= nx) : (ny <= nx);
            x = std::move(y);
        }
        ok[t] = good ? 1 : 0;
    });
    int passed = 0;
    for (char c : ok) passed += c;

    if (all_ge_1 && passed == probes) {
        cert.verdict = NonHypVerdict::Expansive;
        cert.evidence = std::string("block 0 profile ") + profile_name(op.block0) +
                        " has all weights >= 1; " + std::to_string(passed) + "/" +
                        std::to_string(probes) + " probes kept norms non-decreasing";
    } else if (all_le_1 && passed == probes) {
        cert.verdict = NonHypVerdict::PowerBounded;
        cert.evidence = std::string("block 0 profile ") + profile_name(op.block0) +
                        " has all weights <= 1; " + std::to_string(passed) + "/" +
                        std::to_string(probes) + " probes kept norms non-increasing";
    } else {
        cert.verdict = NonHypVerdict::None;
        cert.evidence = "spot checks contradicted the weight rule (" + std::to_string(passed) + "/" +
                        std::to_string(probes) + ")";
    }
    return cert;
}

} // namespace gammadyn
