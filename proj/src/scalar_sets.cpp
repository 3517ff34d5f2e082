#include "gammadyn/scalar_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gammadyn/rng.hpp"

namespace gammadyn {

double cv_norm_sq(const CVec& v) {
    double s = 0.0;
    for (cplx c : v) s += std::norm(c);
    return s;
}

double cv_norm(const CVec& v) { return std::sqrt(cv_norm_sq(v)); }

cplx cv_inner(const CVec& x, const CVec& y) {
    const std::size_t n = std::min(x.size(), y.size());
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) s += x[i] * std::conj(y[i]);
    return s;
}

CVec cv_scale(cplx c, const CVec& v) {
    CVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
    return out;
}

CVec cv_sub(const CVec& x, const CVec& y) {
    CVec out(std::max(x.size(), y.size()), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
    for (std::size_t i = 0; i < y.size(); ++i) out[i] -= y[i];
    return out;
}

double projective_distance(const CVec& u, const CVec& v) {
    const double nu = cv_norm(u), nv = cv_norm(v);
    if (nu == 0.0 || nv == 0.0) fail(ErrorCode::InvalidInput, "projective distance of zero vector");
    const double c = std::abs(cv_inner(u, v)) / (nu * nv);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(1.0, c)));
}

CVec canonical_direction(const CVec& v) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best <= 0.0) fail(ErrorCode::InvalidInput, "canonical direction of zero vector");
    const cplx phase = std::conj(v[imax]) / std::abs(v[imax]);
    CVec out = cv_scale(phase / cv_norm(v), v);
    out[imax] = cplx(std::abs(out[imax]), 0.0); // kill rounding in the pinned slot
    return out;
}

const char* asym_kind_name(AsymKind k) {
    switch (k) {
        case AsymKind::None: return "none";
        case AsymKind::ModulusToZero: return "modulus_to_zero";
        case AsymKind::ModulusToInfinity: return "modulus_to_infinity";
        case AsymKind::DirectionsAccumulate: return "directions_accumulate";
    }
    return "?";
}

AsymKind asym_kind_from_name(const std::string& name) {
    if (name == "none") return AsymKind::None;
    if (name == "modulus_to_zero") return AsymKind::ModulusToZero;
    if (name == "modulus_to_infinity") return AsymKind::ModulusToInfinity;
    if (name == "directions_accumulate") return AsymKind::DirectionsAccumulate;
    fail(ErrorCode::InvalidInput, "unknown asymptotics kind '" + name + "'");
}

const char* regime_name(Regime r) { return r == Regime::ToZero ? "ToZero" : "ToInfinity"; }

namespace {

std::vector<CVec> padded_vectors(const ScalarSet& set) {
    std::size_t dim = set.ambient == Ambient::Finite ? set.dim : 0;
    for (const auto& v : set.vectors) dim = std::max(dim, v.size());
    std::vector<CVec> out;
    out.reserve(set.vectors.size());
    for (const auto& v : set.vectors) {
        CVec p(dim, cplx(0.0, 0.0));
        std::copy(v.begin(), v.end(), p.begin());
        if (set.ambient == Ambient::Finite && v.size() > set.dim && set.dim > 0)
            fail(ErrorCode::InvalidInput, "sample vector exceeds the declared dimension");
        out.push_back(std::move(p));
    }
    return out;
}

/// Longest strictly monotone subsequence above the floor (quadratic DP,
/// deterministic tie-breaks), accepted only with the required length and
/// overall head-to-tail factor; empty otherwise.
std::vector<std::size_t> monotone_chain(const std::vector<double>& vals, bool decreasing,
                                        double floor, double factor, int min_len) {
    const std::size_t n = vals.size();
    std::vector<int> len(n, 0);
    std::vector<std::ptrdiff_t> prev(n, -1);
    int best_len = 0;
    std::size_t best_end = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (!(vals[t] > floor)) continue;
        len[t] = 1;
        for (std::size_t s = 0; s < t; ++s) {
            if (len[s] == 0) continue;
            const bool step_ok = decreasing ? vals[t] < vals[s] : vals[t] > vals[s];
            if (step_ok && len[s] + 1 > len[t]) {
                len[t] = len[s] + 1;
                prev[t] = static_cast<std::ptrdiff_t>(s);
            }
        }
        if (len[t] > best_len) {
            best_len = len[t];
            best_end = t;
        }
    }
    if (best_len < min_len) return {};
    std::vector<std::size_t> chain;
    for (std::ptrdiff_t c = static_cast<std::ptrdiff_t>(best_end); c >= 0; c = prev[static_cast<std::size_t>(c)])
        chain.push_back(static_cast<std::size_t>(c));
    std::reverse(chain.begin(), chain.end());
    const double lo = decreasing ? vals[chain.back()] : vals[chain.front()];
    const double hi = decreasing ? vals[chain.front()] : vals[chain.back()];
    if (!(hi >= factor * lo)) return {};
    return chain;
}

/// Orthonormal completion of `seed_rows` against the standard basis
/// (deterministic modified Gram-Schmidt, two passes).
std::vector<CVec> complete_orthonormal(std::vector<CVec> rows, std::size_t dim) {
    auto project_out = [&](CVec& v) {
        for (const auto& g : rows) {
            const cplx c = cv_inner(v, g);
            for (std::size_t i = 0; i < dim; ++i) v[i] -= c * g[i];
        }
    };
    for (std::size_t e = 0; e < dim && rows.size() < dim; ++e) {
        CVec cand(dim, cplx(0.0, 0.0));
        cand[e] = 1.0;
        project_out(cand);
        project_out(cand);
        const double nn = cv_norm(cand);
        if (nn > 1e-8) rows.push_back(cv_scale(1.0 / nn, cand));
    }
    if (rows.size() != dim) fail(ErrorCode::SingularBasis, "orthonormal completion failed");
    return rows;
}

struct LineCluster {
    CVec direction;
    std::vector<std::size_t> members;
};

std::vector<LineCluster> cluster_by_direction(const std::vector<CVec>& vecs,
                                              const std::vector<std::size_t>& idx, double tol,
                                              par::Exec exec) {
    std::vector<LineCluster> clusters;
    std::vector<double> dist;
    for (std::size_t r : idx) {
        // distances into per-cluster slots; the first match wins, so the
        // outcome is independent of the execution mode
        dist.assign(clusters.size(), 0.0);
        par::for_index(clusters.size(), exec, [&](std::size_t c) {
            dist[c] = projective_distance(vecs[r], clusters[c].direction);
        });
        std::size_t place = clusters.size();
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            if (dist[c] <= tol) {
                place = c;
                break;
            }
        }
        if (place == clusters.size())
            clusters.push_back({canonical_direction(vecs[r]), {r}});
        else
            clusters[place].members.push_back(r);
    }
    return clusters;
}

} // namespace

CoverReport classify_cover(const ScalarSet& set, double tol, const SetOptions& opts,
                           par::Exec exec) {
    if (tol <= 0.0) fail(ErrorCode::InvalidInput, "cover tolerance must be positive");
    const std::vector<CVec> vecs = padded_vectors(set);
    if (vecs.empty()) fail(ErrorCode::InvalidInput, "empty sample");

    CoverReport report;
    report.tol = tol;

    std::vector<std::size_t> nonzero;
    for (std::size_t r = 0; r < vecs.size(); ++r) {
        if (cv_norm(vecs[r]) > 0.0)
            nonzero.push_back(r);
        else
            report.unassigned.push_back(r);
    }
    if (nonzero.empty()) fail(ErrorCode::AllZero, "every sample vector is zero");

    const auto clusters = cluster_by_direction(vecs, nonzero, tol, exec);
    for (const auto& c : clusters) {
        Annulus ann;
        ann.direction = c.direction;
        ann.members = c.members;
        ann.a = std::numeric_limits<double>::infinity();
        ann.b = 0.0;
        for (std::size_t r : c.members) {
            const double m = cv_norm(vecs[r]);
            ann.a = std::min(ann.a, m);
            ann.b = std::max(ann.b, m);
        }
        report.max_modulus_ratio = std::max(report.max_modulus_ratio, ann.b / ann.a);
        report.annuli.push_back(std::move(ann));
    }

    // Direction-spacing evidence: consecutive projective distances between
    // distinct sample directions, each computed into its own slot.
    std::vector<double> spacing(nonzero.size() > 0 ? nonzero.size() - 1 : 0, -1.0);
    par::for_index(spacing.size(), exec, [&](std::size_t t) {
        spacing[t] = projective_distance(vecs[nonzero[t]], vecs[nonzero[t + 1]]);
    });
    std::vector<double> distinct;
    for (double d : spacing)
        if (d > opts.line_tol) distinct.push_back(d);
    bool accumulation_evidence = false;
    if (distinct.size() >= 4) {
        const std::size_t half = distinct.size() / 2;
        report.spacing_head = *std::min_element(distinct.begin(), distinct.begin() + half);
        report.spacing_tail = *std::min_element(distinct.begin() + half, distinct.end());
        accumulation_evidence = report.spacing_tail <= opts.spacing_decay * report.spacing_head;
    }

    const AsymKind declared = set.asymptotics.kind;
    if (declared == AsymKind::ModulusToZero || declared == AsymKind::ModulusToInfinity) {
        if (report.max_modulus_ratio >= opts.modulus_ratio_limit) {
            report.flags.push_back(asym_kind_name(declared));
        } else {
            report.notes.push_back(std::string("declared ") + asym_kind_name(declared) +
                                   " not corroborated: within-cluster modulus ratio " +
                                   std::to_string(report.max_modulus_ratio));
        }
    }
    if (declared == AsymKind::DirectionsAccumulate) {
        if (accumulation_evidence) {
            report.flags.push_back(asym_kind_name(declared));
        } else {
            report.notes.push_back("declared directions_accumulate not corroborated by spacing decay");
        }
    }
    if (static_cast<int>(report.annuli.size()) > opts.max_annuli) {
        report.flags.push_back("annulus_budget_exceeded");
        report.notes.push_back("clusters " + std::to_string(report.annuli.size()) + " > limit " +
                               std::to_string(opts.max_annuli));
    }
    report.coverable = report.flags.empty();
    if (report.coverable && declared == AsymKind::None)
        report.notes.push_back("finite sample with no declared asymptotics is trivially coverable");
    return report;
}

std::vector<std::vector<cplx>> change_coordinates(const std::vector<CVec>& samples,
                                                  const std::vector<CVec>& basis) {
    if (basis.empty()) fail(ErrorCode::SingularBasis, "empty basis");
    std::size_t dim = 0;
    for (const auto& f : basis) dim = std::max(dim, f.size());
    for (const auto& x : samples) dim = std::max(dim, x.size());
    auto padded = [&](const CVec& v) {
        CVec p(dim, cplx(0.0, 0.0));
        std::copy(v.begin(), v.end(), p.begin());
        return p;
    };
    std::vector<CVec> f;
    f.reserve(basis.size());
    for (const auto& row : basis) f.push_back(padded(row));

    // Orthonormal fast path: coordinates are plain projections.
    bool orthonormal = true;
    for (std::size_t i = 0; i < f.size() && orthonormal; ++i)
        for (std::size_t j = i; j < f.size() && orthonormal; ++j) {
            const cplx g = cv_inner(f[i], f[j]);
            const double want = i == j ? 1.0 : 0.0;
            if (std::abs(g - want) > 1e-10) orthonormal = false;
        }

    std::vector<std::vector<cplx>> coords;
    coords.reserve(samples.size());
    for (const auto& raw : samples) {
        const CVec x = padded(raw);
        std::vector<cplx> c(f.size(), cplx(0.0, 0.0));
        if (orthonormal) {
            for (std::size_t i = 0; i < f.size(); ++i) c[i] = cv_inner(x, f[i]);
        } else {
            if (f.size() != dim) fail(ErrorCode::SingularBasis, "non-square non-orthonormal basis");
            // Solve sum_i c_i f_i = x by Gaussian elimination with partial pivoting.
            std::vector<std::vector<cplx>> A(dim, std::vector<cplx>(dim + 1));
            for (std::size_t rr = 0; rr < dim; ++rr) {
                for (std::size_t cc = 0; cc < dim; ++cc) A[rr][cc] = f[cc][rr];
                A[rr][dim] = x[rr];
            }
            for (std::size_t col = 0; col < dim; ++col) {
                std::size_t piv = col;
                for (std::size_t rr = col + 1; rr < dim; ++rr)
                    if (std::abs(A[rr][col]) > std::abs(A[piv][col])) piv = rr;
                if (std::abs(A[piv][col]) < 1e-12) fail(ErrorCode::SingularBasis, "singular basis matrix");
                std::swap(A[col], A[piv]);
                for (std::size_t rr = 0; rr < dim; ++rr) {
                    if (rr == col) continue;
                    const cplx fval = A[rr][col] / A[col][col];
                    if (fval == cplx(0.0, 0.0)) continue;
                    for (std::size_t cc = col; cc <= dim; ++cc) A[rr][cc] -= fval * A[col][cc];
                }
            }
            for (std::size_t i = 0; i < dim; ++i) c[i] = A[i][dim] / A[i][i];
        }
        // Round-trip check against the original sample.
        CVec rec(dim, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t d = 0; d < dim; ++d) rec[d] += c[i] * f[i][d];
        const double err = cv_norm(cv_sub(rec, x));
        if (err > 1e-10 * std::max(1.0, cv_norm(x)))
            fail(ErrorCode::SingularBasis, "coordinate round-trip error " + std::to_string(err));
        coords.push_back(std::move(c));
    }
    return coords;
}

void BasisExtraction::validate(double nonzero_tol, double trend_factor) const {
    if (subsequence.size() != coords.size() || subsequence.size() != samples.size())
        fail(ErrorCode::InvalidInput, "extraction size mismatch");
    if (coords.empty()) fail(ErrorCode::ExtractionFailed, "empty extraction");
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            const double want = i == j ? 1.0 : 0.0;
            if (std::abs(std::abs(cv_inner(basis[i], basis[j])) - want) > 1e-9)
                fail(ErrorCode::InvalidInput, "basis not orthonormal");
        }
    double scale = 0.0;
    for (const auto& s : samples) scale = std::max(scale, cv_norm(s));
    for (const auto& row : coords) {
        for (int i : I1) {
            if (std::abs(row[static_cast<std::size_t>(i)]) <= nonzero_tol * 0.1)
                fail(ErrorCode::InvalidInput, "zero coordinate in I1");
        }
        for (int i : I2) {
            if (i < static_cast<int>(row.size()) &&
                std::abs(row[static_cast<std::size_t>(i)]) > 1e-9 * std::max(1.0, scale))
                fail(ErrorCode::InvalidInput, "nonzero coordinate in I2");
        }
    }
    // pivot trend: strictly monotone, overall factor at least trend_factor
    double first = std::abs(coords.front()[pivot]);
    double prev = first;
    for (std::size_t r = 1; r < coords.size(); ++r) {
        const double v = std::abs(coords[r][pivot]);
        const bool ok = regime == Regime::ToZero ? v < prev : v > prev;
        if (!ok) fail(ErrorCode::InvalidInput, "pivot trend not monotone");
        prev = v;
    }
    const double hi = regime == Regime::ToZero ? first : prev;
    const double lo = regime == Regime::ToZero ? prev : first;
    if (!(hi >= trend_factor * lo)) fail(ErrorCode::InvalidInput, "pivot trend factor too small");
}

namespace {

BasisExtraction finalize_finite(const std::vector<CVec>& vecs, std::vector<std::size_t> sub,
                                std::vector<CVec> basis, std::size_t pivot_col, Regime regime,
                                const SetOptions& opts) {
    // Column classification with row refinement: a column is inactive when it
    // vanishes on every kept row; rows that zero out an otherwise active
    // column are dropped, as long as the pivot trend survives.
    std::vector<CVec> samp;
    for (std::size_t r : sub) samp.push_back(vecs[r]);
    auto coords = change_coordinates(samp, basis);
    const std::size_t l = basis.size();
    double scale = 0.0;
    for (const auto& s : samp) scale = std::max(scale, cv_norm(s));
    const double zero_floor = 1e-9 * std::max(1.0, scale);

    std::vector<char> active(l, 0);
    for (std::size_t i = 0; i < l; ++i) {
        double mx = 0.0;
        for (const auto& row : coords) mx = std::max(mx, std::abs(row[i]));
        active[i] = mx > zero_floor ? 1 : 0;
    }
    if (!active[pivot_col]) fail(ErrorCode::ExtractionFailed, "pivot coordinate vanished");

    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < coords.size(); ++r) {
        bool good = true;
        for (std::size_t i = 0; i < l && good; ++i)
            if (active[i] && std::abs(coords[r][i]) <= zero_floor * 0.5) good = false;
        if (good) keep.push_back(r);
    }
    if (static_cast<int>(keep.size()) < opts.min_trend_len)
        fail(ErrorCode::ExtractionFailed, "too few rows after zero-coordinate refinement");

    // Reorder columns: active ones first (pivot keeps its relative slot).
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < l; ++i)
        if (active[i]) order.push_back(i);
    const std::size_t L = order.size();
    for (std::size_t i = 0; i < l; ++i)
        if (!active[i]) order.push_back(i);

    BasisExtraction ex;
    ex.mode = Ambient::Finite;
    ex.regime = regime;
    ex.L = L;
    for (std::size_t i = 0; i < l; ++i) {
        if (i < L)
            ex.I1.push_back(static_cast<int>(i));
        else
            ex.I2.push_back(static_cast<int>(i));
        ex.basis.push_back(basis[order[i]]);
    }
    for (std::size_t i = 0; i < L; ++i)
        if (order[i] == pivot_col) ex.pivot = i;
    for (std::size_t r : keep) {
        ex.subsequence.push_back(sub[r]);
        ex.samples.push_back(samp[r]);
        std::vector<cplx> row(l);
        for (std::size_t i = 0; i < l; ++i) row[i] = coords[r][order[i]];
        double tail_sq = 0.0;
        for (std::size_t i = 0; i < l; ++i)
            if (i != ex.pivot) tail_sq += std::norm(row[i]);
        ex.coords.push_back(std::move(row));
        ex.tail_l2.push_back(std::sqrt(tail_sq));
    }
    ex.validate(opts.nonzero_tol, opts.trend_factor);
    return ex;
}

} // namespace

BasisExtraction extract_basis_finite(const ScalarSet& set, const SetOptions& opts) {
    if (set.ambient != Ambient::Finite) fail(ErrorCode::InvalidInput, "finite extraction needs finite ambient");
    const std::vector<CVec> vecs = padded_vectors(set);
    const std::size_t l = vecs.empty() ? 0 : vecs.front().size();
    if (l == 0) fail(ErrorCode::InvalidInput, "zero-dimensional sample");

    const CoverReport cover = classify_cover(set, opts.cover_tol, opts);
    if (cover.coverable)
        fail(ErrorCode::ExtractionFailed, "sample is coverable; the construction gate refuses it");

    std::vector<std::size_t> nonzero;
    for (std::size_t r = 0; r < vecs.size(); ++r)
        if (cv_norm(vecs[r]) > 0.0) nonzero.push_back(r);

    // Samples confined to finitely many complex lines: use the coordinate of
    // a line whose moduli trend monotonically (L = 1).
    const auto lines = cluster_by_direction(vecs, nonzero, opts.line_tol, par::Exec::Parallel);
    if (static_cast<int>(lines.size()) <= opts.line_limit) {
        const bool want_increasing = set.asymptotics.kind == AsymKind::ModulusToInfinity;
        for (const auto& line : lines) {
            std::vector<double> mods;
            for (std::size_t r : line.members) mods.push_back(cv_norm(vecs[r]));
            for (int pass = 0; pass < 2; ++pass) {
                const bool decreasing = pass == 0 ? !want_increasing : want_increasing;
                auto chain = monotone_chain(mods, decreasing, 0.0, opts.trend_factor, opts.min_trend_len);
                if (chain.empty()) continue;
                std::vector<std::size_t> sub;
                for (std::size_t c : chain) sub.push_back(line.members[c]);
                auto basis = complete_orthonormal({line.direction}, l);
                return finalize_finite(vecs, sub, basis, 0,
                                       decreasing ? Regime::ToZero : Regime::ToInfinity, opts);
            }
        }
        fail(ErrorCode::ExtractionFailed, "lines carry no monotone modulus trend");
    }

    // Unbounded route: the direction of the largest sample approximates the
    // normalized limit; its coordinate is the pivot and must grow.
    bool unbounded = set.asymptotics.kind == AsymKind::ModulusToInfinity;
    if (set.asymptotics.kind == AsymKind::None) {
        std::vector<double> norms;
        for (std::size_t r : nonzero) norms.push_back(cv_norm(vecs[r]));
        const double factor = std::max(opts.growth_abs, opts.trend_factor * opts.trend_factor);
        unbounded = !monotone_chain(norms, false, 0.0, factor, opts.min_trend_len).empty();
    }

    if (unbounded) {
        std::size_t big = nonzero.front();
        for (std::size_t r : nonzero)
            if (cv_norm(vecs[r]) > cv_norm(vecs[big])) big = r;
        const CVec f1 = canonical_direction(vecs[big]);
        auto basis = complete_orthonormal({f1}, l);
        std::vector<double> pivot_vals;
        for (std::size_t r : nonzero) pivot_vals.push_back(std::abs(cv_inner(vecs[r], f1)));
        auto chain = monotone_chain(pivot_vals, false, 0.0, opts.trend_factor, opts.min_trend_len);
        if (chain.empty()) fail(ErrorCode::ExtractionFailed, "no growing pivot subsequence");
        std::vector<std::size_t> sub;
        for (std::size_t c : chain) sub.push_back(nonzero[c]);
        return finalize_finite(vecs, sub, basis, 0, Regime::ToInfinity, opts);
    }

    // Bounded route: accumulation direction of the sample directions. The
    // candidate whose min_trend_len nearest directions sit inside the
    // smallest radius wins; on-line samples are excluded so the remaining
    // coordinates stay nonzero.
    const std::size_t n = nonzero.size();
    if (static_cast<int>(n) < opts.min_trend_len + 1)
        fail(ErrorCode::ExtractionFailed, "sample too short for an accumulation direction");
    std::vector<double> radius(n, std::numeric_limits<double>::infinity());
    par::for_index(n, par::Exec::Parallel, [&](std::size_t a) {
        std::vector<double> d;
        d.reserve(n - 1);
        for (std::size_t b = 0; b < n; ++b)
            if (b != a) d.push_back(projective_distance(vecs[nonzero[a]], vecs[nonzero[b]]));
        std::nth_element(d.begin(), d.begin() + (opts.min_trend_len - 1), d.end());
        radius[a] = d[static_cast<std::size_t>(opts.min_trend_len - 1)];
    });
    std::size_t star = 0;
    for (std::size_t a = 1; a < n; ++a)
        if (radius[a] < radius[star]) star = a;
    const CVec f1 = canonical_direction(vecs[nonzero[star]]);
    auto basis = complete_orthonormal({f1}, l);

    // Pivot column: the coordinate with the strongest monotone decay among
    // samples off the accumulation line.
    std::vector<std::size_t> off_line;
    for (std::size_t a = 0; a < n; ++a) {
        const double res_sq = cv_norm_sq(vecs[nonzero[a]]) - std::norm(cv_inner(vecs[nonzero[a]], f1));
        if (res_sq > opts.line_tol * opts.line_tol) off_line.push_back(nonzero[a]);
    }
    std::vector<CVec> off_samples;
    for (std::size_t r : off_line) off_samples.push_back(vecs[r]);
    auto coords = change_coordinates(off_samples, basis);

    std::size_t best_col = 0;
    std::vector<std::size_t> best_chain;
    double best_factor = 0.0;
    for (std::size_t i = 1; i < l; ++i) {
        std::vector<double> vals;
        for (const auto& row : coords) vals.push_back(std::abs(row[i]));
        auto chain = monotone_chain(vals, true, 0.0, opts.trend_factor, opts.min_trend_len);
        if (chain.empty()) continue;
        const double factor = vals[chain.front()] / vals[chain.back()];
        if (factor > best_factor) {
            best_factor = factor;
            best_col = i;
            best_chain = chain;
        }
    }
    if (best_chain.empty()) fail(ErrorCode::ExtractionFailed, "no decaying pivot coordinate");
    std::vector<std::size_t> sub;
    for (std::size_t c : best_chain) sub.push_back(off_line[c]);
    return finalize_finite(vecs, sub, basis, best_col, Regime::ToZero, opts);
}

namespace {

CVec random_span_vector(const std::vector<CVec>& samples, Rng& rng, std::size_t dim) {
    CVec v(dim, cplx(0.0, 0.0));
    for (const auto& x : samples) {
        const cplx c = rng.next_cgauss();
        for (std::size_t i = 0; i < x.size(); ++i) v[i] += c * x[i];
    }
    return v;
}

} // namespace

SeparatingPair find_separating_pair(const std::vector<CVec>& samples, double tol,
                                    std::uint64_t seed, int budget) {
    if (samples.size() < 2)
        fail(ErrorCode::NotPairwiseIndependent, "need at least two samples");
    std::size_t dim = 0;
    for (const auto& x : samples) dim = std::max(dim, x.size());
    const std::size_t n = samples.size();
    for (const auto& x : samples)
        if (cv_norm(x) == 0.0) fail(ErrorCode::NotPairwiseIndependent, "zero sample vector");

    // Pairwise 2x2 Gram determinants of the normalized sample, slot-parallel.
    std::vector<double> dets(n * (n - 1) / 2, 0.0);
    par::for_index(dets.size(), par::Exec::Parallel, [&](std::size_t t) {
        // unrank t -> (a, b), a < b
        std::size_t a = 0, offset = t;
        while (offset >= n - 1 - a) {
            offset -= n - 1 - a;
            ++a;
        }
        const std::size_t b = a + 1 + offset;
        const double c = std::abs(cv_inner(samples[a], samples[b])) /
                         (cv_norm(samples[a]) * cv_norm(samples[b]));
        dets[t] = 1.0 - std::min(1.0, c) * std::min(1.0, c);
    });
    for (double d : dets)
        if (d < tol) fail(ErrorCode::NotPairwiseIndependent, "pair below independence tolerance");

    Rng rng(seed);
    SeparatingPair out;
    auto passes_vector_checks = [&](const CVec& f, double& min_inner, double& min_sin) {
        min_inner = std::numeric_limits<double>::infinity();
        min_sin = std::numeric_limits<double>::infinity();
        for (const auto& x : samples) {
            const double nx = cv_norm(x);
            const double ip = std::abs(cv_inner(x, f));
            const double cos_sq = std::min(1.0, (ip / nx) * (ip / nx));
            min_inner = std::min(min_inner, ip);
            min_sin = std::min(min_sin, std::sqrt(std::max(0.0, 1.0 - cos_sq)));
            if (ip < tol || min_sin < tol) return false;
        }
        return true;
    };

    int draws = 0;
    while (draws < budget) {
        ++draws;
        CVec f0 = random_span_vector(samples, rng, dim);
        const double n0 = cv_norm(f0);
        if (n0 == 0.0) continue;
        f0 = cv_scale(1.0 / n0, f0);
        double min_inner0, min_sin0;
        if (!passes_vector_checks(f0, min_inner0, min_sin0)) continue;

        for (int inner_try = 0; inner_try < 16 && draws < budget; ++inner_try) {
            ++draws;
            CVec f1 = random_span_vector(samples, rng, dim);
            for (int pass = 0; pass < 2; ++pass) {
                const cplx c = cv_inner(f1, f0);
                for (std::size_t i = 0; i < dim; ++i) f1[i] -= c * f0[i];
            }
            const double n1 = cv_norm(f1);
            if (n1 < 1e-12) continue;
            f1 = cv_scale(1.0 / n1, f1);
            double min_inner1, min_sin1;
            if (!passes_vector_checks(f1, min_inner1, min_sin1)) continue;

            // projected pairwise independence
            std::vector<cplx> p(n), q(n);
            for (std::size_t r = 0; r < n; ++r) {
                p[r] = cv_inner(samples[r], f0);
                q[r] = cv_inner(samples[r], f1);
            }
            double min_det = std::numeric_limits<double>::infinity();
            bool ok = true;
            for (std::size_t a = 0; a < n && ok; ++a)
                for (std::size_t b = a + 1; b < n && ok; ++b) {
                    const double det = std::abs(p[a] * q[b] - p[b] * q[a]);
                    const double floor = 1e-14 * std::max(1.0, std::abs(p[a] * q[b]) + std::abs(p[b] * q[a]));
                    min_det = std::min(min_det, det);
                    if (det < floor) ok = false;
                }
            if (!ok) continue;

            out.f0 = std::move(f0);
            out.f1 = std::move(f1);
            out.min_inner = std::min(min_inner0, min_inner1);
            out.min_line_dist = std::min(min_sin0, min_sin1);
            out.min_proj_det = min_det;
            out.draws = draws;
            return out;
        }
    }
    fail(ErrorCode::RejectionBudgetExceeded,
         "no separating pair within " + std::to_string(budget) + " draws (tol too large?)");
}

FunctionalLimit extract_functional_limit(const std::vector<CVec>& samples, double tol,
                                         std::uint64_t seed, const SetOptions& opts) {
    FunctionalLimit out;
    out.pair = find_separating_pair(samples, tol, seed, opts.rejection_budget);
    const std::size_t n = samples.size();
    std::vector<cplx> p(n), q(n);
    for (std::size_t r = 0; r < n; ++r) {
        p[r] = cv_inner(samples[r], out.pair.f0);
        q[r] = cv_inner(samples[r], out.pair.f1);
    }

    double max_proj = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        max_proj = std::max(max_proj, std::hypot(std::abs(p[r]), std::abs(q[r])));

    if (max_proj >= opts.growth_abs) {
        // Projection norms escape: one of the two coordinates must grow.
        for (int side = 0; side < 2; ++side) {
            std::vector<double> vals(n);
            for (std::size_t r = 0; r < n; ++r) vals[r] = std::abs(side == 0 ? p[r] : q[r]);
            auto chain = monotone_chain(vals, false, 0.0,
                                        std::max(opts.growth_abs, opts.trend_factor), opts.min_trend_len);
            if (chain.empty()) continue;
            out.a = side == 0 ? out.pair.f0 : out.pair.f1;
            out.regime = Regime::ToInfinity;
            out.subsequence = chain;
            for (std::size_t c : chain) out.values.push_back(vals[c]);
            return out;
        }
    }

    // Accumulation point of the 2-D projections: candidate with the tightest
    // neighborhood wins; the latest member of that neighborhood stands in
    // for the limit.
    const int need = std::min<int>(opts.min_trend_len, static_cast<int>(n) - 1);
    if (need < 1) fail(ErrorCode::NoTrend, "sample too short");
    std::vector<double> radius(n, 0.0);
    par::for_index(n, par::Exec::Parallel, [&](std::size_t a) {
        std::vector<double> d;
        d.reserve(n - 1);
        for (std::size_t b = 0; b < n; ++b)
            if (b != a) d.push_back(std::hypot(std::abs(p[a] - p[b]), std::abs(q[a] - q[b])));
        std::nth_element(d.begin(), d.begin() + (need - 1), d.end());
        radius[a] = d[static_cast<std::size_t>(need - 1)];
    });
    std::size_t star = 0;
    for (std::size_t a = 1; a < n; ++a)
        if (radius[a] < radius[star]) star = a;
    std::size_t latest = star;
    for (std::size_t b = 0; b < n; ++b) {
        const double d = std::hypot(std::abs(p[star] - p[b]), std::abs(q[star] - q[b]));
        if (d <= radius[star] && b > latest) latest = b;
    }
    const cplx w0 = p[latest], w1 = q[latest];
    out.limit_point = {w0, w1};

    cplx a0, a1;
    const double wn = std::hypot(std::abs(w0), std::abs(w1));
    if (wn <= 1e-9 * std::max(1.0, max_proj)) {
        a0 = 1.0; // degenerate limit: any unit functional in the plane works
        a1 = 0.0;
    } else {
        a0 = -std::conj(w1) / wn;
        a1 = std::conj(w0) / wn;
    }
    CVec a(std::max(out.pair.f0.size(), out.pair.f1.size()), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < out.pair.f0.size(); ++i) a[i] += a0 * out.pair.f0[i];
    for (std::size_t i = 0; i < out.pair.f1.size(); ++i) a[i] += a1 * out.pair.f1[i];

    std::vector<double> vals(n);
    for (std::size_t r = 0; r < n; ++r) vals[r] = std::abs(p[r] * std::conj(a0) + q[r] * std::conj(a1));
    const double floor = 1e-14 * std::max(1.0, max_proj);
    auto chain = monotone_chain(vals, true, floor, opts.trend_factor, opts.min_trend_len);
    if (chain.empty()) fail(ErrorCode::NoTrend, "no decaying functional values in the sample");
    out.a = std::move(a);
    out.regime = Regime::ToZero;
    out.subsequence = chain;
    for (std::size_t c : chain) out.values.push_back(vals[c]);
    return out;
}

CompletedBasis complete_basis_avoiding_orthogonality(const CVec& f0,
                                                     const std::vector<CVec>& samples,
                                                     std::size_t M, std::vector<double> eps,
                                                     std::uint64_t seed, int budget,
                                                     double nonzero_tol) {
    // The construction assumes room orthogonal to everything built so far;
    // a finite sample span can run out of it, so the working ambient keeps
    // M + 2 spare coordinates beyond every input vector.
    std::size_t dim = f0.size();
    for (const auto& x : samples) dim = std::max(dim, x.size());
    dim += M + 2;
    auto padded = [&](const CVec& v) {
        CVec t(dim, cplx(0.0, 0.0));
        std::copy(v.begin(), v.end(), t.begin());
        return t;
    };
    CVec g0 = padded(f0);
    const double n0 = cv_norm(g0);
    if (std::abs(n0 - 1.0) > 1e-9) fail(ErrorCode::InvalidInput, "f0 must be a unit vector");
    if (samples.empty()) fail(ErrorCode::InvalidInput, "no samples to complete against");
    for (const auto& x : samples) {
        const double ip = std::abs(cv_inner(padded(x), g0));
        const double nx = cv_norm(x);
        if (ip <= nonzero_tol) fail(ErrorCode::InvalidInput, "sample orthogonal to f0");
        const double resid_sq = nx * nx - ip * ip;
        if (resid_sq <= (1e-9 * nx) * (1e-9 * nx))
            fail(ErrorCode::InvalidInput, "sample lies on the line of f0");
    }

    // revisit schedule: 0 | 0 1 | 0 1 2 | ... over sample indices
    std::vector<std::size_t> phi;
    for (std::size_t row = 0; phi.size() < M; ++row)
        for (std::size_t c = 0; c <= row && phi.size() < M; ++c)
            phi.push_back(c % samples.size());

    const std::size_t first = phi.empty() ? 0 : phi[0];
    const double eps1_forced =
        std::sqrt(std::max(0.0, cv_norm_sq(padded(samples[first])) -
                                    std::norm(cv_inner(padded(samples[first]), g0))));
    if (eps.empty()) {
        eps.resize(M);
        for (std::size_t m = 0; m < M; ++m) eps[m] = eps1_forced * std::ldexp(1.0, -static_cast<int>(m));
    } else {
        if (eps.size() < M) fail(ErrorCode::InvalidInput, "epsilon sequence shorter than M");
        if (std::abs(eps[0] - eps1_forced) > 1e-12 * std::max(1.0, eps1_forced))
            fail(ErrorCode::InvalidInput, "epsilon_1 must equal dist(x_phi(1), C f0)");
        for (std::size_t m = 0; m + 1 < M; ++m)
            if (!(eps[m + 1] > 0.0) || eps[m + 1] > eps[m])
                fail(ErrorCode::InvalidInput, "epsilon sequence must decrease to 0");
    }

    std::vector<CVec> G{g0};
    auto project_out = [&](CVec v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& g : G) {
                const cplx c = cv_inner(v, g);
                for (std::size_t i = 0; i < dim; ++i) v[i] -= c * g[i];
            }
        return v;
    };

    CompletedBasis out;
    out.phi = phi;
    out.eps.assign(eps.begin(), eps.begin() + static_cast<std::ptrdiff_t>(M));
    Rng rng(seed);
    int draws = 0;

    for (std::size_t m = 0; m < M; ++m) {
        const CVec target = project_out(padded(samples[phi[m]]));
        bool placed = false;
        while (!placed) {
            if (draws >= budget)
                fail(ErrorCode::RejectionBudgetExceeded,
                     "basis completion exceeded " + std::to_string(budget) + " draws");
            ++draws;
            CVec raw(dim);
            for (auto& c : raw) c = rng.next_cgauss();
            CVec u = project_out(std::move(raw));
            const double un = cv_norm(u);
            if (un < 1e-12) continue;
            u = cv_scale(1.0 / un, u);
            const double delta = eps[m] * rng.next_unit();
            CVec cand = target;
            for (std::size_t i = 0; i < dim; ++i) cand[i] += delta * u[i];
            const double cn = cv_norm(cand);
            if (cn < 1e-12) continue;
            const CVec cand_unit = cv_scale(1.0 / cn, cand);

            bool ok = true;
            for (const auto& x : samples) {
                const CVec px = project_out(padded(x));
                const double pn = cv_norm(px);
                if (pn <= 1e-12 * std::max(1.0, cv_norm(x)))
                    fail(ErrorCode::ExtractionFailed, "sample entered the constructed span");
                const double ip_full = std::abs(cv_inner(padded(x), cand_unit));
                if (ip_full <= nonzero_tol) {
                    ok = false;
                    break;
                }
                const double cos_sq = std::min(1.0, std::norm(cv_inner(cand_unit, cv_scale(1.0 / pn, px))));
                if (1.0 - cos_sq <= 1e-10) { // candidate collapsed onto a projected sample line
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;

            CVec f_m = project_out(cand); // hygiene pass keeps the Gram clean
            const double fn = cv_norm(f_m);
            if (fn < 1e-12) continue;
            f_m = cv_scale(1.0 / fn, f_m);
            G.push_back(f_m);
            out.f.push_back(std::move(f_m));

            const CVec resid = project_out(padded(samples[phi[m]]));
            out.dist.push_back(cv_norm(resid));
            placed = true;
        }
    }
    out.draws = draws;
    return out;
}

BasisExtraction extract_basis_infinite(const ScalarSet& set, std::size_t M, const SetOptions& opts) {
    if (set.ambient != Ambient::Sequence)
        fail(ErrorCode::InvalidInput, "sequence extraction needs sequence ambient");
    const std::vector<CVec> vecs = padded_vectors(set);
    if (static_cast<int>(vecs.size()) < opts.min_trend_len)
        fail(ErrorCode::ExtractionFailed, "sample too short for a trend");

    const CoverReport cover = classify_cover(set, opts.cover_tol, opts);
    if (cover.coverable) fail(ErrorCode::Coverable, "sample is coverable; construction refused");

    // Full linear independence via sequential orthogonalization.
    {
        std::vector<CVec> q;
        for (const auto& x : vecs) {
            CVec v = x;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& g : q) {
                    const cplx c = cv_inner(v, g);
                    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * g[i];
                }
            const double rn = cv_norm(v);
            if (rn <= 1e-10 * std::max(1.0, cv_norm(x)))
                fail(ErrorCode::ExtractionFailed, "samples are not linearly independent");
            q.push_back(cv_scale(1.0 / rn, v));
        }
    }

    FunctionalLimit fl = extract_functional_limit(vecs, opts.sep_tol, opts.seed, opts);
    std::vector<CVec> subsamples;
    for (std::size_t c : fl.subsequence) subsamples.push_back(vecs[c]);

    CompletedBasis cb = complete_basis_avoiding_orthogonality(fl.a, subsamples, M, {}, opts.seed + 1,
                                                              opts.rejection_budget, opts.nonzero_tol);

    BasisExtraction ex;
    ex.mode = Ambient::Sequence;
    ex.regime = fl.regime;
    ex.subsequence = fl.subsequence;
    ex.samples = subsamples;
    ex.basis.push_back(fl.a);
    for (const auto& f : cb.f) ex.basis.push_back(f);
    ex.L = ex.basis.size();
    ex.pivot = 0;
    // I1/I2 hold materialized coordinate columns; the inactive half of the
    // partition (odd positions of the final basis) is never materialized in
    // sequence mode, so I2 stays empty here.
    for (std::size_t i = 0; i < ex.basis.size(); ++i) ex.I1.push_back(static_cast<int>(i));
    for (const auto& x : subsamples) {
        std::vector<cplx> row(ex.basis.size());
        for (std::size_t i = 0; i < ex.basis.size(); ++i) row[i] = cv_inner(x, ex.basis[i]);
        ex.coords.push_back(std::move(row));
        const double tail_sq = cv_norm_sq(x) - std::norm(cv_inner(x, ex.basis[0]));
        ex.tail_l2.push_back(std::sqrt(std::max(0.0, tail_sq)));
    }
    ex.validate(opts.nonzero_tol, opts.trend_factor);
    return ex;
}

} // namespace gammadyn
