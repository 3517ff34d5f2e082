#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gammadyn/parallel.hpp"
#include "gammadyn/sparse_seq.hpp"

namespace gammadyn {

using CVec = std::vector<cplx>;

double cv_norm_sq(const CVec& v);
double cv_norm(const CVec& v);
cplx cv_inner(const CVec& x, const CVec& y); // conjugate-linear in y
CVec cv_scale(cplx c, const CVec& v);
CVec cv_sub(const CVec& x, const CVec& y);

/// Distance between the complex lines through u and v:
/// d(u, v) = sqrt(2 - 2|<u/|u|, v/|v|>|). Invariant under unit-modulus
/// scaling of either argument; 0 iff the lines coincide.
double projective_distance(const CVec& u, const CVec& v);

/// Phase-canonical unit vector spanning the same complex line: largest
/// coordinate is made real positive, then the vector is normalized.
CVec canonical_direction(const CVec& v);

enum class Ambient { Finite, Sequence };
enum class AsymKind { None, ModulusToZero, ModulusToInfinity, DirectionsAccumulate };

const char* asym_kind_name(AsymKind k);
AsymKind asym_kind_from_name(const std::string& name);

/// Declared limit behaviour of the (infinite) set the finite sample was
/// drawn from. A finite sample alone is always coverable; declarations
/// carry the tail behaviour the classifier cannot observe, and are only
/// acted on when the sample corroborates them.
struct Asymptotics {
    AsymKind kind = AsymKind::None;
    int coordinate = -1; // coordinate or direction index it concerns, -1 = unspecified
};

struct ScalarSet {
    Ambient ambient = Ambient::Finite;
    std::size_t dim = 0; // ambient dimension in finite mode
    std::vector<CVec> vectors;
    Asymptotics asymptotics;
};

struct Annulus {
    CVec direction; // canonical unit vector
    double a = 0.0; // min modulus over members
    double b = 0.0; // max modulus
    std::vector<std::size_t> members;
};

struct CoverReport {
    bool coverable = true;
    std::vector<Annulus> annuli;
    std::vector<std::size_t> unassigned; // zero vectors
    std::vector<std::string> flags;
    std::vector<std::string> notes;
    double tol = 0.0;
    double max_modulus_ratio = 1.0;   // worst within-cluster b/a
    double spacing_head = 0.0;        // direction-spacing evidence for accumulation
    double spacing_tail = 0.0;
};

enum class Regime { ToZero, ToInfinity };

const char* regime_name(Regime r);

/// Basis data extracted from a non-coverable sample: a subsequence of the
/// sample, an orthonormal coordinate basis, the partition of coordinates
/// into active (I1) and identically-zero (I2) ones, and the pivot
/// coordinate whose moduli trend to 0 or infinity along the subsequence.
struct BasisExtraction {
    Ambient mode = Ambient::Finite;
    std::vector<std::size_t> subsequence; // indices into the original sample
    std::vector<CVec> basis;              // rows f_0.., orthonormal
    std::size_t L = 0;                    // finite mode: number of active coordinates
    std::vector<int> I1;                  // active coordinate positions (descriptive)
    std::vector<int> I2;                  // identically-zero positions
    std::size_t pivot = 0;                // column index of the pivot coordinate
    Regime regime = Regime::ToZero;
    std::vector<std::vector<cplx>> coords; // coords[r][i] = <sample_r, f_i>
    std::vector<double> tail_l2;           // per row: l2 norm of all non-pivot coordinates
    std::vector<CVec> samples;             // the subsequence sample vectors themselves

    void validate(double nonzero_tol, double trend_factor) const;
};

struct SetOptions {
    double cover_tol = 1e-6;
    int max_annuli = 32;
    double modulus_ratio_limit = 4.0; // corroboration threshold for modulus flags
    double spacing_decay = 0.25;      // tail/head spacing ratio corroborating accumulation
    double line_tol = 1e-9;           // exact-line clustering tolerance
    int line_limit = 8;               // "finitely many lines" cutoff
    double trend_factor = 2.0;        // overall pivot growth/decay factor required
    int min_trend_len = 8;            // minimum subsequence length
    double sep_tol = 1e-6;            // separating-pair inner-product floor
    double growth_abs = 4.0;          // projection norm that triggers the unbounded branch
    double nonzero_tol = 1e-11;       // accepted coordinate magnitude floor
    int rejection_budget = 10000;
    std::uint64_t seed = 1;
};

/// Clusters the nonzero sample by projective distance and reports one
/// annulus per cluster. The verdict is NotCoverable only when a flag fires:
/// a corroborated modulus declaration inside a cluster, corroborated
/// direction accumulation, or more clusters than max_annuli.
CoverReport classify_cover(const ScalarSet& set, double tol, const SetOptions& opts = {},
                           par::Exec exec = par::Exec::Parallel);

/// Finite-dimensional extraction. Routes samples confined to finitely many
/// complex lines through the one-coordinate path (L = 1) when a modulus
/// trend exists; otherwise finds the accumulation direction (bounded case)
/// or the normalized limit direction (unbounded case), completes it to an
/// orthonormal basis and selects the pivot coordinate.
BasisExtraction extract_basis_finite(const ScalarSet& set, const SetOptions& opts = {});

struct SeparatingPair {
    CVec f0, f1;
    double min_inner = 0.0;       // min over samples of |<x_n, f_i>|
    double min_line_dist = 0.0;   // min over samples of sin(angle to C f_i)
    double min_proj_det = 0.0;    // min pairwise projected-independence determinant
    int draws = 0;
};

/// Two orthonormal vectors with nonzero pairing against every sample, no
/// sample on either line, and pairwise independent 2-D projections.
/// Realized by seeded rejection sampling inside the sample span.
SeparatingPair find_separating_pair(const std::vector<CVec>& samples, double tol,
                                    std::uint64_t seed, int budget = 10000);

struct FunctionalLimit {
    CVec a;
    std::vector<std::size_t> subsequence;
    Regime regime = Regime::ToZero;
    std::vector<double> values; // |<x_{n_k}, a>| along the subsequence
    SeparatingPair pair;
    CVec limit_point; // 2-D accumulation point (coordinates w.r.t. f0, f1), empty if unbounded
};

/// Finds a with |<x_{n_k}, a>| trending to 0 (projections accumulate) or to
/// infinity (projection norms grow) along a reported subsequence.
FunctionalLimit extract_functional_limit(const std::vector<CVec>& samples, double tol,
                                         std::uint64_t seed, const SetOptions& opts = {});

struct CompletedBasis {
    std::vector<CVec> f;          // f_1..f_M, orthonormal and orthogonal to f0
    std::vector<std::size_t> phi; // phi(1..M): sample index revisited at each step
    std::vector<double> eps;      // target distances, epsulon_1 forced
    std::vector<double> dist;     // achieved dist(x_{phi(m)}, span(f_0..f_m))
    int draws = 0;
};

/// Extends f0 by M orthonormal vectors, each a small perturbation of the
/// projected revisit sample, rejecting perturbations that become orthogonal
/// to any sample or collapse onto a projected sample line.
CompletedBasis complete_basis_avoiding_orthogonality(const CVec& f0,
                                                     const std::vector<CVec>& samples,
                                                     std::size_t M, std::vector<double> eps,
                                                     std::uint64_t seed, int budget = 10000,
                                                     double nonzero_tol = 1e-11);

/// Sequence-space extraction: functional limit gives f_0 and the
/// subsequence, the completion supplies f_1..f_M; active coordinates are
/// the even positions of the final basis, the pivot is position 0.
BasisExtraction extract_basis_infinite(const ScalarSet& set, std::size_t M,
                                       const SetOptions& opts = {});

/// Coordinates of each sample in the given basis (rows). Orthonormal bases
/// use projections; general invertible ones are solved directly. The
/// reconstruction must round-trip within 1e-10, else SingularBasis.
std::vector<std::vector<cplx>> change_coordinates(const std::vector<CVec>& samples,
                                                  const std::vector<CVec>& basis);

} // namespace gammadyn
