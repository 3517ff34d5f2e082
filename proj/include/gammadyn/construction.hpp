#pragma once

#include <climits>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gammadyn/scalar_sets.hpp"
#include "gammadyn/shifts.hpp"

namespace gammadyn {

enum class Mode { FiniteDim, Infinite };

const char* mode_name(Mode m);

/// Deterministic target enumeration. Entry n is the next vector of a fixed
/// diagonal walk over every finite dyadic-grid vector that fits the slot:
/// blocks below n, support radius below n, coefficient moduli at most n.
/// Misfits are deferred (the slot stays zero), so every grid vector still
/// appears at some index and the enumerated set is dense in the limit.
/// scale_log2 shifts the coefficient grid globally by 2^{scale_log2}; the
/// walk covers arbitrarily large and arbitrarily fine coefficients for any
/// fixed scale.
struct TargetSequence {
    Mode mode = Mode::Infinite;
    int block_limit = 1;
    int scale_log2 = 0;
    std::vector<DirectSumVec> entries; // y_0 .. y_K
    std::vector<int> degrees;          // d_0 .. d_K

    void validate() const; // slot constraints and degree bounds
};

TargetSequence gen_target_sequence(int K, Mode mode, int block_limit, int scale_log2);

/// Decoded master enumeration entry, before slot constraints.
DirectSumVec decode_master_vector(std::uint64_t index, Mode mode, int block_limit, int scale_log2);

/// One evaluated inequality (or support-equality) of the inductive
/// construction, identified as FIN.i..FIN.vi, INF0.i..INF0.ix or
/// INFinf.i..INFinf.x. `i` is the block (0 = pivot), `j` the earlier step
/// when the condition couples two steps (-1 otherwise).
struct ConditionInstance {
    int k = 0;
    std::string id;
    int i = -1;
    int j = -1;
    double lhs = 0.0;
    double rhs = 0.0;
    bool equality = false;
    bool pass = false;
    double margin = 0.0; // relative slack (rhs-lhs)/rhs; +-1 for equalities
};

struct UniformBoundCheck {
    int k = 0;
    int j = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

struct Schedule {
    Mode mode = Mode::Infinite;
    Regime regime = Regime::ToZero;
    std::vector<std::size_t> phi; // strictly increasing coordinate rows
    std::vector<std::int64_t> m; // strictly increasing shift powers
    std::vector<ConditionInstance> conditions; // evaluated at acceptance
    std::vector<UniformBoundCheck> uniform_bound; // recorded diagnostic
    double margin_rel = 1e-9;

    int last_step() const { return static_cast<int>(phi.size()) - 1; }
};

/// Row-wise coordinate view the scheduler works on: the pivot coordinate,
/// the tail coordinates (blocks 1..B-1) and the exact l2 mass of every
/// non-pivot coordinate (including the ones beyond the materialized tail).
struct ConstructionCoords {
    Mode mode = Mode::Infinite;
    Regime regime = Regime::ToZero;
    std::vector<cplx> pivot;
    std::vector<std::vector<cplx>> tail;
    std::vector<double> tail_l2;

    std::size_t rows() const { return pivot.size(); }
    int blocks() const { return 1 + (tail.empty() ? 0 : static_cast<int>(tail.front().size())); }
};

ConstructionCoords construction_view(const BasisExtraction& ex);

WeightProfile pivot_backward_profile(Regime r);  // W1 for ToZero, W2 for ToInfinity
WeightProfile pivot_forward_profile(Regime r);   // OMEGA1 / OMEGA2
std::string condition_prefix(Mode mode, Regime regime);

/// All condition instances of step k given the schedule prefix phi[0..k],
/// m[0..k]. Used by the scheduler and, independently, by the verifier.
std::vector<ConditionInstance> step_conditions(const ConstructionCoords& coords,
                                               const TargetSequence& targets,
                                               const std::vector<std::size_t>& phi,
                                               const std::vector<std::int64_t>& m, int k,
                                               double margin_rel);

struct ScheduleOptions {
    std::int64_t m_cap = 900;
    std::size_t phi_cap = static_cast<std::size_t>(-1);
    double margin_rel = 1e-9;
};

/// Greedy induction: for each step the least admissible (phi, m) pair, where
/// admissible means every condition of the step passes strictly. Candidate
/// rows whose pivot-side conditions already fail at the smallest legal power
/// are skipped outright (those left sides never decrease in m).
Schedule build_schedule(const ConstructionCoords& coords, const TargetSequence& targets, int K,
                        const ScheduleOptions& opts);

struct ConstructedFamily {
    std::vector<DirectSumVec> z_tilde; // member i occupies block i
    std::vector<double> norms;
    std::vector<DirectSumVec> z; // normalized members (zero members stay zero)
    bool includes_e0 = false;

    std::size_t size() const { return z_tilde.size(); }
};

/// Truncated series family: member i collects the scheduled forward-shift
/// terms of block i, anchored at e_0 in sequence mode. Sequence-mode norms
/// land in [1, 3); finite-mode term norms stay below 2^{-j}.
ConstructedFamily assemble_family(const Schedule& schedule, const ConstructionCoords& coords,
                                  const TargetSequence& targets);

/// Entries 1/||z~_i|| of the diagonal intertwiner; requires every norm >= 1.
std::vector<double> diagonal_normalizer(const ConstructedFamily& family);

struct BuildOptions {
    int K = 8;
    std::uint64_t seed = 1;
    double margin_rel = 1e-9;
    std::int64_t m_cap = 900;
    std::size_t phi_cap = static_cast<std::size_t>(-1);
    // INT_MIN selects the default -(K + 8): early targets small enough that
    // the pivot-coupling conditions stay inactive over a finite sample.
    int target_scale_log2 = INT_MIN;
    SetOptions set;
};

struct CounterexampleBundle {
    BuildOptions config;
    Ambient ambient = Ambient::Sequence;
    BasisExtraction extraction;
    TargetSequence targets;
    Schedule schedule;
    ConstructedFamily family;
    std::vector<double> normalizer;
    OperatorSpec op;
    NonHypercyclicityCertificate certificate;
};

/// Full pipeline: coverability gate, basis extraction, targets, schedule,
/// family, operator and certificate. Refuses coverable input with Coverable.
CounterexampleBundle build_counterexample(const ScalarSet& set, int K, const BuildOptions& opts);

struct PhaseGoal {
    double angle = 0.0; // target of theta*m modulo 2*pi
    double delta = 0.1; // admitted circular distance
};

/// Scheduled single-block approximant for the V-profile shift: x is a finite
/// sum of forward-shifted targets with ||B^{m_k} x - y_k|| <= (k+1)/2^k.
/// Steps with a phase goal additionally pin theta*m_k near the goal angle.
struct HcVector {
    SparseSeq x;
    std::vector<std::int64_t> m;
    std::vector<ConditionInstance> conditions;
    std::vector<double> errors; // ||B^{m_k} x - y_k||, measured
    std::vector<double> bounds; // (k+1)/2^k
    std::vector<double> phase_residuals; // |theta*m_k - goal| mod 2pi, -1 when no goal
};

HcVector build_hypercyclic_vector(const std::vector<SparseSeq>& targets,
                                  const std::map<int, PhaseGoal>& phase_goals, double theta,
                                  std::int64_t m_cap, double margin_rel = 1e-9);

/// Circular representative of x in (-pi, pi].
double wrap_angle(double x);

} // namespace gammadyn
