#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gammadyn/construction.hpp"
#include "gammadyn/parallel.hpp"

namespace gammadyn {

struct CheckRow {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double limit = 0.0;
    std::string note;
};

/// Full condition re-verification: every schedule condition recomputed from
/// the bundle's raw vectors (stored margins are ignored) plus structural
/// checks that pin the schedule, coordinates, targets and family to their
/// sources. Tampering with any stored quantity trips at least one row.
struct ConditionReport {
    std::vector<ConditionInstance> instances;
    std::vector<CheckRow> structural;
    bool all_pass = false;
    std::string first_violation;
};

ConditionReport verify_conditions(const CounterexampleBundle& bundle,
                                  par::Exec exec = par::Exec::Parallel);

struct OrbitErrorRow {
    int k = 0;
    std::int64_t m = 0;
    double e = 0.0;      // measured ||T^{m_k}(sum_i lambda_i z~_i) - y_k||
    double b = 0.0;      // closed-form bound
    double margin = 0.0; // (b + slack - e) / (b + slack)
    bool pass = false;
};

struct OrbitErrorReport {
    std::vector<OrbitErrorRow> rows;
    double slack = 0.0; // truncation allowance 2^{-K}
    bool all_pass = false;
};

OrbitErrorReport measure_orbit_errors(const CounterexampleBundle& bundle,
                                      par::Exec exec = par::Exec::Parallel);

/// Closed-form orbit-error bound per step: finite mode l(k+1)/2^k; sequence
/// mode adds the pivot modulus and tail/2^{m_k-1} contributions of the
/// respective regime.
double orbit_error_bound(Mode mode, Regime regime, int blocks, int k, std::int64_t m_k,
                         double pivot_abs, double tail_l2);

/// True when theta/pi is indistinguishable from a rational with denominator
/// up to max_den at the given resolution (the phase orbit would be unusable).
bool theta_over_pi_rational(double theta, std::int64_t max_den = 1000000, double tol = 1e-9);

struct BfTargetRow {
    cplx a{0.0, 0.0};       // requested scalar-coordinate target
    int k = 0;              // schedule step hosting the target
    cplx gamma{0.0, 0.0};   // chosen sample scalar
    std::int64_t n = 0;     // power used (= m_k)
    double achieved = 0.0;  // distance to (a, y_k)
    double shift_err = 0.0;
    double phase_chord = 0.0;
    double phase_contrib = 0.0;
    double modulus_gap = 0.0;
    bool audit_ok = false;   // achieved <= shift + phase + modulus contributions
    bool within_eps = false;
};

struct BFDemoReport {
    double theta = 0.0;
    double lambda = 1.0;
    double eps = 0.0;
    int k0 = 0;
    std::vector<BfTargetRow> rows;
    std::vector<std::int64_t> schedule_m;
    std::vector<double> target_norms; // ||y_k|| of the hosted targets
    bool all_ok = false;
};

struct BfDemoConfig {
    double theta = 0.0;
    std::vector<cplx> gamma_sample;
    std::vector<cplx> a_targets;
    double eps = 0.1;
    double lambda = 1.0;
    int k0 = 12;
    std::int64_t m_cap = 900;
    double margin_rel = 1e-9;
};

/// Rotation-times-shift demonstration: builds the scheduled approximant x
/// for the V-profile shift with per-target scaled vectors and phase windows,
/// then hits each requested point (a, y_k) with gamma T^{m_k}(lambda, x).
BFDemoReport bf_counterexample_demo(const BfDemoConfig& cfg);

struct TransportReport {
    std::vector<int> perm;
    std::vector<double> original_errors;
    std::vector<double> transported_errors;
    double max_error_delta = 0.0;
    bool errors_equal = false;   // within 1e-12
    bool verdicts_equal = false; // per-instance pass flags aligned under the permutation
    bool pass = false;
};

/// Applies a tail-block permutation (an isometry commuting with the
/// operator) to every vector of the bundle. perm[0] must fix block 0.
CounterexampleBundle transport_bundle(const CounterexampleBundle& bundle,
                                      const std::vector<int>& perm);

TransportReport conjugacy_transport(const CounterexampleBundle& bundle,
                                    const std::vector<int>& perm,
                                    par::Exec exec = par::Exec::Parallel);

} // namespace gammadyn
