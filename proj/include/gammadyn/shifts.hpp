#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gammadyn/sparse_seq.hpp"

namespace gammadyn {

/// Piecewise-constant dyadic weight profiles. The backward profiles pair
/// with the forward profile carrying the reciprocal weights:
///   V  <-> NU, W1 <-> OMEGA1, W2 <-> OMEGA2,
/// so that the paired compositions are exact two-sided inverses.
enum class WeightProfile { V, NU, W1, OMEGA1, W2, OMEGA2 };

const char* profile_name(WeightProfile p);
WeightProfile profile_from_name(const std::string& name);
bool is_backward_profile(WeightProfile p);
WeightProfile inverse_profile(WeightProfile p);

/// log2 of the weight at index i (every weight is 1/2, 1 or 2).
int weight_log2(WeightProfile p, std::int64_t i);
double weight_at(WeightProfile p, std::int64_t i);

/// B_w e_j = w_j e_{j-1}. Requires a backward profile.
SparseSeq backward_apply(WeightProfile p, const SparseSeq& x);

/// F_v e_j = v_j e_{j+1}. Requires a forward profile.
SparseSeq forward_apply(WeightProfile p, const SparseSeq& x);

/// m-fold application via one exact power-of-two multiplier per coefficient.
SparseSeq power_apply(WeightProfile p, std::int64_t m, const SparseSeq& x);

/// Exponent of the weight product picked up by e_j under m applications.
std::int64_t power_log2_multiplier(WeightProfile p, std::int64_t m, std::int64_t j);

/// Direct sum of backward shifts: block 0 carries `block0`, every other
/// block carries V. `blocks` is the runtime truncation width. The optional
/// rotation angle marks the scalar-prefix variant used with BfPoint.
struct OperatorSpec {
    WeightProfile block0 = WeightProfile::V;
    int blocks = 1;
    std::optional<double> rotation_theta;
};

DirectSumVec apply_direct_sum(const OperatorSpec& op, const DirectSumVec& x);
DirectSumVec apply_direct_sum_power(const OperatorSpec& op, std::int64_t m, const DirectSumVec& x);

/// Point of the rotation-prefixed space: a scalar coordinate plus one
/// bilateral sequence. Applying the operator rotates the scalar by
/// e^{i theta} and shifts the sequence with the block-0 profile.
struct BfPoint {
    cplx scalar{0.0, 0.0};
    SparseSeq shift_part;
};

BfPoint bf_apply_power(const OperatorSpec& op, std::int64_t n, const BfPoint& p);

enum class NonHypVerdict { Expansive, PowerBounded, None };

const char* verdict_name(NonHypVerdict v);

/// Weight-inspection certificate with randomized norm spot checks.
/// Expansive: all block-0 weights >= 1, so no orbit norm ever decreases on
/// that factor. PowerBounded: all block-0 weights <= 1. Either rules out
/// dense orbits on the block-0 factor.
struct NonHypercyclicityCertificate {
    NonHypVerdict verdict = NonHypVerdict::None;
    int witness_block = 0;
    std::string evidence;
    int spot_checks = 0;
};

NonHypercyclicityCertificate certify_not_hypercyclic(const OperatorSpec& op,
                                                     std::uint64_t seed = 7,
                                                     int probes = 100);

} // namespace gammadyn
