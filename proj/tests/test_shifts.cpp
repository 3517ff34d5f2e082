#include <doctest.h>

#include "gammadyn/rng.hpp"
#include "gammadyn/shifts.hpp"

using namespace gammadyn;

namespace {

SparseSeq random_dyadic(Rng& rng, int index_range = 20) {
    std::vector<SparseSeq::Entry> entries;
    const int support = 1 + static_cast<int>(rng.next_below(6));
    for (int s = 0; s < support; ++s) {
        const std::int64_t j =
            static_cast<std::int64_t>(rng.next_below(2 * index_range + 1)) - index_range;
        const auto num = [&] {
            return std::ldexp(static_cast<double>(static_cast<std::int64_t>(rng.next_below(513)) - 256),
                              -4);
        };
        entries.emplace_back(j, cplx(num(), num()));
    }
    return SparseSeq::from_entries(std::move(entries));
}

constexpr WeightProfile kBackward[] = {WeightProfile::V, WeightProfile::W1, WeightProfile::W2};

} // namespace

// The shift convention B_w e_j = w_j e_{j-1} is pinned here: it is the one
// under which the stated forward weights invert the backward shifts exactly.
TEST_CASE("shift convention on basis vectors") {
    CHECK(backward_apply(WeightProfile::V, SparseSeq::basis(1)) == SparseSeq::basis(0, 2.0));
    CHECK(backward_apply(WeightProfile::V, SparseSeq::basis(0)) == SparseSeq::basis(-1, 0.5));
    CHECK(forward_apply(WeightProfile::NU, SparseSeq::basis(0)) == SparseSeq::basis(1, 0.5));
    CHECK(forward_apply(WeightProfile::NU, SparseSeq::basis(-1)) == SparseSeq::basis(0, 2.0));
    CHECK(backward_apply(WeightProfile::W1, SparseSeq::basis(1)) == SparseSeq::basis(0, 2.0));
    CHECK(backward_apply(WeightProfile::W1, SparseSeq::basis(0)) == SparseSeq::basis(-1, 1.0));
    CHECK(backward_apply(WeightProfile::W2, SparseSeq::basis(1)) == SparseSeq::basis(0, 1.0));
    CHECK(forward_apply(WeightProfile::OMEGA1, SparseSeq::basis(0)) == SparseSeq::basis(1, 0.5));
    CHECK(forward_apply(WeightProfile::OMEGA2, SparseSeq::basis(-2)) == SparseSeq::basis(-1, 2.0));
    CHECK(backward_apply(WeightProfile::V, SparseSeq{}).is_zero());
}

TEST_CASE("paired profiles invert bitwise") {
    Rng rng(1);
    for (int t = 0; t < 300; ++t) {
        const SparseSeq x = random_dyadic(rng);
        for (WeightProfile b : kBackward) {
            const WeightProfile f = inverse_profile(b);
            CHECK(backward_apply(b, forward_apply(f, x)) == x);
            CHECK(forward_apply(f, backward_apply(b, x)) == x);
        }
    }
}

TEST_CASE("power equals iterated application up to 64") {
    Rng rng(2);
    for (int t = 0; t < 40; ++t) {
        const SparseSeq x = random_dyadic(rng);
        for (WeightProfile b : kBackward) {
            const WeightProfile f = inverse_profile(b);
            SparseSeq it_b = x, it_f = x;
            for (std::int64_t m = 0; m <= 64; ++m) {
                if (m == 0 || m == 1 || m == 7 || m == 33 || m == 64) {
                    CHECK(power_apply(b, m, x) == it_b);
                    CHECK(power_apply(f, m, x) == it_f);
                }
                it_b = backward_apply(b, it_b);
                it_f = forward_apply(f, it_f);
            }
        }
    }
}

TEST_CASE("closed-form powers on basis vectors") {
    for (std::int64_t m : {1, 2, 5, 17                 }) {
        CHECK(power_apply(WeightProfile::NU, m, SparseSeq::basis(0)) ==
              SparseSeq::basis(m, std::ldexp(1.0, static_cast<int>(-m))));
        CHECK(power_apply(WeightProfile::W1, m, SparseSeq::basis(m)) ==
              SparseSeq::basis(0, std::ldexp(1.0, static_cast<int>(m))));
    }
    Rng rng(3);
    const SparseSeq x = random_dyadic(rng);
    CHECK(power_apply(WeightProfile::V, 0, x) == x);
}

TEST_CASE("expansive and contractive profiles") {
    Rng rng(4);
    for (int t = 0; t < 1000; ++t) {
        const SparseSeq x = random_dyadic(rng);
        CHECK(ss_norm(backward_apply(WeightProfile::W1, x)) >= ss_norm(x));
        CHECK(ss_norm(backward_apply(WeightProfile::W2, x)) <= ss_norm(x));
    }
}

TEST_CASE("direct sum application is blockwise") {
    OperatorSpec op{WeightProfile::W1, 4, {}};
    const DirectSumVec x = DirectSumVec::single(0, SparseSeq::basis(1));
    CHECK(apply_direct_sum(op, x) == DirectSumVec::single(0, SparseSeq::basis(0, 2.0)));
    const DirectSumVec y = DirectSumVec::single(2, SparseSeq::basis(0));
    CHECK(apply_direct_sum(op, y) == DirectSumVec::single(2, SparseSeq::basis(-1, 0.5)));
    CHECK(apply_direct_sum(op, DirectSumVec{}).is_zero());

    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const SparseSeq s = random_dyadic(rng);
        const int block = static_cast<int>(rng.next_below(4));
        const DirectSumVec v = DirectSumVec::single(block, s);
        const WeightProfile p = block == 0 ? op.block0 : WeightProfile::V;
        CHECK(apply_direct_sum(op, v) == DirectSumVec::single(block, backward_apply(p, s)));
    }

    CHECK_THROWS_AS(apply_direct_sum(op, DirectSumVec::single(4, SparseSeq::basis(0))), Error);
}

TEST_CASE("non-hypercyclicity certificates by weight inspection") {
    CHECK(certify_not_hypercyclic({WeightProfile::W1, 3, {}}).verdict == NonHypVerdict::Expansive);
    CHECK(certify_not_hypercyclic({WeightProfile::W2, 3, {}}).verdict == NonHypVerdict::PowerBounded);
    CHECK(certify_not_hypercyclic({WeightProfile::V, 3, {}}).verdict == NonHypVerdict::None);
    const auto cert = certify_not_hypercyclic({WeightProfile::W1, 1, {}});
    CHECK(cert.witness_block == 0);
    CHECK(cert.spot_checks == 100);
}

TEST_CASE("rotation prefix application") {
    OperatorSpec op{WeightProfile::V, 1, 1.0};
    const BfPoint p{cplx(1.0, 0.0), SparseSeq::basis(1)};
    const BfPoint q = bf_apply_power(op, 2, p);
    CHECK(q.scalar.real() == doctest::Approx(std::cos(2.0)).epsilon(1e-15));
    CHECK(q.scalar.imag() == doctest::Approx(std::sin(2.0)).epsilon(1e-15));
    CHECK(q.shift_part == SparseSeq::basis(-1, 1.0)); // 2 * 1/2 across index 0
    CHECK_THROWS_AS(bf_apply_power({WeightProfile::V, 1, {}}, 1, p), Error);
}
