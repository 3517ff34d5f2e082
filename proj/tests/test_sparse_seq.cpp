#include <doctest.h>

#include <cmath>

#include "gammadyn/rng.hpp"
#include "gammadyn/sparse_seq.hpp"

using namespace gammadyn;

namespace {

// random finitely supported vector with dyadic coefficients (exact doubles)
SparseSeq random_dyadic(Rng& rng, int max_support = 8, int index_range = 30, int grid = 10) {
    std::vector<SparseSeq::Entry> entries;
    const int support = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_support)));
    for (int s = 0; s < support; ++s) {
        const std::int64_t j =
            static_cast<std::int64_t>(rng.next_below(2 * index_range + 1)) - index_range;
        const auto num = [&] {
            return std::ldexp(static_cast<double>(static_cast<std::int64_t>(rng.next_below(4097)) - 2048),
                              -grid);
        };
        entries.emplace_back(j, cplx(num(), num()));
    }
    return SparseSeq::from_entries(std::move(entries));
}

} // namespace

TEST_CASE("norms of basis combinations") {
    CHECK(ss_norm(SparseSeq::basis(0)) == 1.0);
    const SparseSeq x = ss_add(SparseSeq::basis(0), SparseSeq::basis(3, cplx(0.0, 1.0)));
    CHECK(ss_norm(x) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ss_norm(SparseSeq::basis(-2, 0.75)) == 0.75);
}

TEST_CASE("inner products") {
    const SparseSeq e0 = SparseSeq::basis(0), e1 = SparseSeq::basis(1);
    CHECK(ss_inner(e0, e1) == cplx(0.0, 0.0));
    CHECK(ss_inner(e0, e0) == cplx(1.0, 0.0));
    const SparseSeq x = ss_add(ss_scale(2.0, e0), e1);
    CHECK(ss_inner(x, e1) == cplx(1.0, 0.0));
}

TEST_CASE("direct sum norms") {
    DirectSumVec v = DirectSumVec::from_blocks({{0, SparseSeq::basis(0)}, {1, SparseSeq::basis(0)}});
    CHECK(ds_norm(v) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ds_norm(DirectSumVec{}) == 0.0);
    DirectSumVec p = DirectSumVec::from_blocks(
        {{0, SparseSeq::basis(0, 3.0)}, {1, SparseSeq::basis(1, 4.0)}});
    CHECK(ds_norm(p) == 5.0);
}

TEST_CASE("add, scale, support bounds") {
    const SparseSeq e0 = SparseSeq::basis(0);
    CHECK(ss_add(e0, ss_scale(-1.0, e0)).is_zero());
    CHECK(ss_scale(2.0, SparseSeq::basis(5)) == SparseSeq::basis(5, 2.0));
    const SparseSeq x = ss_add(SparseSeq::basis(-3), SparseSeq::basis(7));
    CHECK(x.support_bounds() == std::pair<std::int64_t, std::int64_t>{-3, 7});
    CHECK_THROWS_AS((void)SparseSeq{}.support_bounds(), Error);
}

TEST_CASE("pythagoras across blocks on random dyadic input") {
    Rng rng(2024);
    for (int t = 0; t < 200; ++t) {
        std::vector<DirectSumVec::Block> blocks;
        double sum_sq = 0.0;
        const int nblocks = 1 + static_cast<int>(rng.next_below(5));
        for (int b = 0; b < nblocks; ++b) {
            SparseSeq s = random_dyadic(rng);
            sum_sq += ss_norm_sq(s);
            blocks.emplace_back(b, std::move(s));
        }
        const DirectSumVec v = DirectSumVec::from_blocks(std::move(blocks));
        CHECK(ds_norm_sq(v) == doctest::Approx(sum_sq).epsilon(1e-12));
    }
}

TEST_CASE("explicit zeros change nothing") {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        const SparseSeq x = random_dyadic(rng);
        auto entries = x.entries();
        entries.emplace_back(100 + t, cplx(0.0, 0.0));
        entries.emplace_back(-100 - t, cplx(0.0, 0.0));
        const SparseSeq y = SparseSeq::from_entries(std::move(entries));
        CHECK(x == y);
        CHECK(ss_norm(x) == ss_norm(y));
    }
}

TEST_CASE("inner product conjugate symmetry") {
    Rng rng(99);
    for (int t = 0; t < 100; ++t) {
        const SparseSeq x = random_dyadic(rng), y = random_dyadic(rng);
        const cplx a = ss_inner(x, y), b = ss_inner(y, x);
        CHECK(a.real() == doctest::Approx(b.real()).epsilon(1e-14));
        CHECK(a.imag() == doctest::Approx(-b.imag()).epsilon(1e-14));
        CHECK(ss_inner(x, x).real() == doctest::Approx(ss_norm_sq(x)).epsilon(1e-14));
    }
}

TEST_CASE("non-finite coefficients are rejected") {
    CHECK_THROWS_AS(SparseSeq::from_entries({{0, cplx(std::nan(""), 0.0)}}), Error);
    CHECK_THROWS_AS(ss_scale(cplx(1.0 / 0.0, 0.0), SparseSeq::basis(0)), Error);
}
