#include <doctest.h>

#include "gammadyn/rng.hpp"
#include "gammadyn/serialize.hpp"

using namespace gammadyn;

TEST_CASE("sparse and direct-sum round trips preserve values bitwise") {
    Rng rng(55);
    for (int t = 0; t < 50; ++t) {
        std::vector<SparseSeq::Entry> entries;
        const int support = 1 + static_cast<int>(rng.next_below(6));
        for (int s = 0; s < support; ++s)
            entries.emplace_back(static_cast<std::int64_t>(rng.next_below(41)) - 20,
                                 cplx(rng.next_gauss(), rng.next_gauss()));
        const SparseSeq x = SparseSeq::from_entries(std::move(entries));
        CHECK(decode_sparse_seq(encode(x)) == x);

        const DirectSumVec v = DirectSumVec::from_blocks(
            {{0, x}, {static_cast<int>(1 + rng.next_below(5)), SparseSeq::basis(2, rng.next_gauss())}});
        CHECK(decode_direct_sum(encode(v)) == v);
    }
}

TEST_CASE("sparse serialization is sorted triples") {
    const SparseSeq x =
        SparseSeq::from_entries({{5, cplx(1, 2)}, {-3, cplx(0.5, 0)}, {0, cplx(0, -1)}});
    const json j = encode(x);
    REQUIRE(j.size() == 3);
    CHECK(j[0][0] == -3);
    CHECK(j[1][0] == 0);
    CHECK(j[2][0] == 5);
}

TEST_CASE("scalar set and operator round trips") {
    ScalarSet s;
    s.ambient = Ambient::Sequence;
    s.vectors = {{cplx(1, 0), cplx(0, 0.5)}, {cplx(0, 0), cplx(2, -1)}};
    s.asymptotics = {AsymKind::ModulusToInfinity, 0};
    const ScalarSet back = decode_scalar_set(encode(s));
    CHECK(back.ambient == s.ambient);
    CHECK(back.vectors == s.vectors);
    CHECK(back.asymptotics.kind == s.asymptotics.kind);

    OperatorSpec op{WeightProfile::W2, 7, 0.25};
    const OperatorSpec op2 = decode_operator_spec(encode(op));
    CHECK(op2.block0 == op.block0);
    CHECK(op2.blocks == op.blocks);
    CHECK(op2.rotation_theta == op.rotation_theta);
}

TEST_CASE("bundle JSON round trip is exact") {
    ScalarSet set;
    set.ambient = Ambient::Sequence;
    set.asymptotics = {AsymKind::DirectionsAccumulate, -1};
    for (int n = 1; n <= 48; ++n) {
        CVec x(49, cplx(0.0, 0.0));
        x[0] = 1.0;
        x[static_cast<std::size_t>(n)] = 1.0 / n;
        set.vectors.push_back(std::move(x));
    }
    BuildOptions opts;
    opts.K = 3;
    const CounterexampleBundle bundle = build_counterexample(set, opts.K, opts);
    const json j = encode(bundle);
    const CounterexampleBundle back = decode_bundle(j);
    CHECK(encode(back).dump() == j.dump());
}

TEST_CASE("malformed inputs are flagged") {
    CHECK_THROWS_AS(decode_scalar_set(json::object()), Error);
    CHECK_THROWS_AS(decode_sparse_seq(json{{"not", "an array"}}), Error);
    CHECK_THROWS_AS(decode_bundle(json{{"format", "something-else"}}), Error);
    CHECK_THROWS_AS(read_json_file("/nonexistent/path.json"), Error);
}

TEST_CASE("finite sets reject vectors beyond the declared dimension") {
    json j{{"ambient", "finite"},
           {"dim", 1},
           {"vectors", json::array({json::array({json::array({1.0, 0.0}),
                                                 json::array({2.0, 0.0})})})}};
    CHECK_THROWS_AS(decode_scalar_set(j), Error);
    j["dim"] = 0; // absent/zero: the dimension is inferred instead
    CHECK(decode_scalar_set(j).dim == 2);
}
