#include "doctest.h"

#include "icdof/separability.hpp"

#include <random>

using namespace icdof;

namespace {

ChannelMatrix from_strings(int K, const std::vector<std::vector<const char*>>& rows) {
    std::vector<ExactScalar> entries;
    for (const auto& row : rows) {
        for (const char* s : row) entries.push_back(parse_scalar(s));
    }
    return ChannelMatrix(K, std::move(entries));
}

ChannelMatrix all_ones(int K) {
    return ChannelMatrix(K, std::vector<ExactScalar>(K * K, ExactScalar(1)));
}

const std::uint64_t kWork = 1u << 22;

} // namespace

TEST_CASE("injectivity holds for an irrational factor over an integer range") {
    auto W = build_codebook(all_ones(3), 2, 1, kWork);
    REQUIRE(W.is_range());
    REQUIRE(W.cardinality() == 8); // {0..7}
    auto verdict = test_injectivity(W, ExactScalar::sqrt_of(2), kWork);
    CHECK_FALSE(verdict.violated());
}

TEST_CASE("unit factor collides immediately") {
    auto W = build_codebook(all_ones(3), 2, 1, kWork);
    auto verdict = test_injectivity(W, ExactScalar(1), kWork);
    REQUIRE(verdict.violated());
    const auto& c = *verdict.collision;
    CHECK(verify_collision(c, W, ExactScalar(1)));
    // Both pairs map to the same image; the witness uses {0,1} values.
    CHECK(c.w1 + c.w2 == c.w1_alt + c.w2_alt);
}

TEST_CASE("rational factor 3/2 collides via (0,2) and (3,0)") {
    auto W = build_codebook(all_ones(3), 4, 0, kWork); // {0,1,2,3}
    ExactScalar h(Rational(3, 2));
    auto verdict = test_injectivity(W, h, kWork);
    REQUIRE(verdict.violated());
    const auto& c = *verdict.collision;
    CHECK(verify_collision(c, W, h));
    CHECK(c.w1 + h * c.w2 == c.w1_alt + h * c.w2_alt);

    // Out of reach when the range cannot hold the denominator image.
    auto tiny = build_codebook(all_ones(3), 2, 0, kWork); // {0,1}
    CHECK_FALSE(test_injectivity(tiny, h, kWork).violated());
}

TEST_CASE("irrational diagonals can still collide through radical off-diagonals") {
    // h_12 = sqrt(2) puts sqrt(2) into W, so h_ii = sqrt(2) maps
    // (0, sqrt2) and (2, 0) to the same image.
    auto H = from_strings(3, {{"sqrt(2)", "sqrt(2)", "1"}, {"1", "sqrt(2)", "1"}, {"1", "1", "sqrt(2)"}});
    auto W = build_codebook(H, 3, 1, kWork);
    REQUIRE_FALSE(W.is_range());
    auto verdict = test_injectivity(W, ExactScalar::sqrt_of(2), kWork);
    REQUIRE(verdict.violated());
    CHECK(verify_collision(*verdict.collision, W, ExactScalar::sqrt_of(2)));
}

TEST_CASE("pair scan and difference-set routes agree") {
    std::mt19937_64 rng(321);
    std::uniform_int_distribution<int> pick(0, 3);
    const char* pool[] = {"1", "sqrt(2)", "1 + sqrt(2)", "2"};
    for (int it = 0; it < 20; ++it) {
        std::vector<ExactScalar> entries;
        for (int e = 0; e < 9; ++e) entries.push_back(parse_scalar(pool[pick(rng)]));
        ChannelMatrix H(3, std::move(entries));
        auto W = build_codebook(H, 2, 1, kWork);
        if (W.is_range()) continue;
        std::uint64_t n = W.cardinality().convert_to<std::uint64_t>();
        for (int u = 0; u < 3; ++u) {
            auto direct = test_injectivity(W, H.at(u, u), n * n + 1); // pair scan
            auto via_diff = test_injectivity(W, H.at(u, u), n * n / 2); // difference route
            CHECK(direct.violated() == via_diff.violated());
            if (direct.violated()) {
                CHECK(verify_collision(*direct.collision, W, H.at(u, u)));
                CHECK(verify_collision(*via_diff.collision, W, H.at(u, u)));
            }
        }
    }
}

TEST_CASE("polynomial witness search on worked examples") {
    // All-ones: h_ii = 1 admits P = Q = 1.
    auto ones = all_ones(3);
    auto w = search_polynomial_witness(ones, 0, 1, 1, kWork);
    REQUIRE(w.has_value());
    CHECK(verify_polynomial_witness(*w, ones, 0));

    // sqrt(6) = sqrt(2)*sqrt(3): the product monomial witnesses the ratio.
    auto H = from_strings(3, {{"sqrt(6)", "sqrt(2)", "sqrt(3)"}, {"1", "sqrt(2)", "1"}, {"1", "1", "sqrt(3)"}});
    auto w2 = search_polynomial_witness(H, 0, 2, 1, kWork);
    REQUIRE(w2.has_value());
    CHECK(verify_polynomial_witness(*w2, H, 0));
    CHECK(w2->q.degree() <= 2);
    CHECK(w2->p.degree() <= 2);

    // Irrational diagonal over 0/1 off-diagonals: no witness in any box.
    auto D = from_strings(3, {{"sqrt(2)", "1", "1"}, {"1", "sqrt(3)", "0"}, {"1", "1", "sqrt(5)"}});
    for (int u = 0; u < 3; ++u) {
        CHECK_FALSE(search_polynomial_witness(D, u, 3, 8, kWork).has_value());
    }
}

TEST_CASE("collision and polynomial witnesses convert into each other") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> pick(0, 3);
    const char* pool[] = {"1", "sqrt(2)", "1 - sqrt(2)", "1/2"};
    int checked = 0;
    for (int it = 0; it < 30; ++it) {
        std::vector<ExactScalar> entries;
        for (int e = 0; e < 9; ++e) entries.push_back(parse_scalar(pool[pick(rng)]));
        ChannelMatrix H(3, std::move(entries));
        if (!validate(H).empty()) continue;
        for (std::uint64_t N : {2ull, 3ull}) {
            for (int d = 0; d <= 1; ++d) {
                auto W = build_codebook(H, N, d, kWork);
                for (int u = 0; u < 3; ++u) {
                    auto verdict = test_injectivity(W, H.at(u, u), kWork);
                    auto poly = search_polynomial_witness(H, u, d, N - 1, kWork);
                    CHECK(verdict.violated() == poly.has_value());
                    if (verdict.violated()) {
                        ++checked;
                        auto monomials = enumerate_monomials(3, d);
                        auto as_poly = collision_to_polynomial(*verdict.collision, monomials);
                        CHECK(verify_polynomial_witness(as_poly, H, u));
                        auto as_collision = polynomial_to_collision(*poly, H, N, d);
                        CHECK(verify_collision(as_collision, W, H.at(u, u)));
                    }
                }
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("rational diagonals always collide once the range is large enough") {
    auto H = from_strings(3, {{"2/3", "1", "1"}, {"1", "3", "1"}, {"1", "1", "sqrt(2)"}});
    auto W = build_codebook(H, 4, 1, kWork); // {0..3} subset present
    CHECK(test_injectivity(W, H.at(0, 0), kWork).violated());
    CHECK(test_injectivity(W, H.at(1, 1), kWork).violated());
    CHECK_FALSE(test_injectivity(W, H.at(2, 2), kWork).violated());
}

TEST_CASE("cross-ratio obstruction scan") {
    auto obs = rational_ratio_obstruction(all_ones(3));
    REQUIRE(obs.has_value());
    CHECK(obs->i == 0);
    CHECK(obs->j == 1);
    CHECK(obs->k == 2);
    CHECK(obs->ratio == 1);

    auto D = from_strings(3, {{"sqrt(2)", "1", "1"}, {"1", "sqrt(3)", "1"}, {"1", "1", "sqrt(5)"}});
    CHECK_FALSE(rational_ratio_obstruction(D).has_value());

    // Present implies present for every scaled version.
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> num(1, 4);
    for (int it = 0; it < 20; ++it) {
        ScalingPair s;
        for (int u = 0; u < 3; ++u) {
            s.row.push_back(ExactScalar(Rational(num(rng), num(rng))) *
                            (it % 2 ? ExactScalar::sqrt_of(2) : ExactScalar(1)));
            s.col.push_back(ExactScalar(num(rng)));
        }
        auto scaled_obs = rational_ratio_obstruction(scale(all_ones(3), s));
        REQUIRE(scaled_obs.has_value());
        CHECK(scaled_obs->ratio == scaled_obs->ratio); // well-formed
    }
}

TEST_CASE("rational quad detection") {
    // One-missing normal form with rational g1: the designated quad is
    // (1,3,2) in 1-based labels.
    auto H = from_strings(3, {{"2", "0", "1"}, {"1", "sqrt(3)", "1"}, {"1", "1", "sqrt(5)"}});
    auto quad = rational_quad_obstruction(H);
    REQUIRE(quad.has_value());
    CHECK(*quad == std::array<int, 3>{0, 2, 1});

    auto D = from_strings(3, {{"sqrt(2)", "1", "1"}, {"1", "sqrt(3)", "1"}, {"1", "1", "sqrt(5)"}});
    CHECK_FALSE(rational_quad_obstruction(D).has_value());

    CHECK(*rational_quad_obstruction(all_ones(3)) == std::array<int, 3>{0, 1, 2});
}

TEST_CASE("classify: reciprocal pair always yields a scaled witness") {
    // Generic irrational entries.
    auto H = from_strings(3, {{"sqrt(2)", "0", "1 + sqrt(2)"},
                              {"0", "sqrt(3)", "2"},
                              {"1 - sqrt(2)", "3/2", "sqrt(5)"}});
    auto res = classify_3user(H);
    CHECK(res.topology == Topology3::reciprocal_pair);
    REQUIRE(res.satisfiable);
    REQUIRE(res.witness_matrix.has_value());
    for (int u = 0; u < 3; ++u) CHECK_FALSE(res.witness_matrix->at(u, u).is_rational());
    CHECK(res.witness_search_clear);
    // Factors replay through scale() on the relabeled matrix.
    auto relabeled = H.relabeled(res.relabel);
    CHECK(scale(relabeled, *res.witness_factors).entries() == res.witness_matrix->entries());
    // Rational diagonals force the deeper fallbacks but still succeed.
    auto H2 = from_strings(3, {{"4", "0", "1"}, {"0", "9/2", "1"}, {"1", "1", "5"}});
    auto res2 = classify_3user(H2);
    CHECK(res2.topology == Topology3::reciprocal_pair);
    CHECK(res2.satisfiable);
    // Rational g2 with irrational sqrt(3)-multiple g3 lands on the middle candidate.
    auto H3 = from_strings(3, {{"4", "0", "1"}, {"0", "9/2", "1"}, {"1", "1", "sqrt(3)"}});
    auto res3 = classify_3user(H3);
    CHECK(res3.satisfiable);
}

TEST_CASE("classify: cyclic topology always satisfiable") {
    auto H = from_strings(3, {{"7", "2", "0"}, {"0", "3/2", "1"}, {"5", "0", "11"}});
    auto res = classify_3user(H);
    CHECK(res.topology == Topology3::cyclic);
    CHECK(res.satisfiable);
    for (int u = 0; u < 3; ++u) CHECK_FALSE(res.witness_matrix->at(u, u).is_rational());
}

TEST_CASE("classify: one missing link branches on the diagonal") {
    // All diagonals irrational after normalization: satisfiable.
    auto good = from_strings(3, {{"sqrt(2)", "0", "1"}, {"1", "sqrt(3)", "1"}, {"1", "1", "sqrt(5)"}});
    auto res = classify_3user(good);
    CHECK(res.topology == Topology3::one_missing);
    CHECK(res.satisfiable);

    // Rational g1 after normalization: obstruction with quad (1,3,2).
    auto bad = from_strings(3, {{"2", "0", "1"}, {"1", "sqrt(3)", "1"}, {"1", "1", "sqrt(5)"}});
    auto res2 = classify_3user(bad);
    CHECK(res2.topology == Topology3::one_missing);
    REQUIRE_FALSE(res2.satisfiable);
    CHECK(*res2.obstruction_triple_canonical == std::array<int, 3>{1, 3, 2});
    CHECK(*res2.obstruction_triple == std::array<int, 3>{1, 3, 2});
    CHECK(rational_quad_obstruction(*res2.obstruction_matrix).has_value());
}

TEST_CASE("classify maps relabeled topologies back to original users") {
    // The one-missing zero at (3,2) instead of (1,2): relabeling moves it
    // to the canonical spot, and the obstruction triple maps back.
    auto H = from_strings(3, {{"sqrt(3)", "1", "1"}, {"1", "sqrt(5)", "1"}, {"1", "0", "2"}});
    auto res = classify_3user(H);
    CHECK(res.topology == Topology3::one_missing);
    REQUIRE_FALSE(res.satisfiable);
    // Canonical user 1 is original user 3 (index relabel[0] == 2).
    CHECK(res.relabel[0] == 2);
    REQUIRE(res.obstruction_triple.has_value());
    CHECK((*res.obstruction_triple)[0] == 3); // g of original user 3 went rational
    // The quad predicate holds on the obstruction matrix in canonical labels.
    auto t = *res.obstruction_triple_canonical;
    const auto& M = *res.obstruction_matrix;
    int i = t[0] - 1, j = t[1] - 1, k = t[2] - 1;
    for (const auto& e : {M.at(i, j), M.at(i, i), M.at(k, j), M.at(k, i)}) {
        auto r = e.rational_value();
        REQUIRE(r.has_value());
        CHECK(*r != 0);
    }
}

TEST_CASE("classify covers the two-zero and three-zero patterns") {
    // Row pair with rational g2: obstructed via (2,1,3).
    auto row = from_strings(3, {{"sqrt(2)", "0", "0"}, {"1", "4", "1"}, {"1", "1", "sqrt(5)"}});
    auto r1 = classify_3user(row);
    CHECK(r1.topology == Topology3::row_pair);
    REQUIRE_FALSE(r1.satisfiable);
    CHECK(*r1.obstruction_triple_canonical == std::array<int, 3>{2, 1, 3});

    // Chain pair, rational g3: rescued by the extra scaling.
    auto chain = from_strings(3, {{"sqrt(2)", "0", "1"}, {"1", "sqrt(3)", "0"}, {"1", "1", "7"}});
    auto r2 = classify_3user(chain);
    CHECK(r2.topology == Topology3::chain_pair);
    CHECK(r2.satisfiable);

    // Skew zeros (1,2) and (3,1) are the same chain topology after relabeling.
    auto skew = from_strings(3, {{"sqrt(2)", "0", "1"}, {"1", "sqrt(3)", "1"}, {"0", "1", "sqrt(5)"}});
    auto r3 = classify_3user(skew);
    CHECK(r3.topology == Topology3::chain_pair);
    CHECK(r3.satisfiable);

    // Column pair with rational g2: obstructed via (2,3,1).
    auto col = from_strings(3, {{"sqrt(2)", "1", "1"}, {"0", "6", "1"}, {"0", "1", "sqrt(5)"}});
    auto r4 = classify_3user(col);
    CHECK(r4.topology == Topology3::column_pair);
    REQUIRE_FALSE(r4.satisfiable);
    CHECK(*r4.obstruction_triple_canonical == std::array<int, 3>{2, 3, 1});

    // Cyclic and triangular three-zero patterns.
    auto tri = from_strings(3, {{"sqrt(2)", "0", "0"}, {"1", "5/3", "0"}, {"1", "1", "sqrt(2)"}});
    auto r5 = classify_3user(tri);
    CHECK(r5.topology == Topology3::triangular);
    REQUIRE_FALSE(r5.satisfiable);
    CHECK(*r5.obstruction_triple_canonical == std::array<int, 3>{2, 1, 3});

    // More than three zeros reduce to the reciprocal pair.
    auto sparse = from_strings(3, {{"sqrt(2)", "0", "0"}, {"0", "sqrt(3)", "0"}, {"1", "1", "sqrt(5)"}});
    auto r6 = classify_3user(sparse);
    CHECK(r6.topology == Topology3::reciprocal_pair);
    CHECK(r6.satisfiable);
}

TEST_CASE("classify rejects fully connected and invalid input") {
    CHECK_THROWS_AS(classify_3user(all_ones(3)), std::domain_error);
    auto bad = from_strings(3, {{"0", "0", "1"}, {"1", "1", "1"}, {"1", "1", "1"}});
    CHECK_THROWS_AS(classify_3user(bad), std::invalid_argument);
    CHECK_THROWS_AS(classify_3user(all_ones(4)), std::invalid_argument);
}
