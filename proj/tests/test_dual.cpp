#include <catch2/catch.hpp>

#include "fqdescent/dual.hpp"
#include "fqdescent/instancegen.hpp"
#include "fqdescent/lang_report.hpp"

using namespace fqdescent;

TEST_CASE("dual number arithmetic") {
    Field f4 = Field::get(2, 1, 2);
    FieldElement g = f4.generator();
    DualElement a{g, f4.one()};
    DualElement b{f4.one(), g};
    // (g + eps)(1 + g eps) = g + (g^2 + 1) eps = g + g eps
    DualElement prod = a * b;
    REQUIRE(prod.a == g);
    REQUIRE(prod.b == g);
    // units and inverses
    REQUIRE(a.is_unit());
    DualElement inv = a.inverse();
    DualElement one = a * inv;
    REQUIRE(one.a == f4.one());
    REQUIRE(one.b.is_zero());
    DualElement eps{f4.zero(), f4.one()};
    REQUIRE_FALSE(eps.is_unit());
    // frobenius fixes eps
    DualElement fr = a.frobenius(1);
    REQUIRE(fr.a == g + f4.one());
    REQUIRE(fr.b == f4.one());
}

TEST_CASE("dual matrix inverse") {
    Field f4 = Field::get(2, 1, 2);
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        DualMatrix m(instancegen::random_invertible(rng, f4, 2), instancegen::random_matrix(rng, f4, 2, 2));
        REQUIRE(m.is_invertible());
        REQUIRE(m * m.inverse() == DualMatrix::identity(f4, 2));
    }
}

TEST_CASE("dual lang solutions lift through the square-zero ideal") {
    Field f4 = Field::get(2, 1, 2);
    SECTION("every unit of F_4[eps] is hit") {
        Rng rng(0);
        int hit = 0;
        for (std::uint32_t ac = 1; ac < 4; ++ac)
            for (std::uint32_t bc = 0; bc < 4; ++bc) {
                MatrixF a0(f4, 1, 1), a1(f4, 1, 1);
                a0.at(0, 0) = f4.from_coords({ac & 1, (ac >> 1) & 1});
                a1.at(0, 0) = f4.from_coords({bc & 1, (bc >> 1) & 1});
                DualLangSolution sol = lang_solve_dual(DualMatrix(a0, a1), 64);
                DualMatrix target(a0.map_embed(sol.embedding), a1.map_embed(sol.embedding));
                REQUIRE(sol.g.inverse() * sol.g.frobenius_entrywise(1) == target);
                ++hit;
            }
        REQUIRE(hit == 12);
    }
    SECTION("2x2 dual targets over F_4") {
        Rng rng(17);
        for (int t = 0; t < 15; ++t) {
            DualMatrix a(instancegen::random_invertible(rng, f4, 2), instancegen::random_matrix(rng, f4, 2, 2));
            DualLangSolution sol = lang_solve_dual(a, 256);
            REQUIRE(sol.g.inverse() * sol.g.frobenius_entrywise(1) == a.map_embed(sol.embedding));
        }
    }
    SECTION("nilpotent-only part needs the reduced solution too") {
        MatrixF zero1(f4, 1, 1);
        DualMatrix bad(zero1, MatrixF::identity(f4, 1));  // eps alone is not a unit
        REQUIRE_THROWS_AS(lang_solve_dual(bad), NotInvertibleError);
    }
}

TEST_CASE("dual beta report over F_4") {
    BetaReport r = beta_surjectivity_report(Field::get(2, 1, 2), 1, BetaRing::dual_numbers, 64);
    REQUIRE(r.total_targets == 12);
    REQUIRE(r.all_hit);
    REQUIRE(r.e_histogram.at(1) == 6);
    REQUIRE(r.e_histogram.at(2) == 6);
}
