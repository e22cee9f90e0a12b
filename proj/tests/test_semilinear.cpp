#include <catch2/catch.hpp>

#include "fqdescent/instancegen.hpp"
#include "fqdescent/lang_report.hpp"
#include "fqdescent/semilinear.hpp"
#include "oracles.hpp"

using namespace fqdescent;

namespace {
SemilinearEndo scalar_endo(const Field& f, FieldElement c) {
    MatrixF m(f, 1, 1);
    m.at(0, 0) = std::move(c);
    return SemilinearEndo(std::move(m));
}
}  // namespace

TEST_CASE("fixed spaces of scalar twists") {
    Field f4 = Field::get(2, 1, 2);
    FieldElement g = f4.generator();
    SECTION("sigma = phi has the prime field as fixed space") {
        FixedSpace fs = fixed_space(scalar_endo(f4, f4.one()));
        REQUIRE(fs.dim() == 1);
        REQUIRE(fs.basis[0][0] == f4.one());
    }
    SECTION("sigma = g phi fixes g+1") {
        FixedSpace fs = fixed_space(scalar_endo(f4, g));
        REQUIRE(fs.dim() == 1);
        REQUIRE(fs.basis[0][0] == g + f4.one());
        // check: g (g+1)^2 = g+1
        REQUIRE(g * (g + f4.one()) * (g + f4.one()) == g + f4.one());
    }
    SECTION("a linear eigenvalue different from 1 has no fixed vectors") {
        Field f3 = Field::get(3, 1, 1);
        FixedSpace fs = fixed_space(scalar_endo(f3, f3.from_prime_scalar(2)));
        REQUIRE(fs.dim() == 0);
    }
}

TEST_CASE("fixed space dimension matches full enumeration") {
    Rng rng(55);
    for (Field f : {Field::get(2, 1, 2), Field::get(3, 1, 2), Field::get(2, 1, 3)}) {
        for (int t = 0; t < 20; ++t) {
            std::size_t n = 1 + rng.below(2);
            SemilinearEndo s = instancegen::random_bounded_endo(rng, f, n, 64);
            auto count = oracles::fixed_vector_count(s);
            REQUIRE(oracles::fq_dim_from_count(count, f.q()) == fixed_space(s).dim());
        }
    }
}

TEST_CASE("splitting degree") {
    SECTION("identity splits immediately") {
        Field f4 = Field::get(2, 1, 2);
        REQUIRE(splitting_degree(SemilinearEndo(MatrixF::identity(f4, 2))) == 1);
    }
    SECTION("2 phi over F_3 splits at e = 2 where i is fixed") {
        Field f3 = Field::get(3, 1, 1);
        SemilinearEndo s = scalar_endo(f3, f3.from_prime_scalar(2));
        REQUIRE(splitting_degree(s) == 2);
        ExtendedEndo ext = extend_scalars(s, 2);
        FixedSpace fs = fixed_space(ext.endo);
        REQUIRE(fs.dim() == 1);
        Field f9 = ext.endo.field();
        REQUIRE(fs.basis[0][0] == f9.generator());  // i with i^2 = 2
    }
    SECTION("order formula agrees with the incremental scan") {
        Rng rng(77);
        auto fields = instancegen::fields_with_order_at_most(9);
        for (int t = 0; t < 40; ++t) {
            const Field& f = fields[rng.below(fields.size())];
            std::size_t n = 1 + rng.below(2);
            SemilinearEndo s = instancegen::random_bounded_endo(rng, f, n, 64);
            std::uint32_t e = splitting_degree(s, 64);
            for (std::uint32_t cand = 1; cand < e; ++cand)
                REQUIRE(fixed_space(extend_scalars(s, cand, 64).endo).dim() < n);
            REQUIRE(fixed_space(extend_scalars(s, e, 64).endo).dim() == n);
        }
    }
}

TEST_CASE("extend_scalars keeps old fixed vectors fixed") {
    Rng rng(88);
    Field f4 = Field::get(2, 1, 2);
    for (int t = 0; t < 20; ++t) {
        SemilinearEndo s = instancegen::random_bounded_endo(rng, f4, 2, 64);
        FixedSpace fs = fixed_space(s);
        ExtendedEndo ext = extend_scalars(s, 2, 64);
        for (const auto& v : fs.basis) {
            std::vector<FieldElement> w;
            for (const auto& x : v) w.push_back(ext.embedding.apply(x));
            REQUIRE(ext.endo.apply(w) == w);
        }
    }
}

TEST_CASE("full descent certificates") {
    SECTION("sigma = phi on F_4") {
        Field f4 = Field::get(2, 1, 2);
        VectorSpaceDescent d = descend_vector_space(scalar_endo(f4, f4.one()));
        REQUIRE(d.extension_degree == 1);
        REQUIRE(d.certificate.at(0, 0) == f4.one());
    }
    SECTION("sigma = g phi on F_4") {
        Field f4 = Field::get(2, 1, 2);
        FieldElement g = f4.generator();
        VectorSpaceDescent d = descend_vector_space(scalar_endo(f4, g));
        REQUIRE(d.extension_degree == 1);
        REQUIRE(d.certificate.at(0, 0) == g + f4.one());
    }
    SECTION("sigma = 2 phi on F_3 descends over F_9 with certificate i") {
        Field f3 = Field::get(3, 1, 1);
        VectorSpaceDescent d = descend_vector_space(scalar_endo(f3, f3.from_prime_scalar(2)));
        REQUIRE(d.extension_degree == 2);
        REQUIRE(d.certificate.at(0, 0) == d.extended_field.generator());
    }
    SECTION("conjugating by the certificate yields the standard frobenius") {
        Rng rng(99);
        Field f8 = Field::get(2, 1, 3);
        for (int t = 0; t < 10; ++t) {
            SemilinearEndo s = instancegen::random_bounded_endo(rng, f8, 2, 64);
            VectorSpaceDescent d = descend_vector_space(s, 64);
            MatrixF a_ext = s.matrix().map_embed(d.embedding);
            // G^{-1} A phi(G) = identity
            REQUIRE(inverse(d.certificate) * a_ext * d.certificate.frobenius_entrywise(1) ==
                    MatrixF::identity(d.extended_field, 2));
        }
    }
}

TEST_CASE("fixed basis vectors stay independent over the big field") {
    // descent injectivity: an F_q-basis of the fixed space has full rank as a
    // matrix over F_{q^m}
    Rng rng(321);
    auto fields = instancegen::fields_with_order_at_most(9);
    for (int t = 0; t < 40; ++t) {
        const Field& f = fields[rng.below(fields.size())];
        std::size_t n = 1 + rng.below(3);
        SemilinearEndo s = instancegen::random_bounded_endo(rng, f, n, 64);
        FixedSpace fs = fixed_space(s);
        if (fs.dim() == 0) continue;
        MatrixF m(f, n, fs.dim());
        for (std::size_t j = 0; j < fs.dim(); ++j)
            for (std::size_t i = 0; i < n; ++i) m.at(i, j) = fs.basis[j][i];
        REQUIRE(rank(m) == fs.dim());
    }
}

TEST_CASE("fixed spaces add over direct sums") {
    Rng rng(111);
    Field f4 = Field::get(2, 1, 2);
    for (int t = 0; t < 15; ++t) {
        SemilinearEndo a = instancegen::random_bounded_endo(rng, f4, 1 + rng.below(2), 64);
        SemilinearEndo b = instancegen::random_bounded_endo(rng, f4, 1 + rng.below(2), 64);
        std::size_t na = a.dim(), nb = b.dim();
        MatrixF sum(f4, na + nb, na + nb);
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < na; ++j) sum.at(i, j) = a.matrix().at(i, j);
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < nb; ++j) sum.at(na + i, na + j) = b.matrix().at(i, j);
        REQUIRE(fixed_space(SemilinearEndo(sum)).dim() == fixed_space(a).dim() + fixed_space(b).dim());
    }
}

TEST_CASE("degenerate dimension zero") {
    Field f4 = Field::get(2, 1, 2);
    SemilinearEndo s(MatrixF(f4, 0, 0));
    REQUIRE(fixed_space(s).dim() == 0);
    REQUIRE(splitting_degree(s) == 1);
    LangSolution sol = lang_solve(MatrixF(f4, 0, 0));
    REQUIRE(sol.extension_degree == 1);
}

TEST_CASE("twist preconditions") {
    Field f4 = Field::get(2, 1, 2);
    SemilinearEndo s(MatrixF::identity(f4, 1), 2);
    REQUIRE_THROWS_AS(fixed_space(s), std::invalid_argument);
    REQUIRE_THROWS_AS(splitting_degree(s), std::invalid_argument);
}

TEST_CASE("lang equation") {
    SECTION("identity target") {
        Field f4 = Field::get(2, 1, 2);
        LangSolution sol = lang_solve(MatrixF::identity(f4, 2));
        REQUIRE(sol.extension_degree == 1);
        REQUIRE(inverse(sol.g) * sol.g.frobenius_entrywise(1) == MatrixF::identity(sol.extended_field, 2));
    }
    SECTION("target 2 over F_3 needs F_9") {
        Field f3 = Field::get(3, 1, 1);
        MatrixF a(f3, 1, 1);
        a.at(0, 0) = f3.from_prime_scalar(2);
        LangSolution sol = lang_solve(a);
        REQUIRE(sol.extension_degree == 2);
        REQUIRE(sol.g.at(0, 0) == sol.extended_field.generator());
    }
    SECTION("random GL_2(F_4) targets solve exactly") {
        Field f4 = Field::get(2, 1, 2);
        Rng rng(123);
        for (int t = 0; t < 100; ++t) {
            MatrixF a = instancegen::random_invertible(rng, f4, 2);
            LangSolution sol = lang_solve(a, 256);
            REQUIRE(inverse(sol.g) * sol.g.frobenius_entrywise(1) == a.map_embed(sol.embedding));
        }
    }
    SECTION("singular targets are rejected") {
        Field f4 = Field::get(2, 1, 2);
        REQUIRE_THROWS_AS(lang_solve(MatrixF(f4, 2, 2)), NotInvertibleError);
    }
}

TEST_CASE("beta surjectivity reports") {
    SECTION("GL_1(F_2) is trivial") {
        BetaReport r = beta_surjectivity_report(Field::get(2, 1, 1), 1, BetaRing::field, 64);
        REQUIRE(r.total_targets == 1);
        REQUIRE(r.all_hit);
        REQUIRE(r.e_histogram.at(1) == 1);
    }
    SECTION("GL_1(F_3): target 2 needs e = 2") {
        BetaReport r = beta_surjectivity_report(Field::get(3, 1, 1), 1, BetaRing::field, 64);
        REQUIRE(r.total_targets == 2);
        REQUIRE(r.e_histogram.at(2) == 1);
    }
    SECTION("mu mode over F_9") {
        BetaReport r = beta_surjectivity_report(Field::get(3, 1, 2), 1, BetaRing::mu_counterexample, 64);
        REQUIRE(r.mu.mu_order == 2);
        REQUIRE_FALSE(r.mu.surjective);
    }
}
