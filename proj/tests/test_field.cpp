#include <catch2/catch.hpp>

#include "fqdescent/field.hpp"
#include "fqdescent/instancegen.hpp"
#include "oracles.hpp"

using namespace fqdescent;

TEST_CASE("canonical moduli are the least irreducibles") {
    // F_4: the unique irreducible quadratic over F_2, checked exhaustively
    Field f4 = Field::get(2, 1, 2);
    REQUIRE(f4.modulus() == fpx::Poly{1, 1, 1});
    int irreducible_quadratics = 0;
    for (std::uint32_t c0 = 0; c0 < 2; ++c0)
        for (std::uint32_t c1 = 0; c1 < 2; ++c1) {
            // t^2 + c1 t + c0 is irreducible iff it has no root in F_2
            bool root = false;
            for (std::uint32_t a = 0; a < 2; ++a)
                if ((a * a + c1 * a + c0) % 2 == 0) root = true;
            if (!root) ++irreducible_quadratics;
        }
    REQUIRE(irreducible_quadratics == 1);

    REQUIRE(Field::get(2, 1, 3).modulus() == fpx::Poly{1, 1, 0, 1});
    REQUIRE(Field::get(3, 1, 2).modulus() == fpx::Poly{1, 0, 1});  // t^2 + 1
}

TEST_CASE("field construction is canonical and deterministic") {
    Field a = Field::get(2, 1, 4);
    Field b = Field::get(2, 1, 4);
    REQUIRE(a == b);  // same shared data
    REQUIRE(a.modulus() == b.modulus());
    // same absolute field, different q-structure: a distinct value
    Field c = Field::get(2, 2, 2);
    REQUIRE(a != c);
    REQUIRE(a.modulus() == c.modulus());  // but the same canonical modulus
    // the modulus is irreducible
    REQUIRE(fpx::is_irreducible(2, a.modulus()));
}

TEST_CASE("identity extension") {
    Field f2 = Field::get(2, 1, 1);
    FieldExtension e = extend_field(f2, 1);
    REQUIRE(e.field == f2);
    REQUIRE(e.embedding.apply(f2.one()) == f2.one());
}

TEST_CASE("capacity bound") {
    REQUIRE_THROWS_AS(Field::get(2, 1, 30), CapacityError);
    Field f8 = Field::get(2, 1, 3);
    REQUIRE_THROWS_AS(extend_field(f8, 9), CapacityError);  // degree 27 > 24
    try {
        extend_field(f8, 9);
    } catch (const CapacityError& err) {
        REQUIRE(err.requested() == 27);
        REQUIRE(err.bound() == 24);
    }
    REQUIRE_NOTHROW(extend_field(f8, 9, 27));
}

TEST_CASE("frobenius basics") {
    Field f4 = Field::get(2, 1, 2);
    FieldElement g = f4.generator();
    // g^2 = g + 1 under t^2 + t + 1
    REQUIRE(g.frobenius(1) == g + f4.one());
    // prime-field elements are fixed
    REQUIRE(f4.one().frobenius(1) == f4.one());
    REQUIRE(f4.zero().frobenius(1) == f4.zero());
    // phi has order m
    Field f8 = Field::get(2, 1, 3);
    for (const auto& x : oracles::all_elements(f8)) {
        REQUIRE(x.frobenius(3) == x);
        REQUIRE(x.frobenius(1).frobenius(-1) == x);
    }
}

TEST_CASE("frobenius is a ring homomorphism, exhaustively") {
    for (Field f : {Field::get(2, 1, 2), Field::get(2, 1, 3), Field::get(3, 1, 2)}) {
        auto elems = oracles::all_elements(f);
        for (const auto& x : elems)
            for (const auto& y : elems) {
                REQUIRE((x + y).frobenius(1) == x.frobenius(1) + y.frobenius(1));
                REQUIRE((x * y).frobenius(1) == x.frobenius(1) * y.frobenius(1));
            }
    }
}

TEST_CASE("field axioms on random samples") {
    Rng rng(2024);
    for (Field f : {Field::get(2, 1, 4), Field::get(3, 1, 3), Field::get(5, 1, 2), Field::get(2, 2, 2)}) {
        for (int t = 0; t < 1000; ++t) {
            FieldElement a = instancegen::random_element(rng, f);
            FieldElement b = instancegen::random_element(rng, f);
            FieldElement c = instancegen::random_element(rng, f);
            REQUIRE((a + b) + c == a + (b + c));
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * (b + c) == a * b + a * c);
            if (!a.is_zero()) REQUIRE(a * a.inverse() == f.one());
        }
    }
}

TEST_CASE("embeddings are homomorphisms fixing the base") {
    Field f4 = Field::get(2, 1, 2);
    auto ext = extend_field(f4, 3);  // F_64 with q = 2
    const EmbeddingMap& e = ext.embedding;
    auto elems = oracles::all_elements(f4);
    for (const auto& x : elems)
        for (const auto& y : elems) {
            REQUIRE(e.apply(x * y) == e.apply(x) * e.apply(y));
            REQUIRE(e.apply(x + y) == e.apply(x) + e.apply(y));
        }
    REQUIRE(e.apply(f4.one()) == ext.field.one());
    // commutes with frobenius
    for (const auto& x : elems) REQUIRE(e.apply(x.frobenius(1)) == e.apply(x).frobenius(1));
    // preimages are exact and detect non-membership
    for (const auto& x : elems) {
        auto back = e.preimage(e.apply(x));
        REQUIRE(back);
        REQUIRE(*back == x);
    }
    REQUIRE_FALSE(e.preimage(ext.field.generator()).has_value());
}

TEST_CASE("embeddings compose along towers") {
    // homomorphism checked by brute force on the generator per tower step
    SECTION("characteristic 2") {
        Field f4 = Field::get(2, 1, 2);
        Field f16 = Field::get(2, 1, 4);
        Field f256 = Field::get(2, 1, 8);
        EmbeddingMap a = embedding_between(f4, f16);
        EmbeddingMap b = embedding_between(f16, f256);
        EmbeddingMap c = embedding_between(f4, f256);
        for (const auto& x : oracles::all_elements(f4)) REQUIRE(b.apply(a.apply(x)) == c.apply(x));
    }
    SECTION("characteristic 2, three-step chain from the prime field") {
        Field f2 = Field::get(2, 1, 1);
        auto e4 = extend_field(f2, 2);
        auto e64 = extend_field(e4.field, 3);
        auto direct = extend_field(f2, 6);
        REQUIRE(e64.field == direct.field);
        for (const auto& x : oracles::all_elements(f2))
            REQUIRE(e64.embedding.apply(e4.embedding.apply(x)) == direct.embedding.apply(x));
    }
    SECTION("characteristic 3") {
        Field f9 = Field::get(3, 1, 2);
        Field f81 = Field::get(3, 1, 4);
        Field f6561 = Field::get(3, 1, 8);
        EmbeddingMap a = embedding_between(f9, f81);
        EmbeddingMap b = embedding_between(f81, f6561);
        EmbeddingMap c = embedding_between(f9, f6561);
        for (const auto& x : oracles::all_elements(f9)) REQUIRE(b.apply(a.apply(x)) == c.apply(x));
    }
    SECTION("mixed prime chains") {
        Field f9 = Field::get(3, 1, 2);
        Field f729 = Field::get(3, 1, 6);
        Field f312 = Field::get(3, 1, 12);
        EmbeddingMap u = embedding_between(f9, f729);
        EmbeddingMap w1 = embedding_between(f729, f312);
        EmbeddingMap w2 = embedding_between(f9, f312);
        for (const auto& x : oracles::all_elements(f9)) REQUIRE(w1.apply(u.apply(x)) == w2.apply(x));
    }
}

TEST_CASE("subfield coordinates round trip") {
    for (Field f : {Field::get(2, 2, 3), Field::get(3, 2, 2), Field::get(2, 1, 4)}) {
        auto ctx = subfield_ctx(f);
        Rng rng(99);
        for (int t = 0; t < 50; ++t) {
            FieldElement x = instancegen::random_element(rng, f);
            REQUIRE(ctx->from_q_codes(ctx->to_q_codes(x)) == x);
        }
        // the basis elements themselves
        FieldElement g = f.generator();
        auto codes = ctx->to_q_codes(g);
        REQUIRE(codes[1] == 1);
        for (std::size_t j = 0; j < codes.size(); ++j)
            if (j != 1) REQUIRE(codes[j] == 0);
    }
}

TEST_CASE("prime power split") {
    REQUIRE(prime_power_split(9) == std::pair<std::uint32_t, std::uint32_t>{3, 2});
    REQUIRE(prime_power_split(8) == std::pair<std::uint32_t, std::uint32_t>{2, 3});
    REQUIRE(prime_power_split(7) == std::pair<std::uint32_t, std::uint32_t>{7, 1});
    REQUIRE_THROWS_AS(prime_power_split(6), std::invalid_argument);
    REQUIRE_THROWS_AS(prime_power_split(1), std::invalid_argument);
}
