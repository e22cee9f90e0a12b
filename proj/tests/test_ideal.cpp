#include <catch2/catch.hpp>

#include <set>

#include "fqdescent/ideal.hpp"
#include "fqdescent/instancegen.hpp"

using namespace fqdescent;

TEST_CASE("element descent") {
    Field f2 = Field::get(2, 1, 1);
    Field f4 = Field::get(2, 1, 2);
    FieldElement g = f4.generator();
    PolynomialF x = PolynomialF::variable(f4, 2, 0);
    PolynomialF y = PolynomialF::variable(f4, 2, 1);

    SECTION("rational input returns itself") {
        auto parts = element_descent(x + y);
        REQUIRE(parts.size() == 1);
        PolynomialF x2 = PolynomialF::variable(f2, 2, 0);
        PolynomialF y2 = PolynomialF::variable(f2, 2, 1);
        REQUIRE(parts[0] == x2 + y2);
    }
    SECTION("zero input returns nothing") { REQUIRE(element_descent(PolynomialF(f4, 2)).empty()); }
    SECTION("g x + (g+1) y splits over the used basis elements") {
        PolynomialF f = x.scale(g) + y.scale(g + f4.one());
        auto parts = element_descent(f);
        REQUIRE(parts.size() == 2);
        // the decomposition f = sum mu_r a_r holds with mu = (1, g)
        EmbeddingMap emb = embedding_between(f2, f4);
        PolynomialF rebuilt = parts[0].map_embed(emb) + parts[1].map_embed(emb).scale(g);
        REQUIRE(rebuilt == f);
        // the components span <x, y> over F_4
        PolynomialF a0 = parts[0].map_embed(emb);
        PolynomialF a1 = parts[1].map_embed(emb);
        // a0, a1 are linear and independent: check via their coefficient matrix
        MatrixF coeffs(f4, 2, 2);
        auto put = [&](const PolynomialF& p, std::size_t row) {
            for (const auto& [e, c] : p.terms()) coeffs.at(row, e[0] == 1 ? 0 : 1) = c;
        };
        put(a0, 0);
        put(a1, 1);
        REQUIRE(rank(coeffs) == 2);
    }
    SECTION("span equality verified by rank over F_8") {
        Field f8 = Field::get(2, 1, 3);
        Field fq = Field::get(2, 1, 1);
        EmbeddingMap emb = embedding_between(fq, f8);
        Rng rng(41);
        for (int t = 0; t < 30; ++t) {
            PolynomialF f = instancegen::random_polynomial(rng, f8, 2, 3, 4);
            if (f.is_zero()) continue;
            auto parts = element_descent(f);
            // the orbit f, phi f, phi^2 f and the embedded components have the
            // same span; test mutual containment through ranks
            std::vector<PolynomialF> orbit{f, f.frobenius_coeffs(1), f.frobenius_coeffs(2)};
            std::vector<PolynomialF> lifted;
            for (const auto& a : parts) lifted.push_back(a.map_embed(emb));
            std::set<PolynomialF::Exponents> mons;
            for (const auto& p : orbit)
                for (const auto& [e, c] : p.terms()) mons.insert(e);
            std::vector<PolynomialF::Exponents> cols(mons.begin(), mons.end());
            auto fill = [&](const std::vector<PolynomialF>& polys, MatrixF& m2, std::size_t row0) {
                for (std::size_t i = 0; i < polys.size(); ++i)
                    for (std::size_t j = 0; j < cols.size(); ++j) {
                        auto it = polys[i].terms().find(cols[j]);
                        if (it != polys[i].terms().end()) m2.at(row0 + i, j) = it->second;
                    }
            };
            MatrixF mo(f8, orbit.size(), cols.size());
            fill(orbit, mo, 0);
            MatrixF ml(f8, lifted.size(), cols.size());
            fill(lifted, ml, 0);
            MatrixF mb(f8, orbit.size() + lifted.size(), cols.size());
            fill(orbit, mb, 0);
            fill(lifted, mb, orbit.size());
            REQUIRE(rank(mo) == rank(ml));
            REQUIRE(rank(mb) == rank(mo));
        }
    }
}

TEST_CASE("graded ideal truncations") {
    Field f4 = Field::get(2, 1, 2);
    PolynomialF x = PolynomialF::variable(f4, 2, 0);
    PolynomialF y = PolynomialF::variable(f4, 2, 1);
    FieldElement g = f4.generator();

    SECTION("from_generators is multiplicatively closed and canonical") {
        auto ideal = GradedIdealTrunc::from_generators(f4, 2, 4, {x + y});
        REQUIRE(ideal.dim(0) == 0);
        REQUIRE(ideal.dim(1) == 1);
        REQUIRE(ideal.dim(2) == 2);
        REQUIRE(ideal.dim(3) == 3);
        REQUIRE(ideal.dim(4) == 4);
    }
    SECTION("a non-closed truncation is rejected") {
        std::vector<std::vector<PolynomialF>> comps(3);
        comps[1] = {x};
        // I_2 empty: x * I_1 not contained
        REQUIRE_THROWS_AS(GradedIdealTrunc(f4, 2, 2, comps), std::invalid_argument);
    }
    SECTION("non-homogeneous entries are rejected") {
        std::vector<std::vector<PolynomialF>> comps(2);
        comps[1] = {x + x * x};
        REQUIRE_THROWS_AS(GradedIdealTrunc(f4, 2, 1, comps), std::invalid_argument);
    }
}

TEST_CASE("graded ideal descent") {
    Field f2 = Field::get(2, 1, 1);
    Field f4 = Field::get(2, 1, 2);
    PolynomialF x = PolynomialF::variable(f4, 2, 0);
    PolynomialF y = PolynomialF::variable(f4, 2, 1);
    PolynomialF x2 = PolynomialF::variable(f2, 2, 0);
    PolynomialF y2 = PolynomialF::variable(f2, 2, 1);
    FieldElement g = f4.generator();

    SECTION("rational component descends to itself") {
        std::vector<std::vector<PolynomialF>> comps(2);
        comps[1] = {x + y};
        GradedIdealTrunc ideal(f4, 2, 1, comps);
        GradedIdealTrunc low = graded_ideal_descent(ideal);
        REQUIRE(low.dim(1) == 1);
        REQUIRE(low.component(1)[0] == x2 + y2);
    }
    SECTION("an unstable line raises NotStableError with a witness") {
        std::vector<std::vector<PolynomialF>> comps(2);
        comps[1] = {x + y.scale(g)};
        GradedIdealTrunc ideal(f4, 2, 1, comps);
        try {
            graded_ideal_descent(ideal);
            FAIL("expected NotStableError");
        } catch (const NotStableError& e) {
            REQUIRE(e.degree() == 1);
            // the witness is phi of a basis element, proportional to x + (g+1) y
            PolynomialF w = e.witness();
            REQUIRE_FALSE(w.is_zero());
            // w lies outside the span of x + g y: its coordinates are not
            // proportional to (1, g)
            FieldElement cx = w.terms().count({1, 0}) ? w.terms().at({1, 0}) : f4.zero();
            FieldElement cy = w.terms().count({0, 1}) ? w.terms().at({0, 1}) : f4.zero();
            REQUIRE(cy * f4.one() != cx * g);  // not proportional to (1, g)
        }
    }
    SECTION("the full degree-one space descends to the full space") {
        std::vector<std::vector<PolynomialF>> comps(2);
        comps[1] = {x + y.scale(g), x + y.scale(g + f4.one())};
        GradedIdealTrunc ideal(f4, 2, 1, comps);
        REQUIRE(ideal.dim(1) == 2);
        GradedIdealTrunc low = graded_ideal_descent(ideal);
        REQUIRE(low.dim(1) == 2);
        bool has_x = false, has_y = false;
        for (const auto& p : low.component(1)) {
            if (p == x2) has_x = true;
            if (p == y2) has_y = true;
        }
        REQUIRE(has_x);
        REQUIRE(has_y);
    }
    SECTION("dimension preservation and exact re-tensoring over F_9") {
        Field f9 = Field::get(3, 1, 2);
        PolynomialF u = PolynomialF::variable(f9, 3, 0);
        PolynomialF v = PolynomialF::variable(f9, 3, 1);
        PolynomialF w = PolynomialF::variable(f9, 3, 2);
        FieldElement i = f9.generator();
        // orbit-closed pair of quadrics
        PolynomialF h = (u * v).scale(i) + w * w;
        auto ideal = GradedIdealTrunc::from_generators(f9, 3, 4, {h, h.frobenius_coeffs(1)});
        GradedIdealTrunc low = graded_ideal_descent(ideal);
        EmbeddingMap emb = embedding_between(low.field(), f9);
        for (std::uint32_t d = 0; d <= 4; ++d) {
            REQUIRE(low.dim(d) == ideal.dim(d));
            for (std::size_t k = 0; k < low.dim(d); ++k)
                REQUIRE(low.component(d)[k].map_embed(emb) == ideal.component(d)[k]);
        }
    }
}
