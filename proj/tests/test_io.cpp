#include <catch2/catch.hpp>

#include "fqdescent/instancegen.hpp"
#include "fqdescent/io.hpp"

using namespace fqdescent;

TEST_CASE("documents survive a print/parse round trip") {
    Rng rng(2718);
    auto fields = instancegen::fields_with_order_at_most(16);
    for (int t = 0; t < 100; ++t) {
        const Field& f = fields[rng.below(fields.size())];
        SECTION("iteration " + std::to_string(t)) {}
        FieldElement x = instancegen::random_element(rng, f);
        REQUIRE(element_from_json(Json::parse(to_json(x).dump())) == x);
        MatrixF m = instancegen::random_matrix(rng, f, 2, 3);
        REQUIRE(matrix_from_json(Json::parse(to_json(m).dump())) == m);
        PolynomialF p = instancegen::random_polynomial(rng, f, 2, 3, 3);
        REQUIRE(polynomial_from_json(Json::parse(to_json(p).dump())) == p);
    }
}

TEST_CASE("serialization is deterministic") {
    Field f9 = Field::get(3, 1, 2);
    MatrixF m = MatrixF::identity(f9, 2);
    REQUIRE(to_json(m).dump() == to_json(m).dump());
    // a known literal, pinned: changing the wire format must be deliberate
    REQUIRE(to_json(f9).dump() == R"({"type":"field","p":3,"q_exponent":1,"m":2,"modulus":[1,0,1]})");
}

TEST_CASE("malformed documents are rejected") {
    REQUIRE_THROWS_AS(field_from_json(Json::parse(R"({"type":"field","p":4,"q_exponent":1,"m":1})")), ParseError);
    REQUIRE_THROWS_AS(field_from_json(Json::parse(R"({"type":"element"})")), ParseError);
    // wrong modulus: documents must carry the canonical one
    REQUIRE_THROWS_AS(
        field_from_json(Json::parse(R"({"type":"field","p":2,"q_exponent":1,"m":2,"modulus":[1,0,1]})")),
        ParseError);
    // out-of-range coordinates
    REQUIRE_THROWS_AS(element_from_json(Json::parse(
                          R"({"type":"element","field":{"type":"field","p":2,"q_exponent":1,"m":1},"coords":[2]})")),
                      ParseError);
    // stored zero coefficients are not canonical
    REQUIRE_THROWS_AS(polynomial_from_json(Json::parse(
                          R"({"type":"polynomial","field":{"type":"field","p":2,"q_exponent":1,"m":1},)"
                          R"("nvars":1,"terms":[{"exponents":[1],"coeff":[0]}]})")),
                      ParseError);
}

TEST_CASE("graded ideals and modules round trip") {
    Field f4 = Field::get(2, 1, 2);
    PolynomialF x = PolynomialF::variable(f4, 2, 0);
    PolynomialF y = PolynomialF::variable(f4, 2, 1);
    auto ideal = GradedIdealTrunc::from_generators(f4, 2, 3, {x + y});
    GradedIdealTrunc back = ideal_from_json(Json::parse(to_json(ideal).dump()));
    REQUIRE(back == ideal);

    Rng rng(31415);
    EquivariantModule m = instancegen::random_equivariant_module(rng, f4, 2, 2, 128);
    EquivariantModule mb = module_from_json(Json::parse(to_json(m).dump()), 128);
    REQUIRE(mb.algebra == m.algebra);
    REQUIRE(mb.sigma == m.sigma);
    REQUIRE(mb.action == m.action);
}

TEST_CASE("error payloads serialize with their data") {
    try {
        Field::get(2, 1, 30);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        Json j = error_to_json(e);
        REQUIRE(j["error"]["kind"] == "capacity_exceeded");
        REQUIRE(j["error"]["requested"] == 30);
        REQUIRE(j["error"]["bound"] == 24);
    }
}
