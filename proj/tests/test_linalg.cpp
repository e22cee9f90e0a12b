#include <catch2/catch.hpp>

#include "fqdescent/instancegen.hpp"
#include "fqdescent/linear_system.hpp"
#include "fqdescent/matrix.hpp"

using namespace fqdescent;

TEST_CASE("nullspace of the identity is empty") {
    Field f9 = Field::get(3, 1, 2);
    REQUIRE(nullspace(MatrixF::identity(f9, 4)).empty());
}

TEST_CASE("self-inverse matrix over F_4") {
    Field f4 = Field::get(2, 1, 2);
    FieldElement g = f4.generator();
    MatrixF m(f4, 2, 2);
    m.at(0, 0) = g;
    m.at(0, 1) = g + f4.one();
    m.at(1, 0) = g + f4.one();
    m.at(1, 1) = g;
    REQUIRE(det(m) == f4.one());
    REQUIRE(inverse(m) == m);
    REQUIRE(m * m == MatrixF::identity(f4, 2));
}

TEST_CASE("rank-nullity on random matrices over F_9") {
    Field f9 = Field::get(3, 1, 2);
    Rng rng(7);
    for (int t = 0; t < 100; ++t) {
        MatrixF m = instancegen::random_matrix(rng, f9, 4, 4);
        REQUIRE(rank(m) + nullspace(m).size() == 4);
        // nullspace vectors actually solve Mv = 0
        for (const auto& v : nullspace(m)) {
            auto mv = m.apply(v);
            for (const auto& x : mv) REQUIRE(x.is_zero());
        }
    }
}

TEST_CASE("solve and invert are exact") {
    Field f8 = Field::get(2, 1, 3);
    Rng rng(11);
    for (int t = 0; t < 30; ++t) {
        MatrixF m = instancegen::random_invertible(rng, f8, 3);
        REQUIRE(m * inverse(m) == MatrixF::identity(f8, 3));
        std::vector<FieldElement> b;
        for (int i = 0; i < 3; ++i) b.push_back(instancegen::random_element(rng, f8));
        auto x = solve(m, b);
        REQUIRE(m.apply(x) == b);
    }
}

TEST_CASE("singular matrices carry their rank") {
    Field f4 = Field::get(2, 1, 2);
    MatrixF m(f4, 3, 3);  // zero matrix
    m.at(0, 0) = f4.one();
    try {
        inverse(m);
        FAIL("expected SingularError");
    } catch (const SingularError& e) {
        REQUIRE(e.rank() == 1);
    }
}

TEST_CASE("determinant is multiplicative") {
    Field f9 = Field::get(3, 1, 2);
    Rng rng(21);
    for (int t = 0; t < 50; ++t) {
        MatrixF a = instancegen::random_matrix(rng, f9, 3, 3);
        MatrixF b = instancegen::random_matrix(rng, f9, 3, 3);
        REQUIRE(det(a * b) == det(a) * det(b));
    }
}

TEST_CASE("field mismatch is detected") {
    Field f4 = Field::get(2, 1, 2);
    Field f8 = Field::get(2, 1, 3);
    MatrixF a = MatrixF::identity(f4, 2);
    MatrixF b = MatrixF::identity(f8, 2);
    REQUIRE_THROWS_AS(a * b, FieldMismatchError);
}

TEST_CASE("semilinear affine systems solve exactly where a solution exists") {
    // phi(h) - h = y over F_4 is solvable iff the trace of y to F_2 vanishes
    Field f4 = Field::get(2, 1, 2);
    FieldElement g = f4.generator();
    MatrixF one = MatrixF::identity(f4, 1);
    auto solve_for = [&](FieldElement y) {
        FqLinearSystem sys(f4, 1);
        std::vector<FieldElement> rhs{y};
        sys.add_semilinear(one, one, &rhs);
        return sys.solve();
    };
    auto sol1 = solve_for(f4.one());  // trace 0
    REQUIRE(sol1);
    REQUIRE((*sol1)[0].frobenius(1) - (*sol1)[0] == f4.one());
    REQUIRE_FALSE(solve_for(g));             // trace 1
    REQUIRE_FALSE(solve_for(g + f4.one()));  // trace 1
    // homogeneous solutions of phi(h) = h form exactly F_2
    FqLinearSystem sys(f4, 1);
    sys.add_semilinear(one, one);
    auto basis = sys.nullspace_basis();
    REQUIRE(basis.size() == 1);
    REQUIRE(basis[0][0] == f4.one());
}

TEST_CASE("fixed-space engine agrees with the generic system solver") {
    Rng rng(314159);
    for (Field f : {Field::get(2, 1, 2), Field::get(3, 1, 2), Field::get(2, 2, 1), Field::get(2, 1, 3)}) {
        for (int t = 0; t < 10; ++t) {
            std::size_t n = 1 + rng.below(2);
            MatrixF s = instancegen::random_invertible(rng, f, n);
            auto fast = semilinear_fixed_space(s);
            FqLinearSystem sys(f, n);
            sys.add_semilinear(s, MatrixF::identity(f, n));
            auto generic = sys.nullspace_basis();
            REQUIRE(fast == generic);
        }
    }
}
