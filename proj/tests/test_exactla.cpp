#include <doctest.h>

#include "strata/matrix.hpp"
#include "strata/poly.hpp"
#include "strata/subspace.hpp"

#include <random>

using namespace strata::exact;

namespace {

const FieldSpec Q = FieldSpec::rationals();

Matrix random_matrix(FieldSpec spec, std::size_t r, std::size_t c, std::mt19937_64& gen) {
    Matrix m(spec, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            long v = spec.kind == FieldKind::Rationals
                         ? static_cast<long>(gen() % 7) - 3
                         : static_cast<long>(gen() % spec.characteristic);
            m.at(i, j) = Scalar::of_int(spec, v);
        }
    return m;
}

} // namespace

TEST_CASE("scalar arithmetic over Q and GF(p)") {
    Scalar a(Q, mpq_class(1, 3)), b(Q, mpq_class(1, 6));
    CHECK((a + b).str() == "1/2");
    CHECK((a * b).str() == "1/18");
    CHECK((a - a).is_zero());
    CHECK(a.inv().str() == "3/1");

    FieldSpec f5 = FieldSpec::prime(5);
    Scalar x = Scalar::of_int(f5, 7); // reduces to 2
    CHECK(x.str() == "2");
    CHECK((x * x).str() == "4");
    CHECK(x.inv().str() == "3"); // 2*3 = 6 = 1 mod 5
    CHECK_THROWS(FieldSpec::prime(6));
    CHECK_THROWS(Scalar::of_int(Q, 0).inv());
}

TEST_CASE("Fermat identity a^p = a on every residue for p <= 17") {
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul}) {
        FieldSpec f = FieldSpec::prime(p);
        for (unsigned long r = 0; r < p; ++r) {
            Scalar a = Scalar::of_int(f, static_cast<long>(r));
            CHECK(a.pow(p) == a);
        }
    }
}

TEST_CASE("rref on the trivial shapes") {
    RrefResult r0 = rref(Matrix(Q, 0, 0));
    CHECK(r0.rank == 0);
    CHECK(r0.pivots.empty());

    RrefResult r1 = rref(Matrix::identity(Q, 3));
    CHECK(r1.R == Matrix::identity(Q, 3));
    CHECK(r1.rank == 3);
    CHECK(r1.pivots == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("rref of a rank-1 matrix, hand-reduced oracle") {
    Matrix m = Matrix::from_ints(Q, {{1, 2}, {2, 4}});
    RrefResult r = rref(m);
    CHECK(r.rank == 1);
    CHECK(r.pivots == std::vector<std::size_t>{0});
    CHECK(r.R == Matrix::from_ints(Q, {{1, 2}, {0, 0}}));
}

TEST_CASE("rref is idempotent on random matrices") {
    std::mt19937_64 gen(7);
    for (int it = 0; it < 40; ++it) {
        FieldSpec spec = it % 2 ? FieldSpec::prime(5) : Q;
        Matrix m = random_matrix(spec, 1 + gen() % 5, 1 + gen() % 5, gen);
        Matrix r = rref(m).R;
        CHECK(rref(r).R == r);
    }
}

TEST_CASE("solve picks the zero-free-variable solution") {
    Matrix I2 = Matrix::identity(Q, 2);
    Matrix b = Matrix::column(Q, {3, 5});
    auto x = solve(I2, b);
    REQUIRE(x.has_value());
    CHECK(*x == b);

    auto y = solve(Matrix::from_ints(Q, {{1, 1}}), Matrix::column(Q, {2}));
    REQUIRE(y.has_value());
    CHECK(*y == Matrix::column(Q, {2, 0}));
    CHECK(Matrix::from_ints(Q, {{1, 1}}) * *y == Matrix::column(Q, {2}));

    auto none = solve(Matrix::from_ints(Q, {{1}, {1}}), Matrix::column(Q, {0, 1}));
    CHECK(!none.has_value());

    CHECK_THROWS(solve(I2, Matrix::column(Q, {1, 2, 3})));
}

TEST_CASE("every successful solve satisfies A x = b exactly") {
    std::mt19937_64 gen(11);
    for (int it = 0; it < 60; ++it) {
        FieldSpec spec = it % 3 ? Q : FieldSpec::prime(7);
        Matrix A = random_matrix(spec, 1 + gen() % 4, 1 + gen() % 4, gen);
        Matrix b = random_matrix(spec, A.rows(), 1, gen);
        auto x = solve(A, b);
        if (x.has_value())
            CHECK(A * *x == b);
    }
}

TEST_CASE("kernel bases") {
    CHECK(kernel_basis(Matrix::identity(Q, 4)).rows() == 0);
    CHECK(kernel_basis(Matrix(Q, 2, 3)).rows() == 3);

    Matrix k = kernel_basis(Matrix::from_ints(Q, {{1, 2}}));
    REQUIRE(k.rows() == 1);
    // span{(-2, 1)} normalized to RREF
    CHECK(Matrix::from_ints(Q, {{1, 2}}) * k.transpose() == Matrix(Q, 1, 1));
    CHECK(k.at(0, 0) == Scalar::one(Q));
}

TEST_CASE("subspace operations on hand examples") {
    Subspace U = Subspace::from_rows(Matrix::from_ints(Q, {{1, 0}}), 2);
    Subspace V = Subspace::from_rows(Matrix::from_ints(Q, {{0, 1}}), 2);
    CHECK(U.sum(V) == Subspace::full(Q, 2));
    CHECK(U.intersect(V).is_zero());
    CHECK(U.sum(U) == U);
    CHECK(U.intersect(U) == U);
    CHECK(U.contains(U));
    CHECK(!U.contains(V));

    Subspace W1 = Subspace::from_rows(Matrix::from_ints(Q, {{1, 1, 0}}), 3);
    Subspace W2 = Subspace::from_rows(Matrix::from_ints(Q, {{1, 1, 1}, {0, 0, 1}}), 3);
    CHECK(W1.intersect(W2) == W1);

    CHECK_THROWS(U.sum(W1));
}

TEST_CASE("dimension formula dim U + dim V = dim(U+V) + dim(U cap V)") {
    std::mt19937_64 gen(23);
    for (int it = 0; it < 50; ++it) {
        FieldSpec spec = it % 2 ? FieldSpec::prime(3) : Q;
        std::size_t n = 2 + gen() % 4;
        Subspace U = Subspace::from_rows(random_matrix(spec, gen() % (n + 1), n, gen), n);
        Subspace V = Subspace::from_rows(random_matrix(spec, gen() % (n + 1), n, gen), n);
        CHECK(U.dim() + V.dim() == U.sum(V).dim() + U.intersect(V).dim());
        CHECK(U.sum(V).contains(U));
        CHECK(U.contains(U.intersect(V)));
    }
}

TEST_CASE("polynomial division, gcd and roots") {
    Poly f = Poly::from_ints(Q, {-2, 0, 1});  // x^2 - 2
    Poly g = Poly::from_ints(Q, {-1, 1});     // x - 1
    auto qr = divmod(f, g);
    CHECK(qr.quot == Poly::from_ints(Q, {1, 1}));
    CHECK(qr.rem == Poly::from_ints(Q, {-1}));
    CHECK(poly_gcd(f * g, g) == g);

    Poly h = Poly::from_ints(Q, {6, -5, 1}); // (x-2)(x-3)
    auto roots = poly_roots_in_field(h);
    REQUIRE(roots.size() == 2);
    CHECK(is_squarefree(h));
    CHECK(!is_squarefree(g * g));

    auto factors = split_squarefree(h);
    CHECK(factors.size() == 2);
    CHECK(factors[0].irreducible_certified);

    // x^2 - 2 has no rational root: stays whole but certified (degree 2)
    auto f2 = split_squarefree(f);
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].irreducible_certified);
}

TEST_CASE("Berlekamp factorization over small prime fields") {
    FieldSpec f2 = FieldSpec::prime(2);
    // x^4 + x = x (x+1) (x^2+x+1) over GF(2)
    Poly p(f2, {Scalar::zero(f2), Scalar::one(f2), Scalar::zero(f2), Scalar::zero(f2),
                Scalar::one(f2)});
    auto factors = split_squarefree(p);
    CHECK(factors.size() == 3);
    for (const auto& fac : factors)
        CHECK(fac.irreducible_certified);
    Poly prod = Poly::from_ints(f2, {1});
    for (const auto& fac : factors)
        prod = prod * fac.f;
    CHECK(prod == p.monic());

    FieldSpec f3 = FieldSpec::prime(3);
    Poly irr = Poly::from_ints(f3, {1, 0, 1}); // x^2 + 1, irreducible mod 3
    auto fs = split_squarefree(irr);
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].irreducible_certified);
}

TEST_CASE("egcd certifies coprimality") {
    Poly a = Poly::from_ints(Q, {-1, 1}); // x - 1
    Poly b = Poly::from_ints(Q, {1, 1});  // x + 1
    auto eg = poly_egcd(a, b);
    CHECK(eg.g == Poly::from_ints(Q, {1}));
    CHECK(eg.u * a + eg.v * b == Poly::from_ints(Q, {1}));
}
