// Copyright 2026 the affclass authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#include <catch2/catch_amalgamated.hpp>

#include "affclass/matrix.hpp"
#include "helpers.hpp"

using namespace affclass;
using testutil::random_invertible;
using testutil::random_matrix;

TEST_CASE("rank plus nullity equals column count", "[matrix]") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 60; ++t) {
        size_t n = 1 + t % 5;
        Matrix<Rat> M = random_matrix<Rat>(rng, n);
        if (t % 3 == 0) {
            // force a rank drop
            for (size_t j = 0; j < n; ++j) M(n - 1, j) = M(0, j);
        }
        Matrix<Rat> ker = kernel_basis(M);
        CHECK(rank(M) + ker.cols() == n);
        for (size_t j = 0; j < ker.cols(); ++j) {
            std::vector<Rat> v(n);
            for (size_t i = 0; i < n; ++i) v[i] = ker(i, j);
            std::vector<Rat> Mv = M * v;
            for (const Rat& x : Mv) CHECK(x == Rat(0));
        }
    }
}

TEST_CASE("determinant is multiplicative and detects singularity", "[matrix]") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 60; ++t) {
        size_t n = 1 + t % 4;
        Matrix<Rat> A = random_matrix<Rat>(rng, n);
        Matrix<Rat> B = random_matrix<Rat>(rng, n);
        CHECK(determinant(A * B) == determinant(A) * determinant(B));
        CHECK((determinant(A) == Rat(0)) == (rank(A) < n));
        CHECK((determinant(A) == Rat(0)) == !inverse(A).has_value());
    }
}

TEST_CASE("inverse round-trips", "[matrix]") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 40; ++t) {
        size_t n = 1 + t % 5;
        Matrix<Rat> S = random_invertible<Rat>(rng, n);
        auto Sinv = inverse(S);
        REQUIRE(Sinv.has_value());
        CHECK(S * *Sinv == Matrix<Rat>::identity(n));
        CHECK(*Sinv * S == Matrix<Rat>::identity(n));
    }
}

TEST_CASE("solve returns a solution exactly when one exists", "[matrix]") {
    std::mt19937_64 rng(24);
    for (int t = 0; t < 60; ++t) {
        size_t n = 1 + t % 4;
        Matrix<Rat> M = random_matrix<Rat>(rng, n);
        std::vector<Rat> x(n);
        for (auto& v : x) v = testutil::random_rat(rng);
        std::vector<Rat> c = M * x;
        auto sol = solve(M, c);
        REQUIRE(sol.has_value());
        CHECK(M * *sol == c);
    }
    // inconsistent system
    Matrix<Rat> Z(2, 2);
    CHECK_FALSE(solve(Z, {Rat(1), Rat(0)}).has_value());
}

TEST_CASE("Cayley-Hamilton: a matrix annihilates its characteristic polynomial",
          "[matrix]") {
    std::mt19937_64 rng(25);
    for (int t = 0; t < 30; ++t) {
        size_t n = 1 + t % 4;
        Matrix<GRat> M = random_matrix<GRat>(rng, n, 4, 2);
        Matrix<GRat> Z = mat_poly_eval(charpoly(M), M);
        CHECK(Z == Matrix<GRat>(n, n));
    }
}

TEST_CASE("charpoly is a similarity invariant and matches known values",
          "[matrix]") {
    std::mt19937_64 rng(26);
    for (int t = 0; t < 30; ++t) {
        size_t n = 1 + t % 4;
        Matrix<Rat> A = random_matrix<Rat>(rng, n);
        Matrix<Rat> S = random_invertible<Rat>(rng, n);
        Matrix<Rat> B = S * A * *inverse(S);
        CHECK(charpoly(A) == charpoly(B));
    }
    // det(xI - M) for M = [[2,1],[0,3]] is (x-2)(x-3) = x^2 - 5x + 6.
    Matrix<Rat> M({{Rat(2), Rat(1)}, {Rat(0), Rat(3)}});
    CHECK(charpoly(M) == Poly<Rat>({Rat(6), Rat(-5), Rat(1)}));
    // constant term is (-1)^n det, next-to-leading is -trace.
    std::mt19937_64 rng2(27);
    for (int t = 0; t < 20; ++t) {
        size_t n = 2 + t % 3;
        Matrix<Rat> A = random_matrix<Rat>(rng2, n);
        Poly<Rat> p = charpoly(A);
        Rat sgn = (n % 2 == 0) ? Rat(1) : Rat(-1);
        CHECK(p.coeffs()[0] == sgn * determinant(A));
    }
}

TEST_CASE("image basis spans the column space", "[matrix]") {
    std::mt19937_64 rng(28);
    for (int t = 0; t < 30; ++t) {
        size_t n = 2 + t % 3;
        Matrix<Rat> M = random_matrix<Rat>(rng, n);
        for (size_t j = 0; j < n; ++j) M(n - 1, j) = M(0, j);  // drop rank
        Matrix<Rat> im = image_basis(M);
        CHECK(im.cols() == rank(M));
        // every column of M solves against the image basis
        for (size_t j = 0; j < n; ++j) {
            std::vector<Rat> col(n);
            for (size_t i = 0; i < n; ++i) col[i] = M(i, j);
            CHECK(solve(im, col).has_value());
        }
    }
}

TEST_CASE("mat_pow agrees with repeated multiplication", "[matrix]") {
    std::mt19937_64 rng(29);
    Matrix<Rat> A = random_matrix<Rat>(rng, 3, 2, 2);
    Matrix<Rat> acc = Matrix<Rat>::identity(3);
    for (size_t e = 0; e <= 5; ++e) {
        CHECK(mat_pow(A, e) == acc);
        acc = acc * A;
    }
}

TEST_CASE("direct sum of operators acts blockwise", "[matrix]") {
    AffineOperator<Rat> f{Matrix<Rat>({{Rat(2)}}), {Rat(1)}};
    AffineOperator<Rat> g{Matrix<Rat>({{Rat(3)}}), {Rat(-1)}};
    AffineOperator<Rat> h = direct_sum(f, g);
    std::vector<Rat> y = h({Rat(1), Rat(1)});
    CHECK(y == std::vector<Rat>{Rat(3), Rat(2)});
}

TEST_CASE("shape violations throw", "[matrix]") {
    Matrix<Rat> A(2, 3), B(2, 2);
    CHECK_THROWS_AS(A * B, DimensionMismatch);
    CHECK_THROWS_AS(determinant(A), DimensionMismatch);
    CHECK_THROWS_AS(Matrix<Rat>({{Rat(1)}, {Rat(1), Rat(2)}}), DimensionMismatch);
    CHECK_THROWS_AS(AffineOperator<Rat>(B, {Rat(1)}), DimensionMismatch);
}
