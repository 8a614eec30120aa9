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

#include "affclass/conjugacy.hpp"
#include "helpers.hpp"

using namespace affclass;
using testutil::random_invertible;

namespace {

template <class K>
AffineOperator<K> diag_op(std::vector<K> d, std::vector<K> b) {
    Matrix<K> A(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) A(i, i) = d[i];
    return {std::move(A), std::move(b)};
}

}  // namespace

TEST_CASE("fixed points solve (A - I)x = -b", "[conjugacy]") {
    // 2x + 1 fixes -1
    AffineOperator<Rat> f{Matrix<Rat>({{Rat(2)}}), {Rat(1)}};
    auto p = fixed_point(f);
    REQUIRE(p.has_value());
    CHECK((*p)[0] == Rat(-1));
    // x + 1 has no fixed point
    CHECK_FALSE(fixed_point(AffineOperator<Rat>{Matrix<Rat>::identity(1), {Rat(1)}})
                    .has_value());
    // translation along an eigenvector of eigenvalue 1, absorbed elsewhere
    AffineOperator<Rat> g{Matrix<Rat>({{Rat(1), Rat(0)}, {Rat(0), Rat(2)}}),
                          {Rat(0), Rat(5)}};
    CHECK(fixed_point(g).has_value());
    std::mt19937_64 rng(71);
    for (int t = 0; t < 60; ++t) {
        size_t n = 1 + t % 4;
        AffineOperator<Rat> h{testutil::random_matrix<Rat>(rng, n),
                              std::vector<Rat>(n)};
        for (auto& v : h.b) v = testutil::random_rat(rng);
        auto q = fixed_point(h);
        if (q) CHECK(h(*q) == *q);
        // fixed point exists iff 1-eigenline analysis says so
        CHECK(q.has_value() == !corollary_check(h));
    }
}

TEST_CASE("root-of-unity eigenvalues are rejected with the order",
          "[conjugacy]") {
    // 90-degree rotation: primitive 4th roots of unity
    Matrix<Rat> R({{Rat(0), Rat(-1)}, {Rat(1), Rat(0)}});
    try {
        decide_linear(R, R);
        FAIL("expected RootOfUnityError");
    } catch (const RootOfUnityError& e) {
        CHECK(e.k == 4);
    }
    // identity: order 1
    try {
        canonical_linear(Matrix<Rat>::identity(2));
        FAIL("expected RootOfUnityError");
    } catch (const RootOfUnityError& e) {
        CHECK(e.k == 1);
    }
    // multiplication by i over the complex rationals
    Matrix<GRat> Mi({{GRat(Rat(0), Rat(1))}});
    CHECK_THROWS_AS(canonical_linear(Mi), RootOfUnityError);
    // eigenvalue -1 with a genuine fixed point: order 2
    try {
        canonical_affine(AffineOperator<Rat>{Matrix<Rat>({{Rat(-1)}}), {Rat(0)}});
        FAIL("expected RootOfUnityError");
    } catch (const RootOfUnityError& e) {
        CHECK(e.k == 2);
    }
    // but -1 in the linear part of a fixed-point-free operator is fine
    AffineOperator<Rat> f{Matrix<Rat>({{Rat(1), Rat(0)}, {Rat(0), Rat(-1)}}),
                          {Rat(1), Rat(0)}};
    CHECK(canonical_affine(f).no_fixed_point);
}

TEST_CASE("orientation separates [1/2] from [-1/2] over the reals only",
          "[conjugacy]") {
    Matrix<Rat> P({{Rat(1, 2)}}), N({{Rat(-1, 2)}});
    Verdict v = decide_linear(P, N);
    CHECK_FALSE(v.conjugate);
    CHECK(v.reason == Reason::ORIENTATION_MISMATCH);
    // over the complex rationals the clause drops
    Matrix<GRat> Pc({{GRat(Rat(1, 2))}}), Nc({{GRat(Rat(-1, 2))}});
    CHECK(decide_linear(Pc, Nc).conjugate);
    // same on the expanding side
    Verdict w = decide_linear(Matrix<Rat>({{Rat(2)}}), Matrix<Rat>({{Rat(-2)}}));
    CHECK_FALSE(w.conjugate);
    CHECK(w.reason == Reason::ORIENTATION_MISMATCH);
}

TEST_CASE("contracting operators of equal dimension are conjugate",
          "[conjugacy]") {
    // any two contractions with det > 0 in dimension 2
    Matrix<Rat> A({{Rat(1, 2), Rat(0)}, {Rat(0), Rat(1, 3)}});
    Matrix<Rat> B({{Rat(1, 7), Rat(1, 8)}, {Rat(0), Rat(2, 3)}});
    CHECK(decide_linear(A, B).conjugate);
    // mixing strata fails on sizes
    Matrix<Rat> C({{Rat(1, 2), Rat(0)}, {Rat(0), Rat(3)}});
    Verdict v = decide_linear(A, C);
    CHECK_FALSE(v.conjugate);
    CHECK(v.reason == Reason::SIZE_MISMATCH);
}

TEST_CASE("nilpotent structure separates and is invariant", "[conjugacy]") {
    Matrix<Rat> A = direct_sum(nilpotent_from_segre<Rat>({2}),
                               Matrix<Rat>({{Rat(1, 2)}}));
    Matrix<Rat> B = direct_sum(nilpotent_from_segre<Rat>({1, 1}),
                               Matrix<Rat>({{Rat(1, 2)}}));
    Verdict v = decide_linear(A, B);
    CHECK_FALSE(v.conjugate);
    CHECK(v.reason == Reason::NILPOTENT_MISMATCH);
}

TEST_CASE("unit-modulus parts must match in Jordan structure", "[conjugacy]") {
    // q = x^2 - (6/5)x + 1: roots (3 +- 4i)/5 on the circle
    Poly<Rat> q({Rat(1), Rat(-6, 5), Rat(1)});
    Matrix<Rat> one = companion(q);
    Matrix<Rat> two_blocks = direct_sum(one, one);
    Matrix<Rat> one_big = companion(poly_pow(q, 2));
    Verdict v = decide_linear(two_blocks, one_big);
    CHECK_FALSE(v.conjugate);
    CHECK(v.reason == Reason::UNIT_PART_MISMATCH);
    CHECK(decide_linear(two_blocks, two_blocks).conjugate);
    // a unit-circle block never matches a contracting block of equal size
    Matrix<Rat> contract({{Rat(1, 2), Rat(0)}, {Rat(0), Rat(1, 3)}});
    CHECK_FALSE(decide_linear(one, contract).conjugate);
}

TEST_CASE("conjugate eigenvalue pairs merge over the complex rationals",
          "[conjugacy]") {
    GRat l1(Rat(3, 5), Rat(4, 5)), l2(Rat(3, 5), Rat(-4, 5));
    Matrix<GRat> A({{l1}}), B({{l2}});
    CHECK(decide_linear(A, B).conjugate);
    CHECK(canonical_linear(A) == canonical_linear(B));
    // the realifications are conjugate over the reals as well
    CHECK(decide_linear(realify(A), realify(B)).conjugate);
}

TEST_CASE("decide is reflexive, symmetric, and base-change invariant",
          "[conjugacy]") {
    std::mt19937_64 rng(72);
    int done = 0;
    while (done < 40) {
        size_t n = 1 + static_cast<size_t>(done) % 3;
        Matrix<Rat> A = testutil::random_matrix<Rat>(rng, n, 5, 3);
        Matrix<Rat> B = testutil::random_matrix<Rat>(rng, n, 5, 3);
        try {
            Verdict vAB = decide_linear(A, B);
            CHECK(decide_linear(A, A).conjugate);
            CHECK(decide_linear(B, A).conjugate == vAB.conjugate);
            Matrix<Rat> S = random_invertible<Rat>(rng, n, 2);
            CHECK(decide_linear(S * A * *inverse(S), B).conjugate == vAB.conjugate);
            ++done;
        } catch (const RootOfUnityError&) {
            continue;  // rare for random matrices; skip
        }
    }
}

TEST_CASE("canonical forms classify: equal iff conjugate", "[conjugacy]") {
    std::mt19937_64 rng(73);
    int done = 0;
    while (done < 60) {
        size_t n = 1 + static_cast<size_t>(done) % 3;
        Matrix<Rat> A = testutil::random_matrix<Rat>(rng, n, 5, 3);
        Matrix<Rat> B = testutil::random_matrix<Rat>(rng, n, 5, 3);
        try {
            bool same = canonical_linear(A) == canonical_linear(B);
            CHECK(same == decide_linear(A, B).conjugate);
            ++done;
        } catch (const RootOfUnityError&) {
            continue;
        }
    }
}

TEST_CASE("canonical form is idempotent through realize", "[conjugacy]") {
    std::mt19937_64 rng(74);
    int done = 0;
    while (done < 40) {
        size_t n = 1 + static_cast<size_t>(done) % 3;
        Matrix<Rat> A = testutil::random_matrix<Rat>(rng, n, 5, 3);
        try {
            CanonicalForm<Rat> cf = canonical_linear(A);
            AffineOperator<Rat> rep = realize(cf);
            CHECK(canonical_affine(rep) == cf);
            CHECK(decide_linear(rep.A, A).conjugate);
            ++done;
        } catch (const RootOfUnityError&) {
            continue;
        } catch (const std::domain_error&) {
            continue;  // unit factor not realizable over Q (roots off circle impossible here)
        }
    }
}

TEST_CASE("no-fixed-point classification: translation number and leftovers",
          "[conjugacy]") {
    // pure translation
    AffineOperator<Rat> t1{Matrix<Rat>::identity(1), {Rat(5)}};
    CanonicalForm<Rat> cf = canonical_affine(t1);
    CHECK(cf.no_fixed_point);
    CHECK(cf.k == 1);
    CHECK(cf.epsilon == +1);
    CHECK(cf.segre.empty());
    // all fixed-point-free operators in one dimension are conjugate
    AffineOperator<Rat> t2{Matrix<Rat>::identity(1), {Rat(-1, 3)}};
    CHECK(decide_affine(t1, t2).conjugate);
    // orientation flip via a [-1] summand
    AffineOperator<Rat> neg{Matrix<Rat>({{Rat(1), Rat(0)}, {Rat(0), Rat(-1)}}),
                            {Rat(1), Rat(0)}};
    CanonicalForm<Rat> cfn = canonical_affine(neg);
    CHECK(cfn.k == 1);
    CHECK(cfn.epsilon == -1);
    AffineOperator<Rat> pos{Matrix<Rat>({{Rat(1), Rat(0)}, {Rat(0), Rat(1, 2)}}),
                            {Rat(1), Rat(0)}};
    Verdict v = decide_affine(neg, pos);
    CHECK_FALSE(v.conjugate);
    CHECK(v.reason == Reason::ORIENTATION_MISMATCH);
    // over the complex rationals the discrepancy disappears
    AffineOperator<GRat> negc{complexify(neg.A), {GRat(1), GRat(0)}};
    AffineOperator<GRat> posc{complexify(pos.A), {GRat(1), GRat(0)}};
    CHECK(decide_affine(negc, posc).conjugate);
    // nilpotent summands must match
    AffineOperator<Rat> nil1{direct_sum(Matrix<Rat>::identity(1),
                                        nilpotent_from_segre<Rat>({2})),
                             {Rat(1), Rat(0), Rat(0)}};
    AffineOperator<Rat> nil2{direct_sum(Matrix<Rat>::identity(2),
                                        nilpotent_from_segre<Rat>({1})),
                             {Rat(1), Rat(0), Rat(0)}};
    Verdict w = decide_affine(nil1, nil2);
    CHECK_FALSE(w.conjugate);
    CHECK(w.reason == Reason::NILPOTENT_MISMATCH);
    // contracting/expanding content is absorbed entirely
    AffineOperator<Rat> absorb{
        direct_sum(Matrix<Rat>::identity(1),
                   Matrix<Rat>({{Rat(7), Rat(0)}, {Rat(0), Rat(1, 9)}})),
        {Rat(1), Rat(2), Rat(3)}};
    CanonicalForm<Rat> cfa = canonical_affine(absorb);
    CHECK(cfa.k == 3);
    CHECK(cfa.epsilon == +1);
    CHECK(cfa.segre.empty());
}

TEST_CASE("fixed point presence separates affine operators", "[conjugacy]") {
    AffineOperator<Rat> f{Matrix<Rat>::identity(1), {Rat(1)}};
    AffineOperator<Rat> g{Matrix<Rat>({{Rat(2)}}), {Rat(1)}};
    Verdict v = decide_affine(f, g);
    CHECK_FALSE(v.conjugate);
    CHECK(v.reason == Reason::FIXED_POINT_MISMATCH);
    CHECK_THROWS_AS(
        decide_affine(f, AffineOperator<Rat>{Matrix<Rat>::identity(2),
                                             {Rat(1), Rat(0)}}),
        DimensionMismatch);
}

TEST_CASE("no-fixed-point canonical data is base-change invariant",
          "[conjugacy]") {
    std::mt19937_64 rng(75);
    Matrix<Rat> A0 = direct_sum(
        direct_sum(Matrix<Rat>::identity(1), Matrix<Rat>({{Rat(-3)}})),
        nilpotent_from_segre<Rat>({2}));
    std::vector<Rat> b0{Rat(1), Rat(0), Rat(0), Rat(0)};
    AffineOperator<Rat> f{A0, b0};
    CanonicalForm<Rat> cf = canonical_affine(f);
    CHECK(cf.no_fixed_point);
    CHECK(cf.k == 1);
    CHECK(cf.epsilon == -1);
    CHECK(cf.segre == SegreCharacteristic{2});
    for (int t = 0; t < 15; ++t) {
        Matrix<Rat> S = random_invertible<Rat>(rng, 4, 2);
        AffineOperator<Rat> g{S * A0 * *inverse(S), S * b0};
        CHECK(canonical_affine(g) == cf);
        CHECK(decide_affine(f, g).conjugate);
    }
    // realize round-trip
    AffineOperator<Rat> rep = realize(cf);
    CHECK(canonical_affine(rep) == cf);
    CHECK(decide_affine(rep, f).conjugate);
}

TEST_CASE("canonical fixed-point forms on literal operators", "[conjugacy]") {
    // [1/2] + [1/2] + [-2] + J2(0)
    Matrix<Rat> A = direct_sum(
        direct_sum(diag_op<Rat>({Rat(1, 2), Rat(1, 2)}, {Rat(0), Rat(0)}).A,
                   Matrix<Rat>({{Rat(-2)}})),
        nilpotent_from_segre<Rat>({2}));
    CanonicalForm<Rat> cf = canonical_linear(A);
    CHECK_FALSE(cf.no_fixed_point);
    CHECK(cf.n_half == 2);
    CHECK_FALSE(cf.neg_half);
    CHECK(cf.n_two == 0);
    CHECK(cf.neg_two);
    CHECK(cf.nilpotent_segre == SegreCharacteristic{2});
    CHECK(cf.unit_blocks.empty());
    // [-1/2][-1/2] has positive stratum sign: no neg_half flag
    Matrix<Rat> B = diag_op<Rat>({Rat(-1, 2), Rat(-1, 2)}, {Rat(0), Rat(0)}).A;
    CanonicalForm<Rat> cfb = canonical_linear(B);
    CHECK(cfb.n_half == 2);
    CHECK_FALSE(cfb.neg_half);
    // unit blocks carry the conjugate-class factor
    Poly<Rat> q({Rat(1), Rat(-6, 5), Rat(1)});
    CanonicalForm<Rat> cfu = canonical_linear(companion(q));
    REQUIRE(cfu.unit_blocks.size() == 1);
    CHECK(cfu.unit_blocks[0].factor == q);
    CHECK(cfu.unit_blocks[0].size == 1);
    CHECK(cfu.unit_blocks[0].count == 1);
}
