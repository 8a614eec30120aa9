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

#include "affclass/witness.hpp"
#include "helpers.hpp"

using namespace affclass;
using testutil::random_invertible;

TEST_CASE("translation witness conjugates onto the linear part exactly",
          "[witness]") {
    std::mt19937_64 rng(81);
    int done = 0;
    while (done < 50) {
        size_t n = 1 + static_cast<size_t>(done) % 4;
        AffineOperator<Rat> f{testutil::random_matrix<Rat>(rng, n, 4, 2),
                              std::vector<Rat>(n)};
        for (auto& v : f.b) v = testutil::random_rat(rng);
        auto p = fixed_point(f);
        if (!p) continue;
        ++done;
        std::vector<Rat> t(n);
        for (size_t i = 0; i < n; ++i) t[i] = -(*p)[i];
        Witness<Rat> h = translation_witness<Rat>(t);
        AffineOperator<Rat> g{f.A, std::vector<Rat>(n, Rat(0))};
        VerifyReport<Rat> rep = verify_conjugacy_report(f, g, h);
        CHECK(rep.residual == 0.0);  // exact witness, exact samples
    }
}

TEST_CASE("polynomial unipotent witness: frozen values and exact residuals",
          "[witness]") {
    // in two variables, h(f(1,0)) = (2,0)
    AffineOperator<Rat> f{jordan_block(Rat(1), 2), {Rat(1), Rat(0)}};
    Witness<Rat> h = poly_unipotent_witness<Rat>(2);
    CHECK(h.forward_exact(f({Rat(1), Rat(0)})) ==
          std::vector<Rat>{Rat(2), Rat(0)});
    // first correction polynomial at x1 = 3 evaluates to -3
    CHECK(witness_detail::unipotent_P(std::vector<Rat>{Rat(3)}, 1) == Rat(-3));
    for (size_t m = 1; m <= 6; ++m) {
        AffineOperator<Rat> fm{jordan_block(Rat(1), m), std::vector<Rat>(m, Rat(0))};
        fm.b[0] = Rat(1);
        AffineOperator<Rat> gm{Matrix<Rat>::identity(m), fm.b};
        CHECK(verify_conjugacy(fm, gm, poly_unipotent_witness<Rat>(m), 60) == 0.0);
    }
    // inverse round-trips exactly on rational points
    std::mt19937_64 rng(82);
    Witness<Rat> h4 = poly_unipotent_witness<Rat>(4);
    for (int t = 0; t < 40; ++t) {
        std::vector<Rat> x(4);
        for (auto& v : x) v = testutil::random_rat(rng, 6, 3);
        CHECK(h4.inverse_exact(h4.forward_exact(x)) == x);
    }
}

TEST_CASE("lower-triangular commutant witness normalizes the translation",
          "[witness]") {
    std::vector<Rat> a{Rat(2), Rat(0), Rat(1)};
    Matrix<Rat> S = toeplitz_of(a);
    CHECK(S == Matrix<Rat>({{Rat(2), Rat(0), Rat(0)},
                            {Rat(0), Rat(2), Rat(0)},
                            {Rat(1), Rat(0), Rat(2)}}));
    // S commutes with the unipotent Jordan block and sends e1 to a
    Matrix<Rat> J = jordan_block(Rat(1), 3);
    CHECK(S * J == J * S);
    AffineOperator<Rat> f{J, {Rat(1), Rat(0), Rat(0)}};
    AffineOperator<Rat> g{J, a};
    CHECK(verify_conjugacy(f, g, step3_witness(a), 60) == 0.0);
}

TEST_CASE("real matrix logarithm on invertible inputs", "[witness]") {
    // -I2 has log pi*[[0,-1],[1,0]]
    Eigen::MatrixXd F = -Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd G = matrix_log_real(F);
    CHECK((G.exp() - F).norm() < 1e-12);
    CHECK(std::abs(G(0, 1) + std::acos(-1.0)) < 1e-12);
    // a lone [-1] has no real logarithm
    Eigen::MatrixXd M1(1, 1);
    M1(0, 0) = -1;
    CHECK_THROWS_AS(matrix_log_real(M1), NoRealLogError);
    // paired defective negative blocks succeed
    Eigen::MatrixXd F4 = Eigen::MatrixXd::Zero(4, 4);
    F4(0, 0) = F4(1, 1) = F4(2, 2) = F4(3, 3) = -1;
    F4(1, 0) = F4(3, 2) = 1;
    Eigen::MatrixXd G4 = matrix_log_real(F4);
    CHECK((G4.exp() - F4).norm() < 1e-10);
    // an odd count of some negative block size fails
    Eigen::MatrixXd F4o = Eigen::MatrixXd::Zero(4, 4);
    F4o(0, 0) = F4o(1, 1) = F4o(2, 2) = F4o(3, 3) = -1;
    F4o(1, 0) = 1;
    CHECK_THROWS_AS(matrix_log_real(F4o), NoRealLogError);
    // random positive-spectrum matrices always succeed
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
        for (int i = 0; i < 3; ++i) D(i, i) = u(rng);
        Eigen::MatrixXd S = Eigen::MatrixXd::Random(3, 3);
        while (std::abs(S.determinant()) < 0.1) S = Eigen::MatrixXd::Random(3, 3);
        Eigen::MatrixXd A = S * D * S.inverse();
        CHECK((matrix_log_real(A).exp() - A).norm() < 1e-8);
    }
}

TEST_CASE("complex matrix logarithm avoids the branch cut", "[witness]") {
    std::mt19937_64 rng(84);
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXcd S = Eigen::MatrixXcd::Random(3, 3);
        while (std::abs(S.determinant()) < 0.1) S = Eigen::MatrixXcd::Random(3, 3);
        Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(3, 3);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int i = 0; i < 3; ++i) {
            D(i, i) = std::complex<double>(u(rng), u(rng));
            if (std::abs(D(i, i)) < 0.2) D(i, i) += 1.0;
        }
        Eigen::MatrixXcd A = S * D * S.inverse();
        CHECK((matrix_log(A).exp() - A).norm() < 1e-7);
    }
    // works on a matrix with a negative real eigenvalue
    Eigen::MatrixXcd N(1, 1);
    N(0, 0) = -2.0;
    Eigen::MatrixXcd E = matrix_log(N).exp();
    CHECK(std::abs(E(0, 0) - std::complex<double>(-2.0, 0.0)) < 1e-12);
}

TEST_CASE("flow stage removes commuting invertible content", "[witness]") {
    Matrix<Rat> A({{Rat(1), Rat(0)}, {Rat(0), Rat(3)}});
    AffineOperator<Rat> f{A, {Rat(1), Rat(0)}};
    AffineOperator<Rat> g{Matrix<Rat>::identity(2), {Rat(1), Rat(0)}};
    Witness<Rat> h = flow_witness(Matrix<Rat>({{Rat(3)}}));
    CHECK(verify_conjugacy(f, g, h) < kFlowTol);
}

TEST_CASE("exact nilpotent chain basis reproduces the block structure",
          "[witness]") {
    std::mt19937_64 rng(85);
    for (size_t n = 2; n <= 6; ++n) {
        for (const auto& part : testutil::partitions(n)) {
            Matrix<Rat> N0 = nilpotent_from_segre<Rat>(part);
            Matrix<Rat> S = random_invertible<Rat>(rng, n, 2);
            Matrix<Rat> N = S * N0 * *inverse(S);
            auto [C, segre] = jordan_chain_basis(N);
            CHECK(segre == part);
            auto Cinv = inverse(C);
            REQUIRE(Cinv.has_value());
            CHECK(*Cinv * N * C == N0);
        }
    }
}

TEST_CASE("no-fixed-point pipeline: witness verifies against the canonical form",
          "[witness]") {
    auto run = [](const AffineOperator<Rat>& f) {
        auto res = nofix_pipeline(f);
        AffineOperator<Rat> canon = res.canonical;
        CHECK(canon == realize(canonical_affine(f)));
        return verify_conjugacy(f, canon, res.witness);
    };
    CHECK(run({Matrix<Rat>::identity(1), {Rat(1)}}) == 0.0);
    CHECK(run({jordan_block(Rat(1), 2), {Rat(1), Rat(0)}}) == 0.0);
    CHECK(run({jordan_block(Rat(1), 3), {Rat(2), Rat(0), Rat(1)}}) == 0.0);
    CHECK(run({Matrix<Rat>({{Rat(1), Rat(0)}, {Rat(0), Rat(-1)}}),
               {Rat(1), Rat(0)}}) < kVerifyTol);
    CHECK(run({direct_sum(Matrix<Rat>::identity(1),
                          Matrix<Rat>({{Rat(-1), Rat(0)}, {Rat(0), Rat(-1)}})),
               {Rat(1), Rat(0), Rat(0)}}) < kVerifyTol);
    CHECK(run({direct_sum(Matrix<Rat>::identity(1), Matrix<Rat>({{Rat(-3)}})),
               {Rat(1), Rat(0)}}) < kVerifyTol);
    // defective negative pair
    Matrix<Rat> Apair = direct_sum(
        Matrix<Rat>::identity(1),
        direct_sum(jordan_block(Rat(-2), 2), jordan_block(Rat(-2), 2)));
    CHECK(run({Apair, std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(0), Rat(0)}}) <
          kVerifyTol);
}

TEST_CASE("pipeline on base-changed mixed operators", "[witness]") {
    std::mt19937_64 rng(86);
    Matrix<Rat> A0 = direct_sum(
        direct_sum(jordan_block(Rat(1), 2), Matrix<Rat>({{Rat(3)}})),
        Matrix<Rat>({{Rat(0)}}));
    for (int t = 0; t < 8; ++t) {
        Matrix<Rat> S = random_invertible<Rat>(rng, 4, 2);
        std::vector<Rat> b = S * std::vector<Rat>{Rat(1), Rat(2), Rat(3), Rat(-1)};
        AffineOperator<Rat> f{S * A0 * *inverse(S), b};
        REQUIRE_FALSE(fixed_point(f).has_value());
        auto res = nofix_pipeline(f);
        CHECK(verify_conjugacy(f, res.canonical, res.witness) < kVerifyTol);
    }
}

TEST_CASE("pipeline over the complex rationals", "[witness]") {
    Matrix<GRat> A(2, 2);
    A(0, 0) = GRat(1);
    A(1, 1) = GRat(Rat(0), Rat(1));
    AffineOperator<GRat> f{A, {GRat(1), GRat(0)}};
    auto res = nofix_pipeline(f);
    CHECK(verify_conjugacy(f, res.canonical, res.witness) < kVerifyTol);
    // purely unipotent input keeps the witness exact
    AffineOperator<GRat> g{jordan_block(GRat(1), 3),
                           {GRat(1), GRat(0), GRat(0)}};
    auto res2 = nofix_pipeline(g);
    CHECK(res2.witness.exact());
    CHECK(verify_conjugacy(g, res2.canonical, res2.witness, 60) == 0.0);
}

TEST_CASE("verify reports a violation for a wrong witness", "[witness]") {
    AffineOperator<Rat> f{Matrix<Rat>({{Rat(2)}}), {Rat(1)}};
    AffineOperator<Rat> g{f.A, {Rat(0)}};
    // fixed point of f is -1; the correct translation is +1, so -5 is wrong
    Witness<Rat> bad = translation_witness<Rat>({Rat(-5)});
    VerifyReport<Rat> rep = verify_conjugacy_report(f, g, bad);
    CHECK(rep.residual > kVerifyTol);
    CHECK(rep.argmax_point.size() == 1);
}

TEST_CASE("witness inverse round-trips within tolerance", "[witness]") {
    Matrix<Rat> A0 = direct_sum(Matrix<Rat>::identity(1), Matrix<Rat>({{Rat(-3)}}));
    AffineOperator<Rat> f{A0, {Rat(1), Rat(0)}};
    auto res = nofix_pipeline(f);
    std::mt19937_64 rng(87);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> x{u(rng), u(rng)};
        std::vector<double> y = res.witness.inverse_numeric(res.witness.forward_numeric(x));
        double err = std::max(std::abs(y[0] - x[0]), std::abs(y[1] - x[1]));
        CHECK(err < kRoundtripTol);
    }
}
