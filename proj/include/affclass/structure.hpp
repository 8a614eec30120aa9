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

#ifndef AFFCLASS_STRUCTURE_HPP
#define AFFCLASS_STRUCTURE_HPP

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "affclass/factor.hpp"
#include "affclass/matrix.hpp"
#include "affclass/poly.hpp"
#include "affclass/scalar.hpp"

namespace affclass {

/// Multiset of Jordan block sizes of a nilpotent matrix, sorted descending.
using SegreCharacteristic = std::vector<size_t>;

/// Block sizes from the rank sequence: #blocks of size >= j equals
/// rank(N^{j-1}) - rank(N^j).
template <class K>
SegreCharacteristic segre_of_nilpotent(const Matrix<K>& N) {
    if (!N.is_square()) throw DimensionMismatch("segre_of_nilpotent: non-square");
    size_t n = N.rows();
    if (!mat_pow(N, n).is_zero())
        throw std::domain_error("segre_of_nilpotent: input not nilpotent");
    std::vector<size_t> r{n};  // r[j] = rank(N^j)
    Matrix<K> P = Matrix<K>::identity(n);
    for (size_t j = 1; j <= n && r.back() > 0; ++j) {
        P = P * N;
        r.push_back(rank(P));
    }
    while (r.back() != 0) r.push_back(0);
    SegreCharacteristic out;
    for (size_t j = 1; j + 1 <= r.size(); ++j) {
        size_t ge_j = r[j - 1] - r[j];
        size_t ge_j1 = (j + 1 < r.size()) ? r[j] - r[j + 1] : 0;
        for (size_t c = 0; c < ge_j - ge_j1; ++c) out.push_back(j);
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

/// Lower-triangular Jordan block: lambda on the diagonal, ones on the first
/// subdiagonal.
template <class K>
Matrix<K> jordan_block(const K& lambda, size_t n) {
    if (n == 0) throw std::invalid_argument("jordan_block: size must be >= 1");
    Matrix<K> J(n, n);
    for (size_t i = 0; i < n; ++i) J(i, i) = lambda;
    for (size_t i = 0; i + 1 < n; ++i) J(i + 1, i) = K(1);
    return J;
}

/// Direct sum of nilpotent Jordan blocks with the given sizes.
template <class K>
Matrix<K> nilpotent_from_segre(const SegreCharacteristic& segre) {
    Matrix<K> out;
    for (size_t s : segre) out = direct_sum(out, jordan_block(K(0), s));
    return out;
}

/// Companion matrix of a monic polynomial (ones on the subdiagonal, minus
/// the coefficients in the last column); charpoly(companion(p)) = p.
template <class K>
Matrix<K> companion(const Poly<K>& p) {
    if (p.degree() < 1) throw std::invalid_argument("companion: degree must be >= 1");
    Poly<K> m = p.monic();
    size_t d = static_cast<size_t>(m.degree());
    Matrix<K> C(d, d);
    for (size_t i = 0; i + 1 < d; ++i) C(i + 1, i) = K(1);
    for (size_t i = 0; i < d; ++i) C(i, d - 1) = -m[i];
    return C;
}

/// Jordan data of A at the roots of one irreducible q: (size, count) pairs,
/// count per individual root (uniform across the roots of an irreducible
/// factor). #blocks of size >= j at each root equals
/// (rank q(A)^{j-1} - rank q(A)^j) / deg q.
template <class K>
std::vector<std::pair<size_t, size_t>> block_structure_at_irreducible(
    const Matrix<K>& A, const Poly<K>& q) {
    if (!A.is_square()) throw DimensionMismatch("block structure of non-square");
    size_t n = A.rows();
    size_t d = static_cast<size_t>(q.degree());
    Matrix<K> QA = mat_poly_eval(q.monic(), A);
    std::vector<size_t> r{n};  // r[j] = rank(q(A)^j)
    Matrix<K> P = Matrix<K>::identity(n);
    for (size_t j = 1; j <= n; ++j) {
        P = P * QA;
        r.push_back(rank(P));
    }
    r.push_back(r.back());
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t j = 1; j <= n; ++j) {
        size_t ge_j = r[j - 1] - r[j];
        size_t ge_j1 = r[j] - r[j + 1];
        if (ge_j < ge_j1 || ge_j % d != 0 || ge_j1 % d != 0)
            throw std::logic_error("block structure: rank sequence inconsistent");
        size_t cnt = (ge_j - ge_j1) / d;
        if (cnt > 0) out.emplace_back(j, cnt);
    }
    return out;
}

/// Per-root Jordan data of A across all irreducible factors of a
/// square-free divisor q of charpoly(A); counts for equal sizes are summed.
template <class K>
std::vector<std::pair<size_t, size_t>> block_structure_at_factor(const Matrix<K>& A,
                                                                 const Poly<K>& q) {
    if (q.degree() < 1)
        throw std::domain_error("block_structure_at_factor: constant factor");
    if (!is_squarefree(q))
        throw std::domain_error("block_structure_at_factor: q not square-free");
    if (!divides(q.monic(), charpoly(A)))
        throw std::domain_error("block_structure_at_factor: q does not divide charpoly");
    std::vector<std::pair<size_t, size_t>> merged;
    for (const Poly<K>& f : factor_squarefree_poly(q))
        for (auto [size, count] : block_structure_at_irreducible(A, f)) {
            auto it = std::find_if(merged.begin(), merged.end(),
                                   [&](const auto& p) { return p.first == size; });
            if (it == merged.end())
                merged.emplace_back(size, count);
            else
                it->second += count;
        }
    std::sort(merged.begin(), merged.end());
    return merged;
}

/// Realification: each entry a+bi becomes the 2x2 block [[a,-b],[b,a]].
/// charpoly(realify(M)) = charpoly(M) * charpoly(conj(M)).
inline Matrix<Rat> realify(const Matrix<GRat>& M) {
    Matrix<Rat> R(2 * M.rows(), 2 * M.cols());
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j) {
            const GRat& z = M(i, j);
            R(2 * i, 2 * j) = z.re;
            R(2 * i, 2 * j + 1) = -z.im;
            R(2 * i + 1, 2 * j) = z.im;
            R(2 * i + 1, 2 * j + 1) = z.re;
        }
    return R;
}

/// Embeds a rational matrix into the Gaussian rationals.
inline Matrix<GRat> complexify(const Matrix<Rat>& M) {
    Matrix<GRat> C(M.rows(), M.cols());
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j) C(i, j) = GRat(M(i, j));
    return C;
}

}  // namespace affclass

#endif  // AFFCLASS_STRUCTURE_HPP
