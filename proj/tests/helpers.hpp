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

#ifndef AFFCLASS_TESTS_HELPERS_HPP
#define AFFCLASS_TESTS_HELPERS_HPP

#include <random>
#include <vector>

#include "affclass/matrix.hpp"
#include "affclass/poly.hpp"
#include "affclass/scalar.hpp"

namespace testutil {

using affclass::GRat;
using affclass::Matrix;
using affclass::Poly;
using affclass::Rat;

inline Rat random_rat(std::mt19937_64& rng, int max_num = 9, int max_den = 4) {
    std::uniform_int_distribution<int> num(-max_num, max_num);
    std::uniform_int_distribution<int> den(1, max_den);
    Rat r(num(rng), den(rng));
    r.canonicalize();  // mpq_class(num, den) does not reduce by itself
    return r;
}

template <class K>
K random_scalar(std::mt19937_64& rng, int max_num = 9, int max_den = 4) {
    if constexpr (affclass::field_traits<K>::is_complex) {
        return affclass::field_traits<K>::from_parts(random_rat(rng, max_num, max_den),
                                                     random_rat(rng, max_num, max_den));
    } else {
        return K(random_rat(rng, max_num, max_den));
    }
}

template <class K>
Matrix<K> random_matrix(std::mt19937_64& rng, size_t n, int max_num = 9,
                        int max_den = 4) {
    Matrix<K> M(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) M(i, j) = random_scalar<K>(rng, max_num, max_den);
    return M;
}

/// Unit lower-triangular times unit upper-triangular: always invertible.
template <class K>
Matrix<K> random_invertible(std::mt19937_64& rng, size_t n, int max_num = 3) {
    Matrix<K> L = Matrix<K>::identity(n), U = Matrix<K>::identity(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < i; ++j) {
            L(i, j) = random_scalar<K>(rng, max_num, 2);
            U(j, i) = random_scalar<K>(rng, max_num, 2);
        }
    return L * U;
}

template <class K>
Poly<K> random_poly(std::mt19937_64& rng, int max_deg, int max_num = 9) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    int d = deg(rng);
    std::vector<K> c(static_cast<size_t>(d) + 1);
    for (auto& v : c) v = random_scalar<K>(rng, max_num, 1);
    if (c.back() == K(0)) c.back() = K(1);
    return Poly<K>(c);
}

/// All partitions of n into parts in descending order.
inline std::vector<std::vector<size_t>> partitions(size_t n) {
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> cur;
    auto rec = [&](auto&& self, size_t rem, size_t maxpart) -> void {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        for (size_t p = std::min(rem, maxpart); p >= 1; --p) {
            cur.push_back(p);
            self(self, rem - p, p);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

}  // namespace testutil

#endif  // AFFCLASS_TESTS_HELPERS_HPP
