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

#ifndef AFFCLASS_REAL_ROOTS_HPP
#define AFFCLASS_REAL_ROOTS_HPP

#include <optional>
#include <vector>

#include "affclass/poly.hpp"
#include "affclass/scalar.hpp"

namespace affclass {

/// Exact real-root counting for rational polynomials via Sturm sequences.
/// Counts are of *distinct* real roots; callers weight by multiplicity
/// through square-free layers when needed.
namespace sturm {

inline std::vector<Poly<Rat>> chain(const Poly<Rat>& p) {
    std::vector<Poly<Rat>> c;
    c.push_back(p);
    Poly<Rat> d = p.derivative();
    if (!d.is_zero()) c.push_back(d);
    while (c.size() >= 2 && c.back().degree() > 0) {
        Poly<Rat> r = -(c[c.size() - 2] % c.back());
        if (r.is_zero()) break;
        c.push_back(std::move(r));
    }
    return c;
}

inline int variations(const std::vector<int>& signs) {
    int v = 0;
    int last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

/// Endpoint of a counting interval: finite rational or +-infinity.
struct Bound {
    std::optional<Rat> value;  // nullopt = infinite
    int inf_sign = 0;          // -1 or +1 when infinite
    static Bound at(const Rat& v) { return {v, 0}; }
    static Bound neg_inf() { return {std::nullopt, -1}; }
    static Bound pos_inf() { return {std::nullopt, +1}; }
};

inline int sign_at(const Poly<Rat>& p, const Bound& b) {
    if (p.is_zero()) return 0;
    if (b.value) return sign(p.eval(*b.value));
    int s = sign(p.lead());
    if (b.inf_sign < 0 && (p.degree() % 2 != 0)) s = -s;
    return s;
}

inline int variations_at(const std::vector<Poly<Rat>>& c, const Bound& b) {
    std::vector<int> signs;
    signs.reserve(c.size());
    for (const auto& p : c) signs.push_back(sign_at(p, b));
    return variations(signs);
}

}  // namespace sturm

/// Number of distinct real roots of p in the open interval (lo, hi).
/// Roots exactly at finite endpoints are excluded (divided out first).
inline int count_real_roots_in(const Poly<Rat>& p, const sturm::Bound& lo,
                               const sturm::Bound& hi) {
    if (p.is_zero()) throw std::domain_error("root count of zero polynomial");
    Poly<Rat> q = p;
    for (const sturm::Bound* b : {&lo, &hi}) {
        if (!b->value) continue;
        Poly<Rat> lin({-*b->value, Rat(1)});
        while (!q.is_zero() && q.eval(*b->value) == 0) q = q / lin;
    }
    if (q.degree() <= 0) return 0;
    auto c = sturm::chain(q);
    return sturm::variations_at(c, lo) - sturm::variations_at(c, hi);
}

inline int count_real_roots(const Poly<Rat>& p) {
    if (p.degree() <= 0) return 0;
    auto c = sturm::chain(p);
    return sturm::variations_at(c, sturm::Bound::neg_inf()) -
           sturm::variations_at(c, sturm::Bound::pos_inf());
}

/// Multiplicity-weighted count of real roots in the open interval.
inline int count_real_roots_in_mult(const Poly<Rat>& p, const sturm::Bound& lo,
                                    const sturm::Bound& hi) {
    int total = 0;
    for (const auto& [layer, mult] : squarefree_decompose(p))
        total += static_cast<int>(mult) * count_real_roots_in(layer, lo, hi);
    return total;
}

}  // namespace affclass

#endif  // AFFCLASS_REAL_ROOTS_HPP
