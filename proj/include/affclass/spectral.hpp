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

#ifndef AFFCLASS_SPECTRAL_HPP
#define AFFCLASS_SPECTRAL_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "affclass/factor.hpp"
#include "affclass/matrix.hpp"
#include "affclass/poly.hpp"
#include "affclass/real_roots.hpp"
#include "affclass/scalar.hpp"

namespace affclass {

// Exact eigenvalue classification by modulus. No floating point enters any
// count: the unit circle is handled by a Moebius substitution plus Sturm
// sequences, and the open disk/exterior by root-squaring with a coefficient
// dominance test whose success certifies the counts.

namespace spectral_detail {

/// q(t) = (1-t)^n * p((1+t)/(1-t)). Maps the unit circle (minus z=-1) to
/// the imaginary axis; requires p(-1) != 0 so that deg q = deg p.
template <class K>
Poly<K> moebius_to_axis(const Poly<K>& p) {
    size_t n = static_cast<size_t>(p.degree());
    std::vector<Poly<K>> up(n + 1), dn(n + 1);
    up[0] = dn[0] = Poly<K>::constant(K(1));
    Poly<K> one_plus({K(1), K(1)}), one_minus({K(1), K(-1)});
    for (size_t k = 1; k <= n; ++k) {
        up[k] = up[k - 1] * one_plus;
        dn[k] = dn[k - 1] * one_minus;
    }
    Poly<K> q;
    for (size_t k = 0; k <= n; ++k) q = q + up[k] * dn[n - k] * p[k];
    return q;
}

/// Splits q(i*w) into real and imaginary parts as rational polynomials in w.
template <class K>
std::pair<Poly<Rat>, Poly<Rat>> axis_split(const Poly<K>& q) {
    std::vector<Rat> re(q.coeffs().size(), Rat(0)), im(q.coeffs().size(), Rat(0));
    for (size_t j = 0; j < q.coeffs().size(); ++j) {
        Rat a = field_traits<K>::re(q[j]);
        Rat b = field_traits<K>::im(q[j]);
        switch (j % 4) {  // coefficient times i^j
            case 0: re[j] = a; im[j] = b; break;
            case 1: re[j] = -b; im[j] = a; break;
            case 2: re[j] = -a; im[j] = -b; break;
            default: re[j] = b; im[j] = -a; break;
        }
    }
    return {Poly<Rat>(std::move(re)), Poly<Rat>(std::move(im))};
}

/// Rational bounds lo <= |z| <= hi, exact for rational z.
inline void abs_bounds(const Rat& x, Rat& lo, Rat& hi) { lo = hi = abs_rat(x); }
inline void abs_bounds(const GRat& z, Rat& lo, Rat& hi) {
    Rat n = norm2(z);
    if (n == 0) {
        lo = hi = 0;
        return;
    }
    // sqrt(a/b) = sqrt(a*b)/b; 2^64 scaling keeps the bracket tight.
    Int s, scaled = n.get_num() * n.get_den();
    scaled <<= 64;
    mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
    Rat denom = Rat(n.get_den()) * rat_pow(Rat(2), 32);
    lo = Rat(s) / denom;
    hi = Rat(s + 1) / denom;
}

/// Coefficient dominance count: if |p_m| r^m exceeds the sum of all other
/// |p_j| r^j then p has exactly m roots in |z| < r and none on |z| = r.
template <class K>
std::optional<size_t> dominance_count(const Poly<K>& p, const Rat& r) {
    size_t d = static_cast<size_t>(p.degree());
    std::vector<Rat> lo(d + 1), hi(d + 1);
    Rat rp(1);
    for (size_t j = 0; j <= d; ++j) {
        abs_bounds(p[j], lo[j], hi[j]);
        lo[j] *= rp;
        hi[j] *= rp;
        rp *= r;
    }
    Rat total(0);
    for (size_t j = 0; j <= d; ++j) total += hi[j];
    for (size_t m = 0; m <= d; ++m)
        if (lo[m] > total - hi[m]) return m;
    return std::nullopt;
}

/// Root-squaring step: returns the monic polynomial whose roots are the
/// squares of the roots of p (same degree, multiplicities preserved).
template <class K>
Poly<K> graeffe_step(const Poly<K>& p) {
    std::vector<K> ev, od;
    for (size_t j = 0; j < p.coeffs().size(); ++j)
        (j % 2 == 0 ? ev : od).push_back(p[j]);
    Poly<K> e(std::move(ev)), o(std::move(od));
    return (e * e - Poly<K>::x() * (o * o)).monic();
}

}  // namespace spectral_detail

/// Exact number of distinct roots of a square-free polynomial with |z| = 1.
/// z = +-1 are divided out and tested directly; the rest go through the
/// substitution z = (1+t)/(1-t) (circle -> imaginary axis) and a Sturm count
/// of the common real roots of Re and Im of q(i*w).
template <class K>
size_t count_roots_on_unit_circle(const Poly<K>& p) {
    if (p.is_zero()) throw std::domain_error("circle count of zero polynomial");
    if (!is_squarefree(p))
        throw std::domain_error("count_roots_on_unit_circle: input not square-free");
    Poly<K> f = p.monic();
    size_t cnt = 0;
    for (int z : {1, -1}) {
        if (f.degree() >= 1 && f.eval(K(z)) == K(0)) {
            ++cnt;
            f = f / Poly<K>({K(-z), K(1)});
        }
    }
    if (f.degree() <= 0) return cnt;
    Poly<K> q = spectral_detail::moebius_to_axis(f);
    auto [re, im] = spectral_detail::axis_split(q);
    Poly<Rat> g = poly_gcd(re, im);
    if (g.degree() > 0) cnt += static_cast<size_t>(count_real_roots(g));
    return cnt;
}

struct DiskCounts {
    size_t inside = 0;   // |z| < 1
    size_t on = 0;       // |z| = 1
    size_t outside = 0;  // |z| > 1
};

/// Exact in/on/out counts for a square-free p with p(0) != 0. The on-count
/// is exact from the circle machinery; in/out come from iterated root
/// squaring until the dominance test succeeds at radius 1/2 for both p and
/// its reversal, certified by inside + on + outside = degree.
template <class K>
DiskCounts unit_disk_counts(const Poly<K>& p) {
    if (p.degree() < 0 || p[0] == K(0))
        throw std::domain_error("unit_disk_counts: zero root or zero polynomial");
    size_t d = static_cast<size_t>(p.degree());
    size_t on = count_roots_on_unit_circle(p);
    if (on == d) return {0, on, 0};
    Poly<K> g = p.monic();
    Poly<K> grev = p.reversed().monic();
    Rat half(1, 2);
    for (int iter = 0; iter < 64; ++iter) {
        auto mi = spectral_detail::dominance_count(g, half);
        auto mo = spectral_detail::dominance_count(grev, half);
        if (mi && mo && *mi + *mo + on == d) return {*mi, on, *mo};
        g = spectral_detail::graeffe_step(g);
        grev = spectral_detail::graeffe_step(grev);
    }
    throw std::runtime_error("unit_disk_counts: root-squaring did not separate");
}

/// Eigenvalue counts by modulus stratum, with the corresponding monic
/// polynomial factors. Counts are always exact. The four stratum factors
/// exist over the ground field only when no irreducible factor straddles
/// strata; straddling factors are reported in `mixed` and exact_split is
/// cleared (the product invariant p0*p01*p1*p1inf*prod(mixed^mult) = input
/// holds either way).
template <class K>
struct ModulusPartition {
    size_t n0 = 0, n01 = 0, n1 = 0, n1inf = 0;
    Poly<K> p0, p01, p1, p1inf;
    bool exact_split = true;
    std::vector<std::pair<Poly<K>, unsigned>> mixed;
};

template <class K>
ModulusPartition<K> modulus_partition(const Poly<K>& p) {
    if (p.is_zero()) throw std::domain_error("modulus_partition of zero polynomial");
    Poly<K> f = p.monic();
    ModulusPartition<K> mp;
    mp.n0 = f.valuation();
    mp.p0 = Poly<K>::monomial(K(1), mp.n0);
    mp.p01 = mp.p1 = mp.p1inf = Poly<K>::constant(K(1));
    Poly<K> work = f.shift_down(mp.n0);
    if (work.degree() <= 0) return mp;
    for (const auto& [layer, mult] : squarefree_decompose(work)) {
        for (const Poly<K>& q : factor_squarefree_poly(layer)) {
            size_t d = static_cast<size_t>(q.degree());
            size_t on = count_roots_on_unit_circle(q);
            if (on == d) {
                mp.n1 += mult * d;
                mp.p1 = mp.p1 * poly_pow(q, mult);
                continue;
            }
            DiskCounts c = unit_disk_counts(q);
            if (c.inside == d) {
                mp.n01 += mult * d;
                mp.p01 = mp.p01 * poly_pow(q, mult);
            } else if (c.outside == d) {
                mp.n1inf += mult * d;
                mp.p1inf = mp.p1inf * poly_pow(q, mult);
            } else {
                mp.exact_split = false;
                mp.mixed.emplace_back(q, mult);
                mp.n01 += mult * c.inside;
                mp.n1 += mult * c.on;
                mp.n1inf += mult * c.outside;
            }
        }
    }
    return mp;
}

/// k-th cyclotomic polynomial, by the recursion
/// Phi_k = (x^k - 1) / prod_{d | k, d < k} Phi_d. Cached (std::map nodes
/// are reference-stable across inserts).
inline const Poly<Rat>& cyclotomic(unsigned k) {
    static std::map<unsigned, Poly<Rat>> cache;
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    Poly<Rat> num = Poly<Rat>::monomial(Rat(1), k) - Poly<Rat>::constant(Rat(1));
    for (unsigned d = 1; d < k; ++d)
        if (k % d == 0) num = num / cyclotomic(d);
    return cache.emplace(k, std::move(num)).first->second;
}

inline unsigned euler_phi(unsigned k) {
    unsigned result = k;
    for (unsigned p = 2; p * p <= k; ++p) {
        if (k % p) continue;
        while (k % p == 0) k /= p;
        result -= result / p;
    }
    if (k > 1) result -= result / k;
    return result;
}

/// Smallest k such that gcd(p, Phi_k) is nonconstant, scanning all k with
/// phi(k) <= bound (any root of unity among roots of p has phi(k) at most
/// the relevant field degree of p). Returns (k, Phi_k) or absent.
template <class K>
std::optional<std::pair<unsigned, Poly<K>>> root_of_unity_factor(const Poly<K>& p,
                                                                 size_t bound) {
    if (p.degree() <= 0) return std::nullopt;
    // phi(k) >= sqrt(k/2), so phi(k) <= bound implies k <= 2*bound^2.
    unsigned kmax = 2 * static_cast<unsigned>(bound) * static_cast<unsigned>(bound) + 1;
    for (unsigned k = 1; k <= kmax; ++k) {
        if (euler_phi(k) > bound) continue;
        const Poly<Rat>& phi_q = cyclotomic(k);
        std::vector<K> c(phi_q.coeffs().size());
        for (size_t j = 0; j < c.size(); ++j) c[j] = K(phi_q[j]);
        Poly<K> phi_k(std::move(c));
        if (poly_gcd(p, phi_k).degree() > 0) return std::make_pair(k, phi_k);
    }
    return std::nullopt;
}

/// A = S (A_ns + A_nil) S^{-1} block-diagonally: A_ns nonsingular on
/// image(A^n), A_nil nilpotent on ker(A^n).
template <class K>
struct FittingSplit {
    Matrix<K> nonsingular_part;  // r x r, invertible
    Matrix<K> nilpotent_part;    // (n-r) x (n-r), nilpotent
    Matrix<K> transition;        // S with S^{-1} A S = ns (+) nil
};

template <class K>
FittingSplit<K> fitting_split(const Matrix<K>& A) {
    if (!A.is_square()) throw DimensionMismatch("fitting_split of non-square");
    size_t n = A.rows();
    Matrix<K> An = mat_pow(A, n);
    Matrix<K> img = image_basis(An);
    Matrix<K> ker = kernel_basis(An);
    size_t r = img.cols();
    Matrix<K> S(n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < r; ++j) S(i, j) = img(i, j);
        for (size_t j = 0; j < n - r; ++j) S(i, r + j) = ker(i, j);
    }
    auto Sinv = inverse(S);
    if (!Sinv) throw std::logic_error("fitting_split: basis assembly failed");
    Matrix<K> B = *Sinv * A * S;
    Matrix<K> ns = B.submatrix(0, 0, r, r);
    Matrix<K> nil = B.submatrix(r, r, n - r, n - r);
    if (!B.submatrix(0, r, r, n - r).is_zero() ||
        !B.submatrix(r, 0, n - r, r).is_zero() ||
        !mat_pow(nil, n - r).is_zero() || determinant(ns) == K(0))
        throw std::logic_error("fitting_split: block verification failed");
    return {std::move(ns), std::move(nil), std::move(S)};
}

/// Invariant factors d_1 | d_2 | ... | d_r of A: nonconstant diagonal of
/// the Smith normal form of xI - A over K[x]. Product = charpoly; equal
/// chains characterize similarity over the ground field.
template <class K>
std::vector<Poly<K>> invariant_factors(const Matrix<K>& A) {
    if (!A.is_square()) throw DimensionMismatch("invariant_factors of non-square");
    size_t n = A.rows();
    std::vector<std::vector<Poly<K>>> P(n, std::vector<Poly<K>>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            P[i][j] = (i == j) ? Poly<K>({-A(i, i), K(1)}) : Poly<K>::constant(-A(i, j));

    for (size_t t = 0; t < n; ++t) {
        for (;;) {
            // Pivot: a nonzero entry of minimal degree in the trailing block.
            size_t pi = t, pj = t;
            int best = -1;
            for (size_t i = t; i < n; ++i)
                for (size_t j = t; j < n; ++j)
                    if (!P[i][j].is_zero() &&
                        (best < 0 || P[i][j].degree() < best)) {
                        best = P[i][j].degree();
                        pi = i;
                        pj = j;
                    }
            if (best < 0) {
                t = n;
                break;
            }
            std::swap(P[t], P[pi]);
            for (size_t i = 0; i < n; ++i) std::swap(P[i][t], P[i][pj]);

            bool reduced = true;
            for (size_t i = t + 1; i < n; ++i) {
                if (P[i][t].is_zero()) continue;
                auto [q, rem] = divmod(P[i][t], P[t][t]);
                for (size_t j = t; j < n; ++j) P[i][j] = P[i][j] - q * P[t][j];
                if (!rem.is_zero()) reduced = false;
            }
            for (size_t j = t + 1; j < n; ++j) {
                if (P[t][j].is_zero()) continue;
                auto [q, rem] = divmod(P[t][j], P[t][t]);
                for (size_t i = t; i < n; ++i) P[i][j] = P[i][j] - P[i][t] * q;
                if (!rem.is_zero()) reduced = false;
            }
            if (!reduced) continue;
            bool cleared = true;
            for (size_t i = t + 1; i < n && cleared; ++i) cleared = P[i][t].is_zero();
            for (size_t j = t + 1; j < n && cleared; ++j) cleared = P[t][j].is_zero();
            if (!cleared) continue;
            // Divisibility fix-up: pivot must divide the whole trailing block.
            bool divides_all = true;
            for (size_t i = t + 1; i < n && divides_all; ++i)
                for (size_t j = t + 1; j < n && divides_all; ++j)
                    if (!divides(P[t][t], P[i][j])) {
                        for (size_t jj = t; jj < n; ++jj)
                            P[t][jj] = P[t][jj] + P[i][jj];
                        divides_all = false;
                    }
            if (divides_all) {
                P[t][t] = P[t][t].monic();
                break;
            }
        }
        if (t >= n) break;
    }
    std::vector<Poly<K>> out;
    for (size_t t = 0; t < n; ++t)
        if (P[t][t].degree() > 0) out.push_back(P[t][t]);
    return out;
}

/// Exact similarity over the ground field (equal invariant-factor chains).
template <class K>
bool similar(const Matrix<K>& A, const Matrix<K>& B) {
    if (!A.is_square() || !B.is_square())
        throw DimensionMismatch("similar: non-square input");
    if (A.rows() != B.rows()) return false;
    return invariant_factors(A) == invariant_factors(B);
}

}  // namespace affclass

#endif  // AFFCLASS_SPECTRAL_HPP
