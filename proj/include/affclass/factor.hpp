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

#ifndef AFFCLASS_FACTOR_HPP
#define AFFCLASS_FACTOR_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "affclass/poly.hpp"
#include "affclass/scalar.hpp"

namespace affclass {

// Irreducible factorization of monic polynomials over Q and Q(i).
//
// Monic factors of a monic integral polynomial are integral (Gauss), so a
// candidate factor assembled from a subset of high-precision numeric roots
// can be rounded to integer coefficients and certified by exact division.
// The numeric part only ever proposes candidates; exact division is the
// sole acceptance test, and the whole factorization is recomputed at
// doubled precision until two runs agree.

namespace factor_detail {

/// Complex number over GMP floats; all operands share one precision.
struct MPC {
    mpf_class re, im;
    MPC() = default;
    MPC(mpf_class r, mpf_class i) : re(std::move(r)), im(std::move(i)) {}
};

inline MPC operator+(const MPC& a, const MPC& b) { return {a.re + b.re, a.im + b.im}; }
inline MPC operator-(const MPC& a, const MPC& b) { return {a.re - b.re, a.im - b.im}; }
inline MPC operator*(const MPC& a, const MPC& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline MPC operator/(const MPC& a, const MPC& b) {
    mpf_class n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
inline double abs2_d(const MPC& a) {
    mpf_class n = a.re * a.re + a.im * a.im;
    return n.get_d();
}

inline MPC eval(const std::vector<MPC>& coeffs, const MPC& x) {
    MPC acc(mpf_class(0, x.re.get_prec()), mpf_class(0, x.re.get_prec()));
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

/// Durand-Kerner on a monic square-free polynomial given by coefficients
/// (lowest first, including the leading 1). Returns degree roots.
inline std::vector<MPC> durand_kerner(const std::vector<MPC>& coeffs,
                                      unsigned prec, bool& converged) {
    size_t d = coeffs.size() - 1;
    double bound = 1.0;
    for (size_t i = 0; i < d; ++i)
        bound = std::max(bound, 1.0 + std::sqrt(abs2_d(coeffs[i])));
    std::vector<MPC> x;
    x.reserve(d);
    for (size_t k = 0; k < d; ++k) {
        double ang = 2.0 * 3.14159265358979323846 * static_cast<double>(k) /
                         static_cast<double>(d) +
                     0.7;
        x.emplace_back(mpf_class(bound * std::cos(ang), prec),
                       mpf_class(bound * std::sin(ang), prec));
    }
    double tol = std::ldexp(1.0, -static_cast<int>(prec) + 16);
    double tol2 = tol * tol * bound * bound;
    converged = false;
    for (int it = 0; it < 500 && !converged; ++it) {
        double worst = 0.0;
        for (size_t i = 0; i < d; ++i) {
            MPC denom(mpf_class(1, prec), mpf_class(0, prec));
            for (size_t j = 0; j < d; ++j)
                if (j != i) denom = denom * (x[i] - x[j]);
            MPC delta = eval(coeffs, x[i]) / denom;
            x[i] = x[i] - delta;
            worst = std::max(worst, abs2_d(delta));
        }
        if (worst < tol2) converged = true;
    }
    return x;
}

inline bool round_to_int(const mpf_class& v, Int& out) {
    mpf_class f = floor(v + 0.5);
    mpf_class frac = abs(v - f);
    if (frac.get_d() > 0.3) return false;
    out = Int(f);
    return true;
}

template <class K>
struct integral_round;

template <>
struct integral_round<Rat> {
    static bool round(const MPC& v, Rat& out) {
        if (std::abs(v.im.get_d()) > 0.3) return false;
        Int r;
        if (!round_to_int(v.re, r)) return false;
        out = Rat(r);
        return true;
    }
};

template <>
struct integral_round<GRat> {
    static bool round(const MPC& v, GRat& out) {
        Int r, i;
        if (!round_to_int(v.re, r) || !round_to_int(v.im, i)) return false;
        out = GRat(Rat(r), Rat(i));
        return true;
    }
};

template <class K>
std::vector<MPC> to_mpc_coeffs(const Poly<K>& p, unsigned prec) {
    std::vector<MPC> c;
    c.reserve(p.coeffs().size());
    for (const K& v : p.coeffs())
        c.emplace_back(mpf_class(field_traits<K>::re(v).get_d(), prec),
                       mpf_class(field_traits<K>::im(v).get_d(), prec));
    return c;
}

// For large coefficients get_d above loses precision; feed GMP rationals in
// full precision instead.
template <class K>
std::vector<MPC> to_mpc_coeffs_exact(const Poly<K>& p, unsigned prec) {
    std::vector<MPC> c;
    c.reserve(p.coeffs().size());
    for (const K& v : p.coeffs()) {
        mpf_class re(0, prec), im(0, prec);
        re = mpf_class(field_traits<K>::re(v).get_num(), prec) /
             mpf_class(field_traits<K>::re(v).get_den(), prec);
        im = mpf_class(field_traits<K>::im(v).get_num(), prec) /
             mpf_class(field_traits<K>::im(v).get_den(), prec);
        c.emplace_back(std::move(re), std::move(im));
    }
    return c;
}

inline bool next_combination(std::vector<size_t>& idx, size_t n) {
    size_t k = idx.size();
    for (size_t i = k; i-- > 0;) {
        if (idx[i] < n - (k - i)) {
            ++idx[i];
            for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

/// One factorization attempt of a monic integral square-free polynomial at
/// a fixed precision. Returns factors sorted; empty on DK failure.
template <class K>
std::vector<Poly<K>> attempt(const Poly<K>& q, unsigned prec) {
    bool converged = false;
    std::vector<MPC> roots = durand_kerner(to_mpc_coeffs_exact(q, prec), prec, converged);
    if (!converged) return {};
    std::vector<Poly<K>> found;
    Poly<K> work = q;
    std::vector<size_t> avail(roots.size());
    for (size_t i = 0; i < avail.size(); ++i) avail[i] = i;

    bool progress = true;
    while (progress && work.degree() > 1) {
        progress = false;
        size_t half = static_cast<size_t>(work.degree()) / 2;
        for (size_t s = 1; s <= half && !progress; ++s) {
            std::vector<size_t> idx(s);
            for (size_t i = 0; i < s; ++i) idx[i] = i;
            do {
                // Candidate = prod (x - roots[avail[idx]]), rounded to
                // integral coefficients, certified by exact division.
                std::vector<MPC> cand{{mpf_class(1, prec), mpf_class(0, prec)}};
                for (size_t i : idx) {
                    std::vector<MPC> nxt(cand.size() + 1,
                                         MPC(mpf_class(0, prec), mpf_class(0, prec)));
                    const MPC& r = roots[avail[i]];
                    for (size_t k = 0; k < cand.size(); ++k) {
                        nxt[k + 1] = nxt[k + 1] + cand[k];
                        nxt[k] = nxt[k] - cand[k] * r;
                    }
                    cand = std::move(nxt);
                }
                std::vector<K> rc(cand.size());
                bool ok = true;
                for (size_t k = 0; k + 1 < cand.size() && ok; ++k)
                    ok = integral_round<K>::round(cand[k], rc[k]);
                if (ok) {
                    rc.back() = K(1);
                    Poly<K> f(rc);
                    if (divides(f, work)) {
                        found.push_back(f);
                        work = work / f;
                        std::vector<size_t> rest;
                        for (size_t i = 0; i < avail.size(); ++i)
                            if (std::find(idx.begin(), idx.end(), i) == idx.end())
                                rest.push_back(avail[i]);
                        avail = std::move(rest);
                        progress = true;
                        break;
                    }
                }
            } while (next_combination(idx, avail.size()));
        }
    }
    if (work.degree() >= 1) found.push_back(work);
    std::sort(found.begin(), found.end(), [](const Poly<K>& a, const Poly<K>& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.str() < b.str();
    });
    return found;
}

}  // namespace factor_detail

/// Irreducible monic factors of a square-free monic polynomial over Q or
/// Q(i). Certified by exact division plus agreement of two runs at
/// different precisions.
template <class K>
std::vector<Poly<K>> factor_squarefree_poly(const Poly<K>& p) {
    if (p.is_zero()) throw std::domain_error("factor of zero polynomial");
    Poly<K> f = p.monic();
    if (f.degree() <= 0) return {};
    if (f.degree() == 1) return {f};
    if (!is_squarefree(f))
        throw std::domain_error("factor_squarefree_poly: input not square-free");

    // Scale x -> y/c so the polynomial becomes integral monic.
    Int den_lcm = 1;
    for (const K& v : f.coeffs()) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                field_traits<K>::re(v).get_den().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                field_traits<K>::im(v).get_den().get_mpz_t());
    }
    Rat c(den_lcm);
    size_t d = static_cast<size_t>(f.degree());
    std::vector<K> qc(d + 1);
    for (size_t k = 0; k <= d; ++k) qc[k] = f[k] * K(rat_pow(c, static_cast<unsigned>(d - k)));
    Poly<K> q(qc);

    unsigned prec = 192;
    std::vector<Poly<K>> prev;
    for (int round = 0; round < 8; ++round, prec *= 2) {
        std::vector<Poly<K>> cur = factor_detail::attempt(q, prec);
        if (cur.empty()) continue;  // DK did not converge, escalate
        if (!prev.empty() && cur == prev) {
            // Map factors back through y = c*x.
            std::vector<Poly<K>> out;
            for (const Poly<K>& g : cur) {
                size_t gd = static_cast<size_t>(g.degree());
                std::vector<K> hc(gd + 1);
                for (size_t k = 0; k <= gd; ++k)
                    hc[k] = g[k] * K(rat_pow(c, static_cast<unsigned>(k)) /
                                     rat_pow(c, static_cast<unsigned>(gd)));
                out.emplace_back(hc);
            }
            return out;
        }
        prev = std::move(cur);
    }
    throw std::runtime_error("factorization did not stabilize");
}

/// Full factorization into (monic irreducible, multiplicity) pairs.
template <class K>
std::vector<std::pair<Poly<K>, unsigned>> factor_poly(const Poly<K>& p) {
    std::vector<std::pair<Poly<K>, unsigned>> out;
    for (const auto& [layer, mult] : squarefree_decompose(p))
        for (const Poly<K>& f : factor_squarefree_poly(layer)) out.emplace_back(f, mult);
    return out;
}

}  // namespace affclass

#endif  // AFFCLASS_FACTOR_HPP
