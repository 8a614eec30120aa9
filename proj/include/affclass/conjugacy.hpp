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

#ifndef AFFCLASS_CONJUGACY_HPP
#define AFFCLASS_CONJUGACY_HPP

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "affclass/matrix.hpp"
#include "affclass/spectral.hpp"
#include "affclass/structure.hpp"

namespace affclass {

// Decides topological conjugacy of affine operators f(x) = Ax + b over the
// reals (exact entries in Q) and the complexes (entries in Q(i)), and
// computes canonical forms. Operators whose linear part has a root-of-unity
// eigenvalue are outside the decidable fixed-point classification and are
// rejected with the offending order k.

enum class Reason {
    FIXED_POINT_MISMATCH,
    NILPOTENT_MISMATCH,
    ORIENTATION_MISMATCH,
    SIZE_MISMATCH,
    UNIT_PART_MISMATCH,
    CONJUGATE,
};

inline const char* reason_name(Reason r) {
    switch (r) {
        case Reason::FIXED_POINT_MISMATCH: return "FIXED_POINT_MISMATCH";
        case Reason::NILPOTENT_MISMATCH: return "NILPOTENT_MISMATCH";
        case Reason::ORIENTATION_MISMATCH: return "ORIENTATION_MISMATCH";
        case Reason::SIZE_MISMATCH: return "SIZE_MISMATCH";
        case Reason::UNIT_PART_MISMATCH: return "UNIT_PART_MISMATCH";
        case Reason::CONJUGATE: return "CONJUGATE";
    }
    return "?";
}

struct Verdict {
    bool conjugate = false;
    Reason reason = Reason::CONJUGATE;
    std::string evidence;  // the compared invariants, human-readable
};

/// The linear-part classification is undefined when an eigenvalue is a
/// root of unity; k is the smallest offending order.
struct RootOfUnityError : std::runtime_error {
    unsigned k;
    explicit RootOfUnityError(unsigned order)
        : std::runtime_error("eigenvalue is a primitive root of unity of order " +
                             std::to_string(order)),
          k(order) {}
};

/// One canonical unit-circle summand family: `count` Jordan blocks of size
/// `size` per root class of the monic irreducible `factor`.
template <class K>
struct UnitBlock {
    Poly<K> factor;
    size_t size = 0;
    size_t count = 0;
    bool operator==(const UnitBlock& o) const {
        return factor == o.factor && size == o.size && count == o.count;
    }
};

/// Canonical form of an affine operator up to topological conjugacy.
/// Without fixed point: x -> (I_k (+) [-1]? (+) J0) x + e1, captured by
/// (k, epsilon, segre of J0). With fixed point: the multiset of summands
/// J_s(0), [1/2], [-1/2], [2], [-2] and unit-circle blocks.
template <class K>
struct CanonicalForm {
    bool no_fixed_point = false;

    // No-fixed-point data (epsilon = -1 only over the reals).
    size_t k = 0;
    int epsilon = +1;
    SegreCharacteristic segre;

    // Fixed-point (linear) data.
    SegreCharacteristic nilpotent_segre;  // J_s(0) summands
    size_t n_half = 0;                    // copies of [1/2]
    bool neg_half = false;                // one [-1/2] (reals only)
    size_t n_two = 0;                     // copies of [2]
    bool neg_two = false;                 // one [-2] (reals only)
    std::vector<UnitBlock<K>> unit_blocks;

    bool operator==(const CanonicalForm& o) const {
        if (no_fixed_point != o.no_fixed_point) return false;
        if (no_fixed_point)
            return k == o.k && epsilon == o.epsilon && segre == o.segre;
        return nilpotent_segre == o.nilpotent_segre && n_half == o.n_half &&
               neg_half == o.neg_half && n_two == o.n_two && neg_two == o.neg_two &&
               unit_blocks == o.unit_blocks;
    }
    bool operator!=(const CanonicalForm& o) const { return !(*this == o); }
};

/// A fixed point of f, i.e. a solution of (A - I)x = -b, if one exists.
template <class K>
std::optional<std::vector<K>> fixed_point(const AffineOperator<K>& f) {
    size_t n = f.dim();
    Matrix<K> M = f.A - Matrix<K>::identity(n);
    std::vector<K> c(n);
    for (size_t i = 0; i < n; ++i) c[i] = -f.b[i];
    return solve(M, c);
}

/// f has no fixed point iff 1 is an eigenvalue of A and (A-I)x = -b is
/// inconsistent (equivalently, iff fixed_point(f) is absent).
template <class K>
bool corollary_check(const AffineOperator<K>& f) {
    size_t n = f.dim();
    Matrix<K> M = f.A - Matrix<K>::identity(n);
    bool one_is_eigenvalue = determinant(M) == K(0);
    return one_is_eigenvalue && !fixed_point(f).has_value();
}

namespace conjugacy_detail {

/// Rejects matrices with a root-of-unity eigenvalue. The degree bound for
/// the cyclotomic scan is n over Q but 2n over Q(i) (the minimal polynomial
/// of a root of unity over Q(i) can have half its rational degree).
template <class K>
void guard_root_of_unity(const Matrix<K>& A) {
    if (A.rows() == 0) return;
    size_t bound = field_traits<K>::is_complex ? 2 * A.rows() : A.rows();
    if (auto r = root_of_unity_factor(charpoly(A), bound)) throw RootOfUnityError(r->first);
}

/// Segre characteristic of the nilpotent Fitting part, straight from the
/// rank sequence of A (the nonsingular part never loses rank).
template <class K>
SegreCharacteristic nilpotent_segre_of(const Matrix<K>& A) {
    SegreCharacteristic out;
    for (auto [size, count] : block_structure_at_irreducible(A, Poly<K>::x()))
        for (size_t c = 0; c < count; ++c) out.push_back(size);
    std::sort(out.rbegin(), out.rend());
    return out;
}

/// Sign of the determinant of the 0<|lambda|<1 stratum over the reals:
/// complex pairs and positive roots contribute +, so the sign is the parity
/// of the root count (with multiplicity) in (-1, 0).
inline int stratum_sign_01(const Poly<Rat>& cp) {
    int c = count_real_roots_in_mult(cp, sturm::Bound::at(Rat(-1)), sturm::Bound::at(Rat(0)));
    return (c % 2 == 0) ? +1 : -1;
}

/// Same for the |lambda|>1 stratum: parity of roots in (-inf, -1).
inline int stratum_sign_1inf(const Poly<Rat>& cp) {
    int c = count_real_roots_in_mult(cp, sturm::Bound::neg_inf(), sturm::Bound::at(Rat(-1)));
    return (c % 2 == 0) ? +1 : -1;
}

/// Canonical representative of the conjugate pair {q, conj(q)}: the
/// coefficientwise-smaller factor under (im, re) lexicographic order from
/// the constant term up. For x - lambda this picks Im(lambda) >= 0.
inline Poly<GRat> conj_class_key(const Poly<GRat>& q) {
    Poly<GRat> qc = q.conj_coeffs();
    for (size_t j = 0; j < q.coeffs().size(); ++j) {
        const GRat &a = q[j], &b = qc[j];
        if (a.im != b.im) return a.im < b.im ? q : qc;
        if (a.re != b.re) return a.re < b.re ? q : qc;
    }
    return q;
}
inline Poly<Rat> conj_class_key(const Poly<Rat>& q) { return q; }

/// Jordan data of the unit-modulus eigenvalues, keyed by irreducible
/// factor: factor key -> (block size -> block count). Over Q(i) the data
/// describes A (+) conj(A) per conjugate class (each factor's blocks are
/// credited to its own class and to its conjugate's class; the resulting
/// per-class scale factor depends only on the class, so equality of maps
/// is equivalent to similarity of the doubled unit parts).
template <class K>
std::map<std::string, std::map<size_t, size_t>> unit_structure(const Matrix<K>& A) {
    std::map<std::string, std::map<size_t, size_t>> out;
    if (A.rows() == 0) return out;
    Poly<K> sf = squarefree_part(charpoly(A));
    sf = sf.shift_down(sf.valuation());
    for (const Poly<K>& q : factor_squarefree_poly(sf)) {
        if (count_roots_on_unit_circle(q) == 0) continue;
        auto blocks = block_structure_at_irreducible(A, q);
        std::vector<std::string> keys{conj_class_key(q).str()};
        if (field_traits<K>::is_complex)
            keys.push_back(conj_class_key(q.conj_coeffs()).str());
        for (const std::string& key : keys)
            for (auto [size, count] : blocks) out[key][size] += count;
    }
    return out;
}

template <class K>
std::string segre_str(const std::vector<size_t>& s) {
    std::string out = "[";
    for (size_t i = 0; i < s.size(); ++i)
        out += (i ? "," : "") + std::to_string(s[i]);
    return out + "]";
}

}  // namespace conjugacy_detail

/// Conjugacy of linear operators x -> Ax and x -> Bx without root-of-unity
/// eigenvalues. Over the reals: nilpotent parts similar, stratum sizes for
/// 0<|l|<1 and |l|>1 equal with matching determinant signs, unit parts
/// similar. Over the complexes the orientation clauses drop and the unit
/// parts are compared after doubling with their conjugates.
template <class K>
Verdict decide_linear(const Matrix<K>& A, const Matrix<K>& B) {
    namespace d = conjugacy_detail;
    if (!A.is_square() || !B.is_square() || A.rows() != B.rows())
        throw DimensionMismatch("decide_linear: size mismatch");
    d::guard_root_of_unity(A);
    d::guard_root_of_unity(B);

    auto sA = d::nilpotent_segre_of(A), sB = d::nilpotent_segre_of(B);
    if (sA != sB)
        return {false, Reason::NILPOTENT_MISMATCH,
                "nilpotent block sizes " + d::segre_str<K>(sA) + " vs " +
                    d::segre_str<K>(sB)};

    Poly<K> cpA = charpoly(A), cpB = charpoly(B);
    auto mpA = modulus_partition(cpA), mpB = modulus_partition(cpB);
    if (mpA.n01 != mpB.n01 || mpA.n1inf != mpB.n1inf)
        return {false, Reason::SIZE_MISMATCH,
                "stratum sizes (01:" + std::to_string(mpA.n01) +
                    ",1inf:" + std::to_string(mpA.n1inf) + ") vs (01:" +
                    std::to_string(mpB.n01) + ",1inf:" + std::to_string(mpB.n1inf) + ")"};

    if (!field_traits<K>::is_complex) {
        Poly<Rat> rA(std::vector<Rat>{}), rB(std::vector<Rat>{});
        {
            std::vector<Rat> ca, cb;
            for (const K& v : cpA.coeffs()) ca.push_back(field_traits<K>::re(v));
            for (const K& v : cpB.coeffs()) cb.push_back(field_traits<K>::re(v));
            rA = Poly<Rat>(ca);
            rB = Poly<Rat>(cb);
        }
        int a01 = d::stratum_sign_01(rA), b01 = d::stratum_sign_01(rB);
        if (mpA.n01 > 0 && a01 != b01)
            return {false, Reason::ORIENTATION_MISMATCH,
                    "det signs of 0<|l|<1 strata: " + std::to_string(a01) + " vs " +
                        std::to_string(b01)};
        int a1i = d::stratum_sign_1inf(rA), b1i = d::stratum_sign_1inf(rB);
        if (mpA.n1inf > 0 && a1i != b1i)
            return {false, Reason::ORIENTATION_MISMATCH,
                    "det signs of |l|>1 strata: " + std::to_string(a1i) + " vs " +
                        std::to_string(b1i)};
    }

    if (d::unit_structure(A) != d::unit_structure(B))
        return {false, Reason::UNIT_PART_MISMATCH,
                "unit-modulus Jordan structures differ"};
    return {true, Reason::CONJUGATE, "all clauses match"};
}

/// Canonical form of the linear operator x -> Ax (fixed-point case).
template <class K>
CanonicalForm<K> canonical_linear(const Matrix<K>& A) {
    namespace d = conjugacy_detail;
    if (!A.is_square()) throw DimensionMismatch("canonical_linear: non-square");
    d::guard_root_of_unity(A);
    CanonicalForm<K> cf;
    cf.no_fixed_point = false;
    cf.nilpotent_segre = d::nilpotent_segre_of(A);
    if (A.rows() == 0) return cf;

    Poly<K> cp = charpoly(A);
    auto mp = modulus_partition(cp);
    cf.n_half = mp.n01;
    cf.n_two = mp.n1inf;
    if (!field_traits<K>::is_complex) {
        std::vector<Rat> rc;
        for (const K& v : cp.coeffs()) rc.push_back(field_traits<K>::re(v));
        Poly<Rat> rcp(rc);
        if (mp.n01 > 0 && d::stratum_sign_01(rcp) < 0) {
            cf.neg_half = true;
            --cf.n_half;
        }
        if (mp.n1inf > 0 && d::stratum_sign_1inf(rcp) < 0) {
            cf.neg_two = true;
            --cf.n_two;
        }
    }

    // Unit-circle summands: over Q(i) classes merge {q, conj q}; the stored
    // factor is the class representative and counts sum over class members.
    std::map<std::string, std::pair<Poly<K>, std::map<size_t, size_t>>> classes;
    Poly<K> sf = squarefree_part(cp);
    sf = sf.shift_down(sf.valuation());
    if (sf.degree() > 0) {
        for (const Poly<K>& q : factor_squarefree_poly(sf)) {
            if (count_roots_on_unit_circle(q) == 0) continue;
            Poly<K> key = d::conj_class_key(q);
            auto& slot = classes[key.str()];
            slot.first = key;
            for (auto [size, count] : block_structure_at_irreducible(A, q))
                slot.second[size] += count;
        }
    }
    for (auto& [kstr, slot] : classes)
        for (auto [size, count] : slot.second)
            cf.unit_blocks.push_back({slot.first, size, count});
    return cf;
}

/// Canonical form of an affine operator: the no-fixed-point normal form
/// (k, epsilon, segre) when f has no fixed point, else the linear canonical
/// form of A (the translation is absorbed by conjugating at a fixed point).
template <class K>
CanonicalForm<K> canonical_affine(const AffineOperator<K>& f) {
    if (fixed_point(f)) return canonical_linear(f.A);
    auto fs = fitting_split(f.A);
    CanonicalForm<K> cf;
    cf.no_fixed_point = true;
    cf.segre = segre_of_nilpotent(fs.nilpotent_part);
    cf.epsilon = +1;
    if (!field_traits<K>::is_complex &&
        sign(field_traits<K>::re(determinant(fs.nonsingular_part))) < 0)
        cf.epsilon = -1;
    size_t segre_total = 0;
    for (size_t s : cf.segre) segre_total += s;
    cf.k = f.dim() - segre_total - (cf.epsilon < 0 ? 1 : 0);
    if (cf.k < 1) throw std::logic_error("canonical_affine: k < 1");
    return cf;
}

/// Conjugacy of affine operators: both with fixed points -> linear
/// decision; exactly one with a fixed point -> never conjugate; neither ->
/// nilpotent parts similar and (over the reals) orientations equal.
template <class K>
Verdict decide_affine(const AffineOperator<K>& f, const AffineOperator<K>& g) {
    namespace d = conjugacy_detail;
    if (f.dim() != g.dim()) throw DimensionMismatch("decide_affine: size mismatch");
    bool pf = fixed_point(f).has_value(), pg = fixed_point(g).has_value();
    if (pf != pg)
        return {false, Reason::FIXED_POINT_MISMATCH,
                std::string(pf ? "first" : "second") + " operator has a fixed point, " +
                    (pf ? "second" : "first") + " does not"};
    if (pf) return decide_linear(f.A, g.A);

    auto fsf = fitting_split(f.A), fsg = fitting_split(g.A);
    auto sf = segre_of_nilpotent(fsf.nilpotent_part);
    auto sg = segre_of_nilpotent(fsg.nilpotent_part);
    if (sf != sg)
        return {false, Reason::NILPOTENT_MISMATCH,
                "nilpotent block sizes " + d::segre_str<K>(sf) + " vs " +
                    d::segre_str<K>(sg)};
    if (!field_traits<K>::is_complex) {
        int df = sign(field_traits<K>::re(determinant(fsf.nonsingular_part)));
        int dg = sign(field_traits<K>::re(determinant(fsg.nonsingular_part)));
        if (df != dg)
            return {false, Reason::ORIENTATION_MISMATCH,
                    "det signs of nonsingular parts: " + std::to_string(df) + " vs " +
                        std::to_string(dg)};
    }
    return {true, Reason::CONJUGATE, "no fixed points; nilpotent parts similar" +
                                         std::string(field_traits<K>::is_complex
                                                         ? ""
                                                         : ", orientations equal")};
}

/// Builds a literal operator with the given canonical form. For the
/// no-fixed-point form this is x -> (I_k (+) [-1]? (+) J0) x + e1. The
/// fixed-point form is realizable over the ground field only when every
/// unit factor has all roots on the circle.
template <class K>
AffineOperator<K> realize(const CanonicalForm<K>& cf) {
    Matrix<K> A;
    if (cf.no_fixed_point) {
        A = Matrix<K>::identity(cf.k);
        if (cf.epsilon < 0) A = direct_sum(A, Matrix<K>(1, 1, {K(-1)}));
        A = direct_sum(A, nilpotent_from_segre<K>(cf.segre));
        std::vector<K> b(A.rows(), K(0));
        b[0] = K(1);
        return {std::move(A), std::move(b)};
    }
    A = nilpotent_from_segre<K>(cf.nilpotent_segre);
    if (cf.neg_half) A = direct_sum(A, Matrix<K>(1, 1, {K(Rat(-1, 2))}));
    for (size_t i = 0; i < cf.n_half; ++i)
        A = direct_sum(A, Matrix<K>(1, 1, {K(Rat(1, 2))}));
    for (const auto& ub : cf.unit_blocks) {
        if (count_roots_on_unit_circle(ub.factor) !=
            static_cast<size_t>(ub.factor.degree()))
            throw std::domain_error(
                "realize: unit factor has roots off the circle (not realizable "
                "over the ground field)");
        for (size_t c = 0; c < ub.count; ++c)
            A = direct_sum(A, companion(poly_pow(ub.factor, static_cast<unsigned>(ub.size))));
    }
    if (cf.neg_two) A = direct_sum(A, Matrix<K>(1, 1, {K(-2)}));
    for (size_t i = 0; i < cf.n_two; ++i) A = direct_sum(A, Matrix<K>(1, 1, {K(2)}));
    std::vector<K> b(A.rows(), K(0));
    return {std::move(A), std::move(b)};
}

}  // namespace affclass

#endif  // AFFCLASS_CONJUGACY_HPP
