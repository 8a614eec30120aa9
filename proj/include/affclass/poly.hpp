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

#ifndef AFFCLASS_POLY_HPP
#define AFFCLASS_POLY_HPP

#include <algorithm>
#include <cassert>
#include <string>
#include <utility>
#include <vector>

#include "affclass/scalar.hpp"

namespace affclass {

/// Dense univariate polynomial over a field K, coefficients lowest degree
/// first. The zero polynomial has an empty coefficient vector; otherwise the
/// leading coefficient is nonzero.
template <class K>
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<K> coeffs) : c_(coeffs) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly constant(const K& v) { return Poly({v}); }
    static Poly x() { return Poly({K(0), K(1)}); }
    /// c * x^k
    static Poly monomial(const K& c, size_t k) {
        std::vector<K> v(k + 1, K(0));
        v[k] = c;
        return Poly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<K>& coeffs() const { return c_; }
    const K& operator[](size_t i) const {
        static const K kZero = K(0);
        return i < c_.size() ? c_[i] : kZero;
    }
    const K& lead() const {
        assert(!c_.empty());
        return c_.back();
    }

    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator-() const {
        Poly r = *this;
        for (K& v : r.c_) v = -v;
        return r;
    }
    Poly operator+(const Poly& o) const {
        std::vector<K> r(std::max(c_.size(), o.c_.size()), K(0));
        for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return Poly(std::move(r));
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<K> r(c_.size() + o.c_.size() - 1, K(0));
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return Poly(std::move(r));
    }
    Poly operator*(const K& s) const {
        Poly r = *this;
        for (K& v : r.c_) v = v * s;
        r.trim();
        return r;
    }

    K eval(const K& x) const {
        K acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<K> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * K(static_cast<int>(i));
        return Poly(std::move(r));
    }

    Poly monic() const {
        if (is_zero()) return *this;
        Poly r = *this;
        K inv = K(1) / lead();
        for (K& v : r.c_) v = v * inv;
        return r;
    }

    /// Coefficient-wise reversal: x^deg * p(1/x).
    Poly reversed() const {
        std::vector<K> r(c_.rbegin(), c_.rend());
        return Poly(std::move(r));
    }

    Poly conj_coeffs() const {
        Poly r = *this;
        for (K& v : r.c_) v = field_traits<K>::conj(v);
        return r;
    }

    /// Multiplicity of the root 0 (number of trailing zero coefficients).
    size_t valuation() const {
        if (is_zero()) return 0;
        size_t v = 0;
        while (v < c_.size() && c_[v] == K(0)) ++v;
        return v;
    }

    /// p(x) / x^k, requires x^k | p.
    Poly shift_down(size_t k) const {
        assert(valuation() >= k || is_zero());
        if (is_zero()) return *this;
        return Poly(std::vector<K>(c_.begin() + static_cast<long>(k), c_.end()));
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string out;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == K(0)) continue;
            if (!out.empty()) out += " + ";
            std::string cs = field_traits<K>::str(c_[i]);
            if (i == 0) {
                out += cs;
            } else {
                if (cs != "1") out += "(" + cs + ")*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == K(0)) c_.pop_back();
    }
    std::vector<K> c_;
};

/// Euclidean division: returns (quotient, remainder) with deg r < deg d.
template <class K>
std::pair<Poly<K>, Poly<K>> divmod(const Poly<K>& n, const Poly<K>& d) {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    if (n.degree() < d.degree()) return {Poly<K>(), n};
    std::vector<K> rem(n.coeffs());
    std::vector<K> quo(static_cast<size_t>(n.degree() - d.degree()) + 1, K(0));
    K lead_inv = K(1) / d.lead();
    for (int i = n.degree(); i >= d.degree(); --i) {
        K f = rem[static_cast<size_t>(i)] * lead_inv;
        if (f == K(0)) continue;
        quo[static_cast<size_t>(i - d.degree())] = f;
        for (int j = 0; j <= d.degree(); ++j)
            rem[static_cast<size_t>(i - d.degree() + j)] -=
                f * d[static_cast<size_t>(j)];
    }
    return {Poly<K>(std::move(quo)), Poly<K>(std::move(rem))};
}

template <class K>
Poly<K> operator/(const Poly<K>& n, const Poly<K>& d) {
    return divmod(n, d).first;
}
template <class K>
Poly<K> operator%(const Poly<K>& n, const Poly<K>& d) {
    return divmod(n, d).second;
}

/// True iff d divides n exactly.
template <class K>
bool divides(const Poly<K>& d, const Poly<K>& n) {
    if (d.is_zero()) return n.is_zero();
    return divmod(n, d).second.is_zero();
}

/// Monic greatest common divisor. gcd(p, 0) = monic p.
template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    while (!b.is_zero()) {
        Poly<K> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

template <class K>
bool is_squarefree(const Poly<K>& p) {
    if (p.degree() <= 0) return true;
    return poly_gcd(p, p.derivative()).degree() == 0;
}

/// Yun's square-free decomposition (characteristic zero): returns pairs
/// (factor, multiplicity) with pairwise-coprime square-free monic factors
/// whose weighted product reproduces p up to the leading coefficient.
template <class K>
std::vector<std::pair<Poly<K>, unsigned>> squarefree_decompose(const Poly<K>& p) {
    if (p.is_zero()) throw std::domain_error("squarefree_decompose of zero");
    std::vector<std::pair<Poly<K>, unsigned>> out;
    Poly<K> f = p.monic();
    if (f.degree() == 0) return out;
    Poly<K> fp = f.derivative();
    Poly<K> a = poly_gcd(f, fp);
    Poly<K> b = f / a;
    Poly<K> c = fp / a;
    Poly<K> d = c - b.derivative();
    unsigned mult = 1;
    while (b.degree() > 0) {
        Poly<K> g = poly_gcd(b, d);
        if (g.degree() > 0) out.emplace_back(g, mult);
        b = b / g;
        c = d / g;
        d = c - b.derivative();
        ++mult;
    }
    return out;
}

/// Square-free part: product of the distinct irreducible factors.
template <class K>
Poly<K> squarefree_part(const Poly<K>& p) {
    Poly<K> r = Poly<K>::constant(K(1));
    for (const auto& [f, m] : squarefree_decompose(p)) r = r * f;
    return r;
}

template <class K>
Poly<K> poly_pow(const Poly<K>& p, unsigned e) {
    Poly<K> r = Poly<K>::constant(K(1));
    Poly<K> b = p;
    for (; e; e >>= 1) {
        if (e & 1) r = r * b;
        b = b * b;
    }
    return r;
}

}  // namespace affclass

#endif  // AFFCLASS_POLY_HPP
