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

#ifndef AFFCLASS_SCALAR_HPP
#define AFFCLASS_SCALAR_HPP

#include <complex>
#include <cstdint>
#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace affclass {

/// Exact rational scalar. mpq_class keeps the canonical form invariant
/// (positive denominator, gcd(num, den) = 1) after every arithmetic op.
using Rat = mpq_class;

using Int = mpz_class;

inline int sign(const Rat& x) { return sgn(x); }

inline double to_double(const Rat& x) { return x.get_d(); }

inline Rat rat_pow(const Rat& base, unsigned e) {
    Rat r = 1;
    Rat b = base;
    for (; e; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

inline Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses "p/q" (q omitted when 1). Accepts a leading sign.
inline Rat parse_rat(const std::string& s) {
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (c != ' ') t += c;
    if (t.empty()) throw ParseError("empty rational literal");
    if (t[0] == '+') t.erase(0, 1);  // mpq_class rejects an explicit plus
    if (t.empty()) throw ParseError("empty rational literal");
    try {
        Rat r(t);
        if (r.get_den() == 0) throw ParseError("zero denominator: " + s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal: " + s);
    }
}

inline std::string to_string(const Rat& x) { return x.get_str(); }

/// Gaussian rational: re + im*i with exact rational components.
struct GRat {
    Rat re;
    Rat im;

    GRat() : re(0), im(0) {}
    GRat(const Rat& r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
    GRat(int r) : re(r), im(0) {}         // NOLINT(google-explicit-constructor)
    GRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    bool operator==(const GRat& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GRat& o) const { return !(*this == o); }

    GRat operator-() const { return {-re, -im}; }
    GRat& operator+=(const GRat& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GRat& operator-=(const GRat& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GRat& operator*=(const GRat& o) {
        Rat r = re * o.re - im * o.im;
        Rat i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GRat& operator/=(const GRat& o) {
        Rat n = o.re * o.re + o.im * o.im;
        if (n == 0) throw std::domain_error("division by zero GRat");
        Rat r = (re * o.re + im * o.im) / n;
        Rat i = (im * o.re - re * o.im) / n;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
};

inline GRat operator+(GRat a, const GRat& b) { return a += b; }
inline GRat operator-(GRat a, const GRat& b) { return a -= b; }
inline GRat operator*(GRat a, const GRat& b) { return a *= b; }
inline GRat operator/(GRat a, const GRat& b) { return a /= b; }

inline GRat conj(const GRat& z) { return {z.re, -z.im}; }
inline Rat norm2(const GRat& z) { return z.re * z.re + z.im * z.im; }

inline std::complex<double> to_complex(const GRat& z) {
    return {z.re.get_d(), z.im.get_d()};
}

/// Renders "p/q+r/s i" (pure-real values as "p/q", pure-imaginary as "r/s i").
inline std::string to_string(const GRat& z) {
    if (z.im == 0) return z.re.get_str();
    std::string im_part =
        (z.im == 1 ? "" : z.im == -1 ? "-" : z.im.get_str()) + "i";
    if (z.re == 0) return im_part;
    if (z.im > 0) return z.re.get_str() + "+" + im_part;
    return z.re.get_str() + im_part;
}

/// Parses the complex scalar text format: "p/q+r/s i", "p/q", "r/s i",
/// "i", "-i", with optional spaces before the trailing i.
inline GRat parse_grat(const std::string& s) {
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (c != ' ') t += c;
    if (t.empty()) throw ParseError("empty complex literal");
    if (t.back() != 'i') return GRat(parse_rat(t));
    t.pop_back();
    if (t.empty()) return GRat(Rat(0), Rat(1));
    if (t == "+") return GRat(Rat(0), Rat(1));
    if (t == "-") return GRat(Rat(0), Rat(-1));
    // Split at the last top-level +/- that is not the leading sign and not
    // directly after '/': that separates real and imaginary parts.
    for (size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != '/') {
            Rat re = parse_rat(t.substr(0, i));
            std::string im_s = t.substr(i);
            if (im_s == "+") return GRat(re, Rat(1));
            if (im_s == "-") return GRat(re, Rat(-1));
            return GRat(re, parse_rat(im_s));
        }
    }
    return GRat(Rat(0), parse_rat(t));  // pure imaginary, e.g. "2/3i"
}

template <class K>
struct field_traits;

template <>
struct field_traits<Rat> {
    static constexpr bool is_complex = false;
    static const char* name() { return "Q"; }
    using numeric = double;
    static Rat conj(const Rat& x) { return x; }
    static Rat re(const Rat& x) { return x; }
    static Rat im(const Rat&) { return Rat(0); }
    static Rat from_parts(Rat r, const Rat& i) {
        if (i != 0) throw std::domain_error("nonzero imaginary part over Q");
        return r;
    }
    static double to_numeric(const Rat& x) { return x.get_d(); }
    static std::string str(const Rat& x) { return to_string(x); }
    static Rat parse(const std::string& s) { return parse_rat(s); }
};

template <>
struct field_traits<GRat> {
    static constexpr bool is_complex = true;
    static const char* name() { return "Qi"; }
    using numeric = std::complex<double>;
    static GRat conj(const GRat& x) { return affclass::conj(x); }
    static Rat re(const GRat& x) { return x.re; }
    static Rat im(const GRat& x) { return x.im; }
    static GRat from_parts(Rat r, Rat i) { return {std::move(r), std::move(i)}; }
    static std::complex<double> to_numeric(const GRat& x) { return to_complex(x); }
    static std::string str(const GRat& x) { return to_string(x); }
    static GRat parse(const std::string& s) { return parse_grat(s); }
};

}  // namespace affclass

#endif  // AFFCLASS_SCALAR_HPP
