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

#ifndef AFFCLASS_JSON_IO_HPP
#define AFFCLASS_JSON_IO_HPP

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "affclass/conjugacy.hpp"
#include "affclass/spectral.hpp"
#include "affclass/witness.hpp"

namespace affclass {

using nlohmann::json;

// Scalars travel as exact strings ("p/q", "p/q+r/s i"); numeric payloads
// (flow generators, numeric base changes) travel as doubles or [re, im].

template <class K>
json matrix_to_json(const Matrix<K>& M) {
    json rows = json::array();
    for (size_t i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < M.cols(); ++j)
            row.push_back(field_traits<K>::str(M(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"field", field_traits<K>::name()}, {"rows", std::move(rows)}};
}

/// Accepts {"field":...,"rows":[[...]]} or a bare array of rows.
template <class K>
Matrix<K> matrix_from_json(const json& j) {
    const json& rows = j.is_array() ? j : j.at("rows");
    if (!rows.is_array()) throw ParseError("matrix: \"rows\" must be an array");
    size_t r = rows.size();
    size_t c = r > 0 ? rows[0].size() : 0;
    Matrix<K> M(r, c);
    for (size_t i = 0; i < r; ++i) {
        if (!rows[i].is_array() || rows[i].size() != c)
            throw ParseError("matrix: ragged rows");
        for (size_t k = 0; k < c; ++k)
            M(i, k) = field_traits<K>::parse(rows[i][k].template get<std::string>());
    }
    return M;
}

template <class K>
json operator_to_json(const AffineOperator<K>& f) {
    json b = json::array();
    for (const K& v : f.b) b.push_back(field_traits<K>::str(v));
    return json{{"A", matrix_to_json(f.A)}, {"b", std::move(b)}};
}

template <class K>
AffineOperator<K> operator_from_json(const json& j) {
    Matrix<K> A = matrix_from_json<K>(j.at("A"));
    const json& bj = j.at("b");
    if (!bj.is_array() || bj.size() != A.rows())
        throw ParseError("operator: b has wrong length");
    std::vector<K> b;
    for (const json& v : bj) b.push_back(field_traits<K>::parse(v.get<std::string>()));
    if (!A.is_square()) throw ParseError("operator: A must be square");
    return {std::move(A), std::move(b)};
}

/// True when any scalar string in the JSON parses to a Gaussian rational
/// with nonzero imaginary part; such input forces the complex field.
inline bool json_mentions_imaginary(const json& j) {
    if (j.is_string()) {
        try {
            return parse_grat(j.get<std::string>()).im != Rat(0);
        } catch (const ParseError&) {
            return false;  // not a scalar (e.g. a kind tag)
        }
    }
    if (j.is_array() || j.is_object()) {
        for (const auto& v : j)
            if (json_mentions_imaginary(v)) return true;
    }
    return false;
}

inline json verdict_to_json(const Verdict& v) {
    return json{{"conjugate", v.conjugate},
                {"reason", reason_name(v.reason)},
                {"evidence", v.evidence}};
}

template <class K>
json canonical_to_json(const CanonicalForm<K>& cf) {
    if (cf.no_fixed_point) {
        return json{{"kind", "NoFixedPoint"},
                    {"k", cf.k},
                    {"epsilon", cf.epsilon},
                    {"segre", cf.segre}};
    }
    json units = json::array();
    for (const UnitBlock<K>& u : cf.unit_blocks)
        units.push_back(json{
            {"factor", u.factor.str()}, {"size", u.size}, {"count", u.count}});
    return json{{"kind", "FixedPointLinear"},
                {"nilpotent_segre", cf.nilpotent_segre},
                {"n_half", cf.n_half},
                {"neg_half", cf.neg_half},
                {"n_two", cf.n_two},
                {"neg_two", cf.neg_two},
                {"unit_blocks", std::move(units)}};
}

template <class K>
json modulus_partition_to_json(const ModulusPartition<K>& mp) {
    json mixed = json::array();
    for (const auto& [q, m] : mp.mixed)
        mixed.push_back(json{{"factor", q.str()}, {"multiplicity", m}});
    return json{{"n0", mp.n0},          {"n01", mp.n01},
                {"n1", mp.n1},          {"n1inf", mp.n1inf},
                {"p0", mp.p0.str()},    {"p01", mp.p01.str()},
                {"p1", mp.p1.str()},    {"p1inf", mp.p1inf.str()},
                {"exact_split", mp.exact_split},
                {"mixed", std::move(mixed)}};
}

template <class K>
json fitting_split_to_json(const FittingSplit<K>& fs) {
    return json{{"nonsingular_part", matrix_to_json(fs.nonsingular_part)},
                {"nilpotent_part", matrix_to_json(fs.nilpotent_part)},
                {"transition", matrix_to_json(fs.transition)}};
}

namespace json_detail {

inline json num_to_json(double x) { return x; }
inline json num_to_json(const std::complex<double>& x) {
    return json::array({x.real(), x.imag()});
}
inline void num_from_json(const json& j, double& out) { out = j.get<double>(); }
inline void num_from_json(const json& j, std::complex<double>& out) {
    out = {j.at(0).get<double>(), j.at(1).get<double>()};
}

template <class K>
json nummat_to_json(const NumMat<K>& M) {
    json rows = json::array();
    for (long i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (long j = 0; j < M.cols(); ++j) row.push_back(num_to_json(M(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class K>
NumMat<K> nummat_from_json(const json& j) {
    long r = static_cast<long>(j.size());
    long c = r > 0 ? static_cast<long>(j.at(0).size()) : 0;
    NumMat<K> M(r, c);
    for (long i = 0; i < r; ++i)
        for (long k = 0; k < c; ++k) num_from_json(j.at(i).at(k), M(i, k));
    return M;
}

}  // namespace json_detail

template <class K>
json witness_to_json(const Witness<K>& w) {
    json stages = json::array();
    for (const auto& s : w.stages()) {
        json sj{{"kind", stage_kind_name(s.kind)}};
        switch (s.kind) {
            case StageKind::Translation: {
                json t = json::array();
                for (const K& v : s.t) t.push_back(field_traits<K>::str(v));
                sj["t"] = std::move(t);
                break;
            }
            case StageKind::Linear:
                sj["S"] = matrix_to_json(s.S);
                break;
            case StageKind::PolyUnipotent:
                sj["offset"] = s.off;
                sj["size"] = s.len;
                break;
            case StageKind::NumericLinear:
                sj["N"] = json_detail::nummat_to_json<K>(s.N);
                break;
            case StageKind::Flow:
                sj["offset"] = s.off;
                sj["size"] = s.len;
                sj["G"] = json_detail::nummat_to_json<K>(s.G);
                break;
        }
        stages.push_back(std::move(sj));
    }
    return json{{"kind", w.kind()},
                {"field", field_traits<K>::name()},
                {"stages", std::move(stages)}};
}

template <class K>
Witness<K> witness_from_json(const json& j) {
    Witness<K> w;
    for (const json& sj : j.at("stages")) {
        const std::string kind = sj.at("kind").get<std::string>();
        if (kind == "Translation") {
            std::vector<K> t;
            for (const json& v : sj.at("t"))
                t.push_back(field_traits<K>::parse(v.get<std::string>()));
            w.add_translation(std::move(t));
        } else if (kind == "Linear") {
            w.add_linear(matrix_from_json<K>(sj.at("S")));
        } else if (kind == "PolyUnipotent") {
            w.add_poly_unipotent(sj.at("offset").get<size_t>(), sj.at("size").get<size_t>());
        } else if (kind == "NumericLinear") {
            w.add_numeric_linear(json_detail::nummat_from_json<K>(sj.at("N")));
        } else if (kind == "Flow") {
            w.add_flow(sj.at("offset").get<size_t>(), sj.at("size").get<size_t>(),
                       json_detail::nummat_from_json<K>(sj.at("G")));
        } else {
            throw ParseError("witness: unknown stage kind " + kind);
        }
    }
    return w;
}

template <class K>
json verify_report_to_json(const VerifyReport<K>& r) {
    json pt = json::array();
    for (const auto& v : r.argmax_point) pt.push_back(json_detail::num_to_json(v));
    return json{{"residual", r.residual}, {"argmax_point", std::move(pt)}};
}

}  // namespace affclass

#endif  // AFFCLASS_JSON_IO_HPP
