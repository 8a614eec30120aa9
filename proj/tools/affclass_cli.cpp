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

// Command-line front end: classify affine operators up to topological
// conjugacy, decide pairs, construct and replay conjugacy witnesses.
//
// Exit codes: 0 success / conjugate; 1 not conjugate / residual above
// tolerance; 2 precondition violation (root of unity, dimension mismatch,
// fixed point where none is allowed); 3 parse error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "affclass/json_io.hpp"

namespace {

using affclass::json;

constexpr int kExitOk = 0;
constexpr int kExitNotConjugate = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitParse = 3;

struct Config {
    std::string field;  // "", "R", or "C"
    double tol = affclass::kVerifyTol;
    size_t samples = 100;
    uint64_t seed = 12345;
    std::string format = "json";
    std::string corpus;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw affclass::ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw affclass::ParseError(std::string("invalid JSON in ") + path + ": " +
                                   e.what());
    }
    return j;
}

bool use_complex(const Config& cfg, const std::vector<json>& inputs) {
    for (const json& j : inputs)
        if (affclass::json_mentions_imaginary(j)) return true;
    return cfg.field == "C";
}

void emit(const Config& cfg, const json& report, const std::string& pretty) {
    if (cfg.format == "pretty")
        std::cout << pretty << "\n";
    else
        std::cout << report.dump(2) << "\n";
}

json precondition_report(const std::string& reason, const std::string& detail) {
    return json{{"error", reason}, {"detail", detail}};
}

template <class K>
int cmd_fixed_point(const Config& cfg, const json& jf) {
    auto f = affclass::operator_from_json<K>(jf);
    auto p = affclass::fixed_point(f);
    json report{{"command", "fixed-point"}, {"field", affclass::field_traits<K>::name()}};
    std::ostringstream pretty;
    if (p) {
        json pt = json::array();
        pretty << "fixed point: (";
        for (size_t i = 0; i < p->size(); ++i) {
            pt.push_back(affclass::field_traits<K>::str((*p)[i]));
            pretty << (i ? ", " : "") << affclass::field_traits<K>::str((*p)[i]);
        }
        pretty << ")";
        report["fixed_point"] = std::move(pt);
    } else {
        report["fixed_point"] = nullptr;
        pretty << "fixed point: none";
    }
    emit(cfg, report, pretty.str());
    return kExitOk;
}

template <class K>
int cmd_split(const Config& cfg, const json& jf) {
    auto f = affclass::operator_from_json<K>(jf);
    auto fs = affclass::fitting_split(f.A);
    auto mp = affclass::modulus_partition(affclass::charpoly(f.A));
    json report{{"command", "split"},
                {"field", affclass::field_traits<K>::name()},
                {"fitting", affclass::fitting_split_to_json(fs)},
                {"modulus_partition", affclass::modulus_partition_to_json(mp)}};
    std::ostringstream pretty;
    pretty << "nonsingular rank: " << fs.nonsingular_part.rows()
           << ", nilpotent dim: " << fs.nilpotent_part.rows()
           << "\nmodulus counts (0, (0,1), 1, (1,inf)): " << mp.n0 << " " << mp.n01
           << " " << mp.n1 << " " << mp.n1inf
           << (mp.exact_split ? "" : "  [split not exact over the field]");
    emit(cfg, report, pretty.str());
    return kExitOk;
}

template <class K>
int cmd_canonical(const Config& cfg, const json& jf) {
    auto f = affclass::operator_from_json<K>(jf);
    auto cf = affclass::canonical_affine(f);
    json cj = affclass::canonical_to_json(cf);
    json report{{"command", "canonical"},
                {"field", affclass::field_traits<K>::name()},
                {"canonical", cj},
                {"realized", affclass::operator_to_json(affclass::realize(cf))}};
    emit(cfg, report, cj.dump());
    return kExitOk;
}

template <class K>
int cmd_decide(const Config& cfg, const json& jf, const json& jg) {
    auto f = affclass::operator_from_json<K>(jf);
    auto g = affclass::operator_from_json<K>(jg);
    auto v = affclass::decide_affine(f, g);
    json report{{"command", "decide"},
                {"field", affclass::field_traits<K>::name()},
                {"verdict", affclass::verdict_to_json(v)}};
    std::ostringstream pretty;
    pretty << (v.conjugate ? "conjugate" : "not conjugate") << " ("
           << affclass::reason_name(v.reason) << ")";
    if (!v.evidence.empty()) pretty << "\n" << v.evidence;
    emit(cfg, report, pretty.str());
    return v.conjugate ? kExitOk : kExitNotConjugate;
}

template <class K>
int cmd_corpus_decide(const Config& cfg, const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    json pairs = json::array();
    std::ostringstream pretty;
    for (size_t i = 0; i < files.size(); ++i)
        for (size_t j = i + 1; j < files.size(); ++j) {
            json entry{{"f", files[i]}, {"g", files[j]}};
            try {
                auto f = affclass::operator_from_json<K>(load_json(files[i]));
                auto g = affclass::operator_from_json<K>(load_json(files[j]));
                entry["verdict"] = affclass::verdict_to_json(affclass::decide_affine(f, g));
            } catch (const affclass::RootOfUnityError& e) {
                entry["error"] = json{{"reason", "ROOT_OF_UNITY_PRECONDITION"},
                                      {"order", e.k}};
            } catch (const affclass::DimensionMismatch&) {
                entry["error"] = json{{"reason", "DIMENSION_MISMATCH"}};
            }
            pretty << files[i] << " vs " << files[j] << ": "
                   << (entry.contains("verdict")
                           ? entry["verdict"]["reason"].get<std::string>()
                           : entry["error"]["reason"].get<std::string>())
                   << "\n";
            pairs.push_back(std::move(entry));
        }
    emit(cfg, json{{"command", "decide"}, {"corpus", dir}, {"pairs", pairs}},
         pretty.str());
    return kExitOk;
}

template <class K>
int cmd_witness(const Config& cfg, const json& jf, const std::string& out_path) {
    auto f = affclass::operator_from_json<K>(jf);
    if (affclass::fixed_point(f)) {
        emit(cfg, precondition_report("FIXED_POINT_PRESENT", "witness construction requires an operator without fixed point"),
             "precondition violated: operator has a fixed point");
        return kExitPrecondition;
    }
    auto res = affclass::nofix_pipeline(f);
    auto rep = affclass::verify_conjugacy_report(f, res.canonical, res.witness,
                                                 cfg.samples, cfg.seed);
    json wfile{{"witness", affclass::witness_to_json(res.witness)},
               {"canonical", affclass::operator_to_json(res.canonical)},
               {"tolerance", cfg.tol},
               {"samples", cfg.samples},
               {"seed", cfg.seed}};
    std::ofstream out(out_path);
    if (!out) throw affclass::ParseError("cannot write " + out_path);
    out << wfile.dump(2) << "\n";
    json report{{"command", "witness"},
                {"field", affclass::field_traits<K>::name()},
                {"witness_file", out_path},
                {"canonical", affclass::canonical_to_json(affclass::canonical_affine(f))},
                {"verification", affclass::verify_report_to_json(rep)},
                {"samples", cfg.samples},
                {"seed", cfg.seed},
                {"tolerance", cfg.tol}};
    std::ostringstream pretty;
    pretty << "witness written to " << out_path << "\nresidual " << rep.residual
           << (rep.residual <= cfg.tol ? " (within tolerance)" : " (ABOVE tolerance)");
    emit(cfg, report, pretty.str());
    return rep.residual <= cfg.tol ? kExitOk : kExitNotConjugate;
}

template <class K>
int cmd_verify(const Config& cfg, const json& jf, const json& jg, const json& jw) {
    auto f = affclass::operator_from_json<K>(jf);
    auto g = affclass::operator_from_json<K>(jg);
    const json& wj = jw.contains("witness") ? jw.at("witness") : jw;
    auto w = affclass::witness_from_json<K>(wj);
    auto rep = affclass::verify_conjugacy_report(f, g, w, cfg.samples, cfg.seed);
    json report{{"command", "verify"},
                {"field", affclass::field_traits<K>::name()},
                {"verification", affclass::verify_report_to_json(rep)},
                {"samples", cfg.samples},
                {"seed", cfg.seed},
                {"tolerance", cfg.tol},
                {"accepted", rep.residual <= cfg.tol}};
    std::ostringstream pretty;
    pretty << "residual " << rep.residual
           << (rep.residual <= cfg.tol ? " (within tolerance)" : " (ABOVE tolerance)");
    emit(cfg, report, pretty.str());
    return rep.residual <= cfg.tol ? kExitOk : kExitNotConjugate;
}

template <class Fn>
int guarded(const Config& cfg, Fn&& fn) {
    try {
        return fn();
    } catch (const affclass::RootOfUnityError& e) {
        emit(cfg,
             json{{"error", "ROOT_OF_UNITY_PRECONDITION"}, {"order", e.k},
                  {"detail", e.what()}},
             std::string("precondition violated: ") + e.what());
        return kExitPrecondition;
    } catch (const affclass::DimensionMismatch& e) {
        emit(cfg, json{{"error", "DIMENSION_MISMATCH"}, {"detail", e.what()}},
             std::string("precondition violated: ") + e.what());
        return kExitPrecondition;
    } catch (const std::domain_error& e) {
        emit(cfg, json{{"error", "PRECONDITION"}, {"detail", e.what()}},
             std::string("precondition violated: ") + e.what());
        return kExitPrecondition;
    } catch (const affclass::ParseError& e) {
        emit(cfg, json{{"error", "PARSE"}, {"detail", e.what()}},
             std::string("parse error: ") + e.what());
        return kExitParse;
    } catch (const json::exception& e) {
        emit(cfg, json{{"error", "PARSE"}, {"detail", e.what()}},
             std::string("parse error: ") + e.what());
        return kExitParse;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classification of affine operators up to topological conjugacy"};
    app.require_subcommand(1);
    Config cfg;
    app.add_option("--field", cfg.field, "Scalar field override: R or C")
        ->check(CLI::IsMember({"R", "C"}));
    app.add_option("--tol", cfg.tol, "Residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--samples", cfg.samples, "Verification sample count")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Verification RNG seed");
    app.add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "pretty"}));
    app.add_option("--corpus", cfg.corpus, "Directory of operator files (decide)");

    std::string path_f, path_g, path_w;
    auto* sc_fp = app.add_subcommand("fixed-point", "Solve (A-I)x = -b");
    sc_fp->add_option("f", path_f, "operator file")->required();
    auto* sc_split = app.add_subcommand("split", "Fitting split and modulus partition");
    sc_split->add_option("f", path_f, "operator file")->required();
    auto* sc_canon = app.add_subcommand("canonical", "Canonical form");
    sc_canon->add_option("f", path_f, "operator file")->required();
    auto* sc_decide = app.add_subcommand("decide", "Decide conjugacy of a pair");
    sc_decide->add_option("f", path_f, "operator file");
    sc_decide->add_option("g", path_g, "operator file");
    auto* sc_wit = app.add_subcommand("witness", "Construct a conjugacy witness");
    sc_wit->add_option("f", path_f, "operator file")->required();
    sc_wit->add_option("out", path_w, "witness output file")->required();
    auto* sc_verify = app.add_subcommand("verify", "Replay a witness file");
    sc_verify->add_option("f", path_f, "operator file")->required();
    sc_verify->add_option("g", path_g, "operator file")->required();
    sc_verify->add_option("w", path_w, "witness file")->required();
    for (CLI::App* sc : {sc_fp, sc_split, sc_canon, sc_decide, sc_wit, sc_verify})
        sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    return guarded(cfg, [&]() -> int {
        if (sc_decide->parsed() && !cfg.corpus.empty()) {
            std::vector<json> inputs;
            for (const auto& e : std::filesystem::directory_iterator(cfg.corpus))
                if (e.path().extension() == ".json")
                    inputs.push_back(load_json(e.path().string()));
            if (use_complex(cfg, inputs))
                return cmd_corpus_decide<affclass::GRat>(cfg, cfg.corpus);
            return cmd_corpus_decide<affclass::Rat>(cfg, cfg.corpus);
        }
        if (sc_decide->parsed() && (path_f.empty() || path_g.empty()))
            throw affclass::ParseError("decide requires two operator files");

        json jf = load_json(path_f);
        if (sc_fp->parsed())
            return use_complex(cfg, {jf}) ? cmd_fixed_point<affclass::GRat>(cfg, jf)
                                          : cmd_fixed_point<affclass::Rat>(cfg, jf);
        if (sc_split->parsed())
            return use_complex(cfg, {jf}) ? cmd_split<affclass::GRat>(cfg, jf)
                                          : cmd_split<affclass::Rat>(cfg, jf);
        if (sc_canon->parsed())
            return use_complex(cfg, {jf}) ? cmd_canonical<affclass::GRat>(cfg, jf)
                                          : cmd_canonical<affclass::Rat>(cfg, jf);
        if (sc_decide->parsed()) {
            json jg = load_json(path_g);
            return use_complex(cfg, {jf, jg}) ? cmd_decide<affclass::GRat>(cfg, jf, jg)
                                              : cmd_decide<affclass::Rat>(cfg, jf, jg);
        }
        if (sc_wit->parsed())
            return use_complex(cfg, {jf}) ? cmd_witness<affclass::GRat>(cfg, jf, path_w)
                                          : cmd_witness<affclass::Rat>(cfg, jf, path_w);
        if (sc_verify->parsed()) {
            json jg = load_json(path_g);
            json jw = load_json(path_w);
            return use_complex(cfg, {jf, jg, jw})
                       ? cmd_verify<affclass::GRat>(cfg, jf, jg, jw)
                       : cmd_verify<affclass::Rat>(cfg, jf, jg, jw);
        }
        throw affclass::ParseError("no subcommand");
    });
}
