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

#ifndef AFFCLASS_WITNESS_HPP
#define AFFCLASS_WITNESS_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "affclass/conjugacy.hpp"
#include "affclass/matrix.hpp"
#include "affclass/structure.hpp"

namespace affclass {

// Explicit conjugating homeomorphisms. A witness h certifies h(f(x)) =
// g(h(x)): translations, exact linear base changes and triangular
// polynomial maps stay in the ground field; exponential-flow stages are
// numeric (double precision) by nature.

struct SingularMatrixError : std::runtime_error {
    SingularMatrixError() : std::runtime_error("matrix is singular") {}
};
struct NoRealLogError : std::runtime_error {
    NoRealLogError()
        : std::runtime_error(
              "no real logarithm: a negative eigenvalue has an odd number of "
              "Jordan blocks of some size") {}
};

template <class K>
using NumMat =
    Eigen::Matrix<typename field_traits<K>::numeric, Eigen::Dynamic, Eigen::Dynamic>;

namespace witness_detail {

constexpr double kRankTol = 1e-9;
constexpr double kClusterTol = 1e-6;

template <class K>
NumMat<K> to_numeric_matrix(const Matrix<K>& M) {
    NumMat<K> R(M.rows(), M.cols());
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j)
            R(static_cast<long>(i), static_cast<long>(j)) =
                field_traits<K>::to_numeric(M(i, j));
    return R;
}

/// Falling-factorial binomial coefficient C(t, j) as a polynomial in t.
template <class T>
T binom_poly(const T& t, unsigned j) {
    T r(1);
    long fact = 1;
    for (unsigned l = 0; l < j; ++l) {
        r = r * (t - T(static_cast<int>(l)));
        fact *= static_cast<long>(l + 1);
    }
    return r / T(static_cast<int>(fact));
}

/// The k-th correction polynomial of the triangular map that conjugates a
/// unipotent single-block operator with translation e1 to a pure
/// translation: P_k = (-1)^k * C(x1+k-1, k+1) * k
///                    + sum_{i=1..k-1} (-1)^i * C(x1+i-1, i) * x_{k+1-i}.
template <class T>
T unipotent_P(const std::vector<T>& x, size_t k) {
    T tk = T(x[0] + T(static_cast<int>(k) - 1));
    T s = T(binom_poly(tk, static_cast<unsigned>(k + 1)) * T(static_cast<int>(k)));
    if (k % 2 == 1) s = T(-s);
    for (size_t i = 1; i < k; ++i) {
        T ti = T(x[0] + T(static_cast<int>(i) - 1));
        T term = T(binom_poly(ti, static_cast<unsigned>(i)) * x[k - i]);
        if (i % 2 == 1)
            s = T(s - term);
        else
            s = T(s + term);
    }
    return s;
}

}  // namespace witness_detail

// ---------------------------------------------------------------------------
// Numeric matrix logarithms.

/// Complex logarithm of a nonsingular complex matrix. If an eigenvalue sits
/// on the principal branch cut, the spectrum is rotated off the cut first
/// (log F = log(cF) - log(c) I for a unimodular c).
inline Eigen::MatrixXcd matrix_log(const Eigen::MatrixXcd& F) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(F, false);
    const auto& ev = es.eigenvalues();
    double scale = F.norm() + 1.0;
    for (long i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) < witness_detail::kRankTol * scale) throw SingularMatrixError();
    double theta = 0.0;
    for (int attempt = 0; attempt < 32; ++attempt, theta += 0.19) {
        bool clear = true;
        for (long i = 0; i < ev.size() && clear; ++i) {
            double a = std::arg(ev(i) * std::polar(1.0, theta));
            if (std::abs(std::abs(a) - M_PI) < 0.05) clear = false;
        }
        if (clear) break;
    }
    std::complex<double> c = std::polar(1.0, theta);
    Eigen::MatrixXcd rotated = c * F;
    Eigen::MatrixXcd L = rotated.log();
    L -= std::log(c) * Eigen::MatrixXcd::Identity(F.rows(), F.cols());
    return L;
}

namespace witness_detail {

inline long num_rank(const Eigen::MatrixXd& M, double tol_scale) {
    if (M.rows() == 0 || M.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    long r = 0;
    double t = kRankTol * std::max(1.0, tol_scale);
    for (long i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > t) ++r;
    return r;
}

/// Orthonormal basis of the column space (first r left singular vectors).
inline Eigen::MatrixXd col_space(const Eigen::MatrixXd& M, double tol_scale) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU);
    long r = 0;
    double t = kRankTol * std::max(1.0, tol_scale);
    for (long i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > t) ++r;
    return svd.matrixU().leftCols(r);
}

/// Orthonormal basis of the kernel (right singular vectors of small sigma).
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& M, double tol_scale) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    double t = kRankTol * std::max(1.0, tol_scale);
    long r = 0;
    for (long i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > t) ++r;
    return svd.matrixV().rightCols(M.cols() - r);
}

/// Numeric Jordan chains of F at real eigenvalue lambda: returns chains as
/// column groups [v, Mv, ..., M^{s-1}v], sizes in `sizes` (descending).
inline Eigen::MatrixXd numeric_chains(const Eigen::MatrixXd& F, double lambda,
                                      std::vector<long>& sizes) {
    long n = F.rows();
    Eigen::MatrixXd M = F - lambda * Eigen::MatrixXd::Identity(n, n);
    double sc = F.norm() + 1.0;
    std::vector<long> ranks{n};
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    long smax = 0;
    for (long j = 1; j <= n; ++j) {
        P = P * M;
        long r = num_rank(P, sc);
        ranks.push_back(r);
        if (r == ranks[static_cast<size_t>(j - 1)]) {
            smax = j - 1;
            break;
        }
        smax = j;
    }
    std::vector<Eigen::VectorXd> chain_cols;
    sizes.clear();
    std::vector<std::pair<Eigen::VectorXd, long>> tops;  // (top vector, size)
    // W-space: ker M^{s-1} plus already-chosen chain vectors inside ker M^s.
    for (long s = smax; s >= 1; --s) {
        Eigen::MatrixXd Ms1 = Eigen::MatrixXd::Identity(n, n);
        for (long j = 0; j < s - 1; ++j) Ms1 = Ms1 * M;
        Eigen::MatrixXd Ms = Ms1 * M;
        Eigen::MatrixXd kerS = null_space(Ms, sc);
        std::vector<Eigen::VectorXd> w_cols;
        Eigen::MatrixXd kerS1 = null_space(Ms1, sc);
        for (long c = 0; c < kerS1.cols(); ++c) w_cols.push_back(kerS1.col(c));
        for (const auto& [top, sz] : tops)
            for (long j = sz - s; j < sz; ++j) {
                Eigen::VectorXd v = top;
                for (long l = 0; l < j; ++l) v = M * v;
                w_cols.push_back(v.normalized());
            }
        // Greedy extension: candidates from ker M^s independent of W.
        auto span_dim = [&](const std::vector<Eigen::VectorXd>& cols) {
            if (cols.empty()) return 0L;
            Eigen::MatrixXd S(n, static_cast<long>(cols.size()));
            for (size_t c = 0; c < cols.size(); ++c) S.col(static_cast<long>(c)) = cols[c];
            return num_rank(S, 1.0);
        };
        long base = span_dim(w_cols);
        for (long c = 0; c < kerS.cols(); ++c) {
            std::vector<Eigen::VectorXd> trial = w_cols;
            trial.push_back(kerS.col(c));
            if (span_dim(trial) > base) {
                w_cols = std::move(trial);
                ++base;
                tops.emplace_back(kerS.col(c), s);
            }
        }
    }
    std::stable_sort(tops.begin(), tops.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [top, sz] : tops) {
        sizes.push_back(sz);
        Eigen::VectorXd v = top;
        for (long j = 0; j < sz; ++j) {
            chain_cols.push_back(v);
            v = M * v;
        }
    }
    Eigen::MatrixXd C(n, static_cast<long>(chain_cols.size()));
    for (size_t c = 0; c < chain_cols.size(); ++c) C.col(static_cast<long>(c)) = chain_cols[c];
    return C;
}

/// Real log of realify(J_s(lambda)) for lambda < 0, branch angle +pi, in
/// the interleaved chain-pair basis [u1,v1,u2,v2,...].
inline Eigen::MatrixXd paired_block_log(double lambda, long s) {
    // L = (ln|l| + i pi) I + log(I + N/l), N the subdiagonal-ones nilpotent.
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(s, s);
    std::complex<double> diag(std::log(-lambda), M_PI);
    for (long i = 0; i < s; ++i) L(i, i) = diag;
    Eigen::MatrixXcd N = Eigen::MatrixXcd::Zero(s, s);
    for (long i = 0; i + 1 < s; ++i) N(i + 1, i) = 1.0 / lambda;
    Eigen::MatrixXcd Np = N, acc = Eigen::MatrixXcd::Zero(s, s);
    for (long j = 1; j < s; ++j) {
        acc += (j % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(j) * Np;
        Np = Np * N;
    }
    L += acc;
    Eigen::MatrixXd R(2 * s, 2 * s);
    for (long i = 0; i < s; ++i)
        for (long j = 0; j < s; ++j) {
            R(2 * i, 2 * j) = L(i, j).real();
            R(2 * i, 2 * j + 1) = -L(i, j).imag();
            R(2 * i + 1, 2 * j) = L(i, j).imag();
            R(2 * i + 1, 2 * j + 1) = L(i, j).real();
        }
    return R;
}

}  // namespace witness_detail

/// Real logarithm of a nonsingular real matrix. Exists iff every negative
/// real eigenvalue has an even number of Jordan blocks of each size; throws
/// NoRealLogError otherwise. Negative-eigenvalue content is handled by
/// pairing equal Jordan chains into a complex structure (branch angle pi).
inline Eigen::MatrixXd matrix_log_real(const Eigen::MatrixXd& F) {
    namespace d = witness_detail;
    long n = F.rows();
    if (n == 0) return F;
    Eigen::EigenSolver<Eigen::MatrixXd> es(F);
    const auto& ev = es.eigenvalues();
    double scale = F.norm() + 1.0;
    std::vector<double> neg;  // clustered negative real eigenvalues
    for (long i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) < d::kRankTol * scale) throw SingularMatrixError();
        if (std::abs(ev(i).imag()) < d::kClusterTol && ev(i).real() < 0) {
            bool merged = false;
            for (double& l : neg)
                if (std::abs(l - ev(i).real()) < d::kClusterTol * std::max(1.0, std::abs(l))) {
                    merged = true;
                    break;
                }
            if (!merged) neg.push_back(ev(i).real());
        }
    }
    if (neg.empty()) return F.log();

    // Even-block check and chain extraction per negative eigenvalue.
    std::vector<Eigen::VectorXd> basis_cols;
    std::vector<std::pair<double, long>> pair_blocks;  // (lambda, size) per chain pair
    long neg_dim = 0;
    for (double lambda : neg) {
        std::vector<long> sizes;
        Eigen::MatrixXd C = d::numeric_chains(F, lambda, sizes);
        // counts per size must be even
        for (size_t i = 0; i < sizes.size();) {
            size_t j = i;
            while (j < sizes.size() && sizes[j] == sizes[i]) ++j;
            if ((j - i) % 2 != 0) throw NoRealLogError();
            i = j;
        }
        // pair consecutive equal-size chains, interleaving their columns
        long col = 0;
        for (size_t i = 0; i < sizes.size(); i += 2) {
            long s = sizes[i];
            for (long j = 0; j < s; ++j) {
                basis_cols.push_back(C.col(col + j));          // u_j
                basis_cols.push_back(C.col(col + s + j));      // v_j
            }
            pair_blocks.emplace_back(lambda, s);
            col += 2 * s;
            neg_dim += 2 * s;
        }
    }
    // Invariant subspace of the remaining spectrum: image of
    // prod(F - lambda I) over the negative eigenvalues (with multiplicity).
    Eigen::MatrixXd pneg = Eigen::MatrixXd::Identity(n, n);
    for (long i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i).imag()) < d::kClusterTol && ev(i).real() < 0)
            pneg = pneg * (F - ev(i).real() * Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd Vpos = d::col_space(pneg, std::pow(scale, static_cast<double>(n)));
    long pos_dim = Vpos.cols();
    if (pos_dim + neg_dim != n) throw std::logic_error("matrix_log_real: split failed");

    Eigen::MatrixXd B(n, n);
    for (long c = 0; c < pos_dim; ++c) B.col(c) = Vpos.col(c);
    for (long c = 0; c < neg_dim; ++c) B.col(pos_dim + c) = basis_cols[static_cast<size_t>(c)];
    Eigen::MatrixXd Binv = B.inverse();
    Eigen::MatrixXd Fp = (Binv * F * B).topLeftCorner(pos_dim, pos_dim);

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    if (pos_dim > 0) G.topLeftCorner(pos_dim, pos_dim) = Fp.log();
    long off = pos_dim;
    for (auto [lambda, s] : pair_blocks) {
        G.block(off, off, 2 * s, 2 * s) = d::paired_block_log(lambda, s);
        off += 2 * s;
    }
    return B * G * Binv;
}

namespace witness_detail {

template <class K, bool = field_traits<K>::is_complex>
struct log_dispatch;
template <class K>
struct log_dispatch<K, false> {
    static NumMat<K> log(const NumMat<K>& F) { return matrix_log_real(F); }
};
template <class K>
struct log_dispatch<K, true> {
    static NumMat<K> log(const NumMat<K>& F) { return matrix_log(F); }
};

}  // namespace witness_detail

// ---------------------------------------------------------------------------
// Witness stages and evaluation.

enum class StageKind { Translation, Linear, PolyUnipotent, NumericLinear, Flow };

inline const char* stage_kind_name(StageKind k) {
    switch (k) {
        case StageKind::Translation: return "Translation";
        case StageKind::Linear: return "Linear";
        case StageKind::PolyUnipotent: return "PolyUnipotent";
        case StageKind::NumericLinear: return "NumericLinear";
        case StageKind::Flow: return "Flow";
    }
    return "?";
}

/// Composite homeomorphism: forward applies the stages in order. Exact
/// stages evaluate in the ground field; NumericLinear and Flow force
/// double-precision evaluation of the whole composite.
template <class K>
class Witness {
  public:
    using Num = typename field_traits<K>::numeric;
    using Vec = std::vector<K>;
    using NVec = std::vector<Num>;

    struct Stage {
        StageKind kind;
        std::vector<K> t;        // Translation
        Matrix<K> S, Sinv;       // Linear
        size_t off = 0, len = 0; // PolyUnipotent / Flow coordinate range
        NumMat<K> N, Ninv;       // NumericLinear
        NumMat<K> G;             // Flow generator; h: y -> exp(-x0 G) y
    };

    Witness() = default;

    void add_translation(std::vector<K> t) {
        Stage s;
        s.kind = StageKind::Translation;
        s.t = std::move(t);
        stages_.push_back(std::move(s));
    }
    void add_linear(Matrix<K> S) {
        Stage s;
        s.kind = StageKind::Linear;
        auto inv = inverse(S);
        if (!inv) throw SingularMatrixError();
        s.S = std::move(S);
        s.Sinv = std::move(*inv);
        stages_.push_back(std::move(s));
    }
    void add_poly_unipotent(size_t off, size_t len) {
        Stage s;
        s.kind = StageKind::PolyUnipotent;
        s.off = off;
        s.len = len;
        stages_.push_back(std::move(s));
    }
    void add_numeric_linear(NumMat<K> N) {
        Stage s;
        s.kind = StageKind::NumericLinear;
        s.Ninv = N.inverse();
        s.N = std::move(N);
        stages_.push_back(std::move(s));
    }
    void add_flow(size_t off, size_t len, NumMat<K> G) {
        Stage s;
        s.kind = StageKind::Flow;
        s.off = off;
        s.len = len;
        s.G = std::move(G);
        stages_.push_back(std::move(s));
    }

    const std::vector<Stage>& stages() const { return stages_; }

    bool exact() const {
        for (const Stage& s : stages_)
            if (s.kind == StageKind::Flow || s.kind == StageKind::NumericLinear)
                return false;
        return true;
    }

    /// Composite if several stages; the single stage's kind otherwise.
    std::string kind() const {
        if (stages_.size() != 1) return "Composite";
        return stage_kind_name(stages_[0].kind);
    }

    Vec forward_exact(Vec x) const {
        if (!exact()) throw std::logic_error("witness has numeric stages");
        for (const Stage& s : stages_) x = apply_exact(s, std::move(x), false);
        return x;
    }
    Vec inverse_exact(Vec x) const {
        if (!exact()) throw std::logic_error("witness has numeric stages");
        for (size_t i = stages_.size(); i-- > 0;)
            x = apply_exact(stages_[i], std::move(x), true);
        return x;
    }
    NVec forward_numeric(NVec x) const {
        for (const Stage& s : stages_) x = apply_numeric(s, std::move(x), false);
        return x;
    }
    NVec inverse_numeric(NVec x) const {
        for (size_t i = stages_.size(); i-- > 0;)
            x = apply_numeric(stages_[i], std::move(x), true);
        return x;
    }

  private:
    static Vec apply_exact(const Stage& s, Vec x, bool inv) {
        switch (s.kind) {
            case StageKind::Translation: {
                for (size_t i = 0; i < x.size(); ++i)
                    x[i] = inv ? K(x[i] - s.t[i]) : K(x[i] + s.t[i]);
                return x;
            }
            case StageKind::Linear:
                return (inv ? s.Sinv : s.S) * x;
            case StageKind::PolyUnipotent:
                return poly_unipotent_apply<K>(s, std::move(x), inv);
            default:
                throw std::logic_error("exact evaluation of numeric stage");
        }
    }
    NVec apply_numeric(const Stage& s, NVec x, bool inv) const {
        switch (s.kind) {
            case StageKind::Translation: {
                for (size_t i = 0; i < x.size(); ++i) {
                    Num ti = field_traits<K>::to_numeric(s.t[i]);
                    x[i] = inv ? x[i] - ti : x[i] + ti;
                }
                return x;
            }
            case StageKind::Linear: {
                const Matrix<K>& M = inv ? s.Sinv : s.S;
                NVec y(x.size(), Num(0));
                for (size_t i = 0; i < M.rows(); ++i)
                    for (size_t j = 0; j < M.cols(); ++j)
                        y[i] += field_traits<K>::to_numeric(M(i, j)) * x[j];
                return y;
            }
            case StageKind::PolyUnipotent:
                return poly_unipotent_apply<Num>(s, std::move(x), inv);
            case StageKind::NumericLinear: {
                const NumMat<K>& M = inv ? s.Ninv : s.N;
                NVec y(x.size(), Num(0));
                for (long i = 0; i < M.rows(); ++i)
                    for (long j = 0; j < M.cols(); ++j)
                        y[static_cast<size_t>(i)] += M(i, j) * x[static_cast<size_t>(j)];
                return y;
            }
            case StageKind::Flow: {
                Num x0 = x[0];
                NumMat<K> E = ((inv ? x0 : -x0) * s.G).exp();
                NVec y = x;
                for (long i = 0; i < E.rows(); ++i) {
                    Num acc(0);
                    for (long j = 0; j < E.cols(); ++j)
                        acc += E(i, j) * x[s.off + static_cast<size_t>(j)];
                    y[s.off + static_cast<size_t>(i)] = acc;
                }
                return y;
            }
        }
        throw std::logic_error("unreachable");
    }

    template <class T, class SVec>
    static SVec poly_unipotent_apply(const Stage& s, SVec x, bool inv) {
        std::vector<T> blk(x.begin() + static_cast<long>(s.off),
                           x.begin() + static_cast<long>(s.off + s.len));
        if (!inv) {
            for (size_t k = 1; k < s.len; ++k)
                x[s.off + k] = blk[k] + witness_detail::unipotent_P(blk, k);
        } else {
            std::vector<T> orig(s.len);
            orig[0] = blk[0];
            for (size_t k = 1; k < s.len; ++k) {
                orig[k] = blk[k] - witness_detail::unipotent_P(orig, k);
                x[s.off + k] = orig[k];
            }
        }
        return x;
    }

    std::vector<Stage> stages_;
};

/// h(x) = x + p; conjugates f to its linear part when p solves (A-I)p = b.
template <class K>
Witness<K> translation_witness(std::vector<K> p) {
    Witness<K> w;
    w.add_translation(std::move(p));
    return w;
}

/// Lower-triangular Toeplitz matrix with first column a; commutes with the
/// unipotent Jordan block and maps e1 to a. Requires a[0] != 0.
template <class K>
Matrix<K> toeplitz_of(const std::vector<K>& a) {
    if (a.empty() || a[0] == K(0))
        throw std::invalid_argument("toeplitz_of: first coordinate must be nonzero");
    size_t m = a.size();
    Matrix<K> S(m, m);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j <= i; ++j) S(i, j) = a[i - j];
    return S;
}

/// Linear witness with S = toeplitz(a): conjugates (J_m(1), e1) to (J_m(1), a).
template <class K>
Witness<K> step3_witness(const std::vector<K>& a) {
    Witness<K> w;
    w.add_linear(toeplitz_of(a));
    return w;
}

/// Triangular polynomial witness conjugating (J_m(1), e1) to (I_m, e1).
template <class K>
Witness<K> poly_unipotent_witness(size_t m) {
    if (m == 0) throw std::invalid_argument("poly_unipotent_witness: m must be >= 1");
    Witness<K> w;
    w.add_poly_unipotent(0, m);
    return w;
}

/// Flow witness on (x, y): h(x,y) = (x, F^{-x} y) with F = e^G; conjugates
/// (x,y) -> (x+1, eps*F y) to (x,y) -> (x+1, eps*y) for eps = +-1.
template <class K>
Witness<K> flow_witness(const Matrix<K>& F, int /*eps*/ = +1) {
    Witness<K> w;
    NumMat<K> Fn = witness_detail::to_numeric_matrix(F);
    w.add_flow(1, F.rows(), witness_detail::log_dispatch<K>::log(Fn));
    return w;
}

// ---------------------------------------------------------------------------
// Exact Jordan chain basis for nilpotent matrices.

/// Columns are Jordan chains [v, Nv, ..., N^{s-1}v] of the nilpotent N,
/// blocks in descending size order; in this basis N is the direct sum of
/// lower-triangular nilpotent Jordan blocks. Exact; verified internally.
template <class K>
std::pair<Matrix<K>, SegreCharacteristic> jordan_chain_basis(const Matrix<K>& N) {
    size_t n = N.rows();
    if (n == 0) return {Matrix<K>(), {}};
    if (!mat_pow(N, n).is_zero())
        throw std::domain_error("jordan_chain_basis: input not nilpotent");

    std::vector<Matrix<K>> powers{Matrix<K>::identity(n)};
    for (size_t j = 1; j <= n; ++j) powers.push_back(powers.back() * N);
    size_t smax = 1;
    while (smax < n && rank(powers[smax]) > 0) ++smax;

    struct Chain {
        std::vector<std::vector<K>> vecs;
    };
    std::vector<Chain> chains;
    auto col_of = [&](const Matrix<K>& M, size_t c) {
        std::vector<K> v(M.rows());
        for (size_t i = 0; i < M.rows(); ++i) v[i] = M(i, c);
        return v;
    };
    auto rank_of_cols = [&](const std::vector<std::vector<K>>& cols) {
        Matrix<K> M(n, cols.size());
        for (size_t c = 0; c < cols.size(); ++c)
            for (size_t i = 0; i < n; ++i) M(i, c) = cols[c][i];
        return rank(M);
    };

    for (size_t s = smax; s >= 1; --s) {
        Matrix<K> kerS = kernel_basis(powers[s]);
        Matrix<K> kerS1 = kernel_basis(powers[s - 1]);
        std::vector<std::vector<K>> w;
        for (size_t c = 0; c < kerS1.cols(); ++c) w.push_back(col_of(kerS1, c));
        for (const Chain& ch : chains)
            for (const auto& v : ch.vecs)
                if ((powers[s] * Matrix<K>(n, 1, std::vector<K>(v))).is_zero())
                    w.push_back(v);
        size_t base = rank_of_cols(w);
        for (size_t c = 0; c < kerS.cols(); ++c) {
            std::vector<K> v = col_of(kerS, c);
            w.push_back(v);
            if (rank_of_cols(w) > base) {
                ++base;
                Chain ch;
                std::vector<K> cur = v;
                for (size_t j = 0; j < s; ++j) {
                    ch.vecs.push_back(cur);
                    cur = N * cur;
                }
                chains.push_back(std::move(ch));
            } else {
                w.pop_back();
            }
        }
        if (s == 1) break;
    }
    std::stable_sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) {
        return a.vecs.size() > b.vecs.size();
    });
    Matrix<K> C(n, n);
    SegreCharacteristic segre;
    size_t col = 0;
    for (const Chain& ch : chains) {
        segre.push_back(ch.vecs.size());
        for (const auto& v : ch.vecs) {
            for (size_t i = 0; i < n; ++i) C(i, col) = v[i];
            ++col;
        }
    }
    auto Cinv = inverse(C);
    if (col != n || !Cinv ||
        (*Cinv) * N * C != nilpotent_from_segre<K>(segre))
        throw std::logic_error("jordan_chain_basis: verification failed");
    return {std::move(C), std::move(segre)};
}

// ---------------------------------------------------------------------------
// The no-fixed-point reduction pipeline.

template <class K>
struct PipelineResult {
    Witness<K> witness;
    AffineOperator<K> canonical;
};

namespace witness_detail {

template <class K>
AffineOperator<K> apply_linear_stage(const AffineOperator<K>& f, const Matrix<K>& M,
                                     const Matrix<K>& Minv) {
    return {M * f.A * Minv, M * f.b};
}

template <class K>
AffineOperator<K> apply_translation_stage(const AffineOperator<K>& f,
                                          const std::vector<K>& t) {
    std::vector<K> at = f.A * t;
    std::vector<K> b = f.b;
    for (size_t i = 0; i < b.size(); ++i) b[i] = b[i] + t[i] - at[i];
    return {f.A, std::move(b)};
}

}  // namespace witness_detail

/// Reduces an affine operator without fixed point to its realized canonical
/// form g, returning a witness h with h(f(x)) = g(h(x)). All stages are
/// exact except the exponential flows (and, over the reals, one numeric
/// base change splitting off negative-real-eigenvalue content).
template <class K>
PipelineResult<K> nofix_pipeline(const AffineOperator<K>& f) {
    namespace d = witness_detail;
    if (fixed_point(f))
        throw std::domain_error("nofix_pipeline: operator has a fixed point");
    size_t n = f.dim();
    CanonicalForm<K> cf = canonical_affine(f);
    AffineOperator<K> target = realize(cf);

    Witness<K> w;
    AffineOperator<K> cur = f;

    // Stage 1: primary decomposition basis [ker (A-I)^n | rest | ker A^n].
    Matrix<K> AmI = f.A - Matrix<K>::identity(n);
    Matrix<K> U = kernel_basis(mat_pow(AmI, n));
    Matrix<K> V = kernel_basis(mat_pow(f.A, n));
    size_t du = U.cols(), dv = V.cols(), dw = n - du - dv;
    Poly<K> cp = charpoly(f.A);
    Poly<K> r = cp;
    for (size_t i = 0; i < du; ++i) r = r / Poly<K>({K(-1), K(1)});
    r = r.shift_down(r.valuation());
    Matrix<K> Wb = dw > 0 ? kernel_basis(mat_pow(mat_poly_eval(r, f.A), n)) : Matrix<K>(n, 0);
    if (Wb.cols() != dw) throw std::logic_error("nofix_pipeline: primary split failed");
    Matrix<K> S1(n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < du; ++j) S1(i, j) = U(i, j);
        for (size_t j = 0; j < dw; ++j) S1(i, du + j) = Wb(i, j);
        for (size_t j = 0; j < dv; ++j) S1(i, du + dw + j) = V(i, j);
    }
    auto S1inv = inverse(S1);
    if (!S1inv) throw std::logic_error("nofix_pipeline: primary basis singular");
    w.add_linear(*S1inv);
    cur = d::apply_linear_stage(cur, *S1inv, S1);

    // Stage 2: translate away b on the non-unipotent blocks (Fitting-style).
    if (dw + dv > 0) {
        Matrix<K> Awv = cur.A.submatrix(du, du, dw + dv, dw + dv) -
                        Matrix<K>::identity(dw + dv);
        std::vector<K> bwv(cur.b.begin() + static_cast<long>(du), cur.b.end());
        auto twv = solve(Awv, bwv);
        if (!twv) throw std::logic_error("nofix_pipeline: translation solve failed");
        std::vector<K> t(n, K(0));
        for (size_t i = 0; i < dw + dv; ++i) t[du + i] = (*twv)[i];
        w.add_translation(t);
        cur = d::apply_translation_stage(cur, t);
    }

    // Stage 3: exact Jordan bases for the unipotent and nilpotent blocks.
    Matrix<K> Nu = cur.A.submatrix(0, 0, du, du) - Matrix<K>::identity(du);
    auto [Cu, segre_u] = jordan_chain_basis(Nu);
    auto [Cv, segre_v] = jordan_chain_basis(cur.A.submatrix(du + dw, du + dw, dv, dv));
    Matrix<K> S3 = direct_sum(direct_sum(Cu, Matrix<K>::identity(dw)), Cv);
    auto S3inv = inverse(S3);
    w.add_linear(*S3inv);
    cur = d::apply_linear_stage(cur, *S3inv, S3);

    // Unipotent block offsets.
    std::vector<size_t> uoff;
    {
        size_t o = 0;
        for (size_t m : segre_u) {
            uoff.push_back(o);
            o += m;
        }
    }

    // Stage 4: translate away b on blocks whose leading component vanishes.
    {
        std::vector<K> t(n, K(0));
        bool any = false;
        for (size_t i = 0; i < segre_u.size(); ++i) {
            if (cur.b[uoff[i]] != K(0)) continue;
            size_t m = segre_u[i];
            Matrix<K> JmI = jordan_block(K(1), m) - Matrix<K>::identity(m);
            std::vector<K> bi(cur.b.begin() + static_cast<long>(uoff[i]),
                              cur.b.begin() + static_cast<long>(uoff[i] + m));
            auto ti = solve(JmI, bi);
            if (!ti) throw std::logic_error("nofix_pipeline: inactive block solve failed");
            for (size_t j = 0; j < m; ++j)
                if ((*ti)[j] != K(0)) {
                    t[uoff[i] + j] = (*ti)[j];
                    any = true;
                }
        }
        if (any) {
            w.add_translation(t);
            cur = d::apply_translation_stage(cur, t);
        }
    }

    std::vector<size_t> active;  // indices of unipotent blocks with b1 != 0
    for (size_t i = 0; i < segre_u.size(); ++i)
        if (cur.b[uoff[i]] != K(0)) active.push_back(i);
    if (active.empty()) throw std::logic_error("nofix_pipeline: no active block");

    // Stage 5: Toeplitz normalization of b to e1 on each active block.
    {
        Matrix<K> S5 = Matrix<K>::identity(n);
        for (size_t i : active) {
            size_t m = segre_u[i];
            std::vector<K> a(cur.b.begin() + static_cast<long>(uoff[i]),
                             cur.b.begin() + static_cast<long>(uoff[i] + m));
            Matrix<K> Ti = toeplitz_of(a);
            auto TiInv = inverse(Ti);
            for (size_t r2 = 0; r2 < m; ++r2)
                for (size_t c2 = 0; c2 < m; ++c2)
                    S5(uoff[i] + r2, uoff[i] + c2) = (*TiInv)(r2, c2);
        }
        auto S5inv = inverse(S5);
        w.add_linear(S5);
        cur = d::apply_linear_stage(cur, S5, *S5inv);
    }

    // Stage 6: Polynomial unipotent maps turn each active (J_m(1), e1) into (I_m, e1).
    for (size_t i : active) {
        if (segre_u[i] < 2) continue;
        w.add_poly_unipotent(uoff[i], segre_u[i]);
        // Effect on cur: the block becomes the identity; b stays e1 there.
        for (size_t j = 1; j < segre_u[i]; ++j) cur.A(uoff[i] + j, uoff[i] + j - 1) = K(0);
    }

    // Stage 7: merge the translation coordinates of the active blocks.
    if (active.size() > 1) {
        Matrix<K> M = Matrix<K>::identity(n);
        for (size_t j = 1; j < active.size(); ++j)
            M(uoff[active[j]], uoff[active[0]]) = K(-1);
        auto Minv = inverse(M);
        w.add_linear(M);
        cur = d::apply_linear_stage(cur, M, *Minv);
    }

    // Stage 8: permutation to [x0 | identity coords | D | nilpotent part].
    std::vector<size_t> order;
    order.push_back(uoff[active[0]]);
    for (size_t i : active)
        for (size_t j = (i == active[0] ? 1 : 0); j < segre_u[i]; ++j)
            order.push_back(uoff[i] + j);
    for (size_t i = 0; i < segre_u.size(); ++i) {
        bool is_active = std::find(active.begin(), active.end(), i) != active.end();
        if (!is_active && segre_u[i] == 1) order.push_back(uoff[i]);
    }
    std::vector<size_t> dcoords;
    for (size_t i = 0; i < segre_u.size(); ++i) {
        bool is_active = std::find(active.begin(), active.end(), i) != active.end();
        if (!is_active && segre_u[i] >= 2)
            for (size_t j = 0; j < segre_u[i]; ++j) dcoords.push_back(uoff[i] + j);
    }
    for (size_t j = 0; j < dw; ++j) dcoords.push_back(du + j);
    for (size_t c : dcoords) order.push_back(c);
    for (size_t j = 0; j < dv; ++j) order.push_back(du + dw + j);
    if (order.size() != n) throw std::logic_error("nofix_pipeline: permutation failed");
    {
        Matrix<K> P(n, n);
        for (size_t newpos = 0; newpos < n; ++newpos) P(newpos, order[newpos]) = K(1);
        auto Pinv = inverse(P);
        w.add_linear(P);
        cur = d::apply_linear_stage(cur, P, *Pinv);
    }

    size_t p = n - dcoords.size() - dv;  // identity coordinates incl. x0
    size_t dd = dcoords.size();

    // Exact shape check: cur = (I_p (+) D (+) J0, e1).
    {
        bool ok = cur.b[0] == K(1);
        for (size_t i = 1; i < n && ok; ++i) ok = cur.b[i] == K(0);
        if (ok) ok = cur.A.submatrix(0, 0, p, p) == Matrix<K>::identity(p);
        if (ok)
            ok = cur.A.submatrix(p + dd, p + dd, dv, dv) ==
                 nilpotent_from_segre<K>(segre_v);
        if (!ok) throw std::logic_error("nofix_pipeline: intermediate form mismatch");
    }

    // Stage 9: exponential flows remove D.
    if (dd > 0) {
        Matrix<K> Dex = cur.A.submatrix(p, p, dd, dd);
        NumMat<K> Dnum = d::to_numeric_matrix(Dex);
        if constexpr (field_traits<K>::is_complex) {
            w.add_flow(p, dd, d::log_dispatch<K>::log(Dnum));
        } else {
            // Exact count of negative real eigenvalues (with multiplicity).
            Poly<K> dcp = charpoly(Dex);
            std::vector<Rat> rc;
            for (const K& v : dcp.coeffs()) rc.push_back(field_traits<K>::re(v));
            size_t q = static_cast<size_t>(count_real_roots_in_mult(
                Poly<Rat>(rc), sturm::Bound::neg_inf(), sturm::Bound::at(Rat(0))));
            if ((q % 2 == 1) != (cf.epsilon < 0))
                throw std::logic_error("nofix_pipeline: orientation bookkeeping mismatch");
            if (q == 0) {
                w.add_flow(p, dd, matrix_log_real(Dnum));
            } else {
                // Numeric split D ~ P (+) Kneg, Kneg with negative spectrum.
                Eigen::EigenSolver<Eigen::MatrixXd> es(Dnum);
                const auto& ev = es.eigenvalues();
                Eigen::MatrixXd pneg = Eigen::MatrixXd::Identity(dd, dd);
                Eigen::MatrixXcd ppos = Eigen::MatrixXcd::Identity(dd, dd);
                size_t qn = 0;
                for (long i = 0; i < ev.size(); ++i) {
                    if (std::abs(ev(i).imag()) < d::kClusterTol && ev(i).real() < 0) {
                        ++qn;
                        pneg = pneg * (Dnum - ev(i).real() *
                                                  Eigen::MatrixXd::Identity(dd, dd));
                    } else {
                        ppos = ppos * (Dnum.template cast<std::complex<double>>() -
                                       ev(i) * Eigen::MatrixXcd::Identity(dd, dd));
                    }
                }
                if (qn != q)
                    throw std::logic_error("nofix_pipeline: eigenvalue count mismatch");
                double sc = std::pow(Dnum.norm() + 1.0, static_cast<double>(dd));
                Eigen::MatrixXd Vp = d::col_space(pneg, sc);
                Eigen::MatrixXd Vn = d::col_space(ppos.real(), sc);
                if (Vp.cols() + Vn.cols() != static_cast<long>(dd))
                    throw std::logic_error("nofix_pipeline: split dimensions");
                Eigen::MatrixXd T(dd, dd);
                if (Vp.cols() > 0) T.leftCols(Vp.cols()) = Vp;
                T.rightCols(Vn.cols()) = Vn;
                NumMat<K> Nfull = NumMat<K>::Identity(n, n);
                Nfull.block(p, p, dd, dd) = T.inverse();
                w.add_numeric_linear(Nfull);
                Eigen::MatrixXd Dp = (T.inverse() * Dnum * T);
                size_t dpos = dd - q;
                if (dpos > 0)
                    w.add_flow(p, dpos, matrix_log_real(Dp.topLeftCorner(dpos, dpos)));
                // Kneg -> -I via the flow of Q = -Kneg (positive spectrum).
                Eigen::MatrixXd Q = -Dp.bottomRightCorner(q, q);
                w.add_flow(p + dpos, q, matrix_log_real(Q));
                // Pair the -1 coordinates into rotations; one may remain.
                Eigen::MatrixXd rot(2, 2);
                rot << 0.0, -M_PI, M_PI, 0.0;
                for (size_t j = 0; j + 1 < q; j += 2)
                    w.add_flow(p + dpos + j, 2, rot);
            }
        }
    }

    // Final consistency: the pipeline's realized shape must equal target.
    {
        size_t kk = cf.k;
        size_t extra = cf.epsilon < 0 ? 1 : 0;
        if (p + dd != kk + extra || segre_v != cf.segre)
            throw std::logic_error("nofix_pipeline: canonical mismatch");
    }
    return {std::move(w), std::move(target)};
}

// ---------------------------------------------------------------------------
// Verification.

namespace witness_detail {

inline double abs_num(double x) { return std::abs(x); }
inline double abs_num(const std::complex<double>& x) { return std::abs(x); }

}  // namespace witness_detail

/// Pinned tolerances: acceptance threshold for numeric witnesses, target
/// accuracy of flow stages, and the inverse round-trip bound.
constexpr double kVerifyTol = 1e-8;
constexpr double kFlowTol = 1e-9;
constexpr double kRoundtripTol = 1e-10;

/// Residual report: worst sample point included for diagnostics.
template <class K>
struct VerifyReport {
    double residual = 0.0;
    std::vector<typename field_traits<K>::numeric> argmax_point;
};

/// Max residual of h(f(x)) = g(h(x)) and of h^{-1}(h(x)) = x over sampled
/// points. Exact witnesses are evaluated in the ground field on rational
/// sample points and report exactly 0.0 when the identity holds.
template <class K>
VerifyReport<K> verify_conjugacy_report(const AffineOperator<K>& f,
                                        const AffineOperator<K>& g,
                                        const Witness<K>& h, size_t samples = 100,
                                        uint64_t seed = 12345) {
    if (f.dim() != g.dim()) throw DimensionMismatch("verify_conjugacy: size mismatch");
    using Num = typename field_traits<K>::numeric;
    size_t n = f.dim();
    std::mt19937_64 rng(seed);
    VerifyReport<K> rep;
    if (h.exact()) {
        std::uniform_int_distribution<int> num(-8, 8);
        std::uniform_int_distribution<int> den(1, 3);
        for (size_t s = 0; s < samples; ++s) {
            std::vector<K> x(n);
            for (size_t i = 0; i < n; ++i) {
                Rat re(num(rng), den(rng));
                if constexpr (field_traits<K>::is_complex) {
                    Rat im(num(rng), den(rng));
                    x[i] = field_traits<K>::from_parts(re, im);
                } else {
                    x[i] = K(re);
                }
            }
            std::vector<K> lhs = h.forward_exact(f(x));
            std::vector<K> rhs = g(h.forward_exact(x));
            std::vector<K> rt = h.inverse_exact(h.forward_exact(x));
            for (size_t i = 0; i < n; ++i) {
                K d1 = lhs[i] - rhs[i], d2 = rt[i] - x[i];
                if (d1 != K(0) || d2 != K(0)) {
                    double r = std::max(
                        witness_detail::abs_num(field_traits<K>::to_numeric(d1)),
                        witness_detail::abs_num(field_traits<K>::to_numeric(d2)));
                    if (r > rep.residual) {
                        rep.residual = r;
                        rep.argmax_point.clear();
                        for (const K& v : x)
                            rep.argmax_point.push_back(field_traits<K>::to_numeric(v));
                    }
                }
            }
        }
        return rep;
    }
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    auto apply_num = [&](const AffineOperator<K>& op, std::vector<Num> x) {
        std::vector<Num> y(n, Num(0));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j)
                y[i] += field_traits<K>::to_numeric(op.A(i, j)) * x[j];
            y[i] += field_traits<K>::to_numeric(op.b[i]);
        }
        return y;
    };
    for (size_t s = 0; s < samples; ++s) {
        std::vector<Num> x(n);
        for (size_t i = 0; i < n; ++i) {
            if constexpr (field_traits<K>::is_complex)
                x[i] = Num(box(rng), box(rng));
            else
                x[i] = box(rng);
        }
        std::vector<Num> lhs = h.forward_numeric(apply_num(f, x));
        std::vector<Num> rhs = apply_num(g, h.forward_numeric(x));
        std::vector<Num> rt = h.inverse_numeric(h.forward_numeric(x));
        // Conjugators may grow exponentially in the sample box, so the
        // conjugacy defect is measured relative to the value magnitude.
        double scale = 1.0;
        for (size_t i = 0; i < n; ++i)
            scale = std::max({scale, witness_detail::abs_num(lhs[i]),
                              witness_detail::abs_num(rhs[i])});
        double worst = 0.0;
        for (size_t i = 0; i < n; ++i) {
            worst = std::max(worst, witness_detail::abs_num(lhs[i] - rhs[i]) / scale);
            worst = std::max(worst, witness_detail::abs_num(rt[i] - x[i]) /
                                        std::max(1.0, witness_detail::abs_num(x[i])));
        }
        if (worst > rep.residual) {
            rep.residual = worst;
            rep.argmax_point = x;
        }
    }
    return rep;
}

template <class K>
double verify_conjugacy(const AffineOperator<K>& f, const AffineOperator<K>& g,
                        const Witness<K>& h, size_t samples = 100,
                        uint64_t seed = 12345) {
    return verify_conjugacy_report(f, g, h, samples, seed).residual;
}

}  // namespace affclass

#endif  // AFFCLASS_WITNESS_HPP
