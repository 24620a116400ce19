// Copyright 2026 The qbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Holevo and Nagaoka/Nagaoka-Hayashi bounds as small LMI problems over an
// orthonormal Hermitian operator basis, plus the aggregated per-point
// bound report.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "qbounds/detector.hpp"
#include "qbounds/errors.hpp"
#include "qbounds/fisher.hpp"
#include "qbounds/linalg.hpp"
#include "qbounds/sdp.hpp"

namespace qbounds {

/// Orthonormal basis of Hermitian operators under <A,B> = Tr[A B].
/// For a qubit: {I, sigma_1, sigma_2, sigma_3} / sqrt(2).
struct OperatorBasis {
    std::vector<HermitianMatrix> elements;

    static OperatorBasis qubit() {
        const double s = 1.0 / std::sqrt(2.0);
        OperatorBasis b;
        b.elements.emplace_back(s * ComplexMatrix::identity(2));
        for (int j = 1; j <= 3; ++j) b.elements.emplace_back(s * pauli(j));
        return b;
    }

    size_t size() const { return elements.size(); }
};

namespace detail {

inline int matrix_rank(const RealMatrix& a, double tol = 1e-10) {
    RealMatrix w = a;
    const int m = w.rows(), n = w.cols();
    const double scale = std::max(1.0, w.frobenius_norm());
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int piv = -1;
        double best = tol * scale;
        for (int r = rank; r < m; ++r)
            if (std::abs(w(r, col)) > best) {
                best = std::abs(w(r, col));
                piv = r;
            }
        if (piv < 0) continue;
        if (piv != rank)
            for (int j = 0; j < n; ++j) std::swap(w(rank, j), w(piv, j));
        for (int r = rank + 1; r < m; ++r) {
            const double f = w(r, col) / w(rank, col);
            for (int j = col; j < n; ++j) w(r, j) -= f * w(rank, j);
        }
        ++rank;
    }
    return rank;
}

// Locally-unbiased-condition rows over the x block of the decision vector:
//   sum_k x_uk Tr[rho E_k] = 0,  sum_k x_uk Tr[E_k d_v rho] = delta_uv.
inline LmiProblem::Equalities unbiased_equalities(const StatModel& m, const OperatorBasis& basis,
                                                  int total_vars) {
    const int d = static_cast<int>(m.num_params());
    const int nb = static_cast<int>(basis.size());
    std::vector<double> t(nb), s;
    for (int k = 0; k < nb; ++k) t[k] = (m.rho.mat() * basis.elements[k].mat()).trace().real();

    const int rows = d + d * d;
    LmiProblem::Equalities eq;
    eq.e = RealMatrix(rows, total_vars);
    eq.d.assign(rows, 0.0);
    int r = 0;
    for (int u = 0; u < d; ++u, ++r)
        for (int k = 0; k < nb; ++k) eq.e(r, u * nb + k) = t[k];
    for (int u = 0; u < d; ++u)
        for (int v = 0; v < d; ++v, ++r) {
            for (int k = 0; k < nb; ++k)
                eq.e(r, u * nb + k) = (basis.elements[k].mat() * m.deriv(v).mat()).trace().real();
            eq.d[r] = (u == v) ? 1.0 : 0.0;
        }

    RealMatrix xpart(rows, d * nb);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < d * nb; ++j) xpart(i, j) = eq.e(i, j);
    if (matrix_rank(xpart) < rows)
        throw RankDeficient("unbiasedness constraints are rank deficient at this point");
    return eq;
}

inline void check_full_rank(const StatModel& m) {
    const EigenDecomposition d = eigh(m.rho);
    if (d.eigenvalues.front() <= kRankTol) throw RankDeficient("state is rank deficient");
}

}  // namespace detail

/// Gram matrix and factor for the Holevo program.
struct HolevoProblem {
    const StatModel& model;
    OperatorBasis basis;
    HermitianMatrix gram;
    ComplexMatrix gram_factor;
};

inline HolevoProblem make_holevo_problem(const StatModel& m) {
    OperatorBasis basis = OperatorBasis::qubit();
    const int nb = static_cast<int>(basis.size());
    ComplexMatrix g(nb);
    for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l)
            g(k, l) = (m.rho.mat() * basis.elements[k].mat() * basis.elements[l].mat()).trace();
    HermitianMatrix gram(g, 1e-9 * (1.0 + g.frobenius_norm()));
    ComplexMatrix factor = psd_factor(gram, 1e-10);
    return {m, std::move(basis), std::move(gram), std::move(factor)};
}

struct HcrbResult {
    double value;
    std::vector<HermitianMatrix> x_opt;
    SdpSolution raw;
};

/// Holevo bound: minimize tr V over real symmetric V and unbiased Hermitian
/// X_u = sum_k x_uk E_k, subject to the Schur-complement LMI
///   [[V, x S^dag], [S x^T, I]] >= 0   (i.e. V >= x G x^T = Z[X]),
/// real-embedded. At the optimum tr V = tr Re Z + ||Im Z||_1.
inline HcrbResult hcrb(const StatModel& m, const SdpOptions& opts = {}) {
    detail::check_full_rank(m);
    const HolevoProblem hp = make_holevo_problem(m);
    const int d = static_cast<int>(m.num_params());
    const int nb = static_cast<int>(hp.basis.size());
    const int r = hp.gram_factor.rows();

    const int nx = d * nb;
    const int nv = d * (d + 1) / 2;
    const int nvars = nx + nv;
    const int block = d + r;  // complex block size before embedding

    LmiProblem p;
    p.block_dims = {2 * block};
    p.objective.assign(nvars, 0.0);
    {
        int idx = nx;
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b, ++idx)
                if (a == b) p.objective[idx] = 1.0;
    }

    auto embed_block = [&](const ComplexMatrix& h) {
        BlockMatrix bm;
        bm.blocks.push_back(real_embed(HermitianMatrix(h, 1e-9 * (1.0 + h.frobenius_norm()))));
        return bm;
    };

    ComplexMatrix f0(block);
    for (int j = 0; j < r; ++j) f0(d + j, d + j) = 1.0;
    p.f0 = embed_block(f0);

    p.fi.reserve(nvars);
    for (int u = 0; u < d; ++u)
        for (int k = 0; k < nb; ++k) {
            ComplexMatrix f(block);
            for (int j = 0; j < r; ++j) {
                f(u, d + j) = std::conj(hp.gram_factor(j, k));
                f(d + j, u) = hp.gram_factor(j, k);
            }
            p.fi.push_back(embed_block(f));
        }
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            ComplexMatrix f(block);
            f(a, b) = 1.0;
            f(b, a) = 1.0;
            p.fi.push_back(embed_block(f));
        }

    p.equalities = detail::unbiased_equalities(m, hp.basis, nvars);

    const SdpSolution sol = solve(p, opts);
    if (sol.status != SdpStatus::Optimal)
        throw SolverFailure("HCRB SDP did not reach optimality (status " +
                            std::to_string(static_cast<int>(sol.status)) + ", " +
                            std::to_string(sol.iterations) + " iterations)");

    HcrbResult res{sol.objective_value, {}, sol};
    for (int u = 0; u < d; ++u) {
        ComplexMatrix xu(m.rho.dim());
        for (int k = 0; k < nb; ++k) xu = xu + sol.y[u * nb + k] * hp.basis.elements[k].mat();
        res.x_opt.emplace_back(xu);
    }
    return res;
}

/// Nagaoka-Hayashi bound (the Nagaoka bound when d = 2): minimize
/// sum_u Tr[rho L_uu] over Hermitian L_uv = L_vu and unbiased X, subject to
/// [[L, X], [X^T, I]] >= 0 in the extended classical-quantum space.
inline double nagaoka_hayashi(const StatModel& m, const SdpOptions& opts = {}) {
    detail::check_full_rank(m);
    const int d = static_cast<int>(m.num_params());
    if (d < 2) throw InvalidInput("Nagaoka-Hayashi bound requires at least two parameters");
    OperatorBasis basis = OperatorBasis::qubit();
    const int nb = static_cast<int>(basis.size());
    const int n = m.rho.dim();

    const int nx = d * nb;
    const int nl = (d * (d + 1) / 2) * nb;
    const int nvars = nx + nl;
    const int block = (d + 1) * n;

    std::vector<double> t(nb);
    for (int k = 0; k < nb; ++k) t[k] = (m.rho.mat() * basis.elements[k].mat()).trace().real();

    LmiProblem p;
    p.block_dims = {2 * block};
    p.objective.assign(nvars, 0.0);

    auto lvar = [&](int a, int b, int k) {
        // index of coefficient k of L_{ab} with a <= b
        int off = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                if (i == a && j == b) return nx + off * nb + k;
                ++off;
            }
        throw InvalidInput("bad L index");
    };
    for (int u = 0; u < d; ++u)
        for (int k = 0; k < nb; ++k) p.objective[lvar(u, u, k)] = t[k];

    auto embed_block = [&](const ComplexMatrix& h) {
        BlockMatrix bm;
        bm.blocks.push_back(real_embed(HermitianMatrix(h, 1e-9 * (1.0 + h.frobenius_norm()))));
        return bm;
    };
    auto put = [&](ComplexMatrix& big, int bi, int bj, const ComplexMatrix& e) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) big(bi * n + i, bj * n + j) = e(i, j);
    };

    ComplexMatrix f0(block);
    for (int i = 0; i < n; ++i) f0(d * n + i, d * n + i) = 1.0;
    p.f0 = embed_block(f0);

    p.fi.resize(nvars);
    for (int u = 0; u < d; ++u)
        for (int k = 0; k < nb; ++k) {
            ComplexMatrix f(block);
            put(f, u, d, basis.elements[k].mat());
            put(f, d, u, basis.elements[k].mat());
            p.fi[u * nb + k] = embed_block(f);
        }
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
            for (int k = 0; k < nb; ++k) {
                ComplexMatrix f(block);
                put(f, a, b, basis.elements[k].mat());
                if (a != b) put(f, b, a, basis.elements[k].mat());
                p.fi[lvar(a, b, k)] = embed_block(f);
            }

    p.equalities = detail::unbiased_equalities(m, basis, nvars);

    const SdpSolution sol = solve(p, opts);
    if (sol.status != SdpStatus::Optimal)
        throw SolverFailure("Nagaoka-Hayashi SDP did not reach optimality (status " +
                            std::to_string(static_cast<int>(sol.status)) + ", " +
                            std::to_string(sol.iterations) + " iterations)");
    return sol.objective_value;
}

/// All scalar bounds at one parameter point. Fields stay empty when the
/// information matrices are singular there; numbers are never fabricated.
struct BoundReport {
    std::optional<double> c_sld, c_rld, c_upper, c_hcrb, c_nagaoka;
    std::optional<double> analytic_hcrb, analytic_nb;  // d = 2, free vacuum only
    bool hierarchy_ok = false;
    double hierarchy_tol = 1e-6;
};

inline bool hierarchy_consistent(const BoundReport& r, double tol = 1e-6) {
    if (!r.c_sld || !r.c_rld || !r.c_upper || !r.c_hcrb || !r.c_nagaoka) return false;
    const double scale = std::max({*r.c_sld, *r.c_rld, *r.c_hcrb, 1.0});
    const double slack = tol * scale;
    return *r.c_nagaoka >= *r.c_hcrb - slack &&
           *r.c_hcrb >= std::max(*r.c_sld, *r.c_rld) - slack &&
           *r.c_sld <= *r.c_hcrb + slack && *r.c_hcrb <= *r.c_upper + slack &&
           *r.c_upper <= 2.0 * *r.c_sld + slack;
}

inline BoundReport bound_report(const StatModel& m, const SdpOptions& opts = {},
                                const std::optional<DetectorParams>& point = std::nullopt) {
    BoundReport r;
    try {
        const FisherBundle fb = fisher_bundle(m);
        const ScalarCrbs crbs = scalar_crbs(fb);
        r.c_sld = crbs.c_sld;
        r.c_rld = crbs.c_rld;
        r.c_upper = crbs.c_upper;
        r.c_hcrb = hcrb(m, opts).value;
        if (m.num_params() >= 2) {
            r.c_nagaoka = nagaoka_hayashi(m, opts);
        } else {
            r.c_nagaoka = r.c_hcrb;  // single-parameter collapse
        }
        if (point && m.num_params() == 2 && point->scenario == Scenario::Unbounded &&
            m.derivs[0].first == Param::Theta && m.derivs[1].first == Param::Phi) {
            const AnalyticTwoParam a = analytic_two_param(*point);
            r.analytic_hcrb = a.c_hcrb;
            r.analytic_nb = a.c_nb;
        }
        r.hierarchy_ok = hierarchy_consistent(r, r.hierarchy_tol);
    } catch (const SingularInformation&) {
        // leave absent fields absent
    } catch (const RankDeficient&) {
    }
    return r;
}

}  // namespace qbounds
