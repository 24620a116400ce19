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
// Self-contained dense primal-dual interior-point solver for small
// linear-matrix-inequality problems:
//
//     minimize  c^T y   subject to   F(y) = F0 + sum_i y_i F_i >= 0,
//                                    E y = d  (optional)
//
// Infeasible-start path following with the HKM direction and a Mehrotra
// predictor-corrector step. Equalities are removed up front by nullspace
// elimination. Deterministic and randomness-free; problem sizes here are
// at most a few dozen variables with blocks up to 16x16.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "qbounds/errors.hpp"
#include "qbounds/linalg.hpp"

namespace qbounds {

/// Dense rectangular real matrix, row-major.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {}

    static RealMatrix identity(int n) {
        RealMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    RealMatrix transpose() const {
        RealMatrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    RealMatrix operator*(const RealMatrix& o) const {
        RealMatrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const double a = (*this)(i, k);
                if (a == 0.0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    RealMatrix operator+(const RealMatrix& o) const {
        RealMatrix r = *this;
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
        return r;
    }
    RealMatrix operator-(const RealMatrix& o) const {
        RealMatrix r = *this;
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
        return r;
    }
    RealMatrix scaled(double s) const {
        RealMatrix r = *this;
        for (double& v : r.data_) v *= s;
        return r;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    void symmetrize() {
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j) {
                const double m = 0.5 * ((*this)(i, j) + (*this)(j, i));
                (*this)(i, j) = m;
                (*this)(j, i) = m;
            }
    }

    bool finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

namespace detail {

// Symmetric eigendecomposition of a real matrix, through the complex Jacobi
// path. Returns ascending eigenvalues and a column-orthogonal V.
inline void eigh_real(const RealMatrix& a, std::vector<double>& evals, RealMatrix& evecs) {
    const int n = a.rows();
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = 0.5 * (a(i, j) + a(j, i));
    const EigenDecomposition d = eigh(HermitianMatrix(c, 1e-6 * (1.0 + c.frobenius_norm())));
    evals = d.eigenvalues;
    evecs = RealMatrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) evecs(i, j) = d.eigenvectors(i, j).real();
}

// Cholesky factorization A = L L^T; returns false when A is not positive
// definite.
inline bool cholesky(const RealMatrix& a, RealMatrix& l) {
    const int n = a.rows();
    l = RealMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) return false;
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return true;
}

// Solve A x = b by Gaussian elimination with partial pivoting. A is
// overwritten. Returns false on a (numerically) singular pivot.
inline bool lu_solve(RealMatrix a, std::vector<double> b, std::vector<double>& x) {
    const int n = a.rows();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) < 1e-300) return false;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return true;
}

// Lower-triangular solves against a matrix right-hand side.
inline RealMatrix forward_solve(const RealMatrix& l, const RealMatrix& b) {
    const int n = l.rows(), m = b.cols();
    RealMatrix x(n, m);
    for (int col = 0; col < m; ++col)
        for (int i = 0; i < n; ++i) {
            double s = b(i, col);
            for (int k = 0; k < i; ++k) s -= l(i, k) * x(k, col);
            x(i, col) = s / l(i, i);
        }
    return x;
}

inline RealMatrix backward_solve_t(const RealMatrix& l, const RealMatrix& b) {
    // solves L^T x = b
    const int n = l.rows(), m = b.cols();
    RealMatrix x(n, m);
    for (int col = 0; col < m; ++col)
        for (int i = n - 1; i >= 0; --i) {
            double s = b(i, col);
            for (int k = i + 1; k < n; ++k) s -= l(k, i) * x(k, col);
            x(i, col) = s / l(i, i);
        }
    return x;
}

}  // namespace detail

/// Block-diagonal real symmetric matrix: one dense block per declared size.
struct BlockMatrix {
    std::vector<RealMatrix> blocks;

    static BlockMatrix zeros(const std::vector<int>& dims) {
        BlockMatrix m;
        for (int d : dims) m.blocks.emplace_back(d, d);
        return m;
    }
    static BlockMatrix identity_like(const std::vector<int>& dims, double s = 1.0) {
        BlockMatrix m;
        for (int d : dims) m.blocks.push_back(RealMatrix::identity(d).scaled(s));
        return m;
    }

    BlockMatrix operator+(const BlockMatrix& o) const {
        BlockMatrix r = *this;
        for (size_t b = 0; b < blocks.size(); ++b) r.blocks[b] = r.blocks[b] + o.blocks[b];
        return r;
    }
    BlockMatrix operator-(const BlockMatrix& o) const {
        BlockMatrix r = *this;
        for (size_t b = 0; b < blocks.size(); ++b) r.blocks[b] = r.blocks[b] - o.blocks[b];
        return r;
    }
    BlockMatrix scaled(double s) const {
        BlockMatrix r = *this;
        for (auto& blk : r.blocks) blk = blk.scaled(s);
        return r;
    }
    void axpy(double alpha, const BlockMatrix& o) {
        for (size_t b = 0; b < blocks.size(); ++b) blocks[b] = blocks[b] + o.blocks[b].scaled(alpha);
    }
    void symmetrize() {
        for (auto& blk : blocks) blk.symmetrize();
    }
    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& blk : blocks) {
            const double f = blk.frobenius_norm();
            s += f * f;
        }
        return std::sqrt(s);
    }
    int total_dim() const {
        int n = 0;
        for (const auto& blk : blocks) n += blk.rows();
        return n;
    }
};

inline double block_inner(const BlockMatrix& a, const BlockMatrix& b) {
    double s = 0.0;
    for (size_t k = 0; k < a.blocks.size(); ++k) {
        const RealMatrix& x = a.blocks[k];
        const RealMatrix& y = b.blocks[k];
        for (int i = 0; i < x.rows(); ++i)
            for (int j = 0; j < x.cols(); ++j) s += x(i, j) * y(i, j);
    }
    return s;
}

/// LMI problem: minimize c^T y subject to F0 + sum_i y_i F_i >= 0 and,
/// optionally, E y = d.
struct LmiProblem {
    std::vector<int> block_dims;
    std::vector<double> objective;  // c
    BlockMatrix f0;
    std::vector<BlockMatrix> fi;  // one per variable

    struct Equalities {
        RealMatrix e;
        std::vector<double> d;
    };
    std::optional<Equalities> equalities;

    int nvars() const { return static_cast<int>(objective.size()); }
};

enum class SdpStatus { Optimal, MaxIterations, Infeasible, NumericalFailure };

struct SdpSolution {
    std::vector<double> y;
    double objective_value = 0.0;
    double duality_gap = 0.0;
    int iterations = 0;
    SdpStatus status = SdpStatus::NumericalFailure;
};

struct SdpOptions {
    double gap_tol = 1e-9;
    int max_iter = 200;
    double step_frac = 0.98;
    bool trace = false;  // one line per iteration to stderr
};

/// Result of nullspace elimination: the reduced problem plus the affine map
/// y = y0 + N w back to the original variables.
struct EliminatedProblem {
    LmiProblem reduced;
    std::vector<double> y0;
    RealMatrix nullbasis;  // nvars x nfree

    std::vector<double> recover(const std::vector<double>& w) const {
        std::vector<double> y = y0;
        for (int i = 0; i < nullbasis.rows(); ++i)
            for (int j = 0; j < nullbasis.cols(); ++j) y[i] += nullbasis(i, j) * w[j];
        return y;
    }
};

inline EliminatedProblem eliminate_equalities(const LmiProblem& p) {
    const int n = p.nvars();
    if (!p.equalities) {
        EliminatedProblem out{p, std::vector<double>(n, 0.0), RealMatrix::identity(n)};
        out.reduced.equalities.reset();
        return out;
    }
    const RealMatrix& e_in = p.equalities->e;
    const std::vector<double>& d_in = p.equalities->d;

    // Row echelon with partial pivoting to find independent rows and check
    // consistency of the dependent ones.
    RealMatrix work = e_in;
    std::vector<double> rhs = d_in;
    const int m = work.rows();
    const double scale = std::max(1.0, work.frobenius_norm());
    int rank = 0;
    std::vector<int> row_of(m);
    for (int i = 0; i < m; ++i) row_of[i] = i;
    for (int col = 0; col < n && rank < m; ++col) {
        int piv = -1;
        double best = 1e-12 * scale;
        for (int r = rank; r < m; ++r)
            if (std::abs(work(r, col)) > best) {
                best = std::abs(work(r, col));
                piv = r;
            }
        if (piv < 0) continue;
        if (piv != rank) {
            for (int j = 0; j < n; ++j) std::swap(work(rank, j), work(piv, j));
            std::swap(rhs[rank], rhs[piv]);
            std::swap(row_of[rank], row_of[piv]);
        }
        for (int r = rank + 1; r < m; ++r) {
            const double f = work(r, col) / work(rank, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) work(r, j) -= f * work(rank, j);
            rhs[r] -= f * rhs[rank];
        }
        ++rank;
    }
    for (int r = rank; r < m; ++r)
        if (std::abs(rhs[r]) > 1e-10 * (1.0 + norm2(d_in)))
            throw InconsistentEqualities("equality constraints are inconsistent");

    // Keep the independent rows of the original system.
    RealMatrix e(rank, n);
    std::vector<double> d(rank);
    for (int r = 0; r < rank; ++r) {
        for (int j = 0; j < n; ++j) e(r, j) = e_in(row_of[r], j);
        d[r] = d_in[row_of[r]];
    }

    // Particular solution y0 = E^T (E E^T)^{-1} d.
    const RealMatrix et = e.transpose();
    const RealMatrix eet = e * et;
    std::vector<double> lam;
    if (!detail::lu_solve(eet, d, lam)) throw InconsistentEqualities("rank detection failed");
    std::vector<double> y0(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < rank; ++r) y0[i] += et(i, r) * lam[r];
    {
        double resid = 0.0;
        for (int r = 0; r < rank; ++r) {
            double s = -d[r];
            for (int j = 0; j < n; ++j) s += e(r, j) * y0[j];
            resid += s * s;
        }
        if (std::sqrt(resid) > 1e-10 * (1.0 + norm2(d)))
            throw InconsistentEqualities("least-squares residual too large");
    }

    // Nullspace basis: eigenvectors of E^T E with (near-)zero eigenvalue.
    const RealMatrix ete = et * e;
    std::vector<double> evals;
    RealMatrix evecs;
    detail::eigh_real(ete, evals, evecs);
    const int nfree = n - rank;
    RealMatrix nb(n, nfree);
    for (int j = 0; j < nfree; ++j)
        for (int i = 0; i < n; ++i) nb(i, j) = evecs(i, j);  // ascending: null directions first

    EliminatedProblem out;
    out.y0 = y0;
    out.nullbasis = nb;
    out.reduced.block_dims = p.block_dims;
    out.reduced.objective.assign(nfree, 0.0);
    for (int j = 0; j < nfree; ++j)
        for (int i = 0; i < n; ++i) out.reduced.objective[j] += p.objective[i] * nb(i, j);
    out.reduced.f0 = p.f0;
    for (int i = 0; i < n; ++i)
        if (y0[i] != 0.0) out.reduced.f0.axpy(y0[i], p.fi[i]);
    out.reduced.fi.reserve(nfree);
    for (int j = 0; j < nfree; ++j) {
        BlockMatrix fj = BlockMatrix::zeros(p.block_dims);
        for (int i = 0; i < n; ++i)
            if (nb(i, j) != 0.0) fj.axpy(nb(i, j), p.fi[i]);
        out.reduced.fi.push_back(fj);
    }
    return out;
}

/// Real embedding of a Hermitian block: H >= 0 iff
/// [[Re H, -Im H], [Im H, Re H]] >= 0. Traces read through the embedded
/// block are doubled; assembly code dividing by two owns that factor.
inline RealMatrix real_embed(const HermitianMatrix& h) {
    const int n = h.dim();
    RealMatrix r(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Cx v = h(i, j);
            r(i, j) = v.real();
            r(i + n, j + n) = v.real();
            r(i, j + n) = -v.imag();
            r(i + n, j) = v.imag();
        }
    return r;
}

namespace detail {

// Step length: largest alpha <= cap with M + alpha dM staying PSD, where
// M = L L^T. Computed from the minimum eigenvalue of L^{-1} dM L^{-T}.
inline double max_step(const RealMatrix& l, const RealMatrix& dm, double cap) {
    // w = L^{-1} dM L^{-T}
    const RealMatrix w = forward_solve(l, forward_solve(l, dm).transpose()).transpose();
    std::vector<double> evals;
    RealMatrix evecs;
    eigh_real(w, evals, evecs);
    const double lam_min = evals.front();
    if (lam_min >= -1e-300) return cap;
    return std::min(cap, -1.0 / lam_min);
}

inline double block_max_step(const std::vector<RealMatrix>& chols, const BlockMatrix& dm, double cap) {
    double a = cap;
    for (size_t b = 0; b < chols.size(); ++b) a = std::min(a, max_step(chols[b], dm.blocks[b], cap));
    return a;
}

}  // namespace detail

/// Interior-point solve of an LMI problem. Internally works on the
/// standard-form pair with C = F0, A_i = -F_i, b = -c; the dual slack is
/// then exactly F(y).
inline SdpSolution solve(const LmiProblem& problem, const SdpOptions& opts = {}) {
    const EliminatedProblem elim = eliminate_equalities(problem);
    const LmiProblem& p = elim.reduced;
    const int m = p.nvars();
    const std::vector<int>& dims = p.block_dims;
    const int n = p.f0.total_dim();

    SdpSolution sol;
    if (m == 0) {
        // Fully determined by the equalities; just report feasibility.
        sol.y = elim.recover({});
        sol.objective_value = dot(problem.objective, sol.y);
        sol.duality_gap = 0.0;
        sol.status = SdpStatus::Optimal;
        return sol;
    }

    std::vector<double> b(m);
    for (int i = 0; i < m; ++i) b[i] = -p.objective[i];
    const BlockMatrix& c_mat = p.f0;
    auto a_mat = [&](int i) { return p.fi[i].scaled(-1.0); };  // A_i = -F_i

    const double tau0 = 1.0 + p.f0.frobenius_norm();
    BlockMatrix x = BlockMatrix::identity_like(dims, tau0);
    BlockMatrix s = BlockMatrix::identity_like(dims, tau0);
    std::vector<double> y(m, 0.0);

    const double bnorm = 1.0 + norm2(b);
    const double cnorm = 1.0 + c_mat.frobenius_norm();

    auto apply_a = [&](const BlockMatrix& mtx) {
        std::vector<double> r(m);
        for (int i = 0; i < m; ++i) r[i] = -block_inner(p.fi[i], mtx);
        return r;
    };

    int it = 0;
    for (; it < opts.max_iter; ++it) {
        // Residuals
        std::vector<double> rp(m);
        {
            const std::vector<double> ax = apply_a(x);
            for (int i = 0; i < m; ++i) rp[i] = b[i] - ax[i];
        }
        BlockMatrix rd = c_mat - s;
        for (int i = 0; i < m; ++i)
            if (y[i] != 0.0) rd.axpy(y[i], p.fi[i]);  // minus A_i y_i == plus F_i y_i

        const double mu = block_inner(x, s) / n;
        const double pobj = block_inner(c_mat, x);
        const double dobj = dot(b, y);
        // Complementarity <X,S> as the gap measure: it equals the duality gap
        // at feasibility and stays monotone where |pobj - dobj| hits its
        // round-off floor on ill-conditioned instances.
        const double gap = block_inner(x, s) / (1.0 + std::abs(pobj) + std::abs(dobj));
        const double prim_res = norm2(rp) / (bnorm + x.frobenius_norm());
        const double dual_res = rd.frobenius_norm() / (cnorm + s.frobenius_norm());

        if (opts.trace)
            std::fprintf(stderr, "sdp iter %3d  primal %.9e  dual %.9e  gap %.3e  rp %.3e  rd %.3e\n",
                         it, pobj, dobj, gap, prim_res, dual_res);

        if (gap <= opts.gap_tol && prim_res <= 1e-8 && dual_res <= 1e-8) {
            sol.status = SdpStatus::Optimal;
            break;
        }
        if (!x.blocks[0].finite() || norm2(y) > 1e14 || x.frobenius_norm() > 1e14) {
            sol.status = SdpStatus::Infeasible;
            break;
        }

        // Factor X and S.
        std::vector<RealMatrix> lx(dims.size()), ls(dims.size());
        bool ok = true;
        for (size_t bidx = 0; bidx < dims.size(); ++bidx) {
            ok = ok && detail::cholesky(x.blocks[bidx], lx[bidx]);
            ok = ok && detail::cholesky(s.blocks[bidx], ls[bidx]);
        }
        if (!ok) {
            sol.status = SdpStatus::NumericalFailure;
            break;
        }

        // S^{-1} per block.
        BlockMatrix s_inv = BlockMatrix::zeros(dims);
        for (size_t bidx = 0; bidx < dims.size(); ++bidx) {
            const int d = dims[bidx];
            s_inv.blocks[bidx] =
                detail::backward_solve_t(ls[bidx], detail::forward_solve(ls[bidx], RealMatrix::identity(d)));
        }

        // Schur complement M_ij = tr(A_i X A_j S^{-1}).
        std::vector<BlockMatrix> xas(m, BlockMatrix::zeros(dims));  // X A_j S^{-1}
        for (int j = 0; j < m; ++j)
            for (size_t bidx = 0; bidx < dims.size(); ++bidx)
                xas[j].blocks[bidx] =
                    x.blocks[bidx] * p.fi[j].blocks[bidx].scaled(-1.0) * s_inv.blocks[bidx];
        RealMatrix schur(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) schur(i, j) = -block_inner(p.fi[i], xas[j]);

        auto direction = [&](double sigma_mu, const BlockMatrix* corr, std::vector<double>& dy,
                             BlockMatrix& dx, BlockMatrix& ds) -> bool {
            // K = sigma_mu S^{-1} - X - X Rd S^{-1} (- corr S^{-1})
            BlockMatrix k = s_inv.scaled(sigma_mu) - x;
            for (size_t bidx = 0; bidx < dims.size(); ++bidx) {
                RealMatrix extra = x.blocks[bidx] * rd.blocks[bidx];
                if (corr) extra = extra + corr->blocks[bidx];
                k.blocks[bidx] = k.blocks[bidx] - extra * s_inv.blocks[bidx];
            }
            std::vector<double> rhs(m);
            const std::vector<double> ak = apply_a(k);
            for (int i = 0; i < m; ++i) rhs[i] = rp[i] - ak[i];
            if (!detail::lu_solve(schur, rhs, dy)) return false;
            // One round of iterative refinement: the Schur matrix becomes
            // severely ill-conditioned near the central-path limit.
            {
                std::vector<double> res(m), corr_y;
                for (int i = 0; i < m; ++i) {
                    double mi = 0.0;
                    for (int j = 0; j < m; ++j) mi += schur(i, j) * dy[j];
                    res[i] = rhs[i] - mi;
                }
                if (detail::lu_solve(schur, res, corr_y))
                    for (int i = 0; i < m; ++i) dy[i] += corr_y[i];
            }

            ds = rd;
            for (int i = 0; i < m; ++i)
                if (dy[i] != 0.0) ds.axpy(dy[i], p.fi[i]);  // dS = Rd - sum dy_i A_i
            dx = k;
            for (size_t bidx = 0; bidx < dims.size(); ++bidx) {
                BlockMatrix asum = BlockMatrix::zeros(dims);
                for (int i = 0; i < m; ++i)
                    if (dy[i] != 0.0) asum.blocks[bidx] =
                        asum.blocks[bidx] + p.fi[i].blocks[bidx].scaled(-dy[i]);
                dx.blocks[bidx] = dx.blocks[bidx] + x.blocks[bidx] * asum.blocks[bidx] * s_inv.blocks[bidx];
            }
            dx.symmetrize();
            return true;
        };

        // Predictor (affine, sigma = 0).
        std::vector<double> dy_a;
        BlockMatrix dx_a = BlockMatrix::zeros(dims), ds_a = BlockMatrix::zeros(dims);
        if (!direction(0.0, nullptr, dy_a, dx_a, ds_a)) {
            sol.status = SdpStatus::NumericalFailure;
            break;
        }
        const double ap_a = detail::block_max_step(lx, dx_a, 1.0);
        const double ad_a = detail::block_max_step(ls, ds_a, 1.0);
        BlockMatrix x_aff = x;
        x_aff.axpy(ap_a, dx_a);
        BlockMatrix s_aff = s;
        s_aff.axpy(ad_a, ds_a);
        const double mu_aff = block_inner(x_aff, s_aff) / n;
        double sigma = std::pow(mu_aff / mu, 3.0);
        sigma = std::min(std::max(sigma, 1e-8), 1.0);

        // Corrector with the Mehrotra second-order term dX_a dS_a.
        BlockMatrix corr = BlockMatrix::zeros(dims);
        for (size_t bidx = 0; bidx < dims.size(); ++bidx)
            corr.blocks[bidx] = dx_a.blocks[bidx] * ds_a.blocks[bidx];
        std::vector<double> dy;
        BlockMatrix dx = BlockMatrix::zeros(dims), ds = BlockMatrix::zeros(dims);
        if (!direction(sigma * mu, &corr, dy, dx, ds)) {
            sol.status = SdpStatus::NumericalFailure;
            break;
        }

        const double ap = std::min(detail::block_max_step(lx, dx, 1.0 / opts.step_frac) * opts.step_frac, 1.0);
        const double ad = std::min(detail::block_max_step(ls, ds, 1.0 / opts.step_frac) * opts.step_frac, 1.0);

        // Guarded update: near the round-off floor the boundary estimate can
        // overshoot the cone; halve the step until both factors stay PD.
        bool stepped = false;
        double shrink = 1.0;
        for (int attempt = 0; attempt < 12 && !stepped; ++attempt, shrink *= 0.5) {
            BlockMatrix xn = x, sn = s;
            xn.axpy(ap * shrink, dx);
            sn.axpy(ad * shrink, ds);
            xn.symmetrize();
            sn.symmetrize();
            bool pd = true;
            RealMatrix lf;
            for (size_t bidx = 0; bidx < dims.size() && pd; ++bidx)
                pd = detail::cholesky(xn.blocks[bidx], lf) && detail::cholesky(sn.blocks[bidx], lf);
            if (!pd) continue;
            x = xn;
            s = sn;
            for (int i = 0; i < m; ++i) y[i] += ad * shrink * dy[i];
            stepped = true;
        }
        if (!stepped) {
            sol.status = SdpStatus::NumericalFailure;
            break;
        }
    }

    if (it >= opts.max_iter && sol.status != SdpStatus::Optimal) sol.status = SdpStatus::MaxIterations;

    sol.iterations = it;
    std::vector<double> w = y;
    sol.y = elim.recover(w);
    sol.objective_value = dot(problem.objective, sol.y);
    sol.duality_gap = block_inner(x, s) / (1.0 + std::abs(sol.objective_value));
    return sol;
}

}  // namespace qbounds
