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
// Small dense complex/real matrix algebra: Hermitian eigendecomposition
// (cyclic Jacobi), trace norm, Kronecker products, PSD factorization.
// Dimensions throughout the library stay <= 16, so everything here favors
// determinism and accuracy over throughput.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "qbounds/errors.hpp"

namespace qbounds {

using Cx = std::complex<double>;

/// Dense row-major complex matrix. Square unless noted (psd_factor returns
/// a rectangular factor).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
        if (rows < 1 || cols < 1) throw InvalidInput("matrix dimensions must be positive");
    }
    explicit ComplexMatrix(int dim) : ComplexMatrix(dim, dim) {}

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int dim() const {
        if (rows_ != cols_) throw InvalidInput("matrix is not square");
        return rows_;
    }
    bool square() const { return rows_ == cols_; }

    Cx& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Cx& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    bool finite() const {
        for (const Cx& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Cx trace() const {
        Cx t = 0.0;
        for (int i = 0; i < dim(); ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Cx& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    ComplexMatrix operator+(const ComplexMatrix& o) const {
        check_same_shape(o);
        ComplexMatrix r = *this;
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
        return r;
    }
    ComplexMatrix operator-(const ComplexMatrix& o) const {
        check_same_shape(o);
        ComplexMatrix r = *this;
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
        return r;
    }
    ComplexMatrix operator*(const ComplexMatrix& o) const {
        if (cols_ != o.rows_) throw InvalidInput("matrix product shape mismatch");
        ComplexMatrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Cx a = (*this)(i, k);
                if (a == Cx(0.0)) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    ComplexMatrix operator*(Cx s) const {
        ComplexMatrix r = *this;
        for (Cx& v : r.data_) v *= s;
        return r;
    }
    friend ComplexMatrix operator*(Cx s, const ComplexMatrix& m) { return m * s; }

private:
    void check_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix shape mismatch");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Cx> data_;
};

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }
inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

/// Hermitian matrix: validated on construction (deviation <= tol) and then
/// symmetrized, so downstream math sees exact Hermiticity.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const ComplexMatrix& m, double tol = 1e-12) {
        if (!m.finite()) throw InvalidInput("non-finite matrix entries");
        const int n = m.dim();
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                if (std::abs(m(i, j) - std::conj(m(j, i))) > tol)
                    throw InvalidInput("matrix is not Hermitian within tolerance");
            }
        mat_ = ComplexMatrix(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) mat_(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    }

    const ComplexMatrix& mat() const { return mat_; }
    int dim() const { return mat_.dim(); }
    const Cx& operator()(int i, int j) const { return mat_(i, j); }

private:
    ComplexMatrix mat_;
};

/// Real symmetric matrix, stored densely; off-diagonal pairs are kept equal
/// exactly (written through both slots).
class RealSymmetricMatrix {
public:
    explicit RealSymmetricMatrix(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim, 0.0) {
        if (dim < 1) throw InvalidInput("dimension must be positive");
    }

    int dim() const { return dim_; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * dim_ + j]; }
    void set(int i, int j, double v) {
        data_[static_cast<size_t>(i) * dim_ + j] = v;
        data_[static_cast<size_t>(j) * dim_ + i] = v;
    }

    ComplexMatrix as_complex() const {
        ComplexMatrix m(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

private:
    int dim_;
    std::vector<double> data_;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // unitary, columns
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
/// Deterministic sweep order; eigenvalues returned ascending.
inline EigenDecomposition eigh(const HermitianMatrix& m) {
    const int n = m.dim();
    ComplexMatrix a = m.mat();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(a.frobenius_norm(), 1.0);
    const double tol = 1e-15 * scale;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(2.0 * off) <= tol) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Cx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) continue;
                const Cx phase = apq / r;  // a_pq = r * phase
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const Cx s = t * c * phase;

                // A <- G^dag A G with G_pp = c, G_pq = s, G_qp = -conj(s), G_qq = c
                for (int k = 0; k < n; ++k) {
                    const Cx akp = a(k, p);
                    const Cx akq = a(k, q);
                    a(k, p) = c * akp - std::conj(s) * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const Cx apk = a(p, k);
                    const Cx aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = std::conj(s) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Cx(a(p, p).real(), 0.0);
                a(q, q) = Cx(a(q, q).real(), 0.0);
                for (int k = 0; k < n; ++k) {
                    const Cx vkp = v(k, p);
                    const Cx vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(s) * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition d;
    d.eigenvalues.resize(n);
    d.eigenvectors = ComplexMatrix(n);
    for (int j = 0; j < n; ++j) {
        d.eigenvalues[j] = a(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) d.eigenvectors(i, j) = v(i, order[j]);
    }
    return d;
}

/// Trace norm ||A||_1 = tr sqrt(A^dag A): sum of singular values via the
/// Hermitian spectrum of A^dag A.
inline double trace_norm(const ComplexMatrix& m) {
    if (!m.square()) throw InvalidInput("trace_norm requires a square matrix");
    if (!m.finite()) throw InvalidInput("non-finite matrix entries");
    const ComplexMatrix g = m.adjoint() * m;
    const EigenDecomposition d = eigh(HermitianMatrix(g, 1e-9 * (1.0 + g.frobenius_norm())));
    double s = 0.0;
    for (double lam : d.eigenvalues) s += std::sqrt(std::max(lam, 0.0));
    return s;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.finite() || !b.finite()) throw InvalidInput("non-finite matrix entries");
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return r;
}

/// Rank-revealing Gram factorization G = S^dag S. Rows of S corresponding
/// to eigenvalues below rank_tol (relative to the largest eigenvalue) are
/// dropped; an eigenvalue below -rank_tol rejects the input.
inline ComplexMatrix psd_factor(const HermitianMatrix& g, double rank_tol = 1e-10) {
    const EigenDecomposition d = eigh(g);
    const int n = g.dim();
    const double lam_max = std::max(d.eigenvalues.back(), 0.0);
    const double cut = rank_tol * std::max(lam_max, 1.0);
    if (d.eigenvalues.front() < -cut) throw NotPositiveSemidefinite("matrix has a negative eigenvalue");

    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (d.eigenvalues[i] > cut) keep.push_back(i);
    if (keep.empty()) throw NotPositiveSemidefinite("matrix is numerically zero");

    ComplexMatrix s(static_cast<int>(keep.size()), n);
    for (size_t r = 0; r < keep.size(); ++r) {
        const double w = std::sqrt(d.eigenvalues[keep[r]]);
        for (int j = 0; j < n; ++j)
            s(static_cast<int>(r), j) = w * std::conj(d.eigenvectors(j, keep[r]));
    }
    return s;
}

}  // namespace qbounds
