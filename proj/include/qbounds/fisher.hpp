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
// Logarithmic-derivative operators, quantum Fisher information matrices,
// Uhlmann curvature, scalar Cramer-Rao-type bounds, the classical Fisher
// matrix of a POVM, and the closed-form two-parameter expressions for the
// free-vacuum detector.
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "qbounds/detector.hpp"
#include "qbounds/errors.hpp"
#include "qbounds/linalg.hpp"

namespace qbounds {

inline constexpr double kRankTol = 1e-12;
inline constexpr double kConditionLimit = 1e12;

/// SLD/RLD operator sets with the information matrices they generate.
/// uhlmann is real antisymmetric, stored as a plain real matrix.
struct FisherBundle {
    std::vector<HermitianMatrix> slds;
    std::vector<ComplexMatrix> rlds;
    RealSymmetricMatrix j_sld;
    HermitianMatrix j_rld;
    std::vector<std::vector<double>> uhlmann;
};

namespace detail {

inline EigenDecomposition full_rank_eig(const HermitianMatrix& rho) {
    EigenDecomposition d = eigh(rho);
    if (d.eigenvalues.front() <= kRankTol)
        throw RankDeficient("state is rank deficient; logarithmic derivatives undefined");
    return d;
}

}  // namespace detail

/// SLD operators from the Lyapunov equation, solved in the eigenbasis of rho:
/// (L_u)_ij = 2 <i|d_u rho|j> / (lambda_i + lambda_j).
inline std::vector<HermitianMatrix> sld_operators(const StatModel& m) {
    const EigenDecomposition d = detail::full_rank_eig(m.rho);
    const int n = m.rho.dim();
    const ComplexMatrix& u = d.eigenvectors;
    const ComplexMatrix udag = u.adjoint();

    std::vector<HermitianMatrix> out;
    out.reserve(m.num_params());
    for (const auto& [label, dr] : m.derivs) {
        const ComplexMatrix b = udag * dr.mat() * u;
        ComplexMatrix l(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) l(i, j) = 2.0 * b(i, j) / (d.eigenvalues[i] + d.eigenvalues[j]);
        out.emplace_back(u * l * udag, 1e-9);
    }
    return out;
}

/// RLD operators L_u = rho^{-1} d_u rho.
inline std::vector<ComplexMatrix> rld_operators(const StatModel& m) {
    const EigenDecomposition d = detail::full_rank_eig(m.rho);
    const int n = m.rho.dim();
    ComplexMatrix inv(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                inv(i, j) += d.eigenvectors(i, k) * std::conj(d.eigenvectors(j, k)) / d.eigenvalues[k];

    std::vector<ComplexMatrix> out;
    out.reserve(m.num_params());
    for (const auto& [label, dr] : m.derivs) out.push_back(inv * dr.mat());
    return out;
}

inline FisherBundle fisher_bundle(const StatModel& m) {
    const int d = static_cast<int>(m.num_params());
    FisherBundle f{sld_operators(m), rld_operators(m), RealSymmetricMatrix(d),
                   HermitianMatrix(ComplexMatrix::identity(d)),
                   std::vector<std::vector<double>>(d, std::vector<double>(d, 0.0))};

    const ComplexMatrix& rho = m.rho.mat();
    ComplexMatrix jr(d);
    for (int u = 0; u < d; ++u)
        for (int v = 0; v < d; ++v) {
            const ComplexMatrix& lu = f.slds[u].mat();
            const ComplexMatrix& lv = f.slds[v].mat();
            f.j_sld.set(u, v, 0.5 * (rho * anticommutator(lu, lv)).trace().real());
            jr(u, v) = (f.rlds[u].adjoint() * rho * f.rlds[v]).trace();
            f.uhlmann[u][v] = (Cx(0.0, -0.5) * (rho * commutator(lu, lv)).trace()).real();
        }
    f.j_rld = HermitianMatrix(jr, 1e-9 * (1.0 + jr.frobenius_norm()));
    return f;
}

namespace detail {

// Inverse of a Hermitian matrix via its spectrum, guarded by a condition
// number limit.
inline ComplexMatrix guarded_inverse(const HermitianMatrix& h) {
    const EigenDecomposition d = eigh(h);
    const int n = h.dim();
    double amax = 0.0, amin = std::numeric_limits<double>::infinity();
    for (double lam : d.eigenvalues) {
        amax = std::max(amax, std::abs(lam));
        amin = std::min(amin, std::abs(lam));
    }
    if (!(amin > 0.0) || amax / amin > kConditionLimit)
        throw SingularInformation("information matrix is numerically singular");
    ComplexMatrix inv(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                inv(i, j) += d.eigenvectors(i, k) * std::conj(d.eigenvectors(j, k)) / d.eigenvalues[k];
    return inv;
}

}  // namespace detail

struct ScalarCrbs {
    double c_sld;
    double c_rld;
    double c_upper;
};

/// Scalar SLD-/RLD-CRBs and the Uhlmann upper bound:
///   C^S = tr (J^S)^{-1}
///   C^R = tr Re (J^R)^{-1} + || Im (J^R)^{-1} ||_1
///   C^U = C^S + || (J^S)^{-1} D (J^S)^{-1} ||_1
inline ScalarCrbs scalar_crbs(const FisherBundle& f) {
    const int d = f.j_sld.dim();
    const ComplexMatrix js_inv = detail::guarded_inverse(HermitianMatrix(f.j_sld.as_complex()));
    const ComplexMatrix jr_inv = detail::guarded_inverse(f.j_rld);

    double c_sld = 0.0;
    for (int i = 0; i < d; ++i) c_sld += js_inv(i, i).real();

    double c_rld = 0.0;
    ComplexMatrix im(d);
    for (int i = 0; i < d; ++i) {
        c_rld += jr_inv(i, i).real();
        for (int j = 0; j < d; ++j) im(i, j) = jr_inv(i, j).imag();
    }
    // Im (J^R)^{-1} is real antisymmetric: its trace norm is the sum of
    // singular values, exact through the spectrum of Im^T Im.
    c_rld += trace_norm(im);

    ComplexMatrix dm(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) dm(i, j) = f.uhlmann[i][j];
    const double c_upper = c_sld + trace_norm(js_inv * dm * js_inv);
    return {c_sld, c_rld, c_upper};
}

/// Classical Fisher matrix of a POVM under the Born rule. Outcomes with
/// probability below 1e-14 are dropped.
inline RealSymmetricMatrix classical_fim(const StatModel& m, const std::vector<HermitianMatrix>& povm) {
    const int n = m.rho.dim();
    ComplexMatrix sum(n);
    for (const HermitianMatrix& e : povm) sum = sum + e.mat();
    if ((sum - ComplexMatrix::identity(n)).frobenius_norm() > 1e-10)
        throw IncompletePovm("POVM elements do not sum to identity");

    const int d = static_cast<int>(m.num_params());
    RealSymmetricMatrix fim(d);
    for (const HermitianMatrix& e : povm) {
        const double pk = (m.rho.mat() * e.mat()).trace().real();
        if (pk < -1e-10) throw IncompletePovm("negative outcome probability");
        if (pk <= 1e-14) continue;
        std::vector<double> dp(d);
        for (int u = 0; u < d; ++u) dp[u] = (m.deriv(u).mat() * e.mat()).trace().real();
        for (int u = 0; u < d; ++u)
            for (int v = u; v < d; ++v) fim.set(u, v, fim(u, v) + dp[u] * dp[v] / pk);
    }
    return fim;
}

/// Closed-form two-parameter (theta, phi) bounds for the free vacuum, plus
/// the analytic Uhlmann off-diagonal element. The printed exponent in the
/// analytic D is dimensionally suspect, so callers should treat d_theta_phi
/// as a reported comparison value, not ground truth.
struct AnalyticTwoParam {
    double c_sld;
    double c_rld;
    double c_hcrb;
    double c_nb;
    double c_z;
    double d_theta_phi;
};

inline AnalyticTwoParam analytic_two_param(const DetectorParams& p) {
    if (p.scenario != Scenario::Unbounded)
        throw BoundedScenarioUnsupported("closed forms exist only for the free vacuum");
    const double a = p.a_inv, tau = p.tau, th = p.theta;
    const double coth = 1.0 / std::tanh(M_PI * a);
    const double tanh_ = std::tanh(M_PI * a);
    const double x = std::exp(tau * coth);
    const double st = std::sin(th), ct = std::cos(th), c2t = std::cos(2.0 * th);
    const double csc2 = 1.0 / (st * st);

    const double lam1 = (3.0 + c2t) * std::cosh(2.0 * M_PI * a);
    const double lam2 = 2.0 * x * ct * ct + st * st + 2.0 * std::sinh(2.0 * M_PI * a) * ct;
    const double lam = lam1 + 2.0 * lam2;
    const double th1 = 4.0 * x + 2.0 * c2t * std::cosh(M_PI * a) * std::cosh(M_PI * a);
    const double th2 = 3.0 * std::cosh(2.0 * M_PI * a) + 4.0 * std::sinh(2.0 * M_PI * a) * ct - 1.0;
    const double big_theta = th1 + th2;
    const double ups1 = coth + (1.0 - x) * ct;
    const double ups2 = tanh_ / st;
    const double ups = ups1 * ups2 * big_theta;
    const double xi = 1.0 + x * csc2;

    AnalyticTwoParam r;
    r.c_sld = (csc2 + big_theta / lam) * x;
    r.c_rld = xi * big_theta / lam + 2.0 * std::abs(ups) / lam;
    const double lam3 = (x - 1.0) * tanh_ * ct - 1.0;
    const double theta3 = big_theta * x * x * csc2 / lam;
    r.c_z = r.c_sld + 2.0 * std::abs(big_theta * lam3) / (std::abs(st) * lam);
    r.c_nb = r.c_sld + 2.0 * std::sqrt(theta3);
    if (r.c_rld >= 0.5 * (r.c_sld + r.c_z)) {
        r.c_hcrb = r.c_rld;
    } else {
        const double gap = 0.5 * (r.c_sld + r.c_z) - r.c_rld;
        r.c_hcrb = r.c_rld + gap * gap / (r.c_z - r.c_rld);
    }
    const double delta1 = std::exp(-2.0 * tau * coth) * st;
    const double delta2 = 1.0 + (1.0 - std::exp(tau * coth)) * tanh_ * ct;
    r.d_theta_phi = delta1 * delta2;
    return r;
}

}  // namespace qbounds
