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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qbounds/sdp.hpp"
#include "test_util.hpp"

using namespace qbounds;

namespace {

// minimize t subject to t*I - A >= 0: t* = lambda_max(A).
LmiProblem max_eig_problem(const HermitianMatrix& a) {
    const int n = a.dim();
    LmiProblem p;
    p.block_dims = {2 * n};
    p.objective = {1.0};
    p.f0.blocks = {real_embed(a).scaled(-1.0)};
    BlockMatrix fi = BlockMatrix::zeros(p.block_dims);
    for (int i = 0; i < 2 * n; ++i) fi.blocks[0](i, i) = 1.0;
    p.fi = {fi};
    return p;
}

// minimize tr V subject to V >= Z over REAL SYMMETRIC V dominating a
// Hermitian Z (real-embedded LMI). Optimum: tr Re Z + ||Im Z||_1.
LmiProblem dominate_problem(const HermitianMatrix& z) {
    const int n = z.dim();
    LmiProblem p;
    p.block_dims = {2 * n};
    p.f0.blocks = {real_embed(z).scaled(-1.0)};
    auto push = [&](const HermitianMatrix& basis, double obj) {
        p.objective.push_back(obj);
        BlockMatrix fi = BlockMatrix::zeros(p.block_dims);
        fi.blocks[0] = real_embed(basis);
        p.fi.push_back(fi);
    };
    for (int i = 0; i < n; ++i) {
        ComplexMatrix e(n);
        e(i, i) = 1.0;
        push(HermitianMatrix(e), 1.0);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            ComplexMatrix re(n);
            re(i, j) = 1.0;
            re(j, i) = 1.0;
            push(HermitianMatrix(re), 0.0);
        }
    return p;
}

double dominate_oracle(const HermitianMatrix& z) {
    const int n = z.dim();
    double s = 0.0;
    ComplexMatrix im(n);
    for (int i = 0; i < n; ++i) {
        s += z(i, i).real();
        for (int j = 0; j < n; ++j) im(i, j) = z(i, j).imag();
    }
    return s + trace_norm(im);
}

}  // namespace

TEST_CASE("solve: scalar LMI toy problem") {
    // minimize y subject to y - 1 >= 0 (1x1 block)
    LmiProblem p;
    p.block_dims = {1};
    p.objective = {1.0};
    p.f0.blocks = {RealMatrix(1, 1)};
    p.f0.blocks[0](0, 0) = -1.0;
    BlockMatrix fi = BlockMatrix::zeros(p.block_dims);
    fi.blocks[0](0, 0) = 1.0;
    p.fi = {fi};
    const SdpSolution sol = solve(p);
    CHECK(sol.status == SdpStatus::Optimal);
    CHECK(sol.y[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("solve: max-eigenvalue problems match eigh") {
    std::mt19937 rng(51);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + trial % 3;
        const HermitianMatrix a = qbtest::random_hermitian(rng, n);
        const SdpSolution sol = solve(max_eig_problem(a));
        CHECK(sol.status == SdpStatus::Optimal);
        CHECK(sol.objective_value == doctest::Approx(eigh(a).eigenvalues.back()).epsilon(1e-8));
    }
}

TEST_CASE("solve: dominate-a-Hermitian-matrix oracle") {
    std::mt19937 rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 3;
        const HermitianMatrix z = qbtest::random_hermitian(rng, n);
        const SdpSolution sol = solve(dominate_problem(z));
        CHECK(sol.status == SdpStatus::Optimal);
        CHECK(sol.objective_value == doctest::Approx(dominate_oracle(z)).epsilon(1e-8));
    }
}

TEST_CASE("solve: determinism and scale invariance") {
    std::mt19937 rng(55);
    const HermitianMatrix a = qbtest::random_hermitian(rng, 3);
    const LmiProblem p = max_eig_problem(a);
    const SdpSolution s1 = solve(p), s2 = solve(p);
    CHECK(s1.status == s2.status);
    CHECK(s1.objective_value == s2.objective_value);  // bitwise identical
    CHECK(s1.iterations == s2.iterations);

    LmiProblem p10 = p;
    for (double& c : p10.objective) c *= 10.0;
    const SdpSolution s10 = solve(p10);
    CHECK(s10.objective_value == doctest::Approx(10.0 * s1.objective_value).epsilon(1e-8));
    CHECK(std::abs(s10.y[0] - s1.y[0]) <= 1e-8 * (1.0 + std::abs(s1.y[0])));
}

TEST_CASE("solve: optimal certificates satisfy the LMI and gap tolerance") {
    std::mt19937 rng(57);
    for (int trial = 0; trial < 10; ++trial) {
        const HermitianMatrix z = qbtest::random_hermitian(rng, 3);
        const LmiProblem p = dominate_problem(z);
        const SdpSolution sol = solve(p);
        REQUIRE(sol.status == SdpStatus::Optimal);
        CHECK(sol.duality_gap <= 1e-9 * (1.0 + std::abs(sol.objective_value)));
        // F(y*) >= -1e-9 * (1 + ||F||)
        BlockMatrix f = p.f0;
        for (int i = 0; i < p.nvars(); ++i) f.axpy(sol.y[i], p.fi[i]);
        std::vector<double> evals;
        RealMatrix evecs;
        detail::eigh_real(f.blocks[0], evals, evecs);
        CHECK(evals.front() >= -1e-9 * (1.0 + f.frobenius_norm()));
    }
}

TEST_CASE("eliminate_equalities: identity transform, reduction, residual property") {
    LmiProblem p;
    p.block_dims = {1};
    p.objective = {1.0, 1.0};
    p.f0.blocks = {RealMatrix(1, 1)};
    BlockMatrix f1 = BlockMatrix::zeros(p.block_dims), f2 = BlockMatrix::zeros(p.block_dims);
    f1.blocks[0](0, 0) = 1.0;
    f2.blocks[0](0, 0) = 1.0;
    p.fi = {f1, f2};

    // No equalities: identity transform.
    const EliminatedProblem id = eliminate_equalities(p);
    CHECK(id.reduced.nvars() == 2);
    CHECK(id.y0 == std::vector<double>{0.0, 0.0});

    // y1 + y2 = 1: one free variable, reconstruction satisfies the constraint.
    LmiProblem q = p;
    LmiProblem::Equalities eq;
    eq.e = RealMatrix(1, 2);
    eq.e(0, 0) = 1.0;
    eq.e(0, 1) = 1.0;
    eq.d = {1.0};
    q.equalities = eq;
    const EliminatedProblem red = eliminate_equalities(q);
    CHECK(red.reduced.nvars() == 1);
    const std::vector<double> y = red.recover({0.37});
    CHECK(y[0] + y[1] == doctest::Approx(1.0).epsilon(1e-12));

    // Random full-rank 3x7 system: affine parametrization stays on the manifold.
    std::mt19937 rng(59);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LmiProblem r;
    r.block_dims = {1};
    r.objective.assign(7, 0.0);
    r.f0.blocks = {RealMatrix(1, 1)};
    r.fi.assign(7, BlockMatrix::zeros(r.block_dims));
    LmiProblem::Equalities req;
    req.e = RealMatrix(3, 7);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 7; ++j) req.e(i, j) = u(rng);
    req.d = {u(rng), u(rng), u(rng)};
    r.equalities = req;
    const EliminatedProblem rr = eliminate_equalities(r);
    CHECK(rr.reduced.nvars() == 4);
    std::vector<double> w(4);
    for (double& v : w) v = u(rng);
    const std::vector<double> yr = rr.recover(w);
    for (int i = 0; i < 3; ++i) {
        double lhs = 0.0;
        for (int j = 0; j < 7; ++j) lhs += req.e(i, j) * yr[j];
        CHECK(lhs == doctest::Approx(req.d[i]).epsilon(1e-10).scale(1.0));
    }

    // Inconsistent system rejected.
    LmiProblem bad = q;
    bad.equalities->e = RealMatrix(2, 2);
    bad.equalities->e(0, 0) = 1.0;
    bad.equalities->e(0, 1) = 1.0;
    bad.equalities->e(1, 0) = 1.0;
    bad.equalities->e(1, 1) = 1.0;
    bad.equalities->d = {1.0, 2.0};
    CHECK_THROWS_AS(eliminate_equalities(bad), InconsistentEqualities);
}

TEST_CASE("real_embed: real input, sigma_2 spectrum, PSD equivalence") {
    std::mt19937 rng(61);
    // Purely real Hermitian: embedding is the matrix twice (block diagonal
    // up to permutation) with the same spectrum doubled.
    const RealMatrix e2 = real_embed(HermitianMatrix(pauli(1)));
    std::vector<double> evals;
    RealMatrix evecs;
    detail::eigh_real(e2, evals, evecs);
    CHECK(evals[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(evals[1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(evals[2] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(evals[3] == doctest::Approx(1.0).epsilon(1e-10));

    const RealMatrix ey = real_embed(HermitianMatrix(pauli(2)));
    detail::eigh_real(ey, evals, evecs);
    CHECK(evals[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(evals[3] == doctest::Approx(1.0).epsilon(1e-10));

    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 3;
        const HermitianMatrix h = qbtest::random_hermitian(rng, n);
        const std::vector<double> spec = eigh(h).eigenvalues;
        detail::eigh_real(real_embed(h), evals, evecs);
        // spectrum doubled in multiplicity
        for (int k = 0; k < n; ++k) {
            CHECK(evals[2 * k] == doctest::Approx(spec[k]).epsilon(1e-9).scale(1.0));
            CHECK(evals[2 * k + 1] == doctest::Approx(spec[k]).epsilon(1e-9).scale(1.0));
        }
        // PSD-ness equivalence
        CHECK((spec.front() >= -1e-12) == (evals.front() >= -1e-9));
    }
}
