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

#include "qbounds/holevo.hpp"
#include "test_util.hpp"

using namespace qbounds;

TEST_CASE("OperatorBasis::qubit is orthonormal under the trace inner product") {
    const OperatorBasis b = OperatorBasis::qubit();
    REQUIRE(b.size() == 4);
    for (size_t k = 0; k < 4; ++k)
        for (size_t l = 0; l < 4; ++l) {
            const double ip = (b.elements[k].mat() * b.elements[l].mat()).trace().real();
            CHECK(ip == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("make_holevo_problem: Gram factor reproduces the Gram matrix") {
    const DetectorParams p(1.2, 0.5, 0.4, 0.8);
    const StatModel m = stat_model(p, {Param::Theta, Param::Phi});
    const HolevoProblem hp = make_holevo_problem(m);
    const ComplexMatrix residual = hp.gram_factor.adjoint() * hp.gram_factor - hp.gram.mat();
    CHECK(residual.frobenius_norm() <= 1e-10);
}

TEST_CASE("hcrb: single-parameter collapse to the inverse Fisher information") {
    std::mt19937 rng(71);
    for (Param which : {Param::Theta, Param::Phi, Param::AInv})
        for (int trial = 0; trial < 5; ++trial) {
            const DetectorParams p = qbtest::random_point(rng, Scenario::Unbounded);
            const StatModel m = stat_model(p, {which});
            const FisherBundle f = fisher_bundle(m);
            const double inv_j = 1.0 / f.j_sld(0, 0);
            CHECK(hcrb(m).value == doctest::Approx(inv_j).epsilon(1e-7));
        }
}

TEST_CASE("hcrb: matches the closed form on a two-parameter grid") {
    for (double theta : {0.6, M_PI / 2.0, 2.4})
        for (double a : {0.15, 0.6})
            for (double tau : {0.3, 1.2}) {
                const DetectorParams p(theta, 0.2, a, tau);
                const StatModel m = stat_model(p, {Param::Theta, Param::Phi});
                const AnalyticTwoParam ref = analytic_two_param(p);
                CHECK(hcrb(m).value == doctest::Approx(ref.c_hcrb).epsilon(1e-6));
            }
}

TEST_CASE("hcrb: commuting-family toy model collapses to the SLD bound") {
    // rho = I/2 with derivatives along sigma_1 and sigma_3: the SLDs commute
    // and the Uhlmann curvature vanishes, so hcrb = c_sld.
    StatModel m{HermitianMatrix(0.5 * ComplexMatrix::identity(2)), {}};
    m.derivs.emplace_back(Param::Theta, HermitianMatrix(0.5 * pauli(1)));
    m.derivs.emplace_back(Param::Phi, HermitianMatrix(0.5 * pauli(3)));
    const ScalarCrbs c = scalar_crbs(fisher_bundle(m));
    CHECK(hcrb(m).value == doctest::Approx(c.c_sld).epsilon(1e-7));
}

TEST_CASE("hcrb: minimizer satisfies the unbiasedness conditions") {
    const DetectorParams p(M_PI / 2.0, 0.3, 0.2, 0.4);
    const StatModel m = stat_model(p, {Param::Theta, Param::Phi});
    const HcrbResult res = hcrb(m);
    for (size_t u = 0; u < 2; ++u) {
        CHECK(std::abs((m.rho.mat() * res.x_opt[u].mat()).trace()) <= 1e-8);
        for (size_t v = 0; v < 2; ++v) {
            const double tr = (res.x_opt[u].mat() * m.deriv(v).mat()).trace().real();
            CHECK(tr == doctest::Approx(u == v ? 1.0 : 0.0).epsilon(1e-8).scale(1.0));
        }
    }
    // Objective consistency: tr V* equals tr Re Z[X*] + ||Im Z[X*]||_1.
    ComplexMatrix z(2);
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
            z(u, v) = (m.rho.mat() * res.x_opt[v].mat() * res.x_opt[u].mat()).trace();
    ComplexMatrix im(2);
    double tr_re = 0.0;
    for (int u = 0; u < 2; ++u) {
        tr_re += z(u, u).real();
        for (int v = 0; v < 2; ++v) im(u, v) = z(u, v).imag();
    }
    CHECK(res.value == doctest::Approx(tr_re + trace_norm(im)).epsilon(1e-7));
}

TEST_CASE("nagaoka_hayashi: closed-form oracle and direct-objective consistency") {
    for (double theta : {0.7, M_PI / 2.0, 2.2})
        for (double a : {0.2, 0.8})
            for (double tau : {0.4, 1.5}) {
                const DetectorParams p(theta, -0.4, a, tau);
                const StatModel m = stat_model(p, {Param::Theta, Param::Phi});
                const AnalyticTwoParam ref = analytic_two_param(p);
                const double nb = nagaoka_hayashi(m);
                CHECK(nb == doctest::Approx(ref.c_nb).epsilon(1e-6));
                CHECK(nb >= hcrb(m).value - 1e-7);
            }
}

TEST_CASE("nagaoka_hayashi: three parameters sit atop the hierarchy") {
    const DetectorParams p(M_PI / 2.0, 0.0, 0.2, 0.4);
    const StatModel m = stat_model(p, {Param::Theta, Param::Phi, Param::AInv});
    const ScalarCrbs c = scalar_crbs(fisher_bundle(m));
    const double h = hcrb(m).value;
    const double nhb = nagaoka_hayashi(m);
    CHECK(nhb >= h - 1e-7);
    CHECK(h >= std::max(c.c_sld, c.c_rld) - 1e-7);
}

TEST_CASE("bound_report: reference point, bounded coincidence, d=1 collapse") {
    const DetectorParams p(M_PI / 2.0, 0.0, 0.2, 0.4);
    const BoundReport r = bound_report(stat_model(p, {Param::Theta, Param::Phi}), {}, p);
    REQUIRE(r.c_hcrb.has_value());
    CHECK(r.hierarchy_ok);
    REQUIRE(r.analytic_hcrb.has_value());
    CHECK(*r.c_hcrb == doctest::Approx(*r.analytic_hcrb).epsilon(1e-6));

    const DetectorParams pb(M_PI / 2.0, 0.0, 1.0, 1.0, Scenario::Bounded, 0.5);
    const BoundReport rb = bound_report(stat_model(pb, {Param::Theta, Param::Phi}), {}, pb);
    REQUIRE(rb.c_rld.has_value());
    REQUIRE(rb.c_hcrb.has_value());
    CHECK(std::abs(*rb.c_rld - *rb.c_hcrb) / *rb.c_hcrb <= 1e-3);

    const BoundReport r1 = bound_report(stat_model(p, {Param::Phi}), {}, p);
    REQUIRE(r1.c_sld.has_value());
    REQUIRE(r1.c_hcrb.has_value());
    REQUIRE(r1.c_nagaoka.has_value());
    CHECK(*r1.c_nagaoka == *r1.c_hcrb);  // recorded equality, NHB skipped
    CHECK(*r1.c_hcrb == doctest::Approx(*r1.c_sld).epsilon(1e-7));
}

TEST_CASE("bound_report: parameter-permutation invariance of the scalars") {
    const DetectorParams p(1.0, 0.9, 0.5, 0.9);
    const BoundReport ra = bound_report(stat_model(p, {Param::Theta, Param::Phi}), {}, p);
    const BoundReport rb = bound_report(stat_model(p, {Param::Phi, Param::Theta}), {}, p);
    CHECK(*ra.c_sld == doctest::Approx(*rb.c_sld).epsilon(1e-10));
    CHECK(*ra.c_rld == doctest::Approx(*rb.c_rld).epsilon(1e-10));
    CHECK(*ra.c_hcrb == doctest::Approx(*rb.c_hcrb).epsilon(1e-8));
    CHECK(*ra.c_nagaoka == doctest::Approx(*rb.c_nagaoka).epsilon(1e-8));
}

TEST_CASE("bound_report: near-pure limit converges HCRB and NHB") {
    // tau -> 0 approaches a pure state; record the convergence of the two
    // bounds without asserting exact equality at a point we cannot evaluate.
    const DetectorParams p(M_PI / 2.0, 0.0, 0.2, 1e-3);
    const StatModel m = stat_model(p, {Param::Theta, Param::Phi});
    const double h = hcrb(m).value, nb = nagaoka_hayashi(m);
    CHECK(nb >= h - 1e-7);
    CHECK((nb - h) / h <= 0.05);  // within a few percent near purity
}
