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
// Evolved state of a uniformly accelerated two-level detector and its
// analytic parameter derivatives, for the free vacuum and for a vacuum
// bounded by a perfectly reflecting mirror. Everything is expressed in
// dimensionless units: tau in units of the inverse spontaneous-emission
// rate, a_inv = gap / acceleration, z = distance * gap.
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qbounds/errors.hpp"
#include "qbounds/linalg.hpp"

namespace qbounds {

enum class Scenario { Unbounded, Bounded };

enum class Param { Theta, Phi, AInv };

inline std::string param_name(Param p) {
    switch (p) {
        case Param::Theta: return "theta";
        case Param::Phi: return "phi";
        case Param::AInv: return "a_inv";
    }
    return {};
}

inline ComplexMatrix pauli(int j) {
    ComplexMatrix m(2);
    switch (j) {
        case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 2: m(0, 1) = Cx(0.0, -1.0); m(1, 0) = Cx(0.0, 1.0); break;
        case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        default: throw InvalidInput("pauli index must be 1, 2 or 3");
    }
    return m;
}

/// Physical/statistical parameter point. theta strictly inside (0, pi) and
/// tau > 0: the endpoints give rank-deficient states where the RLD does not
/// exist, so they are rejected at construction.
struct DetectorParams {
    double theta;
    double phi;
    double a_inv;
    double tau;
    double z = 0.0;  // only meaningful when scenario == Bounded
    Scenario scenario = Scenario::Unbounded;
    double omega_eff = 0.0;  // renormalized gap, a configuration constant

    DetectorParams(double theta_, double phi_, double a_inv_, double tau_,
                   Scenario scenario_ = Scenario::Unbounded, double z_ = 0.0, double omega_eff_ = 0.0)
        : theta(theta_), phi(phi_), a_inv(a_inv_), tau(tau_), z(z_), scenario(scenario_), omega_eff(omega_eff_) {
        if (!(theta > 0.0 && theta < M_PI)) throw InvalidInput("theta must lie strictly inside (0, pi)");
        if (!(a_inv > 0.0)) throw InvalidInput("a_inv must be positive");
        if (!(tau > 0.0)) throw InvalidInput("tau must be positive");
        if (scenario == Scenario::Bounded && !(z > 0.0)) throw InvalidInput("bounded scenario requires z > 0");
        if (!(omega_eff >= 0.0)) throw InvalidInput("omega_eff must be non-negative");
        if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(a_inv) || !std::isfinite(tau))
            throw InvalidInput("non-finite detector parameters");
    }
};

/// Dissipator coefficients (A, B) in units of the spontaneous-emission rate.
/// Invariant: B/A = tanh(pi * a_inv) in both scenarios.
struct KossakowskiCoeffs {
    double a_coef;
    double b_coef;
};

struct BlochState {
    double w1, w2, w3;

    double norm() const { return std::sqrt(w1 * w1 + w2 * w2 + w3 * w3); }
};

/// Mirror correction to the transition rates:
///   f = 1 - sin(2 a_inv asinh(z / a_inv)) / (2 z sqrt(1 + z^2 / a_inv^2)).
/// f -> 0 on the mirror (z -> 0) and f -> 1 far away.
inline double boundary_factor(double a_inv, double z) {
    if (!(a_inv > 0.0) || !(z > 0.0)) throw InvalidInput("boundary_factor requires positive inputs");
    const double g = 2.0 * a_inv * std::asinh(z / a_inv);
    const double h = std::sqrt(1.0 + (z / a_inv) * (z / a_inv));
    return 1.0 - std::sin(g) / (2.0 * z * h);
}

/// d f / d a_inv at fixed z.
inline double boundary_factor_da(double a_inv, double z) {
    if (!(a_inv > 0.0) || !(z > 0.0)) throw InvalidInput("boundary_factor requires positive inputs");
    const double u = z / a_inv;
    const double h = std::sqrt(1.0 + u * u);
    const double g = 2.0 * a_inv * std::asinh(u);
    const double dg = 2.0 * std::asinh(u) - 2.0 * z / (a_inv * h);
    const double dh = -(z * z) / (a_inv * a_inv * a_inv * h);
    return -(std::cos(g) * dg) / (2.0 * z * h) + std::sin(g) * dh / (2.0 * z * h * h);
}

inline KossakowskiCoeffs kossakowski(const DetectorParams& p) {
    const double c = 1.0 / std::tanh(M_PI * p.a_inv);
    double f = 1.0;
    if (p.scenario == Scenario::Bounded) f = boundary_factor(p.a_inv, p.z);
    return {0.25 * c * f, 0.25 * f};
}

namespace detail {

// Coefficients and their a_inv-derivatives, shared by bloch_evolve and the
// analytic derivative chain.
struct Rates {
    double a_coef, b_coef;   // A, B
    double da, db;           // dA/da_inv, dB/da_inv
    double ratio, dratio;    // B/A = tanh(pi a_inv) and its derivative
};

inline Rates rates(const DetectorParams& p) {
    const double pa = M_PI * p.a_inv;
    const double c = 1.0 / std::tanh(pa);
    const double sh = std::sinh(pa);
    const double dc = -M_PI / (sh * sh);
    double f = 1.0, df = 0.0;
    if (p.scenario == Scenario::Bounded) {
        f = boundary_factor(p.a_inv, p.z);
        df = boundary_factor_da(p.a_inv, p.z);
    }
    Rates r;
    r.a_coef = 0.25 * c * f;
    r.b_coef = 0.25 * f;
    r.da = 0.25 * (dc * f + c * df);
    r.db = 0.25 * df;
    r.ratio = std::tanh(pa);
    const double ch = std::cosh(pa);
    r.dratio = M_PI / (ch * ch);
    return r;
}

}  // namespace detail

/// Closed-form Bloch vector of the evolved state.
inline BlochState bloch_evolve(const DetectorParams& p) {
    const detail::Rates r = detail::rates(p);
    const double e2 = std::exp(-2.0 * r.a_coef * p.tau);
    const double e4 = std::exp(-4.0 * r.a_coef * p.tau);
    const double psi = p.omega_eff * p.tau + p.phi;
    return {std::sin(p.theta) * std::cos(psi) * e2,
            std::sin(p.theta) * std::sin(psi) * e2,
            std::cos(p.theta) * e4 - r.ratio * (1.0 - e4)};
}

inline HermitianMatrix density_matrix(const BlochState& b) {
    if (b.norm() > 1.0 + 1e-12) throw Unphysical("Bloch vector length exceeds 1");
    ComplexMatrix m = ComplexMatrix::identity(2);
    const double w[3] = {b.w1, b.w2, b.w3};
    for (int j = 1; j <= 3; ++j) m = m + w[j - 1] * pauli(j);
    return HermitianMatrix(0.5 * m);
}

/// Quantum statistical model: evolved state plus analytic derivatives with
/// respect to the selected parameter subset.
struct StatModel {
    HermitianMatrix rho;
    std::vector<std::pair<Param, HermitianMatrix>> derivs;

    const HermitianMatrix& deriv(size_t u) const { return derivs[u].second; }
    size_t num_params() const { return derivs.size(); }
};

namespace detail {

inline std::array<double, 3> bloch_deriv(const DetectorParams& p, Param which) {
    const Rates r = rates(p);
    const double e2 = std::exp(-2.0 * r.a_coef * p.tau);
    const double e4 = std::exp(-4.0 * r.a_coef * p.tau);
    const double psi = p.omega_eff * p.tau + p.phi;
    const double st = std::sin(p.theta), ct = std::cos(p.theta);
    const double cp = std::cos(psi), sp = std::sin(psi);
    switch (which) {
        case Param::Theta:
            return {ct * cp * e2, ct * sp * e2, -st * e4};
        case Param::Phi:
            return {-st * sp * e2, st * cp * e2, 0.0};
        case Param::AInv: {
            // omega_eff is a fixed configuration constant: no Omega(a) term.
            const double de2 = -2.0 * p.tau * r.da * e2;
            const double de4 = -4.0 * p.tau * r.da * e4;
            return {st * cp * de2, st * sp * de2, ct * de4 - r.dratio * (1.0 - e4) + r.ratio * de4};
        }
    }
    throw InvalidInput("unknown parameter");
}

}  // namespace detail

inline StatModel stat_model(const DetectorParams& p, const std::vector<Param>& params) {
    if (params.empty()) throw EmptyParameterSet("parameter subset must be non-empty");
    StatModel m{density_matrix(bloch_evolve(p)), {}};
    for (Param u : params) {
        const std::array<double, 3> dw = detail::bloch_deriv(p, u);
        ComplexMatrix d(2);
        for (int j = 1; j <= 3; ++j) d = d + dw[j - 1] * pauli(j);
        m.derivs.emplace_back(u, HermitianMatrix(0.5 * d));
    }
    return m;
}

/// Right-hand side of the master equation, -i[H_eff, rho] + dissipator, in
/// dimensionless time. The closed-form evolution is the primary path; this
/// exists for consistency checks against it.
inline ComplexMatrix lindblad_rhs(const HermitianMatrix& rho, const KossakowskiCoeffs& c, double omega_eff) {
    if (!(c.a_coef >= 0.0) || !(c.b_coef >= 0.0)) throw InvalidInput("negative dissipator coefficients");
    // a_ij = A delta_ij - i B eps_ij3 - A delta_i3 delta_j3
    ComplexMatrix a(3);
    a(0, 0) = c.a_coef;
    a(1, 1) = c.a_coef;
    a(0, 1) = Cx(0.0, -c.b_coef);
    a(1, 0) = Cx(0.0, c.b_coef);

    ComplexMatrix rhs(2);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            const Cx aij = a(i - 1, j - 1);
            if (aij == Cx(0.0)) continue;
            const ComplexMatrix si = pauli(i), sj = pauli(j);
            rhs = rhs + 0.5 * aij *
                            (2.0 * (sj * rho.mat() * si) - si * sj * rho.mat() - rho.mat() * (si * sj));
        }
    const ComplexMatrix h = (0.5 * omega_eff) * pauli(3);
    rhs = rhs + Cx(0.0, -1.0) * commutator(h, rho.mat());
    return rhs;
}

}  // namespace qbounds
