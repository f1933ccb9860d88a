// Logarithmic-potential kernels for the modified Crank-Nicolson chemical
// potential: the secant slope F_a of G(x) = x ln x, its derivative, the
// singular regularization N(phi) = ln(1+phi) - ln(1-phi), and the assembly of
// the half-step chemical potential together with its Newton linearization.
//
// F_a(x) = (G(x) - G(a)) / (x - a) is evaluated through
//     ln(a) + (x/d) log1p(d/a),  d = x - a,
// which has no cancellation, and through a short Taylor series inside a small
// relative window around the diagonal where the quotient is 0/0.

#pragma once

#include <cmath>

#include "chns/errors.hpp"
#include "chns/field.hpp"
#include "chns/operators.hpp"

namespace chns {

enum class RegKind { LogDifference };

struct PotentialParams {
    double theta0 = 3.0;
    double eps = 0.1;
    RegKind reg_kind = RegKind::LogDifference;
    double diag_switch_tol = 1e-7; // relative half-width of the series branch
};

/// x ln x with the limit value 0 at x = 0.
inline double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

/// Secant slope of G through (a, G(a)) and (x, G(x)); increasing in x, with
/// diagonal value F_a(a) = ln a + 1.
inline double F_diffquot(double a, double x, double diag_switch_tol = 1e-7) {
    if (!(a > 0.0) || !(x > 0.0))
        throw DomainError("F_diffquot: arguments must be positive");
    const double d = x - a;
    if (std::abs(d) < diag_switch_tol * std::max(a, x)) {
        const double r = d / a;
        return std::log(a) + 1.0 + r * (0.5 - r * (1.0 / 6.0 - r * (1.0 / 12.0)));
    }
    return std::log(a) + (x / d) * std::log1p(d / a);
}

namespace detail {

// r - log1p(r) = r^2/2 - r^3/3 + ... without cancellation for small |r|.
inline double r_minus_log1p(double r) {
    if (std::abs(r) < 0.25) {
        double term = r * r; // r^k with k = 2
        double sum = 0.5 * term;
        for (int k = 3; k <= 40; ++k) {
            term *= -r;
            const double add = term / k;
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return r - std::log1p(r);
}

} // namespace detail

/// d/dx F_a(x) = (G'(x)(x-a) - (G(x)-G(a))) / (x-a)^2 >= 0.
inline double F_diffquot_dx(double a, double x, double diag_switch_tol = 1e-7) {
    if (!(a > 0.0) || !(x > 0.0))
        throw DomainError("F_diffquot_dx: arguments must be positive");
    const double d = x - a;
    if (std::abs(d) < diag_switch_tol * std::max(a, x)) {
        const double ia = 1.0 / a;
        const double r = d * ia;
        return ia * (0.5 - r * (1.0 / 3.0 - r * (0.25 - r * 0.2)));
    }
    const double r = d / a;
    return detail::r_minus_log1p(r) * a / (d * d);
}

/// N(phi) = ln(1+phi) - ln(1-phi); increasing on (-1,1), singular at the ends.
inline double N_reg(double phi) {
    if (!(std::abs(phi) < 1.0)) throw OutOfBounds("N_reg: |phi| must be < 1");
    return std::log1p(phi) - std::log1p(-phi);
}

inline double N_reg_prime(double phi) {
    if (!(std::abs(phi) < 1.0)) throw OutOfBounds("N_reg_prime: |phi| must be < 1");
    return 1.0 / (1.0 + phi) + 1.0 / (1.0 - phi);
}

namespace detail {

inline void require_in_bounds(const CellField& f, const char* what) {
    if (!(norm_linf(f) < 1.0)) throw OutOfBounds(std::string(what) + ": |phi| must be < 1");
}

} // namespace detail

/// mu^{n+1/2} of the modified Crank-Nicolson scheme:
///   F_{1+phi^n}(1+phi^{n+1}) - F_{1-phi^n}(1-phi^{n+1})
///   - theta0 (3/2 phi^n - 1/2 phi^{n-1})
///   - eps^2 lap_h(3/4 phi^{n+1} + 1/4 phi^{n-1})
///   + tau (N(phi^{n+1}) - N(phi^n))
inline CellField chemical_potential(const CellField& phi_next, const CellField& phi_n,
                                    const CellField& phi_nm1, double tau,
                                    const PotentialParams& pp,
                                    BcMode mode = BcMode::PhysicalNeumannFreeSlip) {
    detail::require_in_bounds(phi_next, "chemical_potential(phi_next)");
    detail::require_in_bounds(phi_n, "chemical_potential(phi_n)");
    detail::require_in_bounds(phi_nm1, "chemical_potential(phi_nm1)");

    const int n = phi_next.n();
    CellField mu(n);
    const double tol = pp.diag_switch_tol;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double pn1 = phi_next(i, j), pn = phi_n(i, j), pm = phi_nm1(i, j);
            mu(i, j) = F_diffquot(1.0 + pn, 1.0 + pn1, tol) -
                       F_diffquot(1.0 - pn, 1.0 - pn1, tol) -
                       pp.theta0 * (1.5 * pn - 0.5 * pm) +
                       tau * (N_reg(pn1) - N_reg(pn));
        }

    CellField stencil = lincomb(0.75, phi_next, 0.25, phi_nm1);
    fill_ghost_scalar(stencil, mode);
    const CellField lap = lap_h(stencil);
    const double e2 = pp.eps * pp.eps;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) mu(i, j) -= e2 * lap(i, j);
    return mu;
}

/// Newton linearization of chemical_potential in phi^{n+1}: a strictly positive
/// pointwise diagonal plus the constant operator lap_coeff * lap_h.
struct MuLinearization {
    CellField diag;   // F'_{1+phi^n}(1+phi^{n+1}) + F'_{1-phi^n}(1-phi^{n+1}) + tau N'(phi^{n+1})
    double lap_coeff; // -(3/4) eps^2
};

inline MuLinearization chemical_potential_linearization(const CellField& phi_next,
                                                        const CellField& phi_n, double tau,
                                                        const PotentialParams& pp) {
    detail::require_in_bounds(phi_next, "chemical_potential_linearization(phi_next)");
    detail::require_in_bounds(phi_n, "chemical_potential_linearization(phi_n)");

    const int n = phi_next.n();
    MuLinearization lin{CellField(n), -0.75 * pp.eps * pp.eps};
    const double tol = pp.diag_switch_tol;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double pn1 = phi_next(i, j), pn = phi_n(i, j);
            lin.diag(i, j) = F_diffquot_dx(1.0 + pn, 1.0 + pn1, tol) +
                             F_diffquot_dx(1.0 - pn, 1.0 - pn1, tol) +
                             tau * N_reg_prime(pn1);
        }
    return lin;
}

} // namespace chns
