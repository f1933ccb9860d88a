// Composite nonlinear spatial operators: the skew convection form b_h, the
// phase transport divergence, the capillary force, and the discrete energies.
// Inputs must be ghost-filled; products are formed from ghost-filled factors so
// every long stencil reads well-defined values (the odd/mirror conventions make
// the skew-symmetry identities exact, wall rows included).

#pragma once

#include <cmath>

#include "chns/errors.hpp"
#include "chns/field.hpp"
#include "chns/operators.hpp"
#include "chns/potential.hpp"

namespace chns {

/// b_h(adv, v) = 1/2 (adv . grad_h v + div_h(v adv^T)) with long-stencil
/// differences and 4-point transverse averages:
///   x: adv^x Dx~ v^x + (A_xy adv^y) Dy~ v^x
///      + Dx~(adv^x v^x) + Dy~((A_xy adv^y) v^x)
///   y: (A_xy adv^x) Dx~ v^y + adv^y Dy~ v^y
///      + Dx~((A_xy adv^x) v^y) + Dy~(adv^y v^y)
inline MacVelocity convect_velocity(const MacVelocity& adv, const MacVelocity& v) {
    const int n = adv.n();
    const EdgeFieldX ay = avg_xy_y(adv.y); // adv^y seen at east-west points
    const EdgeFieldY ax = avg_xy_x(adv.x); // adv^x seen at north-south points

    const EdgeFieldX dxvx = diff_long_x(v.x);
    const EdgeFieldX dyvx = diff_long_y(v.x);
    const EdgeFieldY dxvy = diff_long_x(v.y);
    const EdgeFieldY dyvy = diff_long_y(v.y);

    const EdgeFieldX div_xx = diff_long_x(adv.x * v.x);
    const EdgeFieldX div_yx = diff_long_y(ay * v.x);
    const EdgeFieldY div_xy = diff_long_x(ax * v.y);
    const EdgeFieldY div_yy = diff_long_y(adv.y * v.y);

    MacVelocity b(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i)
            b.x(i, j) = 0.5 * (adv.x(i, j) * dxvx(i, j) + ay(i, j) * dyvx(i, j) +
                               div_xx(i, j) + div_yx(i, j));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i)
            b.y(i, j) = 0.5 * (ax(i, j) * dxvy(i, j) + adv.y(i, j) * dyvy(i, j) +
                               div_xy(i, j) + div_yy(i, j));
    return b;
}

/// B(u, v, w) = <b_h(u, v), w>_1
inline double trilinear_b(const MacVelocity& u, const MacVelocity& v, const MacVelocity& w) {
    return inner_vec(convect_velocity(u, v), w);
}

/// (A_h phi) grad_h mu = (D^c_x mu . A_x phi, D^c_y mu . A_y phi)
inline MacVelocity phi_grad_mu(const CellField& phi, const CellField& mu) {
    MacVelocity r;
    r.x = diff_center_x(mu) * avg_x(phi);
    r.y = diff_center_y(mu) * avg_y(phi);
    return r;
}

/// div_h((A_h phi) u) = D^ew_x(u^x A_x phi) + D^ns_y(u^y A_y phi)
inline CellField div_phi_u(const CellField& phi, const MacVelocity& u) {
    CellField r = diff_ew_x(u.x * avg_x(phi));
    const CellField ry = diff_ns_y(u.y * avg_y(phi));
    for (int j = 0; j < r.n(); ++j)
        for (int i = 0; i < r.n(); ++i) r(i, j) += ry(i, j);
    return r;
}

/// Flory-Huggins free energy
///   <(1+phi)ln(1+phi) + (1-phi)ln(1-phi) - theta0/2 phi^2, 1>_c
///   + eps^2/2 ||grad_h phi||_2^2
/// The gradient term uses the same edge-staggered differences as the scheme.
inline double flory_huggins_energy(const CellField& phi, double eps, double theta0,
                                   BcMode mode = BcMode::PhysicalNeumannFreeSlip) {
    if (!(norm_linf(phi) < 1.0))
        throw OutOfBounds("flory_huggins_energy: |phi| must be < 1");
    const int n = phi.n();
    double bulk = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double p = phi(i, j);
            bulk += xlogx(1.0 + p) + xlogx(1.0 - p) - 0.5 * theta0 * p * p;
        }
    bulk *= phi.h() * phi.h();

    CellField g = phi;
    fill_ghost_scalar(g, mode);
    const double grad = norm_grad_cell(g);
    return bulk + 0.5 * eps * eps * grad * grad;
}

/// E_total = E(phi) + 1/(2 gamma) ||u||_2^2
inline double total_energy(const CellField& phi, const MacVelocity& u, double eps,
                           double theta0, double gamma,
                           BcMode mode = BcMode::PhysicalNeumannFreeSlip) {
    return flory_huggins_energy(phi, eps, theta0, mode) + inner_vec(u, u) / (2.0 * gamma);
}

} // namespace chns
