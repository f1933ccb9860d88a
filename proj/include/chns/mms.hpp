// Manufactured reference solution and source terms for the verification
// harness.  The reference fields are 1-periodic trigonometric profiles:
//
//   phi(x,y,t) = 0.5 sin(2 pi x) cos(2 pi y) cos t + 0.1
//   u  (x,y,t) = -cos t cos(2 pi x) sin(2 pi y)
//   v  (x,y,t) =  cos t sin(2 pi x) cos(2 pi y)
//   p  (x,y,t) =  sin t sin(2 pi x)
//
// The velocity is divergence-free (also discretely, for the MAC samples), and
// p(.,0) = 0, so the zero initial pressure of the stepper is exact.
//
// Source terms are evaluated per time level with the same temporal
// combinations the scheme applies (Adams-Bashforth extrapolation,
// Crank-Nicolson averages, the 3/4-1/4 stencil); the logarithmic part of the
// chemical potential enters at the midpoint t_{n+1/2}.  Each combination uses
// closed-form space derivatives, so the discrete residual of the sampled
// reference fields is O(tau^2 + h^2).

#pragma once

#include <cmath>

#include "chns/field.hpp"
#include "chns/potential.hpp"
#include "chns/scheme.hpp"

namespace chns {

class MmsFields {
public:
    explicit MmsFields(double eps, double theta0, double gamma, double nu)
        : eps_(eps), theta0_(theta0), gamma_(gamma), nu_(nu) {}

    // --- closed forms ---------------------------------------------------------

    static double phi(double x, double y, double t) {
        return 0.5 * std::sin(k * x) * std::cos(k * y) * std::cos(t) + 0.1;
    }
    static double dphi_dt(double x, double y, double t) {
        return -0.5 * std::sin(k * x) * std::cos(k * y) * std::sin(t);
    }
    static double dphi_dx(double x, double y, double t) {
        return 0.5 * k * std::cos(k * x) * std::cos(k * y) * std::cos(t);
    }
    static double dphi_dy(double x, double y, double t) {
        return -0.5 * k * std::sin(k * x) * std::sin(k * y) * std::cos(t);
    }
    static double lap_phi(double x, double y, double t) {
        return -2.0 * k * k * (phi(x, y, t) - 0.1);
    }
    static double bilap_phi(double x, double y, double t) {
        return 4.0 * k * k * k * k * (phi(x, y, t) - 0.1);
    }

    static double ux(double x, double y, double t) {
        return -std::cos(t) * std::cos(k * x) * std::sin(k * y);
    }
    static double uy(double x, double y, double t) {
        return std::cos(t) * std::sin(k * x) * std::cos(k * y);
    }
    static double dux_dt(double x, double y, double t) {
        return std::sin(t) * std::cos(k * x) * std::sin(k * y);
    }
    static double duy_dt(double x, double y, double t) {
        return -std::sin(t) * std::sin(k * x) * std::cos(k * y);
    }
    static double dux_dx(double x, double y, double t) {
        return k * std::cos(t) * std::sin(k * x) * std::sin(k * y);
    }
    static double dux_dy(double x, double y, double t) {
        return -k * std::cos(t) * std::cos(k * x) * std::cos(k * y);
    }
    static double duy_dx(double x, double y, double t) {
        return k * std::cos(t) * std::cos(k * x) * std::cos(k * y);
    }
    static double duy_dy(double x, double y, double t) {
        return -k * std::cos(t) * std::sin(k * x) * std::sin(k * y);
    }
    static double lap_ux(double x, double y, double t) { return -2.0 * k * k * ux(x, y, t); }
    static double lap_uy(double x, double y, double t) { return -2.0 * k * k * uy(x, y, t); }

    static double p(double x, double y, double t) {
        (void)y;
        return std::sin(t) * std::sin(k * x);
    }
    static double dp_dx(double x, double y, double t) {
        (void)y;
        return k * std::sin(t) * std::cos(k * x);
    }
    static double dp_dy(double, double, double) { return 0.0; }

    // chemical potential of the reference phase field
    double mu(double x, double y, double t) const {
        const double ph = phi(x, y, t);
        return N_reg(ph) - theta0_ * ph - eps_ * eps_ * lap_phi(x, y, t);
    }
    double dmu_dx(double x, double y, double t) const {
        const double ph = phi(x, y, t);
        return (N_reg_prime(ph) - theta0_ + 2.0 * k * k * eps_ * eps_) * dphi_dx(x, y, t);
    }
    double dmu_dy(double x, double y, double t) const {
        const double ph = phi(x, y, t);
        return (N_reg_prime(ph) - theta0_ + 2.0 * k * k * eps_ * eps_) * dphi_dy(x, y, t);
    }
    double lap_mu(double x, double y, double t) const {
        const double ph = phi(x, y, t);
        const double gx = dphi_dx(x, y, t), gy = dphi_dy(x, y, t);
        const double npp = -1.0 / ((1.0 + ph) * (1.0 + ph)) + 1.0 / ((1.0 - ph) * (1.0 - ph));
        return N_reg_prime(ph) * lap_phi(x, y, t) + npp * (gx * gx + gy * gy) -
               theta0_ * lap_phi(x, y, t) - eps_ * eps_ * bilap_phi(x, y, t);
    }

    // --- instantaneous sources (continuous-in-time residual of the PDE) -------

    double source_phi_instant(double x, double y, double t) const {
        return dphi_dt(x, y, t) + ux(x, y, t) * dphi_dx(x, y, t) +
               uy(x, y, t) * dphi_dy(x, y, t) - lap_mu(x, y, t);
    }

    double source_ux_instant(double x, double y, double t) const {
        return dux_dt(x, y, t) + ux(x, y, t) * dux_dx(x, y, t) +
               uy(x, y, t) * dux_dy(x, y, t) + dp_dx(x, y, t) - nu_ * lap_ux(x, y, t) +
               gamma_ * phi(x, y, t) * dmu_dx(x, y, t);
    }

    double source_uy_instant(double x, double y, double t) const {
        return duy_dt(x, y, t) + ux(x, y, t) * duy_dx(x, y, t) +
               uy(x, y, t) * duy_dy(x, y, t) + dp_dy(x, y, t) - nu_ * lap_uy(x, y, t) +
               gamma_ * phi(x, y, t) * dmu_dy(x, y, t);
    }

    // --- stencil-matched sources for the step t_n -> t_{n+1} -------------------

    double source_phi_level(double x, double y, int n, double tau) const {
        const double t0 = n * tau, tm = t0 - tau, t1 = t0 + tau, th = t0 + 0.5 * tau;
        const double rate = (phi(x, y, t1) - phi(x, y, t0)) / tau;
        const double ubx = 0.5 * (ux(x, y, t1) + ux(x, y, t0));
        const double uby = 0.5 * (uy(x, y, t1) + uy(x, y, t0));
        const double gtx = 1.5 * dphi_dx(x, y, t0) - 0.5 * dphi_dx(x, y, tm);
        const double gty = 1.5 * dphi_dy(x, y, t0) - 0.5 * dphi_dy(x, y, tm);

        const double lap_n_mid = lap_of_logpart(x, y, th);
        const double lap_theta = theta0_ * (1.5 * lap_phi(x, y, t0) - 0.5 * lap_phi(x, y, tm));
        const double bilap = eps_ * eps_ * (0.75 * bilap_phi(x, y, t1) + 0.25 * bilap_phi(x, y, tm));
        const double lap_reg = tau * (lap_of_logpart(x, y, t1) - lap_of_logpart(x, y, t0));
        const double lap_mu_comb = lap_n_mid - lap_theta - bilap + lap_reg;

        return rate + ubx * gtx + uby * gty - lap_mu_comb;
    }

    double source_ux_level(double x, double y, int n, double tau) const {
        const double t0 = n * tau, tm = t0 - tau, t1 = t0 + tau, th = t0 + 0.5 * tau;
        const double rate = (ux(x, y, t1) - ux(x, y, t0)) / tau;
        const double ex = 1.5 * ux(x, y, t0) - 0.5 * ux(x, y, tm);
        const double ey = 1.5 * uy(x, y, t0) - 0.5 * uy(x, y, tm);
        const double conv = ex * 0.5 * (dux_dx(x, y, t1) + dux_dx(x, y, t0)) +
                            ey * 0.5 * (dux_dy(x, y, t1) + dux_dy(x, y, t0));
        const double press = 0.5 * (dp_dx(x, y, t1) + dp_dx(x, y, t0));
        const double visc = 0.5 * nu_ * (lap_ux(x, y, t1) + lap_ux(x, y, t0));
        const double phit = 1.5 * phi(x, y, t0) - 0.5 * phi(x, y, tm);
        return rate + conv + press - visc + gamma_ * phit * dmu_dx(x, y, th);
    }

    double source_uy_level(double x, double y, int n, double tau) const {
        const double t0 = n * tau, tm = t0 - tau, t1 = t0 + tau, th = t0 + 0.5 * tau;
        const double rate = (uy(x, y, t1) - uy(x, y, t0)) / tau;
        const double ex = 1.5 * ux(x, y, t0) - 0.5 * ux(x, y, tm);
        const double ey = 1.5 * uy(x, y, t0) - 0.5 * uy(x, y, tm);
        const double conv = ex * 0.5 * (duy_dx(x, y, t1) + duy_dx(x, y, t0)) +
                            ey * 0.5 * (duy_dy(x, y, t1) + duy_dy(x, y, t0));
        const double press = 0.5 * (dp_dy(x, y, t1) + dp_dy(x, y, t0));
        const double visc = 0.5 * nu_ * (lap_uy(x, y, t1) + lap_uy(x, y, t0));
        const double phit = 1.5 * phi(x, y, t0) - 0.5 * phi(x, y, tm);
        return rate + conv + press - visc + gamma_ * phit * dmu_dy(x, y, th);
    }

    // --- grid samplers ---------------------------------------------------------

    CellField sample_phi(int n, double t) const {
        CellField f(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) f(i, j) = phi(f.x(i), f.y(j), t);
        return f;
    }

    CellField sample_p(int n, double t) const {
        CellField f(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) f(i, j) = p(f.x(i), f.y(j), t);
        return f;
    }

    MacVelocity sample_velocity(int n, double t) const {
        MacVelocity u(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= n; ++i) u.x(i, j) = ux(u.x.x(i), u.x.y(j), t);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i < n; ++i) u.y(i, j) = uy(u.y.x(i), u.y.y(j), t);
        return u;
    }

    /// Assemble the forcing and reference-field hooks for a run.
    SourceTerms source_terms(const SchemeParams& sp) const {
        SourceTerms s;
        const MmsFields f = *this; // capture by value
        const int n = sp.n;
        const double tau = sp.tau;
        const BcMode bc = sp.bc;
        s.phase = [f, n, tau, bc](int level) {
            CellField r(n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    r(i, j) = f.source_phi_level(r.x(i), r.y(j), level, tau);
            fill_ghost_scalar(r, bc);
            return r;
        };
        s.momentum = [f, n, tau, bc](int level) {
            MacVelocity r(n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i <= n; ++i)
                    r.x(i, j) = f.source_ux_level(r.x.x(i), r.x.y(j), level, tau);
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i < n; ++i)
                    r.y(i, j) = f.source_uy_level(r.y.x(i), r.y.y(j), level, tau);
            fill_ghost_velocity(r, bc);
            return r;
        };
        s.exact_phi = [f, n, bc](double t) {
            CellField r = f.sample_phi(n, t);
            fill_ghost_scalar(r, bc);
            return r;
        };
        s.exact_u = [f, n, bc](double t) {
            MacVelocity r = f.sample_velocity(n, t);
            fill_ghost_velocity(r, bc);
            return r;
        };
        s.exact_p = [f, n, bc](double t) {
            CellField r = f.sample_p(n, t);
            fill_ghost_scalar(r, bc);
            return r;
        };
        return s;
    }

    double eps() const { return eps_; }
    double theta0() const { return theta0_; }
    double gamma() const { return gamma_; }
    double nu() const { return nu_; }

private:
    // lap of the singular part N(phi) = ln(1+phi) - ln(1-phi) at time t
    double lap_of_logpart(double x, double y, double t) const {
        const double ph = phi(x, y, t);
        const double gx = dphi_dx(x, y, t), gy = dphi_dy(x, y, t);
        const double npp = -1.0 / ((1.0 + ph) * (1.0 + ph)) + 1.0 / ((1.0 - ph) * (1.0 - ph));
        return N_reg_prime(ph) * lap_phi(x, y, t) + npp * (gx * gx + gy * gy);
    }

    static constexpr double k = 2.0 * 3.14159265358979323846;

    double eps_, theta0_, gamma_, nu_;
};

} // namespace chns
