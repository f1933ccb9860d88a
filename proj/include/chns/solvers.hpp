// Matrix-free Krylov solvers over flat coefficient vectors.
//
// The operators the time stepper needs (Poisson with Neumann/periodic closure,
// momentum, phase-equation Newton systems) are all cheap stencil applications,
// so the solver interface is a callback: apply(x, y) writes y = A x.  Nullspace
// of the pure-Neumann/periodic Laplacian is handled by projecting every iterate
// to mean zero rather than pinning an entry, which keeps the operator symmetric.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "chns/errors.hpp"

namespace chns {

using Vec = std::vector<double>;
using ApplyFn = std::function<void(const Vec&, Vec&)>;
using PrecondFn = std::function<void(const Vec&, Vec&)>; // y = M^{-1} x

struct LinearOperator {
    ApplyFn apply;
    bool symmetric = false;
    Vec diagonal; // optional Jacobi preconditioner data; empty = none
};

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0; // ||b - A x||_2 (unweighted vector norm)
    bool converged = false;
};

struct SolveOptions {
    double rel_tol = 1e-11;
    double abs_tol = std::numeric_limits<double>::infinity();
    int max_iter = 1000;
    bool project_mean = false;        // keep iterates mean-free (solve_spd only)
    PrecondFn preconditioner;         // optional, overrides op.diagonal
};

namespace vecops {

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double nrm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline void axpy(Vec& y, double c, const Vec& x) {
    for (size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

inline void scal(Vec& x, double c) {
    for (double& v : x) v *= c;
}

inline double mean(const Vec& a) {
    double s = 0.0;
    for (double v : a) s += v;
    return s / (double)a.size();
}

inline void remove_mean(Vec& a) {
    const double m = mean(a);
    for (double& v : a) v -= m;
}

} // namespace vecops

namespace detail {

inline PrecondFn make_preconditioner(const LinearOperator& op, const SolveOptions& opt) {
    if (opt.preconditioner) return opt.preconditioner;
    if (!op.diagonal.empty()) {
        Vec inv(op.diagonal.size());
        for (size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / op.diagonal[i];
        return [inv](const Vec& x, Vec& y) {
            for (size_t i = 0; i < x.size(); ++i) y[i] = inv[i] * x[i];
        };
    }
    return nullptr;
}

inline double stop_threshold(double rhs_norm, const SolveOptions& opt) {
    double t = opt.rel_tol * rhs_norm;
    if (opt.abs_tol < t) t = opt.abs_tol;
    return t;
}

} // namespace detail

/// Preconditioned conjugate gradients for symmetric positive (semi)definite
/// operators.  With project_mean, the right-hand side must be mean-free and
/// every iterate is projected back onto the mean-free subspace.
inline std::pair<Vec, SolveReport> solve_spd(const LinearOperator& op, const Vec& rhs,
                                             const SolveOptions& opt = {}) {
    const size_t m = rhs.size();
    Vec b = rhs;
    if (opt.project_mean) {
        const double bn = vecops::nrm2(b);
        if (std::abs(vecops::mean(b)) * std::sqrt((double)m) > 1e-12 * bn && bn > 0.0)
            throw NonZeroMean("solve_spd: rhs has nonzero mean under project_mean");
        vecops::remove_mean(b);
    }

    Vec x(m, 0.0);
    SolveReport rep;
    const double bnorm = vecops::nrm2(b);
    if (bnorm == 0.0) {
        rep.converged = true;
        return {x, rep};
    }
    const double thresh = detail::stop_threshold(bnorm, opt);
    const PrecondFn prec = detail::make_preconditioner(op, opt);

    Vec r = b; // x = 0
    Vec z(m), p(m), Ap(m);
    if (prec)
        prec(r, z);
    else
        z = r;
    if (opt.project_mean) vecops::remove_mean(z);
    p = z;
    double rz = vecops::dot(r, z);

    for (int it = 1; it <= opt.max_iter; ++it) {
        op.apply(p, Ap);
        if (opt.project_mean) vecops::remove_mean(Ap);
        const double pAp = vecops::dot(p, Ap);
        if (pAp <= 0.0) break; // lost positivity; bail out with best iterate
        const double alpha = rz / pAp;
        vecops::axpy(x, alpha, p);
        vecops::axpy(r, -alpha, Ap);
        if (opt.project_mean) vecops::remove_mean(x);
        rep.iterations = it;
        const double rn = vecops::nrm2(r);
        if (rn <= thresh) {
            rep.converged = true;
            break;
        }
        if (prec)
            prec(r, z);
        else
            z = r;
        if (opt.project_mean) vecops::remove_mean(z);
        const double rz_new = vecops::dot(r, z);
        vecops::scal(p, rz_new / rz);
        vecops::axpy(p, 1.0, z);
        rz = rz_new;
    }

    // recompute the residual certificate from scratch
    op.apply(x, Ap);
    if (opt.project_mean) vecops::remove_mean(Ap);
    for (size_t i = 0; i < m; ++i) Ap[i] = b[i] - Ap[i];
    rep.final_residual = vecops::nrm2(Ap);
    rep.converged = rep.final_residual <= thresh * (1.0 + 1e-12);
    return {x, rep};
}

namespace detail {

inline std::pair<Vec, SolveReport> bicgstab(const LinearOperator& op, const Vec& b,
                                            const Vec& x0, const SolveOptions& opt,
                                            bool& breakdown) {
    const size_t m = b.size();
    breakdown = false;
    const PrecondFn prec = make_preconditioner(op, opt);

    Vec x = x0;
    Vec r(m), Ax(m);
    op.apply(x, Ax);
    for (size_t i = 0; i < m; ++i) r[i] = b[i] - Ax[i];

    SolveReport rep;
    const double bnorm = vecops::nrm2(b);
    const double thresh = stop_threshold(bnorm, opt);
    if (vecops::nrm2(r) <= thresh) {
        rep.final_residual = vecops::nrm2(r);
        rep.converged = true;
        return {x, rep};
    }

    const Vec r0 = r;
    Vec p(m, 0.0), v(m, 0.0), s(m), t(m), ph(m), sh(m);
    double rho = 1.0, alpha = 1.0, omega = 1.0;

    for (int it = 1; it <= opt.max_iter; ++it) {
        const double rho_new = vecops::dot(r0, r);
        if (std::abs(rho_new) < 1e-300) {
            breakdown = true;
            break;
        }
        if (it == 1) {
            p = r;
        } else {
            const double beta = (rho_new / rho) * (alpha / omega);
            for (size_t i = 0; i < m; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        rho = rho_new;
        if (prec)
            prec(p, ph);
        else
            ph = p;
        op.apply(ph, v);
        const double r0v = vecops::dot(r0, v);
        if (std::abs(r0v) < 1e-300) {
            breakdown = true;
            break;
        }
        alpha = rho / r0v;
        for (size_t i = 0; i < m; ++i) s[i] = r[i] - alpha * v[i];
        rep.iterations = it;
        if (vecops::nrm2(s) <= thresh) {
            vecops::axpy(x, alpha, ph);
            r = s;
            rep.converged = true;
            break;
        }
        if (prec)
            prec(s, sh);
        else
            sh = s;
        op.apply(sh, t);
        const double tt = vecops::dot(t, t);
        if (tt < 1e-300) {
            breakdown = true;
            break;
        }
        omega = vecops::dot(t, s) / tt;
        if (std::abs(omega) < 1e-300) {
            breakdown = true;
            break;
        }
        vecops::axpy(x, alpha, ph);
        vecops::axpy(x, omega, sh);
        for (size_t i = 0; i < m; ++i) r[i] = s[i] - omega * t[i];
        if (vecops::nrm2(r) <= thresh) {
            rep.converged = true;
            break;
        }
    }

    op.apply(x, Ax);
    for (size_t i = 0; i < m; ++i) Ax[i] = b[i] - Ax[i];
    rep.final_residual = vecops::nrm2(Ax);
    rep.converged = rep.final_residual <= thresh * (1.0 + 1e-12);
    return {x, rep};
}

} // namespace detail

/// Stabilized Krylov solver (BiCGSTAB) for general invertible operators.
/// On a breakdown of the recurrence the solve restarts once from a slightly
/// perturbed start vector before giving up.
inline std::pair<Vec, SolveReport> solve_general(const LinearOperator& op, const Vec& rhs,
                                                 const SolveOptions& opt = {},
                                                 const Vec* initial_guess = nullptr) {
    const size_t m = rhs.size();
    Vec x0 = initial_guess ? *initial_guess : Vec(m, 0.0);
    bool breakdown = false;
    auto [x, rep] = detail::bicgstab(op, rhs, x0, opt, breakdown);
    if (!rep.converged && breakdown) {
        // restart once from a perturbed start
        Vec x1 = x;
        const double scale = 1e-8 * (vecops::nrm2(x1) + vecops::nrm2(rhs) + 1.0) /
                             std::sqrt((double)m);
        for (size_t i = 0; i < m; ++i) x1[i] += scale * ((i % 7) - 3.0);
        auto [x2, rep2] = detail::bicgstab(op, rhs, x1, opt, breakdown);
        rep2.iterations += rep.iterations;
        return {x2, rep2};
    }
    return {x, rep};
}

} // namespace chns
