// Second-order coupled time step for the phase-field / incompressible-flow
// system with logarithmic potential:
//
//   (u^ - u^n)/tau + b_h(u~, ubar^) + grad_h p^n - nu lap_h ubar^
//        = -gamma (A_h phi~) grad_h mu^{n+1/2} + S_u
//   (phi^{n+1} - phi^n)/tau + div_h((A_h phi~) ubar^) = lap_h mu^{n+1/2} + S_phi
//   mu^{n+1/2} = modified Crank-Nicolson potential (potential.hpp)
//   (u^{n+1} - u^)/tau + 1/2 grad_h(p^{n+1} - p^n) = 0,  div_h u^{n+1} = 0
//
// with u~ = 3/2 u^n - 1/2 u^{n-1}, phi~ = 3/2 phi^n - 1/2 phi^{n-1}, and
// ubar^ = 1/2(u^ + u^n).  One step runs an outer Picard coupling between a
// bound-preserving damped-Newton solve of the phase equation (velocity frozen)
// and the linear momentum solve (potential frozen), then projects the velocity
// through a pressure-increment Poisson solve.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "chns/discrete_ops.hpp"
#include "chns/errors.hpp"
#include "chns/field.hpp"
#include "chns/neumann_inverse.hpp"
#include "chns/operators.hpp"
#include "chns/potential.hpp"
#include "chns/solvers.hpp"
#include "chns/spectral.hpp"

namespace chns {

struct SchemeParams {
    double eps = 0.1;
    double theta0 = 3.0;
    double gamma = 1.0;
    double nu = 1.0;
    double tau = 1e-3;
    int n = 64; // cells per side, h = 1/n
    BcMode bc = BcMode::PhysicalNeumannFreeSlip;

    double newton_tol = 1e-10;  // absolute ||R||_2 target for the phase solve
    double outer_tol = 1e-10;   // relative combined update of the Picard loop
    int newton_max = 30;
    int outer_max = 50;
    double safety_fraction = 0.9; // barrier damping: worst cell moves 90% of its margin

    double krylov_tol = 1e-10; // momentum / Newton inner solves, relative
    double poisson_tol = 1e-11;
    double div_atol = 1e-10; // absolute ||div u||_inf target of the projection

    double h() const { return 1.0 / n; }

    PotentialParams potential() const {
        PotentialParams pp;
        pp.theta0 = theta0;
        pp.eps = eps;
        return pp;
    }
};

/// Optional forcing, indexed by time level n (the step t_n -> t_{n+1});
/// exact_* carry manufactured reference fields when present.
struct SourceTerms {
    std::function<CellField(int)> phase;
    std::function<MacVelocity(int)> momentum;

    std::function<CellField(double)> exact_phi;
    std::function<MacVelocity(double)> exact_u;
    std::function<CellField(double)> exact_p;

    bool has_exact() const { return static_cast<bool>(exact_phi); }
};

struct SimState {
    int n = 0;       // time level
    double t = 0.0;
    CellField phi, phi_prev;
    MacVelocity u, u_prev;
    CellField p;
    CellField mu_half; // last mu^{n-1/2}, diagnostic
    double mass0 = 0.0;
};

struct StepDiagnostics {
    int outer_iters = 0;
    std::vector<int> newton_iters_per_outer;
    int newton_iters_total = 0;
    double min_step_fraction = 1.0; // smallest Newton damping factor applied
    int damping_events = 0;
    double mass = 0.0;
    double mass_drift = 0.0;
    double phi_min = 0.0;
    double phi_max = 0.0;
    double energy = 0.0;
    double div_inf = 0.0;
    SolveReport newton_linear_report;
    SolveReport momentum_report;
    SolveReport poisson_report;
};

// -----------------------------------------------------------------------------
// Velocity degree-of-freedom packing
// -----------------------------------------------------------------------------
// Physical mode pins the wall-normal values to zero, so the unknowns are the
// interior edge values; periodic mode uses one period of each component.

namespace detail {

struct VelocityDofs {
    int n;
    BcMode mode;
    int x_ilo, x_ihi; // inclusive dof range for u^x in i
    int y_jlo, y_jhi;

    explicit VelocityDofs(int n, BcMode mode) : n(n), mode(mode) {
        if (mode == BcMode::PhysicalNeumannFreeSlip) {
            x_ilo = 1; x_ihi = n - 1;
            y_jlo = 1; y_jhi = n - 1;
        } else {
            x_ilo = 0; x_ihi = n - 1;
            y_jlo = 0; y_jhi = n - 1;
        }
    }

    size_t size() const {
        return (size_t)(x_ihi - x_ilo + 1) * n + (size_t)(y_jhi - y_jlo + 1) * n;
    }

    Vec pack(const MacVelocity& u) const {
        Vec v(size());
        size_t k = 0;
        for (int j = 0; j < n; ++j)
            for (int i = x_ilo; i <= x_ihi; ++i) v[k++] = u.x(i, j);
        for (int j = y_jlo; j <= y_jhi; ++j)
            for (int i = 0; i < n; ++i) v[k++] = u.y(i, j);
        return v;
    }

    MacVelocity unpack(const Vec& v) const {
        MacVelocity u(n);
        size_t k = 0;
        for (int j = 0; j < n; ++j)
            for (int i = x_ilo; i <= x_ihi; ++i) u.x(i, j) = v[k++];
        for (int j = y_jlo; j <= y_jhi; ++j)
            for (int i = 0; i < n; ++i) u.y(i, j) = v[k++];
        fill_ghost_velocity(u, mode); // restores wrap copies / pinned zeros too
        return u;
    }
};

} // namespace detail

// -----------------------------------------------------------------------------
// Momentum solve
// -----------------------------------------------------------------------------

/// Solve the linear momentum system for u^{n+1}^ with the potential frozen:
///   (1/tau) u^ + 1/2 b_h(u~, u^) - (nu/2) lap_h u^  =  rhs(u^n, p^n, mu, S_u)
inline std::pair<MacVelocity, SolveReport> solve_momentum(
    const MacVelocity& u_n, const MacVelocity& u_tilde, const CellField& p_n,
    const CellField& phi_tilde, const CellField& mu, const SchemeParams& sp,
    const MacVelocity* source, const MacVelocity* initial_guess = nullptr) {
    const int n = sp.n;
    const double inv_tau = 1.0 / sp.tau;
    const detail::VelocityDofs dofs(n, sp.bc);

    LinearOperator op;
    op.apply = [&dofs, &u_tilde, &sp, inv_tau](const Vec& x, Vec& y) {
        MacVelocity u = dofs.unpack(x);
        MacVelocity r = convect_velocity(u_tilde, u);
        scale(r.x, 0.5);
        scale(r.y, 0.5);
        axpy(r, inv_tau, u);
        axpy(r, -0.5 * sp.nu, lap_h(u));
        y = dofs.pack(r);
    };

    // right side: everything known moves over
    MacVelocity rhs = convect_velocity(u_tilde, u_n);
    scale(rhs.x, -0.5);
    scale(rhs.y, -0.5);
    axpy(rhs, inv_tau, u_n);
    axpy(rhs, 0.5 * sp.nu, lap_h(u_n));
    axpy(rhs, -1.0, grad_h(p_n));
    axpy(rhs, -sp.gamma, phi_grad_mu(phi_tilde, mu));
    if (source) axpy(rhs, 1.0, *source);

    SolveOptions opt;
    opt.rel_tol = sp.krylov_tol;
    opt.max_iter = 10 * n;
    Vec guess;
    if (initial_guess) guess = dofs.pack(*initial_guess);
    auto [x, rep] =
        solve_general(op, dofs.pack(rhs), opt, initial_guess ? &guess : nullptr);
    if (!rep.converged)
        throw LinearSolveFailure("momentum solve did not converge: residual " +
                                 std::to_string(rep.final_residual) + " after " +
                                 std::to_string(rep.iterations) + " iterations");
    return {dofs.unpack(x), rep};
}

// -----------------------------------------------------------------------------
// Phase solve (damped Newton with barrier)
// -----------------------------------------------------------------------------

struct ChNewtonResult {
    CellField phi;
    CellField mu;
    int iterations = 0;
    double min_step_fraction = 1.0;
    int damping_events = 0;
    SolveReport last_linear_report;
};

/// Solve the phase equation for phi^{n+1} (and mu^{n+1/2}) with the advecting
/// velocity frozen.  Newton iterates are confined to (-1,1) by scaling each
/// update so the worst cell keeps a safety fraction of its distance to +-1,
/// with residual-decrease backtracking on top.
inline ChNewtonResult solve_ch_newton(const CellField& phi_n, const CellField& phi_nm1,
                                      const MacVelocity& u_hat_frozen, const MacVelocity& u_n,
                                      const SchemeParams& sp, const CellField* source,
                                      const CellField* warm_start = nullptr) {
    const int n = sp.n;
    const double tau = sp.tau;
    const PotentialParams pp = sp.potential();

    // transport term, constant during the Newton iteration
    CellField phi_tilde = lincomb(1.5, phi_n, -0.5, phi_nm1);
    fill_ghost_scalar(phi_tilde, sp.bc);
    MacVelocity u_bar = lincomb(0.5, u_hat_frozen, 0.5, u_n);
    fill_ghost_velocity(u_bar, sp.bc);
    const CellField transport = div_phi_u(phi_tilde, u_bar);

    auto residual = [&](const CellField& phi, CellField* mu_out) {
        CellField mu = chemical_potential(phi, phi_n, phi_nm1, tau, pp, sp.bc);
        fill_ghost_scalar(mu, sp.bc);
        const CellField lap_mu = lap_h(mu);
        CellField r(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                r(i, j) = (phi(i, j) - phi_n(i, j)) / tau + transport(i, j) - lap_mu(i, j);
                if (source) r(i, j) -= (*source)(i, j);
            }
        if (mu_out) *mu_out = std::move(mu);
        return r;
    };

    ChNewtonResult res;
    CellField phi(n);
    if (warm_start) {
        phi = *warm_start;
    } else {
        phi = lincomb(2.0, phi_n, -1.0, phi_nm1);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                phi(i, j) = std::clamp(phi(i, j), -1.0 + 1e-8, 1.0 - 1e-8);
    }

    CellField r = residual(phi, nullptr);
    double rnorm = norm_l2(r);

    while (rnorm > sp.newton_tol) {
        if (res.iterations >= sp.newton_max)
            throw NewtonFailure("phase Newton did not converge", res.iterations, rnorm);

        const MuLinearization lin = chemical_potential_linearization(phi, phi_n, tau, pp);

        LinearOperator jac;
        jac.apply = [&](const Vec& x, Vec& y) {
            CellField w = unpack_cell(x, n);
            fill_ghost_scalar(w, sp.bc);
            const CellField lw = lap_h(w);
            CellField inner(n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    inner(i, j) = lin.diag(i, j) * w(i, j) + lin.lap_coeff * lw(i, j);
            fill_ghost_scalar(inner, sp.bc);
            const CellField li = lap_h(inner);
            y.resize((size_t)n * n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    y[(size_t)i + (size_t)n * j] = w(i, j) / tau - li(i, j);
        };

        const double c0 = mean_c(lin.diag); // |Omega| = 1, so this is the average
        auto precond = std::make_shared<CellSpectralInverse>(n, sp.bc, 1.0 / tau, c0,
                                                             0.75 * pp.eps * pp.eps);
        SolveOptions opt;
        opt.rel_tol = sp.krylov_tol;
        opt.max_iter = 10 * n;
        opt.preconditioner = [precond](const Vec& x, Vec& y) { precond->apply(x, y); };

        Vec neg_r((size_t)n * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) neg_r[(size_t)i + (size_t)n * j] = -r(i, j);
        auto [dx, rep] = solve_general(jac, neg_r, opt);
        res.last_linear_report = rep;
        if (!rep.converged)
            throw LinearSolveFailure("phase Newton linear solve did not converge: residual " +
                                     std::to_string(rep.final_residual));
        const CellField delta = unpack_cell(dx, n);

        // barrier scaling: the worst cell moves only safety_fraction of its margin
        double lambda = 1.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double d = delta(i, j);
                if (d > 0.0)
                    lambda = std::min(lambda, sp.safety_fraction * (1.0 - phi(i, j)) / d);
                else if (d < 0.0)
                    lambda = std::min(lambda, sp.safety_fraction * (1.0 + phi(i, j)) / (-d));
            }
        bool damped = lambda < 1.0;

        // backtrack until the residual actually decreases
        CellField phi_trial(n), r_trial(n);
        double rnorm_trial = 0.0;
        int halvings = 0;
        for (;; ++halvings) {
            phi_trial = phi;
            axpy(phi_trial, lambda, delta);
            r_trial = residual(phi_trial, nullptr);
            rnorm_trial = norm_l2(r_trial);
            if (rnorm_trial < rnorm) break;
            if (halvings >= 30)
                throw NewtonFailure("phase Newton line search stalled", res.iterations, rnorm);
            lambda *= 0.5;
            damped = true;
        }
        if (damped) ++res.damping_events;
        res.min_step_fraction = std::min(res.min_step_fraction, lambda);

        phi = std::move(phi_trial);
        r = std::move(r_trial);
        rnorm = rnorm_trial;
        ++res.iterations;
    }

    // pin the discrete mass exactly: the transport and diffusion terms are
    // conservative, so the target mean is mean(phi^n) + tau * mean(S)
    double target = mean_c(phi_n);
    if (source) target += tau * mean_c(*source);
    const double shift = target - mean_c(phi);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) phi(i, j) += shift;
    if (!(norm_linf(phi) < 1.0))
        throw NewtonFailure("phase solution left (-1,1) after mass correction",
                            res.iterations, rnorm);

    res.mu = chemical_potential(phi, phi_n, phi_nm1, tau, pp, sp.bc);
    res.phi = std::move(phi);
    return res;
}

// -----------------------------------------------------------------------------
// Pressure-correction projection
// -----------------------------------------------------------------------------

/// (tau/2) lap_h dp = div_h u^,  p^{n+1} = p^n + dp,  u^{n+1} = u^ - (tau/2) grad_h dp
inline std::tuple<MacVelocity, CellField, SolveReport> project_velocity(
    const MacVelocity& u_hat, const CellField& p_n, const SchemeParams& sp) {
    const int n = sp.n;
    const CellField div = div_h(u_hat);

    Vec b = pack_cell(div);
    vecops::scal(b, -2.0 / sp.tau); // (-lap) dp = -(2/tau) div

    SolveOptions opt;
    opt.rel_tol = sp.poisson_tol;
    opt.abs_tol = 2.0 * sp.div_atol / sp.tau; // flat-vector residual bound
    opt.max_iter = 10 * n + 200;
    opt.project_mean = true;
    auto precond = std::make_shared<CellSpectralInverse>(n, sp.bc, 0.0, 1.0, 0.0);
    opt.preconditioner = [precond](const Vec& x, Vec& y) { precond->apply(x, y); };

    auto [dp_vec, rep] = solve_spd(neg_laplacian_operator(n, sp.bc), b, opt);
    if (!rep.converged)
        throw LinearSolveFailure("projection Poisson solve did not converge: residual " +
                                 std::to_string(rep.final_residual));

    CellField dp = unpack_cell(dp_vec, n);
    fill_ghost_scalar(dp, sp.bc);

    MacVelocity u = u_hat;
    axpy(u, -0.5 * sp.tau, grad_h(dp));
    fill_ghost_velocity(u, sp.bc);

    CellField p(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) p(i, j) = p_n(i, j) + dp(i, j);
    fill_ghost_scalar(p, sp.bc);
    return {u, p, rep};
}

/// Remove the discrete divergence of a velocity field (full-strength Leray
/// projection, used for initial data).
inline MacVelocity make_divergence_free(const MacVelocity& u_in, const SchemeParams& sp) {
    const int n = sp.n;
    MacVelocity u = u_in;
    fill_ghost_velocity(u, sp.bc);
    const CellField div = div_h(u);
    if (norm_l2(div) <= 1e-13 * std::max(1.0, norm_l2(u))) return u;

    Vec b = pack_cell(div);
    vecops::scal(b, -1.0);
    SolveOptions opt;
    opt.rel_tol = sp.poisson_tol;
    opt.max_iter = 10 * n + 200;
    opt.project_mean = true;
    auto precond = std::make_shared<CellSpectralInverse>(n, sp.bc, 0.0, 1.0, 0.0);
    opt.preconditioner = [precond](const Vec& x, Vec& y) { precond->apply(x, y); };
    auto [psi_vec, rep] = solve_spd(neg_laplacian_operator(n, sp.bc), b, opt);
    if (!rep.converged)
        throw LinearSolveFailure("initial projection did not converge");

    CellField psi = unpack_cell(psi_vec, n);
    fill_ghost_scalar(psi, sp.bc);
    axpy(u, -1.0, grad_h(psi));
    fill_ghost_velocity(u, sp.bc);
    return u;
}

// -----------------------------------------------------------------------------
// Initialization and the full step
// -----------------------------------------------------------------------------

/// Pointwise chemical potential of a single field (the PDE-level mu, used for
/// the backward initialization step): N(phi) - theta0 phi - eps^2 lap_h phi.
inline CellField pointwise_mu(const CellField& phi, const SchemeParams& sp) {
    const int n = sp.n;
    CellField g = phi;
    fill_ghost_scalar(g, sp.bc);
    const CellField lap = lap_h(g);
    CellField mu(n);
    const double e2 = sp.eps * sp.eps;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            mu(i, j) = N_reg(phi(i, j)) - sp.theta0 * phi(i, j) - e2 * lap(i, j);
    return mu;
}

/// Build the two-level history the scheme needs.  With manufactured reference
/// fields, phi^{-1}, u^{-1}, p^0 come from the exact solution at t = -tau and
/// t = 0; otherwise a backward evaluation of the system provides a locally
/// second-order phi^{-1}, u^{-1}.
inline SimState init_history(const CellField& phi0, const MacVelocity& u0,
                             const SchemeParams& sp, const SourceTerms& sources = {}) {
    if (!(norm_linf(phi0) < 1.0)) throw OutOfBounds("init_history: |phi0| must be < 1");
    const int n = sp.n;
    SimState st;
    st.n = 0;
    st.t = 0.0;
    st.phi = phi0;
    fill_ghost_scalar(st.phi, sp.bc);
    st.u = make_divergence_free(u0, sp);
    st.p = CellField(n);
    st.mu_half = CellField(n);

    if (sources.has_exact()) {
        st.phi_prev = sources.exact_phi(-sp.tau);
        st.u_prev = sources.exact_u(-sp.tau);
        if (sources.exact_p) st.p = sources.exact_p(0.0);
        fill_ghost_scalar(st.phi_prev, sp.bc);
        fill_ghost_velocity(st.u_prev, sp.bc);
        fill_ghost_scalar(st.p, sp.bc);
    } else {
        const CellField mu0 = [&] {
            CellField m = pointwise_mu(st.phi, sp);
            fill_ghost_scalar(m, sp.bc);
            return m;
        }();

        // phi^{-1} = phi^0 - tau * (lap mu0 - div(phi0 u0) + S_phi)
        CellField phi_dot = lap_h(mu0);
        axpy(phi_dot, -1.0, div_phi_u(st.phi, st.u));
        if (sources.phase) axpy(phi_dot, 1.0, sources.phase(0));
        double step = sp.tau;
        int halvings = 0;
        for (;; ++halvings) {
            st.phi_prev = st.phi;
            axpy(st.phi_prev, -step, phi_dot);
            if (norm_linf(st.phi_prev) < 1.0) break;
            if (halvings >= 60)
                throw OutOfBounds("init_history: backward phase step cannot stay in (-1,1)");
            step *= 0.5;
        }
        fill_ghost_scalar(st.phi_prev, sp.bc);

        // u^{-1} = u^0 - tau * (-b_h(u0,u0) - grad p0 + nu lap u0 - gamma phi0 grad mu0 + S_u)
        MacVelocity u_dot = convect_velocity(st.u, st.u);
        scale(u_dot.x, -1.0);
        scale(u_dot.y, -1.0);
        axpy(u_dot, sp.nu, lap_h(st.u));
        axpy(u_dot, -sp.gamma, phi_grad_mu(st.phi, mu0));
        if (sources.momentum) axpy(u_dot, 1.0, sources.momentum(0));
        MacVelocity um = st.u;
        axpy(um, -sp.tau, u_dot);
        st.u_prev = make_divergence_free(um, sp);
    }

    st.mass0 = mean_c(st.phi);
    return st;
}

/// One full time step t_n -> t_{n+1}.
inline std::pair<SimState, StepDiagnostics> step(const SimState& state, const SchemeParams& sp,
                                                 const SourceTerms& sources = {}) {
    const int n = sp.n;
    if (!(norm_linf(state.phi) < 1.0) || !(norm_linf(state.phi_prev) < 1.0))
        throw OutOfBounds("step: phase history must satisfy |phi| < 1");

    CellField phi_tilde = lincomb(1.5, state.phi, -0.5, state.phi_prev);
    fill_ghost_scalar(phi_tilde, sp.bc);
    MacVelocity u_tilde = lincomb(1.5, state.u, -0.5, state.u_prev);
    fill_ghost_velocity(u_tilde, sp.bc);

    CellField s_phi;
    MacVelocity s_u;
    const bool have_sphi = static_cast<bool>(sources.phase);
    const bool have_su = static_cast<bool>(sources.momentum);
    if (have_sphi) s_phi = sources.phase(state.n);
    if (have_su) s_u = sources.momentum(state.n);

    StepDiagnostics diag;

    // outer Picard coupling
    MacVelocity u_hat = u_tilde;
    CellField phi_next = lincomb(2.0, state.phi, -1.0, state.phi_prev);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            phi_next(i, j) = std::clamp(phi_next(i, j), -1.0 + 1e-8, 1.0 - 1e-8);

    CellField mu(n);
    bool coupled = false;
    double last_update = 0.0;
    for (int pass = 1; pass <= sp.outer_max; ++pass) {
        ChNewtonResult ch = solve_ch_newton(state.phi, state.phi_prev, u_hat, state.u, sp,
                                            have_sphi ? &s_phi : nullptr, &phi_next);
        auto [u_new, mom_rep] =
            solve_momentum(state.u, u_tilde, state.p, phi_tilde, ch.mu, sp,
                           have_su ? &s_u : nullptr, &u_hat);

        diag.outer_iters = pass;
        diag.newton_iters_per_outer.push_back(ch.iterations);
        diag.newton_iters_total += ch.iterations;
        diag.min_step_fraction = std::min(diag.min_step_fraction, ch.min_step_fraction);
        diag.damping_events += ch.damping_events;
        diag.newton_linear_report = ch.last_linear_report;
        diag.momentum_report = mom_rep;

        const MacVelocity du = lincomb(1.0, u_new, -1.0, u_hat);
        const CellField dphi = lincomb(1.0, ch.phi, -1.0, phi_next);
        const double update = norm_l2(du) + norm_l2(dphi);
        const double scale_ref = norm_l2(u_new) + norm_l2(ch.phi) + 1e-30;
        last_update = update;

        u_hat = u_new;
        phi_next = ch.phi;
        fill_ghost_scalar(phi_next, sp.bc);
        mu = std::move(ch.mu);

        if (update <= sp.outer_tol * std::max(scale_ref, 1.0)) {
            coupled = true;
            break;
        }
    }
    if (!coupled)
        throw OuterNoConvergence("outer momentum/phase coupling did not contract",
                                 diag.outer_iters, last_update);

    auto [u_next, p_next, poisson_rep] = project_velocity(u_hat, state.p, sp);
    diag.poisson_report = poisson_rep;

    if (!(norm_linf(phi_next) < 1.0))
        throw Error("positivity breach after accepted step"); // cannot happen; damping bounds iterates

    SimState next;
    next.n = state.n + 1;
    next.t = state.t + sp.tau;
    next.phi = phi_next;
    next.phi_prev = state.phi;
    next.u = u_next;
    next.u_prev = state.u;
    next.p = p_next;
    next.mu_half = mu;
    next.mass0 = state.mass0;
    fill_ghost_scalar(next.phi, sp.bc);
    fill_ghost_scalar(next.mu_half, sp.bc);

    diag.mass = mean_c(next.phi);
    diag.mass_drift = diag.mass - state.mass0;
    diag.phi_min = 1.0;
    diag.phi_max = -1.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            diag.phi_min = std::min(diag.phi_min, next.phi(i, j));
            diag.phi_max = std::max(diag.phi_max, next.phi(i, j));
        }
    diag.energy = total_energy(next.phi, next.u, sp.eps, sp.theta0, sp.gamma, sp.bc);
    diag.div_inf = norm_linf(div_h(next.u));
    return {std::move(next), std::move(diag)};
}

} // namespace chns
