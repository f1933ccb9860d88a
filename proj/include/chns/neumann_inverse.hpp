// Inverse of the Neumann/periodic Laplacian on mean-free cell fields, and the
// ||.||_{-1,h} norm built from it.

#pragma once

#include <cmath>
#include <utility>

#include "chns/errors.hpp"
#include "chns/field.hpp"
#include "chns/operators.hpp"
#include "chns/solvers.hpp"

namespace chns {

inline Vec pack_cell(const CellField& f) {
    const int n = f.n();
    Vec v((size_t)n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) v[(size_t)i + (size_t)n * j] = f(i, j);
    return v;
}

inline CellField unpack_cell(const Vec& v, int n) {
    CellField f(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) f(i, j) = v[(size_t)i + (size_t)n * j];
    return f;
}

/// Matrix-free (-lap_h) with the ghost closure of the given mode.
inline LinearOperator neg_laplacian_operator(int n, BcMode mode) {
    LinearOperator op;
    op.symmetric = true;
    op.apply = [n, mode](const Vec& x, Vec& y) {
        CellField f = unpack_cell(x, n);
        fill_ghost_scalar(f, mode);
        const CellField lf = lap_h(f);
        y.resize((size_t)n * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) y[(size_t)i + (size_t)n * j] = -lf(i, j);
    };
    return op;
}

/// Solve -lap_h psi = f for the mean-free psi.  Requires mean_c(f) = 0 within
/// 1e-12 * ||f||_2; throws NonZeroMean otherwise, NoConvergence past the cap.
inline std::pair<CellField, SolveReport> inv_neumann_laplacian(
    const CellField& f, double tol = 1e-11, BcMode mode = BcMode::PhysicalNeumannFreeSlip,
    int max_iter = -1) {
    const int n = f.n();
    if (std::abs(mean_c(f)) > 1e-12 * norm_l2(f))
        throw NonZeroMean("inv_neumann_laplacian: rhs mean is not zero");

    SolveOptions opt;
    opt.rel_tol = tol;
    opt.project_mean = true;
    opt.max_iter = max_iter > 0 ? max_iter : 20 * n + 200;
    auto [v, rep] = solve_spd(neg_laplacian_operator(n, mode), pack_cell(f), opt);
    if (!rep.converged)
        throw NoConvergence("inv_neumann_laplacian: CG did not converge", rep.iterations,
                            rep.final_residual);
    return {unpack_cell(v, n), rep};
}

/// || f ||_{-1,h} = sqrt(<f, (-lap_h)^{-1} f>_c) on mean-free f.
inline double norm_minus1(const CellField& f, double tol = 1e-11,
                          BcMode mode = BcMode::PhysicalNeumannFreeSlip) {
    if (norm_l2(f) == 0.0) return 0.0;
    auto [psi, rep] = inv_neumann_laplacian(f, tol, mode);
    const double q = inner_c(f, psi);
    return std::sqrt(std::max(q, 0.0));
}

} // namespace chns
