// Shared helpers for the test suites: deterministic random fields compatible
// with each boundary mode, and brute-force oracles that re-evaluate the stencil
// formulas index by index (independent of the operator kernels).

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "chns/field.hpp"
#include "chns/operators.hpp"

namespace chns::testing {

// deterministic uniform(-1,1); avoids std::uniform_real_distribution so the
// stream is identical across standard libraries
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}
    double uniform() { return 2.0 * ((eng_() >> 11) * 0x1.0p-53) - 1.0; }

private:
    std::mt19937_64 eng_;
};

inline CellField random_cell(int n, Rng& rng, BcMode mode) {
    CellField f(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) f(i, j) = rng.uniform();
    fill_ghost_scalar(f, mode);
    return f;
}

inline CellField random_cell_mean_zero(int n, Rng& rng, BcMode mode) {
    CellField f = random_cell(n, rng, mode);
    const double m = mean_c(f); // |Omega| = 1, so subtracting the mean value works
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) f(i, j) -= m;
    fill_ghost_scalar(f, mode);
    return f;
}

/// Random velocity compatible with the mode's boundary conditions (wall-normal
/// values zero in physical mode; one free period in periodic mode).
inline MacVelocity random_velocity(int n, Rng& rng, BcMode mode) {
    MacVelocity u(n);
    const bool phys = (mode == BcMode::PhysicalNeumannFreeSlip);
    for (int j = 0; j < n; ++j)
        for (int i = phys ? 1 : 0; i <= n - 1; ++i) u.x(i, j) = rng.uniform();
    for (int j = phys ? 1 : 0; j <= n - 1; ++j)
        for (int i = 0; i < n; ++i) u.y(i, j) = rng.uniform();
    fill_ghost_velocity(u, mode);
    return u;
}

/// Exactly divergence-free random velocity from a node stream function.
inline MacVelocity random_divfree_velocity(int n, Rng& rng, BcMode mode) {
    const double h = 1.0 / n;
    NodeField psi(n);
    if (mode == BcMode::PhysicalNeumannFreeSlip) {
        for (int j = 1; j < n; ++j)
            for (int i = 1; i < n; ++i) psi(i, j) = rng.uniform();
        // boundary nodes stay zero -> no-penetration holds exactly
    } else {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) psi(i, j) = rng.uniform();
        for (int j = 0; j < n; ++j) psi(n, j) = psi(0, j);
        for (int i = 0; i <= n; ++i) psi(i, n) = psi(i, 0);
    }
    MacVelocity u(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) u.x(i, j) = -(psi(i, j + 1) - psi(i, j)) / h;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) u.y(i, j) = (psi(i + 1, j) - psi(i, j)) / h;
    fill_ghost_velocity(u, mode);
    return u;
}

inline double rel_err(double got, double want, double scale = 1.0) {
    return std::abs(got - want) / std::max({std::abs(want), std::abs(scale), 1e-300});
}

// -----------------------------------------------------------------------------
// Index-by-index oracles (direct transcription of the cited formulas)
// -----------------------------------------------------------------------------

namespace oracle {

// max |op(f) - direct formula| over the given index box
template <class Out, class Eval>
double max_dev(const Out& out, int ilo, int ihi, int jlo, int jhi, Eval&& eval) {
    double m = 0.0;
    for (int j = jlo; j <= jhi; ++j)
        for (int i = ilo; i <= ihi; ++i) m = std::max(m, std::abs(out(i, j) - eval(i, j)));
    return m;
}

} // namespace oracle

} // namespace chns::testing
