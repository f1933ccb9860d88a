// Staggered-grid field storage on the unit square with h = 1/n.
//
// Layout (MAC grid):
//   - CellField   f(i,j): cell centers ((i+1/2)h, (j+1/2)h), interior 0 <= i,j < n
//   - EdgeFieldX  f(i,j): east-west points (ih, (j+1/2)h),   interior 0 <= i <= n, 0 <= j < n
//   - EdgeFieldY  f(i,j): north-south points ((i+1/2)h, jh), interior 0 <= i < n, 0 <= j <= n
//   - NodeField   f(i,j): corners (ih, jh),                  0 <= i,j <= n (no ghosts)
//
// Every ghosted field carries one ghost layer per side, stored inline, so the
// accessor accepts index -1 and interior_max+1.  Stencil kernels read ghosts and
// never branch on boundary indices.
//
// Ghost conventions (fill_ghost):
//   scalar, Neumann    : mirror across the wall  (f(-1,j) = f(0,j), ...)
//   scalar, periodic   : wrap
//   velocity, physical : normal component zero on the wall, odd extension beyond
//                        it (so the long-stencil one-sided boundary formulas hold),
//                        even mirror in the tangential direction (free slip)
//   velocity, periodic : wrap; the duplicated column/row (i = n for x, j = n for y)
//                        is refreshed from index 0

#pragma once

#include <cassert>
#include <cstddef>
#include <type_traits>
#include <vector>

namespace chns {

enum class BcMode {
    PhysicalNeumannFreeSlip, // no-flux scalars, no-penetration / free-slip velocity
    Periodic
};

namespace detail {

// Rectangular array with a one-cell ghost frame; logical indices
// [-1, ni] x [-1, nj] where the interior is [0, ni) x [0, nj).
class GhostArray {
public:
    GhostArray() = default;
    GhostArray(int ni, int nj) : ni_(ni), nj_(nj), v_((ni + 2) * (size_t)(nj + 2), 0.0) {}

    double& at(int i, int j) {
        assert(i >= -1 && i <= ni_ && j >= -1 && j <= nj_);
        return v_[(size_t)(i + 1) + (size_t)(ni_ + 2) * (size_t)(j + 1)];
    }
    double at(int i, int j) const {
        assert(i >= -1 && i <= ni_ && j >= -1 && j <= nj_);
        return v_[(size_t)(i + 1) + (size_t)(ni_ + 2) * (size_t)(j + 1)];
    }

    int ni() const { return ni_; }
    int nj() const { return nj_; }
    std::vector<double>& raw() { return v_; }
    const std::vector<double>& raw() const { return v_; }

private:
    int ni_ = 0, nj_ = 0;
    std::vector<double> v_;
};

} // namespace detail

// -----------------------------------------------------------------------------
// CellField
// -----------------------------------------------------------------------------

class CellField {
public:
    CellField() = default;
    explicit CellField(int n) : n_(n), a_(n, n) {}

    int n() const { return n_; }
    double h() const { return 1.0 / n_; }

    double& operator()(int i, int j) { return a_.at(i, j); }
    double operator()(int i, int j) const { return a_.at(i, j); }

    double x(int i) const { return (i + 0.5) * h(); }
    double y(int j) const { return (j + 0.5) * h(); }

private:
    int n_ = 0;
    detail::GhostArray a_;
};

// -----------------------------------------------------------------------------
// Edge fields
// -----------------------------------------------------------------------------

// x-component carrier: values live at (ih, (j+1/2)h), i in [0,n], j in [0,n).
// Accessor range i in [-1, n+1], j in [-1, n].
class EdgeFieldX {
public:
    EdgeFieldX() = default;
    explicit EdgeFieldX(int n) : n_(n), a_(n + 1, n) {}

    int n() const { return n_; }
    double h() const { return 1.0 / n_; }

    double& operator()(int i, int j) { return a_.at(i, j); }
    double operator()(int i, int j) const { return a_.at(i, j); }

    double x(int i) const { return i * h(); }
    double y(int j) const { return (j + 0.5) * h(); }

private:
    int n_ = 0;
    detail::GhostArray a_;
};

// y-component carrier: values live at ((i+1/2)h, jh), i in [0,n), j in [0,n].
class EdgeFieldY {
public:
    EdgeFieldY() = default;
    explicit EdgeFieldY(int n) : n_(n), a_(n, n + 1) {}

    int n() const { return n_; }
    double h() const { return 1.0 / n_; }

    double& operator()(int i, int j) { return a_.at(i, j); }
    double operator()(int i, int j) const { return a_.at(i, j); }

    double x(int i) const { return (i + 0.5) * h(); }
    double y(int j) const { return j * h(); }

private:
    int n_ = 0;
    detail::GhostArray a_;
};

// Corner values, norm bookkeeping only. No ghost frame.
class NodeField {
public:
    NodeField() = default;
    explicit NodeField(int n) : n_(n), v_((n + 1) * (size_t)(n + 1), 0.0) {}

    int n() const { return n_; }
    double h() const { return 1.0 / n_; }

    double& operator()(int i, int j) {
        assert(i >= 0 && i <= n_ && j >= 0 && j <= n_);
        return v_[(size_t)i + (size_t)(n_ + 1) * (size_t)j];
    }
    double operator()(int i, int j) const {
        assert(i >= 0 && i <= n_ && j >= 0 && j <= n_);
        return v_[(size_t)i + (size_t)(n_ + 1) * (size_t)j];
    }

private:
    int n_ = 0;
    std::vector<double> v_;
};

struct MacVelocity {
    MacVelocity() = default;
    explicit MacVelocity(int n) : x(n), y(n) {}

    int n() const { return x.n(); }
    EdgeFieldX x;
    EdgeFieldY y;
};

// -----------------------------------------------------------------------------
// Ghost fills
// -----------------------------------------------------------------------------

inline void fill_ghost_scalar(CellField& f, BcMode mode) {
    const int n = f.n();
    if (mode == BcMode::PhysicalNeumannFreeSlip) {
        for (int j = 0; j < n; ++j) {
            f(-1, j) = f(0, j);
            f(n, j) = f(n - 1, j);
        }
        for (int i = -1; i <= n; ++i) {
            f(i, -1) = f(i, 0);
            f(i, n) = f(i, n - 1);
        }
    } else {
        for (int j = 0; j < n; ++j) {
            f(-1, j) = f(n - 1, j);
            f(n, j) = f(0, j);
        }
        for (int i = -1; i <= n; ++i) {
            f(i, -1) = f(i, n - 1);
            f(i, n) = f(i, 0);
        }
    }
}

inline void fill_ghost_edge_x(EdgeFieldX& f, BcMode mode) {
    const int n = f.n();
    if (mode == BcMode::PhysicalNeumannFreeSlip) {
        // no-penetration on the walls x = 0, 1
        for (int j = 0; j < n; ++j) {
            f(0, j) = 0.0;
            f(n, j) = 0.0;
        }
        // free-slip mirror in y
        for (int i = 0; i <= n; ++i) {
            f(i, -1) = f(i, 0);
            f(i, n) = f(i, n - 1);
        }
        // odd extension in x, ghost rows included
        for (int j = -1; j <= n; ++j) {
            f(-1, j) = -f(1, j);
            f(n + 1, j) = -f(n - 1, j);
        }
    } else {
        for (int j = 0; j < n; ++j) {
            f(n, j) = f(0, j);
            f(-1, j) = f(n - 1, j);
            f(n + 1, j) = f(1, j);
        }
        for (int i = -1; i <= n + 1; ++i) {
            f(i, -1) = f(i, n - 1);
            f(i, n) = f(i, 0);
        }
    }
}

inline void fill_ghost_edge_y(EdgeFieldY& f, BcMode mode) {
    const int n = f.n();
    if (mode == BcMode::PhysicalNeumannFreeSlip) {
        for (int i = 0; i < n; ++i) {
            f(i, 0) = 0.0;
            f(i, n) = 0.0;
        }
        for (int j = 0; j <= n; ++j) {
            f(-1, j) = f(0, j);
            f(n, j) = f(n - 1, j);
        }
        for (int i = -1; i <= n; ++i) {
            f(i, -1) = -f(i, 1);
            f(i, n + 1) = -f(i, n - 1);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            f(i, n) = f(i, 0);
            f(i, -1) = f(i, n - 1);
            f(i, n + 1) = f(i, 1);
        }
        for (int j = -1; j <= n + 1; ++j) {
            f(-1, j) = f(n - 1, j);
            f(n, j) = f(0, j);
        }
    }
}

inline void fill_ghost_velocity(MacVelocity& u, BcMode mode) {
    fill_ghost_edge_x(u.x, mode);
    fill_ghost_edge_y(u.y, mode);
}

// -----------------------------------------------------------------------------
// Elementwise helpers (interior + ghosts, so products of filled fields keep
// well-defined ghost values)
// -----------------------------------------------------------------------------

namespace detail {

template <class T>
inline constexpr bool is_grid_field =
    std::is_same_v<T, CellField> || std::is_same_v<T, EdgeFieldX> || std::is_same_v<T, EdgeFieldY>;

inline int storage_imax(const CellField& f) { return f.n(); }
inline int storage_jmax(const CellField& f) { return f.n(); }
inline int storage_imax(const EdgeFieldX& f) { return f.n() + 1; }
inline int storage_jmax(const EdgeFieldX& f) { return f.n(); }
inline int storage_imax(const EdgeFieldY& f) { return f.n(); }
inline int storage_jmax(const EdgeFieldY& f) { return f.n() + 1; }

template <class F, class Fn>
void for_all_storage(const F& f, Fn&& fn) {
    const int imax = storage_imax(f), jmax = storage_jmax(f);
    for (int j = -1; j <= jmax; ++j)
        for (int i = -1; i <= imax; ++i) fn(i, j);
}

} // namespace detail

template <class FieldT, class = std::enable_if_t<detail::is_grid_field<FieldT>>>
FieldT operator*(const FieldT& a, const FieldT& b) {
    FieldT r(a.n());
    detail::for_all_storage(r, [&](int i, int j) { r(i, j) = a(i, j) * b(i, j); });
    return r;
}

template <class FieldT, class = std::enable_if_t<detail::is_grid_field<FieldT>>>
FieldT lincomb(double ca, const FieldT& a, double cb, const FieldT& b) {
    FieldT r(a.n());
    detail::for_all_storage(r, [&](int i, int j) { r(i, j) = ca * a(i, j) + cb * b(i, j); });
    return r;
}

template <class FieldT, class = std::enable_if_t<detail::is_grid_field<FieldT>>>
void axpy(FieldT& y, double c, const FieldT& x) {
    detail::for_all_storage(y, [&](int i, int j) { y(i, j) += c * x(i, j); });
}

template <class FieldT, class = std::enable_if_t<detail::is_grid_field<FieldT>>>
void scale(FieldT& y, double c) {
    detail::for_all_storage(y, [&](int i, int j) { y(i, j) *= c; });
}

inline MacVelocity lincomb(double ca, const MacVelocity& a, double cb, const MacVelocity& b) {
    MacVelocity r;
    r.x = lincomb(ca, a.x, cb, b.x);
    r.y = lincomb(ca, a.y, cb, b.y);
    return r;
}

inline void axpy(MacVelocity& y, double c, const MacVelocity& x) {
    axpy(y.x, c, x.x);
    axpy(y.y, c, x.y);
}

} // namespace chns
